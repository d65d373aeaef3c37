//! Truncated q-expansions with exact integer coefficients and the
//! echelonised (Miller) basis of level-1 cusp forms.

use std::ops::{Add, Mul, Sub};

use rug::{Assign, Integer};

use crate::arith::sigma;
use crate::error::{Error, Result};

/// `Σ_{n < prec} coeffs[n] q^n`, known modulo `q^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    /// Weight of the form, or 0 for a generic series.
    pub weight: u32,
    coeffs: Vec<Integer>,
}

impl QExpansion {
    pub fn new(weight: u32, coeffs: Vec<Integer>) -> Self {
        QExpansion { weight, coeffs }
    }

    pub fn from_i64(weight: u32, coeffs: &[i64]) -> Self {
        QExpansion::new(weight, coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn one(prec: usize) -> Self {
        let mut coeffs = vec![Integer::new(); prec];
        if let Some(c) = coeffs.first_mut() {
            c.assign(1);
        }
        QExpansion { weight: 0, coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; errors past the known precision.
    pub fn coeff(&self, n: usize) -> Result<&Integer> {
        self.coeffs.get(n).ok_or(Error::Precision {
            required: n + 1,
            available: self.prec(),
        })
    }

    pub fn truncate(&self, prec: usize) -> Self {
        QExpansion {
            weight: self.weight,
            coeffs: self.coeffs[..prec.min(self.prec())].to_vec(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let weight = self.weight * e;
        let mut acc = QExpansion::one(self.prec());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc.with_weight(weight)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Integer) -> Self {
        QExpansion {
            weight: self.weight,
            coeffs: self.coeffs.iter().map(|x| Integer::from(x * c)).collect(),
        }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_exact(&self, c: &Integer) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.prec());
        for (n, x) in self.coeffs.iter().enumerate() {
            if !x.is_divisible(c) {
                return Err(Error::Consistency(format!(
                    "coefficient {n} ({x}) is not divisible by {c}"
                )));
            }
            coeffs.push(Integer::from(x.div_exact_ref(c)));
        }
        Ok(QExpansion {
            weight: self.weight,
            coeffs,
        })
    }

    fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }
}

impl Add for &QExpansion {
    type Output = QExpansion;
    fn add(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        QExpansion {
            weight: if self.weight == rhs.weight { self.weight } else { 0 },
            coeffs: (0..prec)
                .map(|i| Integer::from(&self.coeffs[i] + &rhs.coeffs[i]))
                .collect(),
        }
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;
    fn sub(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        QExpansion {
            weight: if self.weight == rhs.weight { self.weight } else { 0 },
            coeffs: (0..prec)
                .map(|i| Integer::from(&self.coeffs[i] - &rhs.coeffs[i]))
                .collect(),
        }
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        let prec = self.prec().min(rhs.prec());
        let mut coeffs = vec![Integer::new(); prec];
        let mut t = Integer::new();
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(prec - i).enumerate() {
                t.assign(a * b);
                coeffs[i + j] += &t;
            }
        }
        QExpansion {
            weight: self.weight + rhs.weight,
            coeffs,
        }
    }
}

/// `E_4` or `E_6` to `prec` coefficients.
pub fn eisenstein_series(weight: u32, prec: usize) -> Result<QExpansion> {
    let (c, e) = match weight {
        4 => (240i64, 3u32),
        6 => (-504i64, 5u32),
        _ => {
            return Err(Error::invalid(format!(
                "Eisenstein series only for weight 4 or 6, got {weight}"
            )))
        }
    };
    if prec == 0 {
        return Err(Error::invalid("precision must be >= 1"));
    }
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(Integer::from(1));
    for n in 1..prec as u64 {
        coeffs.push(Integer::from(sigma(n, e)) * c);
    }
    Ok(QExpansion::new(weight, coeffs))
}

/// `Δ = (E_4^3 - E_6^2) / 1728`.
pub fn delta(prec: usize) -> Result<QExpansion> {
    let e4 = eisenstein_series(4, prec)?;
    let e6 = eisenstein_series(6, prec)?;
    let num = &(&(&e4 * &e4) * &e4) - &(&e6 * &e6);
    Ok(num.div_exact(&Integer::from(1728))?.with_weight(12))
}

/// Dimension of `S_k(SL2(Z))`.
pub fn dim_cusp_forms(k: u32) -> Result<usize> {
    if k % 2 == 1 {
        return Err(Error::invalid(format!("weight must be even, got {k}")));
    }
    if k < 12 || k == 14 {
        return Ok(0);
    }
    let base = (k / 12) as usize;
    Ok(if k % 12 == 2 { base - 1 } else { base })
}

/// Echelonised integral basis: form `i` is `q^{i+1} + O(q^{d+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspBasis {
    pub weight: u32,
    pub prec: usize,
    pub forms: Vec<QExpansion>,
}

impl CuspBasis {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }
}

pub fn miller_basis(k: u32, prec: usize) -> Result<CuspBasis> {
    let d = dim_cusp_forms(k)?;
    if d == 0 {
        return Ok(CuspBasis {
            weight: k,
            prec,
            forms: Vec::new(),
        });
    }
    if prec < d + 1 {
        return Err(Error::Precision {
            required: d + 1,
            available: prec,
        });
    }
    let e4 = eisenstein_series(4, prec)?;
    let e6 = eisenstein_series(6, prec)?;
    let delta = delta(prec)?;

    let mut forms = Vec::with_capacity(d);
    let mut delta_pow = delta.clone();
    for j in 1..=d as u32 {
        let rest = k - 12 * j;
        // 4a + 6b = rest with b minimal: b = 0 if rest ≡ 0 (mod 4), else b = 1.
        let b = if rest % 4 == 0 { 0 } else { 1 };
        let a = (rest - 6 * b) / 4;
        let mut f = &delta_pow * &e4.pow(a);
        if b == 1 {
            f = &f * &e6;
        }
        forms.push(f.with_weight(k));
        if j < d as u32 {
            delta_pow = &delta_pow * &delta;
        }
    }

    // Clear coefficient j+1 of form i using form j, from the bottom up.
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = forms[i].coeffs[j + 1].clone();
            if c.is_zero() {
                continue;
            }
            let sub = forms[j].scale(&c);
            forms[i] = (&forms[i] - &sub).with_weight(k);
        }
    }
    Ok(CuspBasis {
        weight: k,
        prec,
        forms,
    })
}
