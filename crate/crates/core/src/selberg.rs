//! Beurling–Selberg majorants and minorants of intervals on the circle.
//!
//! The construction follows Vaaler: the sawtooth `ψ(x) = x - ⌊x⌋ - 1/2`
//! is approximated by the degree-`M` polynomial with Fourier coefficients
//! `-J(|m|/(M+1)) / (2πim)`, whose error is bounded by the Fejér kernel
//! `Δ_{M+1}(x) / (2M+2)`. Writing `χ_[α,β](x) = β - α + ψ(α - x) + ψ(x - β)`
//! and adding or subtracting the two kernel bounds gives the pair.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `[alpha, beta] ⊆ [0, 1/2]` on `R/Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusInterval {
    pub alpha: f64,
    pub beta: f64,
}

impl TorusInterval {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0 <= alpha && alpha <= beta && beta <= 0.5) {
            return Err(Error::invalid(format!(
                "torus interval needs 0 <= alpha <= beta <= 1/2, got [{alpha}, {beta}]"
            )));
        }
        Ok(TorusInterval { alpha, beta })
    }

    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Indicator of the closed interval, evaluated on `R/Z`.
    pub fn contains(&self, x: f64) -> bool {
        let r = x - x.floor();
        self.alpha <= r && r <= self.beta
    }
}

/// The interval `I_1 ⊆ [0, 1/2]` with `θ ∈ I_1 ⟺ 2cos(2πθ) ∈ [a, b]`.
pub fn map_interval(a: f64, b: f64) -> Result<TorusInterval> {
    if !(-2.0 <= a && a <= b && b <= 2.0) {
        return Err(Error::invalid(format!(
            "interval [{a}, {b}] is not inside [-2, 2]"
        )));
    }
    let alpha = (b / 2.0).acos() / (2.0 * PI);
    let beta = (a / 2.0).acos() / (2.0 * PI);
    TorusInterval::new(alpha, beta.max(alpha))
}

/// `e(x) = exp(2πix)`.
fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Fourier coefficient of the indicator of `interval`.
pub fn indicator_fourier(interval: &TorusInterval, m: i64) -> Complex64 {
    if m == 0 {
        return Complex64::new(interval.length(), 0.0);
    }
    let mf = m as f64;
    (e(-mf * interval.alpha) - e(-mf * interval.beta)) / Complex64::new(0.0, 2.0 * PI * mf)
}

/// Vaaler's taper `J(t) = πt(1-t)cot(πt) + t` on `[0, 1)`, with `J(0) = 1`.
pub fn vaaler_taper(t: f64) -> f64 {
    if t < 1e-4 {
        // πt cot(πt) = 1 - (πt)^2/3 - (πt)^4/45 - ...
        let u = (PI * t).powi(2);
        let pt_cot = 1.0 - u / 3.0 - u * u / 45.0;
        return pt_cot * (1.0 - t) + t;
    }
    PI * t * (1.0 - t) / (PI * t).tan() + t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Majorant and minorant of one interval at degree `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelbergPair {
    pub interval: TorusInterval,
    pub m: usize,
    /// `plus[m]` is the coefficient at frequency `m >= 0`; negative
    /// frequencies are conjugates.
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
}

pub fn selberg_pair(interval: TorusInterval, m: usize) -> Result<SelbergPair> {
    if m < 3 {
        return Err(Error::invalid(format!("degree M must be >= 3, got {m}")));
    }
    let big = (m + 1) as f64;
    let mut plus = Vec::with_capacity(m + 1);
    let mut minus = Vec::with_capacity(m + 1);
    plus.push(Complex64::new(interval.length() + 1.0 / big, 0.0));
    minus.push(Complex64::new(interval.length() - 1.0 / big, 0.0));
    for n in 1..=m {
        let nf = n as f64;
        let main = indicator_fourier(&interval, n as i64) * vaaler_taper(nf / big);
        let kernel = (e(-nf * interval.alpha) + e(-nf * interval.beta)) * ((1.0 - nf / big) / (2.0 * big));
        plus.push(main + kernel);
        minus.push(main - kernel);
    }
    Ok(SelbergPair {
        interval,
        m,
        plus,
        minus,
    })
}

impl SelbergPair {
    fn coeffs(&self, sign: Sign) -> &[Complex64] {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    /// `Ŝ±(m)` for `|m| <= M`.
    pub fn coeff(&self, sign: Sign, m: i64) -> Result<Complex64> {
        let idx = m.unsigned_abs() as usize;
        if idx > self.m {
            return Err(Error::invalid(format!("frequency {m} outside [-{0}, {0}]", self.m)));
        }
        let c = self.coeffs(sign)[idx];
        Ok(if m < 0 { c.conj() } else { c })
    }

    /// `Ŝ±(m) + Ŝ±(-m)` for `0 <= m <= M`.
    pub fn symmetrized_coeff(&self, sign: Sign, m: usize) -> Result<f64> {
        if m > self.m {
            return Err(Error::invalid(format!("m = {m} exceeds M = {}", self.m)));
        }
        Ok(2.0 * self.coeffs(sign)[m].re)
    }

    /// `U±(m)`: `Ŝ(m) - Ŝ(m+2)` for `m <= M-2`, else `Ŝ(m)` (symmetrised).
    pub fn u_coeff(&self, sign: Sign, m: usize) -> Result<f64> {
        if m == 0 || m > self.m {
            return Err(Error::invalid(format!("U(m) needs 1 <= m <= {}, got {m}", self.m)));
        }
        let s = self.symmetrized_coeff(sign, m)?;
        if m + 2 <= self.m {
            Ok(s - self.symmetrized_coeff(sign, m + 2)?)
        } else {
            Ok(s)
        }
    }

    /// `[U(1), ..., U(M)]`.
    pub fn u_coeffs(&self, sign: Sign) -> Vec<f64> {
        (1..=self.m)
            .map(|m| self.u_coeff(sign, m).expect("index in range"))
            .collect()
    }

    /// `Σ_{|m| <= M} Ŝ±(m) e(mx)`.
    pub fn evaluate(&self, sign: Sign, x: f64) -> Result<f64> {
        let c = self.coeffs(sign);
        let mut sum = c[0];
        for (n, cn) in c.iter().enumerate().skip(1) {
            let w = e(n as f64 * x);
            sum += cn * w + cn.conj() * w.conj();
        }
        check_real(sum)
    }

    /// Values at `x = j / n` for `0 <= j < n`, with phases reduced exactly mod 1.
    pub fn evaluate_grid(&self, sign: Sign, n: usize) -> Result<Vec<f64>> {
        let c = self.coeffs(sign);
        let roots: Vec<Complex64> = (0..n).map(|r| e(r as f64 / n as f64)).collect();
        (0..n)
            .map(|j| {
                let mut sum = c[0];
                for (m, cm) in c.iter().enumerate().skip(1) {
                    let w = roots[(m * j) % n];
                    sum += cm * w + cm.conj() * w.conj();
                }
                check_real(sum)
            })
            .collect()
    }
}

/// Measured margins of the majorant/minorant contract on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractReport {
    pub m: usize,
    /// `min (S⁺ - χ)` over the grid.
    pub dominance_plus: f64,
    /// `min (χ - S⁻)` over the grid.
    pub dominance_minus: f64,
    /// `|∫S± - (β - α ± 1/(M+1))|`, the integral taken as the grid mean
    /// (exact for trigonometric polynomials of degree below the grid size).
    pub integral_error: f64,
    /// `max_{1 <= |m| <= M} |Ŝ±(m) - χ̂(m)| - 1/(M+1)`.
    pub coeff_excess: f64,
}

impl ContractReport {
    pub fn passes(&self, slack: f64) -> bool {
        self.dominance_plus >= -slack
            && self.dominance_minus >= -slack
            && self.integral_error <= slack
            && self.coeff_excess <= slack
    }
}

/// Checks dominance on `grid` equally spaced points, the integrals, and the
/// coefficient bound.
pub fn verify_contract(pair: &SelbergPair, grid: usize) -> Result<ContractReport> {
    if grid <= 2 * pair.m {
        return Err(Error::invalid(format!(
            "grid of {grid} points cannot resolve degree {}",
            pair.m
        )));
    }
    let plus = pair.evaluate_grid(Sign::Plus, grid)?;
    let minus = pair.evaluate_grid(Sign::Minus, grid)?;
    let mut dominance_plus = f64::INFINITY;
    let mut dominance_minus = f64::INFINITY;
    for j in 0..grid {
        let chi = if pair.interval.contains(j as f64 / grid as f64) { 1.0 } else { 0.0 };
        dominance_plus = dominance_plus.min(plus[j] - chi);
        dominance_minus = dominance_minus.min(chi - minus[j]);
    }
    let big = (pair.m + 1) as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let len = pair.interval.length();
    let integral_error = (mean(&plus) - (len + 1.0 / big))
        .abs()
        .max((mean(&minus) - (len - 1.0 / big)).abs());
    let mut coeff_excess = f64::NEG_INFINITY;
    for m in 1..=pair.m as i64 {
        let chi = indicator_fourier(&pair.interval, m);
        for sign in [Sign::Plus, Sign::Minus] {
            // Negative frequencies are conjugates, with the same distance.
            let gap = (pair.coeff(sign, m)? - chi).norm();
            coeff_excess = coeff_excess.max(gap - 1.0 / big);
        }
    }
    Ok(ContractReport {
        m: pair.m,
        dominance_plus,
        dominance_minus,
        integral_error,
        coeff_excess,
    })
}

fn check_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-10 {
        return Err(Error::Consistency(format!(
            "trigonometric polynomial has imaginary part {:e}",
            z.im
        )));
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_mapping() {
        let full = map_interval(-2.0, 2.0).unwrap();
        assert!(full.alpha.abs() < 1e-15 && (full.beta - 0.5).abs() < 1e-15);
        let half = map_interval(0.0, 2.0).unwrap();
        assert!(half.alpha.abs() < 1e-15 && (half.beta - 0.25).abs() < 1e-15);
        let mid = map_interval(-1.0, 1.0).unwrap();
        assert!((mid.alpha - 1.0 / 6.0).abs() < 1e-15 && (mid.beta - 1.0 / 3.0).abs() < 1e-15);
        assert!(map_interval(-2.5, 1.0).is_err());
        assert!(map_interval(1.0, 0.0).is_err());
    }

    #[test]
    fn indicator_examples() {
        let full = TorusInterval::new(0.0, 0.5).unwrap();
        assert_eq!(indicator_fourier(&full, 0), Complex64::new(0.5, 0.0));
        assert!(indicator_fourier(&full, 2).norm() < 1e-15);
        let q = TorusInterval::new(0.0, 0.25).unwrap();
        let want = Complex64::new(1.0, 1.0) / Complex64::new(0.0, 2.0 * PI);
        assert!((indicator_fourier(&q, 1) - want).norm() < 1e-15);
    }

    #[test]
    fn taper_is_continuous_at_zero() {
        assert_eq!(vaaler_taper(0.0), 1.0);
        let below = vaaler_taper(0.99e-4);
        let above = vaaler_taper(1.01e-4);
        assert!((below - above).abs() < 1e-8);
        assert!((vaaler_taper(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zeroth_and_symmetric() {
        let i = TorusInterval::new(1.0 / 6.0, 1.0 / 3.0).unwrap();
        let p = selberg_pair(i, 50).unwrap();
        let len = 1.0 / 6.0;
        assert!((p.coeff(Sign::Plus, 0).unwrap().re - (len + 1.0 / 51.0)).abs() < 1e-15);
        assert!((p.coeff(Sign::Minus, 0).unwrap().re - (len - 1.0 / 51.0)).abs() < 1e-15);
        for m in 1..=50 {
            let a = p.coeff(Sign::Plus, m).unwrap();
            let b = p.coeff(Sign::Plus, -m).unwrap();
            assert_eq!(a, b.conj());
        }
        assert!(p.coeff(Sign::Plus, 51).is_err());
        assert!((p.symmetrized_coeff(Sign::Plus, 0).unwrap() - 2.0 * (len + 1.0 / 51.0)).abs() < 1e-15);
        assert!(selberg_pair(i, 2).is_err());
    }

    #[test]
    fn u_boundary_branches() {
        let i = TorusInterval::new(0.1, 0.3).unwrap();
        let p = selberg_pair(i, 3).unwrap();
        let s = |m| p.symmetrized_coeff(Sign::Plus, m).unwrap();
        assert_eq!(p.u_coeff(Sign::Plus, 1).unwrap(), s(1) - s(3));
        assert_eq!(p.u_coeff(Sign::Plus, 2).unwrap(), s(2));
        assert_eq!(p.u_coeff(Sign::Plus, 3).unwrap(), s(3));
        assert!(p.u_coeff(Sign::Plus, 0).is_err());
        assert!(p.u_coeff(Sign::Plus, 4).is_err());
        let big = selberg_pair(i, 100).unwrap();
        let bound = 2.0 / (5.0 * PI) + 2.0 / 101.0;
        assert!(big.u_coeff(Sign::Plus, 5).unwrap().abs() <= bound);
        assert!(big.u_coeff(Sign::Minus, 5).unwrap().abs() <= bound);
    }

    #[test]
    fn evaluation_examples() {
        let full = TorusInterval::new(0.0, 0.5).unwrap();
        let p = selberg_pair(full, 20).unwrap();
        assert!(p.evaluate(Sign::Plus, 0.25).unwrap() >= 1.0);
        let i = TorusInterval::new(0.2, 0.3).unwrap();
        let q = selberg_pair(i, 20).unwrap();
        assert!(q.evaluate(Sign::Minus, 0.75).unwrap() <= 0.0);
        let grid = q.evaluate_grid(Sign::Plus, 10_000).unwrap();
        let mean = grid.iter().sum::<f64>() / grid.len() as f64;
        assert!((mean - q.coeff(Sign::Plus, 0).unwrap().re).abs() < 1e-6);
        for j in [0usize, 17, 2500, 9999] {
            let x = j as f64 / 10_000.0;
            assert!((grid[j] - q.evaluate(Sign::Plus, x).unwrap()).abs() < 1e-10);
        }
    }
}
