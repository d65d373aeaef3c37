//! The semicircle measure `μ∞`, the `p`-adic Plancherel measure `μ_p`, and
//! their masses on intervals of `[-2, 2]`.

use std::f64::consts::PI;

use rug::Integer;

use crate::error::{Error, Result};
use crate::hecke::ensure_prime;
use crate::selberg::map_interval;

/// Closed interval `[a, b]` of the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    pub a: f64,
    pub b: f64,
}

impl RealInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a <= b) {
            return Err(Error::invalid(format!("interval needs a <= b, got [{a}, {b}]")));
        }
        Ok(RealInterval { a, b })
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    /// Intersection with `[-2, 2]`, or `None` if it is empty.
    pub fn clamped(&self) -> Option<RealInterval> {
        let a = self.a.max(-2.0);
        let b = self.b.min(2.0);
        (a <= b).then_some(RealInterval { a, b })
    }
}

impl std::fmt::Display for RealInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

pub fn semicircle_density(t: f64) -> f64 {
    if !(-2.0..=2.0).contains(&t) {
        return 0.0;
    }
    (1.0 - t * t / 4.0).max(0.0).sqrt() / PI
}

/// `μ∞(I)` from `2(β - α) - (sin 4πβ - sin 4πα) / 2π` on the mapped interval.
pub fn semicircle_mass(interval: &RealInterval) -> f64 {
    let Some(i) = interval.clamped() else {
        return 0.0;
    };
    let t = map_interval(i.a, i.b).expect("clamped interval lies in [-2, 2]");
    let mass = 2.0 * (t.beta - t.alpha) - ((4.0 * PI * t.beta).sin() - (4.0 * PI * t.alpha).sin()) / (2.0 * PI);
    mass.clamp(0.0, 1.0)
}

/// `μ∞(I)` by adaptive quadrature of the density in `t`.
pub fn semicircle_mass_quadrature(interval: &RealInterval) -> f64 {
    let Some(i) = interval.clamped() else {
        return 0.0;
    };
    integrate(semicircle_density, i.a, i.b, 1e-13)
}

/// Weight `(p+1) / ((√p + 1/√p)^2 - t^2)` relating `μ_p` to `μ∞`.
fn plancherel_ratio(p: f64, t: f64) -> f64 {
    let s = p.sqrt() + 1.0 / p.sqrt();
    (p + 1.0) / (s * s - t * t)
}

pub fn plancherel_density(p: u64, t: f64) -> Result<f64> {
    ensure_prime(p)?;
    Ok(plancherel_ratio(p as f64, t) * semicircle_density(t))
}

/// `μ_p(I)`, integrated in `θ` with `t = 2 cos 2πθ` so the integrand is smooth.
pub fn plancherel_mass(p: u64, interval: &RealInterval) -> Result<f64> {
    ensure_prime(p)?;
    let Some(i) = interval.clamped() else {
        return Ok(0.0);
    };
    let t = map_interval(i.a, i.b)?;
    let pf = p as f64;
    let integrand = |theta: f64| {
        let phi = 2.0 * PI * theta;
        let (s, c) = phi.sin_cos();
        4.0 * s * s * plancherel_ratio(pf, 2.0 * c)
    };
    Ok(integrate(integrand, t.alpha, t.beta, 1e-12).clamp(0.0, 1.0))
}

/// `μ_p([-2, t])`.
pub fn plancherel_cdf(p: u64, t: f64) -> Result<f64> {
    plancherel_mass(p, &RealInterval::new(-2.0, t.max(-2.0))?)
}

/// `μ∞([-2, t])`.
pub fn semicircle_cdf(t: f64) -> f64 {
    semicircle_mass(&RealInterval { a: -2.0, b: t.max(-2.0) })
}

/// `E[Z^n]` for a standard Gaussian: `n! / ((n/2)! 2^{n/2})` for even `n`, else 0.
pub fn gaussian_moment(n: u32) -> Integer {
    if n % 2 == 1 {
        return Integer::new();
    }
    let half = n / 2;
    Integer::from(Integer::factorial(n)) / (Integer::from(Integer::factorial(half)) << half)
}

const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * KRONROD_NODES[i];
        let s = f(c - x) + f(c + x);
        kronrod += KRONROD_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod integration to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (value, err) = whole;
        if err <= tol || depth == 0 || b - a < 1e-15 {
            return value;
        }
        let m = 0.5 * (a + b);
        let left = gauss_kronrod(f, a, m);
        let right = gauss_kronrod(f, m, b);
        rec(f, a, m, tol / 2.0, left, depth - 1) + rec(f, m, b, tol / 2.0, right, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let whole = gauss_kronrod(&f, a, b);
    rec(&f, a, b, tol, whole, 50)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> RealInterval {
        RealInterval::new(a, b).unwrap()
    }

    #[test]
    fn density_examples() {
        assert!((semicircle_density(0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(semicircle_density(2.0), 0.0);
        assert_eq!(semicircle_density(-2.0), 0.0);
        assert_eq!(semicircle_density(2.5), 0.0);
        assert!((semicircle_density(1.0) - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(plancherel_density(5, 2.0).unwrap(), 0.0);
        assert!(plancherel_density(4, 0.0).is_err());
        for t in [-1.5, 0.0, 0.7] {
            let ratio = plancherel_density(3, t).unwrap() / semicircle_density(t);
            let s = 3f64.sqrt() + 1.0 / 3f64.sqrt();
            assert!((ratio - 4.0 / (s * s - t * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn mass_examples() {
        assert!((semicircle_mass(&iv(-2.0, 2.0)) - 1.0).abs() < 1e-15);
        assert!((semicircle_mass(&iv(0.0, 2.0)) - 0.5).abs() < 1e-15);
        let want = 1.0 / 3.0 + 3f64.sqrt() / (2.0 * PI);
        assert!((semicircle_mass(&iv(-1.0, 1.0)) - want).abs() < 1e-14);
        assert!((semicircle_mass_quadrature(&iv(-1.0, 1.0)) - want).abs() < 1e-12);
        assert!((semicircle_mass_quadrature(&iv(-2.0, 2.0)) - 1.0).abs() < 1e-11);
        assert_eq!(semicircle_mass(&iv(3.0, 4.0)), 0.0);
        for p in [2, 3, 101] {
            assert!((plancherel_mass(p, &iv(-2.0, 2.0)).unwrap() - 1.0).abs() < 1e-10);
            assert_eq!(plancherel_mass(p, &iv(0.5, 0.5)).unwrap(), 0.0);
        }
        assert!(RealInterval::new(1.0, 0.0).is_err());
    }

    #[test]
    fn plancherel_tends_to_semicircle() {
        let i = iv(-1.0, 0.5);
        let mu = semicircle_mass(&i);
        let gaps: Vec<f64> = [2, 11, 101]
            .iter()
            .map(|&p| (plancherel_mass(p, &i).unwrap() - mu).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn gaussian_moments() {
        let m: Vec<u64> = (0..9).map(|n| gaussian_moment(n).to_u64().unwrap()).collect();
        assert_eq!(m, vec![1, 0, 1, 0, 3, 0, 15, 0, 105]);
    }

    #[test]
    fn kronrod_polynomials_are_exact() {
        let v = integrate(|x| x.powi(10), 0.0, 1.0, 1e-15);
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
    }
}
