//! Exact Eichler–Selberg traces of Hecke operators on level-1 cusp forms.
//!
//! The trace of `T_n` on `S_k(SL2(Z))` is the sum of four rational terms:
//! an identity term (only for square `n`), an elliptic term built from Hurwitz
//! class numbers and the integer Lucas sequence of `x^2 - t x + n`, a
//! hyperbolic divisor term, and a weight-2 correction. Every term is kept as
//! an exact rational and the total is checked to be an integer.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::arith::{divisors, exact_sqrt, isqrt};
use crate::error::{Error, Result};

/// Hurwitz class number `H(n)`; `12 * value` is always an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue {
    pub n: u64,
    pub value: Rational,
}

/// Weighted count (times 12) of reduced forms `(a, b, c)` of discriminant `-n`.
///
/// Reduced means `|b| <= a <= c` with `b >= 0` whenever `|b| = a` or `a = c`.
/// Forms `a(x^2 + y^2)` carry weight 1/2 and `a(x^2 + xy + y^2)` weight 1/3.
fn hurwitz_twelve_direct(n: u64) -> u64 {
    if n == 0 || !(n % 4 == 0 || n % 4 == 3) {
        return 0;
    }
    let mut total = 0u64;
    let mut a = 1u64;
    while 3 * a * a <= n {
        let parity = n % 2;
        // b ranges over (-a, a] with b ≡ n (mod 2); only b >= 0 is enumerated
        // and the negative partner added when it is not excluded.
        let mut b = parity;
        while b <= a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a {
                    let w = reduced_weight(a, b, c);
                    total += w;
                    // (a, -b, c) is reduced too unless b = 0, b = a or a = c.
                    if b != 0 && b != a && a != c {
                        total += w;
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    total
}

fn reduced_weight(a: u64, b: u64, c: u64) -> u64 {
    if a == c && b == 0 {
        6
    } else if a == c && b == a {
        4
    } else {
        12
    }
}

/// `H(n)` by direct reduced-form enumeration.
pub fn hurwitz_class_number(n: u64) -> Result<HurwitzValue> {
    if n == 0 {
        return Err(Error::invalid("Hurwitz class number needs n >= 1"));
    }
    let twelve = hurwitz_cache().twelve_h(n);
    Ok(HurwitzValue {
        n,
        value: Rational::from((Integer::from(twelve), Integer::from(12))),
    })
}

/// Table of `12 H(n)` for `0 <= n <= bound`, grown on demand.
///
/// Readers share the table; growth recomputes it under the write lock.
/// Concurrent growth requests may redo work, which is harmless.
pub struct HurwitzCache {
    table: RwLock<Vec<u32>>,
}

/// Above this discriminant single values are computed directly instead of
/// growing the table.
const CACHE_LIMIT: u64 = 1 << 26;

impl HurwitzCache {
    pub fn new() -> Self {
        HurwitzCache {
            table: RwLock::new(vec![0]),
        }
    }

    pub fn bound(&self) -> u64 {
        self.table.read().expect("hurwitz table poisoned").len() as u64 - 1
    }

    /// Make sure every `n <= bound` is tabulated.
    pub fn ensure(&self, bound: u64) {
        if self.bound() >= bound {
            return;
        }
        let target = bound.max(2 * self.bound()).min(CACHE_LIMIT.max(bound));
        let fresh = sieve_hurwitz_twelve(target);
        let mut guard = self.table.write().expect("hurwitz table poisoned");
        if guard.len() < fresh.len() {
            *guard = fresh;
        }
    }

    pub fn twelve_h(&self, n: u64) -> u64 {
        if n > CACHE_LIMIT {
            return hurwitz_twelve_direct(n);
        }
        self.ensure(n);
        self.table.read().expect("hurwitz table poisoned")[n as usize] as u64
    }

    /// Runs `f` with a table covering `0..=bound`.
    pub fn with_table<R>(&self, bound: u64, f: impl FnOnce(&[u32]) -> R) -> R {
        self.ensure(bound);
        let guard = self.table.read().expect("hurwitz table poisoned");
        f(&guard)
    }
}

impl Default for HurwitzCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Process-wide Hurwitz table.
pub fn hurwitz_cache() -> &'static HurwitzCache {
    static CACHE: OnceLock<HurwitzCache> = OnceLock::new();
    CACHE.get_or_init(HurwitzCache::new)
}

/// Enumerates every reduced form with discriminant magnitude `<= bound`.
fn sieve_hurwitz_twelve(bound: u64) -> Vec<u32> {
    let mut table = vec![0u32; bound as usize + 1];
    let mut a = 1u64;
    while 3 * a * a <= bound {
        for b in 0..=a {
            // disc = 4ac - b^2 with c >= a
            let c_max = (bound + b * b) / (4 * a);
            let mut c = a;
            while c <= c_max {
                let disc = (4 * a * c - b * b) as usize;
                let w = reduced_weight(a, b, c) as u32;
                table[disc] += w;
                if b != 0 && b != a && a != c {
                    table[disc] += w;
                }
                c += 1;
            }
        }
        a += 1;
    }
    table
}

/// `(r^{k-1} - rbar^{k-1}) / (r - rbar)` for the roots of `x^2 - t x + n`.
///
/// Computed by `G_0 = 1, G_1 = t, G_j = t G_{j-1} - n G_{j-2}` at `j = k - 2`.
pub fn lucas_term(t: i64, n: u64, k: u32) -> Result<Integer> {
    let t2 = (t as i128) * (t as i128);
    if t2 >= 4 * n as i128 {
        return Err(Error::invalid(format!(
            "lucas_term needs t^2 < 4n, got t = {t}, n = {n}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid("lucas_term needs k >= 2"));
    }
    let j = k - 2;
    let mut prev = Integer::from(1);
    if j == 0 {
        return Ok(prev);
    }
    let mut cur = Integer::from(t);
    let mut next = Integer::new();
    for _ in 1..j {
        next.assign(&cur * t);
        next -= &prev * n;
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(cur)
}

/// Exact trace of `T_n` on `S_k` together with its four formula terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceValue {
    pub weight: u32,
    pub n: u64,
    pub total: Rational,
    /// `[B1, B2, B3, B4]`: identity, elliptic, hyperbolic and weight-2 terms.
    pub terms: [Rational; 4],
}

impl TraceValue {
    /// The total as an integer; the constructor guarantees integrality.
    pub fn integer(&self) -> Integer {
        self.total.numer().clone()
    }
}

pub fn trace_unnormalized(k: u32, n: u64) -> Result<TraceValue> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!("weight must be even and >= 2, got {k}")));
    }
    if n == 0 {
        return Err(Error::invalid("Hecke index must be >= 1"));
    }
    let cache = hurwitz_cache();

    let b1 = match exact_sqrt(n) {
        Some(_) => {
            // (k-1)/12 * n^{k/2 - 1}
            Rational::from((Integer::from(k - 1), Integer::from(12))) * Integer::from(n).pow(k / 2 - 1)
        }
        None => Rational::new(),
    };

    let mut elliptic_twelfths = Integer::new();
    let tmax = isqrt(4 * n - 1) as i64;
    for t in 0..=tmax {
        let disc = 4 * n - (t as u64) * (t as u64);
        let h12 = cache.twelve_h(disc);
        if h12 == 0 {
            continue;
        }
        let g = lucas_term(t, n, k)?;
        // G is even in t for even k, so t and -t contribute equally.
        let mult: u64 = if t == 0 { 1 } else { 2 };
        elliptic_twelfths += g * (h12 * mult);
    }
    // B2 = -1/2 * sum G * H = -(sum G * 12H) / 24
    let b2 = -Rational::from((elliptic_twelfths, Integer::from(24)));

    let mut b3 = Rational::new();
    let root = isqrt(n);
    for d in divisors(n).into_iter().take_while(|&d| d <= root) {
        let term = Integer::from(d).pow(k - 1);
        if d * d == n {
            b3 -= Rational::from((term, Integer::from(2)));
        } else {
            b3 -= term;
        }
    }

    let b4 = if k == 2 {
        Rational::from(divisors(n).into_iter().map(Integer::from).sum::<Integer>())
    } else {
        Rational::new()
    };

    let total = b1.clone() + &b2 + &b3 + &b4;
    if *total.denom() != 1 {
        return Err(Error::Consistency(format!(
            "trace of T_{n} in weight {k} is not an integer: {total}"
        )));
    }
    Ok(TraceValue {
        weight: k,
        n,
        total,
        terms: [b1, b2, b3, b4],
    })
}

/// `Σ_f a_f(n)` (the trace divided by `n^{(k-1)/2}`) for every `n <= nmax`.
///
/// Evaluated in `bits`-bit floating point from the closed form of the Lucas
/// term, `G / n^{(k-1)/2} = 2 sin((k-1)θ) / sqrt(4n - t^2)` with
/// `t = 2 sqrt(n) cos θ`, where `sin((k-1)θ)` is the imaginary part of
/// `e^{i(k-1)θ}` obtained by repeated squaring. Index 0 of the result is unused (set to zero).
pub fn normalized_trace_table(k: u32, nmax: u64, bits: u32) -> Result<Vec<Float>> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!("weight must be even and >= 2, got {k}")));
    }
    let cache = hurwitz_cache();
    cache.with_table(4 * nmax, |hurwitz| {
        let mut out = Vec::with_capacity(nmax as usize + 1);
        out.push(Float::new(bits));
        let mut work = NormalizedTraceWork::new(k, bits);
        for n in 1..=nmax {
            out.push(work.eval(n, hurwitz));
        }
        Ok(out)
    })
}

/// `Σ_f a_f(n)` for each `n` in `indices`, in the given order.
pub fn normalized_traces(k: u32, indices: &[u64], bits: u32) -> Result<Vec<Float>> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!("weight must be even and >= 2, got {k}")));
    }
    if indices.contains(&0) {
        return Err(Error::invalid("trace index must be >= 1"));
    }
    let top = indices.iter().copied().max().unwrap_or(1);
    let cache = hurwitz_cache();
    cache.with_table(4 * top, |hurwitz| {
        let mut work = NormalizedTraceWork::new(k, bits);
        Ok(indices.iter().map(|&n| work.eval(n, hurwitz)).collect())
    })
}

/// Single normalized trace `Σ_f a_f(n)` at `bits` bits.
pub fn normalized_trace(k: u32, n: u64, bits: u32) -> Result<Float> {
    if k < 2 || k % 2 == 1 || n == 0 {
        return Err(Error::invalid("normalized_trace needs even k >= 2 and n >= 1"));
    }
    let cache = hurwitz_cache();
    Ok(cache.with_table(4 * n, |h| NormalizedTraceWork::new(k, bits).eval(n, h)))
}

struct NormalizedTraceWork {
    k: u32,
    bits: u32,
    sqrt_disc: Float,
    acc: Float,
    scratch: Float,
    re: Float,
    im: Float,
    t1: Float,
    t2: Float,
}

/// At working precisions up to 128 bits, unit-modulus complex numbers are
/// raised to the power `k - 1` in 128-bit fixed point.
type Fix = fixed::types::I2F126;
const FIX_FRAC: u32 = 126;

fn fix_im_power(x: Fix, y: Fix, e: u32) -> Fix {
    let (mut re, mut im) = (x, y);
    let top = 31 - e.leading_zeros();
    for bit in (0..top).rev() {
        // (a + ib)^2 = (a - b)(a + b) + 2ab i
        let (s, d) = (re + im, re - im);
        im = (re * im) << 1;
        re = s * d;
        if e >> bit & 1 == 1 {
            let r = re * x - im * y;
            im = re * y + im * x;
            re = r;
        }
    }
    im
}

impl NormalizedTraceWork {
    fn new(k: u32, bits: u32) -> Self {
        let f = || Float::new(bits);
        NormalizedTraceWork {
            k,
            bits,
            sqrt_disc: f(),
            acc: f(),
            scratch: f(),
            re: f(),
            im: f(),
            t1: f(),
            t2: f(),
        }
    }

    /// `Im((x + iy)^e)` in MPFR, for working precisions beyond the fixed-point path.
    fn float_im_power(&mut self, x: &Float, y: &Float, e: u32) -> &Float {
        self.re.assign(x);
        self.im.assign(y);
        let top = 31 - e.leading_zeros();
        for bit in (0..top).rev() {
            self.t1.assign(&self.re + &self.im);
            self.t2.assign(&self.re - &self.im);
            self.im *= &self.re;
            self.im *= 2u32;
            self.re.assign(&self.t1 * &self.t2);
            if e >> bit & 1 == 1 {
                self.t1.assign(self.re.mul_sub_mul_ref(x, &self.im, y));
                self.t2.assign(self.re.mul_add_mul_ref(y, &self.im, x));
                std::mem::swap(&mut self.re, &mut self.t1);
                std::mem::swap(&mut self.im, &mut self.t2);
            }
        }
        &self.im
    }

    fn to_fix(&mut self, v: &Float) -> Fix {
        use rug::az::CheckedAs;
        self.scratch.assign(v << FIX_FRAC);
        Fix::from_bits((&self.scratch).checked_as::<i128>().expect("value in [-1, 1]"))
    }

    fn eval(&mut self, n: u64, hurwitz: &[u32]) -> Float {
        let bits = self.bits;
        let k = self.k;
        let mut total = Float::new(bits);
        let sqrt_n = Float::with_val(bits, n).sqrt();
        let half_inv_sqrt_n = Float::with_val(bits, 2u32 * &sqrt_n).recip();

        if exact_sqrt(n).is_some() {
            total += Float::with_val(bits, k - 1) / 12u32 / &sqrt_n;
        }

        // Elliptic term: -1/2 Σ_t H(4n - t^2) * 2 sin((k-1)θ_t) / sqrt(4n - t^2)
        // with e^{iθ_t} = (t + i sqrt(4n - t^2)) / (2 sqrt n), accumulated as
        // Σ (12H) * sin / sqrt and scaled by -1/12 at the end.
        self.acc.assign(0);
        let tmax = isqrt(4 * n - 1);
        let mut part = Float::new(bits);
        let mut xf = Float::new(bits);
        let mut yf = Float::new(bits);
        for t in 0..=tmax {
            let disc = 4 * n - t * t;
            let h12 = hurwitz[disc as usize];
            if h12 == 0 {
                continue;
            }
            self.sqrt_disc.assign(disc);
            self.sqrt_disc.sqrt_mut();
            xf.assign(&half_inv_sqrt_n * t);
            yf.assign(&self.sqrt_disc * &half_inv_sqrt_n);
            if bits <= FIX_FRAC + 2 {
                let (x, y) = (self.to_fix(&xf), self.to_fix(&yf));
                part.assign(fix_im_power(x, y, k - 1).to_bits());
                part >>= FIX_FRAC;
            } else {
                part.assign(self.float_im_power(&xf, &yf, k - 1));
            }
            part *= if t == 0 { h12 } else { 2 * h12 };
            part /= &self.sqrt_disc;
            self.acc += &part;
        }
        total -= Float::with_val(bits, &self.acc / 12u32);

        // Hyperbolic term: -Σ_{d | n, d <= sqrt n} (d / sqrt n)^{k-1}, halved at d = sqrt n.
        let root = isqrt(n);
        for d in divisors(n).into_iter().take_while(|&d| d <= root) {
            let mut ratio = Float::with_val(bits, d) / &sqrt_n;
            ratio = ratio.pow(k - 1);
            if d * d == n {
                ratio /= 2u32;
            }
            total -= ratio;
        }

        if k == 2 {
            let sigma: u64 = divisors(n).iter().sum();
            total += Float::with_val(bits, sigma) / &sqrt_n;
        }
        total
    }
}

/// Coefficients `D(t)` with `Π_i X_{m_i}(x) = Σ_t D(t) X_t(x)`.
///
/// Built by repeated use of `X_i X_j = Σ_{l=0}^{min(i,j)} X_{i+j-2l}`.
pub fn hecke_product_expansion(ms: &[u32]) -> Result<BTreeMap<u32, Integer>> {
    if ms.is_empty() {
        return Err(Error::invalid("hecke_product_expansion needs at least one exponent"));
    }
    if ms.iter().any(|&m| m == 0) {
        return Err(Error::invalid("hecke_product_expansion exponents must be >= 1"));
    }
    let mut acc: BTreeMap<u32, Integer> = BTreeMap::new();
    acc.insert(0, Integer::from(1));
    for &m in ms {
        let mut next: BTreeMap<u32, Integer> = BTreeMap::new();
        for (&t, c) in &acc {
            for l in 0..=t.min(m) {
                *next.entry(t + m - 2 * l).or_default() += c;
            }
        }
        acc = next;
    }
    acc.retain(|_, c| *c != 0);
    Ok(acc)
}

/// Exact family average of `Π_i a_f(p_i^{m_i})` over the eigenforms of weight `k`.
///
/// The average equals `Tr(T_n) / (s_k n^{(k-1)/2})` with `n = Π p_i^{m_i}`;
/// the integer trace and the normalisation are kept separately.
#[derive(Debug, Clone)]
pub struct AveragedProduct {
    pub weight: u32,
    /// `(p_i, m_i)` sorted by prime.
    pub factors: Vec<(u64, u32)>,
    pub n: Integer,
    pub trace: Integer,
    pub dim: usize,
    /// High-precision evaluation of the average.
    pub value: Float,
}

impl AveragedProduct {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Largest `n` for which traces come from the class-number formula; beyond it
/// the exact trace is taken from integer Hecke matrices.
pub const TRACE_FORMULA_LIMIT: u64 = 250_000;

/// Upper bound on `Π p_i^{m_i}` accepted by [`averaged_product`].
pub const PRODUCT_BOUND: u64 = 1_000_000_000_000_000_000;

pub fn averaged_product(k: u32, factors: &[(u64, u32)]) -> Result<AveragedProduct> {
    averaged_product_with(k, factors, &mut HeckeTraceSource::new(k)?)
}

/// Supplies exact traces `Tr(T_n)`, switching to Hecke-matrix products
/// for large `n`. Reusable across many averaged products of one weight.
pub struct HeckeTraceSource {
    weight: u32,
    dim: usize,
    algebra: Option<crate::hecke::HeckeAlgebra>,
    memo: std::collections::HashMap<u64, Integer>,
}

impl HeckeTraceSource {
    pub fn new(k: u32) -> Result<Self> {
        let dim = crate::qexp::dim_cusp_forms(k)?;
        Ok(HeckeTraceSource {
            weight: k,
            dim,
            algebra: None,
            memo: Default::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact `Tr(T_n)` for `n = Π p^e` given by its factorization.
    pub fn trace(&mut self, factors: &[(u64, u32)]) -> Result<Integer> {
        let n = factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| p.checked_pow(e).and_then(|q| acc.checked_mul(q)))
            .ok_or_else(|| Error::Resource("Hecke index overflows 64 bits".into()))?;
        if let Some(v) = self.memo.get(&n) {
            return Ok(v.clone());
        }
        let value = if n <= TRACE_FORMULA_LIMIT || self.dim == 0 {
            if n > TRACE_FORMULA_LIMIT {
                Integer::new()
            } else {
                trace_unnormalized(self.weight, n)?.integer()
            }
        } else {
            if self.algebra.is_none() {
                self.algebra = Some(crate::hecke::HeckeAlgebra::new(self.weight)?);
            }
            self.algebra.as_mut().expect("just set").trace(factors)?
        };
        self.memo.insert(n, value.clone());
        Ok(value)
    }
}

pub fn averaged_product_with(
    k: u32,
    factors: &[(u64, u32)],
    source: &mut HeckeTraceSource,
) -> Result<AveragedProduct> {
    const BITS: u32 = 256;
    let mut sorted: Vec<(u64, u32)> = factors.iter().copied().filter(|&(_, m)| m > 0).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::invalid(
            "averaged_product needs distinct primes (merge exponents first)",
        ));
    }
    if let Some(&(p, _)) = sorted.iter().find(|&&(p, _)| !crate::arith::is_prime(p)) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let dim = source.dim();
    if dim == 0 {
        return Err(Error::invalid(format!("weight {k} has no cusp forms")));
    }
    let mut n = Integer::from(1);
    for &(p, m) in &sorted {
        n *= Integer::from(p).pow(m);
    }
    if n > PRODUCT_BOUND {
        return Err(Error::Resource(format!("Hecke index {n} exceeds 10^18")));
    }
    let trace = source.trace(&sorted)?;
    // n^{(k-1)/2} = n^{(k-2)/2} * sqrt(n)
    let nf = Float::with_val(BITS, &n);
    let mut scale = nf.clone().pow((k - 2) / 2);
    scale *= nf.sqrt();
    scale *= dim as u64;
    let value = Float::with_val(BITS, &trace) / scale;
    Ok(AveragedProduct {
        weight: k,
        factors: sorted,
        n,
        trace,
        dim,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: u64) -> Rational {
        hurwitz_class_number(n).unwrap().value
    }

    #[test]
    fn hurwitz_spot_values() {
        assert_eq!(h(2), Rational::new());
        assert_eq!(h(3), Rational::from((1, 3)));
        assert_eq!(h(4), Rational::from((1, 2)));
        assert_eq!(h(7), Rational::from(1));
        assert_eq!(h(8), Rational::from(1));
        // x^2+3y^2 and 2(x^2+xy+y^2)
        assert_eq!(h(12), Rational::from((4, 3)));
        assert_eq!(h(23), Rational::from(3));
        assert!(hurwitz_class_number(0).is_err());
    }

    #[test]
    fn cache_agrees_with_direct_enumeration() {
        let cache = HurwitzCache::new();
        cache.ensure(3000);
        for n in 1..=3000 {
            assert_eq!(cache.twelve_h(n), hurwitz_twelve_direct(n), "n = {n}");
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_term(5, 7, 2).unwrap(), 1);
        assert_eq!(lucas_term(0, 1, 12).unwrap(), -1);
        assert_eq!(lucas_term(1, 1, 12).unwrap(), -1);
        assert!(lucas_term(2, 1, 12).is_err());
        assert!(lucas_term(-3, 2, 12).is_err());
    }

    #[test]
    fn lucas_parity_in_t() {
        for n in 1..30u64 {
            let tmax = isqrt(4 * n - 1) as i64;
            for t in 1..=tmax {
                for k in [2u32, 4, 12, 13, 26] {
                    let plus = lucas_term(t, n, k).unwrap();
                    let minus = lucas_term(-t, n, k).unwrap();
                    if k % 2 == 0 {
                        assert_eq!(plus, minus);
                    } else {
                        assert_eq!(plus, -minus);
                    }
                }
            }
        }
    }

    #[test]
    fn delta_traces() {
        let t1 = trace_unnormalized(12, 1).unwrap();
        assert_eq!(t1.total, 1);
        assert_eq!(t1.terms[0], Rational::from((11, 12)));
        assert_eq!(t1.terms[1], Rational::from((7, 12)));
        assert_eq!(t1.terms[2], Rational::from((-1, 2)));
        assert_eq!(trace_unnormalized(12, 2).unwrap().total, -24);
        assert_eq!(trace_unnormalized(12, 4).unwrap().total, -1472);
        assert_eq!(trace_unnormalized(12, 6).unwrap().total, -6048);
    }

    #[test]
    fn weight_two_cancels() {
        for n in 1..40 {
            let tv = trace_unnormalized(2, n).unwrap();
            assert_eq!(tv.total, 0, "n = {n}");
            assert_eq!(tv.terms[3], Rational::from(crate::arith::sigma(n, 1) as u64));
        }
    }

    #[test]
    fn small_weights_have_zero_trace() {
        for k in [4u32, 6, 8, 10, 14] {
            for n in 1..25 {
                assert_eq!(trace_unnormalized(k, n).unwrap().total, 0, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn normalized_matches_exact() {
        for (bits, tol) in [(128u32, 1e-30), (256, 1e-65)] {
            for k in [12u32, 24, 36, 50, 502] {
                let table = normalized_trace_table(k, 60, bits).unwrap();
                for n in 1..=60u64 {
                    let exact = trace_unnormalized(k, n).unwrap().integer();
                    let expected = Float::with_val(512, &exact)
                        / Float::with_val(512, n).pow(Float::with_val(512, k - 1) / 2u32);
                    let diff = (expected - &table[n as usize]).abs().to_f64();
                    assert!(diff < tol, "bits = {bits}, k = {k}, n = {n}, diff = {diff}");
                }
                let single = normalized_trace(k, 37, bits).unwrap();
                assert_eq!(single, table[37]);
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let e = hecke_product_expansion(&[1, 1]).unwrap();
        assert_eq!(e, BTreeMap::from([(0, Integer::from(1)), (2, Integer::from(1))]));
        let e = hecke_product_expansion(&[2, 1]).unwrap();
        assert_eq!(e, BTreeMap::from([(1, Integer::from(1)), (3, Integer::from(1))]));
        let e = hecke_product_expansion(&[1, 1, 1]).unwrap();
        assert_eq!(e, BTreeMap::from([(1, Integer::from(2)), (3, Integer::from(1))]));
        assert!(hecke_product_expansion(&[]).is_err());
        assert!(hecke_product_expansion(&[1, 0]).is_err());
    }

    #[test]
    fn averaged_product_examples() {
        let empty = averaged_product(12, &[]).unwrap();
        assert_eq!(empty.to_f64(), 1.0);
        let a2 = averaged_product(12, &[(2, 1)]).unwrap();
        assert!((a2.to_f64() - (-24.0 / 2f64.powf(5.5))).abs() < 1e-12);
        assert!((a2.to_f64() + 0.530330).abs() < 1e-6);
        let a6 = averaged_product(12, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(a6.trace, -6048);
        assert!((a6.to_f64() + 6048.0 / 6f64.powf(5.5)).abs() < 1e-12);
        assert!(averaged_product(12, &[(2, 1), (2, 2)]).is_err());
        assert!(averaged_product(12, &[(4, 1)]).is_err());
        assert!(averaged_product(10, &[(2, 1)]).is_err());
    }
}
