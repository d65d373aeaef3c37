//! Hecke operators on level-1 cusp forms and tables of normalized eigenvalues.
//!
//! Integer Hecke matrices are available on the Miller basis. Eigenvalue
//! tables are built from traces alone: with `tr(n) = Σ_f a_f(n)`, the Gram
//! matrix `A[m][n] = Σ_f a_f(m) a_f(n)` and the twisted matrix
//! `B[m][n] = Σ_f a_f(2) a_f(m) a_f(n)` (`1 <= m, n <= dim`) are sums of
//! normalized traces, and `L^{-1} B L^{-T}` with `A = L L^T` is symmetric
//! with eigenvalues `a_f(2)` and eigenvectors `L^{-1} (a_f(n))_n`. Every
//! eigenvector therefore yields the first `dim` normalized coefficients of
//! one eigenform, so rows stay attached to a single form across primes.

use std::collections::HashMap;

use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::arith::{divisors, gcd, is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, congruence, dot, lower_mul_vec, symmetric_eigen, FMat};
use crate::qexp::{dim_cusp_forms, miller_basis, CuspBasis};
use crate::traceformula::normalized_traces;

/// Matrix of `T_n` on the Miller basis: column `j` holds the coordinates
/// of `T_n f_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeMatrix {
    pub weight: u32,
    pub n: u64,
    pub entries: Vec<Vec<Integer>>,
}

impl HeckeMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> Integer {
        (0..self.dim()).map(|i| self.entries[i][i].clone()).sum()
    }
}

/// Basis precision needed for `hecke_matrix(k, n, ·)` in dimension `d`.
pub fn required_precision(n: u64, d: usize) -> usize {
    n as usize * (d + 1) + 1
}

pub fn hecke_matrix(k: u32, n: u64, basis: &CuspBasis) -> Result<HeckeMatrix> {
    if n == 0 {
        return Err(Error::invalid("Hecke index must be >= 1"));
    }
    if basis.weight != k {
        return Err(Error::invalid(format!(
            "basis has weight {}, expected {k}",
            basis.weight
        )));
    }
    let d = basis.dim();
    let required = required_precision(n, d);
    if d > 0 && basis.prec < required {
        return Err(Error::Precision {
            required,
            available: basis.prec,
        });
    }
    let mut entries = vec![vec![Integer::new(); d]; d];
    let mut t = Integer::new();
    for (j, form) in basis.forms.iter().enumerate() {
        let c = form.coeffs();
        for m in 1..=d as u64 {
            let mut acc = Integer::new();
            for e in divisors(gcd(m, n)) {
                let idx = (m * n / (e * e)) as usize;
                t.assign(Integer::from(e).pow(k - 1) * &c[idx]);
                acc += &t;
            }
            entries[m as usize - 1][j] = acc;
        }
    }
    Ok(HeckeMatrix {
        weight: k,
        n,
        entries,
    })
}

fn mat_mul(a: &[Vec<Integer>], b: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    let d = a.len();
    let mut out = vec![vec![Integer::new(); d]; d];
    for i in 0..d {
        for l in 0..d {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += Integer::from(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

fn mat_identity(d: usize) -> Vec<Vec<Integer>> {
    (0..d)
        .map(|i| (0..d).map(|j| Integer::from((i == j) as u32)).collect())
        .collect()
}

/// Integer Hecke algebra of one weight, for exact traces of `T_n` with `n`
/// too large for the class-number formula.
pub struct HeckeAlgebra {
    weight: u32,
    dim: usize,
    basis: Option<CuspBasis>,
    /// `powers[p][e] = T_{p^e}`.
    powers: HashMap<u64, Vec<Vec<Vec<Integer>>>>,
}

impl HeckeAlgebra {
    pub fn new(k: u32) -> Result<Self> {
        Ok(HeckeAlgebra {
            weight: k,
            dim: dim_cusp_forms(k)?,
            basis: None,
            powers: HashMap::new(),
        })
    }

    fn prime_matrix(&mut self, p: u64) -> Result<Vec<Vec<Integer>>> {
        let need = required_precision(p, self.dim);
        if self.basis.as_ref().map_or(true, |b| b.prec < need) {
            self.basis = Some(miller_basis(self.weight, need)?);
        }
        let basis = self.basis.as_ref().expect("basis just built");
        Ok(hecke_matrix(self.weight, p, basis)?.entries)
    }

    /// `T_{p^e}` from `T_{p^{j+1}} = T_p T_{p^j} - p^{k-1} T_{p^{j-1}}`.
    fn prime_power(&mut self, p: u64, e: u32) -> Result<Vec<Vec<Integer>>> {
        if !self.powers.contains_key(&p) {
            let tp = self.prime_matrix(p)?;
            self.powers.insert(p, vec![mat_identity(self.dim), tp]);
        }
        let scale = Integer::from(p).pow(self.weight - 1);
        let list = self.powers.get_mut(&p).expect("inserted above");
        while list.len() <= e as usize {
            let j = list.len() - 1;
            let mut next = mat_mul(&list[1], &list[j]);
            for (row, prev) in next.iter_mut().zip(&list[j - 1]) {
                for (x, y) in row.iter_mut().zip(prev) {
                    *x -= Integer::from(&scale * y);
                }
            }
            list.push(next);
        }
        Ok(list[e as usize].clone())
    }

    /// Exact `Tr(T_n)` for `n = Π p^e` (distinct primes).
    pub fn trace(&mut self, factors: &[(u64, u32)]) -> Result<Integer> {
        let mut acc = mat_identity(self.dim);
        for &(p, e) in factors {
            let m = self.prime_power(p, e)?;
            acc = mat_mul(&acc, &m);
        }
        Ok((0..self.dim).map(|i| acc[i][i].clone()).sum())
    }
}

/// Normalized eigenvalues `a_f(p)` of every eigenform of one weight.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueTable {
    pub weight: u32,
    pub primes: Vec<u64>,
    /// `values[f][i]` is `a_f(primes[i])`.
    pub values: Vec<Vec<f64>>,
    pub residuals: Vec<Vec<f64>>,
}

impl EigenvalueTable {
    pub fn empty(weight: u32) -> Self {
        EigenvalueTable {
            weight,
            primes: Vec::new(),
            values: Vec::new(),
            residuals: Vec::new(),
        }
    }

    pub fn num_forms(&self) -> usize {
        self.values.len()
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    /// `a_f(p)` for every form.
    pub fn column(&self, p: u64) -> Option<Vec<f64>> {
        let i = self.prime_index(p)?;
        Some(self.values.iter().map(|row| row[i]).collect())
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.primes.last().copied()
    }
}

/// Tuning for [`eigen_system_with`].
#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Working precisions tried in order.
    pub precisions: Vec<u32>,
    pub residual_tolerance: f64,
    /// Largest `c` tried in `T_2 + c T_3`.
    pub max_c: u32,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            precisions: vec![128, 192, 256],
            residual_tolerance: 1e-6,
            max_c: 16,
        }
    }
}

pub fn eigen_system(k: u32, pmax: u64) -> Result<EigenvalueTable> {
    eigen_system_with(k, pmax, &EigenOptions::default())
}

pub fn eigen_system_with(k: u32, pmax: u64, opts: &EigenOptions) -> Result<EigenvalueTable> {
    if pmax < 2 {
        return Err(Error::invalid("pmax must be >= 2"));
    }
    let d = dim_cusp_forms(k)?;
    if d == 0 {
        return Ok(EigenvalueTable::empty(k));
    }
    let mut last = None;
    let floor = precision_floor(d);
    let top = opts.precisions.iter().copied().max().unwrap_or(0);
    for &bits in &opts.precisions {
        if bits < floor.min(top) {
            continue;
        }
        match eigen_attempt(k, d, pmax, bits, opts) {
            Ok(table) => return Ok(table),
            Err(e @ Error::Residual { .. }) => last = Some(e),
            Err(Error::Consistency(msg)) => {
                last = Some(Error::Consistency(format!("{msg} (weight {k}, {bits} bits)")))
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::invalid("no working precision configured")))
}

/// Normalized traces computed on demand for the indices a solve touches.
struct TraceStore {
    k: u32,
    bits: u32,
    values: HashMap<u64, Float>,
}

impl TraceStore {
    fn ensure(&mut self, wanted: impl IntoIterator<Item = u64>) -> Result<()> {
        let mut missing: Vec<u64> = wanted
            .into_iter()
            .filter(|n| !self.values.contains_key(n))
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let vals = normalized_traces(self.k, &missing, self.bits)?;
        self.values.extend(missing.into_iter().zip(vals));
        Ok(())
    }

    fn get(&self, n: u64) -> &Float {
        self.values.get(&n).expect("trace index prepared before use")
    }
}

/// Indices `mn/e^2` over `e | gcd(m, n)`.
fn gram_indices(m: u64, n: u64) -> impl Iterator<Item = u64> {
    divisors(gcd(m, n)).into_iter().map(move |e| m * n / (e * e))
}

/// Indices `p r / e^2` over `e | gcd(p, r)`.
fn twist_indices(p: u64, r: u64) -> impl Iterator<Item = u64> {
    divisors(gcd(p, r)).into_iter().map(move |e| p * r / (e * e))
}

/// Smallest working precision worth trying for dimension `d`: the Gram
/// route loses roughly 10 digits at `d = 83`, 16 at `d = 166` and 36 at `d = 333`.
pub fn precision_floor(d: usize) -> u32 {
    match d {
        0..=250 => 128,
        251..=420 => 192,
        _ => 256,
    }
}

/// Intermediate state of one eigen computation at fixed precision.
struct GramSystem {
    d: usize,
    bits: u32,
    tr: TraceStore,
    l: FMat,
}

impl GramSystem {
    fn entry_a(&self, m: u64, n: u64) -> Float {
        let mut acc = Float::new(self.bits);
        for r in gram_indices(m, n) {
            acc += self.tr.get(r);
        }
        acc
    }

    /// `Σ_f a_f(p) a_f(m) a_f(n)`.
    fn entry_b(&self, p: u64, m: u64, n: u64) -> Float {
        let mut acc = Float::new(self.bits);
        for r in gram_indices(m, n) {
            for s in twist_indices(p, r) {
                acc += self.tr.get(s);
            }
        }
        acc
    }

    fn prepare_twist(&mut self, p: u64) -> Result<()> {
        let dd = self.d as u64;
        let wanted: Vec<u64> = (1..=dd)
            .flat_map(|m| (m..=dd).flat_map(move |n| gram_indices(m, n)))
            .flat_map(|r| twist_indices(p, r))
            .collect();
        self.tr.ensure(wanted)
    }

    /// `(Σ_f a_f(n) a_f(m))_{m <= d}`.
    fn gram_row(&self, n: u64) -> Vec<Float> {
        (1..=self.d as u64).map(|m| self.entry_a(n, m)).collect()
    }

    fn twisted(&mut self, p: u64) -> Result<FMat> {
        self.prepare_twist(p)?;
        let b = FMat::from_fn(self.d, self.bits, |i, j| self.entry_b(p, i as u64 + 1, j as u64 + 1));
        Ok(congruence(&self.l, &b))
    }

    /// `L^{-1} w` by forward substitution.
    fn whiten(&self, w: &[Float]) -> Vec<Float> {
        let mut out: Vec<Float> = Vec::with_capacity(self.d);
        let mut t = Float::new(self.bits);
        for i in 0..self.d {
            let mut v = w[i].clone();
            for (k, o) in out.iter().enumerate() {
                t.assign(&self.l[(i, k)] * o);
                v -= &t;
            }
            v /= &self.l[(i, i)];
            out.push(v);
        }
        out
    }
}

fn eigen_attempt(k: u32, d: usize, pmax: u64, bits: u32, opts: &EigenOptions) -> Result<EigenvalueTable> {
    let out_primes = primes_up_to(pmax);
    let dd = d as u64;
    let mut tr = TraceStore {
        k,
        bits,
        values: HashMap::new(),
    };
    tr.ensure((1..=dd).flat_map(|m| (m..=dd).flat_map(move |n| gram_indices(m, n))))?;
    let a = FMat::from_fn(d, bits, |i, j| {
        let mut acc = Float::new(bits);
        for r in gram_indices(i as u64 + 1, j as u64 + 1) {
            acc += tr.get(r);
        }
        acc
    });
    let l = cholesky(&a)?;
    let mut sys = GramSystem { d, bits, tr, l };

    let c2 = sys.twisted(2)?;
    let mut separating = c2.clone();
    let mut c3: Option<FMat> = None;
    let gap_tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 3));
    let mut found = None;
    for c in 0..=opts.max_c {
        if c > 0 {
            if c3.is_none() {
                c3 = Some(sys.twisted(3)?);
            }
            separating = c2.add_scaled(c3.as_ref().expect("built above"), c as i64);
        }
        let (vals, vecs) = symmetric_eigen(&separating)?;
        let min_gap = vals
            .windows(2)
            .map(|w| Float::with_val(bits, &w[1] - &w[0]))
            .min_by(|x, y| x.partial_cmp(y).expect("NaN gap"));
        if min_gap.map_or(true, |g| g > gap_tol) {
            found = Some((vals, vecs));
            break;
        }
    }
    let (vals, vecs) = found.ok_or(Error::Degeneracy {
        weight: k,
        max_c: opts.max_c,
    })?;

    let tol = opts.residual_tolerance;
    let mut forms = Vec::with_capacity(d);
    for f in 0..d {
        let q = vecs.row(f).to_vec();
        // Eigen-equation residual for the separating operator.
        let cq = separating.mul_vec(&q);
        let mut r_eig = Float::new(bits);
        for (x, y) in cq.iter().zip(&q) {
            let diff = Float::with_val(bits, x - Float::with_val(bits, &vals[f] * y));
            r_eig += diff.square();
        }
        let r_eig = r_eig.sqrt().to_f64();

        let mut coeffs = lower_mul_vec(&sys.l, &q);
        let a1 = coeffs[0].clone();
        if (Float::with_val(bits, a1.abs_ref()) - 1u32).abs().to_f64() > tol {
            return Err(Error::Residual {
                weight: k,
                prime: 1,
                residual: (a1.to_f64().abs() - 1.0).abs(),
                tolerance: tol,
                bits,
            });
        }
        for c in coeffs.iter_mut() {
            *c /= &a1;
        }
        forms.push(FormCoefficients { q, a1, coeffs, r_eig });
    }

    // Coefficient lookup with Gram-row extension beyond the window.
    let mut extended: HashMap<u64, Vec<Float>> = HashMap::new();
    let mut coeff = |n: u64, sys: &GramSystem, forms: &[FormCoefficients]| -> Vec<Float> {
        if n <= dd {
            return forms.iter().map(|f| f.coeffs[n as usize - 1].clone()).collect();
        }
        extended
            .entry(n)
            .or_insert_with(|| {
                let w = sys.whiten(&sys.gram_row(n));
                forms
                    .iter()
                    .map(|f| Float::with_val(bits, dot(&f.q, &w, bits) / &f.a1))
                    .collect()
            })
            .clone()
    };

    // Coefficients beyond the window come from Gram rows of n = p, 2p, 3p.
    let mut outside: Vec<u64> = vec![2, 3];
    for &p in &out_primes {
        outside.extend([p, 2 * p, 3 * p]);
    }
    outside.retain(|&n| n > dd);
    sys.tr.ensure(
        outside
            .iter()
            .flat_map(|&n| (1..=dd).flat_map(move |m| gram_indices(n, m)))
            .chain(out_primes.iter().copied()),
    )?;

    let a2 = coeff(2, &sys, &forms);
    let a3 = coeff(3, &sys, &forms);
    let mut values: Vec<Vec<f64>> = vec![Vec::with_capacity(out_primes.len()); d];
    let mut residuals: Vec<Vec<f64>> = vec![Vec::with_capacity(out_primes.len()); d];
    for &p in &out_primes {
        let ap = coeff(p, &sys, &forms);
        let a2p = coeff(2 * p, &sys, &forms);
        let a3p = coeff(3 * p, &sys, &forms);
        let mut sum = Float::new(bits);
        for f in 0..d {
            sum += &ap[f];
            let mut res = forms[f].r_eig;
            // a_p a_2 = a_{2p} (+1 if p = 2), and likewise with 3.
            let mut rel2 = Float::with_val(bits, &ap[f] * &a2[f]) - &a2p[f];
            if p == 2 {
                rel2 -= 1u32;
            }
            let mut rel3 = Float::with_val(bits, &ap[f] * &a3[f]) - &a3p[f];
            if p == 3 {
                rel3 -= 1u32;
            }
            res = res.max(rel2.abs().to_f64()).max(rel3.abs().to_f64());
            // Within the window every relation a_p a_n = a_{pn} + [p | n] a_{n/p} is available.
            let mut n = 1u64;
            while p * n <= dd {
                let mut rel = Float::with_val(bits, &ap[f] * &forms[f].coeffs[n as usize - 1]);
                rel -= &forms[f].coeffs[(p * n) as usize - 1];
                if n % p == 0 {
                    rel -= &forms[f].coeffs[(n / p) as usize - 1];
                }
                res = res.max(rel.abs().to_f64());
                n += 1;
            }
            if res > tol || !res.is_finite() {
                return Err(Error::Residual {
                    weight: k,
                    prime: p,
                    residual: res,
                    tolerance: tol,
                    bits,
                });
            }
            values[f].push(ap[f].to_f64());
            residuals[f].push(res);
        }
        let trace_gap = (sum - sys.tr.get(p)).abs().to_f64();
        if trace_gap > tol {
            return Err(Error::Residual {
                weight: k,
                prime: p,
                residual: trace_gap,
                tolerance: tol,
                bits,
            });
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| {
        a2[x]
            .partial_cmp(&a2[y])
            .expect("NaN eigenvalue")
            .then(a3[x].partial_cmp(&a3[y]).expect("NaN eigenvalue"))
    });
    Ok(EigenvalueTable {
        weight: k,
        primes: out_primes,
        values: order.iter().map(|&f| values[f].clone()).collect(),
        residuals: order.iter().map(|&f| residuals[f].clone()).collect(),
    })
}

struct FormCoefficients {
    /// Unit eigenvector of the whitened operator.
    q: Vec<Float>,
    /// `(L q)_1`, equal to ±1 up to rounding.
    a1: Float,
    /// `a_f(n)` for `1 <= n <= d`.
    coeffs: Vec<Float>,
    r_eig: f64,
}

/// Arithmetic needed by the Chebyshev recurrences.
pub trait ChebyshevScalar: Clone {
    fn from_i32(v: i32) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
}

impl ChebyshevScalar for f64 {
    fn from_i32(v: i32) -> Self {
        v as f64
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
}

impl ChebyshevScalar for Rational {
    fn from_i32(v: i32) -> Self {
        Rational::from(v)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
}

/// `X_m(x)` with `X_0 = 1`, `X_1 = x`, `X_m = x X_{m-1} - X_{m-2}`.
pub fn chebyshev_x<T: ChebyshevScalar>(x: &T, m: u32) -> T {
    let mut prev = T::from_i32(1);
    if m == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..m {
        let next = x.mul_ref(&cur).sub_ref(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `2 cos(m θ)` where `x = 2 cos θ`.
pub fn cosine_transform_exact<T: ChebyshevScalar>(x: &T, m: i32) -> T {
    let m = m.unsigned_abs();
    match m {
        0 => T::from_i32(2),
        1 => x.clone(),
        _ => chebyshev_x(x, m).sub_ref(&chebyshev_x(x, m - 2)),
    }
}

/// `a_f(p^m) = X_m(a_f(p))`.
pub fn prime_power_eigenvalue(a_p: f64, m: u32) -> f64 {
    chebyshev_x(&a_p, m)
}

/// `2 cos(m θ_f(p))` from `a_f(p) = 2 cos θ_f(p)`, for `m != 0`.
pub fn cosine_transform(a_p: f64, m: i32) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("cosine_transform needs m != 0"));
    }
    Ok(cosine_transform_exact(&a_p, m))
}

/// Checks that `p` is prime, for callers taking primes from user input.
pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::delta;
    use crate::traceformula::trace_unnormalized;

    #[test]
    fn delta_matrices() {
        let b = miller_basis(12, 60).unwrap();
        assert_eq!(hecke_matrix(12, 2, &b).unwrap().entries, vec![vec![Integer::from(-24)]]);
        assert_eq!(hecke_matrix(12, 1, &b).unwrap().entries, vec![vec![Integer::from(1)]]);
        let small = miller_basis(12, 4).unwrap();
        assert!(matches!(
            hecke_matrix(12, 2, &small),
            Err(Error::Precision { required: 5, .. })
        ));
    }

    #[test]
    fn weight_24_trace() {
        let b = miller_basis(24, 7).unwrap();
        let m = hecke_matrix(24, 2, &b).unwrap();
        assert_eq!(m.trace(), 1080);
        let id = hecke_matrix(24, 1, &b).unwrap();
        assert_eq!(id.entries, mat_identity(2));
    }

    #[test]
    fn algebra_matches_trace_formula() {
        for k in [24u32, 36, 48] {
            let mut alg = HeckeAlgebra::new(k).unwrap();
            for (factors, n) in [
                (vec![(2u64, 3u32)], 8u64),
                (vec![(2, 2), (3, 1)], 12),
                (vec![(3, 2), (5, 1)], 45),
                (vec![(7, 2)], 49),
            ] {
                let exact = trace_unnormalized(k, n).unwrap().integer();
                assert_eq!(alg.trace(&factors).unwrap(), exact, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn delta_table() {
        let t = eigen_system(12, 10).unwrap();
        assert_eq!(t.primes, vec![2, 3, 5, 7]);
        let row = &t.values[0];
        let d = delta(8).unwrap();
        for (x, p) in row.iter().zip([2usize, 3, 5, 7]) {
            let tau = d.coeff(p).unwrap().to_f64();
            assert!((x - tau / (p as f64).powf(5.5)).abs() < 1e-12, "p = {p}");
        }
        assert!((row[0] + 0.530330).abs() < 1e-6);
        assert!((row[2] - 0.691213).abs() < 1e-6);
    }

    #[test]
    fn weight_16_and_empty() {
        let t = eigen_system(16, 2).unwrap();
        assert!((t.values[0][0] - 1.193243).abs() < 1e-6);
        assert_eq!(eigen_system(10, 10).unwrap().num_forms(), 0);
        assert!(eigen_system(12, 1).is_err());
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(prime_power_eigenvalue(0.7, 0), 1.0);
        let x = 1.3;
        assert!((prime_power_eigenvalue(x, 2) - (x * x - 1.0)).abs() < 1e-15);
        for m in 0..20 {
            assert!((prime_power_eigenvalue(2.0, m) - (m as f64 + 1.0)).abs() < 1e-12);
        }
        assert_eq!(cosine_transform(0.4, 1).unwrap(), 0.4);
        assert!((cosine_transform(0.0, 2).unwrap() + 2.0).abs() < 1e-15);
        let th = 0.37f64;
        let a = 2.0 * th.cos();
        assert!((cosine_transform(a, 2).unwrap() - (4.0 * th.cos().powi(2) - 2.0)).abs() < 1e-12);
        assert!((cosine_transform(a, -5).unwrap() - 2.0 * (5.0 * th).cos()).abs() < 1e-12);
        assert!(cosine_transform(a, 0).is_err());
    }
}
