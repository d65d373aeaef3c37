//! Prime counts `N_I(f, x)`, their Beurling–Selberg proxies `S±(M, f)(x)`,
//! family moments computed from eigenvalues and from exact traces, and
//! distribution distances.

use std::collections::{BTreeMap, HashMap};

use rug::Float;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::arith::{prime_pi, primes_up_to};
use crate::error::{Error, Result};
use crate::hecke::{prime_power_eigenvalue, EigenvalueTable};
use crate::measures::{plancherel_cdf, semicircle_cdf, semicircle_mass, RealInterval};
use crate::traceformula::{averaged_product_with, hecke_product_expansion, HeckeTraceSource};
use crate::selberg::{SelbergPair, Sign};

/// Precision of the trace-formula moment path.
const MOMENT_BITS: u32 = 256;

/// Largest number of (prime tuple, composition) terms expanded by
/// [`theoretical_s_moment`].
pub const MAX_MOMENT_TERMS: u64 = 100_000_000;

/// Column indices of the primes `<= x`, checking that all of them are tabulated.
fn prime_columns(table: &EigenvalueTable, x: f64) -> Result<Vec<usize>> {
    let primes = primes_up_to(x.max(0.0).floor() as u64);
    primes
        .iter()
        .map(|&p| {
            table.prime_index(p).ok_or_else(|| {
                Error::Precondition(format!(
                    "prime {p} <= x = {x} missing from weight {} table (largest available prime: {})",
                    table.weight,
                    table
                        .largest_prime()
                        .map_or_else(|| "none".to_string(), |q| q.to_string())
                ))
            })
        })
        .collect()
}

fn check_form(table: &EigenvalueTable, form: usize) -> Result<()> {
    if form >= table.num_forms() {
        return Err(Error::invalid(format!(
            "form index {form} out of range for weight {} ({} forms)",
            table.weight,
            table.num_forms()
        )));
    }
    Ok(())
}

/// `N_I(f, x) = #{p <= x : a_f(p) ∈ I}` with closed-interval membership.
pub fn count_in_interval(
    table: &EigenvalueTable,
    form: usize,
    interval: &RealInterval,
    x: f64,
) -> Result<usize> {
    check_form(table, form)?;
    let cols = prime_columns(table, x)?;
    let row = &table.values[form];
    Ok(cols.iter().filter(|&&i| interval.contains(row[i])).count())
}

/// `S±(M, f)(x)`, evaluated in both the difference form and the `U±` form.
pub fn s_statistic(
    table: &EigenvalueTable,
    form: usize,
    pair: &SelbergPair,
    sign: Sign,
    x: f64,
) -> Result<f64> {
    check_form(table, form)?;
    let cols = prime_columns(table, x)?;
    let big_m = pair.m as u32;
    // power_sums[m] = Σ_{p <= x} a_f(p^m)
    let mut power_sums = vec![0.0; pair.m + 1];
    for &i in &cols {
        let ap = table.values[form][i];
        for (m, slot) in power_sums.iter_mut().enumerate() {
            *slot += prime_power_eigenvalue(ap, m as u32);
        }
    }
    let s = |m: usize| pair.symmetrized_coeff(sign, m).expect("m <= M");

    let mut diff_form = s(1) * power_sums[1] + s(2) * power_sums[2];
    for m in 3..=pair.m {
        diff_form += s(m) * (power_sums[m] - power_sums[m - 2]);
    }
    let mut u_form = 0.0;
    for m in 1..=big_m as usize {
        u_form += pair.u_coeff(sign, m)? * power_sums[m];
    }
    if (diff_form - u_form).abs() > 1e-9 * diff_form.abs().max(1.0) {
        return Err(Error::Consistency(format!(
            "S{}(M={}) summation forms disagree: {diff_form} vs {u_form}",
            sign.symbol(),
            pair.m
        )));
    }
    Ok(u_form)
}

/// Both sides of `N - π(x)(Ŝ⁺(0) - Ŝ⁺(2)) <= S⁺` and `S⁻ <= N - π(x)(Ŝ⁻(0) - Ŝ⁻(2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub count: usize,
    pub s_plus: f64,
    pub s_minus: f64,
    /// `N - π(x)(Ŝ⁺(0) - Ŝ⁺(2))`, a lower bound for `S⁺`.
    pub upper_shift: f64,
    /// `N - π(x)(Ŝ⁻(0) - Ŝ⁻(2))`, an upper bound for `S⁻`.
    pub lower_shift: f64,
}

impl Sandwich {
    /// Largest violation of either inequality (non-positive when both hold).
    pub fn violation(&self) -> f64 {
        (self.upper_shift - self.s_plus).max(self.s_minus - self.lower_shift)
    }
}

/// `pair` must majorize the torus image of `interval`.
pub fn sandwich(
    table: &EigenvalueTable,
    form: usize,
    interval: &RealInterval,
    pair: &SelbergPair,
    x: f64,
) -> Result<Sandwich> {
    let count = count_in_interval(table, form, interval, x)?;
    let pi_x = prime_pi(x) as f64;
    let shift = |sign| -> Result<f64> {
        Ok(count as f64 - pi_x * (pair.symmetrized_coeff(sign, 0)? - pair.symmetrized_coeff(sign, 2)?))
    };
    Ok(Sandwich {
        count,
        s_plus: s_statistic(table, form, pair, Sign::Plus, x)?,
        s_minus: s_statistic(table, form, pair, Sign::Minus, x)?,
        upper_shift: shift(Sign::Plus)?,
        lower_shift: shift(Sign::Minus)?,
    })
}

/// `max(3, ⌊√π(x) log log x⌋)` for `x >= 16`.
pub fn default_m(x: f64) -> Result<usize> {
    if !(x >= 16.0) {
        return Err(Error::invalid(format!(
            "default M needs x >= 16 (got {x}); supply M explicitly"
        )));
    }
    let raw = (prime_pi(x) as f64).sqrt() * x.ln().ln();
    Ok((raw.floor() as usize).max(3))
}

/// `moments[n]` is the mean of `s^n` for `0 <= n <= n_max`.
pub fn empirical_moments(samples: &[f64], n_max: usize) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::invalid("empirical moments of an empty sample"));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be >= 1"));
    }
    let mut moments = vec![0.0; n_max + 1];
    for &s in samples {
        let mut power = 1.0;
        for slot in moments.iter_mut() {
            *slot += power;
            power *= s;
        }
    }
    let len = samples.len() as f64;
    Ok(moments.into_iter().map(|m| m / len).collect())
}

/// Ordered compositions of `n` into `parts` positive parts.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ordered `u`-tuples of distinct entries of `items`.
fn distinct_tuples(items: &[u64], u: usize) -> Vec<Vec<u64>> {
    if u == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for tail in distinct_tuples(items, u - 1) {
        for &p in items {
            if !tail.contains(&p) {
                let mut t = tail.clone();
                t.push(p);
                out.push(t);
            }
        }
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `c_r(t)` with `Y(p)^r = Σ_t c_r(t) a_f(p^t)`, where `Y(p) = Σ_m U(m) a_f(p^m)`.
fn power_expansion(u: &[f64], r: usize) -> Result<BTreeMap<u32, Float>> {
    let big_m = u.len();
    let mut out: BTreeMap<u32, Float> = BTreeMap::new();
    let mut idx = vec![0usize; r];
    loop {
        let ms: Vec<u32> = idx.iter().map(|&i| i as u32 + 1).collect();
        let mut weight = Float::with_val(MOMENT_BITS, 1);
        for &i in &idx {
            weight *= u[i];
        }
        for (t, d) in hecke_product_expansion(&ms)? {
            let term = Float::with_val(MOMENT_BITS, &weight * &d);
            *out.entry(t).or_insert_with(|| Float::new(MOMENT_BITS)) += term;
        }
        // odometer over [0, M)^r
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < big_m {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `⟨(S±(M, f)(x))^n⟩` over the weight-`k` family from the multinomial expansion
/// over compositions of `n` and tuples of distinct primes, with every
/// `⟨Π a_f(p_i^{t_i})⟩` taken from exact traces.
pub fn theoretical_s_moment(
    k: u32,
    pair: &SelbergPair,
    x: f64,
    n: usize,
    sign: Sign,
) -> Result<Float> {
    if n == 0 {
        return Ok(Float::with_val(MOMENT_BITS, 1));
    }
    let primes = primes_up_to(x.max(0.0).floor() as u64);
    let pi_x = primes.len();

    let mut terms: u64 = 0;
    for u in 1..=n.min(pi_x) {
        let tuples: u64 = (0..u as u64).map(|i| (pi_x as u64) - i).product();
        let comps = compositions(n, u).len() as u64;
        terms = terms.saturating_add(tuples.saturating_mul(comps));
    }
    if terms > MAX_MOMENT_TERMS {
        return Err(Error::Resource(format!(
            "moment expansion has {terms} terms (limit {MAX_MOMENT_TERMS})"
        )));
    }

    let u_coeffs = pair.u_coeffs(sign);
    let expansions: Vec<BTreeMap<u32, Float>> = (0..=n)
        .map(|r| if r == 0 { Ok(BTreeMap::new()) } else { power_expansion(&u_coeffs, r) })
        .collect::<Result<_>>()?;

    let mut source = HeckeTraceSource::new(k)?;
    let mut averages: HashMap<Vec<(u64, u32)>, Float> = HashMap::new();
    let mut total = Float::new(MOMENT_BITS);
    for u in 1..=n.min(pi_x) {
        let tuples = distinct_tuples(&primes, u);
        for comp in compositions(n, u) {
            let multinomial = factorial(n) / comp.iter().map(|&r| factorial(r)).product::<u64>();
            let weight = Float::with_val(MOMENT_BITS, multinomial) / factorial(u);
            for tuple in &tuples {
                let inner = tuple_average(k, tuple, &comp, &expansions, &mut source, &mut averages)?;
                total += Float::with_val(MOMENT_BITS, &weight * &inner);
            }
        }
    }
    Ok(total)
}

/// `⟨Π_i Y(p_i)^{r_i}⟩` for distinct primes `p_i`.
fn tuple_average(
    k: u32,
    primes: &[u64],
    comp: &[usize],
    expansions: &[BTreeMap<u32, Float>],
    source: &mut HeckeTraceSource,
    averages: &mut HashMap<Vec<(u64, u32)>, Float>,
) -> Result<Float> {
    let parts: Vec<Vec<(&u32, &Float)>> = comp.iter().map(|&r| expansions[r].iter().collect()).collect();
    let mut total = Float::new(MOMENT_BITS);
    let mut idx = vec![0usize; parts.len()];
    loop {
        let mut coeff = Float::with_val(MOMENT_BITS, 1);
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(primes.len());
        for (i, part) in parts.iter().enumerate() {
            let (&t, c) = part[idx[i]];
            coeff *= c;
            if t > 0 {
                factors.push((primes[i], t));
            }
        }
        factors.sort_unstable();
        let avg = match averages.get(&factors) {
            Some(v) => v.clone(),
            None => {
                let v = if factors.is_empty() {
                    Float::with_val(MOMENT_BITS, 1)
                } else {
                    averaged_product_with(k, &factors, source)?.value
                };
                averages.insert(factors, v.clone());
                v
            }
        };
        total += coeff * avg;

        let mut pos = 0;
        loop {
            if pos == parts.len() {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < parts[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Family average of `S±(M, f)(x)^n` from tabulated eigenvalues.
pub fn empirical_s_moment(
    table: &EigenvalueTable,
    pair: &SelbergPair,
    x: f64,
    n: usize,
    sign: Sign,
) -> Result<f64> {
    if table.num_forms() == 0 {
        return Err(Error::invalid(format!("weight {} has no forms", table.weight)));
    }
    let mut sum = 0.0;
    for f in 0..table.num_forms() {
        sum += s_statistic(table, f, pair, sign, x)?.powi(n as i32);
    }
    Ok(sum / table.num_forms() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub empirical: f64,
    pub predicted: f64,
}

impl VarianceReport {
    pub fn ratio(&self) -> Option<f64> {
        (self.predicted > 0.0).then(|| self.empirical / self.predicted)
    }
}

/// Variance of `N_I(f, x)` over the family against `π(x)(μ - μ²)`.
pub fn variance_report(table: &EigenvalueTable, interval: &RealInterval, x: f64) -> Result<VarianceReport> {
    let s = table.num_forms();
    if s < 2 {
        return Err(Error::invalid(format!(
            "variance needs at least 2 forms, weight {} has {s}",
            table.weight
        )));
    }
    let counts: Vec<f64> = (0..s)
        .map(|f| count_in_interval(table, f, interval, x).map(|c| c as f64))
        .collect::<Result<_>>()?;
    let mean = counts.iter().sum::<f64>() / s as f64;
    let empirical = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / s as f64;
    let mu = semicircle_mass(interval);
    Ok(VarianceReport {
        empirical,
        predicted: prime_pi(x) as f64 * (mu - mu * mu),
    })
}

/// Kolmogorov–Smirnov distance between the empirical CDF of sorted `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], mut cdf: impl FnMut(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::invalid("KS distance of an empty sample"));
    }
    if samples.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::invalid("KS distance needs sorted samples"));
    }
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &s) in samples.iter().enumerate() {
        let f = cdf(s);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Distances of `{a_f(p) : f}` from `μ_p` and from `μ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalReport {
    pub weight: u32,
    pub prime: u64,
    pub sample_size: usize,
    pub ks_plancherel: f64,
    pub ks_semicircle: f64,
}

pub fn vertical_distribution(table: &EigenvalueTable, p: u64) -> Result<VerticalReport> {
    if table.num_forms() == 0 {
        return Err(Error::invalid(format!("weight {} has no forms", table.weight)));
    }
    let mut column = table.column(p).ok_or_else(|| {
        Error::Precondition(format!("prime {p} missing from weight {} table", table.weight))
    })?;
    column.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
    let mut failure = None;
    let ks_plancherel = ks_distance(&column, |t| {
        plancherel_cdf(p, t).unwrap_or_else(|e| {
            failure = Some(e);
            f64::NAN
        })
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let ks_semicircle = ks_distance(&column, semicircle_cdf)?;
    Ok(VerticalReport {
        weight: table.weight,
        prime: p,
        sample_size: column.len(),
        ks_plancherel,
        ks_semicircle,
    })
}

/// Per-form record of a fluctuation sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFluctuation {
    pub count: usize,
    pub s_plus: f64,
    pub s_minus: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSample {
    pub weight: u32,
    pub x: f64,
    pub m: usize,
    pub interval: RealInterval,
    /// `μ∞(I)` (closed form).
    pub mu: f64,
    pub per_form: Vec<FormFluctuation>,
}

impl FluctuationSample {
    pub fn build(table: &EigenvalueTable, interval: &RealInterval, pair: &SelbergPair, x: f64) -> Result<Self> {
        let pi_x = prime_pi(x) as f64;
        let mu = semicircle_mass(interval);
        let scale = (pi_x * (mu - mu * mu)).sqrt();
        let per_form = (0..table.num_forms())
            .map(|f| {
                let count = count_in_interval(table, f, interval, x)?;
                let z = if scale > 0.0 {
                    (count as f64 - pi_x * mu) / scale
                } else {
                    0.0
                };
                Ok(FormFluctuation {
                    count,
                    s_plus: s_statistic(table, f, pair, Sign::Plus, x)?,
                    s_minus: s_statistic(table, f, pair, Sign::Minus, x)?,
                    z,
                })
            })
            .collect::<Result<_>>()?;
        Ok(FluctuationSample {
            weight: table.weight,
            x,
            m: pair.m,
            interval: *interval,
            mu,
            per_form,
        })
    }

    /// `π(x)(μ - μ²)`; zero for intervals of semicircle mass 0 or 1.
    pub fn predicted_variance(&self) -> f64 {
        prime_pi(self.x) as f64 * (self.mu - self.mu * self.mu)
    }

    pub fn is_degenerate(&self) -> bool {
        self.predicted_variance() <= 0.0
    }
}

/// Moments and distances of the normalized fluctuation `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub weight: u32,
    pub x: f64,
    pub m: usize,
    pub interval: RealInterval,
    pub sample_size: usize,
    pub moments: Vec<f64>,
    pub variance: f64,
    pub gaussian_targets: Vec<f64>,
    pub ks_gaussian: f64,
    pub degenerate: bool,
}

pub fn stats_report(sample: &FluctuationSample, n_max: usize) -> Result<StatsReport> {
    let z: Vec<f64> = sample.per_form.iter().map(|r| r.z).collect();
    let moments = empirical_moments(&z, n_max)?;
    let variance = moments.get(2).copied().unwrap_or(0.0) - moments[1] * moments[1];
    let mut sorted = z.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("NaN fluctuation"));
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let ks_gaussian = ks_distance(&sorted, |t| normal.cdf(t))?;
    Ok(StatsReport {
        weight: sample.weight,
        x: sample.x,
        m: sample.m,
        interval: sample.interval,
        sample_size: z.len(),
        moments,
        variance,
        gaussian_targets: (0..=n_max as u32)
            .map(|n| crate::measures::gaussian_moment(n).to_f64())
            .collect(),
        ks_gaussian,
        degenerate: sample.is_degenerate(),
    })
}

/// `N_I(f, x)` family mean against `π(x) μ∞(I)`.
pub fn first_moment_gap(table: &EigenvalueTable, interval: &RealInterval, x: f64) -> Result<f64> {
    let s = table.num_forms();
    if s == 0 {
        return Err(Error::invalid(format!("weight {} has no forms", table.weight)));
    }
    let mut total = 0usize;
    for f in 0..s {
        total += count_in_interval(table, f, interval, x)?;
    }
    Ok((total as f64 / s as f64 - prime_pi(x) as f64 * semicircle_mass(interval)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::delta;
    use crate::selberg::{map_interval, selberg_pair};

    /// Weight-12 table from `τ(p) / p^{11/2}`.
    fn delta_table(pmax: u64) -> EigenvalueTable {
        let d = delta(pmax as usize + 1).unwrap();
        let primes = primes_up_to(pmax);
        let row: Vec<f64> = primes
            .iter()
            .map(|&p| d.coeff(p as usize).unwrap().to_f64() / (p as f64).powf(5.5))
            .collect();
        EigenvalueTable {
            weight: 12,
            residuals: vec![vec![0.0; primes.len()]],
            primes,
            values: vec![row],
        }
    }

    fn iv(a: f64, b: f64) -> RealInterval {
        RealInterval::new(a, b).unwrap()
    }

    #[test]
    fn counts() {
        let t = delta_table(30);
        assert_eq!(count_in_interval(&t, 0, &iv(-2.0, 2.0), 30.0).unwrap(), 10);
        assert_eq!(count_in_interval(&t, 0, &iv(-1.0, 1.0), 10.0).unwrap(), 4);
        assert_eq!(count_in_interval(&t, 0, &iv(0.123, 0.123), 30.0).unwrap(), 0);
        match count_in_interval(&t, 0, &iv(-2.0, 2.0), 40.0) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("29"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(count_in_interval(&t, 1, &iv(-2.0, 2.0), 10.0).is_err());
    }

    #[test]
    fn s_statistic_forms_and_sandwich() {
        let t = delta_table(30);
        let i = iv(-1.0, 1.0);
        let pair = selberg_pair(map_interval(i.a, i.b).unwrap(), 10).unwrap();
        let s = sandwich(&t, 0, &i, &pair, 10.0).unwrap();
        assert!(s.violation() <= 1e-9, "{s:?}");
        assert_eq!(s.count, 4);
    }

    #[test]
    fn default_m_examples() {
        assert_eq!(default_m(16.0).unwrap(), 3);
        assert_eq!(default_m(100.0).unwrap(), 7);
        assert!(default_m(15.9).is_err());
        let mut prev = 0;
        for x in (16..2000).step_by(7) {
            let m = default_m(x as f64).unwrap();
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn moment_examples() {
        let m = empirical_moments(&[1.5; 4], 3).unwrap();
        assert_eq!(m, vec![1.0, 1.5, 2.25, 3.375]);
        let m = empirical_moments(&[-1.0, 1.0], 4).unwrap();
        assert_eq!(m, vec![1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(empirical_moments(&[], 2).is_err());
        assert!(empirical_moments(&[1.0], 0).is_err());
    }

    #[test]
    fn compositions_and_tuples() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(3, 1), vec![vec![3]]);
        assert_eq!(compositions(2, 3).len(), 0);
        assert_eq!(distinct_tuples(&[2, 3, 5], 2).len(), 6);
    }

    #[test]
    fn ks_examples() {
        let d = ks_distance(&[0.0], |t| 0.5 + t).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert!(ks_distance(&[1.0, 0.0], |t| t).is_err());
        assert!(ks_distance(&[], |t| t).is_err());
        let n = 99;
        let q: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
        assert!(ks_distance(&q, |t| t).unwrap() <= 1.0 / (n + 1) as f64 + 1e-12);
    }

    #[test]
    fn weight_12_moments_agree() {
        let t = delta_table(10);
        let i = iv(-1.0, 1.0);
        let pair = selberg_pair(map_interval(i.a, i.b).unwrap(), 3).unwrap();
        for sign in [Sign::Plus, Sign::Minus] {
            for n in 0..=2 {
                let exact = theoretical_s_moment(12, &pair, 10.0, n, sign).unwrap().to_f64();
                let emp = empirical_s_moment(&t, &pair, 10.0, n, sign).unwrap();
                assert!((exact - emp).abs() < 1e-9, "n={n}: {exact} vs {emp}");
            }
        }
    }

    #[test]
    fn variance_degenerate() {
        let mut t = delta_table(10);
        t.values.push(t.values[0].iter().map(|v| -v).collect());
        t.residuals.push(t.residuals[0].clone());
        let r = variance_report(&t, &iv(-2.0, 2.0), 10.0).unwrap();
        assert_eq!((r.empirical, r.predicted), (0.0, 0.0));
        let r = variance_report(&t, &iv(3.0, 3.0), 10.0).unwrap();
        assert_eq!((r.empirical, r.predicted), (0.0, 0.0));
        assert!(variance_report(&delta_table(10), &iv(-1.0, 1.0), 10.0).is_err());
    }
}
