//! Property tests over the module invariants.

use std::f64::consts::PI;

use proptest::prelude::*;
use rug::{Integer, Rational};

use stfluct::arith::primes_up_to;
use stfluct::cli::{EigenCache, RunConfig};
use stfluct::hecke::{
    chebyshev_x, cosine_transform, cosine_transform_exact, eigen_system, hecke_matrix, prime_power_eigenvalue,
    required_precision, EigenvalueTable,
};
use stfluct::measures::{
    plancherel_cdf, plancherel_density, semicircle_cdf, semicircle_density, semicircle_mass,
    semicircle_mass_quadrature, RealInterval,
};
use stfluct::qexp::{dim_cusp_forms, eisenstein_series, miller_basis, QExpansion};
use stfluct::selberg::{map_interval, selberg_pair, verify_contract, Sign, TorusInterval};
use stfluct::stats::sandwich;
use stfluct::traceformula::{hecke_product_expansion, lucas_term, trace_unnormalized};

fn even_weight(lo: u32, hi: u32) -> impl Strategy<Value = u32> {
    (lo / 2..=hi / 2).prop_map(|h| 2 * h)
}

fn series(prec: usize) -> impl Strategy<Value = QExpansion> {
    prop::collection::vec(-1000i64..1000, prec).prop_map(|c| QExpansion::from_i64(0, &c))
}

proptest! {
    #[test]
    fn series_product_associates(a in series(12), b in series(9), c in series(15)) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert_eq!(left.prec(), 9);
        prop_assert_eq!(left.coeffs(), right.coeffs());
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn chebyshev_product_identity(num in -40i32..40, den in 1i32..20, m in 0u32..12, n in 0u32..12) {
        let x = Rational::from((num, den));
        let lhs = Rational::from(chebyshev_x(&x, m) * chebyshev_x(&x, n));
        let mut rhs = Rational::new();
        for l in 0..=m.min(n) {
            rhs += chebyshev_x(&x, m + n - 2 * l);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cosine_transform_matches_angle(theta in 0.0..PI, m in 1i32..40) {
        let a = 2.0 * theta.cos();
        let c = cosine_transform(a, m).unwrap();
        prop_assert!((c - 2.0 * (m as f64 * theta).cos()).abs() < 1e-9);
        prop_assert_eq!(cosine_transform(a, -m).unwrap(), c);
    }

    #[test]
    fn cosine_transform_is_chebyshev_difference(num in -40i32..40, den in 1i32..20, m in 2i32..20) {
        let x = Rational::from((num, den));
        let want = Rational::from(chebyshev_x(&x, m as u32) - chebyshev_x(&x, m as u32 - 2));
        prop_assert_eq!(cosine_transform_exact(&x, m), want);
    }

    #[test]
    fn lucas_parity(t in -60i64..60, n in 1u64..400, k in (1u32..40).prop_map(|h| 2 * h)) {
        prop_assume!(t * t < 4 * n as i64);
        let pos = lucas_term(t, n, k).unwrap();
        let neg = lucas_term(-t, n, k).unwrap();
        prop_assert_eq!(neg, pos);
    }

    #[test]
    fn product_expansion_reproduces_product(ms in prop::collection::vec(1u32..=12, 1..=5), theta in 0.0..PI) {
        let d = hecke_product_expansion(&ms).unwrap();
        let x = Rational::from_f64(2.0 * theta.cos()).unwrap();
        let mut lhs = Rational::from(1);
        for &m in &ms {
            lhs *= chebyshev_x(&x, m);
        }
        let mut rhs = Rational::new();
        for (&t, c) in &d {
            rhs += Rational::from(c * chebyshev_x(&x, t));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_expansion_bounds(ms in prop::collection::vec(1u32..=12, 2..=5)) {
        let d = hecke_product_expansion(&ms).unwrap();
        let m = *ms.iter().max().unwrap();
        let r = ms.len() as u32;
        let zero = d.get(&0).cloned().unwrap_or_default();
        if r == 2 {
            prop_assert_eq!(zero == 1, ms[0] == ms[1]);
            prop_assert!(zero <= 1);
        } else {
            let top = d.values().max().unwrap().clone();
            prop_assert!(top <= Integer::from(Integer::u_pow_u(m + 1, r - 2)));
            prop_assert!(zero <= Integer::from(Integer::u_pow_u(m + 1, r - 3)));
        }
    }

    #[test]
    fn trace_formula_matches_matrix(k in even_weight(12, 90), n in 1u64..=60) {
        let d = dim_cusp_forms(k).unwrap();
        let formula = trace_unnormalized(k, n).unwrap();
        prop_assert_eq!(formula.total.denom(), &Integer::from(1));
        if d == 0 {
            prop_assert_eq!(formula.integer(), 0);
        } else {
            let basis = miller_basis(k, required_precision(n, d)).unwrap();
            prop_assert_eq!(formula.integer(), hecke_matrix(k, n, &basis).unwrap().trace());
        }
    }

    #[test]
    fn semicircle_closed_form_matches_quadrature(u in -2.0..=2.0f64, v in -2.0..=2.0f64) {
        let i = RealInterval::new(u.min(v), u.max(v)).unwrap();
        prop_assert!((semicircle_mass(&i) - semicircle_mass_quadrature(&i)).abs() <= 1e-10);
    }

    #[test]
    fn cdfs_are_monotone(u in -2.0..=2.0f64, v in -2.0..=2.0f64, pi in 0usize..10) {
        let p = primes_up_to(29)[pi];
        let (lo, hi) = (u.min(v), u.max(v));
        prop_assert!(semicircle_cdf(lo) <= semicircle_cdf(hi));
        prop_assert!(plancherel_cdf(p, lo).unwrap() <= plancherel_cdf(p, hi).unwrap() + 1e-12);
        let mass = semicircle_mass(&RealInterval::new(-2.0, hi).unwrap());
        prop_assert!(mass >= semicircle_mass(&RealInterval::new(-2.0, lo).unwrap()));
    }

    #[test]
    fn zeroth_coefficients_are_exact(u in 0.0..=0.5f64, v in 0.0..=0.5f64, m in 3usize..200) {
        let (alpha, beta) = (u.min(v), u.max(v));
        let pair = selberg_pair(TorusInterval::new(alpha, beta).unwrap(), m).unwrap();
        let shift = 1.0 / (m + 1) as f64;
        prop_assert_eq!(pair.coeff(Sign::Plus, 0).unwrap().re, beta - alpha + shift);
        prop_assert_eq!(pair.coeff(Sign::Minus, 0).unwrap().re, beta - alpha - shift);
    }

    #[test]
    fn config_round_trips_through_text(
        lo in 6u32..50,
        span in 0u32..20,
        x in 2.0..100.0f64,
        pmax in 2u64..200,
        m in prop::option::of(3usize..20),
        moment_max in 1usize..8,
        threads in 1usize..8,
    ) {
        let text = format!(
            "# run\nweights = {}..{}\nx = {x}\npmax = {pmax}\nintervals = -1:1, 0:2\nM = {}\nmoment_max = {moment_max}\nthreads = {threads}\n",
            2 * lo,
            2 * (lo + span),
            m.map_or("default".to_string(), |v| v.to_string()),
        );
        let cfg = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(cfg.weights, (lo..=lo + span).map(|h| 2 * h).collect::<Vec<_>>());
        prop_assert_eq!(cfg.x, x);
        prop_assert_eq!(cfg.pmax, pmax);
        prop_assert_eq!(cfg.m, m);
        prop_assert_eq!(cfg.intervals.len(), 2);
        prop_assert_eq!(cfg.threads, threads);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn selberg_contract_holds(u in 0.0..=0.5f64, v in 0.0..=0.5f64, m in 3usize..60) {
        let (alpha, beta) = (u.min(v), u.max(v));
        let pair = selberg_pair(TorusInterval::new(alpha, beta).unwrap(), m).unwrap();
        let report = verify_contract(&pair, 4000).unwrap();
        prop_assert!(report.passes(1e-12), "{report:?}");
    }

    #[test]
    fn cache_round_trip_is_bit_exact(
        weight in even_weight(12, 4000),
        rows in prop::collection::vec(prop::collection::vec(-2.0..=2.0f64, 10), 1..6),
        res in 0.0..1e-8f64,
    ) {
        let table = EigenvalueTable {
            weight,
            primes: primes_up_to(29),
            residuals: rows.iter().map(|r| vec![res; r.len()]).collect(),
            values: rows,
        };
        let mut cache = EigenCache::new();
        cache.insert_table(&table);
        let bytes = cache.to_bytes();
        let back = EigenCache::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &cache);
        prop_assert_eq!(back.to_bytes(), bytes);
        let restored = back.table(weight, 29).unwrap();
        for (a, b) in restored.values.iter().flatten().zip(table.values.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn sandwich_holds_on_small_weights(
        k in even_weight(12, 120),
        u in -2.0..=2.0f64,
        v in -2.0..=2.0f64,
        m in 3usize..12,
        x in 2.0..=29.0f64,
    ) {
        let table = eigen_system(k, 29).unwrap();
        let i = RealInterval::new(u.min(v), u.max(v)).unwrap();
        let pair = selberg_pair(map_interval(i.a, i.b).unwrap(), m).unwrap();
        for f in 0..table.num_forms() {
            let s = sandwich(&table, f, &i, &pair, x).unwrap();
            prop_assert!(s.violation() <= 1e-9, "{s:?}");
        }
    }
}

#[test]
fn eisenstein_cube_minus_square_divisible_by_1728() {
    let e4 = eisenstein_series(4, 60).unwrap();
    let e6 = eisenstein_series(6, 60).unwrap();
    let diff = &e4.pow(3) - &e6.pow(2);
    for c in diff.coeffs() {
        assert!(c.is_divisible_u(1728));
    }
}

#[test]
fn miller_basis_has_full_dimension() {
    for k in (12..=200).step_by(2) {
        let d = dim_cusp_forms(k).unwrap();
        assert_eq!(miller_basis(k, d + 5).unwrap().forms.len(), d, "weight {k}");
    }
}

#[test]
fn plancherel_ratio_tends_to_one() {
    for p in primes_up_to(200).into_iter().filter(|&p| p >= 3) {
        for j in -19..=19 {
            let t = j as f64 / 10.0;
            let ratio = plancherel_density(p, t).unwrap() / semicircle_density(t);
            assert!((ratio - 1.0).abs() <= 3.0 / (p as f64).sqrt(), "p = {p}, t = {t}");
        }
    }
}

#[test]
fn plancherel_ratio_at_two_exceeds_the_generic_bound_at_the_edge() {
    // (p + 1) / (p + 2 + 1/p - t^2) at p = 2, t = 1.9.
    let ratio = plancherel_density(2, 1.9).unwrap() / semicircle_density(1.9);
    assert!((ratio - 3.0 / 0.89).abs() < 1e-12);
    assert!(ratio - 1.0 > 3.0 / 2f64.sqrt());
}

#[test]
fn hecke_relations_hold_on_tables() {
    for k in [24u32, 36, 48, 60, 120] {
        let table = eigen_system(k, 29).unwrap();
        for row in &table.values {
            for &a in row {
                for i in 0..=6u32 {
                    for j in 0..=6 - i {
                        let lhs = prime_power_eigenvalue(a, i) * prime_power_eigenvalue(a, j);
                        let rhs: f64 = (0..=i.min(j)).map(|l| prime_power_eigenvalue(a, i + j - 2 * l)).sum();
                        assert!((lhs - rhs).abs() < 1e-6);
                    }
                }
            }
        }
    }
}

/// Σ_f a_f(p) against the normalized trace of T_p.
#[test]
fn table_columns_sum_to_traces() {
    for k in [12u32, 24, 36, 60, 100, 200] {
        let table = eigen_system(k, 29).unwrap();
        for (i, &p) in table.primes.iter().enumerate() {
            let sum: f64 = table.values.iter().map(|r| r[i]).sum();
            let trace = trace_unnormalized(k, p).unwrap().integer().to_f64() / (p as f64).powf((k as f64 - 1.0) / 2.0);
            assert!((sum - trace).abs() < 1e-6, "k = {k}, p = {p}");
        }
    }
}

/// Power sums of a_f(p) a_f(q) against traces of powers of the integer matrix T_pq.
#[test]
fn coprime_products_match_hecke_matrix() {
    for k in [24u32, 36, 48, 60] {
        let table = eigen_system(k, 7).unwrap();
        let d = table.num_forms();
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 7)] {
            let n = p * q;
            let basis = miller_basis(k, required_precision(n, d)).unwrap();
            let t = hecke_matrix(k, n, &basis).unwrap();
            let (ip, iq) = (table.prime_index(p).unwrap(), table.prime_index(q).unwrap());
            let eig: Vec<f64> = table.values.iter().map(|r| r[ip] * r[iq]).collect();
            let mut power = t.entries.clone();
            for j in 1..=d as i32 {
                let tr: Integer = (0..d).map(|r| power[r][r].clone()).sum();
                let want = tr.to_f64() / (n as f64).powf(j as f64 * (k as f64 - 1.0) / 2.0);
                let got: f64 = eig.iter().map(|e| e.powi(j)).sum();
                assert!((got - want).abs() < 1e-6 * want.abs().max(1.0), "k = {k}, n = {n}, j = {j}");
                power = (0..d)
                    .map(|r| {
                        (0..d)
                            .map(|c| (0..d).map(|l| Integer::from(&power[r][l] * &t.entries[l][c])).sum())
                            .collect()
                    })
                    .collect();
            }
        }
    }
}
