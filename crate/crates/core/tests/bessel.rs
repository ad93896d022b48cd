use std::f64::consts::PI;

use proptest::prelude::*;

use circulant_trees::graphs::{CirculantSpec, GraphSpec, TorusSpec};
use circulant_trees::specfun::{
    bessel_i_scaled, bessel_tail_bound, required_truncation, theta_discrete_bessel,
    theta_discrete_spectral,
};

fn spec() -> impl Strategy<Value = GraphSpec> {
    let circ = (5u64..=200)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(2..=n / 2, 0..3)))
        .prop_map(|(n, mut g)| {
            g.push(1);
            g.sort_unstable();
            GraphSpec::from(CirculantSpec::new(n, g).unwrap())
        });
    let tor = proptest::collection::vec(1u64..=14, 1..=3)
        .prop_filter("≤ 200 vertices", |s| (2..=200).contains(&s.iter().product::<u64>()))
        .prop_map(|s| GraphSpec::from(TorusSpec::new(s).unwrap()));
    prop_oneof![circ, tor]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn theta_inversion(spec in spec()) {
        for t in [0.05, 0.1, 0.5, 1.0, 5.0] {
            let a = theta_discrete_spectral(&spec, t).unwrap().value;
            let k = required_truncation(4.0 * spec.dimension() as f64 * t, 1e-15).max(4);
            let b = theta_discrete_bessel(&spec, t, k).unwrap();
            prop_assert!((a - b.value).abs() < 1e-9, "t={} {} vs {}", t, a, b.value);
        }
    }

    #[test]
    fn index_monotone(t in 0.01f64..2e4, k in 0i64..60) {
        let a = bessel_i_scaled(k, t).unwrap();
        let b = bessel_i_scaled(k + 1, t).unwrap();
        prop_assert!(b <= a, "t={} k={}: {} < {}", t, k, a, b);
        prop_assert_eq!(bessel_i_scaled(-k, t).unwrap(), a);
    }
}

#[test]
fn probability_identity_with_certified_truncation() {
    for t in [0.1, 1.0, 7.5, 40.0] {
        let u = 2.0 * t;
        let k = required_truncation(u, 1e-14);
        assert!(bessel_tail_bound(u, k) <= 1e-14);
        let total: f64 = (-(k as i64)..=k as i64)
            .map(|j| bessel_i_scaled(j, u).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12, "t={t}: {total}");
    }
}

#[test]
fn large_n_gaussian_limit() {
    let (n, t) = (200u64, 1.0);
    let u = 2.0 * (n * n) as f64 * t;
    for k in 0..=2i64 {
        let lhs = n as f64 * bessel_i_scaled(n as i64 * k, u).unwrap();
        let rhs = (4.0 * PI * t).powf(-0.5) * (-(k * k) as f64 / (4.0 * t)).exp();
        assert!((lhs / rhs - 1.0).abs() < 0.01, "k={k}: {lhs} vs {rhs}");
    }
}

#[test]
fn sublinear_lattice_sum_tends_to_one() {
    let n = 10_000u64;
    let a = (n as f64).sqrt().floor() as i64;
    let u = 2.0 * (n * n) as f64;
    let mut total = bessel_i_scaled(0, u).unwrap();
    let mut k = 1;
    loop {
        let term = bessel_i_scaled(a * k, u).unwrap();
        total += 2.0 * term;
        if term < 1e-20 {
            break;
        }
        k += 1;
    }
    assert!((a as f64 * total - 1.0).abs() < 1e-6, "{}", a as f64 * total);
}

#[test]
fn monotone_on_grid() {
    for t in [1e-3, 0.5, 3.0, 29.0, 31.0, 500.0, 1e6, 2e9] {
        let values: Vec<f64> = (0..40).map(|k| bessel_i_scaled(k, t).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0]), "t={t}");
    }
}
