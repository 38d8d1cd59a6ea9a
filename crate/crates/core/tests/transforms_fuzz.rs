mod common;

use common::{dbt_qsc_suite, tol, transforms_suite};
use krein_core::generate::{pontryagin_operator, rng};
use krein_core::scalar::c;
use krein_core::transforms::lp::{defect_span_full, lp_analysis};
use rand::Rng;

#[test]
fn flt_identities() {
    transforms_suite(0..60).assert_passed();
}

#[test]
fn dbt_and_qsc_identities() {
    dbt_qsc_suite(0..60).assert_passed();
}

#[test]
fn high_grid_spans_like_a_generic_grid() {
    let t = tol();
    let mut simple = 0;
    for seed in 0..60u64 {
        let mut r = rng(300 + seed);
        let n = r.random_range(3..=6);
        let kappa = r.random_range(1..=2.min(n - 2));
        let defect = r.random_range(1..=(n - kappa).min(2));
        let (space, a) = pontryagin_operator::<f64>(&mut r, n, kappa, defect, true, &t).unwrap();
        let out = lp_analysis(&a, &space, &t).unwrap();
        assert!(out.in_l, "{seed}");
        let generic: Vec<_> = (0..4)
            .flat_map(|_| {
                let z = c::<f64>(r.random_range(-2.0..2.0), r.random_range(0.1..2.0));
                [z, z.conj()]
            })
            .collect();
        let full = defect_span_full(&a, &space, &generic, &t).unwrap();
        assert_eq!(out.simple, Some(full), "{seed}");
        simple += full as usize;
    }
    assert!(simple > 10);
}

#[test]
fn finite_symmetric_operators_have_equal_defect_numbers() {
    let t = tol();
    for seed in 0..40u64 {
        let mut r = rng(700 + seed);
        let n = r.random_range(2..=6);
        let kappa = r.random_range(0..=n);
        let defect = r.random_range(0..=n / 2);
        let (space, a) = pontryagin_operator::<f64>(&mut r, n, kappa, defect, false, &t).unwrap();
        let (dp, dm) = a.defect_numbers(&space, &t).unwrap();
        assert_eq!(dp, dm, "{seed}");
    }
}
