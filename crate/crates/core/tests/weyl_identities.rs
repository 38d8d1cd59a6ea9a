use krein_core::generate::{self, rng, PAIR_KINDS};
use krein_core::weyl::{
    check_gamma_adjoint, check_gamma_difference, check_weyl_difference, default_grid,
    eigen_criteria, krein_resolvent, weyl_adjoint_symmetry,
};
use krein_core::{Error, Tol};
use num_complex::Complex;

fn tol() -> Tol<f64> {
    Tol::default()
}

#[test]
fn gamma_and_weyl_identities_over_random_pairs() {
    let t = tol();
    let mut failures = Vec::new();
    for seed in 0..60u64 {
        let mut r = rng(seed);
        let kind = PAIR_KINDS[seed as usize % PAIR_KINDS.len()];
        let n = 2 + (seed as usize % 5);
        let bp = generate::random_boundary_pair::<f64>(&mut r, kind, n, &t).unwrap_or_else(|e| panic!("{seed} {kind:?} {n}: {e}"));
        let grid = default_grid(&bp, &t);
        for (k, &z) in grid.iter().enumerate() {
            let z0 = grid[(k + 3) % grid.len()];
            let a = check_gamma_difference(&bp, z, z0, &t).unwrap();
            let b = check_weyl_difference(&bp, z, z0, &t).unwrap();
            let c = check_gamma_adjoint(&bp, z, &t).unwrap();
            let s = weyl_adjoint_symmetry(&bp, z, &t).unwrap();
            if a > t.angle_atol || b > t.angle_atol || !c.consistent() {
                failures.push(format!("{seed} {kind:?} {z}: a={a:e} b={b:e} c={c:?}"));
            }
            if bp.is_unitary(&t) && s > t.angle_atol {
                failures.push(format!("{seed} {kind:?} {z}: adjoint symmetry {s:e}"));
            }
            let theta = generate::random_theta::<f64>(&mut r, bp.g0(), bp.g1(), &t);
            let rep = krein_resolvent(&bp, &theta, z, &t).unwrap();
            if !rep.included || (rep.kernels_agree && !rep.equal) {
                failures.push(format!("{seed} {kind:?} {z}: resolvent incl={} kern={} eq={} angle={:e}", rep.included, rep.kernels_agree, rep.equal, rep.inclusion_angle));
            }
            if let Some((_, _, ang)) = &rep.restricted {
                if *ang > t.angle_atol {
                    failures.push(format!("{seed} {kind:?} {z}: restricted resolvent {ang:e}"));
                }
            }
            match eigen_criteria(&bp, &theta, z, &t) {
                Ok(ec) if !ec.agree() => failures.push(format!("{seed} {kind:?} {z}: criteria {ec:?}")),
                Ok(_) | Err(Error::PointSpectrum) => {}
                Err(e) => panic!("{e}"),
            }
        }
        let _ = Complex::new(0.0, 0.0);
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
