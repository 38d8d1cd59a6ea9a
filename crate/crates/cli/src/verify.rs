//! Verification suites run against loaded instances.

use clap::ValueEnum;
use krein_core::coupling::{
    block_formulas, classify_coupled, couple, coupled_weyl, defect_formula, sharp_shape_angle,
};
use krein_core::equivalence::{check_unit_condition, check_unitp, compare_pairs, e_map_identity, minimality_check};
use krein_core::generate::{self, rng};
use krein_core::transforms::dbt::{dbt_build, dbt_representing_pair};
use krein_core::transforms::flt::{build_w, flt_weyl, ring_triple_weyl, x_lambda_identity};
use krein_core::transforms::qsc::qsc_weyl_residual;
use krein_core::weyl::{
    check_gamma_adjoint, check_gamma_difference, check_weyl_difference, eigen_criteria, krein_resolvent,
    weyl_adjoint_symmetry, weyl_operator, weyl_relation,
};
use krein_core::{BoundaryPair, Error, SpectralClass, Tol};
use num_complex::Complex;
use serde_json::{json, Value};

use crate::instance::{matrix_to_json, Instance};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Green,
    Weyl,
    Resolvent,
    Coupling,
    Equivalence,
    Flt,
    Dbt,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Green => "green",
            Suite::Weyl => "weyl",
            Suite::Resolvent => "resolvent",
            Suite::Coupling => "coupling",
            Suite::Equivalence => "equivalence",
            Suite::Flt => "flt",
            Suite::Dbt => "dbt",
            Suite::All => "all",
        }
    }
}

const SINGLE: [Suite; 7] =
    [Suite::Green, Suite::Weyl, Suite::Resolvent, Suite::Coupling, Suite::Equivalence, Suite::Flt, Suite::Dbt];

type Z = Complex<f64>;

pub fn verify(suite: Suite, instances: &[Instance], names: Vec<String>, grid: Option<&[Z]>) -> Report {
    let mut report = Report::new(suite.name(), names.clone());
    let suites: Vec<Suite> = if suite == Suite::All { SINGLE.to_vec() } else { vec![suite] };
    for s in suites {
        let mut part = Report::new(s.name(), names.clone());
        if s == Suite::Equivalence && instances.len() == 2 {
            compare_two(&mut part, &instances[0], &instances[1], grid);
        } else {
            for (k, inst) in instances.iter().enumerate() {
                let g = grid.map(<[Z]>::to_vec).unwrap_or_else(|| krein_core::weyl::default_grid(&inst.bp, &inst.tol));
                match s {
                    Suite::Green => green(&mut part, k, inst),
                    Suite::Weyl => weyl(&mut part, k, inst, &g),
                    Suite::Resolvent => resolvent(&mut part, k, inst, &g),
                    Suite::Coupling => coupling(&mut part, k, inst, &g),
                    Suite::Equivalence => equivalence(&mut part, k, inst, &g),
                    Suite::Flt => flt(&mut part, k, inst, &g),
                    Suite::Dbt => dbt(&mut part, k, inst, &g),
                    Suite::All => unreachable!(),
                }
            }
        }
        if suite == Suite::All {
            report.merge(part);
        } else {
            report = part;
        }
    }
    report.finish()
}

fn green(rep: &mut Report, k: usize, inst: &Instance) {
    let (bp, t) = (&inst.bp, &inst.tol);
    rep.bounded(k, "green_identity", None, bp.green_residual(), t.residual_atol);
    match bp.adjoint_formula_angles(t) {
        Ok((b, a)) => {
            rep.bounded(k, "boundary_adjoint_formula_a", None, a, t.angle_atol);
            rep.bounded(k, "boundary_adjoint_formula_b", None, b, t.angle_atol);
        }
        Err(e) => rep.failed(k, "boundary_adjoint_formula_b", None, e),
    }
    rep.holds(k, "boundary_domains", None, bp.check_ibp(t).is_ok(), bp.check_ibp(t).err().map(|e| e.to_string()));
}

fn weyl(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let (bp, t) = (&inst.bp, &inst.tol);
    if grid.is_empty() {
        rep.skipped(k, "gamma_difference", None, "empty grid".into());
    }
    let unitary = bp.is_unitary(t);
    for (i, &z) in grid.iter().enumerate() {
        let z0 = grid[(i + 1) % grid.len()];
        if z0 == z {
            rep.skipped(k, "gamma_difference", Some(z), "needs a second grid point".into());
        } else {
            match check_gamma_difference(bp, z, z0, t) {
                Ok(a) => rep.bounded(k, "gamma_difference", Some(z), a, t.angle_atol),
                Err(e) => rep.failed(k, "gamma_difference", Some(z), e),
            }
            match check_weyl_difference(bp, z, z0, t) {
                Ok(a) => rep.bounded(k, "weyl_difference", Some(z), a, t.angle_atol),
                Err(e) => rep.failed(k, "weyl_difference", Some(z), e),
            }
        }
        match check_gamma_adjoint(bp, z, t) {
            Ok(g) => rep.holds(k, "gamma_adjoint_containment", Some(z), g.consistent(), Some(format!("{g:?}"))),
            Err(e) => rep.failed(k, "gamma_adjoint_containment", Some(z), e),
        }
        if unitary {
            match weyl_adjoint_symmetry(bp, z, t) {
                Ok(a) => rep.bounded(k, "weyl_adjoint_symmetry", Some(z), a, t.angle_atol),
                Err(e) => rep.failed(k, "weyl_adjoint_symmetry", Some(z), e),
            }
        }
        if let Some((tm, nsp)) = &inst.qsc {
            match qsc_weyl_residual(bp, tm, nsp, z, t) {
                Ok(r) => rep.bounded(k, "qsc_weyl_function", Some(z), r, t.residual_atol),
                Err(Error::NotResolvent) => rep.skipped(k, "qsc_weyl_function", Some(z), "|λ| ≤ 1".into()),
                Err(e) => rep.failed(k, "qsc_weyl_function", Some(z), e),
            }
        }
    }
}

fn resolvent(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let (bp, t) = (&inst.bp, &inst.tol);
    let mut r = rng(inst.file.seed ^ 0x5eed);
    let a0 = bp.a0(t);
    for &z in grid {
        let theta = generate::random_theta::<f64>(&mut r, bp.g0(), bp.g1(), t);
        match krein_resolvent(bp, &theta, z, t) {
            Ok(res) => {
                rep.holds(k, "resolvent_inclusion", Some(z), res.included, None);
                rep.holds(k, "resolvent_equality_when_kernels_agree", Some(z), !res.kernels_agree || res.equal, None);
                match res.restricted {
                    Some((_, _, angle)) => rep.bounded(k, "resolvent_formula", Some(z), angle, t.angle_atol),
                    None => rep.skipped(k, "resolvent_formula", Some(z), "λ is an eigenvalue of A₀".into()),
                }
            }
            Err(e) => rep.failed(k, "resolvent_inclusion", Some(z), e),
        }
        let point = a0.spectral_classify(z, t).map(|p| p.class == SpectralClass::Point).unwrap_or(false);
        if point {
            rep.skipped(k, "spectral_criteria", Some(z), "λ is an eigenvalue of A₀".into());
            continue;
        }
        match eigen_criteria(bp, &theta, z, t) {
            Ok(ec) => rep.holds(k, "spectral_criteria", Some(z), ec.agree(), Some(format!("{ec:?}"))),
            Err(Error::PointSpectrum) => rep.skipped(k, "spectral_criteria", Some(z), "λ is an eigenvalue of A₀".into()),
            Err(e) => rep.failed(k, "spectral_criteria", Some(z), e),
        }
    }
}

fn coupling(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let (bp, t) = (&inst.bp, &inst.tol);
    let ct = match couple(bp, t) {
        Ok(ct) => ct,
        Err(e) => return rep.failed(k, "coupled_block_formulas", None, e),
    };
    rep.bounded(k, "coupled_block_formulas", None, block_formulas(&ct, t).max(), t.angle_atol);
    match sharp_shape_angle(&ct, t) {
        Ok(a) => rep.bounded(k, "coupled_sharp_shape", None, a, t.angle_atol),
        Err(e) => rep.failed(k, "coupled_sharp_shape", None, e),
    }
    match classify_coupled(&ct, t) {
        Ok(l) => rep.holds(k, "coupled_ladder", None, l.agree(), Some(format!("{l:?}"))),
        Err(e) => rep.failed(k, "coupled_ladder", None, e),
    }
    match defect_formula(bp.pair(), t) {
        Ok(df) => {
            rep.bounded(k, "defect_formula", None, df.max_angle, t.angle_atol);
            rep.holds(k, "defect_formula_dimensions", None, df.dims_equal(), None);
        }
        Err(e) => rep.failed(k, "defect_formula", None, e),
    }
    for &z in grid {
        match coupled_weyl(&ct, z, t) {
            Ok(w) => {
                rep.bounded(k, "coupled_weyl_antidiagonal", Some(z), w.block_angle, t.angle_atol);
                if let Some(a) = w.adjoint_link {
                    rep.bounded(k, "coupled_weyl_adjoint", Some(z), a, t.angle_atol);
                }
            }
            Err(e) => rep.failed(k, "coupled_weyl_antidiagonal", Some(z), e),
        }
    }
}

/// Pushes the instance by a standard unitary drawn from its seed and checks
/// that the pushed pair is recognised.
fn equivalence(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let (bp, t) = (&inst.bp, &inst.tol);
    match e_map_identity(bp, t) {
        Ok((_, _, angle)) => rep.bounded(k, "e_map_identity", None, angle, t.angle_atol),
        Err(e) => rep.failed(k, "e_map_identity", None, e),
    }
    if !bp.pair().a().approx_eq(bp.pair().b(), t) {
        rep.skipped(k, "unit_condition_push", None, "pair with A ≠ B".into());
        return;
    }
    let mut r = rng(inst.file.seed ^ 0xe9);
    let space = bp.space();
    let u = if space.is_hilbert(t) {
        Ok(generate::haar_unitary::<f64>(&mut r, bp.dim()))
    } else {
        generate::j_unitary(&mut r, space, t)
    };
    let pushed = u.and_then(|u| generate::push(bp, &u, space.j(), t));
    let pushed = match pushed {
        Ok(p) => p,
        Err(e) => return rep.failed(k, "unit_condition_push", None, e),
    };
    match check_unit_condition(bp, &pushed, t) {
        Ok(c) => rep.holds(k, "unit_condition_push", None, c.holds, Some(format!("angle {:e}", c.angle))),
        Err(e) => rep.failed(k, "unit_condition_push", None, e),
    }
    match check_unitp(bp, &pushed, t) {
        Ok(c) => rep.holds(k, "unitp_condition_push", None, c.holds, Some(format!("angle {:e}", c.angle))),
        Err(e) => rep.failed(k, "unitp_condition_push", None, e),
    }
    equivalence_verdict(rep, k, bp, &pushed, grid, t, true);
}

fn compare_two(rep: &mut Report, a: &Instance, b: &Instance, grid: Option<&[Z]>) {
    let g = grid.map(<[Z]>::to_vec).unwrap_or_else(|| krein_core::weyl::default_grid(&a.bp, &a.tol));
    equivalence_verdict(rep, 0, &a.bp, &b.bp, &g, &a.tol, false);
}

fn equivalence_verdict(
    rep: &mut Report,
    k: usize,
    a: &BoundaryPair<f64>,
    b: &BoundaryPair<f64>,
    grid: &[Z],
    t: &Tol<f64>,
    expect: bool,
) {
    let minimal = minimality_check(a, grid, t).unwrap_or(false);
    match compare_json(a, b, grid, t) {
        Ok(mut v) => {
            let verdict = v["verdict"].as_str().unwrap_or("indeterminate").to_string();
            if expect && minimal {
                let ok = verdict == "unitarily_equivalent";
                rep.holds(k, "pushed_pair_recognised", None, ok, Some(verdict));
            } else {
                rep.skipped(k, "pushed_pair_recognised", None, format!("verdict {verdict}, minimal {minimal}"));
            }
            v["minimal"] = json!(minimal);
            rep.details.insert(format!("verdict_{k}"), v);
        }
        Err(e) => rep.failed(k, "pushed_pair_recognised", None, e),
    }
}

/// Equivalence verdict as JSON. Pairs of different shapes cannot match and
/// are reported without running the search.
pub fn compare_json(a: &BoundaryPair<f64>, b: &BoundaryPair<f64>, grid: &[Z], t: &Tol<f64>) -> krein_core::Result<Value> {
    if (a.dim(), a.g0(), a.g1()) != (b.dim(), b.g0(), b.g1()) {
        return Ok(json!({
            "verdict": "indeterminate",
            "weyl_match": false,
            "weyl_residual": null,
            "unit_holds": false,
            "unitp_holds": false,
            "U": null,
            "note": format!("shapes differ: ({}, {}, {}) vs ({}, {}, {})", a.dim(), a.g0(), a.g1(), b.dim(), b.g0(), b.g1()),
        }));
    }
    let res = compare_pairs(a, b, grid, t)?;
    Ok(json!({
        "verdict": res.verdict.as_str(),
        "weyl_match": res.weyl_match,
        "weyl_residual": res.weyl_residual,
        "unit_holds": res.unit_holds,
        "unitp_holds": res.unitp_holds,
        "U": res.u.as_ref().map(matrix_to_json),
    }))
}

fn flt(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let t = &inst.tol;
    let (p, base) = match (&inst.flt, &inst.base) {
        (Some(p), Some(b)) => (p, b),
        _ => return rep.skipped(k, "flt_boundary_maps", None, "no transform parameters".into()),
    };
    match build_w(p, t).and_then(|w| base.gamma_b().map_codomain(&w, t)) {
        Ok(g) => rep.bounded(k, "flt_boundary_maps", None, g.compare(inst.bp.gamma_b(), t).max_angle, t.angle_atol),
        Err(e) => rep.failed(k, "flt_boundary_maps", None, e),
    }
    for &z in grid {
        let mdot = weyl_relation(base, z, t);
        let mb = weyl_relation(&inst.bp, z, t);
        match flt_weyl(p, &mdot, t) {
            Ok(out) => {
                rep.bounded(k, "flt_weyl_image", Some(z), out.image.compare(&mb, t).max_angle, t.angle_atol);
                match out.angle {
                    Some(a) => rep.bounded(k, "flt_weyl_closed_form", Some(z), a, t.angle_atol),
                    None => rep.skipped(k, "flt_weyl_closed_form", Some(z), "B − Ṁ(λ) singular".into()),
                }
            }
            Err(e) => rep.failed(k, "flt_weyl_image", Some(z), e),
        }
        match weyl_operator(&mdot, t).and_then(|m| x_lambda_identity(&p.b, &m, t)) {
            Ok(x) => rep.bounded(k, "x_lambda_identity", Some(z), x.residual, t.residual_atol),
            Err(e) => rep.skipped(k, "x_lambda_identity", Some(z), e.to_string()),
        }
    }
    match ring_triple_weyl(base, p, grid, t) {
        Ok(samples) => {
            for s in samples {
                match s.angle {
                    Some(a) => rep.bounded(k, "ring_triple_weyl", Some(s.lambda), a, t.angle_atol),
                    None => rep.skipped(k, "ring_triple_weyl", Some(s.lambda), "Re B − Ṁ(λ) singular".into()),
                }
            }
        }
        Err(e) => rep.failed(k, "ring_triple_weyl", None, e),
    }
}

fn dbt(rep: &mut Report, k: usize, inst: &Instance, grid: &[Z]) {
    let t = &inst.tol;
    let Some(params) = inst.dbt.clone() else {
        return rep.skipped(k, "dbt_e_relation", None, "no D-triple parameters".into());
    };
    rep.bounded(k, "dbt_projections", None, params.projection_residual(), t.residual_atol);
    let dt = match dbt_build(inst.bp.clone(), params, t) {
        Ok(dt) => dt,
        Err(e) => return rep.failed(k, "dbt_e_relation", None, e),
    };
    rep.bounded(k, "dbt_e_relation", None, dt.angle, t.angle_atol);
    rep.details.insert(format!("is_bt_{k}"), json!(dt.is_bt));
    for &z in grid {
        match dbt_representing_pair(&dt, z, t) {
            Ok(s) => {
                rep.bounded(k, "dbt_representing_pair", Some(z), s.pair_angle, t.angle_atol);
                rep.bounded(k, "dbt_closed_form", Some(z), s.closed_angle, t.angle_atol);
            }
            Err(e) => rep.failed(k, "dbt_representing_pair", Some(z), e),
        }
    }
}
