//! Seeded property suites shared by the fuzz tests and the acceptance run.
//! Each suite draws one fixture per seed and records every violated check.

#![allow(dead_code)]

use std::ops::Range;

use krein_core::boundary::{qsc_boundary_pair, DualPair};
use krein_core::coupling::{
    block_formulas, classify_coupled, couple, coupled_weyl, defect_formula, sharp_shape_angle, t_symmetry,
};
use krein_core::equivalence::{
    check_extension_equivalence, check_similarity, check_unit_condition, check_unitp, is_st1, minimality_check,
    reconstruct_unitary,
};
use krein_core::generate::{self, rng, SeededRng, PAIR_KINDS};
use krein_core::linalg::{identity, max_abs};
use krein_core::scalar::c;
use krein_core::transforms::dbt::dbt_representing_pair;
use krein_core::transforms::flt::{
    check_sys_v, eq_h_residual, flt_triple, st1_equiv_check, x_lambda_identity, FltParams,
};
use krein_core::transforms::lp::T0;
use krein_core::weyl::{
    check_gamma_adjoint, check_gamma_difference, check_weyl_difference, default_grid, eigen_criteria,
    krein_resolvent, weyl_operator, weyl_relation,
};
use krein_core::{BoundaryPair, CMatrix, Error, KreinSpace, LinearRelation, Subspace, Tol};
use num_complex::Complex;
use rand::Rng;

pub fn tol() -> Tol<f64> {
    Tol::default()
}

#[derive(Debug)]
pub struct Suite {
    pub name: &'static str,
    pub instances: usize,
    pub checks: usize,
    pub worst: f64,
    pub failures: Vec<String>,
}

impl Suite {
    pub fn new(name: &'static str) -> Self {
        Self { name, instances: 0, checks: 0, worst: 0.0, failures: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records `value` and fails when it exceeds `bound`.
    pub fn bounded(&mut self, value: f64, bound: f64, what: impl FnOnce() -> String) {
        self.worst = self.worst.max(value);
        self.check(value <= bound, || format!("{} = {value:e} > {bound:e}", what()));
    }

    pub fn error(&mut self, seed: u64, e: impl std::fmt::Display) {
        self.checks += 1;
        self.failures.push(format!("seed {seed}: {e}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {} instances, {} checks, worst residual {:.2e}, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.instances,
            self.checks,
            self.worst,
            self.failures.len()
        )
    }

    pub fn assert_passed(&self) {
        assert!(self.passed(), "{}\n{}", self.line(), self.failures.iter().take(20).cloned().collect::<Vec<_>>().join("\n"));
    }
}

fn random_space(r: &mut SeededRng, n: usize) -> KreinSpace<f64> {
    let q = r.random_range(0..=n);
    KreinSpace::diagonal(n - q, q)
}

fn random_relation(r: &mut SeededRng, n: usize, t: &Tol<f64>) -> LinearRelation<f64> {
    let k = r.random_range(0..=2 * n);
    LinearRelation::from_graph(generate::random_subspace(r, 2 * n, k, t), n).unwrap()
}

/// A random subspace of a selfadjoint relation: either the graph of a
/// `J`-selfadjoint matrix or `M^[⊥] × M`.
fn random_symmetric(r: &mut SeededRng, space: &KreinSpace<f64>, t: &Tol<f64>) -> LinearRelation<f64> {
    let n = space.dim();
    let full = if r.random_bool(0.5) {
        LinearRelation::operator(&generate::j_selfadjoint(r, space), t)
    } else {
        let k = r.random_range(0..=n);
        let m = generate::random_subspace(r, n, k, t);
        let perp = Subspace::span(&(space.j() * m.basis()), t).orth_complement(t);
        LinearRelation::product(&perp, &m)
    };
    let k = r.random_range(0..=full.dim());
    let pick = full.graph().basis() * generate::gaussian::<f64>(r, full.dim(), k);
    LinearRelation::from_graph(Subspace::span(&pick, t), n).unwrap()
}

fn angle_of(a: &Subspace<f64>, b: &Subspace<f64>, t: &Tol<f64>) -> f64 {
    a.compare(b, t).max_angle
}

/// Adjoint involution, the dimension identity for sum and intersection and
/// neutrality against symmetry.
pub fn relation_core(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("relation algebra");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let space = random_space(&mut r, n);
        let a = random_relation(&mut r, n, &t);
        let b = random_relation(&mut r, n, &t);
        let twice = a.adjoint_in(&space, &t).and_then(|x| x.adjoint_in(&space, &t));
        match twice {
            Ok(x) => s.bounded(angle_of(x.graph(), a.graph(), &t), t.angle_atol, || format!("seed {seed}: (a^c)^c")),
            Err(e) => s.error(seed, e),
        }
        match (a.sum(&b, &t), a.intersect(&b, &t)) {
            (Ok(sum), Ok(meet)) => s.check(a.dim() + b.dim() == sum.dim() + meet.dim(), || {
                format!("seed {seed}: dims {} + {} vs {} + {}", a.dim(), b.dim(), sum.dim(), meet.dim())
            }),
            (Err(e), _) | (_, Err(e)) => s.error(seed, e),
        }
        for rel in [random_symmetric(&mut r, &space, &t), a] {
            match (rel.is_neutral(&space, &t), rel.is_symmetric(&space, &t)) {
                (Ok(neutral), Ok(sym)) => {
                    s.check(neutral == sym, || format!("seed {seed}: neutral {neutral} symmetric {sym}"))
                }
                (Err(e), _) | (_, Err(e)) => s.error(seed, e),
            }
        }
    }
    s
}

fn any_pair(r: &mut SeededRng, seed: u64, t: &Tol<f64>) -> krein_core::Result<BoundaryPair<f64>> {
    let n = 2 + (seed as usize % 5);
    match seed % 8 {
        k @ 0..=4 => generate::random_boundary_pair(r, PAIR_KINDS[k as usize], n, t),
        5 => {
            let k = r.random_range(1..=n);
            let (tm, nsp) = generate::qsc_contraction::<f64>(r, n, k, t);
            qsc_boundary_pair(&tm, &nsp, t)
        }
        6 => generate::dbt_fixture(r, n, t).map(|d| d.bp),
        _ => {
            let m = r.random_range(1..=n / 2);
            let (obt, p) = flt_fixture(r, n, m, t)?;
            flt_triple(&obt, &p, t)
        }
    }
}

/// An ordinary triple for a symmetric operator in `ℂⁿ` with defect `m` and
/// random parameters on `ℂ^m`.
pub fn flt_fixture(
    r: &mut SeededRng,
    n: usize,
    m: usize,
    t: &Tol<f64>,
) -> krein_core::Result<(BoundaryPair<f64>, FltParams<f64>)> {
    let h = KreinSpace::hilbert(n);
    let a = generate::symmetric_operator(r, &h, m, t)?;
    let obt = generate::ordinary_triple(r, DualPair::symmetric(h, a, t)?, t)?;
    let rank = r.random_range(0..=m);
    let p = generate::flt_params(r, m, rank, t)?;
    Ok((obt, p))
}

/// Green identity and the adjoint formula on every generated pair.
pub fn green_and_adjoint(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("Green identity and boundary adjoint");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let bp = match any_pair(&mut r, seed, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        s.bounded(bp.green_residual(), 1e-8, || format!("seed {seed}: Green"));
        match bp.adjoint_formula_angles(&t) {
            Ok((ab, aa)) => s.bounded(ab.max(aa), 1e-8, || format!("seed {seed}: adjoint formula")),
            Err(e) => s.error(seed, e),
        }
    }
    s
}

/// The four identities for γ-fields and Weyl families.
pub fn gamma_weyl_identities(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("gamma-field and Weyl identities");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let bp = match any_pair(&mut r, seed, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        let grid = default_grid(&bp, &t);
        for (k, &z) in grid.iter().enumerate() {
            let z0 = grid[(k + 3) % grid.len()];
            match check_gamma_difference(&bp, z, z0, &t) {
                Ok(a) => s.bounded(a, t.angle_atol, || format!("seed {seed} {z}: γ difference")),
                Err(e) => s.error(seed, e),
            }
            match check_weyl_difference(&bp, z, z0, &t) {
                Ok(b) => s.bounded(b, t.angle_atol, || format!("seed {seed} {z}: M difference")),
                Err(e) => s.error(seed, e),
            }
            match check_gamma_adjoint(&bp, z, &t) {
                Ok(rep) => s.check(rep.consistent(), || format!("seed {seed} {z}: γ adjoint {rep:?}")),
                Err(e) => s.error(seed, e),
            }
            let theta = generate::random_theta::<f64>(&mut r, bp.g0(), bp.g1(), &t);
            match krein_resolvent(&bp, &theta, z, &t) {
                Ok(rep) => s.check(rep.included && (!rep.kernels_agree || rep.equal), || {
                    format!("seed {seed} {z}: resolvent inclusion {} kernels {} equal {}", rep.included, rep.kernels_agree, rep.equal)
                }),
                Err(e) => s.error(seed, e),
            }
        }
    }
    s
}

/// The resolvent formula off `σ_p(A₀)` and the eigenvalue and resolvent
/// criteria against direct classification.
pub fn resolvent_formula(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("resolvent formula and spectral criteria");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let bp = match any_pair(&mut r, seed, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        let mut grid = default_grid(&bp, &t);
        grid.push(c(r.random_range(-3.0..3.0), 0.0));
        for z in grid {
            let theta = generate::random_theta::<f64>(&mut r, bp.g0(), bp.g1(), &t);
            match krein_resolvent(&bp, &theta, z, &t) {
                Ok(rep) => {
                    if let Some((_, _, angle)) = rep.restricted {
                        s.bounded(angle, t.angle_atol, || format!("seed {seed} {z}: restricted resolvent"));
                    }
                }
                Err(e) => s.error(seed, e),
            }
            match eigen_criteria(&bp, &theta, z, &t) {
                Ok(ec) => s.check(ec.agree(), || format!("seed {seed} {z}: {ec:?}")),
                Err(Error::PointSpectrum) => {}
                Err(e) => s.error(seed, e),
            }
        }
    }
    s
}

/// Block formulas, Weyl family shape, defect formula and the ladder of the
/// coupled triple.
pub fn coupling_suite(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("coupled triple");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let bp = match any_pair(&mut r, seed, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        let ct = match couple(&bp, &t) {
            Ok(ct) => ct,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        s.bounded(block_formulas(&ct, &t).max(), 1e-7, || format!("seed {seed}: block formulas"));
        match sharp_shape_angle(&ct, &t) {
            Ok(a) => s.bounded(a, 1e-7, || format!("seed {seed}: sharp shape")),
            Err(e) => s.error(seed, e),
        }
        match classify_coupled(&ct, &t) {
            Ok(l) => s.check(l.agree(), || format!("seed {seed}: ladder {l:?}")),
            Err(e) => s.error(seed, e),
        }
        match defect_formula(bp.pair(), &t) {
            Ok(df) => {
                s.bounded(df.max_angle, 1e-7, || format!("seed {seed}: defect formula"));
                s.check(df.dims_equal(), || format!("seed {seed}: defect dims"));
            }
            Err(e) => s.error(seed, e),
        }
        match t_symmetry(bp.pair(), &t) {
            Ok(sym) => s.check(sym == (true, true, true), || format!("seed {seed}: symmetry {sym:?}")),
            Err(e) => s.error(seed, e),
        }
        for z in default_grid(&bp, &t) {
            match coupled_weyl(&ct, z, &t) {
                Ok(w) => {
                    s.bounded(w.block_angle, 1e-7, || format!("seed {seed} {z}: antidiagonal Weyl"));
                    if let Some(a) = w.adjoint_link {
                        s.bounded(a, 1e-7, || format!("seed {seed} {z}: M_A = M_B*"));
                    }
                }
                Err(e) => s.error(seed, e),
            }
        }
    }
    s
}

/// A boundary triple for `(A, A)` with `A` symmetric in `space`.
pub fn symmetric_triple(r: &mut SeededRng, space: &KreinSpace<f64>, t: &Tol<f64>) -> krein_core::Result<BoundaryPair<f64>> {
    let n = space.dim();
    let defect = r.random_range(1..=(n / 2).max(1));
    let a = generate::symmetric_operator(r, space, defect, t)?;
    let pair = DualPair::symmetric(space.clone(), a, t)?;
    if r.random_bool(0.5) {
        generate::ordinary_triple(r, pair, t)
    } else {
        let d = generate::boundary_dim(&pair, t);
        let g0 = r.random_range(defect..=d);
        generate::boundary_triple(r, pair, g0, t)
    }
}

/// Haar pushes are recovered as standard unitaries; scaled pushes fail both
/// unit conditions together.
pub fn equivalence_suite(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("unitary equivalence");
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let n = r.random_range(2..=6);
        let h = KreinSpace::hilbert(n);
        let bp = match symmetric_triple(&mut r, &h, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        let grid = default_grid(&bp, &t);
        let w = generate::haar_unitary::<f64>(&mut r, n);
        let pushed = generate::push(&bp, &w, &identity(n), &t).unwrap();
        match (check_unit_condition(&bp, &pushed, &t), check_unitp(&bp, &pushed, &t)) {
            (Ok(u), Ok(p)) => s.check(u.holds && p.holds, || format!("seed {seed}: unitary push {u:?} {p:?}")),
            (Err(e), _) | (_, Err(e)) => s.error(seed, e),
        }
        if minimality_check(&bp, &grid, &t).unwrap_or(false) {
            match reconstruct_unitary(&bp, &pushed, &grid, &t) {
                Ok(u) => {
                    let res = check_similarity(&bp, &pushed, &u, &t).unwrap_or(f64::INFINITY);
                    s.bounded(res, 1e-6, || format!("seed {seed}: recovered map"));
                    s.check(is_st1(&u, &h, &h, &t).unwrap_or(false), || format!("seed {seed}: recovered map not St1"));
                }
                Err(e) => s.error(seed, e),
            }
        }
        let modulus = if r.random_bool(0.5) { r.random_range(0.3..0.8) } else { r.random_range(1.2..2.5) };
        let phase = r.random_range(0.0..std::f64::consts::TAU);
        let scaled = &w * c::<f64>(modulus * phase.cos(), modulus * phase.sin());
        let pushed = generate::push(&bp, &scaled, &identity(n), &t).unwrap();
        match (check_unit_condition(&bp, &pushed, &t), check_unitp(&bp, &pushed, &t)) {
            (Ok(u), Ok(p)) => {
                s.check(!u.holds && !p.holds, || format!("seed {seed}: scaled push {u:?} {p:?}"));
                s.check(u.holds == p.holds, || format!("seed {seed}: unit conditions disagree"));
            }
            (Err(e), _) | (_, Err(e)) => s.error(seed, e),
        }
    }
    s
}

/// Primed parameters drawn to satisfy or break each of the three conditions.
fn sys_v_instance(r: &mut SeededRng, p: &FltParams<f64>, t: &Tol<f64>) -> FltParams<f64> {
    let m = p.dim();
    let keep_c = r.random_bool(0.3);
    let base = generate::compatible_flt_params(r, p, keep_c, t).unwrap();
    let (mut b2, mut c2) = (base.b.clone(), base.c.clone());
    match r.random_range(0..4) {
        0 => {}
        1 => c2 += generate::random_hermitian::<f64>(r, m) * c(0.0, r.random_range(0.2..1.0)),
        2 => c2 = &p.c + generate::random_hermitian::<f64>(r, m),
        _ => b2 += generate::random_hermitian::<f64>(r, m) * c(0.0, r.random_range(0.2..1.0)),
    }
    FltParams::new(base.k, b2, c2, t).unwrap()
}

/// `V ∈ St₁` against the three conditions, the Weyl identity for matched
/// pairs with the kernels of the boundary conditions, and `X(λ)`.
pub fn transforms_suite(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("fractional linear transforms");
    let (mut st1_true, mut st1_false, mut kept, mut moved) = (0, 0, 0, 0);
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let m = r.random_range(1..=3);
        let rank = r.random_range(0..=m);
        let p = generate::flt_params::<f64>(&mut r, m, rank, &t).unwrap();
        let q = sys_v_instance(&mut r, &p, &t);
        match st1_equiv_check(&p, &q, &t) {
            Ok(chk) => {
                if chk.st1 {
                    st1_true += 1;
                } else {
                    st1_false += 1;
                }
                s.check(chk.agree(), || format!("seed {seed}: {chk:?}"));
            }
            Err(e) => s.error(seed, e),
        }

        let n = m + r.random_range(m..=m + 2);
        let (obt, p) = match flt_fixture(&mut r, n, m, &t) {
            Ok(x) => x,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        let keep_c = r.random_bool(0.4);
        let q = generate::compatible_flt_params(&mut r, &p, keep_c, &t).unwrap();
        let same_c = max_abs(&(&q.c - &p.c)) <= t.residual_atol;
        if same_c {
            kept += 1;
        } else {
            moved += 1;
        }
        let sys = check_sys_v(&p, &q, &t).unwrap();
        s.check(sys.all(), || format!("seed {seed}: compatible parameters fail {sys:?}"));
        let v = krein_core::transforms::flt::build_v(&p, &q, &t).unwrap();
        let u = generate::haar_unitary::<f64>(&mut r, n);
        let h = KreinSpace::hilbert(n);
        let pushed = generate::push(&obt, &u, &identity(n), &t).unwrap();
        let obt2 = BoundaryPair::new(
            pushed.pair().clone(),
            m,
            m,
            pushed.gamma_b().map_codomain(&v, &t).unwrap(),
            pushed.gamma_a().map_codomain(&v, &t).unwrap(),
            &t,
        );
        let obt2 = match obt2 {
            Ok(b) => b,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        for z in default_grid(&obt, &t) {
            let md = weyl_operator(&weyl_relation(&obt, z, &t), &t);
            let md2 = weyl_operator(&weyl_relation(&obt2, z, &t), &t);
            let (md, md2) = match (md, md2) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    s.error(seed, e);
                    continue;
                }
            };
            match eq_h_residual(&p, &md, &q, &md2, &t) {
                Ok(res) => s.bounded(res, 1e-8, || format!("seed {seed} {z}: Weyl identity")),
                Err(Error::Singular(_)) => {}
                Err(e) => s.error(seed, e),
            }
            let b = generate::gaussian::<f64>(&mut r, m, m);
            match x_lambda_identity(&b, &md, &t) {
                Ok(x) => s.bounded(x.residual, 1e-8, || format!("seed {seed} {z}: X(λ)")),
                Err(Error::Singular(_)) => {}
                Err(e) => s.error(seed, e),
            }
        }
        let graph_b = |b: &CMatrix<f64>| LinearRelation::operator(b, &t);
        let ext = obt.extension_from_theta(&graph_b(&p.b), &t).unwrap();
        let ext2 = obt2.extension_from_theta(&graph_b(&q.b), &t).unwrap();
        let eqv = check_extension_equivalence(&ext, &ext2, &u, &h, &h, &t).unwrap();
        s.check(eqv.holds, || format!("seed {seed}: Ker(Γ1 − BΓ0) not carried over ({:e})", eqv.angle));
        let vertical = LinearRelation::product(&Subspace::zero(m), &Subspace::full(m));
        let k0 = obt.extension_from_theta(&vertical, &t).unwrap();
        let k02 = obt2.extension_from_theta(&vertical, &t).unwrap();
        let eqv = check_extension_equivalence(&k0, &k02, &u, &h, &h, &t).unwrap();
        s.check(eqv.holds == same_c, || format!("seed {seed}: Ker Γ0 equivalence {} with C = C′ {same_c}", eqv.holds));
    }
    let n = s.instances;
    s.check(st1_true * 5 >= n && st1_false * 5 >= n, || format!("unbalanced sysV draws: {st1_true} / {st1_false}"));
    s.check(kept * 5 >= n && moved * 5 >= n, || format!("unbalanced C′ draws: {kept} / {moved}"));
    s
}

/// D-triples, their representing pairs, and the qsc Weyl function.
pub fn dbt_qsc_suite(seeds: Range<u64>) -> Suite {
    let t = tol();
    let mut s = Suite::new("D-triples, qsc Weyl function, t0");
    s.check(T0 == 1.84, || format!("t0 = {T0}"));
    for seed in seeds {
        s.instances += 1;
        let mut r = rng(seed);
        let n = r.random_range(2..=6);
        match generate::dbt_fixture::<f64>(&mut r, n, &t) {
            Ok(dt) => {
                s.bounded(dt.angle, 1e-7, || format!("seed {seed}: Γ^A vs EΓ^B"));
                let (g0, g1) = (dt.params.g0(), dt.params.g1());
                let expected = g0 == g1 && g0 + g1 == generate::boundary_dim(dt.bp.pair(), &t);
                s.check(dt.is_bt == expected, || format!("seed {seed}: bt flag"));
                for z in default_grid(&dt.bp, &t) {
                    match dbt_representing_pair(&dt, z, &t) {
                        Ok(rs) => {
                            s.bounded(rs.pair_angle, 1e-7, || format!("seed {seed} {z}: representing pair"));
                            s.bounded(rs.closed_angle, 1e-7, || format!("seed {seed} {z}: closed form"));
                        }
                        Err(e) => s.error(seed, e),
                    }
                }
            }
            Err(e) => s.error(seed, e),
        }
        let k = r.random_range(1..=n);
        let (tm, nsp) = generate::qsc_contraction::<f64>(&mut r, n, k, &t);
        let bp = match qsc_boundary_pair(&tm, &nsp, &t) {
            Ok(bp) => bp,
            Err(e) => {
                s.error(seed, e);
                continue;
            }
        };
        for _ in 0..4 {
            let rad = r.random_range(1.05..4.0);
            let arg = r.random_range(0.0..std::f64::consts::TAU);
            let z = Complex::from_polar(rad, arg);
            let oracle = (&tm - identity::<f64>(n) * z).try_inverse().map(|inv| nsp.basis().adjoint() * inv * nsp.basis());
            match (weyl_operator(&weyl_relation(&bp, z, &t), &t), oracle) {
                (Ok(mw), Some(q)) => s.bounded(max_abs(&(mw - q)), 1e-8, || format!("seed {seed} {z}: M vs Q_T")),
                (Err(e), _) => s.error(seed, e),
                (_, None) => s.error(seed, "T − λ singular outside the disc"),
            }
        }
    }
    s
}
