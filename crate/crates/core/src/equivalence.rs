//! Similarity and unitary equivalence of boundary pairs.
//!
//! A pair `Π′` on `H′` is similar to `Π` on `H` through an invertible
//! `U : H → H′` when `Γ^{B′} = Γ^B Ũ⁻¹` with `Ũ = diag(U, U)`, and unitarily
//! equivalent when moreover `U` is a standard unitary (`UᶜU = I`,
//! `UUᶜ = I′` with `Uᶜ = J Uᴴ J′`).

use num_complex::Complex;

use crate::boundary::BoundaryPair;
use crate::error::{Error, Result};
use crate::krein::KreinSpace;
use crate::linalg::{
    block_diag, hstack, identity, invert, max_abs, rank, solve_least_squares, spectral_norm,
    CMatrix, Subspace, Tol,
};
use crate::relation::LinearRelation;
use crate::scalar::Scalar;
use crate::weyl::{gamma_field, gram_from_weyl, weyl_relation};

/// Outcome of a relation-equality test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Condition<R> {
    pub holds: bool,
    /// Largest principal angle between the two sides.
    pub angle: R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    UnitarilyEquivalent,
    Similar,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::UnitarilyEquivalent => "unitarily_equivalent",
            Verdict::Similar => "similar",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EquivReport<R: Scalar> {
    pub weyl_match: bool,
    /// Largest angle between the Weyl families over the grid.
    pub weyl_residual: R,
    pub unit_holds: bool,
    pub unitp_holds: bool,
    /// The intertwining operator, when one was found.
    pub u: Option<CMatrix<R>>,
    pub verdict: Verdict,
}

fn tilde<R: Scalar>(u: &CMatrix<R>) -> CMatrix<R> {
    block_diag(&[u, u])
}

fn check_split<R: Scalar>(bp: &BoundaryPair<R>, other: &BoundaryPair<R>) -> Result<()> {
    if bp.g0() != other.g0() {
        return Err(Error::DimensionMismatch { expected: bp.g0(), found: other.g0() });
    }
    if bp.g1() != other.g1() {
        return Err(Error::DimensionMismatch { expected: bp.g1(), found: other.g1() });
    }
    Ok(())
}

/// Largest angle between `Γ^{B′}` and `Γ^B Ũ⁻¹`.
pub fn check_similarity<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    u: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<R> {
    check_split(bp, other)?;
    if u.nrows() != other.dim() || u.ncols() != bp.dim() {
        return Err(Error::DimensionMismatch { expected: bp.dim(), found: u.ncols() });
    }
    invert(u, tol, "U")?;
    let pushed = bp.gamma_b().map_domain(&tilde(u), tol)?;
    Ok(pushed.compare(other.gamma_b(), tol).max_angle)
}

/// `max(‖UᶜU − I‖, ‖UUᶜ − I′‖)` with `Uᶜ = J Uᴴ J′`.
pub fn st1_residual<R: Scalar>(u: &CMatrix<R>, h: &KreinSpace<R>, h2: &KreinSpace<R>) -> Result<R> {
    if u.ncols() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: u.ncols() });
    }
    if u.nrows() != h2.dim() {
        return Err(Error::DimensionMismatch { expected: h2.dim(), found: u.nrows() });
    }
    let uc = h.j() * u.adjoint() * h2.j();
    let left = max_abs(&(&uc * u - identity::<R>(h.dim())));
    let right = max_abs(&(u * &uc - identity::<R>(h2.dim())));
    Ok(left.max(right))
}

/// Whether `U : H → H′` is a standard unitary.
pub fn is_st1<R: Scalar>(u: &CMatrix<R>, h: &KreinSpace<R>, h2: &KreinSpace<R>, tol: &Tol<R>) -> Result<bool> {
    if h.dim() != h2.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: h2.dim() });
    }
    let scale = spectral_norm(u).powi(2).max(R::one());
    Ok(st1_residual(u, h, h2)? <= tol.residual_atol * scale)
}

/// Whether `U` is a standard unitary carrying the relation `ext` in `H` onto
/// `ext2` in `H′`, i.e. `ext2 = U ext U⁻¹`.
pub fn check_extension_equivalence<R: Scalar>(
    ext: &LinearRelation<R>,
    ext2: &LinearRelation<R>,
    u: &CMatrix<R>,
    h: &KreinSpace<R>,
    h2: &KreinSpace<R>,
    tol: &Tol<R>,
) -> Result<Condition<R>> {
    let st1 = is_st1(u, h, h2, tol)?;
    let moved = ext.map_domain(u, tol)?.map_codomain(u, tol)?;
    let cmp = moved.compare(ext2, tol);
    Ok(Condition { holds: st1 && cmp.equal, angle: cmp.max_angle })
}

/// `(Γ^B)⁻¹ Γ^{B′} : H′_Γ → H_Γ`.
fn composed<R: Scalar>(
    gamma: &LinearRelation<R>,
    gamma2: &LinearRelation<R>,
    tol: &Tol<R>,
) -> Result<LinearRelation<R>> {
    gamma2.then(&gamma.inverse(), tol)
}

/// `(Γ^B)⁻¹Γ^{B′} = (Γ^A)⁻¹Γ^{A′}` as relations `H′_Γ → H_Γ`.
pub fn check_unit_condition<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    tol: &Tol<R>,
) -> Result<Condition<R>> {
    check_split(bp, other)?;
    let lhs = composed(bp.gamma_b(), other.gamma_b(), tol)?;
    let rhs = composed(bp.gamma_a(), other.gamma_a(), tol)?;
    let cmp = lhs.compare(&rhs, tol);
    Ok(Condition { holds: cmp.equal, angle: cmp.max_angle })
}

fn unitary_relation<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    tol: &Tol<R>,
) -> Result<Condition<R>> {
    check_split(bp, other)?;
    let r = composed(bp.gamma_b(), other.gamma_b(), tol)?;
    let adj = r.krein_adjoint(other.graph_space().space(), bp.graph_space().space(), tol)?;
    let cmp = adj.compare(&r.inverse(), tol);
    Ok(Condition { holds: cmp.equal, angle: cmp.max_angle })
}

/// Whether `(Γ^B)⁻¹Γ^{B′} : H′_Γ → H_Γ` is a unitary relation, i.e. equals
/// the inverse of its Krein adjoint. Both pairs must be of the form `(A, A)`.
pub fn check_unitp<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    tol: &Tol<R>,
) -> Result<Condition<R>> {
    for p in [bp, other] {
        if !p.pair().a().approx_eq(p.pair().b(), tol) {
            return Err(Error::Unsupported("unitary relation test needs A = B"));
        }
    }
    unitary_relation(bp, other, tol)
}

fn check_grid<R: Scalar>(bp: &BoundaryPair<R>, grid: &[Complex<R>], tol: &Tol<R>) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let a0 = bp.a0(tol);
    for &z in grid {
        if !a0.eigenspace(z, tol)?.is_zero() {
            return Err(Error::PointSpectrum);
        }
    }
    Ok(())
}

/// `{(l, y) ∈ r : y ⊥ mul r}`.
fn operator_part<R: Scalar>(r: &LinearRelation<R>, tol: &Tol<R>) -> Result<LinearRelation<R>> {
    let perp = r.mul(tol).orth_complement(tol);
    let frame = LinearRelation::product(&Subspace::full(r.dom_dim()), &perp);
    r.intersect(&frame, tol)
}

/// Compares the Weyl families of two pairs on a grid, multivalued parts and
/// operator parts separately.
pub fn weyl_match<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<Condition<R>> {
    check_split(bp, other)?;
    check_grid(bp, grid, tol)?;
    check_grid(other, grid, tol)?;
    let mut holds = true;
    let mut angle = R::zero();
    for &z in grid {
        let m = weyl_relation(bp, z, tol);
        let m2 = weyl_relation(other, z, tol);
        let mul = m.mul(tol).compare(&m2.mul(tol), tol);
        let op = operator_part(&m, tol)?.compare(&operator_part(&m2, tol)?, tol);
        holds &= mul.equal && op.equal;
        angle = angle.max(mul.max_angle).max(op.max_angle);
    }
    Ok(Condition { holds, angle })
}

fn defect_span<R: Scalar>(r: &LinearRelation<R>, grid: &[Complex<R>], tol: &Tol<R>) -> Result<Subspace<R>> {
    let mut span = Subspace::zero(r.dom_dim());
    for &z in grid {
        span = span.sum(&r.eigenspace(z, tol)?, tol)?;
    }
    Ok(span)
}

/// Whether the eigenspaces of `A^c` and of `B^c` over the grid both span `H`.
pub fn minimality_check<R: Scalar>(bp: &BoundaryPair<R>, grid: &[Complex<R>], tol: &Tol<R>) -> Result<bool> {
    let pair = bp.pair();
    let a = defect_span(&pair.a_adjoint(tol), grid, tol)?;
    let b = defect_span(&pair.b_adjoint(tol), grid, tol)?;
    Ok(a.is_full() && b.is_full())
}

/// Least-squares solution `U` of `U γ(λ)l = γ′(λ)l` over the grid, accepted
/// when it is invertible and intertwines `Γ^B` and `Γ^{B′}`.
pub fn intertwiner<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    check_split(bp, other)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut v = Vec::new();
    let mut v2 = Vec::new();
    for &z in grid {
        let g = gamma_field(bp, z, tol);
        let g2 = gamma_field(other, z, tol);
        let d = g.dom(tol).intersect(&g2.dom(tol), tol)?;
        if d.is_zero() {
            continue;
        }
        v.push(g.apply_to(d.basis(), tol)?);
        v2.push(g2.apply_to(d.basis(), tol)?);
    }
    let n = bp.dim();
    let v = hstack(&v.iter().collect::<Vec<_>>());
    let v2 = hstack(&v2.iter().collect::<Vec<_>>());
    let found = if v.ncols() == 0 { 0 } else { rank(&v, tol) };
    if found < n || v.nrows() != n {
        return Err(Error::RankDeficientSpan { expected: n, found });
    }
    let u = solve_least_squares(&v.adjoint(), &v2.adjoint(), tol).adjoint();
    let resid = check_similarity(bp, other, &u, tol)?;
    if resid > tol.angle_atol {
        return Err(Error::GramMismatch(resid.as_f64()));
    }
    Ok(u)
}

/// Largest entry of the difference of the Weyl-function Gram matrices
/// `(M_{Γ^B}(λ) − M_{Γ^A}(μ)*)/(λ − μ̄)` of two pairs over the grid. Points
/// where either Weyl family is not an everywhere defined operator are
/// skipped.
pub fn gram_mismatch<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<R> {
    let mut worst = R::zero();
    for &z in grid {
        for &w in grid {
            match (gram_from_weyl(bp, z, w, tol), gram_from_weyl(other, z, w, tol)) {
                (Ok(g), Ok(g2)) => worst = worst.max(max_abs(&(g - g2))),
                (Err(Error::ConjugatePoints | Error::Multivalued | Error::DimensionMismatch { .. }), _)
                | (_, Err(Error::ConjugatePoints | Error::Multivalued | Error::DimensionMismatch { .. })) => {}
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
    }
    Ok(worst)
}

/// Rebuilds the unitary `U` with `Γ^{B′} = Γ^B Ũ⁻¹` from γ-field data, after
/// certifying that the Gram matrices of both pairs coincide. Hilbert spaces
/// only.
pub fn reconstruct_unitary<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    if !bp.space().is_hilbert(tol) || !other.space().is_hilbert(tol) {
        return Err(Error::Unsupported("reconstruction needs definite metrics"));
    }
    check_split(bp, other)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let gm = gram_mismatch(bp, other, grid, tol)?;
    if gm > tol.residual_atol {
        return Err(Error::GramMismatch(gm.as_f64()));
    }
    let u = intertwiner(bp, other, grid, tol)?;
    if !is_st1(&u, bp.space(), other.space(), tol)? {
        return Err(Error::NotStandardUnitary(st1_residual(&u, bp.space(), other.space())?.as_f64()));
    }
    Ok(u)
}

/// Collects the equivalence tests for two pairs into a verdict. A supplied
/// operator is only ever verified in indefinite metrics; the verdict is
/// never "not similar" because a failed search proves nothing.
pub fn compare_pairs<R: Scalar>(
    bp: &BoundaryPair<R>,
    other: &BoundaryPair<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<EquivReport<R>> {
    let wm = weyl_match(bp, other, grid, tol)?;
    let unit = check_unit_condition(bp, other, tol)?;
    let unitp = unitary_relation(bp, other, tol)?;
    let hilbert = bp.space().is_hilbert(tol) && other.space().is_hilbert(tol);
    let (u, verdict) = match reconstruct_unitary(bp, other, grid, tol) {
        Ok(u) => (Some(u), Verdict::UnitarilyEquivalent),
        Err(_) => match intertwiner(bp, other, grid, tol) {
            Ok(u) if !hilbert && is_st1(&u, bp.space(), other.space(), tol)? => {
                (Some(u), Verdict::UnitarilyEquivalent)
            }
            Ok(u) => (Some(u), Verdict::Similar),
            Err(_) => (None, Verdict::Indeterminate),
        },
    };
    Ok(EquivReport {
        weyl_match: wm.holds,
        weyl_residual: wm.angle,
        unit_holds: unit.holds,
        unitp_holds: unitp.holds,
        u,
        verdict,
    })
}

/// `E = Γ^A(Γ^B)⁻¹` and `[Γ^B(Γ^B)ᶜY]⁻¹` as relations `G → G′`, with the
/// largest angle between them.
pub fn e_map_identity<R: Scalar>(
    bp: &BoundaryPair<R>,
    tol: &Tol<R>,
) -> Result<(LinearRelation<R>, LinearRelation<R>, R)> {
    let e = bp.gamma_b().inverse().then(bp.gamma_a(), tol)?;
    let g = KreinSpace::hilbert(bp.g_dim());
    let adj = bp.gamma_b().krein_adjoint(bp.graph_space().space(), &g, tol)?;
    let y = LinearRelation::operator(&bp.y(), tol);
    let rhs = y.then(&adj, tol)?.then(bp.gamma_b(), tol)?.inverse();
    let angle = e.compare(&rhs, tol).max_angle;
    Ok((e, rhs, angle))
}
