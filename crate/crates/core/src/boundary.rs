//! Dual pairs, boundary pairs and boundary triples.
//!
//! A boundary pair for a dual pair `(A, B)` in `H` consists of relations
//! `Γ^B : H_Γ → G = G₀ ⊕ G₁` and `Γ^A : H_Γ → G′ = G₁ ⊕ G₀` linked by the
//! Green identity `[x̂, ŷ]_Γ = ⟨l̂, Y ĥ⟩_G`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::krein::{GraphSpace, KreinSpace};
use crate::linalg::{
    block2, block_diag, hstack, identity, max_abs, spectral_norm, zeros, CMatrix, Subspace, Tol,
};
use crate::relation::LinearRelation;
use crate::scalar::{i_unit, Scalar};

/// The coupling `Y = [[0, −iI₀], [iI₁, 0]] : G₁ ⊕ G₀ → G₀ ⊕ G₁`.
pub fn y_matrix<R: Scalar>(g0: usize, g1: usize) -> CMatrix<R> {
    let i = i_unit::<R>();
    block2(
        &zeros(g0, g1),
        &(identity::<R>(g0) * (-i)),
        &(identity::<R>(g1) * i),
        &zeros(g1, g0),
    )
}

/// Reads a subspace of `H_Γ = H ⊕ H` as a relation in `H`.
pub fn relation_in<R: Scalar>(s: &Subspace<R>, n: usize) -> LinearRelation<R> {
    LinearRelation::from_graph(s.clone(), n).expect("subspace of H ⊕ H")
}

/// A pair `(A, B)` of relations in `H` with `A ⊆ B^c`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPair<R: Scalar> {
    space: KreinSpace<R>,
    a: LinearRelation<R>,
    b: LinearRelation<R>,
}

impl<R: Scalar> DualPair<R> {
    pub fn new(
        space: KreinSpace<R>,
        a: LinearRelation<R>,
        b: LinearRelation<R>,
        tol: &Tol<R>,
    ) -> Result<Self> {
        let b_adj = b.adjoint_in(&space, tol)?;
        if a.dom_dim() != space.dim() || !a.is_subset_of(&b_adj, tol) {
            return Err(Error::NotDualPair);
        }
        Ok(Self { space, a, b })
    }

    /// The pair `(A, A)` for a symmetric `A`.
    pub fn symmetric(space: KreinSpace<R>, a: LinearRelation<R>, tol: &Tol<R>) -> Result<Self> {
        Self::new(space, a.clone(), a, tol)
    }

    pub fn space(&self) -> &KreinSpace<R> {
        &self.space
    }

    pub fn a(&self) -> &LinearRelation<R> {
        &self.a
    }

    pub fn b(&self) -> &LinearRelation<R> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn a_adjoint(&self, tol: &Tol<R>) -> LinearRelation<R> {
        self.a.adjoint_in(&self.space, tol).expect("square relation on the space")
    }

    pub fn b_adjoint(&self, tol: &Tol<R>) -> LinearRelation<R> {
        self.b.adjoint_in(&self.space, tol).expect("square relation on the space")
    }

    /// `(B, A)`, again a dual pair.
    pub fn swapped(&self) -> Self {
        Self { space: self.space.clone(), a: self.b.clone(), b: self.a.clone() }
    }
}

/// Which rungs of the boundary-pair ladder an instance satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flavor {
    pub ibp: bool,
    pub ubp: bool,
    pub bt: bool,
    pub ab_gen: bool,
    pub q_bt: bool,
    pub es_gen: bool,
    pub s_gen: bool,
    pub b_gen: bool,
}

/// Both sides of the adjoint identity for an extension `A_θ`.
#[derive(Clone, Debug)]
pub struct ExtensionAdjoint<R: Scalar> {
    /// `A_θ^c`.
    pub adjoint: LinearRelation<R>,
    /// `(Γ^B_#)⁻¹(θ*)`.
    pub via_sharp: LinearRelation<R>,
    pub contained: bool,
    pub equal: bool,
    pub max_angle: R,
}

/// `((G, Γ^B), (G′, Γ^A))` for a dual pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPair<R: Scalar> {
    pair: DualPair<R>,
    g0: usize,
    g1: usize,
    gamma_b: LinearRelation<R>,
    gamma_a: LinearRelation<R>,
}

impl<R: Scalar> BoundaryPair<R> {
    /// Assembles a boundary pair without checking the Green identity.
    pub fn assemble(
        pair: DualPair<R>,
        g0: usize,
        g1: usize,
        gamma_b: LinearRelation<R>,
        gamma_a: LinearRelation<R>,
    ) -> Result<Self> {
        let hg = 2 * pair.dim();
        let g = g0 + g1;
        for r in [&gamma_b, &gamma_a] {
            if r.dom_dim() != hg {
                return Err(Error::DimensionMismatch { expected: hg, found: r.dom_dim() });
            }
            if r.codom_dim() != g {
                return Err(Error::DimensionMismatch { expected: g, found: r.codom_dim() });
            }
        }
        Ok(Self { pair, g0, g1, gamma_b, gamma_a })
    }

    /// Assembles and validates the isometric boundary pair conditions.
    pub fn new(
        pair: DualPair<R>,
        g0: usize,
        g1: usize,
        gamma_b: LinearRelation<R>,
        gamma_a: LinearRelation<R>,
        tol: &Tol<R>,
    ) -> Result<Self> {
        let bp = Self::assemble(pair, g0, g1, gamma_b, gamma_a)?;
        bp.check_ibp(tol)?;
        Ok(bp)
    }

    pub fn pair(&self) -> &DualPair<R> {
        &self.pair
    }

    pub fn space(&self) -> &KreinSpace<R> {
        self.pair.space()
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn g0(&self) -> usize {
        self.g0
    }

    pub fn g1(&self) -> usize {
        self.g1
    }

    pub fn g_dim(&self) -> usize {
        self.g0 + self.g1
    }

    pub fn gamma_b(&self) -> &LinearRelation<R> {
        &self.gamma_b
    }

    pub fn gamma_a(&self) -> &LinearRelation<R> {
        &self.gamma_a
    }

    pub fn graph_space(&self) -> GraphSpace<R> {
        GraphSpace::new(self.space())
    }

    pub fn y(&self) -> CMatrix<R> {
        y_matrix(self.g0, self.g1)
    }

    /// The pair for `(B, A)` with the roles of `Γ^B` and `Γ^A` exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            pair: self.pair.swapped(),
            g0: self.g1,
            g1: self.g0,
            gamma_b: self.gamma_a.clone(),
            gamma_a: self.gamma_b.clone(),
        }
    }

    /// `Γ^B_# = {(ŷ, ĥ) : [x̂, ŷ]_Γ = ⟨l̂, Yĥ⟩ for all (x̂, l̂) ∈ Γ^B}`.
    pub fn gamma_b_sharp(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let hg = self.graph_space();
        let map = block_diag(&[hg.j(), &(-self.y().adjoint())]);
        let graph = self.gamma_b.graph().annihilator(&map, tol);
        LinearRelation::from_graph(graph, 2 * self.dim()).expect("graph of H_Γ × G′")
    }

    /// `Γ^A_# = {(x̂, l̂) : [x̂, ŷ]_Γ = ⟨l̂, Yĥ⟩ for all (ŷ, ĥ) ∈ Γ^A}`.
    pub fn gamma_a_sharp(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let hg = self.graph_space();
        let map = block_diag(&[hg.j(), &(-self.y())]);
        let graph = self.gamma_a.graph().annihilator(&map, tol);
        LinearRelation::from_graph(graph, 2 * self.dim()).expect("graph of H_Γ × G")
    }

    /// Largest entry of `[x̂, ŷ]_Γ − ⟨l̂, Yĥ⟩` over the two graph bases.
    pub fn green_residual(&self) -> R {
        let hg = self.graph_space();
        let (xb, lb) = (self.gamma_b.xs(), self.gamma_b.ys());
        let (ya, ha) = (self.gamma_a.xs(), self.gamma_a.ys());
        let lhs = ya.adjoint() * hg.j() * &xb;
        let rhs = (self.y() * ha).adjoint() * lb;
        max_abs(&(lhs - rhs))
    }

    /// Principal angles of `(Γ^B)^c` vs `(YΓ^B_#)⁻¹` and of `(Γ^A)^c` vs
    /// `(Y⁻¹Γ^A_#)⁻¹`, both adjoints taken from `H_Γ` into Hilbert spaces.
    pub fn adjoint_formula_angles(&self, tol: &Tol<R>) -> Result<(R, R)> {
        let hg = self.graph_space();
        let g = KreinSpace::hilbert(self.g_dim());
        let y = self.y();
        let lhs_b = self.gamma_b.krein_adjoint(hg.space(), &g, tol)?;
        let rhs_b = self.gamma_b_sharp(tol).map_codomain(&y, tol)?.inverse();
        let lhs_a = self.gamma_a.krein_adjoint(hg.space(), &g, tol)?;
        let y_inv = y.adjoint();
        let rhs_a = self.gamma_a_sharp(tol).map_codomain(&y_inv, tol)?.inverse();
        Ok((lhs_b.compare(&rhs_b, tol).max_angle, lhs_a.compare(&rhs_a, tol).max_angle))
    }

    fn proj(rows: usize, skip: usize, total: usize) -> CMatrix<R> {
        hstack(&[&zeros(rows, skip), &identity(rows), &zeros(rows, total - skip - rows)])
    }

    /// `Γ^B_0 = {(x̂, l₀)}`.
    pub fn gamma_b0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let p = Self::proj(self.g0, 0, self.g_dim());
        self.gamma_b.map_codomain(&p, tol).expect("codomain G")
    }

    /// `Γ^B_1 = {(x̂, l₁)}`.
    pub fn gamma_b1(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let p = Self::proj(self.g1, self.g0, self.g_dim());
        self.gamma_b.map_codomain(&p, tol).expect("codomain G")
    }

    /// `Γ^A_0 = {(ŷ, h₁)}`.
    pub fn gamma_a0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let p = Self::proj(self.g1, 0, self.g_dim());
        self.gamma_a.map_codomain(&p, tol).expect("codomain G′")
    }

    /// `Γ^A_1 = {(ŷ, h₀)}`.
    pub fn gamma_a1(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let p = Self::proj(self.g0, self.g1, self.g_dim());
        self.gamma_a.map_codomain(&p, tol).expect("codomain G′")
    }

    /// `A₀ = ker Γ^B_0`.
    pub fn a0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma_b0(tol).ker(tol), self.dim())
    }

    /// `A₁ = ker Γ^B_1`.
    pub fn a1(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma_b1(tol).ker(tol), self.dim())
    }

    /// `B₀ = ker Γ^A_0`.
    pub fn b0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma_a0(tol).ker(tol), self.dim())
    }

    /// `B₁ = ker Γ^A_1`.
    pub fn b1(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma_a1(tol).ker(tol), self.dim())
    }

    /// `ker Γ^B` as a relation in `H`.
    pub fn ker_gamma_b(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma_b.ker(tol), self.dim())
    }

    /// Checks the Green identity and `dom Γ^B = B^c`, `dom Γ^A = A^c`.
    pub fn check_ibp(&self, tol: &Tol<R>) -> Result<()> {
        if self.green_residual() > tol.residual_atol {
            return Err(Error::NotIsometric("Green identity fails"));
        }
        let n = self.dim();
        let dom_b = relation_in(&self.gamma_b.dom(tol), n);
        if !dom_b.approx_eq(&self.pair.b_adjoint(tol), tol) {
            return Err(Error::NotIsometric("dom Γ^B differs from B^c"));
        }
        let dom_a = relation_in(&self.gamma_a.dom(tol), n);
        if !dom_a.approx_eq(&self.pair.a_adjoint(tol), tol) {
            return Err(Error::NotIsometric("dom Γ^A differs from A^c"));
        }
        Ok(())
    }

    pub fn is_ibp(&self, tol: &Tol<R>) -> bool {
        self.check_ibp(tol).is_ok()
    }

    /// `Γ^A = Γ^B_#` and `Γ^B = Γ^A_#`.
    pub fn is_unitary(&self, tol: &Tol<R>) -> bool {
        self.gamma_a.approx_eq(&self.gamma_b_sharp(tol), tol)
            && self.gamma_b.approx_eq(&self.gamma_a_sharp(tol), tol)
    }

    /// Evaluates each rung of the ladder literally.
    pub fn classify(&self, tol: &Tol<R>) -> Result<Flavor> {
        self.check_ibp(tol)?;
        let h = self.space();
        let ubp = self.is_unitary(tol);
        let surjective_operators = [&self.gamma_b, &self.gamma_a]
            .iter()
            .all(|g| g.is_operator(tol) && g.ran(tol).is_full());
        let bt = surjective_operators;

        let (a0, b0) = (self.a0(tol), self.b0(tol));
        let a0_adj = a0.adjoint_in(h, tol)?;
        let b0_adj = b0.adjoint_in(h, tol)?;
        let a0_dual = a0.approx_eq(&b0_adj, tol);
        let b0_dual = b0.approx_eq(&a0_adj, tol);
        let ran_b0 = self.gamma_b0(tol).ran(tol).is_full();
        let ran_a0 = self.gamma_a0(tol).ran(tol).is_full();
        let ran_b1 = self.gamma_b1(tol).ran(tol).is_full();
        let ran_a1 = self.gamma_a1(tol).ran(tol).is_full();

        let ab_gen = a0_dual && b0_dual && ran_b0 && ran_a0;
        let q_bt = ab_gen && ran_b1 && ran_a1;
        let es_gen = ubp && a0_dual;
        let s_gen = es_gen && a0_dual && b0_dual;
        let b_gen = s_gen && ran_b0 && ran_a0;
        Ok(Flavor { ibp: true, ubp, bt, ab_gen, q_bt, es_gen, s_gen, b_gen })
    }

    fn check_theta(&self, theta: &LinearRelation<R>) -> Result<()> {
        if theta.dom_dim() != self.g0 || theta.codom_dim() != self.g1 {
            return Err(Error::ThetaOutsideBoundary);
        }
        Ok(())
    }

    /// `A_θ = (Γ^B)⁻¹(θ)`.
    pub fn extension_from_theta(
        &self,
        theta: &LinearRelation<R>,
        tol: &Tol<R>,
    ) -> Result<LinearRelation<R>> {
        self.check_theta(theta)?;
        Ok(relation_in(&self.gamma_b.preimage(theta.graph(), tol)?, self.dim()))
    }

    /// `θ = Γ^B(Ã)` for `ker Γ^B ⊆ Ã ⊆ B^c`.
    pub fn theta_from_extension(
        &self,
        ext: &LinearRelation<R>,
        tol: &Tol<R>,
    ) -> Result<LinearRelation<R>> {
        let n = self.dim();
        if ext.dom_dim() != n || ext.codom_dim() != n {
            return Err(Error::ExtensionOutsideBracket);
        }
        let lower = self.ker_gamma_b(tol);
        let upper = self.pair.b_adjoint(tol);
        if !lower.is_subset_of(ext, tol) || !ext.is_subset_of(&upper, tol) {
            return Err(Error::ExtensionOutsideBracket);
        }
        let image = self.gamma_b.image(ext.graph(), tol)?;
        LinearRelation::from_graph(image, self.g0)
    }

    /// Compares `A_θ^c` with `(Γ^B_#)⁻¹(θ*)`.
    pub fn adjoint_of_extension(
        &self,
        theta: &LinearRelation<R>,
        tol: &Tol<R>,
    ) -> Result<ExtensionAdjoint<R>> {
        let ext = self.extension_from_theta(theta, tol)?;
        let adjoint = ext.adjoint_in(self.space(), tol)?;
        let theta_star = theta.adjoint(tol);
        let via_sharp =
            relation_in(&self.gamma_b_sharp(tol).preimage(theta_star.graph(), tol)?, self.dim());
        let contained = via_sharp.is_subset_of(&adjoint, tol);
        let cmp = adjoint.compare(&via_sharp, tol);
        Ok(ExtensionAdjoint { adjoint, via_sharp, contained, equal: cmp.equal, max_angle: cmp.max_angle })
    }
}

/// Boundary triple of a quasi-selfadjoint contraction `T` with defect
/// subspace `N ⊇ ran(T* − T)`: `G₀ = G₁ = N` (in the coordinates of the
/// orthonormal basis of `N`), `A = T|N^⊥`,
/// `Γ^B(x, y) = (P_N(Tx − y), P_N x)` on `A* = T ∔ ({0} × N)` and
/// `Γ^A = Γ^B + ((T* − T)P, 0)`.
pub fn qsc_boundary_pair<R: Scalar>(
    t: &CMatrix<R>,
    n_space: &Subspace<R>,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let n = t.nrows();
    if t.ncols() != n {
        return Err(Error::NotSquare);
    }
    if n_space.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: n_space.ambient_dim() });
    }
    crate::linalg::check_finite(t)?;
    let norm = spectral_norm(t);
    if norm > R::one() + tol.residual_atol {
        return Err(Error::NotContraction(norm.as_f64()));
    }
    let skew = t.adjoint() - t;
    let skew_range = Subspace::column_space(&skew, tol);
    if !skew_range.is_subspace_of(n_space, tol) {
        return Err(Error::DefectSpaceTooSmall);
    }
    let nb = n_space.basis().clone();
    let k = nb.ncols();
    let h = KreinSpace::hilbert(n);
    let a = LinearRelation::operator_on(t, &n_space.orth_complement(tol), tol)?;
    let pair = DualPair::symmetric(h, a, tol)?;

    // Parametrize A* by (x, c) ↦ (x, Tx + N c).
    let id = identity::<R>(n);
    let x = hstack(&[&id, &zeros(n, k)]);
    let y = hstack(&[t, &nb]);
    let nbh = nb.adjoint();
    let l0 = hstack(&[&zeros(k, n), &(-identity::<R>(k))]);
    let l1 = &nbh * &x;
    let h1 = &nbh * (t.adjoint() * &x - &y);
    let stack = |top: &CMatrix<R>, bottom: &CMatrix<R>| crate::linalg::vstack(&[&x, &y, top, bottom]);
    let gamma_b = LinearRelation::from_stacked(&stack(&l0, &l1), 2 * n, tol);
    let gamma_a = LinearRelation::from_stacked(&stack(&h1, &l1), 2 * n, tol);
    BoundaryPair::new(pair, k, k, gamma_b, gamma_a, tol)
}

/// `Q_T(λ) = P_N (T − λ)⁻¹ |N` in the coordinates of the basis of `N`.
pub fn qsc_q_function<R: Scalar>(
    t: &CMatrix<R>,
    n_space: &Subspace<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    let n = t.nrows();
    let shifted = t - identity::<R>(n) * lambda;
    let inv = crate::linalg::invert(&shifted, tol, "T − λ")?;
    let nb = n_space.basis();
    Ok(nb.adjoint() * inv * nb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn t() -> Tol<f64> {
        Tol::default()
    }

    #[test]
    fn y_for_scalar_spaces() {
        let y = y_matrix::<f64>(1, 1);
        assert_eq!(y[(0, 0)], c(0.0, 0.0));
        assert_eq!(y[(0, 1)], c(0.0, -1.0));
        assert_eq!(y[(1, 0)], c(0.0, 1.0));
        assert_eq!(y[(1, 1)], c(0.0, 0.0));
        let y = y_matrix::<f64>(2, 1);
        assert!(max_abs(&(y.adjoint() * &y - identity::<f64>(3))) < 1e-15);
    }

    #[test]
    fn qsc_with_scalar_contraction() {
        let tm = identity::<f64>(2) * c(0.5, 0.0);
        let e1 = CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let nsp = Subspace::column_space(&e1, &t());
        let bp = qsc_boundary_pair(&tm, &nsp, &t()).unwrap();
        assert!(bp.green_residual() < 1e-12);
        let flavor = bp.classify(&t()).unwrap();
        assert!(flavor.bt && flavor.ubp);
        let q = qsc_q_function(&tm, &nsp, c(2.0, 0.0), &t()).unwrap();
        assert!((q[(0, 0)] - c(1.0 / (0.5 - 2.0), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn qsc_rejects_bad_input() {
        let big = identity::<f64>(2) * c(2.0, 0.0);
        let nsp = Subspace::full(2);
        assert!(matches!(qsc_boundary_pair(&big, &nsp, &t()), Err(Error::NotContraction(_))));
        let skew = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let e1 = CMatrix::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)]);
        let nsp = Subspace::column_space(&e1, &t());
        assert_eq!(qsc_boundary_pair(&skew, &nsp, &t()), Err(Error::DefectSpaceTooSmall));
    }

    #[test]
    fn zero_boundary_space() {
        let h = KreinSpace::<f64>::hilbert(2);
        let d = CMatrix::from_diagonal(&crate::linalg::CVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]));
        let a = LinearRelation::operator(&d, &t());
        let pair = DualPair::symmetric(h, a.clone(), &t()).unwrap();
        let gamma = LinearRelation::product(a.graph(), &Subspace::zero(0));
        let bp = BoundaryPair::new(pair, 0, 0, gamma.clone(), gamma, &t()).unwrap();
        let f = bp.classify(&t()).unwrap();
        assert!(f.ibp && f.ubp && f.bt);
        let sharp = bp.gamma_b_sharp(&t());
        assert!(sharp.approx_eq(bp.gamma_a(), &t()));
    }

    #[test]
    fn sharp_of_trivial_relation_is_everything() {
        let h = KreinSpace::<f64>::hilbert(1);
        let a = LinearRelation::full(1, 1);
        let b = LinearRelation::trivial(1, 1);
        let pair = DualPair::new(h, b.clone(), a, &t()).unwrap();
        let bp = BoundaryPair::assemble(pair, 1, 1, LinearRelation::trivial(2, 2), LinearRelation::trivial(2, 2)).unwrap();
        assert!(bp.gamma_b_sharp(&t()).graph().is_full());
    }
}
