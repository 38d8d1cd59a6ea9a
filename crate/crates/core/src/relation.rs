//! Linear relations: subspaces of a product `ℂⁿ × ℂᵐ` read as multivalued
//! linear maps. Graph bases are stacked as `[x; y]` with `x` on top.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::krein::{GraphSpace, KreinSpace};
use crate::linalg::{
    block2, hermitian_eigen, identity, im_part, invert, max_abs, null_basis, vstack, zeros,
    CMatrix, Subspace, Tol,
};
use crate::scalar::Scalar;

/// A linear relation from `ℂ^dom_dim` to `ℂ^codom_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRelation<R: Scalar> {
    dom_dim: usize,
    codom_dim: usize,
    graph: Subspace<R>,
}

/// Spectral class of a point for a square relation in finite dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpectralClass {
    /// Resolvent set: injective with full range.
    Resolvent,
    /// Point spectrum: nontrivial eigenspace.
    Point,
    /// Residual spectrum: injective with deficient range.
    Residual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralPoint {
    pub class: SpectralClass,
    /// `λ` is a point of regular type (trivial eigenspace).
    pub regular_type: bool,
    /// `ran(T − ξ)` is closed for `ξ = λ, λ̄`; always true in finite dimension.
    pub closed_ranges: bool,
}

/// Coefficient pairs `(a, b)` spanning `{ P a = Q b }`.
fn matching<R: Scalar>(p: &CMatrix<R>, q: &CMatrix<R>, tol: &Tol<R>) -> (CMatrix<R>, CMatrix<R>) {
    let (ka, kb) = (p.ncols(), q.ncols());
    if ka + kb == 0 {
        return (zeros(0, 0), zeros(0, 0));
    }
    let stacked = crate::linalg::hstack(&[p, &(-q)]);
    let null = null_basis(&stacked, tol);
    (null.rows(0, ka).into_owned(), null.rows(ka, kb).into_owned())
}

impl<R: Scalar> LinearRelation<R> {
    /// Wraps a graph subspace of `ℂ^{dom_dim + codom_dim}`.
    pub fn from_graph(graph: Subspace<R>, dom_dim: usize) -> Result<Self> {
        if graph.ambient_dim() < dom_dim {
            return Err(Error::DimensionMismatch { expected: dom_dim, found: graph.ambient_dim() });
        }
        let codom_dim = graph.ambient_dim() - dom_dim;
        Ok(Self { dom_dim, codom_dim, graph })
    }

    /// Span of the columns of `[x; y]`.
    pub fn from_pairs(x: &CMatrix<R>, y: &CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        if x.ncols() != y.ncols() {
            return Err(Error::DimensionMismatch { expected: x.ncols(), found: y.ncols() });
        }
        crate::linalg::check_finite(x)?;
        crate::linalg::check_finite(y)?;
        Ok(Self::from_stacked(&vstack(&[x, y]), x.nrows(), tol))
    }

    pub(crate) fn from_stacked(m: &CMatrix<R>, dom_dim: usize, tol: &Tol<R>) -> Self {
        let graph = Subspace::span(m, tol);
        Self { dom_dim, codom_dim: m.nrows() - dom_dim, graph }
    }

    /// Graph of the matrix `m` as an everywhere defined operator.
    pub fn operator(m: &CMatrix<R>, tol: &Tol<R>) -> Self {
        let n = m.ncols();
        Self::from_stacked(&vstack(&[&identity(n), m]), n, tol)
    }

    /// Graph of `m` restricted to the subspace `dom`.
    pub fn operator_on(m: &CMatrix<R>, dom: &Subspace<R>, tol: &Tol<R>) -> Result<Self> {
        if dom.ambient_dim() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.ncols(), found: dom.ambient_dim() });
        }
        let x = dom.basis();
        Self::from_pairs(x, &(m * x), tol)
    }

    pub fn identity(n: usize, tol: &Tol<R>) -> Self {
        Self::operator(&identity(n), tol)
    }

    /// `λI` on `ℂⁿ`.
    pub fn scalar(n: usize, lambda: Complex<R>, tol: &Tol<R>) -> Self {
        Self::operator(&(identity::<R>(n) * lambda), tol)
    }

    /// `{(0, 0)}`.
    pub fn trivial(dom_dim: usize, codom_dim: usize) -> Self {
        Self { dom_dim, codom_dim, graph: Subspace::zero(dom_dim + codom_dim) }
    }

    /// `ℂⁿ × ℂᵐ`.
    pub fn full(dom_dim: usize, codom_dim: usize) -> Self {
        Self { dom_dim, codom_dim, graph: Subspace::full(dom_dim + codom_dim) }
    }

    /// `S × T` for subspaces of the two factors.
    pub fn product(dom: &Subspace<R>, codom: &Subspace<R>) -> Self {
        Self {
            dom_dim: dom.ambient_dim(),
            codom_dim: codom.ambient_dim(),
            graph: dom.product(codom),
        }
    }

    pub fn dom_dim(&self) -> usize {
        self.dom_dim
    }

    pub fn codom_dim(&self) -> usize {
        self.codom_dim
    }

    pub fn graph(&self) -> &Subspace<R> {
        &self.graph
    }

    /// Dimension of the graph.
    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// Top (`x`) block of the graph basis.
    pub fn xs(&self) -> CMatrix<R> {
        self.graph.basis().rows(0, self.dom_dim).into_owned()
    }

    /// Bottom (`y`) block of the graph basis.
    pub fn ys(&self) -> CMatrix<R> {
        self.graph.basis().rows(self.dom_dim, self.codom_dim).into_owned()
    }

    pub fn dom(&self, tol: &Tol<R>) -> Subspace<R> {
        self.graph.project_rows(0..self.dom_dim, tol)
    }

    pub fn ran(&self, tol: &Tol<R>) -> Subspace<R> {
        self.graph.project_rows(self.dom_dim..self.dom_dim + self.codom_dim, tol)
    }

    /// `{x : (x, 0) ∈ r}`.
    pub fn ker(&self, tol: &Tol<R>) -> Subspace<R> {
        let coeffs = null_basis(&self.ys(), tol);
        Subspace::span(&(self.xs() * coeffs), tol)
    }

    /// `{y : (0, y) ∈ r}`.
    pub fn mul(&self, tol: &Tol<R>) -> Subspace<R> {
        let coeffs = null_basis(&self.xs(), tol);
        Subspace::span(&(self.ys() * coeffs), tol)
    }

    pub fn is_operator(&self, tol: &Tol<R>) -> bool {
        self.mul(tol).is_zero()
    }

    /// Matrix of an everywhere defined operator.
    pub fn as_matrix(&self, tol: &Tol<R>) -> Result<CMatrix<R>> {
        if !self.is_operator(tol) {
            return Err(Error::Multivalued);
        }
        if self.dim() != self.dom_dim {
            return Err(Error::NotOperator);
        }
        let xinv = invert(&self.xs(), tol, "domain block")?;
        Ok(self.ys() * xinv)
    }

    /// `{(y, x) : (x, y) ∈ r}`.
    pub fn inverse(&self) -> Self {
        let b = vstack(&[&self.ys(), &self.xs()]);
        Self {
            dom_dim: self.codom_dim,
            codom_dim: self.dom_dim,
            graph: Subspace::from_orthonormal_unchecked(b),
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dom_dim != other.dom_dim || self.codom_dim != other.codom_dim {
            return Err(Error::DimensionMismatch {
                expected: self.dom_dim + self.codom_dim,
                found: other.dom_dim + other.codom_dim,
            });
        }
        Ok(())
    }

    /// `s ∘ self = {(x, z) : ∃y, (x, y) ∈ self, (y, z) ∈ s}`.
    pub fn then(&self, s: &Self, tol: &Tol<R>) -> Result<Self> {
        if self.codom_dim != s.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.codom_dim, found: s.dom_dim });
        }
        let (a, b) = matching(&self.ys(), &s.xs(), tol);
        Ok(Self::from_stacked(&vstack(&[&(self.xs() * a), &(s.ys() * b)]), self.dom_dim, tol))
    }

    /// `{(x, y + y′) : (x, y) ∈ self, (x, y′) ∈ other}`.
    pub fn op_sum(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.check_same_shape(other)?;
        let (a, b) = matching(&self.xs(), &other.xs(), tol);
        let x = self.xs() * &a;
        let y = self.ys() * a + other.ys() * b;
        Ok(Self::from_stacked(&vstack(&[&x, &y]), self.dom_dim, tol))
    }

    /// `self − other = {(x, y − y′)}`.
    pub fn op_diff(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.op_sum(&other.scale(-Complex::new(R::one(), R::zero()), tol), tol)
    }

    /// `{(x, c·y)}`.
    pub fn scale(&self, c: Complex<R>, tol: &Tol<R>) -> Self {
        Self::from_stacked(&vstack(&[&self.xs(), &(self.ys() * c)]), self.dom_dim, tol)
    }

    /// `{(x, M y)}`.
    pub fn map_codomain(&self, m: &CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        if m.ncols() != self.codom_dim {
            return Err(Error::DimensionMismatch { expected: self.codom_dim, found: m.ncols() });
        }
        Ok(Self::from_stacked(&vstack(&[&self.xs(), &(m * self.ys())]), self.dom_dim, tol))
    }

    /// `{(M x, y)}`.
    pub fn map_domain(&self, m: &CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        if m.ncols() != self.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.dom_dim, found: m.ncols() });
        }
        Ok(Self::from_stacked(&vstack(&[&(m * self.xs()), &self.ys()]), m.nrows(), tol))
    }

    /// `r − λI = {(x, y − λx)}`.
    pub fn shift(&self, lambda: Complex<R>, tol: &Tol<R>) -> Result<Self> {
        if self.dom_dim != self.codom_dim {
            return Err(Error::NotSquare);
        }
        let y = self.ys() - self.xs() * lambda;
        Ok(Self::from_stacked(&vstack(&[&self.xs(), &y]), self.dom_dim, tol))
    }

    /// `ker(r − λI)`.
    pub fn eigenspace(&self, lambda: Complex<R>, tol: &Tol<R>) -> Result<Subspace<R>> {
        Ok(self.shift(lambda, tol)?.ker(tol))
    }

    /// Intersection of graphs.
    pub fn intersect(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self { graph: self.graph.intersect(&other.graph, tol)?, ..self.clone() })
    }

    /// Componentwise sum of graphs.
    pub fn sum(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self { graph: self.graph.sum(&other.graph, tol)?, ..self.clone() })
    }

    /// `r ∩ (S × ℂᵐ)`.
    pub fn restrict(&self, dom: &Subspace<R>, tol: &Tol<R>) -> Result<Self> {
        if dom.ambient_dim() != self.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.dom_dim, found: dom.ambient_dim() });
        }
        let (a, _) = matching(&self.xs(), dom.basis(), tol);
        Ok(Self::from_stacked(&(self.graph.basis() * a), self.dom_dim, tol))
    }

    /// `r(S) = {y : ∃x ∈ S, (x, y) ∈ r}`.
    pub fn image(&self, s: &Subspace<R>, tol: &Tol<R>) -> Result<Subspace<R>> {
        Ok(self.restrict(s, tol)?.ran(tol))
    }

    /// Images of the columns of `d` under a single-valued relation; the
    /// columns must lie in `dom r`.
    pub fn apply_to(&self, d: &CMatrix<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
        if !self.mul(tol).is_zero() {
            return Err(Error::Multivalued);
        }
        if d.nrows() != self.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.dom_dim, found: d.nrows() });
        }
        let part = self.restrict(&Subspace::span(d, tol), tol)?;
        let coeffs = crate::linalg::solve_least_squares(&part.xs(), d, tol);
        Ok(part.ys() * coeffs)
    }

    /// `r⁻¹(S)`.
    pub fn preimage(&self, s: &Subspace<R>, tol: &Tol<R>) -> Result<Subspace<R>> {
        self.inverse().image(s, tol)
    }

    /// Adjoint with respect to the indefinite metrics of the two spaces:
    /// `{(y, y′) : [x′, y]₂ = [x, y′]₁ for all (x, x′) ∈ r}`.
    pub fn krein_adjoint(
        &self,
        dom_space: &KreinSpace<R>,
        codom_space: &KreinSpace<R>,
        tol: &Tol<R>,
    ) -> Result<Self> {
        if dom_space.dim() != self.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.dom_dim, found: dom_space.dim() });
        }
        if codom_space.dim() != self.codom_dim {
            return Err(Error::DimensionMismatch {
                expected: self.codom_dim,
                found: codom_space.dim(),
            });
        }
        let (n, m) = (self.dom_dim, self.codom_dim);
        let g = block2(&zeros(m, n), codom_space.j(), &(-dom_space.j()), &zeros(n, m));
        let graph = self.graph.annihilator(&g, tol);
        Ok(Self { dom_dim: m, codom_dim: n, graph })
    }

    /// Hilbert-space adjoint `{(y, y′) : ⟨x′, y⟩ = ⟨x, y′⟩}`.
    pub fn adjoint(&self, tol: &Tol<R>) -> Self {
        let g = block2(
            &zeros(self.codom_dim, self.dom_dim),
            &identity(self.codom_dim),
            &(-identity::<R>(self.dom_dim)),
            &zeros(self.dom_dim, self.codom_dim),
        );
        Self { dom_dim: self.codom_dim, codom_dim: self.dom_dim, graph: self.graph.annihilator(&g, tol) }
    }

    pub fn compare(&self, other: &Self, tol: &Tol<R>) -> crate::linalg::Comparison<R> {
        if self.dom_dim != other.dom_dim || self.codom_dim != other.codom_dim {
            return crate::linalg::Comparison { equal: false, max_angle: R::frac_pi_2() };
        }
        self.graph.compare(&other.graph, tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tol<R>) -> bool {
        self.compare(other, tol).equal
    }

    pub fn is_subset_of(&self, other: &Self, tol: &Tol<R>) -> bool {
        self.dom_dim == other.dom_dim
            && self.codom_dim == other.codom_dim
            && self.graph.is_subspace_of(&other.graph, tol)
    }

    /// Angle by which `self ⊆ other` fails (zero when contained).
    pub fn containment_angle(&self, other: &Self) -> R {
        self.graph.containment_angle(&other.graph)
    }

    /// `diag(self, other)` acting on `ℂⁿ ⊕ ℂᵖ`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (xa, ya, xb, yb) = (self.xs(), self.ys(), other.xs(), other.ys());
        let (ka, kb) = (self.dim(), other.dim());
        let top = block2(&xa, &zeros(xa.nrows(), kb), &zeros(xb.nrows(), ka), &xb);
        let bottom = block2(&ya, &zeros(ya.nrows(), kb), &zeros(yb.nrows(), ka), &yb);
        Self {
            dom_dim: self.dom_dim + other.dom_dim,
            codom_dim: self.codom_dim + other.codom_dim,
            graph: Subspace::from_orthonormal_unchecked(vstack(&[&top, &bottom])),
        }
    }

    fn check_square_on(&self, space: &KreinSpace<R>) -> Result<()> {
        if self.dom_dim != self.codom_dim {
            return Err(Error::NotSquare);
        }
        if space.dim() != self.dom_dim {
            return Err(Error::DimensionMismatch { expected: self.dom_dim, found: space.dim() });
        }
        Ok(())
    }

    /// Adjoint of a relation in a single Krein space.
    pub fn adjoint_in(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<Self> {
        self.check_square_on(space)?;
        self.krein_adjoint(space, space, tol)
    }

    /// `r ⊆ r^c`.
    pub fn is_symmetric(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<bool> {
        Ok(self.is_subset_of(&self.adjoint_in(space, tol)?, tol))
    }

    /// `r = r^c`.
    pub fn is_selfadjoint(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<bool> {
        Ok(self.approx_eq(&self.adjoint_in(space, tol)?, tol))
    }

    /// Neutrality of the graph in the graph space over `space`.
    pub fn is_neutral(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<bool> {
        self.check_square_on(space)?;
        let g = GraphSpace::new(space);
        let b = self.graph.basis();
        Ok(max_abs(&g.space().gram(b, b)) <= tol.residual_atol)
    }

    /// `Im[x′, x] ≥ 0` on the graph, decided by the smallest eigenvalue of
    /// the compressed Hermitian form.
    pub fn is_dissipative(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<bool> {
        self.check_square_on(space)?;
        if self.dim() == 0 {
            return Ok(true);
        }
        let q = self.xs().adjoint() * space.j() * self.ys();
        let (vals, _) = hermitian_eigen(&im_part(&q));
        Ok(vals[0] >= -tol.residual_atol)
    }

    /// Classifies `λ` for a square relation.
    pub fn spectral_classify(&self, lambda: Complex<R>, tol: &Tol<R>) -> Result<SpectralPoint> {
        if self.dom_dim != self.codom_dim {
            return Err(Error::NotSquare);
        }
        let shifted = self.shift(lambda, tol)?;
        let regular_type = shifted.ker(tol).is_zero();
        let class = if !regular_type {
            SpectralClass::Point
        } else if shifted.ran(tol).is_full() {
            SpectralClass::Resolvent
        } else {
            SpectralClass::Residual
        };
        Ok(SpectralPoint { class, regular_type, closed_ranges: true })
    }

    /// `(dim ker(r^c − i), dim ker(r^c + i))` for a symmetric relation.
    pub fn defect_numbers(&self, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<(usize, usize)> {
        let adj = self.adjoint_in(space, tol)?;
        if !self.is_subset_of(&adj, tol) {
            return Err(Error::NotSymmetric);
        }
        let i = Complex::new(R::zero(), R::one());
        Ok((adj.eigenspace(i, tol)?.dim(), adj.eigenspace(-i, tol)?.dim()))
    }
}
