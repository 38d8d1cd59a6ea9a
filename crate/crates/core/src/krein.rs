//! Krein spaces given by a fundamental symmetry, and the derived graph
//! spaces used for boundary maps.
//!
//! Inner products are linear in the first argument: `⟨u, v⟩ = vᴴu`, and the
//! indefinite metric is `[x, y] = ⟨Jx, y⟩ = yᴴJx`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    block2, hermitian_eigen, hermitian_residual, identity, max_abs, zeros, CMatrix, CVector, Tol,
};
use crate::scalar::{i_unit, Scalar};

/// A finite-dimensional Krein space `(ℂⁿ, [·,·])` with fundamental symmetry `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct KreinSpace<R: Scalar> {
    j: CMatrix<R>,
}

impl<R: Scalar> KreinSpace<R> {
    /// Validates that `j` is a Hermitian involution.
    pub fn new(j: CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        if j.nrows() != j.ncols() {
            return Err(Error::NotSquare);
        }
        crate::linalg::check_finite(&j)?;
        let herm = hermitian_residual(&j);
        if herm > tol.residual_atol {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        let inv = max_abs(&(&j * &j - identity::<R>(j.nrows())));
        if inv > tol.residual_atol {
            return Err(Error::NotInvolution(inv.as_f64()));
        }
        Ok(Self { j })
    }

    pub(crate) fn new_unchecked(j: CMatrix<R>) -> Self {
        Self { j }
    }

    /// The Hilbert space `ℂⁿ` (`J = I`).
    pub fn hilbert(n: usize) -> Self {
        Self { j: identity(n) }
    }

    /// `J = diag(I_p, −I_q)`.
    pub fn diagonal(p: usize, q: usize) -> Self {
        let mut j = identity::<R>(p + q);
        for k in p..p + q {
            j[(k, k)] = -j[(k, k)];
        }
        Self { j }
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn j(&self) -> &CMatrix<R> {
        &self.j
    }

    pub fn is_hilbert(&self, tol: &Tol<R>) -> bool {
        max_abs(&(&self.j - identity::<R>(self.dim()))) <= tol.residual_atol
    }

    /// `(κ₊, κ₋)`: the counts of `+1` and `−1` eigenvalues of `J`.
    pub fn signature(&self) -> (usize, usize) {
        let (vals, _) = hermitian_eigen(&self.j);
        let neg = vals.iter().filter(|&&v| v < R::zero()).count();
        (vals.len() - neg, neg)
    }

    /// `[x, y] = yᴴJx`.
    pub fn product(&self, x: &CVector<R>, y: &CVector<R>) -> Result<Complex<R>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().max(y.len()) });
        }
        Ok(y.dotc(&(&self.j * x)))
    }

    /// Gram matrix `Yᴴ J X` of the metric between column sets.
    pub fn gram(&self, x: &CMatrix<R>, y: &CMatrix<R>) -> CMatrix<R> {
        y.adjoint() * &self.j * x
    }

    /// The orthogonal sum of two Krein spaces.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { j: crate::linalg::block_diag(&[&self.j, &other.j]) }
    }
}

/// The graph space `H_Γ = H ⊕ H` with symmetry `[[0, −iJ], [iJ, 0]]`, so that
/// `[(x,x′), (y,y′)]_Γ = i[x, y′] − i[x′, y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSpace<R: Scalar> {
    base: KreinSpace<R>,
    carrier: KreinSpace<R>,
}

impl<R: Scalar> GraphSpace<R> {
    pub fn new(base: &KreinSpace<R>) -> Self {
        let n = base.dim();
        let ij = base.j() * i_unit::<R>();
        let z = zeros::<R>(n, n);
        let j = block2(&z, &(-&ij), &ij, &z);
        Self { base: base.clone(), carrier: KreinSpace::new_unchecked(j) }
    }

    pub fn base(&self) -> &KreinSpace<R> {
        &self.base
    }

    /// The carrier `H ⊕ H` with its fundamental symmetry.
    pub fn space(&self) -> &KreinSpace<R> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn j(&self) -> &CMatrix<R> {
        self.carrier.j()
    }
}

/// `Ĥ_Γ = H ⊕ H` with symmetry `(x, y) ↦ (Jy, Jx)`, so that
/// `[(x₁,y₁), (x₂,y₂)]_Γ̂ = [x₁, y₂] + [y₁, x₂]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HatSpace<R: Scalar> {
    base: KreinSpace<R>,
    carrier: KreinSpace<R>,
}

impl<R: Scalar> HatSpace<R> {
    pub fn new(base: &KreinSpace<R>) -> Self {
        let n = base.dim();
        let z = zeros::<R>(n, n);
        let j = block2(&z, base.j(), base.j(), &z);
        Self { base: base.clone(), carrier: KreinSpace::new_unchecked(j) }
    }

    pub fn base(&self) -> &KreinSpace<R> {
        &self.base
    }

    pub fn space(&self) -> &KreinSpace<R> {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    pub fn j(&self) -> &CMatrix<R> {
        self.carrier.j()
    }
}

pub fn make_graph_space<R: Scalar>(base: &KreinSpace<R>) -> GraphSpace<R> {
    GraphSpace::new(base)
}

pub fn make_hat_space<R: Scalar>(base: &KreinSpace<R>) -> HatSpace<R> {
    HatSpace::new(base)
}

/// The space `K = Ĥ_Γ ⊕ Ĥ_Γ` carrying the graph rule over the hat space.
pub fn make_k_space<R: Scalar>(hat: &HatSpace<R>) -> GraphSpace<R> {
    GraphSpace::new(hat.space())
}
