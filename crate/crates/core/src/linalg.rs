//! Tolerance-aware dense complex linear algebra and subspace arithmetic.
//!
//! Every subspace is stored as an orthonormal (Euclidean) basis. Ranks are
//! decided from singular values, and subspace equality is principal-angle
//! equality, so results do not depend on the basis a caller started from.

use std::ops::Range;

use faer::{c64, Mat, Side};
use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Scalar};

pub type CMatrix<R> = DMatrix<Complex<R>>;
pub type CVector<R> = DVector<Complex<R>>;

/// Numerical thresholds shared by all operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol<R> {
    /// Relative singular-value cutoff used for rank decisions.
    pub rank_rtol: R,
    /// Absolute threshold for identity residuals.
    pub residual_atol: R,
    /// Largest principal angle (radians) at which two subspaces count as equal.
    pub angle_atol: R,
}

impl<R: Scalar> Tol<R> {
    pub fn new(rank_rtol: R, residual_atol: R, angle_atol: R) -> Result<Self> {
        if !(rank_rtol > R::zero()) || !(rank_rtol < R::one()) {
            return Err(Error::InvalidTolerance("rank_rtol must lie in (0, 1)"));
        }
        if !(residual_atol > R::zero()) {
            return Err(Error::InvalidTolerance("residual_atol must be positive"));
        }
        if !(angle_atol > R::zero()) {
            return Err(Error::InvalidTolerance("angle_atol must be positive"));
        }
        Ok(Self { rank_rtol, residual_atol, angle_atol })
    }
}

impl<R: Scalar> Default for Tol<R> {
    fn default() -> Self {
        Self {
            rank_rtol: R::lit(1e-9),
            residual_atol: R::lit(1e-8),
            angle_atol: R::lit(1e-7),
        }
    }
}

pub(crate) fn check_finite<R: Scalar>(m: &CMatrix<R>) -> Result<()> {
    if m.iter().all(is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Singular value decomposition `m = U·diag(s)·Vᴴ` with `U`, `V` square and
/// `s` descending.
#[derive(Clone, Debug)]
pub struct Svd<R: Scalar> {
    pub u: CMatrix<R>,
    pub s: Vec<R>,
    pub v: CMatrix<R>,
}

fn to_faer<R: Scalar>(m: &CMatrix<R>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, k| {
        let z = m[(r, k)];
        c64::new(z.re.as_f64(), z.im.as_f64())
    })
}

fn from_faer<R: Scalar>(m: faer::MatRef<'_, c64>) -> CMatrix<R> {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, k| {
        let z = m[(r, k)];
        Complex::new(R::lit(z.re), R::lit(z.im))
    })
}

/// Full SVD, computed in double precision.
pub fn svd<R: Scalar>(m: &CMatrix<R>) -> Svd<R> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Svd { u: identity(rows), s: Vec::new(), v: identity(cols) };
    }
    let d = to_faer(m).svd().expect("SVD of a finite matrix");
    let s = d.S().column_vector().iter().map(|z| R::lit(z.re)).collect();
    Svd { u: from_faer(d.U()), s, v: from_faer(d.V()) }
}

/// Singular values, descending.
pub fn singular_values<R: Scalar>(m: &CMatrix<R>) -> Vec<R> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let vals = to_faer(m).singular_values().expect("SVD of a finite matrix");
    vals.into_iter().map(R::lit).collect()
}

/// Largest singular value.
pub fn spectral_norm<R: Scalar>(m: &CMatrix<R>) -> R {
    singular_values(m).first().copied().unwrap_or_else(R::zero)
}

/// Largest entry modulus; zero for empty matrices.
pub fn max_abs<R: Scalar>(m: &CMatrix<R>) -> R {
    m.iter().fold(R::zero(), |a, z| a.max(z.modulus()))
}

/// Eigen-decomposition of a Hermitian matrix (eigenvalues ascending).
pub fn hermitian_eigen<R: Scalar>(m: &CMatrix<R>) -> (Vec<R>, CMatrix<R>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (m + m.adjoint()).scale(R::lit(0.5));
    let eig = to_faer(&sym).self_adjoint_eigen(Side::Lower).expect("eigen of a finite matrix");
    let values = eig.S().column_vector().iter().map(|z| R::lit(z.re)).collect();
    (values, from_faer(eig.U()))
}

/// Hermitian residual ‖M − Mᴴ‖ (max entry).
pub fn hermitian_residual<R: Scalar>(m: &CMatrix<R>) -> R {
    max_abs(&(m - m.adjoint()))
}

/// Inverse of a square matrix, rejecting numerically singular input.
pub fn invert<R: Scalar>(m: &CMatrix<R>, tol: &Tol<R>, what: &'static str) -> Result<CMatrix<R>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let sv = singular_values(m);
    let (smax, smin) = (sv[0], sv[n - 1]);
    if !(smax > R::zero()) || smin < tol.rank_rtol * smax {
        return Err(Error::Singular(what));
    }
    m.clone().try_inverse().ok_or(Error::Singular(what))
}

/// Stacks blocks vertically; all blocks must share a column count.
pub fn vstack<R: Scalar>(blocks: &[&CMatrix<R>]) -> CMatrix<R> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        debug_assert_eq!(b.ncols(), cols);
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// Stacks blocks horizontally; all blocks must share a row count.
pub fn hstack<R: Scalar>(blocks: &[&CMatrix<R>]) -> CMatrix<R> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        debug_assert_eq!(b.nrows(), rows);
        out.view_mut((0, c), (rows, b.ncols())).copy_from(b);
        c += b.ncols();
    }
    out
}

/// Block-diagonal matrix.
pub fn block_diag<R: Scalar>(blocks: &[&CMatrix<R>]) -> CMatrix<R> {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// 2×2 block matrix `[[a, b], [c, d]]`.
pub fn block2<R: Scalar>(
    a: &CMatrix<R>,
    b: &CMatrix<R>,
    c: &CMatrix<R>,
    d: &CMatrix<R>,
) -> CMatrix<R> {
    vstack(&[&hstack(&[a, b]), &hstack(&[c, d])])
}

pub fn identity<R: Scalar>(n: usize) -> CMatrix<R> {
    CMatrix::identity(n, n)
}

pub fn zeros<R: Scalar>(r: usize, c: usize) -> CMatrix<R> {
    CMatrix::zeros(r, c)
}

/// Hermitian part `(M + Mᴴ)/2`.
pub fn re_part<R: Scalar>(m: &CMatrix<R>) -> CMatrix<R> {
    (m + m.adjoint()).scale(R::lit(0.5))
}

/// Skew part `(M − Mᴴ)/(2i)`, Hermitian.
pub fn im_part<R: Scalar>(m: &CMatrix<R>) -> CMatrix<R> {
    (m - m.adjoint()) * Complex::new(R::zero(), R::lit(-0.5))
}

/// Orthonormal basis of the range; σ kept iff σ ≥ cutoff and σ > 0.
fn range_basis<R: Scalar>(m: &CMatrix<R>, cutoff: impl Fn(R) -> R) -> CMatrix<R> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let d = svd(m);
    let smax = d.s[0];
    let cut = cutoff(smax);
    let keep = d.s.iter().take_while(|&&s| s > R::zero() && s >= cut).count();
    d.u.columns(0, keep).into_owned()
}

/// Orthonormal basis of the kernel of `m` under the floored cutoff.
pub(crate) fn null_basis<R: Scalar>(m: &CMatrix<R>, tol: &Tol<R>) -> CMatrix<R> {
    let (rows, n) = m.shape();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if rows == 0 {
        return identity(n);
    }
    let d = svd(m);
    let smax = d.s[0];
    let cut = tol.rank_rtol * smax.max(R::one());
    let rank = d.s.iter().take_while(|&&s| s > R::zero() && s >= cut).count();
    d.v.columns(rank, n - rank).into_owned()
}

/// Numerical rank under the floored cutoff.
pub fn rank<R: Scalar>(m: &CMatrix<R>, tol: &Tol<R>) -> usize {
    range_basis(m, |smax| tol.rank_rtol * smax.max(R::one())).ncols()
}

/// Least-squares solution `X` of `A X = B` via the pseudo-inverse.
pub fn solve_least_squares<R: Scalar>(
    a: &CMatrix<R>,
    b: &CMatrix<R>,
    tol: &Tol<R>,
) -> CMatrix<R> {
    if a.ncols() == 0 || b.ncols() == 0 {
        return zeros(a.ncols(), b.ncols());
    }
    if a.nrows() == 0 {
        return zeros(a.ncols(), b.ncols());
    }
    let d = svd(a);
    let cut = tol.rank_rtol * d.s[0].max(R::one());
    let rank = d.s.iter().take_while(|&&s| s > R::zero() && s >= cut).count();
    let ur = d.u.columns(0, rank);
    let mut coeffs = ur.adjoint() * b;
    for (k, mut row) in coeffs.row_iter_mut().enumerate() {
        row /= Complex::new(d.s[k], R::zero());
    }
    d.v.columns(0, rank) * coeffs
}

/// Comparison of two subspaces by their largest principal angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison<R> {
    pub equal: bool,
    pub max_angle: R,
}

/// A subspace of `ℂⁿ` held as an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<R: Scalar> {
    basis: CMatrix<R>,
}

impl<R: Scalar> Subspace<R> {
    /// The zero subspace of `ℂⁿ`.
    pub fn zero(n: usize) -> Self {
        Self { basis: CMatrix::zeros(n, 0) }
    }

    /// All of `ℂⁿ`.
    pub fn full(n: usize) -> Self {
        Self { basis: identity(n) }
    }

    /// Span of the columns of `m`; singular values below `rank_rtol·σ_max`
    /// are discarded. The zero matrix spans the zero subspace.
    pub fn column_space(m: &CMatrix<R>, tol: &Tol<R>) -> Self {
        Self { basis: range_basis(m, |smax| tol.rank_rtol * smax) }
    }

    /// Like [`Subspace::column_space`], but the cutoff is never below
    /// `rank_rtol`. Used for matrices built from orthonormal bases, where
    /// roundoff columns must not register as directions.
    pub fn span(m: &CMatrix<R>, tol: &Tol<R>) -> Self {
        Self { basis: range_basis(m, |smax| tol.rank_rtol * smax.max(R::one())) }
    }

    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        check_finite(&basis)?;
        let k = basis.ncols();
        let res = max_abs(&(basis.adjoint() * &basis - identity::<R>(k)));
        if res > tol.residual_atol {
            return Err(Error::NotOrthonormal(res.as_f64()));
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_orthonormal_unchecked(basis: CMatrix<R>) -> Self {
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn basis(&self) -> &CMatrix<R> {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix<R> {
        &self.basis * self.basis.adjoint()
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::span(&hstack(&[&self.basis, &other.basis]), tol))
    }

    /// `self ∩ other`, from the kernel of `[A | −B]`.
    pub fn intersect(&self, other: &Self, tol: &Tol<R>) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.ambient_dim();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(n));
        }
        let stacked = hstack(&[&self.basis, &(-&other.basis)]);
        let null = null_basis(&stacked, tol);
        let coeffs = null.rows(0, self.dim()).into_owned();
        Ok(Self::span(&(&self.basis * coeffs), tol))
    }

    /// Euclidean orthogonal complement.
    pub fn orth_complement(&self, tol: &Tol<R>) -> Self {
        let n = self.ambient_dim();
        if self.is_zero() {
            return Self::full(n);
        }
        Self { basis: null_basis(&self.basis.adjoint(), tol) }
    }

    /// `{y : ⟨gram·x, y⟩ = 0 for all x in self}` for Hermitian invertible `gram`.
    pub fn complement_wrt_form(&self, gram: &CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        let n = self.ambient_dim();
        if gram.nrows() != n || gram.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: gram.nrows() });
        }
        let herm = hermitian_residual(gram);
        if herm > tol.residual_atol {
            return Err(Error::NotHermitian(herm.as_f64()));
        }
        if n > 0 {
            let sv = singular_values(gram);
            let smax = sv[0];
            if !(smax > R::zero()) || sv[sv.len() - 1] < tol.rank_rtol * smax {
                return Err(Error::SingularForm);
            }
        }
        Ok(self.annihilator(gram, tol))
    }

    /// `{y : yᴴ·map·x = 0 for all x in self}` for an arbitrary `map`.
    pub(crate) fn annihilator(&self, map: &CMatrix<R>, tol: &Tol<R>) -> Self {
        let image = Self::span(&(map * &self.basis), tol);
        image.orth_complement(tol)
    }

    /// `‖(I − P_other)·basis‖`: the sine of the largest angle between a
    /// vector of `self` and the subspace `other`. Zero iff `self ⊆ other`.
    pub fn excess_over(&self, other: &Self) -> R {
        if self.is_zero() {
            return R::zero();
        }
        let resid = &self.basis - &other.basis * (other.basis.adjoint() * &self.basis);
        spectral_norm(&resid)
    }

    /// Largest principal angle, as an angle of containment of `self` in `other`.
    pub fn containment_angle(&self, other: &Self) -> R {
        self.excess_over(other).min(R::one()).asin()
    }

    pub fn is_subspace_of(&self, other: &Self, tol: &Tol<R>) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() <= other.dim()
            && self.containment_angle(other) <= tol.angle_atol
    }

    /// Principal-angle comparison; equal iff dimensions agree and the
    /// largest principal angle is at most `angle_atol`.
    pub fn compare(&self, other: &Self, tol: &Tol<R>) -> Comparison<R> {
        if self.ambient_dim() != other.ambient_dim() {
            return Comparison { equal: false, max_angle: R::frac_pi_2() };
        }
        let (small, large) =
            if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let angle = if self.dim() == other.dim() {
            self.containment_angle(other).max(other.containment_angle(self))
        } else if small.is_zero() {
            R::frac_pi_2()
        } else {
            small.containment_angle(large)
        };
        let equal = self.dim() == other.dim() && angle <= tol.angle_atol;
        Comparison { equal, max_angle: if self.dim() == other.dim() { angle } else { angle.max(R::zero()) } }
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tol<R>) -> bool {
        self.compare(other, tol).equal
    }

    /// Span of the selected coordinate rows (a coordinate projection).
    pub fn project_rows(&self, rows: Range<usize>, tol: &Tol<R>) -> Self {
        let block = self.basis.rows(rows.start, rows.len()).into_owned();
        Self::span(&block, tol)
    }

    /// Rows rearranged so that new row `k` is old row `perm[k]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.ambient_dim());
        let b = CMatrix::from_fn(perm.len(), self.dim(), |r, c| self.basis[(perm[r], c)]);
        Self { basis: b }
    }

    /// Image under a linear map.
    pub fn map(&self, m: &CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        if m.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), found: m.ncols() });
        }
        Ok(Self::span(&(m * &self.basis), tol))
    }

    /// `self × other` inside `ℂⁿ ⊕ ℂᵐ`.
    pub fn product(&self, other: &Self) -> Self {
        Self { basis: block_diag(&[&self.basis, &other.basis]) }
    }

    pub fn contains_vector(&self, v: &CVector<R>, tol: &Tol<R>) -> bool {
        let resid = v - &self.basis * (self.basis.adjoint() * v);
        resid.norm() <= tol.residual_atol * v.norm().max(R::one())
    }
}
