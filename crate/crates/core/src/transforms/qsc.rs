//! The Weyl function of the triple of a quasi-selfadjoint contraction
//! against its `Q`-function.

use num_complex::Complex;

use crate::boundary::{qsc_boundary_pair, qsc_q_function, BoundaryPair};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, Subspace, Tol};
use crate::scalar::Scalar;
use crate::weyl::{weyl_operator, weyl_relation};

/// Largest entry of `M_{Γ^B}(λ) − Q_T(λ)` for `|λ| > 1`.
pub fn qsc_weyl_residual<R: Scalar>(
    bp: &BoundaryPair<R>,
    t: &CMatrix<R>,
    n_space: &Subspace<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<R> {
    if nalgebra::ComplexField::modulus(lambda) <= R::one() {
        return Err(Error::NotResolvent);
    }
    let m = weyl_operator(&weyl_relation(bp, lambda, tol), tol)?;
    let q = qsc_q_function(t, n_space, lambda, tol)?;
    Ok(max_abs(&(m - q)))
}

/// Builds the triple of `T` and returns the largest residual over the grid.
pub fn qsc_check<R: Scalar>(
    t: &CMatrix<R>,
    n_space: &Subspace<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<R> {
    let bp = qsc_boundary_pair(t, n_space, tol)?;
    let mut worst = R::zero();
    for &z in grid {
        worst = worst.max(qsc_weyl_residual(&bp, t, n_space, z, tol)?);
    }
    Ok(worst)
}
