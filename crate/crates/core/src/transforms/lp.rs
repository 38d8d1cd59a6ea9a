//! `π`-symmetric operators in a Pontryagin space: the classes (P), (L),
//! (LP), the half-plane `|Im λ| > t₀‖AP⁻‖` and simplicity.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::krein::KreinSpace;
use crate::linalg::{hermitian_eigen, invert, spectral_norm, CMatrix, Subspace, Tol};
use crate::relation::LinearRelation;
use crate::scalar::{c, Scalar};

/// Constant in the half-plane estimate `|Im λ| > t₀‖AP⁻‖`.
pub const T0: f64 = 1.84;

#[derive(Clone, Debug)]
pub struct LpAnalysis<R: Scalar> {
    pub kappa: usize,
    /// `dom A + ran A` is the whole space.
    pub in_p: bool,
    /// Some maximal negative subspace lies in `dom A`.
    pub in_l: bool,
    pub in_lp: bool,
    /// Canonical projection onto the negative subspace found in `dom A`.
    pub p_minus: Option<CMatrix<R>>,
    /// `t₀‖AP⁻‖`, when (L) holds.
    pub halfplane_bound: Option<R>,
    /// The grid of points beyond the bound used for simplicity.
    pub grid: Vec<Complex<R>>,
    /// Eigenspaces of `A^c` over `grid` span the space.
    pub simple: Option<bool>,
}

/// Conjugate-closed points with `|Im λ| ≥ height`.
pub fn high_grid<R: Scalar>(height: R) -> Vec<Complex<R>> {
    let h = height.as_f64();
    [(0.0, 1.0), (1.0, 1.5), (-1.0, 2.0), (2.0, 3.0)]
        .iter()
        .flat_map(|&(re, s)| [c::<R>(re, h * s), c::<R>(re, -h * s)])
        .collect()
}

/// Whether the eigenspaces of `A^c` over the grid span the space.
pub fn defect_span_full<R: Scalar>(
    a: &LinearRelation<R>,
    space: &KreinSpace<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<bool> {
    let adj = a.adjoint_in(space, tol)?;
    let mut span = Subspace::zero(space.dim());
    for &z in grid {
        span = span.sum(&adj.eigenspace(z, tol)?, tol)?;
    }
    Ok(span.is_full())
}

/// A negative subspace of maximal dimension inside `dom`, from the negative
/// eigenvectors of the compressed form `DᴴJD`.
fn negative_in<R: Scalar>(dom: &Subspace<R>, space: &KreinSpace<R>, tol: &Tol<R>) -> CMatrix<R> {
    let d = dom.basis();
    let form = d.adjoint() * space.j() * d;
    let (vals, vecs) = hermitian_eigen(&form);
    let cut = tol.rank_rtol * spectral_norm(&form).max(R::one());
    let cols: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] < -cut).collect();
    let picked = CMatrix::from_fn(vecs.nrows(), cols.len(), |r, k| vecs[(r, cols[k])]);
    d * picked
}

pub fn lp_analysis<R: Scalar>(a: &LinearRelation<R>, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<LpAnalysis<R>> {
    if a.dom_dim() != space.dim() || a.codom_dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: a.dom_dim() });
    }
    if !a.mul(tol).is_zero() {
        return Err(Error::Multivalued);
    }
    let kappa = space.signature().1;
    let dom = a.dom(tol);
    let in_p = dom.sum(&a.ran(tol), tol)?.is_full();
    let neg = negative_in(&dom, space, tol);
    let in_l = neg.ncols() == kappa;
    let (p_minus, halfplane_bound) = if in_l {
        if kappa == 0 {
            let n = space.dim();
            (Some(CMatrix::zeros(n, n)), Some(R::zero()))
        } else {
            let j = space.j();
            let gram = neg.adjoint() * j * &neg;
            let coeff = invert(&gram, tol, "negative Gram")? * neg.adjoint() * j;
            let p = &neg * &coeff;
            let an = a.apply_to(&neg, tol)?;
            (Some(p), Some(R::lit(T0) * spectral_norm(&(an * coeff))))
        }
    } else {
        (None, None)
    };
    let (grid, simple) = match halfplane_bound {
        Some(b) => {
            let g = high_grid(b + R::one());
            let s = defect_span_full(a, space, &g, tol)?;
            (g, Some(s))
        }
        None => (Vec::new(), None),
    };
    Ok(LpAnalysis { kappa, in_p, in_l, in_lp: in_p && in_l, p_minus, halfplane_bound, grid, simple })
}
