//! `D`-boundary triples: pairs for `(A, A)` with `Γ^A = EΓ^B`,
//! `E(l₀, l₁) = (E₁l₀, iE₂l₀ + l₁)`, and their representing pairs.
//!
//! `G₁ ⊆ G₀` is described by an isometry `ι : ℂ^{g1} → ℂ^{g0}`; `E₁ = ιιᴴ`
//! and `E₂ = I − ιιᴴ` act in `G₀`, and vectors of `G₁` are stored in the
//! coordinates of `ι`.

use num_complex::Complex;

use crate::boundary::BoundaryPair;
use crate::error::{Error, Result};
use crate::generate::e_matrix;
use crate::linalg::{identity, max_abs, CMatrix, Tol};
use crate::relation::LinearRelation;
use crate::scalar::{i_unit, Scalar};
use crate::weyl::{weyl_operator, weyl_relation, weyl_relation_a};

#[derive(Clone, Debug, PartialEq)]
pub struct DbtParams<R: Scalar> {
    iota: CMatrix<R>,
}

impl<R: Scalar> DbtParams<R> {
    pub fn new(iota: CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        let (g0, g1) = iota.shape();
        if g1 > g0 {
            return Err(Error::DimensionMismatch { expected: g0, found: g1 });
        }
        let r = max_abs(&(iota.adjoint() * &iota - identity::<R>(g1)));
        if r > tol.residual_atol {
            return Err(Error::NotOrthonormal(r.as_f64()));
        }
        Ok(Self { iota })
    }

    /// `G₁` spanned by the first `g1` coordinate vectors of `G₀`.
    pub fn standard(g0: usize, g1: usize) -> Result<Self> {
        if g1 > g0 {
            return Err(Error::DimensionMismatch { expected: g0, found: g1 });
        }
        Ok(Self { iota: identity::<R>(g0).columns(0, g1).into_owned() })
    }

    pub fn g0(&self) -> usize {
        self.iota.nrows()
    }

    pub fn g1(&self) -> usize {
        self.iota.ncols()
    }

    pub fn iota(&self) -> &CMatrix<R> {
        &self.iota
    }

    pub fn e1(&self) -> CMatrix<R> {
        &self.iota * self.iota.adjoint()
    }

    pub fn e2(&self) -> CMatrix<R> {
        identity::<R>(self.g0()) - self.e1()
    }

    pub fn e(&self) -> CMatrix<R> {
        e_matrix(&self.iota)
    }

    /// Largest residual of `E₁ + E₂ = I`, `E₁E₂ = 0`, `Eᵢ² = Eᵢ = Eᵢᴴ`.
    pub fn projection_residual(&self) -> R {
        let (e1, e2) = (self.e1(), self.e2());
        [
            max_abs(&(&e1 + &e2 - identity::<R>(self.g0()))),
            max_abs(&(&e1 * &e2)),
            max_abs(&(&e1 * &e1 - &e1)),
            max_abs(&(&e2 * &e2 - &e2)),
            max_abs(&(e1.adjoint() - &e1)),
            max_abs(&(e2.adjoint() - &e2)),
        ]
        .into_iter()
        .fold(R::zero(), R::max)
    }
}

/// A pair for `(A, A)` verified to satisfy `Γ^A = EΓ^B`.
#[derive(Clone, Debug)]
pub struct DTriple<R: Scalar> {
    pub bp: BoundaryPair<R>,
    pub params: DbtParams<R>,
    /// Largest angle between `Γ^A` and `EΓ^B`.
    pub angle: R,
    /// Whether the pair is a boundary triple (only possible for `G₁ = G₀`
    /// in finite dimensions).
    pub is_bt: bool,
}

pub fn dbt_build<R: Scalar>(bp: BoundaryPair<R>, params: DbtParams<R>, tol: &Tol<R>) -> Result<DTriple<R>> {
    if bp.g0() != params.g0() || bp.g1() != params.g1() {
        return Err(Error::DimensionMismatch { expected: params.g0(), found: bp.g0() });
    }
    if !bp.pair().a().approx_eq(bp.pair().b(), tol) {
        return Err(Error::Unsupported("D-triples need A = B"));
    }
    let mapped = bp.gamma_b().map_codomain(&params.e(), tol)?;
    let angle = mapped.compare(bp.gamma_a(), tol).max_angle;
    if angle > tol.angle_atol {
        return Err(Error::NotDTriple(angle.as_f64()));
    }
    let is_bt = bp.classify(tol)?.bt;
    Ok(DTriple { bp, params, angle, is_bt })
}

/// The representing pair of `M_{Γ^B}(λ)` at one point.
#[derive(Clone, Debug)]
pub struct RepresentingSample<R: Scalar> {
    pub lambda: Complex<R>,
    /// `Φ(λ) = I₁ − iE₂M_{Γ^A}(λ)` (`g0 × g1`), when `M_{Γ^A}(λ)` is an
    /// operator.
    pub phi: Option<CMatrix<R>>,
    /// `Ψ(λ) = E₁M_{Γ^A}(λ)` (`g1 × g1`).
    pub psi: Option<CMatrix<R>>,
    /// Angle between `{(Φh, Ψh)}` and `M_{Γ^B}(λ)`.
    pub pair_angle: R,
    /// Angle between `E₁(M_{Γ^A}(λ)⁻¹ − iE₂)⁻¹` and `M_{Γ^B}(λ)`.
    pub closed_angle: R,
}

pub fn dbt_representing_pair<R: Scalar>(
    dt: &DTriple<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<RepresentingSample<R>> {
    let iota = dt.params.iota();
    let e2i = dt.params.e2() * i_unit::<R>();
    let mb = weyl_relation(&dt.bp, lambda, tol);
    let ma = weyl_relation_a(&dt.bp, lambda, tol);
    // Graph form of the pair: {(ιh − iE₂k, ιᴴk) : (h, k) ∈ M_A}.
    let (h, k) = (ma.xs(), ma.ys());
    let stacked = crate::linalg::vstack(&[&(iota * &h - &e2i * &k), &(iota.adjoint() * &k)]);
    let pair_rel = LinearRelation::from_graph(crate::linalg::Subspace::span(&stacked, tol), dt.params.g0())?;
    let pair_angle = pair_rel.compare(&mb, tol).max_angle;
    let closed = ma
        .inverse()
        .map_codomain(iota, tol)?
        .op_diff(&LinearRelation::operator(&e2i, tol), tol)?
        .inverse()
        .map_codomain(&iota.adjoint(), tol)?;
    let closed_angle = closed.compare(&mb, tol).max_angle;
    let (phi, psi) = match weyl_operator(&ma, tol) {
        Ok(m) => (Some(iota - &e2i * &m), Some(iota.adjoint() * m)),
        Err(_) => (None, None),
    };
    Ok(RepresentingSample { lambda, phi, psi, pair_angle, closed_angle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::DualPair;
    use crate::generate::{e_related_pair, pontryagin_operator, random_isometry, rng};
    use crate::linalg::zeros;
    use crate::scalar::c;
    use crate::weyl::default_grid;

    fn t() -> Tol<f64> {
        Tol::default()
    }

    fn fixture(seed: u64, g0: usize, g1: usize) -> DTriple<f64> {
        let mut r = rng(seed);
        let (space, a) = pontryagin_operator::<f64>(&mut r, 3, 1, 1, true, &t()).unwrap();
        let pair = DualPair::symmetric(space, a, &t()).unwrap();
        let params = DbtParams::new(random_isometry(&mut r, g0, g1), &t()).unwrap();
        let bp = e_related_pair(&mut r, pair, params.iota(), &t()).unwrap();
        dbt_build(bp, params, &t()).unwrap()
    }

    #[test]
    fn projections_are_complementary() {
        let p = DbtParams::<f64>::new(random_isometry(&mut rng(1), 4, 2), &t()).unwrap();
        assert!(p.projection_residual() < 1e-12);
        let bad = CMatrix::from_element(2, 1, c(1.0, 0.0));
        assert!(matches!(DbtParams::new(bad, &t()), Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn full_subspace_gives_identity_map() {
        let p = DbtParams::<f64>::standard(3, 3).unwrap();
        assert!(max_abs(&p.e2()) < 1e-15);
        assert!(max_abs(&(p.e() - identity::<f64>(6))) < 1e-15);
    }

    #[test]
    fn trivial_subspace_gives_multiplication_by_i() {
        let p = DbtParams::<f64>::standard(2, 0).unwrap();
        assert!(max_abs(&(p.e() - identity::<f64>(2) * c(0.0, 1.0))) < 1e-15);
        assert_eq!(p.e1(), zeros(2, 2));
    }

    #[test]
    fn pontryagin_fixtures() {
        for (g0, g1, bt) in [(1, 1, true), (2, 1, false)] {
            let dt = fixture(2 + g0 as u64, g0, g1);
            assert_eq!(dt.is_bt, bt);
            assert!(dt.angle < 1e-7);
            for z in default_grid(&dt.bp, &t()) {
                let s = dbt_representing_pair(&dt, z, &t()).unwrap();
                assert!(s.pair_angle < 1e-7 && s.closed_angle < 1e-7, "{g0} {g1} {z}");
                if g0 == g1 {
                    let mb = weyl_operator(&weyl_relation(&dt.bp, z, &t()), &t()).unwrap();
                    let ma = weyl_operator(&weyl_relation_a(&dt.bp, z, &t()), &t()).unwrap();
                    let iota = dt.params.iota();
                    let expected = iota * mb * iota;
                    assert!(max_abs(&(&ma - expected)) < 1e-8);
                    assert!(max_abs(&(s.phi.unwrap() - dt.params.iota())) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mismatched_pairs_are_rejected() {
        let dt = fixture(7, 2, 1);
        let other = DbtParams::new(random_isometry(&mut rng(8), 2, 1), &t()).unwrap();
        assert!(matches!(dbt_build(dt.bp.clone(), other, &t()), Err(Error::NotDTriple(_))));
        let wrong = DbtParams::standard(3, 1).unwrap();
        assert!(matches!(dbt_build(dt.bp, wrong, &t()), Err(Error::DimensionMismatch { .. })));
    }
}
