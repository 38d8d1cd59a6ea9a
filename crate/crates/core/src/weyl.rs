//! Weyl families, γ-fields and the identities relating them to the kernel
//! extension `A₀ = ker Γ^B_0`, together with the Krein-type resolvent formula
//! for the extensions `A_θ = (Γ^B)⁻¹(θ)`.
//!
//! Every identity is checked as an equality (or inclusion) of graphs.

use num_complex::Complex;

use crate::boundary::BoundaryPair;
use crate::error::{Error, Result};
use crate::krein::KreinSpace;
use crate::linalg::{hstack, identity, vstack, zeros, CMatrix, Subspace, Tol};
use crate::relation::{LinearRelation, SpectralClass};
use crate::scalar::{c, Scalar};

/// The Weyl family and γ-field of `Γ^B` at one point.
#[derive(Clone, Debug)]
pub struct WeylSample<R: Scalar> {
    pub lambda: Complex<R>,
    /// `M(λ) = Γ^B(λI)`, a relation `G₀ → G₁`.
    pub m: LinearRelation<R>,
    /// `γ(λ) = P(Γ^B_0|λI)⁻¹`, a relation `G₀ → H`.
    pub gamma: LinearRelation<R>,
    /// `Ker(B^c − λ)`.
    pub defect: Subspace<R>,
}

fn projection<R: Scalar>(rows: usize, skip: usize, total: usize) -> CMatrix<R> {
    hstack(&[&zeros(rows, skip), &identity(rows), &zeros(rows, total - skip - rows)])
}

fn scalar_graph<R: Scalar>(n: usize, lambda: Complex<R>, tol: &Tol<R>) -> Subspace<R> {
    LinearRelation::scalar(n, lambda, tol).graph().clone()
}

/// `M(λ) = Γ^B(λI)` read as a relation `G₀ → G₁`.
pub fn weyl_relation<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> LinearRelation<R> {
    let image = bp
        .gamma_b()
        .image(&scalar_graph(bp.dim(), lambda, tol), tol)
        .expect("λI lives in H_Γ");
    LinearRelation::from_graph(image, bp.g0()).expect("image lies in G")
}

/// `γ(λ) = {(l₀, x) : ((x, λx), l₀) ∈ Γ^B_0}`.
pub fn gamma_field<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> LinearRelation<R> {
    let n = bp.dim();
    let slice = bp
        .gamma_b0(tol)
        .restrict(&scalar_graph(n, lambda, tol), tol)
        .expect("λI lives in H_Γ");
    slice.map_domain(&projection(n, 0, 2 * n), tol).expect("P : H_Γ → H").inverse()
}

pub fn weyl_at<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> WeylSample<R> {
    let defect = bp.pair().b_adjoint(tol).eigenspace(lambda, tol).expect("square relation");
    WeylSample { lambda, m: weyl_relation(bp, lambda, tol), gamma: gamma_field(bp, lambda, tol), defect }
}

/// `M_{Γ^A}(λ) = Γ^A(λI)`, a relation `G₁ → G₀`.
pub fn weyl_relation_a<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> LinearRelation<R> {
    weyl_relation(&bp.swapped(), lambda, tol)
}

/// `γ_{Γ^A}(λ)`, a relation `G₁ → H`.
pub fn gamma_field_a<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> LinearRelation<R> {
    gamma_field(&bp.swapped(), lambda, tol)
}

/// `φ^B(λ) = {(y − λx, (x, y)) : (x, y) ∈ A₀}`, a relation `H → H_Γ`.
pub fn phi_b<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> LinearRelation<R> {
    let a0 = bp.a0(tol);
    let (x, y) = (a0.xs(), a0.ys());
    let shifted = &y - &x * lambda;
    LinearRelation::from_pairs(&shifted, &vstack(&[&x, &y]), tol).expect("finite graph basis")
}

/// `Γ^B_10 = {(x̂, l₁) : (x̂, (0, l₁)) ∈ Γ^B}`, a relation `H_Γ → G₁`.
pub fn gamma10<R: Scalar>(bp: &BoundaryPair<R>, tol: &Tol<R>) -> LinearRelation<R> {
    let (g0, g1) = (bp.g0(), bp.g1());
    let second = Subspace::zero(g0).product(&Subspace::full(g1));
    let slice = bp.gamma_b().inverse().restrict(&second, tol).expect("codomain G").inverse();
    slice.map_codomain(&projection(g1, g0, g0 + g1), tol).expect("P₁ : G → G₁")
}

/// Largest principal angle between the two sides of
/// `γ(λ) − γ(λ₀) = Pφ^B(λ)(λ − λ₀)γ(λ₀)`.
pub fn check_gamma_difference<R: Scalar>(
    bp: &BoundaryPair<R>,
    lambda: Complex<R>,
    lambda0: Complex<R>,
    tol: &Tol<R>,
) -> Result<R> {
    let n = bp.dim();
    let lhs = gamma_field(bp, lambda, tol).op_diff(&gamma_field(bp, lambda0, tol), tol)?;
    let rhs = gamma_field(bp, lambda0, tol)
        .scale(lambda - lambda0, tol)
        .then(&phi_b(bp, lambda, tol), tol)?
        .map_codomain(&projection(n, 0, 2 * n), tol)?;
    Ok(lhs.compare(&rhs, tol).max_angle)
}

/// Largest principal angle between the two sides of
/// `M(λ) − M(λ₀) = Γ^B_10 φ^B(λ)(λ − λ₀)γ(λ₀)`.
pub fn check_weyl_difference<R: Scalar>(
    bp: &BoundaryPair<R>,
    lambda: Complex<R>,
    lambda0: Complex<R>,
    tol: &Tol<R>,
) -> Result<R> {
    let lhs = weyl_relation(bp, lambda, tol).op_diff(&weyl_relation(bp, lambda0, tol), tol)?;
    let rhs = gamma_field(bp, lambda0, tol)
        .scale(lambda - lambda0, tol)
        .then(&phi_b(bp, lambda, tol), tol)?
        .then(&gamma10(bp, tol), tol)?;
    Ok(lhs.compare(&rhs, tol).max_angle)
}

/// Outcome of comparing `Γ^B_10 φ^B(λ)` with `γ_{Γ^A}(λ̄)^c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaAdjointReport<R> {
    pub contained: bool,
    pub containment_angle: R,
    pub equal: bool,
    /// `ran(A₀ − λ) = dom γ_{Γ^A}(λ̄)^c`.
    pub range_condition: bool,
    /// `mul M_{Γ^B}(λ) = mul M_{Γ^A}(λ̄)*`.
    pub mul_condition: bool,
}

impl<R> GammaAdjointReport<R> {
    /// Containment holds, and equality holds exactly when both conditions do.
    pub fn consistent(&self) -> bool {
        self.contained && self.equal == (self.range_condition && self.mul_condition)
    }
}

pub fn check_gamma_adjoint<R: Scalar>(
    bp: &BoundaryPair<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<GammaAdjointReport<R>> {
    let lhs = phi_b(bp, lambda, tol).then(&gamma10(bp, tol), tol)?;
    let gamma_a = gamma_field_a(bp, lambda.conj(), tol);
    let rhs = gamma_a.krein_adjoint(&KreinSpace::hilbert(bp.g1()), bp.space(), tol)?;
    let angle = lhs.containment_angle(&rhs);
    let ran_a0 = bp.a0(tol).shift(lambda, tol)?.ran(tol);
    let range_condition = ran_a0.approx_eq(&rhs.dom(tol), tol);
    let mul_b = weyl_relation(bp, lambda, tol).mul(tol);
    let mul_a_star = weyl_relation_a(bp, lambda.conj(), tol).adjoint(tol).mul(tol);
    Ok(GammaAdjointReport {
        contained: lhs.is_subset_of(&rhs, tol),
        containment_angle: angle,
        equal: lhs.approx_eq(&rhs, tol),
        range_condition,
        mul_condition: mul_b.approx_eq(&mul_a_star, tol),
    })
}

/// The two sides of the Krein-type resolvent formula.
#[derive(Clone, Debug)]
pub struct ResolventReport<R: Scalar> {
    /// `(A_θ − λ)⁻¹ − (A₀ − λ)⁻¹`.
    pub difference: LinearRelation<R>,
    /// `γ(λ)(θ − M(λ))⁻¹Γ^B_10 φ^B(λ)`.
    pub correction: LinearRelation<R>,
    /// Angle by which `difference ⊆ correction` fails.
    pub inclusion_angle: R,
    pub included: bool,
    /// `Ker(A₀ − λ) = Ker(ker Γ^B − λ)`, under which the inclusion is an equality.
    pub kernels_agree: bool,
    pub equal: bool,
    /// `λ ∈ σ_p(A₀)`.
    pub a0_eigenvalue: bool,
    /// `(A_θ − λ)⁻¹|ran(A₀ − λ)` and `(A₀ − λ)⁻¹ + correction`, with their
    /// comparison; only for `λ ∉ σ_p(A₀)`.
    pub restricted: Option<(LinearRelation<R>, LinearRelation<R>, R)>,
}

pub fn krein_resolvent<R: Scalar>(
    bp: &BoundaryPair<R>,
    theta: &LinearRelation<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<ResolventReport<R>> {
    let a_theta = bp.extension_from_theta(theta, tol)?;
    let a0 = bp.a0(tol);
    let res_theta = a_theta.shift(lambda, tol)?.inverse();
    let res_0 = a0.shift(lambda, tol)?.inverse();
    let difference = res_theta.op_diff(&res_0, tol)?;
    let m = weyl_relation(bp, lambda, tol);
    let correction = phi_b(bp, lambda, tol)
        .then(&gamma10(bp, tol), tol)?
        .then(&theta.op_diff(&m, tol)?.inverse(), tol)?
        .then(&gamma_field(bp, lambda, tol), tol)?;
    let kernels_agree = a0
        .eigenspace(lambda, tol)?
        .approx_eq(&bp.ker_gamma_b(tol).eigenspace(lambda, tol)?, tol);
    let a0_eigenvalue = !a0.eigenspace(lambda, tol)?.is_zero();
    let restricted = if a0_eigenvalue {
        None
    } else {
        let ran = a0.shift(lambda, tol)?.ran(tol);
        let lhs = res_theta.restrict(&ran, tol)?;
        let rhs = res_0.op_sum(&correction, tol)?;
        let angle = lhs.compare(&rhs, tol).max_angle;
        Some((lhs, rhs, angle))
    };
    Ok(ResolventReport {
        inclusion_angle: difference.containment_angle(&correction),
        included: difference.is_subset_of(&correction, tol),
        equal: difference.approx_eq(&correction, tol),
        kernels_agree,
        a0_eigenvalue,
        restricted,
        difference,
        correction,
    })
}

/// Eigenvalue and resolvent criteria for `A_θ` next to the ground truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EigenCriteria {
    /// `dom(θ ∩ M(λ)) ⊄ mul Γ^B_0`.
    pub in_sigma_p: bool,
    pub in_sigma_p_truth: bool,
    /// Only when `λ ∈ ρ(A₀)`: the criterion also requires
    /// `ran Γ^B_10 ⊆ ran(θ − M(λ))`.
    pub in_rho: Option<bool>,
    pub in_rho_truth: bool,
}

impl EigenCriteria {
    pub fn agree(&self) -> bool {
        self.in_sigma_p == self.in_sigma_p_truth && self.in_rho.is_none_or(|r| r == self.in_rho_truth)
    }
}

pub fn eigen_criteria<R: Scalar>(
    bp: &BoundaryPair<R>,
    theta: &LinearRelation<R>,
    lambda: Complex<R>,
    tol: &Tol<R>,
) -> Result<EigenCriteria> {
    let a0 = bp.a0(tol);
    let a0_class = a0.spectral_classify(lambda, tol)?;
    if a0_class.class == SpectralClass::Point {
        return Err(Error::PointSpectrum);
    }
    let m = weyl_relation(bp, lambda, tol);
    let meet = theta.intersect(&m, tol)?;
    let mul_b0 = bp.gamma_b0(tol).mul(tol);
    let not_eigen = meet.dom(tol).is_subspace_of(&mul_b0, tol);
    let in_rho = if a0_class.class == SpectralClass::Resolvent {
        let ran10 = gamma10(bp, tol).ran(tol);
        let ran_diff = theta.op_diff(&m, tol)?.ran(tol);
        Some(not_eigen && ran10.is_subspace_of(&ran_diff, tol))
    } else {
        None
    };
    let truth = bp.extension_from_theta(theta, tol)?.spectral_classify(lambda, tol)?;
    Ok(EigenCriteria {
        in_sigma_p: !not_eigen,
        in_sigma_p_truth: truth.class == SpectralClass::Point,
        in_rho,
        in_rho_truth: truth.class == SpectralClass::Resolvent,
    })
}

/// Largest principal angle between `M(λ)*` and `Γ^B_#(λ̄I)`, the latter read
/// as a relation `G₁ → G₀`.
pub fn weyl_adjoint_symmetry<R: Scalar>(bp: &BoundaryPair<R>, lambda: Complex<R>, tol: &Tol<R>) -> Result<R> {
    let lhs = weyl_relation(bp, lambda, tol).adjoint(tol);
    let image = bp.gamma_b_sharp(tol).image(&scalar_graph(bp.dim(), lambda.conj(), tol), tol)?;
    let rhs = LinearRelation::from_graph(image, bp.g1())?;
    Ok(lhs.compare(&rhs, tol).max_angle)
}

/// `(M_{Γ^B}(λ) − M_{Γ^A}(μ)*)/(λ − μ̄)`, which equals the Gram matrix
/// `γ_{Γ^A}(μ)ᴴ J γ_{Γ^B}(λ)` (`g1 × g0`). Both Weyl relations must be
/// everywhere defined operators.
pub fn gram_from_weyl<R: Scalar>(
    bp: &BoundaryPair<R>,
    lambda: Complex<R>,
    mu: Complex<R>,
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    let denom = lambda - mu.conj();
    if nalgebra::ComplexField::modulus(denom) <= tol.residual_atol {
        return Err(Error::ConjugatePoints);
    }
    let mb = weyl_operator(&weyl_relation(bp, lambda, tol), tol)?;
    let ma = weyl_operator(&weyl_relation_a(bp, mu, tol), tol)?;
    Ok((mb - ma.adjoint()) / denom)
}

/// `γ_{Γ^A}(μ)ᴴ J γ_{Γ^B}(λ)` computed directly from the γ-fields.
pub fn gram_direct<R: Scalar>(
    bp: &BoundaryPair<R>,
    lambda: Complex<R>,
    mu: Complex<R>,
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    let gb = weyl_operator(&gamma_field(bp, lambda, tol), tol)?;
    let ga = weyl_operator(&gamma_field_a(bp, mu, tol), tol)?;
    Ok(ga.adjoint() * bp.space().j() * gb)
}

/// The matrix of an everywhere defined single-valued relation.
pub fn weyl_operator<R: Scalar>(r: &LinearRelation<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
    if !r.mul(tol).is_zero() {
        return Err(Error::Multivalued);
    }
    if !r.dom(tol).is_full() {
        return Err(Error::DimensionMismatch { expected: r.dom_dim(), found: r.dom(tol).dim() });
    }
    if r.dom_dim() == 0 {
        return Ok(zeros(r.codom_dim(), 0));
    }
    r.as_matrix(tol)
}

/// Smallest singular value of `Y − λX` over an orthonormal graph basis
/// `[X; Y]`; zero exactly at eigenvalues.
pub fn eigen_distance<R: Scalar>(r: &LinearRelation<R>, lambda: Complex<R>) -> R {
    if r.dim() == 0 {
        return R::max_value().unwrap_or_else(R::one);
    }
    let m = r.ys() - r.xs() * lambda;
    let sv = crate::linalg::singular_values(&m);
    if sv.len() < m.ncols() {
        return R::zero();
    }
    sv.last().copied().unwrap_or_else(R::zero)
}

/// `{±i, ±2i, 1 ± i, −1 ± 2i}` without the points within `1e-6` of `σ_p(A₀)`.
pub fn default_grid<R: Scalar>(bp: &BoundaryPair<R>, tol: &Tol<R>) -> Vec<Complex<R>> {
    let a0 = bp.a0(tol);
    let pts = [(0.0, 1.0), (0.0, -1.0), (0.0, 2.0), (0.0, -2.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 2.0), (-1.0, -2.0)];
    pts.iter()
        .map(|&(a, b)| c::<R>(a, b))
        .filter(|&z| eigen_distance(&a0, z) > R::lit(1e-6))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::DualPair;
    use crate::generate::{self, rng};
    use crate::linalg::max_abs;

    fn t() -> Tol<f64> {
        Tol::default()
    }

    fn f1_triple(seed: u64) -> BoundaryPair<f64> {
        let pair = DualPair::symmetric(KreinSpace::hilbert(2), generate::f1_operator(&t()), &t()).unwrap();
        generate::ordinary_triple(&mut rng(seed), pair, &t()).unwrap()
    }

    #[test]
    fn weyl_of_f1_is_scalar_and_matches_brute_force() {
        let bp = f1_triple(1);
        let i = c::<f64>(0.0, 1.0);
        let s = weyl_at(&bp, i, &t());
        let m = weyl_operator(&s.m, &t()).unwrap();
        assert_eq!(m.shape(), (1, 1));
        // Boundary values of the defect vector read directly from Γ^B.
        let x = s.defect.basis().column(0).into_owned();
        let xhat = vstack(&[&CMatrix::from_column_slice(2, 1, x.as_slice()), &(CMatrix::from_column_slice(2, 1, x.as_slice()) * i)]);
        let vals = bp.gamma_b().restrict(&Subspace::span(&xhat, &t()), &t()).unwrap();
        let l = vals.ys();
        let direct = l[(1, 0)] / l[(0, 0)];
        assert!((direct - m[(0, 0)]).norm() < 1e-9);
    }

    #[test]
    fn zero_boundary_space_gives_empty_weyl() {
        let a = LinearRelation::operator(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)])), &t());
        let pair = DualPair::symmetric(KreinSpace::hilbert(2), a, &t()).unwrap();
        let bp = generate::boundary_triple(&mut rng(0), pair, 0, &t()).unwrap();
        let s = weyl_at(&bp, c(0.0, 1.0), &t());
        assert_eq!(s.m.dom_dim() + s.m.codom_dim(), 0);
        assert!(s.defect.is_zero());
        assert!(weyl_adjoint_symmetry(&bp, c(0.0, 1.0), &t()).unwrap() < 1e-12);
    }

    #[test]
    fn coincident_points() {
        let bp = f1_triple(2);
        let z = c(0.3, 1.2);
        assert!(check_gamma_difference(&bp, z, z, &t()).unwrap() < 1e-7);
        assert!(check_weyl_difference(&bp, z, z, &t()).unwrap() < 1e-7);
    }

    #[test]
    fn f1_differences() {
        let bp = f1_triple(3);
        let (i, two_i) = (c(0.0, 1.0), c(0.0, 2.0));
        assert!(check_gamma_difference(&bp, i, two_i, &t()).unwrap() < 1e-7);
        assert!(check_weyl_difference(&bp, i, -i, &t()).unwrap() < 1e-7);
    }

    #[test]
    fn phi_domain_is_shifted_range() {
        let mut r = rng(4);
        let pair = generate::dual_pair_operators(&mut r, &KreinSpace::hilbert(4), 1, 1, &t()).unwrap();
        let bp = generate::boundary_triple(&mut r, pair, 1, &t()).unwrap();
        let z = c(0.5, -0.7);
        let phi = phi_b(&bp, z, &t());
        let ran = bp.a0(&t()).shift(z, &t()).unwrap().ran(&t());
        assert!(phi.dom(&t()).approx_eq(&ran, &t()));
    }

    #[test]
    fn f1_gram_is_positive() {
        let bp = f1_triple(5);
        let i = c(0.0, 1.0);
        let g = gram_from_weyl(&bp, i, i, &t()).unwrap();
        assert!(g[(0, 0)].re > 0.0 && g[(0, 0)].im.abs() < 1e-9);
        let d = gram_direct(&bp, i, i, &t()).unwrap();
        assert!(max_abs(&(g - d)) < 1e-8);
        assert!(weyl_adjoint_symmetry(&bp, i, &t()).unwrap() < 1e-7);
    }

    #[test]
    fn conjugate_points_rejected() {
        let bp = f1_triple(6);
        let z = c(0.0, 1.0);
        assert_eq!(gram_from_weyl(&bp, z, z.conj(), &t()), Err(Error::ConjugatePoints));
    }
}
