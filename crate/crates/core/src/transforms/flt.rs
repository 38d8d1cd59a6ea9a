//! Boundary triples obtained from an ordinary triple `(L, Γ̇)` by the
//! fractional linear transformation
//!
//! ```text
//! W = ( K⁻¹B            −K⁻¹  )
//!     ( Kᴴ + CK⁻¹B      −CK⁻¹ )
//! ```
//!
//! with `Γ^B = WΓ̇`, `Γ^A = (Wᶜ)⁻¹Γ̇`, and the comparison of two such
//! triples through `V = W′⁻¹W`.

use num_complex::Complex;

use crate::boundary::BoundaryPair;
use crate::equivalence::is_st1;
use crate::error::{Error, Result};
use crate::krein::{GraphSpace, KreinSpace};
use crate::linalg::{
    block2, identity, im_part, invert, max_abs, re_part, spectral_norm, CMatrix, Subspace, Tol,
};
use crate::relation::LinearRelation;
use crate::scalar::Scalar;
use crate::weyl::{weyl_operator, weyl_relation};

/// `K : G₀ → L` bijective, `B` on `L`, `C` on `G₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct FltParams<R: Scalar> {
    pub k: CMatrix<R>,
    pub b: CMatrix<R>,
    pub c: CMatrix<R>,
}

impl<R: Scalar> FltParams<R> {
    pub fn new(k: CMatrix<R>, b: CMatrix<R>, c: CMatrix<R>, tol: &Tol<R>) -> Result<Self> {
        let m = k.nrows();
        for x in [&k, &b, &c] {
            if x.nrows() != m || x.ncols() != m {
                return Err(Error::DimensionMismatch { expected: m, found: x.ncols().max(x.nrows()) });
            }
        }
        invert(&k, tol, "K")?;
        Ok(Self { k, b, c })
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    fn k_inv(&self, tol: &Tol<R>) -> Result<CMatrix<R>> {
        invert(&self.k, tol, "K")
    }
}

/// The Krein space `L_Γ` (or `G = (G₀)_Γ`) with symmetry `((0, −i), (i, 0))`.
pub fn boundary_krein_space<R: Scalar>(m: usize) -> KreinSpace<R> {
    GraphSpace::new(&KreinSpace::hilbert(m)).space().clone()
}

pub fn build_w<R: Scalar>(p: &FltParams<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
    let ki = p.k_inv(tol)?;
    let kib = &ki * &p.b;
    Ok(block2(&kib, &(-&ki), &(p.k.adjoint() + &p.c * &kib), &(-(&p.c * &ki))))
}

/// `Wᶜ = J_L Wᴴ J_G`, the Krein adjoint of `W : L_Γ → G`.
pub fn w_adjoint<R: Scalar>(w: &CMatrix<R>) -> CMatrix<R> {
    let j = boundary_krein_space::<R>(w.nrows() / 2);
    j.j() * w.adjoint() * j.j()
}

/// The triple `Γ^B = WΓ̇`, `Γ^A = (Wᶜ)⁻¹Γ̇` for an ordinary triple `Γ̇`.
pub fn flt_triple<R: Scalar>(obt: &BoundaryPair<R>, p: &FltParams<R>, tol: &Tol<R>) -> Result<BoundaryPair<R>> {
    check_obt_dims(obt, p)?;
    let w = build_w(p, tol)?;
    let wc_inv = invert(&w_adjoint(&w), tol, "Wᶜ")?;
    let gb = obt.gamma_b().map_codomain(&w, tol)?;
    let ga = obt.gamma_b().map_codomain(&wc_inv, tol)?;
    BoundaryPair::new(obt.pair().clone(), p.dim(), p.dim(), gb, ga, tol)
}

fn check_obt_dims<R: Scalar>(obt: &BoundaryPair<R>, p: &FltParams<R>) -> Result<()> {
    if obt.g0() != p.dim() || obt.g1() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: obt.g0() });
    }
    Ok(())
}

/// `W(Ṁ)` together with the closed form `C + Kᴴ(B − Ṁ)⁻¹K` when `Ṁ` is an
/// operator and `B − Ṁ` is invertible.
#[derive(Clone, Debug)]
pub struct FltWeyl<R: Scalar> {
    pub image: LinearRelation<R>,
    pub closed: Option<CMatrix<R>>,
    /// Angle between `image` and the graph of `closed`.
    pub angle: Option<R>,
}

pub fn flt_weyl<R: Scalar>(p: &FltParams<R>, mdot: &LinearRelation<R>, tol: &Tol<R>) -> Result<FltWeyl<R>> {
    let m = p.dim();
    if mdot.dom_dim() != m || mdot.codom_dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: mdot.dom_dim() });
    }
    let w = build_w(p, tol)?;
    let image = LinearRelation::from_graph(mdot.graph().map(&w, tol)?, m)?;
    let closed = (image.mul(tol).dim() == 0)
        .then(|| weyl_operator(mdot, tol).ok())
        .flatten()
        .and_then(|md| invert(&(&p.b - md), tol, "B − Ṁ").ok())
        .map(|inv| &p.c + p.k.adjoint() * inv * &p.k);
    let angle = closed.as_ref().map(|cl| image.compare(&LinearRelation::operator(cl, tol), tol).max_angle);
    Ok(FltWeyl { image, closed, angle })
}

/// `V = W′⁻¹W` assembled block by block:
/// `V₂ = K′ᴴ⁻¹(C′ − C)K⁻¹`, `V₁ = (KK′⁻¹)ᴴ − V₂B`, second row
/// `(B′V₁ − K′K⁻¹B, K′K⁻¹ + B′V₂)`.
pub fn build_v<R: Scalar>(p: &FltParams<R>, q: &FltParams<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let ki = p.k_inv(tol)?;
    let kqi = q.k_inv(tol)?;
    let v2 = kqi.adjoint() * (&q.c - &p.c) * &ki;
    let v1 = (&p.k * &kqi).adjoint() - &v2 * &p.b;
    let t = &q.k * &ki;
    let v21 = &q.b * &v1 - &t * &p.b;
    let v22 = &t + &q.b * &v2;
    Ok(block2(&v1, &v2, &v21, &v22))
}

/// The three conditions characterising `V ∈ St₁(L_Γ, L′_Γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SysV {
    /// `Im(C′ − C) = 0`.
    pub im_c: bool,
    /// `ran Im B ⊆ K(ker(C′ − C))`.
    pub range: bool,
    /// `Im B′ = (K′K⁻¹)(Im B)(K′K⁻¹)ᴴ`.
    pub im_b: bool,
}

impl SysV {
    pub fn all(&self) -> bool {
        self.im_c && self.range && self.im_b
    }
}

fn small<R: Scalar>(m: &CMatrix<R>, scale: R, tol: &Tol<R>) -> bool {
    max_abs(m) <= tol.residual_atol * scale.max(R::one())
}

pub fn check_sys_v<R: Scalar>(p: &FltParams<R>, q: &FltParams<R>, tol: &Tol<R>) -> Result<SysV> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let dc = &q.c - &p.c;
    let scale = spectral_norm(&p.c).max(spectral_norm(&q.c));
    let im_c = small(&im_part(&dc), scale, tol);
    let kernel = Subspace::span(&dc.adjoint(), tol).orth_complement(tol);
    let target = Subspace::span(&(&p.k * kernel.basis()), tol);
    let range = Subspace::column_space(&im_part(&p.b), tol).is_subspace_of(&target, tol);
    let t = &q.k * p.k_inv(tol)?;
    let moved = &t * im_part(&p.b) * t.adjoint();
    let im_b = small(&(im_part(&q.b) - &moved), spectral_norm(&moved).max(spectral_norm(&q.b)), tol);
    Ok(SysV { im_c, range, im_b })
}

/// Both sides of the `V ∈ St₁ ⟺ sysV` characterisation on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VCheck {
    pub sys: SysV,
    pub st1: bool,
}

impl VCheck {
    pub fn agree(&self) -> bool {
        self.sys.all() == self.st1
    }
}

pub fn st1_equiv_check<R: Scalar>(p: &FltParams<R>, q: &FltParams<R>, tol: &Tol<R>) -> Result<VCheck> {
    let v = build_v(p, q, tol)?;
    let l = boundary_krein_space::<R>(p.dim());
    let st1 = is_st1(&v, &l, &l, tol)?;
    Ok(VCheck { sys: check_sys_v(p, q, tol)?, st1 })
}

/// `θ′ = B′ + K′[Re(C′ − C) + Kᴴ(θ − B)⁻¹K]⁻¹K′ᴴ` evaluated in relation
/// arithmetic.
pub fn theta_transform<R: Scalar>(
    p: &FltParams<R>,
    q: &FltParams<R>,
    theta: &LinearRelation<R>,
    tol: &Tol<R>,
) -> Result<LinearRelation<R>> {
    let m = p.dim();
    if theta.dom_dim() != m || theta.codom_dim() != m || q.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: theta.dom_dim() });
    }
    let op = |x: &CMatrix<R>| LinearRelation::operator(x, tol);
    let shifted = theta.op_diff(&op(&p.b), tol)?;
    let inner = op(&p.k).then(&shifted.inverse(), tol)?.then(&op(&p.k.adjoint()), tol)?;
    let bracket = inner.op_sum(&op(&re_part(&(&q.c - &p.c))), tol)?;
    let middle = op(&q.k.adjoint()).then(&bracket.inverse(), tol)?.then(&op(&q.k), tol)?;
    middle.op_sum(&op(&q.b), tol)
}

/// `V(θ)` for `θ ⊆ L_Γ`.
pub fn v_image<R: Scalar>(
    p: &FltParams<R>,
    q: &FltParams<R>,
    theta: &LinearRelation<R>,
    tol: &Tol<R>,
) -> Result<LinearRelation<R>> {
    let v = build_v(p, q, tol)?;
    LinearRelation::from_graph(theta.graph().map(&v, tol)?, p.dim())
}

/// `Γ̊ = RΓ̇` with `Γ̊₀ = K⁻¹(Γ̇₁ − (Re B)Γ̇₀)`, `Γ̊₁ = −KᴴΓ̇₀`.
pub fn ring_matrix<R: Scalar>(p: &FltParams<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
    let ki = p.k_inv(tol)?;
    let m = p.dim();
    Ok(block2(&(-(&ki * re_part(&p.b))), &ki, &(-p.k.adjoint()), &CMatrix::zeros(m, m)))
}

/// The ordinary triple `(L, Γ̊)` built from `Γ̇`.
pub fn ring_triple<R: Scalar>(obt: &BoundaryPair<R>, p: &FltParams<R>, tol: &Tol<R>) -> Result<BoundaryPair<R>> {
    check_obt_dims(obt, p)?;
    let r = ring_matrix(p, tol)?;
    let g = obt.gamma_b().map_codomain(&r, tol)?;
    BoundaryPair::new(obt.pair().clone(), p.dim(), p.dim(), g.clone(), g, tol)
}

#[derive(Clone, Debug)]
pub struct RingSample<R: Scalar> {
    pub lambda: Complex<R>,
    /// `M_Γ̊(λ) = Γ̊(λI)`.
    pub constructed: LinearRelation<R>,
    /// `Kᴴ(Re B − Ṁ(λ))⁻¹K`, absent where the inverse does not exist.
    pub closed: Option<CMatrix<R>>,
    pub angle: Option<R>,
}

pub fn ring_triple_weyl<R: Scalar>(
    obt: &BoundaryPair<R>,
    p: &FltParams<R>,
    grid: &[Complex<R>],
    tol: &Tol<R>,
) -> Result<Vec<RingSample<R>>> {
    let ring = ring_triple(obt, p, tol)?;
    let mut out = Vec::with_capacity(grid.len());
    for &z in grid {
        let constructed = weyl_relation(&ring, z, tol);
        let closed = weyl_operator(&weyl_relation(obt, z, tol), tol)
            .ok()
            .and_then(|md| invert(&(re_part(&p.b) - md), tol, "Re B − Ṁ").ok())
            .map(|inv| p.k.adjoint() * inv * &p.k);
        let angle = closed
            .as_ref()
            .map(|cl| constructed.compare(&LinearRelation::operator(cl, tol), tol).max_angle);
        out.push(RingSample { lambda: z, constructed, closed, angle });
    }
    Ok(out)
}

/// `X(λ) = 2i(B − Ṁ)ᴴ⁻¹ Im Ṁ` and the residual of
/// `Bᴴ − Ṁ = (B − Ṁ)ᴴ(I − X)`.
#[derive(Clone, Debug)]
pub struct XLambda<R: Scalar> {
    pub x: CMatrix<R>,
    pub residual: R,
    pub bijective: bool,
}

pub fn x_lambda_identity<R: Scalar>(b: &CMatrix<R>, mdot: &CMatrix<R>, tol: &Tol<R>) -> Result<XLambda<R>> {
    let m = b.nrows();
    if mdot.shape() != (m, m) || b.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, found: mdot.nrows() });
    }
    let factor = (b - mdot).adjoint();
    let inv = invert(&factor, tol, "(B − Ṁ)ᴴ")?;
    let x = inv * im_part(mdot) * Complex::new(R::zero(), R::lit(2.0));
    let residual = max_abs(&(b.adjoint() - mdot - &factor * (identity::<R>(m) - &x)));
    let bijective = invert(&x, tol, "X").is_ok();
    Ok(XLambda { x, residual, bijective })
}

/// Largest entry of the difference of the two sides of
/// `C + Kᴴ(B − Ṁ)⁻¹K = C′ + K′ᴴ(B′ − Ṁ′)⁻¹K′`.
pub fn eq_h_residual<R: Scalar>(
    p: &FltParams<R>,
    mdot: &CMatrix<R>,
    q: &FltParams<R>,
    mdot2: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<R> {
    let lhs = &p.c + p.k.adjoint() * invert(&(&p.b - mdot), tol, "B − Ṁ")? * &p.k;
    let rhs = &q.c + q.k.adjoint() * invert(&(&q.b - mdot2), tol, "B′ − Ṁ′")? * &q.k;
    Ok(max_abs(&(lhs - rhs)))
}
