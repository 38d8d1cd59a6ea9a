//! Seeded random instances: symmetric operators, dual pairs, boundary
//! triples built from a dual pair, contractions, Pontryagin-space operators
//! and the pushes of triples through invertible maps.

use nalgebra::ComplexField;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::boundary::{y_matrix, BoundaryPair, DualPair};
use crate::error::{Error, Result};
use crate::krein::{GraphSpace, KreinSpace};
use crate::linalg::{
    block2, block_diag, hermitian_eigen, identity, invert, solve_least_squares, spectral_norm,
    vstack, zeros, CMatrix, Subspace, Tol,
};
use crate::relation::LinearRelation;
use crate::scalar::{c, i_unit, Scalar};
use crate::transforms::dbt::{dbt_build, DTriple, DbtParams};
use crate::transforms::flt::FltParams;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex Gaussian entries with unit variance.
pub fn gaussian<R: Scalar>(rng: &mut SeededRng, rows: usize, cols: usize) -> CMatrix<R> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re * s, im * s)
    })
}

pub fn random_complex<R: Scalar>(rng: &mut SeededRng) -> Complex<R> {
    gaussian::<R>(rng, 1, 1)[(0, 0)]
}

pub fn random_hermitian<R: Scalar>(rng: &mut SeededRng, n: usize) -> CMatrix<R> {
    let g = gaussian::<R>(rng, n, n);
    (&g + g.adjoint()).scale(R::lit(0.5))
}

/// Haar-distributed unitary, from the QR factorization of a Gaussian matrix
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Scalar>(rng: &mut SeededRng, n: usize) -> CMatrix<R> {
    if n == 0 {
        return zeros(0, 0);
    }
    let qr = gaussian::<R>(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let m = d.modulus();
        if m > R::zero() {
            let phase = d / Complex::new(m, R::zero());
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    q
}

/// Uniformly random `k`-dimensional subspace of `ℂⁿ`.
pub fn random_subspace<R: Scalar>(rng: &mut SeededRng, n: usize, k: usize, tol: &Tol<R>) -> Subspace<R> {
    Subspace::span(&gaussian::<R>(rng, n, k), tol)
}

/// Orthonormal basis of `sup ⊖ sub`, a complement of `sub` inside `sup`.
pub fn complement_in<R: Scalar>(sup: &Subspace<R>, sub: &Subspace<R>, tol: &Tol<R>) -> CMatrix<R> {
    sup.intersect(&sub.orth_complement(tol), tol).expect("same ambient space").basis().clone()
}

/// A `J`-selfadjoint matrix `J·K` with `K` Hermitian.
pub fn j_selfadjoint<R: Scalar>(rng: &mut SeededRng, space: &KreinSpace<R>) -> CMatrix<R> {
    space.j() * random_hermitian::<R>(rng, space.dim())
}

/// A standard unitary of a Krein space: the Cayley transform
/// `(K − i)(K + i)⁻¹` of a random `J`-selfadjoint `K`.
pub fn j_unitary<R: Scalar>(rng: &mut SeededRng, space: &KreinSpace<R>, tol: &Tol<R>) -> Result<CMatrix<R>> {
    let k = j_selfadjoint(rng, space);
    let shift = identity::<R>(space.dim()) * c(0.0, 1.0);
    Ok((&k - &shift) * invert(&(&k + &shift), tol, "K + i")?)
}

/// A `J`-selfadjoint matrix restricted to a random subspace of codimension
/// `defect`: a symmetric operator with defect numbers `(defect, defect)`.
pub fn symmetric_operator<R: Scalar>(
    rng: &mut SeededRng,
    space: &KreinSpace<R>,
    defect: usize,
    tol: &Tol<R>,
) -> Result<LinearRelation<R>> {
    let n = space.dim();
    if defect > n {
        return Err(Error::DimOutOfRange(defect));
    }
    let h = j_selfadjoint(rng, space);
    let dom = random_subspace(rng, n, n - defect, tol);
    LinearRelation::operator_on(&h, &dom, tol)
}

/// `(M^c|S_A, M|S_B)` for a random matrix `M` and random subspaces of the
/// given codimensions.
pub fn dual_pair_operators<R: Scalar>(
    rng: &mut SeededRng,
    space: &KreinSpace<R>,
    codim_a: usize,
    codim_b: usize,
    tol: &Tol<R>,
) -> Result<DualPair<R>> {
    let n = space.dim();
    if codim_a > n || codim_b > n {
        return Err(Error::DimOutOfRange(codim_a.max(codim_b)));
    }
    let m = gaussian::<R>(rng, n, n);
    let mc = space.j() * m.adjoint() * space.j();
    let a = LinearRelation::operator_on(&mc, &random_subspace(rng, n, n - codim_a, tol), tol)?;
    let b = LinearRelation::operator_on(&m, &random_subspace(rng, n, n - codim_b, tol), tol)?;
    DualPair::new(space.clone(), a, b, tol)
}

/// A dual pair of genuine relations: `B` a random subspace of `H × H`
/// (optionally with a multivalued part) and `A` a random subspace of `B^c`.
pub fn dual_pair_relations<R: Scalar>(
    rng: &mut SeededRng,
    space: &KreinSpace<R>,
    dim_a: usize,
    dim_b: usize,
    mul_b: usize,
    tol: &Tol<R>,
) -> Result<DualPair<R>> {
    let n = space.dim();
    if dim_b > n || mul_b > dim_b || dim_a + dim_b > 2 * n {
        return Err(Error::DimOutOfRange(dim_a.max(dim_b)));
    }
    let regular = gaussian::<R>(rng, 2 * n, dim_b - mul_b);
    let multi = vstack(&[&zeros(n, mul_b), &gaussian::<R>(rng, n, mul_b)]);
    let b = LinearRelation::from_stacked(&crate::linalg::hstack(&[&regular, &multi]), n, tol);
    let bc = b.adjoint_in(space, tol)?;
    let coeffs = gaussian::<R>(rng, bc.dim(), dim_a.min(bc.dim()));
    let a = LinearRelation::from_stacked(&(bc.graph().basis() * coeffs), n, tol);
    DualPair::new(space.clone(), a, b, tol)
}

/// Defect `d = dim B^c − dim A` of a dual pair: the dimension of the
/// boundary space of any boundary triple for it.
pub fn boundary_dim<R: Scalar>(pair: &DualPair<R>, tol: &Tol<R>) -> usize {
    pair.b_adjoint(tol).dim() - pair.a().dim()
}

/// `T` with `Tᴴ a T = b` for Hermitian `a`, `b` of equal inertia; `T` is
/// randomized by unitaries acting inside the positive and negative parts.
fn congruence<R: Scalar>(
    rng: &mut SeededRng,
    a: &CMatrix<R>,
    b: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<CMatrix<R>> {
    let d = a.nrows();
    let factor = |m: &CMatrix<R>| -> Result<(CMatrix<R>, usize)> {
        let (vals, vecs) = hermitian_eigen(m);
        let smax = vals.iter().fold(R::zero(), |x, v| x.max(v.abs()));
        if vals.iter().any(|v| v.abs() <= tol.rank_rtol * smax.max(R::one())) {
            return Err(Error::SingularForm);
        }
        // Rows of F ordered positive eigenvalues first: m = Fᴴ S F.
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&x, &y| vals[y].partial_cmp(&vals[x]).unwrap_or(std::cmp::Ordering::Equal));
        let pos = vals.iter().filter(|&&v| v > R::zero()).count();
        let f = CMatrix::from_fn(d, d, |r, col| {
            vecs[(col, order[r])].conj() * Complex::new(vals[order[r]].abs().sqrt(), R::zero())
        });
        Ok((f, pos))
    };
    let (fa, pa) = factor(a)?;
    let (fb, pb) = factor(b)?;
    if pa != pb {
        return Err(Error::Unsupported("forms of different inertia"));
    }
    let hs = block_diag(&[&haar_unitary::<R>(rng, pa), &haar_unitary::<R>(rng, d - pa)]);
    Ok(invert(&fa, tol, "congruence factor")? * hs * fb)
}

/// Assembles `Γ^B`, `Γ^A` from their values `R` on a complement `X` of `A`
/// in `B^c` and `H` on a complement `Z` of `B` in `A^c`; `Γ^B(A) = 0`,
/// `Γ^A(B) = 0`. Optionally adds a multivalued part to `Γ^B`.
fn assemble_pair<R: Scalar>(
    pair: DualPair<R>,
    g0: usize,
    g1: usize,
    x: &CMatrix<R>,
    rb: &CMatrix<R>,
    z: &CMatrix<R>,
    ha: &CMatrix<R>,
    mul_b: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let n2 = 2 * pair.dim();
    let g = g0 + g1;
    let a_basis = pair.a().graph().basis().clone();
    let b_basis = pair.b().graph().basis().clone();
    let top_b = crate::linalg::hstack(&[x, &a_basis, &zeros(n2, mul_b.ncols())]);
    let bot_b = crate::linalg::hstack(&[rb, &zeros(g, a_basis.ncols()), mul_b]);
    let gamma_b = LinearRelation::from_stacked(&vstack(&[&top_b, &bot_b]), n2, tol);
    let top_a = crate::linalg::hstack(&[z, &b_basis]);
    let bot_a = crate::linalg::hstack(&[ha, &zeros(g, b_basis.ncols())]);
    let gamma_a = LinearRelation::from_stacked(&vstack(&[&top_a, &bot_a]), n2, tol);
    BoundaryPair::new(pair, g0, g1, gamma_b, gamma_a, tol)
}

/// Complement bases `X` (of `A` in `B^c`) and `Z` (of `B` in `A^c`) and the
/// pairing `W = Zᴴ J_Γ X`.
fn complements<R: Scalar>(
    pair: &DualPair<R>,
    tol: &Tol<R>,
) -> (CMatrix<R>, CMatrix<R>, CMatrix<R>) {
    let hg = GraphSpace::new(pair.space());
    let x = complement_in(pair.b_adjoint(tol).graph(), pair.a().graph(), tol);
    let z = complement_in(pair.a_adjoint(tol).graph(), pair.b().graph(), tol);
    let w = z.adjoint() * hg.j() * &x;
    (x, z, w)
}

/// A boundary triple for a dual pair with `dim G₀ = g0`; the remaining
/// boundary dimension goes to `G₁`.
pub fn boundary_triple<R: Scalar>(
    rng: &mut SeededRng,
    pair: DualPair<R>,
    g0: usize,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let (x, z, w) = complements(&pair, tol);
    let d = x.ncols();
    if z.ncols() != d {
        return Err(Error::RankDeficientSpan { expected: d, found: z.ncols() });
    }
    if g0 > d {
        return Err(Error::DimOutOfRange(g0));
    }
    let g1 = d - g0;
    let y = y_matrix::<R>(g0, g1);
    let rb = gaussian::<R>(rng, d, d) + identity::<R>(d) * c(1.5, 0.0);
    // Green: Hᴴ Yᴴ R = W.
    let rinv = invert(&rb, tol, "boundary values")?;
    let ha = y.adjoint() * rinv.adjoint() * w.adjoint();
    assemble_pair(pair, g0, g1, &x, &rb, &z, &ha, &zeros(d, 0), tol)
}

/// An isometric boundary pair with `G = G₀ ⊕ G₁` larger than the defect.
/// With `range_in_g0` the values of `Γ^B` lie in `G₀ × {0}`; `mul_dim`
/// adds a multivalued part to `Γ^B` compatible with the Green identity.
pub fn isometric_pair<R: Scalar>(
    rng: &mut SeededRng,
    pair: DualPair<R>,
    g0: usize,
    g1: usize,
    range_in_g0: bool,
    mul_dim: usize,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let (x, z, w) = complements(&pair, tol);
    let d = x.ncols();
    let g = g0 + g1;
    if g < d || (range_in_g0 && g0 < d) {
        return Err(Error::DimOutOfRange(g));
    }
    let rb = if range_in_g0 {
        vstack(&[&gaussian::<R>(rng, g0, d), &zeros(g1, d)])
    } else {
        gaussian::<R>(rng, g, d)
    };
    let y = y_matrix::<R>(g0, g1);
    let yr = y.adjoint() * &rb;
    // Minimal-norm solution of Hᴴ (Yᴴ R) = W.
    let ha = solve_least_squares(&yr.adjoint(), &w.adjoint(), tol);
    let ran_a = Subspace::span(&(&y * &ha), tol);
    let free = ran_a.orth_complement(tol);
    let k = mul_dim.min(free.dim());
    let mul_b = free.basis() * gaussian::<R>(rng, free.dim(), k);
    assemble_pair(pair, g0, g1, &x, &rb, &z, &ha, &mul_b, tol)
}

/// The map `E(l₀, l₁) = (E₁l₀, iE₂l₀ + l₁) : G₀ ⊕ G₁ → G₁ ⊕ G₀` for the
/// embedding `ι : G₁ → G₀` (an isometry, `g0 × g1`).
pub fn e_matrix<R: Scalar>(iota: &CMatrix<R>) -> CMatrix<R> {
    let (g0, g1) = iota.shape();
    let e2 = identity::<R>(g0) - iota * iota.adjoint();
    block2(&iota.adjoint(), &zeros(g1, g1), &(e2 * i_unit::<R>()), iota)
}

/// A pair for `(A, A)` with `Γ^A = EΓ^B`. The boundary relation is built so
/// that `⟨Γ^B x̂, YEΓ^B ŷ⟩ = [x̂, ŷ]_Γ`; it is a boundary triple exactly
/// when `G₁ = G₀`, and otherwise an isometric pair with `ran Γ^B ⊊ G`.
pub fn e_related_pair<R: Scalar>(
    rng: &mut SeededRng,
    pair: DualPair<R>,
    iota: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    if !pair.a().approx_eq(pair.b(), tol) {
        return Err(Error::Unsupported("E-related pairs need A = B"));
    }
    let (g0, g1) = iota.shape();
    let e = e_matrix(iota);
    let q = y_matrix::<R>(g0, g1) * &e;
    let hg = GraphSpace::new(pair.space());
    let x = complement_in(pair.b_adjoint(tol).graph(), pair.a().graph(), tol);
    let d = x.ncols();
    let w = x.adjoint() * hg.j() * &x;
    let g = g0 + g1;
    if d > 2 * g1 || d > g {
        return Err(Error::DimOutOfRange(d));
    }
    let mut attempt = 0;
    let rb = loop {
        attempt += 1;
        let f = if d == g { identity::<R>(g) } else { gaussian::<R>(rng, g, d) };
        match congruence(rng, &(f.adjoint() * &q * &f), &w, tol) {
            Ok(t) => break f * t,
            Err(_) if attempt < 64 && d < g => continue,
            Err(err) => return Err(err),
        }
    };
    let ha = &e * &rb;
    assemble_pair(pair, g0, g1, &x, &rb, &x, &ha, &zeros(g, 0), tol)
}

/// An ordinary triple for `(A, A)`: `G₀ = G₁` and `Γ^A = Γ^B` as matrices.
pub fn ordinary_triple<R: Scalar>(
    rng: &mut SeededRng,
    pair: DualPair<R>,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let d = boundary_dim(&pair, tol);
    if d % 2 != 0 {
        return Err(Error::Unsupported("odd boundary dimension"));
    }
    e_related_pair(rng, pair, &identity::<R>(d / 2), tol)
}

/// First `g1` columns of a Haar unitary on `ℂ^g0`.
pub fn random_isometry<R: Scalar>(rng: &mut SeededRng, g0: usize, g1: usize) -> CMatrix<R> {
    haar_unitary::<R>(rng, g0).columns(0, g1).into_owned()
}

/// A random relation `θ` in `G₀ × G₁`: an operator graph or, with
/// probability ½, a generic subspace of random dimension.
pub fn random_theta<R: Scalar>(rng: &mut SeededRng, g0: usize, g1: usize, tol: &Tol<R>) -> LinearRelation<R> {
    if rng.random_bool(0.5) {
        LinearRelation::operator(&gaussian::<R>(rng, g1, g0), tol)
    } else {
        let k = rng.random_range(0..=g0 + g1);
        LinearRelation::from_stacked(&gaussian::<R>(rng, g0 + g1, k), g0, tol)
    }
}

/// A contraction `T` with `ran(T* − T)` inside a random `k`-dimensional `N`.
pub fn qsc_contraction<R: Scalar>(
    rng: &mut SeededRng,
    n: usize,
    k: usize,
    tol: &Tol<R>,
) -> (CMatrix<R>, Subspace<R>) {
    let nsp = random_subspace(rng, n, k, tol);
    let p = nsp.projector();
    let im = &p * random_hermitian::<R>(rng, n) * &p;
    let t = random_hermitian::<R>(rng, n) + im * i_unit::<R>();
    let norm = spectral_norm(&t);
    let scale = if norm > R::zero() { R::lit(0.9) / norm } else { R::one() };
    (t.scale(scale), nsp)
}

/// A `π`-symmetric operator in `Π_κ = (ℂⁿ, diag(I, −I_κ))`. The domain has
/// codimension `defect`; with `negative_in_domain` it contains the negative
/// eigenspace of `J`, otherwise it is chosen uniformly.
pub fn pontryagin_operator<R: Scalar>(
    rng: &mut SeededRng,
    n: usize,
    kappa: usize,
    defect: usize,
    negative_in_domain: bool,
    tol: &Tol<R>,
) -> Result<(KreinSpace<R>, LinearRelation<R>)> {
    if kappa > n || defect > n || (negative_in_domain && kappa + defect > n) {
        return Err(Error::DimOutOfRange(n));
    }
    let space = KreinSpace::diagonal(n - kappa, kappa);
    let h = j_selfadjoint(rng, &space);
    let dom = if negative_in_domain {
        let neg = vstack(&[&zeros(n - kappa, kappa), &identity::<R>(kappa)]);
        let extra = vstack(&[&gaussian::<R>(rng, n - kappa, n - defect - kappa), &zeros(kappa, n - defect - kappa)]);
        Subspace::span(&crate::linalg::hstack(&[&neg, &extra]), tol)
    } else {
        random_subspace(rng, n, n - defect, tol)
    };
    let a = LinearRelation::operator_on(&h, &dom, tol)?;
    Ok((space, a))
}

/// The image of a triple under `U : H → H′` where `H′` carries `j_prime`:
/// `A′ = Ũ(A)`, `B′ = Ũ₂₂(B)`, `Γ^{B′} = Γ^B Ũ⁻¹`, `Γ^{A′} = Γ^A Ũ₂₂⁻¹` with
/// `U₂₂ = (U^c)⁻¹` and `U^c = J Uᴴ J′`.
pub fn push<R: Scalar>(
    bp: &BoundaryPair<R>,
    u: &CMatrix<R>,
    j_prime: &CMatrix<R>,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let space = KreinSpace::new(j_prime.clone(), tol)?;
    let uc = bp.space().j() * u.adjoint() * j_prime;
    let u22 = invert(&uc, tol, "U^c")?;
    let tilde = |m: &CMatrix<R>| block_diag(&[m, m]);
    let a = bp.pair().a().map_domain(u, tol)?.map_codomain(u, tol)?;
    let b = bp.pair().b().map_domain(&u22, tol)?.map_codomain(&u22, tol)?;
    let pair = DualPair::new(space, a, b, tol)?;
    let gamma_b = bp.gamma_b().map_domain(&tilde(u), tol)?;
    let gamma_a = bp.gamma_a().map_domain(&tilde(&u22), tol)?;
    BoundaryPair::new(pair, bp.g0(), bp.g1(), gamma_b, gamma_a, tol)
}

/// `A = diag(1, 2)` restricted to `span{(1, 1)}` in `ℂ²`.
pub fn f1_operator<R: Scalar>(tol: &Tol<R>) -> LinearRelation<R> {
    let d = CMatrix::from_fn(2, 2, |r, k| if r == k { c(r as f64 + 1.0, 0.0) } else { c(0.0, 0.0) });
    let dom = Subspace::span(&CMatrix::from_element(2, 1, c(1.0, 0.0)), tol);
    LinearRelation::operator_on(&d, &dom, tol).expect("matching dimensions")
}

/// `Γ^B`, `Γ^A` both read off a rectangular matrix acting on a basis; used
/// by tests that need a deliberately broken Green identity.
pub fn perturb_gamma_b<R: Scalar>(
    rng: &mut SeededRng,
    bp: &BoundaryPair<R>,
    size: f64,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    let g = bp.g_dim();
    let p = identity::<R>(g) + gaussian::<R>(rng, g, g).scale(R::lit(size));
    let gamma_b = bp.gamma_b().map_codomain(&p, tol)?;
    BoundaryPair::assemble(bp.pair().clone(), bp.g0(), bp.g1(), gamma_b, bp.gamma_a().clone())
}

/// Kinds of pairs produced by [`random_boundary_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Boundary triple for a dual pair of operators in a Hilbert space.
    HilbertTriple,
    /// Boundary triple for a dual pair of operators in a Krein space.
    KreinTriple,
    /// Boundary triple for a dual pair of relations with multivalued parts.
    RelationTriple,
    /// Isometric pair with boundary space larger than the defect and a
    /// multivalued `Γ^B`.
    Isometric,
    /// Ordinary triple for a symmetric operator in a Hilbert space.
    Ordinary,
}

pub const PAIR_KINDS: [PairKind; 5] = [
    PairKind::HilbertTriple,
    PairKind::KreinTriple,
    PairKind::RelationTriple,
    PairKind::Isometric,
    PairKind::Ordinary,
];

/// A random pair of the given kind on `ℂⁿ`, `n ≥ 2`.
pub fn random_boundary_pair<R: Scalar>(
    rng: &mut SeededRng,
    kind: PairKind,
    n: usize,
    tol: &Tol<R>,
) -> Result<BoundaryPair<R>> {
    if n < 2 {
        return Err(Error::DimOutOfRange(n));
    }
    let krein = |rng: &mut SeededRng| {
        let q = rng.random_range(1..n);
        KreinSpace::<R>::diagonal(n - q, q)
    };
    match kind {
        PairKind::HilbertTriple | PairKind::KreinTriple => {
            let space = if kind == PairKind::KreinTriple { krein(rng) } else { KreinSpace::hilbert(n) };
            let ca = rng.random_range(1..=n.min(3));
            let cb = rng.random_range(0..=n.min(3));
            let pair = dual_pair_operators(rng, &space, ca, cb, tol)?;
            let d = boundary_dim(&pair, tol);
            let g0 = rng.random_range(0..=d);
            boundary_triple(rng, pair, g0, tol)
        }
        PairKind::RelationTriple => {
            let space = if rng.random_bool(0.5) { krein(rng) } else { KreinSpace::hilbert(n) };
            let dim_b = rng.random_range(1..=n);
            let mul_b = rng.random_range(0..=dim_b.min(2));
            let dim_a = rng.random_range(0..=(2 * n - dim_b).min(n));
            let pair = dual_pair_relations(rng, &space, dim_a, dim_b, mul_b, tol)?;
            let d = boundary_dim(&pair, tol);
            let g0 = rng.random_range(0..=d);
            boundary_triple(rng, pair, g0, tol)
        }
        PairKind::Isometric => {
            let space = if rng.random_bool(0.5) { krein(rng) } else { KreinSpace::hilbert(n) };
            let cb = rng.random_range(0..=1);
            let pair = dual_pair_operators(rng, &space, 1, cb, tol)?;
            let d = boundary_dim(&pair, tol);
            let extra = rng.random_range(1..=2);
            let g0 = rng.random_range(0..=d + extra);
            let mul = rng.random_range(0..=1);
            isometric_pair(rng, pair, g0, d + extra - g0, false, mul, tol)
        }
        PairKind::Ordinary => {
            let defect = rng.random_range(1..=n / 2);
            let a = symmetric_operator(rng, &KreinSpace::hilbert(n), defect, tol)?;
            let pair = DualPair::symmetric(KreinSpace::hilbert(n), a, tol)?;
            ordinary_triple(rng, pair, tol)
        }
    }
}

/// `U₁ diag(s) U₂` with singular values in `[½, 2]`.
pub fn well_conditioned<R: Scalar>(rng: &mut SeededRng, m: usize) -> CMatrix<R> {
    let s = CMatrix::from_fn(m, m, |r, k| if r == k { c::<R>(rng.random_range(0.5..2.0), 0.0) } else { c(0.0, 0.0) });
    haar_unitary::<R>(rng, m) * s * haar_unitary::<R>(rng, m)
}

/// Random `(K, B, C)` on `ℂ^m` with `Im B` of rank `im_rank`.
pub fn flt_params<R: Scalar>(rng: &mut SeededRng, m: usize, im_rank: usize, tol: &Tol<R>) -> Result<FltParams<R>> {
    if im_rank > m {
        return Err(Error::DimOutOfRange(im_rank));
    }
    let g = gaussian::<R>(rng, m, im_rank);
    let signs = CMatrix::from_fn(im_rank, im_rank, |r, k| {
        let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        if r == k { c::<R>(s, 0.0) } else { c(0.0, 0.0) }
    });
    let im_b = &g * signs * g.adjoint();
    let b = random_hermitian::<R>(rng, m) + im_b * i_unit::<R>();
    let cc = gaussian::<R>(rng, m, m);
    FltParams::new(well_conditioned(rng, m), b, cc, tol)
}

/// Primed parameters for which `V = W′⁻¹W` is a standard unitary: `C′ − C`
/// is Hermitian and vanishes on `K⁻¹ ran Im B` (zero when `keep_c`), and
/// `Im B′ = (K′K⁻¹) Im B (K′K⁻¹)ᴴ`.
pub fn compatible_flt_params<R: Scalar>(
    rng: &mut SeededRng,
    p: &FltParams<R>,
    keep_c: bool,
    tol: &Tol<R>,
) -> Result<FltParams<R>> {
    let m = p.dim();
    let k2 = well_conditioned::<R>(rng, m);
    let ki = invert(&p.k, tol, "K")?;
    let t = &k2 * &ki;
    let im_b = (&p.b - p.b.adjoint()) * c::<R>(0.0, -0.5);
    let b2 = random_hermitian::<R>(rng, m) + &t * &im_b * t.adjoint() * i_unit::<R>();
    let c2 = if keep_c {
        p.c.clone()
    } else {
        let fixed = Subspace::span(&(&ki * &im_b), tol);
        let q = identity::<R>(m) - fixed.projector();
        &p.c + &q * random_hermitian::<R>(rng, m) * &q
    };
    FltParams::new(k2, b2, c2, tol)
}

/// A `D`-triple for a symmetric operator with defect `δ ≤ n/2` in a random
/// Hilbert or Krein space, `G₁` of dimension `δ` or `δ + 1` inside `G₀`.
pub fn dbt_fixture<R: Scalar>(rng: &mut SeededRng, n: usize, tol: &Tol<R>) -> Result<DTriple<R>> {
    if n < 2 {
        return Err(Error::DimOutOfRange(n));
    }
    let q = rng.random_range(0..n);
    let space = KreinSpace::<R>::diagonal(n - q, q);
    let defect = rng.random_range(1..=n / 2);
    let a = symmetric_operator(rng, &space, defect, tol)?;
    let pair = DualPair::symmetric(space, a, tol)?;
    let g1 = defect + rng.random_range(0..=1);
    let g0 = g1 + rng.random_range(0..=2);
    let params = DbtParams::new(random_isometry(rng, g0, g1), tol)?;
    let bp = e_related_pair(rng, pair, params.iota(), tol)?;
    dbt_build(bp, params, tol)
}
