//! The coupled triple: a boundary pair `(Γ^B, Γ^A)` for a dual pair `(A, B)`
//! in `H` seen as a single boundary relation `Γ : K → G_Γ` for
//! `T = diag(A, B)` in `Ĥ_Γ = H ⊕ H`.
//!
//! Vector layouts:
//! - split graph: `[x, x′, l₀, l₁ | y, y′, h₁, h₀]` (a graph vector of `Γ^B`
//!   followed by one of `Γ^A`);
//! - coupled graph: `[x, y, x′, y′, l₀, h₁, h₀, l₁]`, i.e. an element
//!   `((x, y), (x′, y′))` of `K` and `((l₀, h₁), (h₀, l₁))` of `G_Γ`.

use num_complex::Complex;

use crate::boundary::{relation_in, BoundaryPair, DualPair, Flavor};
use crate::error::Result;
use crate::krein::{make_k_space, GraphSpace, HatSpace, KreinSpace};
use crate::linalg::{block_diag, Subspace, Tol};
use crate::relation::LinearRelation;
use crate::scalar::Scalar;
use crate::weyl::{weyl_relation, weyl_relation_a};

/// Row orderings between the split and the coupled layouts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interleave {
    pub n: usize,
    pub g0: usize,
    pub g1: usize,
}

fn range(start: usize, len: usize) -> impl Iterator<Item = usize> {
    start..start + len
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (k, &old) in p.iter().enumerate() {
        inv[old] = k;
    }
    inv
}

impl Interleave {
    pub fn new(n: usize, g0: usize, g1: usize) -> Self {
        Self { n, g0, g1 }
    }

    fn g(&self) -> usize {
        self.g0 + self.g1
    }

    /// `[x, x′, y, y′] → [x, y, x′, y′]` (new row `k` is old row `p[k]`).
    pub fn pairs_to_k(&self) -> Vec<usize> {
        let n = self.n;
        range(0, n).chain(range(2 * n, n)).chain(range(n, n)).chain(range(3 * n, n)).collect()
    }

    /// `[l₀, l₁, h₁, h₀] → [l₀, h₁, h₀, l₁]`.
    pub fn values_to_g(&self) -> Vec<usize> {
        let (g0, g1, g) = (self.g0, self.g1, self.g());
        range(0, g0).chain(range(g, g1)).chain(range(g + g1, g0)).chain(range(g0, g1)).collect()
    }

    /// Split graph layout to coupled graph layout.
    pub fn split_to_coupled(&self) -> Vec<usize> {
        let (n, g) = (self.n, self.g());
        let s = 2 * n + g;
        // Regroup [x x′ l | y y′ h] into [x x′ y y′ | l h].
        let regroup: Vec<usize> =
            range(0, 2 * n).chain(range(s, 2 * n)).chain(range(2 * n, g)).chain(range(s + 2 * n, g)).collect();
        let inner: Vec<usize> = self
            .pairs_to_k()
            .into_iter()
            .chain(self.values_to_g().into_iter().map(|k| k + 4 * n))
            .collect();
        inner.iter().map(|&k| regroup[k]).collect()
    }

    pub fn coupled_to_split(&self) -> Vec<usize> {
        inverse_perm(&self.split_to_coupled())
    }
}

/// Diagonal block relation `diag(r₁, r₂)` on `ℂᵃ ⊕ ℂᵇ`:
/// `{((p, q), (p′, q′)) : (p, p′) ∈ r₁, (q, q′) ∈ r₂}`.
pub fn diagonal_block<R: Scalar>(r1: &LinearRelation<R>, r2: &LinearRelation<R>) -> LinearRelation<R> {
    r1.direct_sum(r2)
}

/// Antidiagonal block relation `(0 r₂; r₁ 0)` for `r₁ : ℂᵃ → ℂᵇ`,
/// `r₂ : ℂᵇ → ℂᵃ`: `{((p, q), (q′, p′)) : (p, p′) ∈ r₁, (q, q′) ∈ r₂}`.
pub fn antidiagonal_block<R: Scalar>(r1: &LinearRelation<R>, r2: &LinearRelation<R>) -> LinearRelation<R> {
    let (a, b) = (r1.dom_dim(), r1.codom_dim());
    let d = r1.direct_sum(r2);
    // direct_sum rows: [p, q, p′, q′]; wanted: [p, q, q′, p′].
    let perm: Vec<usize> =
        range(0, a + b).chain(range(a + b + b, a)).chain(range(a + b, b)).collect();
    LinearRelation::from_graph(d.graph().permute_rows(&perm), a + b).expect("square layout")
}

/// A boundary pair together with its coupled form.
#[derive(Clone, Debug)]
pub struct CoupledTriple<R: Scalar> {
    pub bp: BoundaryPair<R>,
    pub hat: HatSpace<R>,
    pub k_space: GraphSpace<R>,
    /// `G_Γ`, the graph space over the Hilbert space `G₀ ⊕ G₁`.
    pub g_space: GraphSpace<R>,
    /// `diag(A, B)` in `Ĥ_Γ`.
    pub t: LinearRelation<R>,
    /// `Γ : K → G_Γ`.
    pub gamma: LinearRelation<R>,
}

/// Assembles the coupled relation from a `Γ^B`-shaped and a `Γ^A`-shaped
/// relation.
pub fn assemble_coupled<R: Scalar>(
    gb: &LinearRelation<R>,
    ga: &LinearRelation<R>,
    n: usize,
    g0: usize,
    g1: usize,
) -> LinearRelation<R> {
    let split = Subspace::from_orthonormal_unchecked(block_diag(&[gb.graph().basis(), ga.graph().basis()]));
    let perm = Interleave::new(n, g0, g1).split_to_coupled();
    LinearRelation::from_graph(split.permute_rows(&perm), 4 * n).expect("coupled layout")
}

pub fn couple<R: Scalar>(bp: &BoundaryPair<R>, tol: &Tol<R>) -> Result<CoupledTriple<R>> {
    bp.check_ibp(tol)?;
    let n = bp.dim();
    let hat = HatSpace::new(bp.space());
    let k_space = make_k_space(&hat);
    let g_space = GraphSpace::new(&KreinSpace::hilbert(bp.g_dim()));
    let t = diagonal_block(bp.pair().a(), bp.pair().b());
    let gamma = assemble_coupled(bp.gamma_b(), bp.gamma_a(), n, bp.g0(), bp.g1());
    Ok(CoupledTriple { bp: bp.clone(), hat, k_space, g_space, t, gamma })
}

impl<R: Scalar> CoupledTriple<R> {
    fn layout(&self) -> Interleave {
        Interleave::new(self.bp.dim(), self.bp.g0(), self.bp.g1())
    }

    /// Slices the coupled graph back into `(Γ^B, Γ^A)`.
    pub fn decouple(&self, tol: &Tol<R>) -> Result<(LinearRelation<R>, LinearRelation<R>)> {
        let lay = self.layout();
        let (n, g) = (lay.n, lay.g0 + lay.g1);
        let split = self.gamma.graph().permute_rows(&lay.coupled_to_split());
        let s = 2 * n + g;
        let zero_a = Subspace::<R>::full(s).product(&Subspace::zero(s));
        let zero_b = Subspace::<R>::zero(s).product(&Subspace::full(s));
        let gb = split.intersect(&zero_a, tol)?.project_rows(0..s, tol);
        let ga = split.intersect(&zero_b, tol)?.project_rows(s..2 * s, tol);
        Ok((LinearRelation::from_graph(gb, 2 * n)?, LinearRelation::from_graph(ga, 2 * n)?))
    }

    /// `Γ^c` with respect to `K` and `G_Γ`.
    pub fn gamma_adjoint(&self, tol: &Tol<R>) -> Result<LinearRelation<R>> {
        self.gamma.krein_adjoint(self.k_space.space(), self.g_space.space(), tol)
    }

    /// `T^c` in `Ĥ_Γ`.
    pub fn t_adjoint(&self, tol: &Tol<R>) -> Result<LinearRelation<R>> {
        self.t.adjoint_in(self.hat.space(), tol)
    }

    /// `Γ₀ = {(k, (l₀, h₁))}`.
    pub fn gamma0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let g = self.bp.g_dim();
        let p = crate::linalg::hstack(&[&crate::linalg::identity::<R>(g), &crate::linalg::zeros(g, g)]);
        self.gamma.map_codomain(&p, tol).expect("codomain G_Γ")
    }

    /// `Γ₁ = {(k, (h₀, l₁))}`.
    pub fn gamma1(&self, tol: &Tol<R>) -> LinearRelation<R> {
        let g = self.bp.g_dim();
        let p = crate::linalg::hstack(&[&crate::linalg::zeros(g, g), &crate::linalg::identity::<R>(g)]);
        self.gamma.map_codomain(&p, tol).expect("codomain G_Γ")
    }

    /// `T₀ = ker Γ₀` in `Ĥ_Γ`.
    pub fn t0(&self, tol: &Tol<R>) -> LinearRelation<R> {
        relation_in(&self.gamma0(tol).ker(tol), 2 * self.bp.dim())
    }
}

/// Principal angles of the four block formulas for `dom`, `ker`, `ran`, `mul`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockReport<R> {
    pub dom: R,
    pub ker: R,
    pub ran: R,
    pub mul: R,
}

impl<R: Scalar> BlockReport<R> {
    pub fn max(&self) -> R {
        self.dom.max(self.ker).max(self.ran).max(self.mul)
    }
}

pub fn block_formulas<R: Scalar>(ct: &CoupledTriple<R>, tol: &Tol<R>) -> BlockReport<R> {
    let n = ct.bp.dim();
    let (gb, ga) = (ct.bp.gamma_b(), ct.bp.gamma_a());
    let g0 = ct.bp.g0();
    let as_h = |s: Subspace<R>| relation_in(&s, n);
    let as_g = |s: Subspace<R>, d: usize| LinearRelation::from_graph(s, d).expect("boundary layout");
    let dom = diagonal_block(&as_h(gb.dom(tol)), &as_h(ga.dom(tol)));
    let ker = diagonal_block(&as_h(gb.ker(tol)), &as_h(ga.ker(tol)));
    let ran = antidiagonal_block(&as_g(gb.ran(tol), g0), &as_g(ga.ran(tol), ct.bp.g1()));
    let mul = antidiagonal_block(&as_g(gb.mul(tol), g0), &as_g(ga.mul(tol), ct.bp.g1()));
    let big_dom = relation_in(&ct.gamma.dom(tol), 2 * n);
    let big_ker = relation_in(&ct.gamma.ker(tol), 2 * n);
    let g = ct.bp.g_dim();
    let big_ran = as_g(ct.gamma.ran(tol), g);
    let big_mul = as_g(ct.gamma.mul(tol), g);
    BlockReport {
        dom: big_dom.compare(&dom, tol).max_angle,
        ker: big_ker.compare(&ker, tol).max_angle,
        ran: big_ran.compare(&ran, tol).max_angle,
        mul: big_mul.compare(&mul, tol).max_angle,
    }
}

/// Angle between `(Γ^c)⁻¹` and the coupled relation built from
/// `(Γ^A_#, Γ^B_#)` in place of `(Γ^B, Γ^A)`.
pub fn sharp_shape_angle<R: Scalar>(ct: &CoupledTriple<R>, tol: &Tol<R>) -> Result<R> {
    let bp = &ct.bp;
    let lhs = ct.gamma_adjoint(tol)?.inverse();
    let rhs = assemble_coupled(&bp.gamma_a_sharp(tol), &bp.gamma_b_sharp(tol), bp.dim(), bp.g0(), bp.g1());
    Ok(lhs.compare(&rhs, tol).max_angle)
}

/// Weyl family of the coupled triple and its block structure.
#[derive(Clone, Debug)]
pub struct CoupledWeyl<R: Scalar> {
    /// `M_Γ(λ) = Γ(λI)`, a relation in `G₀ ⊕ G₁`.
    pub m: LinearRelation<R>,
    /// Angle to `(0 M_{Γ^A}(λ); M_{Γ^B}(λ) 0)`.
    pub block_angle: R,
    /// Angle between `M_{Γ^A}(λ)` and `M_{Γ^B}(λ̄)*`; only for unitary pairs.
    pub adjoint_link: Option<R>,
}

pub fn coupled_weyl<R: Scalar>(ct: &CoupledTriple<R>, lambda: Complex<R>, tol: &Tol<R>) -> Result<CoupledWeyl<R>> {
    let bp = &ct.bp;
    let n2 = 2 * bp.dim();
    let scalar = LinearRelation::scalar(n2, lambda, tol);
    let image = ct.gamma.image(scalar.graph(), tol)?;
    let m = LinearRelation::from_graph(image, bp.g_dim())?;
    let mb = weyl_relation(bp, lambda, tol);
    let ma = weyl_relation_a(bp, lambda, tol);
    let block = antidiagonal_block(&mb, &ma);
    let adjoint_link = if bp.is_unitary(tol) {
        let mb_bar = weyl_relation(bp, lambda.conj(), tol).adjoint(tol);
        Some(ma.compare(&mb_bar, tol).max_angle)
    } else {
        None
    };
    Ok(CoupledWeyl { block_angle: m.compare(&block, tol).max_angle, m, adjoint_link })
}

/// `Ker_{±i}(J_Γ̂ T^c)` computed from `T^c` and from
/// `{(a, ±ib) : (a, b) ∈ (JA^c)⁻¹ ∩ −JB^c}`.
#[derive(Clone, Debug)]
pub struct DefectFormula<R: Scalar> {
    pub plus_direct: Subspace<R>,
    pub plus_formula: Subspace<R>,
    pub minus_direct: Subspace<R>,
    pub minus_formula: Subspace<R>,
    pub max_angle: R,
}

impl<R: Scalar> DefectFormula<R> {
    pub fn dims_equal(&self) -> bool {
        self.plus_direct.dim() == self.minus_direct.dim()
            && self.plus_formula.dim() == self.minus_formula.dim()
            && self.plus_direct.dim() == self.plus_formula.dim()
    }
}

pub fn defect_formula<R: Scalar>(pair: &DualPair<R>, tol: &Tol<R>) -> Result<DefectFormula<R>> {
    let hat = HatSpace::new(pair.space());
    let t = diagonal_block(pair.a(), pair.b());
    let jt = t.adjoint_in(hat.space(), tol)?.map_codomain(hat.j(), tol)?;
    let i = Complex::new(R::zero(), R::one());
    let plus_direct = jt.eigenspace(i, tol)?;
    let minus_direct = jt.eigenspace(-i, tol)?;
    let j = pair.space().j();
    let ja_inv = pair.a_adjoint(tol).map_codomain(j, tol)?.inverse();
    let minus_j = -j;
    let neg_jb = pair.b_adjoint(tol).map_codomain(&minus_j, tol)?;
    let meet = ja_inv.intersect(&neg_jb, tol)?;
    let pair_up = |sign: Complex<R>| -> Subspace<R> {
        let (a, b) = (meet.xs(), meet.ys() * (i * sign));
        Subspace::span(&crate::linalg::vstack(&[&a, &b]), tol)
    };
    let one = Complex::new(R::one(), R::zero());
    let plus_formula = pair_up(one);
    let minus_formula = pair_up(-one);
    let max_angle = plus_direct
        .compare(&plus_formula, tol)
        .max_angle
        .max(minus_direct.compare(&minus_formula, tol).max_angle);
    Ok(DefectFormula { plus_direct, plus_formula, minus_direct, minus_formula, max_angle })
}

/// The ladder evaluated on the coupled side, next to the pair side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoupledLadder {
    pub coupled: Flavor,
    pub pair: Flavor,
}

impl CoupledLadder {
    pub fn agree(&self) -> bool {
        self.coupled == self.pair
    }
}

/// Classifies `(G, Γ)` as a boundary relation for `T^c`: isometric means
/// `Γ ⊆ (Γ^c)⁻¹` with `dom Γ = T^c`; unitary means equality; the kernel
/// extension is `T₀ = ker Γ₀`.
pub fn classify_coupled<R: Scalar>(ct: &CoupledTriple<R>, tol: &Tol<R>) -> Result<CoupledLadder> {
    let pair = ct.bp.classify(tol)?;
    let inv_adj = ct.gamma_adjoint(tol)?.inverse();
    let isometric = ct.gamma.is_subset_of(&inv_adj, tol);
    let dom = relation_in(&ct.gamma.dom(tol), 2 * ct.bp.dim());
    let ibp = isometric && dom.approx_eq(&ct.t_adjoint(tol)?, tol);
    let ubp = ibp && ct.gamma.approx_eq(&inv_adj, tol);
    let bt = ubp && ct.gamma.is_operator(tol) && ct.gamma.ran(tol).is_full();
    let t0 = ct.t0(tol);
    let t0_sa = t0.is_selfadjoint(ct.hat.space(), tol)?;
    let ran0 = ct.gamma0(tol).ran(tol).is_full();
    let ran1 = ct.gamma1(tol).ran(tol).is_full();
    let ab_gen = ibp && t0_sa && ran0;
    let q_bt = ab_gen && ran1;
    let es_gen = ubp && t0_sa;
    let s_gen = es_gen && t0_sa;
    let b_gen = s_gen && ran0;
    let coupled = Flavor { ibp, ubp, bt, ab_gen, q_bt, es_gen, s_gen, b_gen };
    Ok(CoupledLadder { coupled, pair })
}

/// `T` is neutral in the graph metric over `Ĥ_Γ` and symmetric both there
/// and in `H_Γ` (the base `H ⊕ H` carrying the metric of `H_Γ`).
pub fn t_symmetry<R: Scalar>(pair: &DualPair<R>, tol: &Tol<R>) -> Result<(bool, bool, bool)> {
    let hat = HatSpace::new(pair.space());
    let hg = GraphSpace::new(pair.space());
    let t = diagonal_block(pair.a(), pair.b());
    Ok((
        t.is_neutral(hat.space(), tol)?,
        t.is_symmetric(hat.space(), tol)?,
        t.is_symmetric(hg.space(), tol)?,
    ))
}
