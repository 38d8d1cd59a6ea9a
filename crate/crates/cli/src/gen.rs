//! Seeded instance generators, one per instance kind.

use anyhow::{bail, Result};
use clap::ValueEnum;
use krein_core::boundary::{qsc_boundary_pair, DualPair};
use krein_core::generate::{self, rng, PairKind, SeededRng};
use krein_core::transforms::flt::flt_triple;
use krein_core::{KreinSpace, Tol};
use rand::Rng;

use crate::instance::{matrix_to_json, DbtJson, FltJson, InstanceFile, QscJson, RelationJson};

pub const MAX_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Ordinary triple for a symmetric operator in a Hilbert space.
    Symmetric,
    /// Boundary triple or isometric pair for a dual pair in a Krein space.
    Dualpair,
    /// Triple of a quasi-selfadjoint contraction.
    Qsc,
    /// Fractional linear transform of an ordinary triple.
    Flt,
    /// `D`-triple for a symmetric operator in a Pontryagin space.
    Dbt,
    /// Ordinary triple for a π-symmetric operator whose domain contains the
    /// negative eigenspace of `J`.
    Pontryagin,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Symmetric => "symmetric",
            Kind::Dualpair => "dualpair",
            Kind::Qsc => "qsc",
            Kind::Flt => "flt",
            Kind::Dbt => "dbt",
            Kind::Pontryagin => "pontryagin",
        }
    }
}

fn defect(r: &mut SeededRng, n: usize) -> usize {
    r.random_range(1..=(n / 2).max(1))
}

pub fn generate(kind: Kind, dim: usize, seed: u64, tol: &Tol<f64>) -> Result<InstanceFile> {
    if !(1..=MAX_DIM).contains(&dim) {
        bail!("dimension {dim} outside 1..={MAX_DIM}");
    }
    let mut r = rng(seed);
    let r = &mut r;
    let name = kind.name();
    let file = match kind {
        Kind::Symmetric => {
            let h = KreinSpace::hilbert(dim);
            let d = defect(r, dim);
            let a = generate::symmetric_operator(r, &h, d, tol)?;
            let bp = generate::ordinary_triple(r, DualPair::symmetric(h, a, tol)?, tol)?;
            InstanceFile::from_pair(name, seed, &bp, tol)
        }
        Kind::Dualpair => {
            let bp = if dim == 1 {
                let codim_b = r.random_range(0..=1);
                let pair = generate::dual_pair_operators(r, &KreinSpace::hilbert(1), 1, codim_b, tol)?;
                let g0 = r.random_range(0..=generate::boundary_dim(&pair, tol));
                generate::boundary_triple(r, pair, g0, tol)?
            } else {
                let kinds = [PairKind::KreinTriple, PairKind::RelationTriple, PairKind::Isometric];
                let pick = kinds[r.random_range(0..kinds.len())];
                generate::random_boundary_pair(r, pick, dim, tol)?
            };
            InstanceFile::from_pair(name, seed, &bp, tol)
        }
        Kind::Qsc => {
            let k = r.random_range(1..=dim);
            let (t, nsp) = generate::qsc_contraction::<f64>(r, dim, k, tol);
            let bp = qsc_boundary_pair(&t, &nsp, tol)?;
            let mut file = InstanceFile::from_pair(name, seed, &bp, tol);
            file.params.qsc = Some(QscJson { t: matrix_to_json(&t), n: matrix_to_json(nsp.basis()) });
            file
        }
        Kind::Flt => {
            let h = KreinSpace::hilbert(dim);
            let m = defect(r, dim);
            let a = generate::symmetric_operator(r, &h, m, tol)?;
            let obt = generate::ordinary_triple(r, DualPair::symmetric(h, a, tol)?, tol)?;
            let rank = r.random_range(0..=m);
            let p = generate::flt_params(r, m, rank, tol)?;
            let bp = flt_triple(&obt, &p, tol)?;
            let mut file = InstanceFile::from_pair(name, seed, &bp, tol);
            file.relations.insert("GammaDotB".into(), RelationJson::from_relation(obt.gamma_b()));
            file.relations.insert("GammaDotA".into(), RelationJson::from_relation(obt.gamma_a()));
            file.params.flt = Some(FltJson { k: matrix_to_json(&p.k), b: matrix_to_json(&p.b), c: matrix_to_json(&p.c) });
            file
        }
        Kind::Dbt => {
            let space = KreinSpace::diagonal(dim - 1, 1);
            let d = defect(r, dim);
            let a = generate::symmetric_operator(r, &space, d, tol)?;
            let pair = DualPair::symmetric(space, a, tol)?;
            let g1 = d + r.random_range(0..=1);
            let g0 = g1 + r.random_range(0..=2);
            let iota = generate::random_isometry::<f64>(r, g0, g1);
            let bp = generate::e_related_pair(r, pair, &iota, tol)?;
            let mut file = InstanceFile::from_pair(name, seed, &bp, tol);
            file.params.dbt = Some(DbtJson { iota: matrix_to_json(&iota) });
            file
        }
        Kind::Pontryagin => {
            let kappa = 1;
            let d = if dim > kappa { r.random_range(1..=((dim - kappa) / 2).max(1).min(dim - kappa)) } else { 0 };
            let (space, a) = generate::pontryagin_operator::<f64>(r, dim, kappa, d, true, tol)?;
            let bp = generate::ordinary_triple(r, DualPair::symmetric(space, a, tol)?, tol)?;
            InstanceFile::from_pair(name, seed, &bp, tol)
        }
    };
    Ok(file)
}
