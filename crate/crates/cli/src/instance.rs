//! The JSON instance file. Complex scalars are `[re, im]` pairs, matrices are
//! nested rows and relations store an orthonormal basis of their graph.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use krein_core::boundary::DualPair;
use krein_core::transforms::dbt::DbtParams;
use krein_core::transforms::flt::FltParams;
use krein_core::{BoundaryPair, CMatrix, KreinSpace, LinearRelation, Subspace, Tol};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix<f64>) -> MatrixJson {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        bail!("ragged matrix");
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |r, k| Complex::new(rows[r][k][0], rows[r][k][1])))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub dim: usize,
    #[serde(rename = "J")]
    pub j: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub dom_dim: usize,
    pub codom_dim: usize,
    /// Orthonormal basis of the graph, one column per basis vector.
    pub basis: MatrixJson,
}

impl RelationJson {
    pub fn from_relation(r: &LinearRelation<f64>) -> Self {
        Self { dom_dim: r.dom_dim(), codom_dim: r.codom_dim(), basis: matrix_to_json(r.graph().basis()) }
    }

    pub fn to_relation(&self, tol: &Tol<f64>) -> Result<LinearRelation<f64>> {
        let rows = self.dom_dim + self.codom_dim;
        let basis = if self.basis.is_empty() { CMatrix::zeros(rows, 0) } else { matrix_from_json(&self.basis)? };
        if basis.nrows() != rows {
            bail!("graph basis has {} rows, expected {rows}", basis.nrows());
        }
        Ok(LinearRelation::from_graph(Subspace::from_orthonormal(basis, tol)?, self.dom_dim)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryJson {
    pub g0: usize,
    pub g1: usize,
    #[serde(rename = "GammaB")]
    pub gamma_b: RelationJson,
    #[serde(rename = "GammaA")]
    pub gamma_a: RelationJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FltJson {
    #[serde(rename = "K")]
    pub k: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    #[serde(rename = "C")]
    pub c: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbtJson {
    /// Isometry embedding `G₁` into `G₀`.
    pub iota: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QscJson {
    #[serde(rename = "T")]
    pub t: MatrixJson,
    /// Orthonormal basis of the defect subspace `N`.
    #[serde(rename = "N")]
    pub n: MatrixJson,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flt: Option<FltJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dbt: Option<DbtJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qsc: Option<QscJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolJson {
    pub rank: f64,
    pub residual: f64,
    pub angle: f64,
}

impl From<Tol<f64>> for TolJson {
    fn from(t: Tol<f64>) -> Self {
        Self { rank: t.rank_rtol, residual: t.residual_atol, angle: t.angle_atol }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub kind: String,
    pub seed: u64,
    pub space: SpaceJson,
    /// `A` and `B` of the dual pair, plus any auxiliary relations.
    pub relations: BTreeMap<String, RelationJson>,
    pub boundary: BoundaryJson,
    #[serde(default)]
    pub params: ParamsJson,
    pub tol: TolJson,
}

/// An instance file with its objects rebuilt and validated.
#[derive(Clone, Debug)]
pub struct Instance {
    pub file: InstanceFile,
    pub tol: Tol<f64>,
    pub bp: BoundaryPair<f64>,
    pub flt: Option<FltParams<f64>>,
    pub dbt: Option<DbtParams<f64>>,
    pub qsc: Option<(CMatrix<f64>, Subspace<f64>)>,
    /// The ordinary triple an FLT instance was transformed from.
    pub base: Option<BoundaryPair<f64>>,
}

/// Overrides for the tolerances stored in a file.
#[derive(Clone, Copy, Debug, Default)]
pub struct TolOverride {
    pub rank: Option<f64>,
    pub residual: Option<f64>,
    pub angle: Option<f64>,
}

impl TolOverride {
    pub fn apply(&self, t: TolJson) -> Result<Tol<f64>> {
        Ok(Tol::new(
            self.rank.unwrap_or(t.rank),
            self.residual.unwrap_or(t.residual),
            self.angle.unwrap_or(t.angle),
        )?)
    }
}

impl InstanceFile {
    pub fn from_pair(kind: &str, seed: u64, bp: &BoundaryPair<f64>, tol: &Tol<f64>) -> Self {
        let mut relations = BTreeMap::new();
        relations.insert("A".to_string(), RelationJson::from_relation(bp.pair().a()));
        relations.insert("B".to_string(), RelationJson::from_relation(bp.pair().b()));
        Self {
            kind: kind.to_string(),
            seed,
            space: SpaceJson { dim: bp.dim(), j: matrix_to_json(bp.space().j()) },
            relations,
            boundary: BoundaryJson {
                g0: bp.g0(),
                g1: bp.g1(),
                gamma_b: RelationJson::from_relation(bp.gamma_b()),
                gamma_a: RelationJson::from_relation(bp.gamma_a()),
            },
            params: ParamsJson::default(),
            tol: (*tol).into(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn relation(&self, name: &str, tol: &Tol<f64>) -> Result<LinearRelation<f64>> {
        self.relations
            .get(name)
            .ok_or_else(|| anyhow!("missing relation {name}"))?
            .to_relation(tol)
            .with_context(|| format!("relation {name}"))
    }

    pub fn load(self, overrides: &TolOverride) -> Result<Instance> {
        let tol = overrides.apply(self.tol)?;
        let j = matrix_from_json(&self.space.j)?;
        if j.nrows() != self.space.dim {
            bail!("J has {} rows, space dim is {}", j.nrows(), self.space.dim);
        }
        let space = KreinSpace::new(j, &tol)?;
        let pair = DualPair::new(space, self.relation("A", &tol)?, self.relation("B", &tol)?, &tol)?;
        let gb = self.boundary.gamma_b.to_relation(&tol).context("GammaB")?;
        let ga = self.boundary.gamma_a.to_relation(&tol).context("GammaA")?;
        // Not validated here: a broken Green identity is a verification failure.
        let bp = BoundaryPair::assemble(pair.clone(), self.boundary.g0, self.boundary.g1, gb, ga)?;
        let flt = match &self.params.flt {
            Some(p) => Some(FltParams::new(
                matrix_from_json(&p.k)?,
                matrix_from_json(&p.b)?,
                matrix_from_json(&p.c)?,
                &tol,
            )?),
            None => None,
        };
        let dbt = match &self.params.dbt {
            Some(d) => Some(DbtParams::new(matrix_from_json(&d.iota)?, &tol)?),
            None => None,
        };
        let qsc = match &self.params.qsc {
            Some(q) => {
                let t = matrix_from_json(&q.t)?;
                let n = if q.n.is_empty() { CMatrix::zeros(t.nrows(), 0) } else { matrix_from_json(&q.n)? };
                Some((t, Subspace::from_orthonormal(n, &tol)?))
            }
            None => None,
        };
        let base = match (self.relations.get("GammaDotB"), self.relations.get("GammaDotA")) {
            (Some(b), Some(a)) => {
                let m = flt.as_ref().map_or(0, FltParams::dim);
                Some(BoundaryPair::new(pair, m, m, b.to_relation(&tol)?, a.to_relation(&tol)?, &tol)?)
            }
            _ => None,
        };
        Ok(Instance { file: self, tol, bp, flt, dbt, qsc, base })
    }
}
