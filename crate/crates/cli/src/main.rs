//! `krein`: generate boundary-triple instances and verify their identities.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage,
//! parse or construction errors.

mod gen;
mod instance;
mod report;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use krein_core::transforms::lp::lp_analysis;
use krein_core::weyl::{default_grid, gamma_field, weyl_operator, weyl_relation};
use krein_core::Tol;
use num_complex::Complex;
use serde_json::{json, Value};

use crate::gen::Kind;
use crate::instance::{matrix_to_json, Instance, InstanceFile, RelationJson, TolOverride};
use crate::verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "krein", version, about = "Boundary triples for dual pairs in Krein spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct TolArgs {
    /// Relative singular-value cutoff for ranks.
    #[arg(long = "tol-rank", global = true)]
    rank: Option<f64>,
    /// Absolute tolerance for matrix residuals.
    #[arg(long = "tol-res", global = true)]
    residual: Option<f64>,
    /// Largest principal angle at which subspaces count as equal.
    #[arg(long = "tol-angle", global = true)]
    angle: Option<f64>,
}

impl TolArgs {
    fn overrides(self) -> TolOverride {
        TolOverride { rank: self.rank, residual: self.residual, angle: self.angle }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded instance file.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Check the identities of a suite on one or more instance files.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(short = 'i', long = "input", required = true)]
        inputs: Vec<PathBuf>,
        /// Comma-separated complex points, e.g. "0+1i,2-0.5i".
        #[arg(long)]
        grid: Option<String>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Weyl family and γ-field at one point.
    Weyl {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Rungs of the boundary-pair ladder and, in Pontryagin spaces, the
    /// (P)/(L) classes of `A`.
    Classify {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Compare two instances up to unitary equivalence.
    Equiv {
        #[arg(short = 'i', long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<Complex<f64>> {
    let s = s.trim();
    let fixed = match s {
        "i" | "+i" => "1i".to_string(),
        "-i" => "-1i".to_string(),
        _ => s.replace("+i", "+1i").replace("-i", "-1i"),
    };
    fixed.parse::<Complex<f64>>().map_err(|e| anyhow::anyhow!("bad complex number {s:?}: {e}"))
}

fn parse_grid(s: &str) -> Result<Vec<Complex<f64>>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_point).collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    emit(out, &text)
}

fn load(path: &Path, tol: &TolOverride) -> Result<Instance> {
    InstanceFile::read(path)?.load(tol).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    let overrides = cli.tol.overrides();
    match cli.command {
        Command::Gen { kind, dim, seed, out } => {
            let tol = overrides.apply(Tol::default().into())?;
            let file = gen::generate(kind, dim, seed, &tol)?;
            emit(out.as_deref(), &file.to_json())?;
            Ok(true)
        }
        Command::Verify { suite, inputs, grid, out } => {
            let grid = grid.as_deref().map(parse_grid).transpose()?;
            let instances = inputs.iter().map(|p| load(p, &overrides)).collect::<Result<Vec<_>>>()?;
            let names = inputs.iter().map(|p| p.display().to_string()).collect();
            let report = verify::verify(suite, &instances, names, grid.as_deref());
            emit_json(out.as_deref(), &serde_json::to_value(&report)?)?;
            Ok(report.pass)
        }
        Command::Weyl { input, lambda, out } => {
            let inst = load(&input, &overrides)?;
            let z = parse_point(&lambda)?;
            let t = &inst.tol;
            let m = weyl_relation(&inst.bp, z, t);
            let gamma = gamma_field(&inst.bp, z, t);
            let defect = inst.bp.pair().b_adjoint(t).eigenspace(z, t)?;
            emit_json(
                out.as_deref(),
                &json!({
                    "lambda": [z.re, z.im],
                    "M": RelationJson::from_relation(&m),
                    "M_matrix": weyl_operator(&m, t).ok().as_ref().map(matrix_to_json),
                    "M_mul_dim": m.mul(t).dim(),
                    "gamma": RelationJson::from_relation(&gamma),
                    "defect_dim": defect.dim(),
                }),
            )?;
            Ok(true)
        }
        Command::Classify { input, out } => {
            let inst = load(&input, &overrides)?;
            let t = &inst.tol;
            let space = inst.bp.space();
            let (p, q) = space.signature();
            let mut v = json!({
                "kind": inst.file.kind,
                "signature": [p, q],
                "g0": inst.bp.g0(),
                "g1": inst.bp.g1(),
            });
            match inst.bp.check_ibp(t) {
                Ok(()) => {
                    let f = inst.bp.classify(t)?;
                    for (k, b) in [
                        ("ibp", f.ibp),
                        ("ubp", f.ubp),
                        ("bt", f.bt),
                        ("ab_gen", f.ab_gen),
                        ("q_bt", f.q_bt),
                        ("es_gen", f.es_gen),
                        ("s_gen", f.s_gen),
                        ("b_gen", f.b_gen),
                    ] {
                        v[k] = json!(b);
                    }
                }
                Err(e) => {
                    v["ibp"] = json!(false);
                    v["note"] = json!(e.to_string());
                }
            }
            let a = inst.bp.pair().a();
            if q > 0 && a.mul(t).is_zero() {
                let lp = lp_analysis(a, space, t)?;
                v["lp"] = json!({
                    "kappa": lp.kappa,
                    "in_p": lp.in_p,
                    "in_l": lp.in_l,
                    "in_lp": lp.in_lp,
                    "halfplane_bound": lp.halfplane_bound,
                    "simple": lp.simple,
                });
            }
            emit_json(out.as_deref(), &v)?;
            Ok(true)
        }
        Command::Equiv { inputs, grid, out } => {
            if inputs.len() != 2 {
                bail!("equiv needs exactly two inputs");
            }
            let a = load(&inputs[0], &overrides)?;
            let b = load(&inputs[1], &overrides)?;
            let grid = match grid.as_deref() {
                Some(g) => parse_grid(g)?,
                None => default_grid(&a.bp, &a.tol),
            };
            emit_json(out.as_deref(), &verify::compare_json(&a.bp, &b.bp, &grid, &a.tol)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_points() {
        assert_eq!(parse_point("0+1i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_point("i").unwrap(), Complex::new(0.0, 1.0));
        assert_eq!(parse_point("2-i").unwrap(), Complex::new(2.0, -1.0));
        assert_eq!(parse_point("-1.5").unwrap(), Complex::new(-1.5, 0.0));
        assert_eq!(parse_grid("1+2i, -3i").unwrap(), vec![Complex::new(1.0, 2.0), Complex::new(0.0, -3.0)]);
        assert!(parse_point("x").is_err());
    }
}
