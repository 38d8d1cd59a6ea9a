use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use krein_core::{CMatrix, LinearRelation, Tol};
use num_complex::Complex;
use serde_json::{json, Value};
use tempfile::TempDir;

const KINDS: [&str; 6] = ["symmetric", "dualpair", "qsc", "flt", "dbt", "pontryagin"];

fn krein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krein")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

fn gen(dir: &TempDir, kind: &str, dim: usize, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{dim}-{seed}.json"));
    let o = krein(&["gen", kind, "--dim", &dim.to_string(), "--seed", &seed.to_string(), "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "gen {kind} {dim} {seed}: {}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn cells(v: &Value) -> Vec<Vec<Complex<f64>>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|c| Complex::new(c[0].as_f64().unwrap(), c[1].as_f64().unwrap()))
                .collect()
        })
        .collect()
}

fn relation_json(r: &LinearRelation<f64>) -> Value {
    let b = r.graph().basis();
    let rows: Vec<Vec<[f64; 2]>> =
        (0..b.nrows()).map(|i| (0..b.ncols()).map(|k| [b[(i, k)].re, b[(i, k)].im]).collect()).collect();
    json!({"dom_dim": r.dom_dim(), "codom_dim": r.codom_dim(), "basis": rows})
}

/// The zero operator on `{0}` in `ℂ` with `Γ₀ = f′`, `Γ₁ = −f + a f′`.
/// Its Weyl function is `−1/λ + a` and `A₀` is the zero operator on `ℂ`.
fn zero_operator_triple(dir: &TempDir, a: f64) -> PathBuf {
    zero_operator_file(dir, a, a)
}

/// As above with `Γ^A` built from `a_prime`; the Green identity fails unless
/// `a = a_prime`.
fn zero_operator_file(dir: &TempDir, a: f64, a_prime: f64) -> PathBuf {
    let t = Tol::default();
    let c = |x: f64| Complex::new(x, 0.0);
    let map = |a: f64| LinearRelation::operator(&CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(a)]), &t);
    let (gamma, gamma_a) = (map(a), map(a_prime));
    let zero = LinearRelation::operator_on(&CMatrix::zeros(1, 1), &krein_core::Subspace::zero(1), &t).unwrap();
    let file = json!({
        "kind": "symmetric",
        "seed": 0,
        "space": {"dim": 1, "J": [[[1.0, 0.0]]]},
        "relations": {"A": relation_json(&zero), "B": relation_json(&zero)},
        "boundary": {"g0": 1, "g1": 1, "GammaB": relation_json(&gamma), "GammaA": relation_json(&gamma_a)},
        "tol": {"rank": t.rank_rtol, "residual": t.residual_atol, "angle": t.angle_atol},
    });
    let path = dir.path().join(format!("zero-{a}-{a_prime}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    path
}

#[test]
fn every_kind_generates_and_verifies() {
    let dir = TempDir::new().unwrap();
    for kind in KINDS {
        for dim in [1, 2, 3, 5] {
            let path = gen(&dir, kind, dim, 11);
            let o = krein(&["verify", "all", "-i", s(&path)]);
            let report = json_of(&o);
            assert_eq!(code(&o), 0, "{kind} {dim}: {report:#}");
            assert_eq!(report["pass"], true);
        }
    }
}

#[test]
fn generation_and_reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    for kind in KINDS {
        let a = std::fs::read(gen(&dir, kind, 4, 5)).unwrap();
        let p = dir.path().join("again.json");
        krein(&["gen", kind, "--dim", "4", "--seed", "5", "-o", s(&p)]);
        assert_eq!(a, std::fs::read(&p).unwrap(), "{kind}");
        let r1 = krein(&["verify", "all", "-i", s(&p)]).stdout;
        let r2 = krein(&["verify", "all", "-i", s(&p)]).stdout;
        assert_eq!(r1, r2, "{kind}");
        let other = krein(&["gen", kind, "--dim", "4", "--seed", "6"]).stdout;
        assert_ne!(a, other, "{kind}: seeds 5 and 6 agree");
    }
}

#[test]
fn files_survive_a_round_trip() {
    let dir = TempDir::new().unwrap();
    let t = Tol::<f64>::default();
    for kind in KINDS {
        let path = gen(&dir, kind, 4, 2);
        let text = std::fs::read_to_string(&path).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v, "{kind}");
        for key in ["GammaB", "GammaA"] {
            let r = &v["boundary"][key];
            let basis = cells(&r["basis"]);
            let m = CMatrix::from_fn(basis.len(), basis[0].len(), |i, k| basis[i][k]);
            let gram = m.adjoint() * &m;
            let err = (gram - CMatrix::identity(m.ncols(), m.ncols())).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < t.residual_atol, "{kind} {key}: basis not orthonormal ({err:e})");
        }
    }
}

#[test]
fn symmetric_instance_has_equal_defect_numbers() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "symmetric", 2, 7);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // A symmetric operator in ℂⁿ has both defect numbers equal to n − dim A.
    let dim_a = v["relations"]["A"]["basis"][0].as_array().map_or(0, Vec::len);
    let expected = 2 - dim_a;
    assert_eq!(expected, 1);
    for lambda in ["i", "-i"] {
        let o = json_of(&krein(&["weyl", "-i", s(&path), "--lambda", lambda]));
        assert_eq!(o["defect_dim"], expected, "λ = {lambda}");
    }
    let o = krein(&["verify", "green", "-i", s(&path)]);
    assert_eq!(code(&o), 0);
    assert!(json_of(&o)["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn qsc_instance_satisfies_green() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "qsc", 4, 1);
    let o = krein(&["verify", "green", "-i", s(&path)]);
    let report = json_of(&o);
    assert_eq!(code(&o), 0, "{report:#}");
    assert!(report["max_residual"].as_f64().unwrap() < 1e-8);
    let c = json_of(&krein(&["classify", "-i", s(&path)]));
    assert_eq!(c["ibp"], true);
}

#[test]
fn dbt_instance_lives_in_a_pontryagin_space() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "dbt", 3, 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let j = cells(&v["space"]["J"]);
    let mut neg = 0;
    for (r, row) in j.iter().enumerate() {
        for (k, z) in row.iter().enumerate() {
            if r != k {
                assert_eq!(z.norm(), 0.0, "J is diagonal");
            } else if z.re < 0.0 {
                neg += 1;
            }
        }
    }
    let c = json_of(&krein(&["classify", "-i", s(&path)]));
    assert_eq!(c["signature"], json!([3 - neg, neg]));
    assert_eq!(neg, 1);
    assert_eq!(c["lp"]["kappa"], 1);
}

#[test]
fn eigenvalue_of_a0_is_skipped_not_failed() {
    let dir = TempDir::new().unwrap();
    let path = zero_operator_triple(&dir, 0.0);
    let o = krein(&["verify", "resolvent", "-i", s(&path), "--grid", "0,2i"]);
    let report = json_of(&o);
    assert_eq!(code(&o), 0, "{report:#}");
    let checks = report["checks"].as_array().unwrap();
    let at_zero = |id: &str| {
        checks.iter().find(|c| c["identity"] == id && c["lambda"] == json!([0.0, 0.0])).unwrap()["status"].clone()
    };
    assert_eq!(at_zero("resolvent_formula"), "skipped");
    assert_eq!(at_zero("spectral_criteria"), "skipped");
    assert!(checks.iter().any(|c| c["identity"] == "resolvent_formula" && c["status"] == "pass"));
}

#[test]
fn weyl_function_of_the_zero_operator() {
    let dir = TempDir::new().unwrap();
    for a in [0.0, 0.5] {
        let path = zero_operator_triple(&dir, a);
        for (lambda, z) in [("i", Complex::new(0.0, 1.0)), ("2-1i", Complex::new(2.0, -1.0))] {
            let o = json_of(&krein(&["weyl", "-i", s(&path), "--lambda", lambda]));
            let m = cells(&o["M_matrix"])[0][0];
            let expected = -z.inv() + a;
            assert!((m - expected).norm() < 1e-10, "a = {a}, λ = {lambda}: {m} vs {expected}");
        }
    }
}

#[test]
fn ordinary_triples_climb_the_whole_ladder() {
    let dir = TempDir::new().unwrap();
    let paths = [zero_operator_triple(&dir, 0.0), gen(&dir, "symmetric", 4, 3)];
    for path in paths {
        let c = json_of(&krein(&["classify", "-i", s(&path)]));
        for flag in ["ibp", "ubp", "bt", "ab_gen", "q_bt", "es_gen", "s_gen", "b_gen"] {
            assert_eq!(c[flag], true, "{flag} on {}: {c:#}", path.display());
        }
    }
}

#[test]
fn pushed_pair_is_recognised() {
    let dir = TempDir::new().unwrap();
    let path = gen(&dir, "symmetric", 4, 9);
    let o = krein(&["verify", "equivalence", "-i", s(&path)]);
    let report = json_of(&o);
    assert_eq!(code(&o), 0, "{report:#}");
    let verdict = &report["details"]["verdict_0"];
    assert_eq!(verdict["verdict"], "unitarily_equivalent");
    assert!(verdict["U"].is_array());
}

#[test]
fn perturbed_pair_has_a_different_weyl_function() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (zero_operator_triple(&dir, 0.0), zero_operator_triple(&dir, 0.5));
    let same = json_of(&krein(&["equiv", "-i", s(&a), "-i", s(&a)]));
    assert_eq!(same["weyl_match"], true);
    let o = krein(&["equiv", "-i", s(&a), "-i", s(&b), "--grid", "i,1+2i,-1-1i"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o)["weyl_match"], false);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&krein(&["gen", "symmetric", "--dim", "17"])), 2);
    assert_eq!(code(&krein(&["gen", "nonsense"])), 2);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"kind\": 3}").unwrap();
    assert_eq!(code(&krein(&["verify", "green", "-i", s(&junk)])), 2);
    let path = gen(&dir, "symmetric", 2, 1);
    assert_eq!(code(&krein(&["weyl", "-i", s(&path), "--lambda", "x"])), 2);
}

#[test]
fn broken_green_identity_exits_with_one() {
    let dir = TempDir::new().unwrap();
    let path = zero_operator_file(&dir, 0.0, 0.5);
    let o = krein(&["verify", "green", "-i", s(&path)]);
    let report = json_of(&o);
    assert_eq!(code(&o), 1, "{report:#}");
    assert_eq!(report["pass"], false);
    let c = json_of(&krein(&["classify", "-i", s(&path)]));
    assert_eq!(c["ibp"], false);
}
