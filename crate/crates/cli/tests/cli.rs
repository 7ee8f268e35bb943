use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eigencond"));
    cmd.env_remove("EIGENCOND_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn eigencond")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn lattice_first_seven() {
    let o = run(&["lattice", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[0], ["index", "a", "b", "re", "im", "modulus"]);
    assert_eq!(r.len(), 8);
    assert_eq!(r[1], ["0", "0", "0", "0", "0", "0"]);
    assert!(r[2..].iter().all(|row| row[5] == "1"));
}

#[test]
fn lattice_disk() {
    assert_eq!(rows(&run(&["lattice", "--r", "1"])).len(), 8);
    assert_eq!(rows(&run(&["lattice", "--r", "1", "--open"])).len(), 2);
    assert_eq!(run(&["lattice", "--r", "-1"]).status.code(), Some(1));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["lattice", "--n", "7", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["lattice"]).status.code(), Some(1));
    assert_eq!(run(&["asymptotics", "--p", "2", "--n-list", "10", "--generator", "file"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn duplicate_points_are_ill_posed() {
    let dir = scratch("dup");
    let path = dir.join("dup.csv");
    fs::write(&path, "re,im\n0,0\n1,0\n1,0\n").unwrap();
    let o = run(&["cond", "--diag", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate"));
}

#[test]
fn clustered_matrix_is_ill_posed() {
    let dir = scratch("clustered");
    let path = dir.join("id.txt");
    fs::write(&path, "2\n1 0\n0 0\n0 0\n1 0\n").unwrap();
    assert_eq!(run(&["cond", path.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.join("missing.txt");
    assert_eq!(run(&["cond", missing.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn cond_on_lattice_points() {
    let dir = scratch("cond");
    let pts = dir.join("pts.csv");
    let o = run(&["lattice", "--n", "7", "--output", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["cond", "--diag", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[0], ["lambda_re", "lambda_im", "kappa_lambda", "kappa_x"]);
    assert_eq!(r.len(), 1 + 7 + 1);
    let footer = r.last().unwrap();
    assert_eq!(footer[0], "kappa_max_frob");
    assert!((footer[1].parse::<f64>().unwrap() - 6f64.sqrt()).abs() < 1e-12);
    assert_eq!(footer[3].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn cond_on_matrix_file() {
    let dir = scratch("matrix");
    let path = dir.join("a.txt");
    fs::write(&path, "2\n0 0\n1 0\n0 0\n1 0\n").unwrap();
    let o = run(&["cond", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    // Eigenvalues 0 and 1 with κ_λ = √2 and κ_x = 1 each.
    for row in &r[1..3] {
        assert!((row[2].parse::<f64>().unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((row[3].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
}

fn perturb_args(dir: &Path) -> Vec<String> {
    let pts = dir.join("pts.csv");
    fs::write(&pts, "re,im\n0,0\n1,0\n2,0\n").unwrap();
    ["perturb", "--diag", pts.to_str().unwrap(), "--eps", "1e-6", "--trials", "20", "--threads", "1"]
        .map(String::from)
        .to_vec()
}

#[test]
fn perturb_is_seeded() {
    let dir = scratch("perturb");
    let args = perturb_args(&dir);
    let with_flag = |seed: &str| bin().args(&args).args(["--seed", seed]).output().unwrap();
    let a = with_flag("3");
    let b = with_flag("3");
    let c = with_flag("4");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let r = rows(&a);
    assert_eq!(r.len(), 1 + 3 + 1);
    for row in &r[1..4] {
        let shift: f64 = row[4].parse().unwrap();
        assert!(shift <= 1.0 + 1e-4);
    }

    let env = bin().args(&args).env("EIGENCOND_SEED", "3").output().unwrap();
    assert_eq!(env.stdout, a.stdout);
    let flag_wins = bin().args(&args).args(["--seed", "4"]).env("EIGENCOND_SEED", "3").output().unwrap();
    assert_eq!(flag_wins.stdout, c.stdout);
}

#[test]
fn perturb_rejects_large_eps() {
    let dir = scratch("perturb_eps");
    let mut args = perturb_args(&dir);
    args[4] = "0.5".into();
    assert_eq!(bin().args(&args).output().unwrap().status.code(), Some(1));
}

#[test]
fn asymptotics_lattice_and_file_agree() {
    let dir = scratch("asymptotics");
    let pts = dir.join("pts.csv");
    assert_eq!(run(&["lattice", "--n", "1000", "-o", pts.to_str().unwrap()]).status.code(), Some(0));
    let lattice = run(&["asymptotics", "--p", "inf", "--n-list", "100,1000"]);
    let file = run(&["asymptotics", "--p", "inf", "--n-list", "100,1000", "--generator", "file", "--file", pts.to_str().unwrap()]);
    assert_eq!(lattice.status.code(), Some(0));
    assert_eq!(rows(&lattice)[0], ["n", "raw", "scale", "ratio", "target", "margin"]);
    // The lattice generator knows the gap is exactly 1; a file is measured.
    let (a, b) = (rows(&lattice), rows(&file));
    assert_eq!(a.len(), 3);
    for (x, y) in a[1..].iter().zip(&b[1..]) {
        assert_eq!(x[0], y[0]);
        for k in 1..6 {
            let (u, v): (f64, f64) = (x[k].parse().unwrap(), y[k].parse().unwrap());
            assert!((u - v).abs() <= 1e-12 * u.abs(), "{u} vs {v}");
        }
    }
    let too_many = run(&["asymptotics", "--p", "2", "--n-list", "2000", "--generator", "file", "--file", pts.to_str().unwrap()]);
    assert_eq!(too_many.status.code(), Some(1));
    assert_eq!(run(&["asymptotics", "--p", "2", "--n-list", "100,10"]).status.code(), Some(1));
}

#[test]
fn optimize_writes_configuration_trace_and_manifest() {
    let dir = scratch("optimize");
    let out = dir.join("best.csv");
    let trace = dir.join("trace.jsonl");
    let manifest = dir.join("manifest.json");
    let args = [
        "optimize", "--n", "3", "--init", "random", "--restarts", "2", "--seed", "11", "--threads", "1",
        "-o", out.to_str().unwrap(), "--trace", trace.to_str().unwrap(), "--manifest", manifest.to_str().unwrap(),
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let best = fs::read_to_string(&out).unwrap();
    assert!(best.starts_with("re,im\n"));
    assert_eq!(best.lines().count(), 4);
    let lines: Vec<serde_json::Value> =
        fs::read_to_string(&trace).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|v| v["iteration"].is_u64() && v["objective"].is_f64()));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "optimize");
    assert_eq!(m["seed"], 11);
    assert_eq!(m["parameters"]["n"], 3);
    assert_eq!(m["output_paths"][1], trace.to_str().unwrap());
    let objective = m["summary"]["objective"].as_f64().unwrap();
    assert!((objective - 1.0).abs() < 1e-3, "{objective}");

    // Same parameters, same outputs.
    let first = fs::read(&out).unwrap();
    let first_trace = fs::read(&trace).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), first);
    assert_eq!(fs::read(&trace).unwrap(), first_trace);
}

#[test]
fn optimize_from_file_never_worsens() {
    let dir = scratch("optimize_file");
    let start = dir.join("start.csv");
    let trace = dir.join("trace.jsonl");
    let manifest = dir.join("manifest.json");
    assert_eq!(run(&["lattice", "--n", "19", "-o", start.to_str().unwrap()]).status.code(), Some(0));
    let o = run(&[
        "optimize", "--n", "19", "--p", "inf", "--init", "file", "--init-file", start.to_str().unwrap(),
        "--max-iters", "30", "--trace", trace.to_str().unwrap(), "--manifest", manifest.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert!(m["summary"]["objective"].as_f64().unwrap() <= m["summary"]["init_objective"].as_f64().unwrap());
    assert_eq!(m["parameters"]["p"], "inf");
    assert_eq!(run(&["optimize", "--n", "1", "--trace", trace.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn reproduce_headline_constants() {
    let start = std::time::Instant::now();
    let o = run(&["reproduce", "--n", "10000"]);
    assert!(start.elapsed().as_secs() < 60);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert_eq!(r[1][0], "kappa_max_frob/n");
    assert_eq!(r[2][0], "kappa_max_op/sqrt(n)");
    for row in &r[1..] {
        let ratio: f64 = row[4].parse().unwrap();
        let target: f64 = row[5].parse().unwrap();
        assert!((ratio - target).abs() / target < 0.03);
    }
    assert!((r[1][5].parse::<f64>().unwrap() - 0.3712576).abs() < 1e-6);
    assert!((r[2][5].parse::<f64>().unwrap() - 0.5250376).abs() < 1e-6);
    assert_eq!(run(&["reproduce", "--n", "50"]).status.code(), Some(1));
}

#[test]
fn manifest_goes_to_stderr_by_default() {
    let o = run(&["lattice", "--n", "3"]);
    let err = String::from_utf8(o.stderr).unwrap();
    let m: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(m["subcommand"], "lattice");
    assert_eq!(m["output_paths"][0], "-");
    assert!(m["tool_version"].is_string());
}
