use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrig-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn sample_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut all = vec!["sample"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &p]);
    let o = lab(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn sample_is_seeded_and_well_formed() {
    let a = lab(&[
        "sample", "--n", "6", "--m", "5", "--p", "0.4", "--seed", "1",
    ]);
    let b = lab(&[
        "sample", "--n", "6", "--m", "5", "--p", "0.4", "--seed", "1",
    ]);
    let c = lab(&[
        "sample", "--n", "6", "--m", "5", "--p", "0.4", "--seed", "2",
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).starts_with("WRIG 1 5 6\n"));
    let sq = lab(&["sample", "--n", "50", "--c", "2", "--seed", "3"]);
    assert!(stdout(&sq).starts_with("WRIG 1 50 50\n"));
    let al = lab(&["sample", "--n", "1024", "--alpha", "0.5", "--p", "0.01"]);
    assert!(stdout(&al).starts_with("WRIG 1 32 1024\n"));
}

#[test]
fn sample_rejects_bad_input() {
    assert_eq!(lab(&["sample", "--n", "6"]).status.code(), Some(1));
    assert_eq!(
        lab(&["sample", "--n", "6", "--m", "3", "--p", "1.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lab(&["sample", "--n", "0", "--m", "3", "--p", "0.5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn solve_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let m = sample_to(
        dir.path(),
        "r.txt",
        &["--n", "10", "--m", "8", "--p", "0.3", "--seed", "4"],
    );
    let col = dir.path().join("x.txt");
    let exact = lab(&[
        "solve",
        "--algo",
        "exact",
        "--in",
        &m,
        "--json",
        "--coloring-out",
        col.to_str().unwrap(),
    ]);
    assert_eq!(exact.status.code(), Some(0));
    let e: Value = serde_json::from_str(&stdout(&exact)).unwrap();
    for key in ["algorithm", "weight", "discrepancy", "n", "m", "seed"] {
        assert!(e.get(key).is_some(), "{key}");
    }
    assert_eq!(e["algorithm"], "exact");
    assert_eq!(e["n"], 10);
    let saved = fs::read_to_string(&col).unwrap();
    assert_eq!(saved.split_whitespace().count(), 10);
    for algo in ["random", "majority", "mindisc"] {
        let o = lab(&["solve", "--algo", algo, "--in", &m, "--seed", "9", "--json"]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(v["weight"].as_u64().unwrap() <= e["weight"].as_u64().unwrap());
        if algo == "mindisc" {
            assert!(v["discrepancy"].as_u64().unwrap() <= e["discrepancy"].as_u64().unwrap());
        }
    }
    let text = lab(&["solve", "--algo", "random", "--in", &m]);
    assert!(stdout(&text).starts_with("algorithm random\nweight "));
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "WRIG 2 1 1\n1 1 1\n").unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(
        lab(&["solve", "--algo", "exact", "--in", bad])
            .status
            .code(),
        Some(1)
    );
    let m = sample_to(
        dir.path(),
        "r.txt",
        &["--n", "30", "--m", "5", "--p", "0.2"],
    );
    // above the exhaustive cap
    assert_eq!(
        lab(&["solve", "--algo", "exact", "--in", &m]).status.code(),
        Some(1)
    );
    let o = lab(&[
        "solve",
        "--algo",
        "majority",
        "--epsilon",
        "1.5",
        "--in",
        &m,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        lab(&["solve", "--algo", "greedy", "--in", &m])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bipartize_json_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = sample_to(
        dir.path(),
        "s.txt",
        &["--n", "60", "--c", "0.5", "--seed", "2"],
    );
    let o = lab(&["bipartize", "--in", &sparse, "--seed", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "terminated",
        "iterations",
        "zero_strong_cycles",
        "label_disjoint",
        "cut_weight",
        "discrepancy",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["terminated"], true);

    let dense = sample_to(
        dir.path(),
        "d.txt",
        &["--n", "40", "--m", "10", "--p", "0.3", "--seed", "10"],
    );
    let args = ["bipartize", "--in", &dense, "--max-rematch", "0", "--json"];
    let lenient = lab(&args);
    assert_eq!(lenient.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&lenient)).unwrap();
    assert_eq!(v["terminated"], false);
    assert!(v["cut_weight"].is_null());
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(lab(&strict).status.code(), Some(3));
}

#[test]
fn count_sequences_both_modes() {
    let o = lab(&[
        "count-sequences",
        "--expect",
        "--n",
        "5",
        "--m",
        "5",
        "--p",
        "0.2",
        "--k",
        "3",
    ]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.0768).abs() < 1e-12);
    let dir = tempfile::tempdir().unwrap();
    let tri = dir.path().join("tri.txt");
    fs::write(&tri, "WRIG 1 3 3\n1 2 1 2\n2 2 2 3\n3 2 1 3\n").unwrap();
    let o = lab(&["count-sequences", "--in", tri.to_str().unwrap(), "--k", "3"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = lab(&["count-sequences", "--in", tri.to_str().unwrap(), "--k", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(lab(&["count-sequences", "--k", "3"]).status.code(), Some(1));
}

const SPEC: &str = r#"
name = "cli"
regime = "fixed"
n = [10, 30]
m = [10]
p = [0.2]
trials = 50
algorithms = ["random", "majority", "exact", "bipartize"]
seed = 11
output = "out.csv"
"#;

#[test]
fn experiment_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    fs::write(&spec, SPEC).unwrap();
    let spec = spec.to_str().unwrap();
    let o = lab(&["experiment", "--spec", spec, "--workers", "1"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv1 = fs::read(dir.path().join("out.csv")).unwrap();
    let text = String::from_utf8(csv1.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# wrig-lab schema 1"));
    assert!(lines.next().unwrap().starts_with("point,trial,seed,"));
    assert_eq!(text.lines().count(), 2 + 100);

    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert_eq!(summary["schema"], 1);
    let points = summary["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    assert!(points[0]["ratios"]["random_over_exact"].as_f64().unwrap() <= 1.0);
    assert!(points[1]["weight"].get("exact").is_none());

    let other = dir.path().join("eight.csv");
    let o = lab(&[
        "experiment",
        "--spec",
        spec,
        "--workers",
        "8",
        "--out",
        other.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&other).unwrap(), csv1);
}

#[test]
fn experiment_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "name = \"x\"\nregime = \"fixed\"\ntrials = 0\n").unwrap();
    let o = lab(&["experiment", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        lab(&["experiment", "--spec", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let dense = dir.path().join("dense.toml");
    fs::write(
        &dense,
        "name = \"d\"\nregime = \"fixed\"\nn = [40]\nm = [10]\np = [0.3]\ntrials = 2\n\
         algorithms = [\"bipartize\"]\nmax_rematch = 5\nseed = 10\noutput = \"d.csv\"\n",
    )
    .unwrap();
    let dense = dense.to_str().unwrap();
    assert_eq!(lab(&["experiment", "--spec", dense]).status.code(), Some(0));
    assert_eq!(
        lab(&["experiment", "--spec", dense, "--strict"])
            .status
            .code(),
        Some(3)
    );
}
