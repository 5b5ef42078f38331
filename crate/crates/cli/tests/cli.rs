use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use optcoef::vtk::summarize;

fn optcoef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optcoef")).args(args).output().unwrap()
}

fn summary(dir: &Path) -> HashMap<String, String> {
    std::fs::read_to_string(dir.join("summary.txt"))
        .unwrap()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .collect()
}

fn number(s: &HashMap<String, String>, key: &str) -> f64 {
    s[key].parse().unwrap()
}

#[test]
fn twophase_reaches_half_volume() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = optcoef(&[
        "--experiment",
        "compliance-twophase",
        "--gamma",
        "0.01141",
        "--n",
        "64",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    let f = number(&s, "beta_fraction");
    assert!((0.45..=0.55).contains(&f), "{f}");
    assert_eq!(s["status"], "converged");
}

#[test]
fn relaxed_without_tilt_is_isotropic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = optcoef(&[
        "--experiment",
        "general-relaxed",
        "--epsilon",
        "0.0",
        "--tau",
        "0.23539",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(number(&summary(dir.path()), "max_eigenvalue_ratio") <= 1.05);
}

#[test]
fn reruns_are_bit_identical() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let out = dir.path().to_str().unwrap();
            let o = optcoef(&[
                "--experiment",
                "general-relaxed",
                "--h",
                "0.1",
                "--epsilon",
                "0.5",
                "--out-dir",
                out,
            ]);
            assert!(o.status.success());
            ["mesh_fields.vtk", "convergence.csv", "summary.txt"].map(|f| std::fs::read(dir.path().join(f)).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn vtk_counts_match_the_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = optcoef(&[
        "--experiment",
        "energy-relaxed",
        "--domain",
        "disk",
        "--h",
        "0.1",
        "--out-dir",
        out,
    ]);
    assert!(o.status.success());
    let s = summary(dir.path());
    let v = summarize(&std::fs::read_to_string(dir.path().join("mesh_fields.vtk")).unwrap()).unwrap();
    assert_eq!(v.points.to_string(), s["vertices"]);
    assert_eq!(v.cells.to_string(), s["cells"]);
    assert_eq!(v.point_arrays, ["u"]);
    assert_eq!(v.cell_arrays, ["a", "t"]);
    let csv = std::fs::read_to_string(dir.path().join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("iter,cost,step,ratio"));
    assert_eq!(csv.lines().count(), number(&s, "iterations") as usize + 2);
}

#[test]
fn config_file_is_read_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "experiment = custom\npenalty = quadratic\nn = 8\ngamma = 0.3\n").unwrap();
    let out = dir.path().join("out");
    let o = optcoef(&[
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "4",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(&out);
    assert_eq!(s["cells"], "32");
    assert_eq!(s["experiment"], "custom");
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = optcoef(&[
        "--experiment",
        "custom",
        "--config",
        dir.path().join("absent.cfg").to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn bad_arguments_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    for args in [
        vec!["--experiment", "bogus", "--out-dir", out],
        vec![
            "--experiment",
            "custom",
            "--alpha",
            "2",
            "--beta",
            "1",
            "--out-dir",
            out,
        ],
        vec!["--out-dir", out],
    ] {
        assert_eq!(optcoef(&args).status.code(), Some(2), "{args:?}");
    }
    assert!(!Path::new(out).exists());
}

#[test]
fn run_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, "").unwrap();
    let out = blocker.join("out");
    let o = optcoef(&["--experiment", "custom", "--n", "2", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}
