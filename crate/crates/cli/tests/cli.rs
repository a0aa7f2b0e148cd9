//! End-to-end checks of the `tomo` binary: exit codes, artifact layout, and
//! seed plumbing, all at a deliberately tiny scale.

use std::path::Path;
use std::process::{Command, Output};

fn tomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomo")).args(args).output().expect("spawn tomo")
}

fn tiny_config(dir: &Path) -> String {
    let path = dir.join("tiny.json");
    std::fs::write(
        &path,
        r#"{
            "mode": "brt_lambertian",
            "grid_nx": 16,
            "grid_ny": 16,
            "total_rays": 120,
            "n_transmitters": 40,
            "n_receivers": 40,
            "n_hits": 40,
            "max_sweeps": 20,
            "trials": 2
        }"#,
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn missing_config_fails_with_a_diagnostic() {
    let out = tomo(&["run", "--config", "/nonexistent/config.json"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("config"), "diagnostic should mention the config: {stderr}");
}

#[test]
fn unknown_config_fields_are_rejected() {
    let scratch = tempfile::tempdir().unwrap();
    let path = scratch.path().join("bad.json");
    std::fs::write(&path, r#"{ "grid_nx": 16, "grid_sz": 16 }"#).unwrap();
    let out = tomo(&["run", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}

#[test]
fn run_writes_the_artifact_set() {
    let scratch = tempfile::tempdir().unwrap();
    let config = tiny_config(scratch.path());
    let out_dir = scratch.path().join("out");
    let out = tomo(&["run", "--config", &config, "--out-dir", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let summary = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("mode,trial,error,projections,wall_ms"));
    // 2 trial rows plus the average row.
    assert_eq!(lines.count(), 3);
    for trial in 0..2 {
        for stem in ["rays", "times"] {
            let name = format!("{stem}_brt_lambertian_{trial}.txt");
            assert!(out_dir.join(&name).exists(), "missing {name}");
        }
        let grid = format!("recon_brt_lambertian_{trial}.grid");
        assert!(out_dir.join(&grid).exists(), "missing {grid}");
    }
}

#[test]
fn compare_covers_the_requested_modes() {
    let scratch = tempfile::tempdir().unwrap();
    let config = tiny_config(scratch.path());
    let out_dir = scratch.path().join("out");
    let out = tomo(&[
        "compare",
        "--modes",
        "art,brt_specular",
        "--config",
        &config,
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let summary = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().filter(|l| l.starts_with("art,")).count(), 3);
    assert_eq!(summary.lines().filter(|l| l.starts_with("brt_specular,")).count(), 3);
    assert!(!summary.contains("brt_lambertian"));
    assert!(out_dir.join("rays_art_0.txt").exists());
    assert!(out_dir.join("rays_brt_specular_1.txt").exists());
}

#[test]
fn duplicate_modes_are_rejected() {
    let scratch = tempfile::tempdir().unwrap();
    let config = tiny_config(scratch.path());
    let out = tomo(&["compare", "--modes", "art,art", "--config", &config]);
    assert!(!out.status.success());
}

#[test]
fn seed_override_changes_the_errors() {
    let scratch = tempfile::tempdir().unwrap();
    let config = tiny_config(scratch.path());
    let mut summaries = Vec::new();
    for (name, seed) in [("a", "1"), ("b", "2"), ("c", "1")] {
        let out_dir = scratch.path().join(name);
        let out = tomo(&[
            "run",
            "--config",
            &config,
            "--seed",
            seed,
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let csv = std::fs::read_to_string(out_dir.join("summary.csv")).unwrap();
        summaries.push(stable_columns(&csv));
    }
    assert_ne!(summaries[0], summaries[1], "different seeds must differ");
    assert_eq!(summaries[0], summaries[2], "equal seeds must reproduce");
}

/// Everything except the wall-clock column, which legitimately varies.
fn stable_columns(csv: &str) -> String {
    csv.lines()
        .map(|line| line.splitn(5, ',').take(4).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}
