//! End-to-end checks of the `ris-sim` binary: flag handling, output files,
//! config errors and rerun determinism.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ris-sim"))
}

fn tmp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ris-sim-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn writes_csv_and_metadata_sidecar() {
    let dir = tmp_dir("sidecar");
    let out = dir.join("sweep.csv");
    let status = bin()
        .args(["ris-size-sweep", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("ris_side,analytic_ris_w,sim_ris_w,los_w"));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("sweep.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["scenario"], "ris-size-sweep");
    assert!(meta["config_echo"].as_str().unwrap().contains("ris_sides"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seed_flag_changes_stochastic_output_and_reruns_are_identical() {
    let dir = tmp_dir("seed");
    let run = |seed: &str, name: &str| -> String {
        let out = dir.join(name);
        let status = bin()
            .args([
                "interference-validation",
                "--realizations",
                "10",
                "--seed",
                seed,
                "--out",
            ])
            .arg(&out)
            .arg("--config")
            .arg(write_small_config(&dir))
            .status()
            .unwrap();
        assert!(status.success());
        fs::read_to_string(out).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("1", "b.csv");
    let c = run("2", "c.csv");
    assert_eq!(a, b);
    assert_ne!(a, c);
    fs::remove_dir_all(dir).unwrap();
}

fn write_small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    fs::write(
        &path,
        "[population]\nmean_users = 15.0\n\n[sweep]\nris_sides = [4]\n",
    )
    .unwrap();
    path
}

#[test]
fn rejects_unknown_config_keys() {
    let dir = tmp_dir("badcfg");
    let cfg = dir.join("bad.toml");
    fs::write(&cfg, "[scene]\nfrequenzy_hz = 140e9\n").unwrap();
    let output = bin()
        .args(["moving-rx", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("error"), "stderr: {stderr}");
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn rejects_invalid_field_values_with_field_name() {
    let dir = tmp_dir("badval");
    let cfg = dir.join("bad.toml");
    fs::write(&cfg, "[scene]\nfrequency_hz = -1.0\n").unwrap();
    let output = bin()
        .args(["power-comparison", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("frequency_hz"), "stderr: {stderr}");
    fs::remove_dir_all(dir).unwrap();
}
