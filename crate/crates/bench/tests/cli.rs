use std::path::Path;
use std::process::Command;

fn psso() -> Command {
    Command::new(env!("CARGO_BIN_EXE_psso"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn karate() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/karate.edges")
        .display()
        .to_string()
}

#[test]
fn run_then_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            r#"{{"algorithm": "qattack", "dataset": "{}", "iterations": 4, "pop_size": 8, "repetitions": 2}}"#,
            karate()
        ),
    );
    let csv_path = dir.path().join("rows.csv");
    let out = psso()
        .args([
            "run",
            config.to_str().unwrap(),
            "--format",
            "csv",
            "--output",
            csv_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let written = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), written);
    assert_eq!(written.lines().count(), 3);

    let table = psso()
        .args(["report", csv_path.to_str().unwrap(), "--format", "table"])
        .output()
        .unwrap();
    assert!(table.status.success());
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("task"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn sweep_emits_one_batch_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"algorithm": "sixdst", "dataset": "ba:40:1", "iterations": 2, "mode": "SM"}"#,
    );
    let out = psso()
        .args([
            "sweep",
            config.to_str().unwrap(),
            "--axis",
            "pn",
            "--values",
            "1,2,3",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn exit_codes_distinguish_config_and_dataset_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(
        dir.path(),
        r#"{"algorithm": "qattack", "dataset": "x", "pool": "node-removal"}"#,
    );
    assert_eq!(
        psso()
            .args(["run", bad.to_str().unwrap()])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );

    let missing = write_config(
        dir.path(),
        r#"{"algorithm": "qattack", "dataset": "nowhere.edges"}"#,
    );
    assert_eq!(
        psso()
            .args(["run", missing.to_str().unwrap()])
            .output()
            .unwrap()
            .status
            .code(),
        Some(3)
    );

    let garbled = dir.path().join("garbled.edges");
    std::fs::write(&garbled, "0 1\n1\n").unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"algorithm": "qattack", "dataset": "garbled.edges"}"#,
    );
    assert_eq!(
        psso()
            .args(["run", cfg.to_str().unwrap()])
            .output()
            .unwrap()
            .status
            .code(),
        Some(3)
    );

    let axis = write_config(
        dir.path(),
        r#"{"algorithm": "sixdst", "dataset": "ba:20:1"}"#,
    );
    let out = psso()
        .args([
            "sweep",
            axis.to_str().unwrap(),
            "--axis",
            "pop_size",
            "--values",
            "30,20",
        ])
        .output()
        .unwrap()
        .status;
    assert_eq!(out.code(), Some(2));
}
