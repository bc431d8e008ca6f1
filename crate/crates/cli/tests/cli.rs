use std::path::Path;
use std::process::{Command, Output};

fn chain(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chain"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn spectrum_of_homogeneous_chain() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        r#"{"n": 10, "family": {"kind": "homogeneous", "J": 1}}"#,
    );
    let out = chain(
        &[
            "spectrum",
            "--config",
            "c.json",
            "--out",
            "o",
            "--deterministic",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("o/spectrum.csv")).unwrap();
    let lines = data_lines(&text);
    assert!(lines[0].starts_with("k,"));
    assert_eq!(lines.len(), 11);
    for (k, line) in lines[1..].iter().enumerate() {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let expect = -2.0 * (std::f64::consts::PI * (k + 1) as f64 / 11.0).cos();
        assert_eq!(cells[0], k as f64);
        assert!((cells[1] - expect).abs() < 1e-12);
    }
    assert!(text.contains("# config: "));
    assert!(text.contains("# tolerances: "));
    assert!(text.contains("# chain-core: "));
}

#[test]
fn exit_codes_follow_error_class() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "bad.json",
        r#"{"n": 10, "family": {"kind": "nope"}}"#,
    );
    let out = chain(&["spectrum", "--config", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));

    let out = chain(&["spectrum", "--config", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    write(
        dir.path(),
        "f.json",
        r#"{"n": 10, "family": {"kind": "homogeneous", "J": 1}}"#,
    );
    write(dir.path(), "blocker", "");
    let out = chain(
        &["spectrum", "--config", "f.json", "--out", "blocker/x"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));

    // above the band there is no classically allowed well
    write(
        dir.path(),
        "num.json",
        r#"{"n": 50, "family": {"kind": "homogeneous", "J": 1}, "task": {"energies": [5]}}"#,
    );
    let out = chain(
        &["frequencies", "--config", "num.json", "--out", "o"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    let out = chain(&["reproduce", "--config", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    write(
        dir.path(),
        "r.json",
        r#"{"task": {"figures": ["no-such-figure"]}}"#,
    );
    let out = chain(&["reproduce", "--config", "r.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "c.json",
        r#"{"n": 100, "family": {"kind": "rainbow", "h": 1}, "task": {"fillings": [0.125, 0.4]}}"#,
    );
    for task in ["density", "compare"] {
        let a = chain(
            &[task, "--config", "c.json", "--out", "a", "--deterministic"],
            dir.path(),
        );
        let b = chain(
            &[task, "--config", "c.json", "--out", "b", "--deterministic"],
            dir.path(),
        );
        assert!(a.status.success() && b.status.success());
        let mut names: Vec<_> = std::fs::read_dir(dir.path().join("a"))
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(!names.is_empty());
        for n in names {
            let x = std::fs::read(dir.path().join("a").join(&n)).unwrap();
            let y = std::fs::read(dir.path().join("b").join(&n)).unwrap();
            assert_eq!(x, y, "{n:?}");
        }
    }
}

#[test]
fn reproduce_writes_one_directory_per_target() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "r.json",
        r#"{"task": {"figures": ["rainbow-density", "asymmetric-cosine-table"]}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_chain"))
        .args([
            "reproduce",
            "--config",
            "r.json",
            "--out",
            "o",
            "--format",
            "json",
            "--deterministic",
        ])
        .env("CHAIN_NUM_THREADS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("o/rainbow-density/density_nu0.125.json"))
            .unwrap(),
    )
    .unwrap();
    let cols: Vec<String> = serde_json::from_value(doc["columns"].clone()).unwrap();
    assert!(cols.iter().any(|c| c.contains("exact")));
    assert!(cols.iter().any(|c| c.contains("wkb")));
    assert_eq!(doc["rows"].as_array().unwrap().len(), 400);
    assert!(dir.path().join("o/asymmetric-cosine-table").is_dir());

    let bad = Command::new(env!("CARGO_BIN_EXE_chain"))
        .args(["reproduce", "--config", "r.json", "--out", "o"])
        .env("CHAIN_NUM_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
