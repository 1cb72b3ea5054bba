use std::process::Command;

use spectral_local::cli::{command_from_config, execute, Command as Job, JobSpec};
use spectral_local::specfun::Precision;

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectral-local"))
}

#[test]
fn kernel_grid_has_one_row_per_point() {
    let out = exe()
        .args(["kernel", "--t", "1", "--y-grid", "0.1:10:50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(
        lines[0],
        "t,y,kernel_re,kernel_im,error_estimate,config_hash"
    );
    // 17 significant digits
    let y = lines[1].split(',').nth(1).unwrap();
    assert_eq!(y, "1.0000000000000001e-1");
    let hash = lines[1].split(',').next_back().unwrap();
    assert_eq!(hash.len(), 64);
    assert!(lines[1..].iter().all(|l| l.ends_with(hash)));
}

#[test]
fn malformed_flag_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.csv");
    let st = exe()
        .args(["kernel", "--y-grid", "0.1:10"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(!out.exists());
    let st = exe()
        .args(["kernel", "--t", "abc"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(!out.exists());
    let st = exe()
        .args(["transform", "--precision", "extended"])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn tolerance_failure_exits_two_with_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.csv");
    let st = exe()
        .args([
            "appendix",
            "--support",
            "above-one",
            "--r",
            "1",
            "--im-cutoff",
            "20",
            "--tol",
            "1e-14",
        ])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(
        &cfg,
        r#"{"command": "padic", "params": {"p": 3, "alpha": 1.2, "sigma": 0.125}}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let st = exe()
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&a)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let st = exe()
        .args(["padic", "--p", "3", "--alpha", "1.2", "--sigma", "0.125"])
        .arg("--out")
        .arg(&b)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_errors() {
    assert!(command_from_config(r#"{"command": "kernel", "params": {"tt": 1}}"#).is_err());
    assert!(command_from_config(r#"{"command": "nope"}"#).is_err());
    assert!(command_from_config(r#"{"params": {}}"#).is_err());
    assert!(command_from_config("{\n\"command\": }")
        .unwrap_err()
        .to_string()
        .contains("line 2"));
    assert!(command_from_config(r#"{"command": "global", "params": {}}"#).is_err());
    assert!(matches!(
        command_from_config(r#"{"command": "kernel"}"#).unwrap(),
        Job::Kernel(_)
    ));
}

#[test]
fn hash_depends_on_every_parameter() {
    let job = |text: &str| JobSpec {
        command: command_from_config(text).unwrap(),
        precision: Precision::Double,
    };
    let a = job(r#"{"command": "kernel", "params": {"t": 1.0}}"#);
    let b = job(r#"{"command": "kernel", "params": {"t": 1.0000000000000002}}"#);
    assert_ne!(a.hash(), b.hash());
    assert_eq!(a.hash(), job(r#"{"command": "kernel"}"#).hash());
    let ext = JobSpec {
        precision: Precision::Extended,
        ..a.clone()
    };
    assert_ne!(a.hash(), ext.hash());
}

#[test]
fn json_output_embeds_hash() {
    let job = JobSpec {
        command: command_from_config(
            r#"{"command": "scaling", "params": {"x_list": "10000", "b_list": "1"}}"#,
        )
        .unwrap(),
        precision: Precision::Double,
    };
    let out = execute(&job).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.table.to_json().unwrap()).unwrap();
    assert_eq!(v["config_hash"], job.hash());
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn global_reads_data_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.json");
    std::fs::write(
        &data,
        r#"[{"r": 9.53369526135, "parity": 1, "hecke": {"2": -1.0}, "L_half": null, "L_one_ad": null, "c_abs": 0.5, "c_sign": 1, "source": "test"}]"#,
    )
    .unwrap();
    let out = exe()
        .arg("global")
        .arg("--data")
        .arg(&data)
        .args(["--b", "2", "--cutoffs", "5,20"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], "0.0000000000000000e0");
    assert_ne!(rows[1][1], rows[0][1]);
    let missing = exe()
        .arg("global")
        .arg("--data")
        .arg(dir.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(1));
}
