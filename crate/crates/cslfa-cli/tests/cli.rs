//! End-to-end tests of the `cslfa` binary: subcommand wiring, exit codes,
//! output format, and byte-identical reruns.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cslfa"))
}

fn write_config(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn tiny_beta_curve() -> &'static str {
    r#"
kind = "beta-curve"
comment = "tiny fixture"
dimension = 1
n = 16
levels = 2

[sigma]
start = -50.0
stop = -400.0
count = 3
"#
}

fn run_ok(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn validate_accepts_wellformed_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "ok.toml", tiny_beta_curve());
    let out = bin().arg("validate").arg(&config).output().unwrap();
    run_ok(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok"));
}

#[test]
fn validate_lists_violations_with_exit_code_2() {
    let dir = tempfile::tempdir().unwrap();
    // missing sigma range entirely
    let config = write_config(
        dir.path(),
        "bad.toml",
        "kind = \"beta-curve\"\ndimension = 1\nn = 16\nlevels = 2\n",
    );
    let out = bin().arg("validate").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("violation"));

    // negative beta grid
    let config2 = write_config(
        dir.path(),
        "bad2.toml",
        &format!("{}\n[beta]\nstart = -0.2\nstop = 0.2\nstep = 0.1\n", tiny_beta_curve()),
    );
    let out2 = bin().arg("validate").arg(&config2).output().unwrap();
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "broken.toml", "kind = \"beta-curve");
    let out = bin().arg("validate").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn subcommand_kind_mismatch_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", tiny_beta_curve());
    let out = bin()
        .arg("heatmap")
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not match"));
}

#[test]
fn beta_min_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", tiny_beta_curve());
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for (out_path, jobs) in [(&out1, "2"), (&out2, "1")] {
        let out = bin()
            .arg("beta-min")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(out_path)
            .arg("--jobs")
            .arg(jobs)
            .output()
            .unwrap();
        run_ok(&out);
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "identical configs must produce identical bytes");
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("sigma,beta,metric,status,config_hash"));
    assert!(text.lines().filter(|l| l.ends_with("ok") || l.contains(",ok,")).count() >= 3);
}

#[test]
fn set_override_changes_config_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", tiny_beta_curve());
    let base = dir.path().join("base.csv");
    let overridden = dir.path().join("override.csv");
    run_ok(
        &bin()
            .arg("beta-min")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&base)
            .output()
            .unwrap(),
    );
    run_ok(
        &bin()
            .arg("beta-min")
            .arg("--config")
            .arg(&config)
            .arg("--set")
            .arg("sigma.count=2")
            .arg("--output")
            .arg(&overridden)
            .output()
            .unwrap(),
    );
    let base_text = std::fs::read_to_string(&base).unwrap();
    let over_text = std::fs::read_to_string(&overridden).unwrap();
    assert_ne!(
        base_text.lines().find(|l| l.starts_with("# config_hash")),
        over_text.lines().find(|l| l.starts_with("# config_hash"))
    );
    assert_eq!(over_text.lines().filter(|l| l.contains(",ok,")).count(), 2);
}

#[test]
fn output_dir_env_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.toml", tiny_beta_curve());
    let out = bin()
        .arg("beta-min")
        .arg("--config")
        .arg(&config)
        .arg("--output")
        .arg("relative.csv")
        .env("CSLFA_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    run_ok(&out);
    assert!(dir.path().join("relative.csv").exists());
}

#[test]
fn smoother_curve_reports_three_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "s.toml",
        r#"
kind = "smoother-curve"
dimension = 1
n = 16
levels = 2

[sigma]
values = [-100.0, -400.0]
"#,
    );
    let out_path = dir.path().join("s.csv");
    run_ok(
        &bin()
            .arg("smoother")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&out_path)
            .output()
            .unwrap(),
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    for metric in ["bound_smooth_mode", "bound_oscillatory_mode", "smoother_beta_min"] {
        assert_eq!(text.matches(metric).count(), 2, "{metric}");
    }
}

#[test]
fn amp_profile_writes_theta_column() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "p.toml",
        r#"
kind = "amplification-profile"
dimension = 1
n = 16
levels = 2

[sigma]
values = [-100.0]

[beta]
values = [0.1]
"#,
    );
    let out_path = dir.path().join("p.csv");
    run_ok(
        &bin()
            .arg("amp-profile")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&out_path)
            .output()
            .unwrap(),
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("sigma,beta,theta,metric,status,config_hash"));
    // 1024 theta samples
    assert_eq!(text.lines().filter(|l| l.contains(",ok,")).count(), 1024);
}

#[test]
fn heatmap_and_iter_min_run_on_tiny_grids() {
    let dir = tempfile::tempdir().unwrap();
    let heat = write_config(
        dir.path(),
        "h.toml",
        r#"
kind = "heatmap"
dimension = 1
n = 16
levels = 2
mu = 2

[sigma]
values = [-100.0, -300.0]

[beta]
values = [0.1, 0.5]
"#,
    );
    let heat_out = dir.path().join("h.csv");
    run_ok(
        &bin()
            .arg("heatmap")
            .arg("--config")
            .arg(&heat)
            .arg("--output")
            .arg(&heat_out)
            .output()
            .unwrap(),
    );
    let text = std::fs::read_to_string(&heat_out).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(",ok,")).count(), 4);

    let iter = write_config(
        dir.path(),
        "i.toml",
        r#"
kind = "iteration-minimum"
dimension = 1
n = 16
levels = 2
mu = [1, 2]

[sigma]
values = [-100.0]

[beta]
values = [0.1, 0.3, 0.5]
"#,
    );
    let iter_out = dir.path().join("i.csv");
    run_ok(
        &bin()
            .arg("iter-min")
            .arg("--config")
            .arg(&iter)
            .arg("--output")
            .arg(&iter_out)
            .output()
            .unwrap(),
    );
    let text = std::fs::read_to_string(&iter_out).unwrap();
    assert!(text.contains("sigma,mu,beta,iterations,status,config_hash"));
    assert_eq!(text.lines().filter(|l| l.contains(",ok,")).count(), 2);
}

#[test]
fn convfactor_emits_json_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.toml",
        r#"
kind = "convfactor-table"
dimension = 1
n = 16
levels = 2
mu = 1

[sigma]
values = [-100.0]

[beta]
values = [0.2, 0.4]
"#,
    );
    let out_path = dir.path().join("c.json");
    run_ok(
        &bin()
            .arg("convfactor")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&out_path)
            .output()
            .unwrap(),
    );
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["provenance"]["subcommand"], "convfactor");
    assert!(doc["provenance"]["config_hash"].as_str().unwrap().len() == 16);
    let rows = doc["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["status"], "ok");
        assert!(row["rho_ex"].as_f64().unwrap() > 0.0);
        assert!(row["rho_th"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn invariance_check_deltas_are_tiny() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "v.toml",
        r#"
kind = "invariance-check"
dimension = 1
n = 16
levels = 2

[sigma]
values = [-60.0, -150.0]
"#,
    );
    let out_path = dir.path().join("v.csv");
    run_ok(
        &bin()
            .arg("invariance")
            .arg("--config")
            .arg(&config)
            .arg("--output")
            .arg(&out_path)
            .output()
            .unwrap(),
    );
    let text = std::fs::read_to_string(&out_path).unwrap();
    for line in text.lines().filter(|l| l.contains(",ok,")) {
        let delta: f64 = line.split(',').nth(6).unwrap().parse().unwrap();
        assert!(delta < 1e-3, "invariance delta {delta} too large: {line}");
    }
}

#[test]
fn shipped_configs_validate() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut checked = 0;
    for entry in std::fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let out = bin().arg("validate").arg(&path).output().unwrap();
        assert!(
            out.status.success(),
            "shipped config {} fails validation: {}",
            path.display(),
            String::from_utf8_lossy(&out.stdout)
        );
        checked += 1;
    }
    assert!(checked >= 10, "expected the shipped config set, found {checked}");
}
