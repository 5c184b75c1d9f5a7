use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use abscat_cli::io::parse_csv;
use abscat::verify::VerifyReport;

fn abscat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abscat"))
        .args(args)
        .current_dir(dir)
        .env_remove("AB_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let (h, rows) = parse_csv(&fs::read_to_string(path).unwrap()).unwrap();
    let i = h.iter().position(|c| c == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

const ZERO: &str = r#"{"data":{"alpha":-1,"beta":1,"gamma":-1,"grid":{"min":-30,"max":30,"n":1024},"profile":{"name":"zero","amplitude":0}}}"#;

#[test]
fn scatter_zero_profile_gives_zero_reflection() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "zero.json", ZERO);
    let o = abscat(&["scatter", "--config", &cfg, "--out", "z"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = column(&tmp.path().join("z/scattering.csv"), "r_abs");
    assert!(!r.is_empty() && r.iter().all(|&v| v == 0.0));
}

#[test]
fn scatter_sech_writes_grid_and_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let o = abscat(&["scatter", "--out", "s"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let z = column(&tmp.path().join("s/scattering.csv"), "z");
    let want = abscat::scattering::default_spectral_grid();
    assert_eq!(z, want);
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("s/scattering.json")).unwrap()).unwrap();
    assert_eq!(meta["winding"].as_i64(), Some(0));
    assert!(meta["h11_norm"].as_f64().unwrap() > 0.0);
}

#[test]
fn out_dir_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "zero.json", ZERO);
    let o = Command::new(env!("CARGO_BIN_EXE_abscat"))
        .args(["scatter", "--config", &cfg])
        .current_dir(tmp.path())
        .env("AB_OUT_DIR", tmp.path().join("from_env"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("from_env/scattering.csv").exists());
}

#[test]
fn malformed_json_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "bad.json", "{\"data\": [1, 2");
    let o = abscat(&["scatter", "--config", &cfg, "--out", "b"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config"));
    let cfg = write(tmp.path(), "typo.json", r#"{"scater": {}}"#);
    assert_eq!(abscat(&["scatter", "--config", &cfg], tmp.path()).status.code(), Some(1));
}

#[test]
fn asymptote_zero_reflection_is_degenerate() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "zero.json", ZERO);
    let o = abscat(&["asymptote", "--config", &cfg, "--out", "a"], tmp.path());
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    let a = column(&tmp.path().join("a/asymptote.csv"), "a_abs");
    assert_eq!(a.len(), 12);
    assert!(a.iter().all(|&v| v == 0.0));
}

#[test]
fn asymptote_wrong_regime_is_a_domain_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "w.json", r#"{"asymptote":{"z0":[],"points":[{"x":-2,"t":5}]}}"#);
    let o = abscat(&["asymptote", "--config", &cfg, "--out", "w"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("WrongRegime"));
}

#[test]
fn asymptote_reruns_are_byte_identical_and_scale() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(abscat(&["scatter", "--out", "s"], tmp.path()).status.code(), Some(0));
    let cfg = write(
        tmp.path(),
        "a.json",
        r#"{"asymptote":{"scattering":"s/scattering.csv","z0":[0.7,1.3],"t":[10,40]}}"#,
    );
    for run in ["r1", "r2"] {
        let o = abscat(&["asymptote", "--config", &cfg, "--out", run, "--threads", "2"], tmp.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["asymptote.csv", "local_models.json"] {
        assert_eq!(fs::read(tmp.path().join("r1").join(f)).unwrap(), fs::read(tmp.path().join("r2").join(f)).unwrap());
    }
    let a = column(&tmp.path().join("r1/asymptote.csv"), "a_abs");
    // rows: (0.7, 10), (0.7, 40), (1.3, 10), (1.3, 40)
    assert!((a[0] / a[1] - 2.0).abs() < 1e-13);
    assert!((a[2] / a[3] - 2.0).abs() < 1e-13);
}

#[test]
fn evolve_zero_profile_and_stability_guard() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "e.json",
        r#"{"data":{"alpha":-1,"beta":1,"gamma":-1,"grid":{"min":-20,"max":20,"n":512},"profile":{"name":"zero","amplitude":0}},
            "evolve":{"dt":0.01,"checkpoints":[0.05,0.1]}}"#,
    );
    let o = abscat(&["evolve", "--config", &cfg, "--out", "e"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["snapshot_000.csv", "snapshot_001.csv"] {
        let a = column(&tmp.path().join("e").join(f), "a_abs");
        assert_eq!(a.len(), 512);
        assert!(a.iter().all(|&v| v == 0.0));
    }
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("e/evolve_report.json")).unwrap()).unwrap();
    assert_eq!(rep["isospectral_passed"].as_bool(), Some(true));

    let cfg = write(
        tmp.path(),
        "big.json",
        r#"{"data":{"alpha":-1,"beta":1,"gamma":-1,"grid":{"min":-20,"max":20,"n":512},"profile":{"name":"sech","amplitude":0.3}},
            "evolve":{"dt":0.5,"checkpoints":[1.0]}}"#,
    );
    let o = abscat(&["evolve", "--config", &cfg, "--out", "big"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("StepTooLarge"));
}

#[test]
fn evolve_short_sech_run_is_isospectral_in_modulus() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "e.json",
        r#"{"data":{"alpha":-1,"beta":1,"gamma":-1,"grid":{"min":-30,"max":300,"n":6601},"profile":{"name":"sech","amplitude":0.3}},
            "evolve":{"dt":0.005,"checkpoints":[0.5],"taper_start":150}}"#,
    );
    let o = abscat(&["evolve", "--config", &cfg, "--out", "e"], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("e/evolve_report.json")).unwrap()).unwrap();
    let d = rep["isospectral"]["s11_defect"].as_f64().unwrap();
    assert!(d <= 5e-3, "{d}");
}

#[test]
fn verify_fast_skips_pde_criteria_and_round_trips() {
    let tmp = tempfile::tempdir().unwrap();
    let o = abscat(&["verify", "--fast", "--out", "v"], tmp.path());
    let text = fs::read_to_string(tmp.path().join("v/verify_report.json")).unwrap();
    let report: VerifyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.criteria.len(), 10);
    let skipped: Vec<u32> = report.criteria.iter().filter(|c| c.status == abscat::verify::Status::Skipped).map(|c| c.id).collect();
    assert_eq!(skipped, vec![7, 8]);
    assert_eq!(o.status.code(), Some(if report.passed { 0 } else { 3 }));
    let again = abscat_cli::io::to_json(&report).unwrap();
    assert_eq!(serde_json::from_str::<VerifyReport>(&again).unwrap(), report);
}
