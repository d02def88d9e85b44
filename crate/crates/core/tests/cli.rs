use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lifespan-lab"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("LIFESPAN_LAB_THREADS")
        .output()
        .expect("run lifespan-lab")
}

const HEADER: &str = "eps,T_num,scaled,bound_const,ratio,termination,L,N,dt_floor,K_b,B_over_A,schema_version";

#[test]
fn bound_prints_the_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(dir.path(), &["bound", "--eps", "0.1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "A = 1"), "{text}");
    assert!(text.lines().any(|l| l == "liminf_const = 0.25"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("bound.json")).unwrap()).unwrap();
    assert!((json["t_b"].as_f64().unwrap() - 20.25).abs() < 1e-9);
}

#[test]
fn unknown_config_key_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"seed": 3, "sweeep": {}}"#).unwrap();
    let out = lab(dir.path(), &["bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweeep"));
}

#[test]
fn bad_thread_cap_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lifespan-lab"))
        .args(["sweep", "--eps", "0.5", "--quiet", "--out"])
        .arg(dir.path())
        .env("LIFESPAN_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_csv_is_deterministic_and_plots() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = lab(d.path(), &["sweep", "--eps", "0.5,0.45", "--quiet"]);
        // two points cannot satisfy every sweep check; exit 1 means "ran, check failed"
        assert!(matches!(out.status.code(), Some(0 | 1)), "{out:?}");
    }
    let csv_a = fs::read(a.path().join("sweep.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.path().join("sweep.csv")).unwrap());
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    assert_eq!(text.lines().count(), 3);

    let out = lab(a.path(), &["plot", "--quiet"]);
    assert!(out.status.success(), "{out:?}");
    for f in ["sweep_loglog.svg", "sweep_scaled.svg"] {
        assert!(fs::read_to_string(a.path().join(f)).unwrap().starts_with("<svg"));
    }
}

#[test]
fn quiet_suppresses_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = lab(dir.path(), &["bound", "--quiet"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(dir.path().join("bound.json").exists());
}
