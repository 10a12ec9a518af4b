use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use concentra::grid::read_gset;

fn concentra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concentra")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, body: &[u8]) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn compute_disc_is_near_equality() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "disc.json", br#"{"kind":"disc","parameters":{"radius":1.0},"h":0.01}"#);
    let v = json(&concentra(&["compute", "--input", &spec, "--r", "1"]));
    let tol = v["diagnostics"]["tol_disc"].as_f64().unwrap();
    assert!(v["delta_r"].as_f64().unwrap().abs() <= tol);
    for key in ["r_E", "r", "delta_r", "alpha", "alpha_center", "delta_iso", "beta", "beta_star", "beta_center", "h"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn compute_ellipse_asymmetry_band() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "e.json", br#"{"kind":"ellipse","parameters":{"epsilon":0.1},"h":0.01}"#);
    let alpha = json(&concentra(&["compute", "--input", &spec, "--r", "1"]))["alpha"].as_f64().unwrap();
    assert!((0.05..=0.25).contains(&alpha), "{alpha}");
}

#[test]
fn compute_accepts_gset_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = b"GSET1\nh=0.1\norigin=0 0\ndims=12 12\n".to_vec();
    body.extend((0..144).map(|k| u8::from((1..11).contains(&(k % 12)) && (1..11).contains(&(k / 12)))));
    let path = write(dir.path(), "block.gset", &body);
    let v = json(&concentra(&["compute", "--input", &path, "--r", "0.1"]));
    assert!((v["diagnostics"]["area"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.txt", b"not a set");
    let out = concentra(&["compute", "--input", &path, "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let trunc = write(dir.path(), "trunc.gset", b"GSET1\nh=0.1\norigin=0 0\ndims=3 3\n\x01");
    assert_eq!(concentra(&["compute", "--input", &trunc, "--r", "1"]).status.code(), Some(2));
}

#[test]
fn empty_set_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = b"GSET1\nh=0.1\norigin=0 0\ndims=2 2\n".to_vec();
    body.extend([0; 4]);
    let path = write(dir.path(), "empty.gset", &body);
    let out = concentra(&["compute", "--input", &path, "--r", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_smoke_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = concentra(&[
            "sweep", "--corpus", "smoke", "--h", "0.01", "--r-grid", "0.1,1,10", "--out", out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (fs::read(out_dir.join("sweep.csv")).unwrap(), fs::read(out_dir.join("summary.json")).unwrap())
    };
    let (csv, summary) = run("a");
    let text = String::from_utf8(csv.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "shape_id,h,r,r_E,delta_r,alpha,alpha_cx,alpha_cy,delta_iso,beta,beta_star,ratio_alpha2_over_delta"
    );
    assert_eq!(lines.count(), 18);
    let s: serde_json::Value = serde_json::from_slice(&summary).unwrap();
    assert!(s["empirical_C_main"].as_f64().is_some_and(f64::is_finite));
    assert!(s["ellipse_slope"].is_null());
    assert_eq!(run("b").0, csv);
}

#[test]
fn sweep_rejects_unknown_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = concentra(&["sweep", "--corpus", "nope", "--h", "0.01", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_smoke_passes_and_reports_timing() {
    let out = concentra(&["verify", "--level", "smoke"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    for name in ["edt brute force", "closing idempotence", "coarea consistency", "steiner residuals", "polylem"] {
        assert!(text.lines().any(|l| l.starts_with(name) && l.contains("PASS")), "{name}\n{text}");
    }
    assert!(text.contains("seconds"));
}

#[test]
fn verify_catches_open_dilation_threshold() {
    let out = concentra(&["verify", "--level", "smoke", "--dilation-threshold", "open"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("closing idempotence"));
}

#[test]
fn polylem_table() {
    let out = concentra(&["polylem", "--max-n", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success());
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("0.0625"));
    let v = json(&concentra(&["polylem", "--max-n", "1", "--json"]));
    assert_eq!(v[1]["N"], 1);
    assert_eq!(v[1]["c_exact"], "1/4");
}

#[test]
fn envelope_writes_a_superset() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = b"GSET1\nh=0.1\norigin=0 0\ndims=5 3\n".to_vec();
    body.extend([1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1]);
    let input = write(dir.path(), "notch.gset", &body);
    let out_path = dir.path().join("env.gset");
    let out = concentra(&["envelope", "--input", &input, "--r", "0.3", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let env = read_gset(fs::File::open(&out_path).unwrap()).unwrap();
    let e = read_gset(body.as_slice()).unwrap();
    assert!(e.is_subset_of(&env).unwrap());
    // the slot's inner cell fills; a lattice ball still reaches the cell at its mouth
    assert_eq!(env.count(), 14);
    assert!(env.contains_point(concentra::Point::new(0.2, 0.1)));
    assert!(!env.contains_point(concentra::Point::new(0.2, 0.0)));
}

#[test]
fn thread_count_from_environment() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_concentra"))
            .args(["polylem", "--max-n", "1"])
            .env("CONCENTRA_THREADS", v)
            .output()
            .unwrap()
    };
    assert!(run("1").status.success());
    assert_eq!(run("zero").status.code(), Some(2));
}
