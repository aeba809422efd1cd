use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use zmlab_cli::report::{Body, Document};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zmlab"));
    c.env_remove("ZMLAB_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zmlab-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn without_wall_time(json: &str) -> String {
    json.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_s\"")).collect::<Vec<_>>().join("\n")
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["moment"],
        vec!["qdp"],
        vec!["moment", "--T", "1000", "--shifts", "0,0,0,0"],
        vec!["moment", "--T", "abc"],
        vec!["moment", "--T", "-5"],
        vec!["afe", "--shifts", "0.1,0.2"],
        vec!["verify", "--no-such-flag"],
        vec!["frobnicate"],
        vec!["afe", "--T", "10"],
        vec!["moment", "--T", "40"],
    ] {
        assert_eq!(code(&run(&args)), 2, "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let o = run(&["afe", "--T", "30", "--out", "/nonexistent-dir/zmlab/report.json"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["afe", "--coeffs-a", "/nonexistent-dir/a.txt", "--T", "30"])), 3);
}

#[test]
fn tolerance_failure_exits_with_five() {
    // the Z̃ main term is far off at this T; the default comparison uses the constant-Z one
    assert_eq!(code(&run(&["moment", "--T", "60"])), 0);
    assert_eq!(code(&run(&["moment", "--T", "60", "--compare", "thm2"])), 5);
}

#[test]
fn afe_report_round_trips() {
    let d = scratch("afe");
    let out = d.join("afe.json");
    let o = run(&["afe", "--T", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
    let text = read(&out);
    let doc: Document = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    let Body::Afe(a) = &doc.body else { panic!("not an afe body") };
    assert_eq!(a.truncation, 45_000);
    assert!(a.residual.unwrap() < 1e-6);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["version", "seed", "config_digest", "wall_time_s", "lhs", "first", "second", "residual"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["lhs"]["re"].is_f64() && v["lhs"]["im"].is_f64());
    let csv = read(&d.join("afe.csv"));
    assert!(csv.starts_with("quantity,re,im\n"));
    assert_eq!(csv.lines().count(), 5);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn moment_report_schema_and_rerun_is_byte_identical() {
    let d = scratch("moment");
    let (p1, p2) = (d.join("m1.json"), d.join("m2.json"));
    for p in [&p1, &p2] {
        assert_eq!(code(&run(&["moment", "--T", "60", "--out", p.to_str().unwrap()])), 0);
    }
    let (a, b) = (read(&p1), read(&p2));
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    assert_eq!(read(&d.join("m1.csv")), read(&d.join("m2.csv")));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in ["direct_value", "main_term_thm1", "main_term_thm2", "six_term_breakdown", "residual_thm1", "residual_thm2"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["six_term_breakdown"].as_array().unwrap().len(), 6);
    let doc: Document = serde_json::from_str(&a).unwrap();
    assert_eq!(doc.to_json(), a);
    let Body::Moment(m) = &doc.body else { panic!("not a moment body") };
    let sum: (f64, f64) = m.six_term_breakdown.iter().fold((0.0, 0.0), |s, r| (s.0 + r.thm1.re, s.1 + r.thm1.im));
    assert!((sum.0 - m.main_term_thm1.re).abs() <= 1e-9 * m.main_term_thm1.re.abs());
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn flags_override_the_config_file() {
    let d = scratch("config");
    let cfg = d.join("run.json");
    std::fs::write(&cfg, r#"{"T": 1000.0, "shifts": [0.03, -0.02, 0.015, -0.04], "seed": 3}"#).unwrap();
    let out = d.join("r.json");
    let o = run(&["afe", "--config", cfg.to_str().unwrap(), "--T", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Document = serde_json::from_str(&read(&out)).unwrap();
    assert_eq!(doc.seed, 3);
    let Body::Afe(a) = &doc.body else { panic!("not an afe body") };
    assert_eq!(a.t, 30.0);
    assert_eq!(a.shifts, [0.03, -0.02, 0.015, -0.04]);

    std::fs::write(&cfg, r#"{"T": 30.0, "bogus": 1}"#).unwrap();
    assert_eq!(code(&run(&["afe", "--config", cfg.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn coefficient_files_change_the_digest_and_value() {
    let d = scratch("coeffs");
    let a = d.join("a.txt");
    std::fs::write(&a, "1 1.0 0.0\n2 0.5 -0.25\n").unwrap();
    let (p0, p1) = (d.join("p0.json"), d.join("p1.json"));
    assert_eq!(code(&run(&["moment", "--T", "60", "--out", p0.to_str().unwrap()])), 0);
    let o = run(&["moment", "--T", "60", "--coeffs-a", a.to_str().unwrap(), "--coeffs-b", a.to_str().unwrap(), "--out", p1.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let (x, y): (Document, Document) = (serde_json::from_str(&read(&p0)).unwrap(), serde_json::from_str(&read(&p1)).unwrap());
    assert_ne!(x.config_digest, y.config_digest);
    let (Body::Moment(mx), Body::Moment(my)) = (&x.body, &y.body) else { panic!() };
    assert_ne!(mx.direct_value, my.direct_value);

    std::fs::write(&a, "1 1.0\n").unwrap();
    assert_eq!(code(&run(&["moment", "--T", "60", "--coeffs-a", a.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn qdp_runs_and_reports_four_terms() {
    let d = scratch("qdp");
    let out = d.join("q.json");
    let o = run(&["qdp", "--X", "30", "--nodes", "4096", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let doc: Document = serde_json::from_str(&read(&out)).unwrap();
    let Body::Qdp(q) = &doc.body else { panic!("not a qdp body") };
    assert_eq!(q.main_terms.len(), 4);
    assert_eq!((q.Z, q.H, q.enumeration_cutoff), (30.0, 2.0, 900));
    assert!(q.residual.unwrap() < 0.25);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn verify_suite_and_seed() {
    let d = scratch("verify");
    let (p1, p2) = (d.join("v1.json"), d.join("v2.json"));
    assert_eq!(code(&run(&["verify", "--out", p1.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["verify", "--seed", "7", "--out", p2.to_str().unwrap()])), 0);
    let (a, b): (Document, Document) = (serde_json::from_str(&read(&p1)).unwrap(), serde_json::from_str(&read(&p2)).unwrap());
    let (Body::Verify(va), Body::Verify(vb)) = (&a.body, &b.body) else { panic!() };
    assert!(va.failed == 0 && va.passed == va.results.len() && !va.results.is_empty());
    assert_ne!(va.results.iter().map(|r| &r.inputs_digest).collect::<Vec<_>>(), vb.results.iter().map(|r| &r.inputs_digest).collect::<Vec<_>>());
    assert_ne!(a.config_digest, b.config_digest);
    std::fs::remove_dir_all(&d).unwrap();
}

#[test]
fn zeta_cache_is_reused_without_changing_the_report() {
    let d = scratch("cache");
    let cache = d.join("cache");
    let go = |name: &str| {
        let out = d.join(name);
        let o = bin().env("ZMLAB_CACHE_DIR", &cache).args(["moment", "--T", "60", "--out", out.to_str().unwrap()]).output().unwrap();
        assert_eq!(code(&o), 0);
        (read(&out), String::from_utf8_lossy(&o.stderr).into_owned())
    };
    let (a, err_a) = go("c1.json");
    let (b, err_b) = go("c2.json");
    assert!(cache.join("zeta_cache.json").exists());
    assert!(err_a.contains(" 0 hits"), "{err_a}");
    assert!(err_b.contains(" 0 misses"), "{err_b}");
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    assert!(!a.contains("hits"));
    std::fs::remove_dir_all(&d).unwrap();
}
