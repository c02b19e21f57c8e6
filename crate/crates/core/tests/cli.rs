use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use tempfile::TempDir;
use tplane::cli::run;
use tplane::lp::{lp_census, lp_poly, LpParams};
use tplane::spread::spread_from_poly;
use tplane::{FieldTower, LinearizedPoly, SearchOptions};

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn exec(args: &[&Path], extra: &[&str]) -> (i32, Option<Value>) {
    let mut argv: Vec<String> = vec!["tplane".into()];
    argv.extend(extra.iter().map(|s| s.to_string()));
    argv.extend(args.iter().map(|p| p.display().to_string()));
    let (code, report) = run(argv);
    (code, report.map(|r| r.results))
}

fn cmd(command: &str, field: &Path, polys: &[&Path], flags: &[&str], out: &Path) -> (i32, String) {
    let mut argv: Vec<String> = vec!["tplane".into(), command.into(), "--field".into(), field.display().to_string()];
    for p in polys {
        argv.push("--poly".into());
        argv.push(p.display().to_string());
    }
    argv.extend(flags.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    let (code, _) = run(argv);
    (code, fs::read_to_string(out).unwrap_or_default())
}

fn results(text: &str) -> Value {
    let v: Value = serde_json::from_str(text).unwrap();
    v["results"].clone()
}

#[test]
fn scattered_on_frobenius() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":5}"#);
    let poly = w.file("p.json", r#"{"coeffs":["0","1","0","0","0"]}"#);
    let (code, text) = cmd("scattered", &field, &[&poly], &[], &w.out("o.json"));
    assert_eq!(code, 0);
    assert_eq!(results(&text), json!({"scattered": true}));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "scattered");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v.get("timing_ms").is_none());

    let id = w.file("id.json", r#"{"coeffs":["1","0","0","0","0"]}"#);
    let (code, text) = cmd("scattered", &field, &[&id], &[], &w.out("o2.json"));
    assert_eq!(code, 1);
    assert_eq!(results(&text), json!({"scattered": false}));
}

#[test]
fn equiv_and_stab_at_q4_t5() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":5}"#);
    let p1 = w.file("p1.json", r#"{"coeffs":["0","1","0","0","0"]}"#);
    let p2 = w.file("p2.json", r#"{"coeffs":["0","0","1","0","0"]}"#);
    let p4 = w.file("p4.json", r#"{"coeffs":["0","0","0","0","1"]}"#);
    let (code, text) = cmd("equiv", &field, &[&p1, &p2], &[], &w.out("a.json"));
    assert_eq!(code, 1);
    assert_eq!(results(&text)["equivalent"], false);
    let (code, text) = cmd("equiv", &field, &[&p1, &p4], &[], &w.out("b.json"));
    assert_eq!(code, 0);
    assert_eq!(results(&text)["equivalent"], true);
    assert!(results(&text)["witness"]["matrix"].is_array());

    let lp = w.file("lp.json", r#"{"coeffs":["0","1","0","0","g^1"]}"#);
    let (code, text) = cmd("stab", &field, &[&lp], &["--group", "GL"], &w.out("c.json"));
    assert_eq!(code, 0);
    assert_eq!(results(&text)["order"], 1023);
}

#[test]
fn reports_are_byte_identical() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":3}"#);
    let poly = w.file("p.json", r#"{"coeffs":["0","1","g^1"]}"#);
    for command in ["spread", "quasifield", "plane"] {
        let (c1, t1) = cmd(command, &field, &[&poly], &[], &w.out("1.json"));
        let (c2, t2) = cmd(command, &field, &[&poly], &["--workers", "3"], &w.out("2.json"));
        assert_eq!((c1, c2), (0, 0), "{command}");
        assert_eq!(t1, t2, "{command}");
        assert!(t1.ends_with('\n'));
    }
}

#[test]
fn results_equal_library_output() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":3}"#);
    let poly = w.file("p.json", r#"{"coeffs":["0","1","g^1"]}"#);
    let tower = FieldTower::with_default(2, 2, 3).unwrap();
    let f = lp_poly(&tower, LpParams::new(tower.exp(1), 1)).unwrap();
    let (_, text) = cmd("spread", &field, &[&poly], &[], &w.out("s.json"));
    let expected = serde_json::to_value(spread_from_poly(&tower, &f).unwrap().report(&tower)).unwrap();
    assert_eq!(results(&text), expected);

    let field45 = w.file("f45.json", r#"{"p":2,"e":2,"t":5}"#);
    let (code, text) = cmd("lp-census", &field45, &[], &["--s", "1"], &w.out("c.json"));
    assert_eq!(code, 0);
    let tower45 = FieldTower::with_default(2, 2, 5).unwrap();
    let expected = serde_json::to_value(lp_census(&tower45, Some(1), SearchOptions::default()).unwrap()).unwrap();
    assert_eq!(results(&text), expected);
    let r = results(&text);
    assert_eq!((r["classes"].clone(), r["theorem_count"].clone(), r["lower_bound"].clone()), (json!(1), json!(1), json!(2)));
    assert_eq!(r["total_classes"], 2);
    assert_eq!(r["agree_solver_vs_ejj"], true);
}

#[test]
fn quasifield_normalizes_input() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":3}"#);
    // x^q has 1 in its linear set
    let poly = w.file("p.json", r#"{"coeffs":["0","1","0"]}"#);
    let (code, text) = cmd("quasifield", &field, &[&poly], &[], &w.out("q.json"));
    assert_eq!(code, 0);
    let r = results(&text);
    assert_eq!(r["kernel_order"], 4);
    assert_eq!(r["loop"], true);
    assert_ne!(r["poly"]["coeffs"], json!(["0", "1", "0"]));
    let tower = FieldTower::with_default(2, 2, 3).unwrap();
    let json: tplane::linpoly::PolyJson = serde_json::from_value(r["poly"].clone()).unwrap();
    let g = LinearizedPoly::from_json(&tower, &json).unwrap();
    let ls = g.linear_set(&tower).unwrap();
    assert!(!ls.contains(tplane::Elem::ZERO) && !ls.contains(tplane::Elem::ONE));
}

#[test]
fn andre_and_pseudoregulus_commands() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":3}"#);
    let (code, text) = cmd("andre-check", &field, &[], &[], &w.out("a.json"));
    assert_eq!(code, 0);
    assert_eq!(results(&text)["checked"], 42);
    let field45 = w.file("f45.json", r#"{"p":2,"e":2,"t":5}"#);
    let (code, text) = cmd("pseudoregulus-class", &field45, &[], &[], &w.out("p.json"));
    assert_eq!(code, 0);
    assert_eq!(results(&text)["orbits"], json!([[1, 4], [2, 3]]));
}

#[test]
fn plane_direct_mode() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":2}"#);
    let poly = w.file("p.json", r#"{"coeffs":["0","g^1"]}"#);
    let (code, text) = cmd("plane", &field, &[&poly], &["--mode", "direct"], &w.out("p.json"));
    assert_eq!(code, 0);
    let r = results(&text);
    assert_eq!((r["points"].clone(), r["lines"].clone()), (json!(256), json!(272)));
    assert_eq!(r["affine_axioms"], "pass");
}

#[test]
fn usage_and_spec_errors_exit_2() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":2,"e":2,"t":3}"#);
    let good = w.file("g.json", r#"{"coeffs":["0","1","0"]}"#);
    let short = w.file("s.json", r#"{"coeffs":["0","1"]}"#);
    let negative = w.file("n.json", r#"{"coeffs":["0","g^-1","0"]}"#);
    let extra = w.file("x.json", r#"{"p":2,"e":2,"t":3,"colour":1}"#);
    let out = w.out("o.json");
    assert_eq!(cmd("scattered", &field, &[&short], &[], &out).0, 2);
    assert_eq!(cmd("scattered", &field, &[&negative], &[], &out).0, 2);
    assert_eq!(cmd("scattered", &extra, &[&good], &[], &out).0, 2);
    assert_eq!(cmd("scattered", &field, &[&good], &["--group", "SL"], &out).0, 2);
    assert_eq!(cmd("equiv", &field, &[&good], &[], &out).0, 2);
    assert_eq!(exec(&[], &["frobnicate"]).0, 2);
    let missing = w.out("missing.json");
    assert_eq!(cmd("scattered", &missing, &[&good], &[], &out).0, 2);
    let unwritable = w.dir.path().join("no/such/dir/o.json");
    assert_eq!(cmd("scattered", &field, &[&good], &[], &unwritable).0, 2);
    // default modulus applies when "modulus" is absent
    assert_eq!(cmd("scattered", &field, &[&good], &[], &out).0, 0);
}

#[test]
fn guard_needs_force() {
    let w = Work::new();
    let field = w.file("f.json", r#"{"p":5,"e":1,"t":5}"#);
    let poly = w.file("p.json", r#"{"coeffs":["0","1","0","0","0"]}"#);
    let out = w.out("o.json");
    assert_eq!(cmd("equiv", &field, &[&poly, &poly], &[], &out).0, 2);
    assert_eq!(cmd("equiv", &field, &[&poly, &poly], &["--force"], &out).0, 0);
}
