use std::path::{Path, PathBuf};
use std::process::Command;

use picard_cli::doc::{emit, Document};
use picard_core::verify::{ext_targets, resolution_battery};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn picard(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_picard")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_tmp(name: &str, text: &str) -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn ext_of_z2_by_z2() {
    let z2 = data("z2.json");
    let (code, out, _) = picard(&["ext", s(&z2), s(&z2)]);
    assert_eq!(code, 0);
    assert_eq!(out, "i=1: Z/2, i=0: Z/2, i=-1: 0, i=-2: 0\n");
    let (_, out, _) = picard(&["ext", s(&z2), s(&data("z2_group.json")), "--degree", "1"]);
    assert_eq!(out, "i=1: Z/2\n");
}

#[test]
fn tors_on_a_point_and_the_circle() {
    let (code, out, _) = picard(&["tors", s(&data("point_sheaf.json"))]);
    assert_eq!(code, 0);
    assert_eq!(out, "i=1: 0, i=0: Z/3, i=-1: 0, i=-2: 0\n");
    let (_, out, _) = picard(&["tors", s(&data("pseudo_circle.json")), s(&data("z_deg0.json"))]);
    assert_eq!(out, "i=1: Z, i=0: Z, i=-1: 0, i=-2: 0\n");
}

#[test]
fn snf_cohomology_and_pi() {
    let (code, out, _) = picard(&["snf", s(&data("matrix.json"))]);
    assert_eq!(code, 0);
    assert_eq!(out, "invariant factors: [2, 6]\nrank: 2\n");
    let (_, out, _) = picard(&["cohomology", s(&data("z4_deg_minus1.json"))]);
    assert_eq!(out, "H^-1: Z/4\n");
    let (_, out, _) = picard(&["pi", s(&data("z4_deg_minus1.json"))]);
    assert_eq!(out, "pi0: 0, pi1: Z/4, pi2: 0\n");
}

#[test]
fn invalid_input_exits_1() {
    let (code, _, err) = picard(&["cohomology", s(&data("not_a_complex.json"))]);
    assert_eq!(code, 1);
    assert!(err.contains("d^-2"), "{err}");
    let (code, _, _) = picard(&["ext", "/nonexistent.json", s(&data("z2.json"))]);
    assert_eq!(code, 1);
    let (code, _, _) = picard(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, _) = picard(&["snf", s(&data("z2.json"))]);
    assert_eq!(code, 1);
}

#[test]
fn realize_then_classify() {
    let z2 = data("z2.json");
    let (code, e, _) = picard(&["realize", s(&z2), s(&z2), s(&data("class_one.json"))]);
    assert_eq!(code, 0);
    let e = write_tmp("realized.json", &e);
    let (code, out, _) = picard(&["classify", s(&e)]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(data("class_one.json")).map(|t| {
        emit(&picard_cli::doc::parse(&t).unwrap())
    }).unwrap());
}

/// Exit 0 exactly when every row of the report matches.
#[test]
fn resolve_against_the_battery() {
    let targets = ext_targets();
    for (pi, (pname, p)) in resolution_battery(4).into_iter().enumerate() {
        let pf = write_tmp(&format!("p_{pi}.json"), &emit(&Document::Complex(p.clone())));
        // single-degree members in degree 0 carry a spurious H^-2 in Tot
        let has_degree_zero = p.lo() == 0;
        for (gi, (gname, g)) in targets.iter().enumerate() {
            let gf = write_tmp(&format!("g_{gi}.json"), &emit(&Document::Complex(g.clone())));
            let (code, out, _) = picard(&["resolve", s(&pf), "--against", s(&gf)]);
            if has_degree_zero {
                assert_eq!(code, 2, "{pname} / {gname}\n{out}");
                assert!(out.contains("MISMATCH"));
            } else {
                assert_eq!(code, 0, "{pname} / {gname}\n{out}");
                assert!(!out.contains("MISMATCH"));
            }
        }
    }
}

#[test]
fn resolve_respects_max_order() {
    let p = write_tmp("z6.json", r#"{"kind": "group", "n_gens": 1, "relations": [[6]]}"#);
    let (code, _, err) = picard(&["resolve", s(&p)]);
    assert_eq!(code, 1);
    assert!(err.contains("cap 4"), "{err}");
}

#[test]
fn reports_are_deterministic() {
    let f = data("three_term.json");
    let args = ["resolve", s(&f), "--json"];
    let (a, b) = (picard(&args), picard(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert!(a.1.contains("\"kind\": \"report\""));
}

#[test]
fn verify_all_reports_every_criterion() {
    let (code, out, _) = picard(&["verify-all", "--json"]);
    // criteria 6 and 7 fail on the strict model
    assert_eq!(code, 2);
    assert_eq!(out.matches("\"id\"").count(), 9);
    let (_, again, _) = picard(&["verify-all", "--json"]);
    assert_eq!(out, again);
}
