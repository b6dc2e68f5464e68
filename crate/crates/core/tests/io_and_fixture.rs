mod support;

use std::fs;

use moufang::associator::{check_identities, check_inner_automorphism, DEFAULT_EXPONENTS};
use moufang::catalog::{cyclic, elem_abelian_3, fixture_non_moufang, parse_loop_json, to_loop_json};
use moufang::theorems::{run_theorem_suite, CheckStatus};
use moufang::*;
use support::oracle;

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for l in [cml81().unwrap(), cyclic(15).unwrap(), elem_abelian_3(2).unwrap(), fixture_non_moufang()] {
        let path = dir.path().join("loop.json");
        save(&l, &path).unwrap();
        let back = load(&path).unwrap();
        assert_eq!(back.table.rows(), l.rows());
        assert_eq!(back.table.name(), l.name());
        assert_eq!(fs::read_to_string(&path).unwrap(), to_loop_json(&back.table));
    }
}

#[test]
fn abelian_file_reports_all_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c9.json");
    fs::write(&path, to_loop_json(&cyclic(9).unwrap())).unwrap();
    let r = load(&path).unwrap().report;
    assert!(r.latin_square && r.identity_ok && r.commutative && r.moufang);
    assert!(r.first_failure.is_none());
}

#[test]
fn identity_elsewhere_is_an_input_error() {
    // Z/3 relabelled so that 2 is the identity
    let text = r#"{"order": 3, "table": [[1,2,0],[2,0,1],[0,1,2]]}"#;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shifted.json");
    fs::write(&path, text).unwrap();
    let err = load(&path).unwrap_err();
    assert!(err.is_input());
    assert!(err.to_string().contains("identity must be index 0"), "{err}");
    assert!(err.to_string().contains('2'));
}

#[test]
fn malformed_files() {
    for text in [
        "not json",
        r#"{"order": 2, "table": [[0,1]]}"#,
        r#"{"order": 2, "table": [[0,1],[1]]}"#,
        r#"{"order": 2, "table": [[0,1],[1,2]]}"#,
        r#"{"order": 0, "table": []}"#,
    ] {
        let e = parse_loop_json(text).unwrap_err();
        assert!(e.is_input(), "{text}: {e:?}");
    }
    let e = load("/nonexistent/loop.json").unwrap_err();
    assert!(matches!(e, Error::Io { .. }));
    assert!(e.is_input());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("latin.json");
    fs::write(&path, r#"{"order": 2, "table": [[0,1],[0,1]]}"#).unwrap();
    assert!(load(&path).unwrap_err().is_input());
}

#[test]
fn fixture_is_a_commutative_loop_that_fails_moufang() {
    let f = fixture_non_moufang();
    assert_eq!(f.order(), 6);
    let r = verify_cml(&f);
    assert!(r.latin_square && r.identity_ok && r.commutative);
    assert!(!r.moufang);
    let failure = r.first_failure.unwrap();
    assert_eq!(failure.property, "moufang");
    let [x, y, z] = failure.tuple[..] else { panic!("moufang witness is a triple") };
    let rows = f.rows();
    let m = |a: usize, b: usize| rows[a][b];
    assert_ne!(m(m(x, y), m(x, z)), m(m(x, x), m(y, z)));
}

#[test]
fn fixture_yields_identity_witnesses() {
    let f = fixture_non_moufang();
    let limits = Limits::default();
    let r = check_identities(&f, &DEFAULT_EXPONENTS, &limits);
    assert!(!r.passed());
    assert!(!r.witnesses.is_empty());
    for w in &r.witnesses {
        assert_ne!(w.lhs, w.rhs);
    }
    let rows = f.rows();
    for w in r.witnesses.iter().filter(|w| w.identity.label() == "1.4") {
        let [a, b, c] = w.tuple[..] else { panic!() };
        let t = oracle::associator(&rows, a, b, c);
        assert_eq!(w.lhs, oracle::power(&rows, t, 3));
    }
    let inner = check_inner_automorphism(&f, &limits);
    assert!(!inner.passed());
    assert!(!inner.witnesses.is_empty());

    let suite = run_theorem_suite(&f, &limits);
    assert!(!suite.passed());
    let structural: Vec<_> = suite.checks.iter().skip(2).collect();
    assert!(structural.iter().all(|c| c.status == CheckStatus::SkippedPrecondition));
}

#[test]
fn theorem_suite_on_catalog() {
    let limits = Limits::default();
    for spec in ["cml81", "cyclic:9", "elem3:3", "product:cyclic:5,cml81", "trivial"] {
        let l = build(&spec.parse().unwrap()).unwrap();
        let r = run_theorem_suite(&l, &limits);
        assert!(
            r.passed(),
            "{spec}: {:?}",
            r.checks.iter().filter(|c| c.status == CheckStatus::Violation).collect::<Vec<_>>()
        );
    }
}
