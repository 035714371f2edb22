use std::collections::HashSet;

use fracinv::verify::{report_json, run_check, run_suite, Suite, MANIFEST};

#[test]
fn same_seed_same_report() {
    let a = run_suite(Suite::Legendre, 42);
    let b = run_suite(Suite::Legendre, 42);
    assert_eq!(report_json(&a), report_json(&b));
}

#[test]
fn seed_changes_sampled_points() {
    let a = run_check("three_term_b", 1).unwrap();
    let b = run_check("three_term_b", 2).unwrap();
    assert_ne!(a.measured, b.measured);
}

#[test]
fn manifest_names_each_check_once() {
    let names: HashSet<&str> = MANIFEST.iter().map(|m| m.1).collect();
    assert_eq!(names.len(), MANIFEST.len());
    assert!(run_check("no_such_check", 42).is_none());
}

#[test]
fn report_is_a_json_array_of_results() {
    let r = run_suite(Suite::Legendre, 42);
    let v: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), r.len());
    for key in ["name", "passed", "measured", "threshold", "details"] {
        assert!(arr[0].get(key).is_some(), "missing {key}");
    }
}
