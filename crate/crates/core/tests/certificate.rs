use fibthue::pipeline::{run_all, verify_certificate, Certificate, Config, Cover, Covered, Provenance};
use num_bigint::BigInt;

fn partial(max_n: u64) -> Certificate {
    run_all(&Config { max_n: Some(max_n), ..Config::default() }).unwrap()
}

#[test]
fn partial_run_is_deterministic() {
    let a = partial(14).to_json().unwrap();
    let b = partial(14).to_json().unwrap();
    assert_eq!(a, b);
}

#[test]
fn json_has_no_bare_numbers() {
    let json = partial(11).to_json().unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    fn walk(v: &serde_json::Value, path: &str) {
        match v {
            serde_json::Value::Number(x) => {
                // The two informational float constants of each step are the
                // only numbers allowed.
                assert!(path.ends_with(".c2") || path.ends_with(".c3"), "bare number {x} at {path}");
            }
            serde_json::Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(x, &format!("{path}[{i}]"))),
            serde_json::Value::Object(o) => o.iter().for_each(|(k, x)| walk(x, &format!("{path}.{k}"))),
            _ => {}
        }
    }
    walk(&v, "");
    assert!(v["schema_version"].is_string());
}

#[test]
fn tampering_is_caught() {
    let good = partial(12);
    assert!(verify_certificate(&good).is_ok());

    let mut bad = good.clone();
    bad.solved.get_mut(&3).unwrap().solutions.solutions[0].y += 1;
    assert!(verify_certificate(&bad).is_err());

    // Dropping the non-trivial pair of n = 3 fails the box re-enumeration.
    let mut bad = good.clone();
    bad.solved.get_mut(&3).unwrap().solutions.solutions.retain(|s| s.y.magnitude() <= &1u32.into());
    assert!(verify_certificate(&bad).is_err());

    let mut bad = good.clone();
    bad.coverage = vec![Covered { lo: 1, hi: 5, by: Cover::Solved }, Covered { lo: 7, hi: 12, by: Cover::Solved }];
    assert!(verify_certificate(&bad).is_err());

    let mut bad = good.clone();
    let st = &mut bad.evidence.boxes[0].chains[0][0];
    st.c4_sq = &st.c4_sq * BigInt::from(1000);
    assert!(verify_certificate(&bad).is_err());

    let mut bad = good.clone();
    bad.solved.get_mut(&11).unwrap().provenance = Provenance::OracleVerified;
    assert!(verify_certificate(&bad).is_err());

    let mut bad = good;
    bad.schema_version = 99;
    assert!(verify_certificate(&bad).is_err());
}

#[test]
fn partial_coverage_and_exceptions() {
    let cert = partial(20);
    assert!(cert.partial);
    assert_eq!(cert.covered_up_to(), 20);
    assert_eq!(cert.exceptional(), vec![1, 3]);
    for (n, s) in &cert.solved {
        let expect = if *n < 10 { Provenance::OracleVerified } else { Provenance::ReductionCertified };
        assert_eq!(s.provenance, expect, "n = {n}");
    }
}
