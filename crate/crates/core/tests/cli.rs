use std::process::Command;

use serde_json::Value;

fn shukla(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_shukla")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = shukla(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn hc_text_output() {
    let (code, out, _) = shukla(&["hc", "--ring", "zmod:3^2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().filter(|l| l.starts_with("HC_")).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "HC_0 = Z/9");
    assert_eq!(lines[4], "HC_4 = Z/729");
    assert_eq!(lines[5], "HC_5 = 0");
}

#[test]
fn json_schema() {
    let v = json(&["hh", "--ring", "zmod:5^2"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "hh");
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let d = row["degree"].as_i64().unwrap();
        assert_eq!(row["free_rank"], 0);
        let factors: Vec<&str> = row["invariant_factors"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert_eq!(factors, if d % 2 == 0 { vec!["25"] } else { vec![] });
        assert!(row["flags"].is_array());
        assert!(row["provenance"].is_array());
    }
}

#[test]
fn big_orders_are_strings() {
    let v = json(&["hc", "--ring", "zmod:7^3"]);
    let last_even = &v["results"][12]["invariant_factors"][0];
    assert_eq!(last_even.as_str().unwrap(), num_bigint::BigInt::from(7).pow(21).to_string());
}

#[test]
fn relative_and_k_groups() {
    let v = json(&["rel-hc", "--ring", "zmod:5^2"]);
    assert_eq!(v["results"][2]["invariant_factors"][0], "25");
    let v = json(&["k-groups", "--p", "7", "--n", "3"]);
    let k3 = &v["results"][2];
    assert_eq!(k3["degree"], 3);
    assert_eq!(k3["invariant_factors"][0], (7u64.pow(4) * 48).to_string());
}

#[test]
fn range_guard() {
    let (code, _, err) = shukla(&["hc", "--ring", "zmod:3^2", "--max-degree", "7"]);
    assert_eq!(code, 3, "{err}");
    let v = json(&["hc", "--ring", "zmod:3^2", "--max-degree", "7", "--allow-unverified"]);
    let flags = v["results"][7]["flags"].as_array().unwrap();
    assert!(flags.iter().any(|f| f == "UNVERIFIED"));
    assert!(v["results"][5]["flags"].as_array().unwrap().iter().all(|f| f != "UNVERIFIED"));
}

#[test]
fn exit_codes() {
    assert_eq!(shukla(&["--help"]).0, 0);
    assert_eq!(shukla(&["hc"]).0, 2);
    assert_eq!(shukla(&["hc", "--ring", "zmod:6^2"]).0, 2);
    assert_eq!(shukla(&["k-groups", "--p", "3", "--n", "2"]).0, 3);
    assert_eq!(shukla(&["hc", "--ring", "/nonexistent/ring.toml"]).0, 4);
}

#[test]
fn ring_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.toml");
    std::fs::write(&path, shukla::dga::dga_to_toml(&shukla::dga::koszul_resolution(&8.into()).unwrap())).unwrap();
    let v = json(&["hh", "--ring", path.to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
    assert_eq!(v["results"][2]["invariant_factors"][0], "8");
}

#[test]
fn gr_check_passes() {
    let (code, out, _) = shukla(&["gr-check", "--ring", "zmod:2^3", "--max-q", "2"]);
    assert_eq!(code, 0);
    assert!(out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).all(|l| l.starts_with("PASS")));
}

#[test]
fn reproduce_paper_is_deterministic() {
    let a = shukla(&["reproduce-paper", "--p", "3", "5", "--n", "1", "2"]);
    let b = shukla(&["reproduce-paper", "--p", "3", "5", "--n", "1", "2"]);
    assert_eq!(a, b);
    let fails: Vec<&str> = a.1.lines().filter(|l| l.starts_with("FAIL")).collect();
    // relative HC in degree 2p - 1 is Z/p, not 0
    assert_eq!(fails.len(), 2, "{fails:?}");
    assert_eq!(a.0, 1);
}
