use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel).display().to_string()
}

fn orbk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbk")).args(args).output().expect("binary runs")
}

fn result(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    v["result"].clone()
}

#[test]
fn trring_of_klein_four_has_total_rank_five() {
    let out = orbk(&["trring", &fixture("groups/v4.json"), "--modulus", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["total_rank"], 5);
    assert_eq!(r["ranks"], serde_json::json!([4, 1]));
}

#[test]
fn cyclic_group_has_trivial_h2() {
    let out = orbk(&["h2", &fixture("groups/c5.json"), "--modulus", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = result(&out);
    assert_eq!(r["trivial"], true);
    assert_eq!(r["order"], 1);
}

#[test]
fn small_suite_passes() {
    let out = orbk(&["verify", "--suite", "small"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = result(&out);
    assert_eq!(r["passed"], true);
    assert_eq!(r["failures"], serde_json::json!([]));
    assert!(r["agreements"].as_array().unwrap().iter().all(|a| a["agree"] == true));
}

#[test]
fn tampered_sector_file_is_flagged() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("tampered");
    std::fs::create_dir_all(dir.join("sectors")).unwrap();
    let original = std::fs::read_to_string(fixture("sectors/cp_2_3.json")).unwrap();
    let mut data: Value = serde_json::from_str(&original).unwrap();
    data["sectors"][0]["betti"] = serde_json::json!([1, 0, 2]);
    std::fs::write(dir.join("sectors/cp_2_3.json"), data.to_string()).unwrap();

    let out = orbk(&["verify", "--suite", "small", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = result(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["replaced_fixtures"], serde_json::json!(["sectors/cp_2_3"]));
    let failures = r["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1, "{failures:#?}");
    assert_eq!(failures[0]["fixture"], "sectors/cp_2_3");
    assert_eq!(failures[0]["left"], "KRank { k0: 6, k1: 0 }");
    assert_eq!(failures[0]["right"], "KRank { k0: 5, k1: 0 }");
}

#[test]
fn unknown_fixture_override_is_rejected() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("unknown-override");
    std::fs::create_dir_all(dir.join("sectors")).unwrap();
    std::fs::write(dir.join("sectors/nope.json"), "{}").unwrap();
    let out = orbk(&["verify", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validation_errors_exit_with_one_and_name_the_path() {
    assert_eq!(orbk(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(orbk(&["group", "S3", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(orbk(&["group", "not-a-group"]).status.code(), Some(1));
    assert_eq!(orbk(&["verify", "--suite", "huge"]).status.code(), Some(1));

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bad-group.json");
    std::fs::write(&path, r#"{"points": 3, "generators": [[1, 0, 2], [0, "x", 2]]}"#).unwrap();
    let out = orbk(&["group", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generators[1][1]"), "{err}");

    let out = orbk(&["korb", "S3", &fixture("complexes/hexagon_v4.json")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(orbk(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "korb",
        &fixture("groups/hexagon_v4.json"),
        &fixture("complexes/hexagon_v4.json"),
        "--cocycle",
        "1",
        "--modulus",
        "2",
    ];
    let a = orbk(&args);
    let b = orbk(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut one_job = vec!["--jobs", "1"];
    one_job.extend_from_slice(&args);
    assert_eq!(result(&orbk(&one_job)), result(&a));

    let verify_a = orbk(&["verify"]);
    let verify_b = orbk(&["verify"]);
    assert_eq!(verify_a.stdout, verify_b.stdout);
}

#[test]
fn v4_circle_ranks_and_euler_characteristic() {
    let g = fixture("groups/hexagon_v4.json");
    let x = fixture("complexes/hexagon_v4.json");
    let mut total = 0;
    for class in ["0", "1"] {
        let out = orbk(&["korb", &g, &x, "--cocycle", class, "--modulus", "2"]);
        let k = result(&out);
        let bredon = result(&orbk(&["bredon", &g, &x, "--cocycle", class, "--modulus", "2"]));
        assert_eq!((k["k0"].clone(), k["k1"].clone()), (bredon["k0"].clone(), bredon["k1"].clone()));
        let chi = result(&orbk(&["chiorb", &g, &x, "--cocycle", class, "--modulus", "2"]));
        assert_eq!(chi["chi_orb"], k["euler"]);
        total += k["euler"].as_i64().unwrap();
    }
    assert_eq!(total, 6);
}

#[test]
fn sectors_commands() {
    let r = result(&orbk(&["sectors", &fixture("sectors/hyperbolic_g2_3_3_3.json")]));
    assert_eq!((r["k0"].as_u64(), r["k1"].as_u64()), (Some(8), Some(4)));

    let r = result(&orbk(&["sectors-of", &fixture("groups/s4.json"), &fixture("complexes/point_s4.json")]));
    assert_eq!(r["resolution"].as_array().unwrap().len(), 4);
    assert_eq!(r["k0"], 5);
}

#[test]
fn symprod_report_rows() {
    let out = orbk(&["symprod", "--n", "5", "--chi", "-2", "--report"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = result(&out)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["untwisted_match"] == true));

    let v = result(&orbk(&["symprod", "--n", "4", "--chi", "1", "--twisted"]));
    assert_eq!(v["euler"], 3);
}

#[test]
fn character_tables_use_exact_coefficients() {
    let r = result(&orbk(&["chartable", "C3"]));
    assert_eq!(r["degrees"], serde_json::json!([1, 1, 1]));
    let row = r["rows"][1].as_array().unwrap();
    assert!(row.iter().all(|v| v["level"].is_u64() && v["coeffs"].is_array()));

    let r = result(&orbk(&["chartable", "V4", "--cocycle", "1", "--modulus", "2"]));
    assert_eq!(r["degrees"], serde_json::json!([2]));

    let text = orbk(&["chartable", "C3", "--text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("z"));
}
