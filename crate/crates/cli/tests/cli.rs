use std::process::{Command, Output};

fn detrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_then_verify_from_file() {
    let dir = std::env::temp_dir().join(format!("detrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("regular4.json");
    let out = detrep(&["build", "regular-det", "--m", "4", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let out = detrep(&["verify", "--input", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["construction"], "regular-det");
    assert_eq!(v["n"], 15);
    assert_eq!(v["verdict"], "pass");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn tampered_input_fails_verification() {
    let json = stdout(&detrep(&["build", "grenet", "--m", "3"]));
    let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    doc["linear"][0]["coeff"] = serde_json::json!(2);
    let path = std::env::temp_dir().join(format!("detrep-tampered-{}.json", std::process::id()));
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = detrep(&["verify", "--input", path.to_str().unwrap(), "--mode", "pit"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL identity"));
    std::fs::remove_file(path).ok();
}

#[test]
fn right_action_on_grenet_fails_with_exit_one() {
    let out = detrep(&["verify", "grenet", "--m", "2", "--equivariance", "full", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let right = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "equivariance-right")
        .unwrap();
    assert_eq!(right["verdict"], "fail");
    assert_eq!(right["witness"]["kind"], "obstruction");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["build", "grenet", "--m", "1"][..],
        &["build", "nonsense", "--m", "3"],
        &["verify", "grenet"],
        &["bench", "--m-range", "5..2"],
        &["bench", "--strategies", "bogus"],
    ] {
        assert_eq!(detrep(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn equivariance_needs_a_square_argument() {
    assert_eq!(detrep(&["verify", "quadric-half", "--m", "2", "--equivariance", "left"]).status.code(), Some(2));
}

#[test]
fn symbolic_bound_is_configurable() {
    let out = Command::new(env!("CARGO_BIN_EXE_detrep"))
        .args(["verify", "grenet", "--m", "3", "--mode", "symbolic"])
        .env("DETREP_SYMBOLIC_BOUND", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_csv_and_json_agree_on_checksums() {
    let csv = stdout(&detrep(&["bench", "--m-range", "2..5", "--trials", "4"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("construction,m,n,strategy,trials,median_ns,checksum"));
    let csv_sums: Vec<String> = lines.map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
    let json = stdout(&detrep(&["bench", "--m-range", "2..5", "--trials", "4", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let json_sums: Vec<String> = rows.iter().map(|r| r["checksum"].to_string()).collect();
    assert_eq!(csv_sums, json_sums);
    assert!(rows.iter().all(|r| r.get("median_ns").is_none()));
    let path = rows.iter().find(|r| r["strategy"] == "pencil-path" && r["m"] == 5).unwrap();
    assert_eq!(path["ops"], 80);
}

#[test]
fn naive_is_refused_above_its_limit() {
    let out = detrep(&["bench", "--m-range", "11", "--strategies", "ryser,naive", "--trials", "1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["refused"][0]["strategy"], "naive");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn waring_build_lists_all_terms() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&detrep(&["build", "waring", "--n", "3", "--symmetric"]))).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 8);
    assert_eq!(detrep(&["verify", "waring", "--n", "5"]).status.code(), Some(0));
}

#[test]
fn every_construction_verifies() {
    for (name, m) in [
        ("grenet", "4"),
        ("regular-det", "3"),
        ("equivariant-perm", "3"),
        ("equivariant-det", "2"),
        ("quadric-half", "4"),
        ("quadric-full", "4"),
        ("trivial-det", "3"),
    ] {
        let square = !name.starts_with("quadric");
        let mut args = vec!["verify", name, "--m", m];
        if square {
            args.extend(["--equivariance", "left"]);
        }
        let out = detrep(&args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
}
