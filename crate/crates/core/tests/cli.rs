use std::process::{Command, Output};

fn brickrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brickrank"))
        .args(args)
        .env_remove("BRICKRANK_GUARD_OVERRIDE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn minimal_set_examples() {
    let out = brickrank(&["minimal-set", "25x3", "9x8", "16x5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1x1\nrank 1\n");

    let out = brickrank(&["--format", "json", "minimal-set", "2x3x7", "3x7x2", "7x2x3"]);
    let v = json(&out);
    assert_eq!(v["rank"], 15);
    assert_eq!(v["bricks"].as_array().unwrap().len(), 15);

    assert_eq!(stdout(&brickrank(&["minimal-set", "5x5"])), "5x5\nrank 1\n");
    let out = brickrank(&["minimal-set", "--no-prune", "25x3", "9x8", "16x5"]);
    assert_eq!(stdout(&out), "1x1\nrank 1\n");
    let out = brickrank(&["minimal-set", "(w)x(w)", "(x)x(x)"]);
    assert!(stdout(&out).ends_with("rank 4\n"));
}

#[test]
fn minimal_set_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("p.txt");
    std::fs::write(&lines, "# figure one\n25x3\n9x8\n\n16x5\n").unwrap();
    let out = brickrank(&["minimal-set", "--input", lines.to_str().unwrap()]);
    assert_eq!(stdout(&out), "1x1\nrank 1\n");
    let list = dir.path().join("p.json");
    std::fs::write(&list, r#"["2x3x7", "3x7x2", "7x2x3"]"#).unwrap();
    let out = brickrank(&["--format", "csv", "minimal-set", "--input", list.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().count(), 16);
}

#[test]
fn tilable_examples_and_exit_codes() {
    let out = brickrank(&["tilable", "3x8", "4x5", "7x3", "--target", "3x1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("yes"));
    let out = brickrank(&["tilable", "2x2", "-t", "3x3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "no\n");
    let out = brickrank(&["--format", "json", "tilable", "25x3", "9x8", "16x5", "-t", "34x11", "--witness"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tilable"], true);
    assert_eq!(v["witness"]["target"], "34x11");
    let w = brickrank::witness::TilingWitness::from_json(&v["witness"].to_string()).unwrap();
    let p = brickrank::brick::parse_bricks(&["25x3", "9x8", "16x5"]).unwrap();
    assert!(brickrank::witness::verify_witness(&w, &p).unwrap());
}

#[test]
fn maxrank_values_and_table() {
    assert_eq!(stdout(&brickrank(&["maxrank", "3", "2"])), "18\n");
    assert_eq!(stdout(&brickrank(&["maxrank", "1", "5"])), "1\n");
    let out = brickrank(&["--format", "csv", "maxrank", "--table", "--n-max", "3", "--d-max", "5"]);
    assert_eq!(stdout(&out), "n,d=2,d=3,d=4,d=5\n1,1,1,1,1\n2,4,5,6,7\n3,18,36,61,93\n");
    let out = brickrank(&["--format", "json", "maxrank", "--table", "--n-max", "2", "--d-max", "3"]);
    assert_eq!(json(&out)["rows"][1]["values"], serde_json::json!([4, 5]));
}

#[test]
fn dedekind_commands() {
    assert_eq!(stdout(&brickrank(&["dedekind", "3"])), "18\n");
    assert_eq!(stdout(&brickrank(&["dedekind", "3", "--count"])), "18\n");
    assert_eq!(stdout(&brickrank(&["dedekind", "--dual", "w+xy"])), "wx+wy\n");
    assert_eq!(stdout(&brickrank(&["dedekind", "1", "--enumerate"])), "w\n");
    let out = brickrank(&["--format", "json", "dedekind", "2", "--enumerate"]);
    assert_eq!(json(&out)["phrases"], serde_json::json!(["w", "x", "wx", "w+x"]));
}

#[test]
fn certificate_and_poly() {
    let out = brickrank(&["certificate", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("max true dimension 2\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level 3"));
    let v = json(&brickrank(&["--format", "json", "certificate", "2"]));
    assert_eq!(v["max_true_dim"], 1);
    assert_eq!(v["polynomial"], "2 + d");

    let dir = tempfile::tempdir().unwrap();
    let out = brickrank(&["--format", "json", "certificate", "4", "--resume", dir.path().to_str().unwrap()]);
    let v = json(&out);
    assert_eq!(v["max_true_dim"], 3);
    assert_eq!(v["polynomial"], "4 + 1/6*(-112*d + 57*d^2 + 121*d^3)");
    let level: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("level_2.json")).unwrap()).unwrap();
    assert_eq!(level["bricks"].as_array().unwrap().len(), 166);

    let out = brickrank(&["poly", "3"]);
    assert_eq!(
        stdout(&out),
        "3 + 1/2*(d + 7*d^2)\n3,7,18,36,61,93,132,178,231,291,358,432\n"
    );
    assert_eq!(stdout(&brickrank(&["poly", "1"])).lines().next(), Some("1"));
    assert_eq!(stdout(&brickrank(&["poly", "2", "--at", "7"])), "9\n");
}

#[test]
fn error_exit_codes() {
    assert_eq!(brickrank(&["minimal-set", "3xx4"]).status.code(), Some(2));
    assert_eq!(brickrank(&["minimal-set", "2x3", "4"]).status.code(), Some(2));
    assert_eq!(brickrank(&["minimal-set"]).status.code(), Some(2));
    assert_eq!(brickrank(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(brickrank(&["maxrank", "5", "3"]).status.code(), Some(3));
    assert_eq!(brickrank(&["certificate", "5"]).status.code(), Some(3));
    assert_eq!(brickrank(&["dedekind", "--dual", "w+"]).status.code(), Some(2));
}
