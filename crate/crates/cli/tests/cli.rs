use std::process::{Command, Output};

use serde_json::Value;

fn tropmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmod")).args(args).env_remove("TROPMOD_SEED").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tropmod(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn m0n_five_counts() {
    let v = json(&["m0n", "--n", "5"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["fan"]["rays"].as_array().unwrap().len(), 10);
    assert_eq!(v["fan"]["maximal_cones"].as_array().unwrap().len(), 15);
}

#[test]
fn m0w_reports_univalent_face() {
    let v = json(&["m0w", "--w", "1,1,3/4,3/4,1/4"]);
    assert_eq!(v["result"], "obstruction");
    assert_eq!(v["obstruction"]["kind"], "univalent_face");
    assert_eq!(v["obstruction"]["face"], serde_json::json!([[3, 4, 5]]));
}

#[test]
fn m0w_heavy_light_fan() {
    let v = json(&["m0w", "--w", "1,1,1,1/8,1/8"]);
    assert_eq!(v["result"], "fan");
    assert_eq!(v["correspondence"].as_array().unwrap().len(), 12);
}

#[test]
fn losev_manin_two() {
    let v = json(&["losev-manin", "--t", "2"]);
    assert_eq!(v["bergman"]["fan"]["rays"].as_array().unwrap().len(), 2);
    assert_eq!(v["bergman"]["fan"]["maximal_cones"].as_array().unwrap().len(), 2);
}

#[test]
fn project_table() {
    let v = json(&["project", "--w", "1,1,3/4,3/4,1/4"]);
    assert_eq!(v["ray_images"].as_array().unwrap().len(), 10);
    assert_eq!(v["bergman"]["fan"]["maximal_cones"].as_array().unwrap().len(), 8);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(tropmod(&["m0w", "--w", "1,1,x"]).status.code(), Some(2));
    assert_eq!(tropmod(&["m0w", "--w", "1,1,1"]).status.code(), Some(2));
    assert_eq!(tropmod(&["m0n", "--n", "3"]).status.code(), Some(2));
    assert_eq!(tropmod(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tropmod(&["verify", "all", "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["fibre", "--w", "1,1,1,1/4,1/4", "--samples", "200", "--seed", "9"];
    let a = tropmod(&args);
    let b = tropmod(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["comparison"]["seed"], 9);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tropmod"))
        .args(["fibre", "--w", "1,1,1,1/4,1/4", "--samples", "10"])
        .env("TROPMOD_SEED", "42")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["comparison"]["seed"], 42);
}

#[test]
fn dot_output_is_well_formed() {
    for args in [
        vec!["m0n", "--n", "5", "--format", "dot"],
        vec!["project", "--w", "1,1,3/4,3/4,1/4", "--format", "dot"],
        vec!["fibre", "--example", "non-chordal", "--format", "dot"],
    ] {
        let out = tropmod(&args);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with("graph \""));
        assert_eq!(text.matches('{').count(), text.matches('}').count());
        assert!(text.lines().filter(|l| l.contains("--")).all(|l| l.trim_end().ends_with(';')));
    }
}

#[test]
fn bergman_from_edge_list_with_output_file() {
    let dir = std::env::temp_dir().join(format!("tropmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("k4.txt");
    std::fs::write(&graph, "# K4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    let out_path = dir.join("fan.json");
    let out = tropmod(&[
        "bergman",
        "--graph",
        graph.to_str().unwrap(),
        "--quotient",
        "--paranoid",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["bergman"]["fan"]["maximal_cones"].as_array().unwrap().len(), 15);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_all_small() {
    let out = tropmod(&["verify", "all", "--max-n", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);
    assert!(String::from_utf8_lossy(&out.stderr).contains("criterion 8: PASS"));
}
