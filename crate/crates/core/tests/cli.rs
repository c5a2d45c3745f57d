use std::path::PathBuf;

use quiver_signal::cli::{run, Outcome};
use quiver_signal::io::{self, Workspace};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("quiver-signal").chain(args.iter().copied()))
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid JSON")
}

fn error_kind(out: &Outcome) -> String {
    assert_eq!(out.code, 2, "stdout: {}", out.stdout);
    assert!(out.stdout.is_empty());
    json(&out.stderr)["error"]["kind"].as_str().unwrap().to_string()
}

fn node_args<'a>(q: &'a str, r: &'a str) -> Vec<&'a str> {
    vec!["-q", q, "-r", r]
}

#[test]
fn filter_output_vanishes_at_nodes_three_to_five() {
    let (q, r, f, x) = (fixture("five_node_quiver.json"), fixture("five_node_rep.json"), fixture("five_node_filter.json"), fixture("five_node_signal.json"));
    let out = cli(&["filter", "-q", &q, "-r", &r, "-f", &f, "-x", &x]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let y = json(&out.stdout);
    for node in ["3", "4", "5"] {
        assert!(y["blocks"][node].as_array().unwrap().iter().all(|v| v.as_f64() == Some(0.0)));
    }

    // y(1) = φ51 φ35 x(3) straight from the fixture files
    let mut ws = Workspace::default();
    ws.load_quiver(&q).unwrap();
    let rep = ws.load_representation(&r).unwrap().clone();
    let xs = ws.load_signal(&x).unwrap().clone();
    let a = |id: &str| rep.map(rep.quiver().arrow_index(id).unwrap()).clone();
    let want = a("a51") * a("a35") * xs.block(2);
    let got: Vec<f64> = y["blocks"]["1"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (g, w) in got.iter().zip(want.iter()) {
        assert!((g - w).abs() <= 1e-12 * (1.0 + w.abs()));
    }
}

#[test]
fn barcode_of_a2_fixture() {
    let (q, r) = (fixture("a2_quiver.json"), fixture("a2_rep.json"));
    let out = cli(&["decompose", "--mode", "barcode", "-q", &q, "-r", &r]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    let bars: Vec<(u64, u64, u64)> = doc["intervals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| (i["start"].as_u64().unwrap(), i["end"].as_u64().unwrap(), i["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(bars, vec![(1, 1, 1), (1, 2, 2), (2, 2, 1)]);
    assert_eq!(doc["mode"], "barcode");
}

#[test]
fn paths_of_length_zero_are_the_trivial_paths() {
    let q = fixture("five_node_quiver.json");
    let out = cli(&["paths", "--max-len", "0", "-q", &q]);
    assert_eq!(out.code, 0);
    let doc = json(&out.stdout);
    assert_eq!(doc["count"], 5);
    for (p, node) in doc["paths"].as_array().unwrap().iter().zip(["1", "2", "3", "4", "5"]) {
        assert_eq!(p["length"], 0);
        assert_eq!(p["tail"], node);
        assert_eq!(p["head"], node);
    }
    let two = json(&cli(&["paths", "--max-len", "2", "-q", &q]).stdout);
    assert_eq!(two["count"], 26);
}

#[test]
fn shift_materializes_one_block() {
    let (q, r) = (fixture("five_node_quiver.json"), fixture("five_node_rep.json"));
    let mut args = vec!["shift", "--path", "a34,a41"];
    args.extend(node_args(&q, &r));
    let out = cli(&args);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    assert_eq!(doc["block"]["row"], "1");
    assert_eq!(doc["block"]["col"], "3");
    assert_eq!(doc["matrix"]["rows"], 10);

    let mut args = vec!["shift", "--base", "2"];
    args.extend(node_args(&q, &r));
    let doc = json(&cli(&args).stdout);
    let nonzero = doc["matrix"]["data"].as_array().unwrap().iter().filter(|v| v.as_f64() != Some(0.0)).count();
    assert_eq!(nonzero, 3);

    let mut args = vec!["shift", "--path", "a12,a34"];
    args.extend(node_args(&q, &r));
    assert_eq!(error_kind(&cli(&args)), "quiver");
}

#[test]
fn iso_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let q = fixture("a2_quiver.json");
    let r = fixture("a2_rep.json");
    let out = cli(&["iso", "--seed", "3", "-q", &q, "-r", &r, "-r", &r]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    assert_eq!(doc["isomorphic"], true);
    assert!(doc["witness"]["1"]["data"].is_array());

    // 0 → k against k → 0
    let rep2 = dir.path().join("rep2.json");
    let rep3 = dir.path().join("rep3.json");
    std::fs::write(&rep2, r#"{"dims": {"1": 0, "2": 1}, "maps": {"a12": {"rows": 1, "cols": 0, "data": []}}}"#).unwrap();
    std::fs::write(&rep3, r#"{"dims": {"1": 1, "2": 0}, "maps": {"a12": {"rows": 0, "cols": 1, "data": []}}}"#).unwrap();
    let out = cli(&["iso", "--seed", "3", "-q", &q, "-r", rep2.to_str().unwrap(), "-r", rep3.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    let doc = json(&out.stdout);
    assert_eq!(doc["isomorphic"], false);
    assert!(doc["witness"].is_null());
}

#[test]
fn randomized_commands_require_a_seed() {
    let (q, r) = (fixture("a2_quiver.json"), fixture("a2_rep.json"));
    assert_eq!(error_kind(&cli(&["iso", "-q", &q, "-r", &r, "-r", &r])), "invalid");
    assert_eq!(error_kind(&cli(&["decompose", "--mode", "generic", "-q", &q, "-r", &r])), "invalid");
}

#[test]
fn generic_decomposition_is_deterministic() {
    let (q, r) = (fixture("a2_quiver.json"), fixture("a2_rep.json"));
    let args = ["decompose", "--mode", "generic", "--seed", "9", "-q", &q, "-r", &r];
    let first = cli(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(first.stdout, cli(&args).stdout);
    let doc = json(&first.stdout);
    assert_eq!(doc["summands"].as_array().unwrap().len(), 4);
    assert_eq!(doc["unsplit_count"], 0);
}

#[test]
fn fourier_and_factor_modes() {
    let (q, r) = (fixture("five_node_quiver.json"), fixture("five_node_rep.json"));
    // the five-node quiver has cycles
    assert_eq!(error_kind(&cli(&["decompose", "--mode", "factors", "-q", &q, "-r", &r])), "precondition");

    let (q, r) = (fixture("a2_quiver.json"), fixture("a2_rep.json"));
    let out = cli(&["decompose", "--mode", "factors", "-q", &q, "-r", &r]);
    assert_eq!(json(&out.stdout)["factors"], serde_json::json!({"1": 3, "2": 3}));

    let dir = tempfile::tempdir().unwrap();
    let xs = dir.path().join("x.json");
    std::fs::write(&xs, r#"{"blocks": {"1": [1, 2, 3], "2": [4, 5, 6]}}"#).unwrap();
    let out = cli(&["decompose", "--mode", "fourier", "-q", &q, "-r", &r, "-x", xs.to_str().unwrap()]);
    assert_eq!(error_kind(&out), "precondition");
    assert!(out.stderr.contains("a12"));

    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, r#"{"dims": {"1": 3, "2": 3}, "maps": {"a12": {"rows": 3, "cols": 3, "data": [0,0,0,0,0,0,0,0,0]}}}"#).unwrap();
    let out = cli(&["decompose", "--mode", "fourier", "-q", &q, "-r", zero.to_str().unwrap(), "-x", xs.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(json(&out.stdout)["components"]["2"], serde_json::json!([4.0, 5.0, 6.0]));
}

#[test]
fn tda_barcodes_of_the_triangle() {
    let c = fixture("triangle.json");
    let h0 = json(&cli(&["tda", "--degree", "0", "-c", &c]).stdout);
    assert_eq!(h0["betti"], serde_json::json!([3, 1, 1]));
    assert_eq!(h0["intervals"][0], serde_json::json!({"start": 1, "end": 1, "multiplicity": 2}));
    assert_eq!(h0["intervals"][1], serde_json::json!({"start": 1, "end": 3, "multiplicity": 1}));
    let h1 = json(&cli(&["tda", "--degree", "1", "-c", &c]).stdout);
    assert_eq!(h1["intervals"], serde_json::json!([{"start": 2, "end": 2, "multiplicity": 1}]));
}

#[test]
fn validate_reports_loaded_artifacts() {
    let (q, r, f, x) = (fixture("five_node_quiver.json"), fixture("five_node_rep.json"), fixture("five_node_filter.json"), fixture("five_node_signal.json"));
    let out = cli(&["validate", "-q", &q, "-r", &r, "-f", &f, "-x", &x, "-c", &fixture("triangle.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["quiver"]["arrows"], 8);
    assert_eq!(doc["quiver"]["acyclic"], false);
    assert_eq!(doc["representations"][0]["total_dim"], 10);
    assert_eq!(doc["filter_terms"], serde_json::json!([2]));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(error_kind(&cli(&["frobnicate"])), "usage");
    assert_eq!(error_kind(&cli(&["paths", "--bogus"])), "usage");
    assert_eq!(error_kind(&cli(&["paths"])), "usage");
    assert_eq!(error_kind(&cli(&["decompose", "--mode", "magic"])), "usage");
    assert_eq!(error_kind(&cli(&["paths", "--max-len", "1"])), "invalid");
    assert_eq!(error_kind(&cli(&["validate", "--tol=-1"])), "invalid");
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("decompose"));
}

#[test]
fn load_errors_name_the_culprit() {
    let dir = tempfile::tempdir().unwrap();
    let q = fixture("five_node_quiver.json");
    let r = fixture("five_node_rep.json");

    let bad_filter = dir.path().join("c.json");
    std::fs::write(
        &bad_filter,
        r#"{"terms": [{"coeff": 1, "path": ["a35", "a51"]}, {"coeff": 1, "path": ["a34", "a41", "a12"]}, {"coeff": 1, "path": ["a23", "a13"]}]}"#,
    )
    .unwrap();
    let out = cli(&["validate", "-q", &q, "-f", bad_filter.to_str().unwrap()]);
    assert_eq!(error_kind(&out), "quiver");
    assert!(out.stderr.contains("a13"));

    let bad_signal = dir.path().join("x.json");
    std::fs::write(&bad_signal, r#"{"blocks": {"1": [1, 2], "2": [1, 2, 3], "3": [1], "4": [1, 2], "5": [1]}}"#).unwrap();
    let out = cli(&["validate", "-q", &q, "-r", &r, "-x", bad_signal.to_str().unwrap()]);
    assert_eq!(error_kind(&out), "validation");
    assert!(out.stderr.contains("`3`"), "{}", out.stderr);

    let broken = dir.path().join("q.json");
    std::fs::write(&broken, "{\n  \"nodes\": [\"1\", \"2\"],\n  \"arrows\": [{\"id\": \"a\", \"tail\": \"1\"}]\n}\n").unwrap();
    let out = cli(&["validate", "-q", broken.to_str().unwrap()]);
    assert_eq!(error_kind(&out), "parse");
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    assert!(out.stderr.contains("arrows[0]"), "{}", out.stderr);

    let missing = dir.path().join("nope.json");
    assert_eq!(error_kind(&cli(&["validate", "-q", missing.to_str().unwrap()])), "parse");
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    let mut ws = Workspace::default();
    ws.load_quiver(fixture("five_node_quiver.json")).unwrap();
    ws.load_representation(fixture("five_node_rep.json")).unwrap();
    ws.load_signal(fixture("five_node_signal.json")).unwrap();
    ws.load_filter(fixture("five_node_filter.json")).unwrap();
    ws.load_complex(fixture("triangle.json")).unwrap();
    let names = ["five_node_quiver.json", "five_node_rep.json", "five_node_signal.json", "five_node_filter.json", "triangle.json"];
    let saved = ws.save().unwrap();
    assert_eq!(saved.len(), names.len());
    for (text, name) in saved.iter().zip(names) {
        assert_eq!(text, &io::read_file(fixture(name)).unwrap(), "{name}");
    }

    let mut a2 = Workspace::default();
    a2.load_quiver(fixture("a2_quiver.json")).unwrap();
    a2.load_representation(fixture("a2_rep.json")).unwrap();
    let saved = a2.save().unwrap();
    assert_eq!(saved[0], io::read_file(fixture("a2_quiver.json")).unwrap());
    assert_eq!(saved[1], io::read_file(fixture("a2_rep.json")).unwrap());
}
