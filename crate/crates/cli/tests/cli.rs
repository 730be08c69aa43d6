use std::process::{Command, Output};

use serde_json::Value;

fn slocc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slocc")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = slocc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn exact_ghz_row() {
    let doc = json_of(&["classify", "--named", "GHZ", "--exact"]);
    let r = &doc[0];
    let values: Vec<f64> = r["values"].as_array().unwrap().iter().map(f).collect();
    assert!((values[0] - 1.0).abs() < 1e-12);
    assert!(values[1..].iter().all(|v| v.abs() < 1e-12));
    assert_eq!(r["label"], "GHZ");
    assert!((f(&r["negativity_min"]) - 0.5).abs() < 1e-12);
    assert_eq!(r["provenance"]["mode"], "exact");
}

#[test]
fn random_batch_labels() {
    let doc = json_of(&["classify", "--random", "20", "--seed", "7", "--shots", "10000"]);
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 20);
    let allowed = ["GHZ", "W", "BS1", "BS2", "BS3", "Separable", "Inconclusive"];
    assert!(rows.iter().all(|r| allowed.contains(&r["label"].as_str().unwrap())));
    assert!(rows.iter().all(|r| r["generated"] == true));
}

#[test]
fn noisy_w_within_binomial_band() {
    let doc = json_of(&["classify", "--named", "W", "--shots", "10000", "--depolarizing", "0.05", "--seed", "3"]);
    let r = &doc[0];
    assert_eq!(r["label"], "W");
    let o1 = f(&r["values"][1]);
    let se = f(&r["std"][1]);
    assert!(se > 0.0);
    assert!((o1 - 0.67 * 0.95).abs() <= 5.0 * se, "{o1} ± {se}");
}

#[test]
fn verify_mappings_report() {
    let out = slocc(&["verify-mappings"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 63);
    assert_eq!(doc["corrected"], serde_json::json!([16, 31]));
    let row = |i: u64| rows.iter().find(|r| r["index"] == i).unwrap();
    assert_eq!(row(29)["published_check"]["status"], "verified");
    assert_eq!(row(29)["published_check"]["sign"], 1);
    assert_eq!(row(16)["provenance"], "corrected");
    assert_eq!(row(16)["published_check"]["status"], "mismatch");
    assert_eq!(row(16)["published_check"]["produced"], serde_json::json!([1, "yII"]));
}

#[test]
fn tables_reproduce_theory_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("tables");
    let out = slocc(&[
        "tables", "--named", "all", "--shots", "10000", "--depolarizing", "0.08", "--seed", "1",
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut results = csv::Reader::from_path(out_dir.join("results.csv")).unwrap();
    let header = results.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let theory = [
        ("GHZ", [1.0, 0.0, 0.0, 0.0]),
        ("WWbar", [1.0, 0.0, 0.0, 0.0]),
        ("W", [0.0, 0.67, 0.67, 0.67]),
        ("BS1", [0.0, 0.0, 0.0, 1.0]),
        ("BS2", [0.0, 0.0, 1.0, 0.0]),
        ("BS3", [0.0, 1.0, 0.0, 0.0]),
        ("Sep", [0.0, 0.0, 0.0, 0.0]),
    ];
    let records: Vec<csv::StringRecord> = results.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 7);
    for (rec, (name, expected)) in records.iter().zip(theory) {
        assert_eq!(&rec[0], name);
        for (k, obs) in ["O", "O1", "O2", "O3"].iter().enumerate() {
            let v: f64 = rec[col(&format!("{obs}_the"))].parse().unwrap();
            assert!((v - expected[k]).abs() <= 5e-3, "{name} {obs}: {v}");
        }
    }
    let ghz_dir: f64 = records[0][col("O_dir")].parse().unwrap();
    assert!((0.85..=0.99).contains(&ghz_dir), "{ghz_dir}");

    let mut neg = csv::Reader::from_path(out_dir.join("negativity.csv")).unwrap();
    let bs1 = neg.records().map(Result::unwrap).find(|r| &r[0] == "BS1").unwrap();
    assert_eq!(bs1[2].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn default_tables_mark_generated_rows() {
    let out = slocc(&["tables", "--reps", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let results = text.split("\n# negativity.csv\n").next().unwrap();
    assert_eq!(results.lines().filter(|l| l.contains(",generated,")).count(), 20);
    assert_eq!(results.lines().filter(|l| l.contains(",named,")).count(), 7);
}

#[test]
fn state_documents_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("states.json");
    let out = slocc(&["random-gen", "--random", "5", "--seed", "11", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let emitted: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();

    let doc = json_of(&["classify", "--state", path.to_str().unwrap()]);
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for (row, original) in rows.iter().zip(emitted.as_array().unwrap()) {
        for key in ["a0", "a1", "a2", "a3", "a4", "theta"] {
            let a = f(&row["document"]["canonical"][key]);
            let b = f(&original["canonical"][key]);
            assert!((a - b).abs() <= 1e-12);
        }
    }

    // Generated rows of a classify run re-ingest to the same states.
    let generated = json_of(&["classify", "--random", "3", "--seed", "4"]);
    let docs: Vec<Value> = generated.as_array().unwrap().iter().map(|r| r["document"].clone()).collect();
    let again = json_of(&["classify", "--state", &serde_json::to_string(&docs).unwrap()]);
    for (a, b) in generated.as_array().unwrap().iter().zip(again.as_array().unwrap()) {
        assert_eq!(a["values"], b["values"]);
        assert_eq!(a["label"], b["label"]);
    }
}

#[test]
fn amplitude_documents_are_accepted() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let doc = serde_json::json!({"amplitudes": [[s, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [s, 0.0]]});
    let out = json_of(&["classify", "--state", &doc.to_string()]);
    assert_eq!(out[0]["label"], "GHZ");
    assert_eq!(out[0]["document"], doc);
}

#[test]
fn fixed_seed_output_is_byte_identical() {
    let args = ["classify", "--random", "6", "--named", "all", "--seed", "9", "--shots", "1000", "--reps", "3", "--depolarizing", "0.1"];
    assert_eq!(slocc(&args).stdout, slocc(&args).stdout);
    let tables = ["tables", "--random", "3", "--seed", "2", "--format", "json"];
    assert_eq!(slocc(&tables).stdout, slocc(&tables).stdout);
}

#[test]
fn tomography_exact_and_sampled() {
    let doc = json_of(&["tomography", "--named", "GHZ,W", "--exact"]);
    for r in doc.as_array().unwrap() {
        assert!((f(&r["fidelity"]["mean"]) - 1.0).abs() < 1e-9);
        assert_eq!(r["density_matrix"]["re"].as_array().unwrap().len(), 8);
    }
    let sampled = json_of(&["tomography", "--named", "W", "--shots", "10000", "--seed", "5"]);
    let fid = f(&sampled[0]["fidelity"]["mean"]);
    assert!(fid > 0.95 && fid < 1.0, "{fid}");
}

#[test]
fn exit_codes() {
    assert_eq!(slocc(&["classify"]).status.code(), Some(2));
    assert_eq!(slocc(&["classify", "--named", "W", "--bogus"]).status.code(), Some(2));
    assert_eq!(slocc(&["classify", "--named", "W", "--shots", "10", "--exact"]).status.code(), Some(2));
    assert_eq!(slocc(&["classify", "--named", "Foo"]).status.code(), Some(3));
    assert_eq!(slocc(&["classify", "--named", "W", "--epsilon", "0"]).status.code(), Some(3));
    assert_eq!(slocc(&["classify", "--named", "W", "--depolarizing", "1.5"]).status.code(), Some(3));
    assert_eq!(slocc(&["classify", "--canonical", "1,0,0,0"]).status.code(), Some(3));

    let bad = slocc(&["classify", "--state", r#"{"canonical": {"a0": 0.6, "a1": 0, "a2": 0, "a3": 0, "a4": -0.8, "theta": 0}}"#]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("canonical.a4"));

    let dir = tempfile::tempdir().unwrap();
    let blocked = dir.path().join("file");
    std::fs::write(&blocked, "").unwrap();
    let out = blocked.join("nested").join("x.json");
    assert_eq!(slocc(&["verify-mappings", "--out", out.to_str().unwrap()]).status.code(), Some(4));
}
