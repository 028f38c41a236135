use std::fs;
use std::process::Command;

use qsd_cli::{cmd_analyze, cmd_cliques, cmd_code, Fault, RunConfig};
use qsd_core::classify::ClassificationRecord;
use qsd_core::formats::classification_to_json;
use qsd_core::{DesignChoice, QuotientGroup, Universe};

fn qsd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsd"))
}

#[test]
fn code_verify_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsd().args(["code", "--verify", "--json"]).arg(dir.path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("rank of the 336 line vectors: 51"));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("weight_enumerator.json")).unwrap()).unwrap();
    assert_eq!(v["line_rank"], 51);
    assert_eq!(v["weights"][1], serde_json::json!([24, 1008]));
}

#[test]
fn cliques_summary_and_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(dir.path());
    cfg.json = true;
    let outcome = cmd_cliques(&cfg).unwrap();
    assert_eq!(outcome.exit_code(), 0);
    assert!(outcome.lines.iter().any(|l| l == "21 classes x 3 cliques x 16 blocks = 1008"));
    assert!(outcome.lines.iter().any(|l| l.ends_with("10,460,353,203")));
    let catalog: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cliques.json")).unwrap()).unwrap();
    assert_eq!(catalog.as_array().unwrap().len(), 63);
    assert_eq!(catalog[7]["id"], 7);
    assert_eq!(catalog[7]["blocks"].as_array().unwrap().len(), 16);
}

#[test]
fn injected_fault_fails_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(dir.path());
    cfg.fault = Some(Fault { clique: 5, block: 3, bit: 0 });
    let outcome = cmd_cliques(&cfg).unwrap();
    assert!(outcome.exit_code() > 0);
    assert_eq!(outcome.first_failed().unwrap().id, "cliques.special_cliques");
}

#[test]
fn reproduce_with_fault_names_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsd()
        .args(["reproduce-paper", "--inject-fault", "5:3:0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    assert!(code > 0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("first failed anchor: cliques."), "{stderr}");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["failed"], code);
    assert!(report["anchors"].as_array().unwrap().iter().all(|a| a["source"].as_str().is_some()));
}

#[test]
fn unverified_code_reports_without_enforcing() {
    let outcome = cmd_code(&RunConfig::new("unused")).unwrap();
    assert!(!outcome.enforce);
    assert_eq!(outcome.failed(), 0);
}

#[test]
fn analyze_small_classification_with_dimacs() {
    let u = Universe::build().unwrap();
    let q = QuotientGroup::build(&u).unwrap();
    let choice = q.canonical_choice(&DesignChoice::from_index(5_000_000_000).unwrap());
    let design = u.assemble_design(choice);
    let records = vec![ClassificationRecord {
        aut_order: 64 * q.stabilizer_order(&choice),
        canonical_choice: choice,
        families: vec![],
        two_rank: qsd_core::analysis::two_rank(&design),
    }];
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("classification.json"), classification_to_json(&records).unwrap()).unwrap();
    let mut cfg = RunConfig::new(dir.path());
    cfg.dimacs = true;
    let outcome = cmd_analyze(&cfg, None).unwrap();
    assert_eq!(outcome.exit_code(), 0, "{:?}", outcome.anchors);
    let dimacs = fs::read_to_string(dir.path().join("block_graph_0000.dimacs")).unwrap();
    assert!(dimacs.lines().any(|l| l == "p edge 336 13440"));
    let fps: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fingerprints.json")).unwrap()).unwrap();
    assert_eq!(fps[choice.to_string()].as_str().unwrap().len(), 64);
}

#[test]
fn analyze_without_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qsd().args(["analyze", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("classification.json"));
}
