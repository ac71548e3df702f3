use std::path::Path;
use std::process::{Command, Output};

use edog::formats::{load_attack, load_graph, load_scores};

fn edog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edog")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = edog(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_train_attack_detect_eval() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let model = dir.path().join("m.json");
    let attack = dir.path().join("a.json");
    let attacked = dir.path().join("ga.json");
    let scores = dir.path().join("s.csv");

    ok(&["gen", "--kind", "ba", "--n", "60", "--m", "2", "--seed", "4", "--out", s(&graph)]);
    let g = load_graph(&graph).unwrap();
    assert_eq!((g.num_nodes(), g.num_edges()), (60, 117));
    assert_eq!(g.feature_dim(), 20);

    ok(&["train", "--graph", s(&graph), "--seed", "1", "--out", s(&model)]);
    ok(&[
        "attack", "--graph", s(&graph), "--model", s(&model), "--profile", "meta", "--seed", "2", "--out", s(&attack),
        "--attacked-graph", s(&attacked),
    ]);
    let r = load_attack(&attack).unwrap();
    assert!(!r.added_edges.is_empty());
    let ga = load_graph(&attacked).unwrap();
    assert_eq!(ga.num_edges(), g.num_edges() + r.added_edges.len());

    ok(&["detect", "--graph", s(&attacked), "--method", "katz", "--out", s(&scores)]);
    let text = std::fs::read_to_string(&scores).unwrap();
    assert!(text.starts_with("u,v,score\n"));
    assert_eq!(load_scores(&scores, "katz").unwrap().len(), ga.num_edges());

    let out = ok(&["eval", "--scores", s(&scores), "--attack", s(&attack)]);
    let auc: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((0.0..=1.0).contains(&auc));
}

#[test]
fn heuristic_detection_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    ok(&["gen", "--kind", "er", "--n", "40", "--p", "0.1", "--seed", "9", "--out", s(&graph)]);
    let mut texts = Vec::new();
    for (i, method) in ["cn", "aa", "cn"].iter().enumerate() {
        let out = dir.path().join(format!("{i}.csv"));
        ok(&["detect", "--graph", s(&graph), "--method", method, "--out", s(&out)]);
        texts.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(texts[0], texts[2]);
    assert_ne!(texts[0], texts[1]);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_schema = dir.path().join("schema.json");
    std::fs::write(&bad_schema, r#"{"directed": false, "nodes": [{"id": 0, "x": [1, 0]}, {"id": 1, "x": [1]}], "edges": []}"#).unwrap();
    let malformed = dir.path().join("broken.json");
    std::fs::write(&malformed, "{\"directed\": ").unwrap();
    let out = dir.path().join("s.csv");

    for graph in [&bad_schema, &malformed] {
        let r = edog(&["detect", "--graph", s(graph), "--method", "cn", "--out", s(&out)]);
        assert_eq!(r.status.code(), Some(3));
    }

    let g = dir.path().join("g.json");
    ok(&["gen", "--kind", "er", "--n", "10", "--p", "0.3", "--seed", "1", "--out", s(&g)]);
    let r = edog(&["gen", "--kind", "er", "--n", "10", "--p", "1.5", "--out", s(&g)]);
    assert_eq!(r.status.code(), Some(2));
    let r = edog(&["gen", "--kind", "ba", "--n", "5", "--m", "5", "--out", s(&g)]);
    assert_eq!(r.status.code(), Some(2));
    let r = edog(&["gen", "--kind", "ba", "--n", "5", "--out", s(&g)]);
    assert_eq!(r.status.code(), Some(2));

    let bad_config = dir.path().join("cfg.json");
    std::fs::write(&bad_config, r#"{"dataset": {"kind": "ba", "n": 30, "m": 1, "seed": 1}, "surprise": 1}"#).unwrap();
    let r = edog(&["exp", "--config", s(&bad_config), "--out", s(&out)]);
    assert_eq!(r.status.code(), Some(3));

    let r = edog(&["detect", "--graph", "/nonexistent.json", "--method", "cn", "--out", s(&out)]);
    assert!(!r.status.success());
}
