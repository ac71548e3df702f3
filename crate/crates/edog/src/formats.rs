//! On-disk formats: graph JSON, scores CSV, model and attack JSON.

use std::collections::BTreeSet;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use edog_core::attack::AttackResult;
use edog_core::gcn::GcnModel;
use edog_core::ggd::GgdSnapshot;
use edog_core::{EdgeScores, Graph, Matrix, NodePair};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    directed: bool,
    nodes: Vec<NodeDoc>,
    edges: Vec<(i64, i64)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeDoc {
    id: i64,
    x: Vec<f64>,
    #[serde(default)]
    y: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    train: Option<bool>,
}

fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => CliError::Schema(format!("{origin}: {e}")),
        _ => CliError::malformed(origin, e),
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Parses a graph document.
pub fn parse_graph(text: &str, origin: &str) -> Result<Graph> {
    let doc: GraphDoc = parse_json(text, origin)?;
    if doc.directed {
        return Err(CliError::Schema(format!("{origin}: directed graphs are not supported")));
    }
    let n = doc.nodes.len();
    let mut slots: Vec<Option<NodeDoc>> = (0..n).map(|_| None).collect();
    for node in doc.nodes {
        let id = usize::try_from(node.id)
            .ok()
            .filter(|&i| i < n)
            .ok_or_else(|| CliError::Schema(format!("{origin}: node id {} outside 0..{n}", node.id)))?;
        if slots[id].is_some() {
            return Err(CliError::Schema(format!("{origin}: duplicate node id {id}")));
        }
        slots[id] = Some(node);
    }
    let nodes: Vec<NodeDoc> = slots.into_iter().map(|s| s.expect("ids are a permutation of 0..n")).collect();
    let dim = nodes.first().map_or(0, |nd| nd.x.len());
    if let Some(bad) = nodes.iter().find(|nd| nd.x.len() != dim) {
        return Err(CliError::Schema(format!(
            "{origin}: node {} has {} features, expected {dim}",
            bad.id,
            bad.x.len()
        )));
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (a, b) in doc.edges {
        let check = |x: i64| {
            usize::try_from(x)
                .ok()
                .filter(|&i| i < n)
                .ok_or_else(|| CliError::Schema(format!("{origin}: edge endpoint {x} outside 0..{n}")))
        };
        let (a, b) = (check(a)?, check(b)?);
        if a == b {
            return Err(CliError::Schema(format!("{origin}: self-loop on node {a}")));
        }
        edges.push((a, b));
    }
    let x = Matrix::from_vec(n, dim, nodes.iter().flat_map(|nd| nd.x.iter().copied()).collect())?;
    let labels = nodes.iter().map(|nd| nd.y).collect();
    let mask = if nodes.iter().any(|nd| nd.train.is_some()) {
        Some(nodes.iter().enumerate().filter(|(_, nd)| nd.train == Some(true)).map(|(i, _)| i).collect())
    } else {
        None
    };
    Ok(Graph::new(n, edges)?.with_features(x)?.with_labels(labels)?.with_train_mask(mask)?)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_text(path)?, &path.display().to_string())
}

/// Graph document with nodes sorted by id and canonical edges, newline-terminated.
pub fn graph_to_json(g: &Graph) -> String {
    let mask: Option<BTreeSet<usize>> = g.train_mask().map(|m| m.iter().copied().collect());
    let nodes = (0..g.num_nodes())
        .map(|u| NodeDoc {
            id: u as i64,
            x: g.feature(u).to_vec(),
            y: g.label(u),
            train: mask.as_ref().map(|m| m.contains(&u)),
        })
        .collect();
    let doc = GraphDoc {
        directed: false,
        nodes,
        edges: g.edges().map(|e| (e.u() as i64, e.v() as i64)).collect(),
    };
    let mut text = serde_json::to_string(&doc).expect("graph documents serialize");
    text.push('\n');
    text
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<()> {
    write_text(path, &graph_to_json(g))
}

/// Score with 17 significant digits.
pub fn format_score(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn scores_to_csv(scores: &EdgeScores) -> String {
    let mut out = String::from("u,v,score\n");
    for (p, s) in scores.iter() {
        out.push_str(&format!("{},{},{}\n", p.u(), p.v(), format_score(s)));
    }
    out
}

pub fn write_scores(w: &mut impl Write, scores: &EdgeScores) -> std::io::Result<()> {
    w.write_all(scores_to_csv(scores).as_bytes())
}

pub fn save_scores(path: &Path, scores: &EdgeScores) -> Result<()> {
    write_text(path, &scores_to_csv(scores))
}

#[derive(Deserialize)]
struct ScoreRow {
    u: usize,
    v: usize,
    score: f64,
}

/// Reads a `u,v,score` table; the detector name is `detector`.
pub fn read_scores(r: impl Read, origin: &str, detector: &str) -> Result<EdgeScores> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = reader.headers().map_err(|e| CliError::malformed(origin, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["u", "v", "score"] {
        return Err(CliError::Schema(format!("{origin}: expected header u,v,score")));
    }
    let mut out = EdgeScores::new(detector);
    for row in reader.deserialize::<ScoreRow>() {
        let row = row.map_err(|e| CliError::Schema(format!("{origin}: {e}")))?;
        if !row.score.is_finite() {
            return Err(CliError::Schema(format!("{origin}: non-finite score for ({}, {})", row.u, row.v)));
        }
        let pair = NodePair::new(row.u, row.v).map_err(|e| CliError::Schema(format!("{origin}: {e}")))?;
        if out.get(pair).is_some() {
            return Err(CliError::Schema(format!("{origin}: pair ({}, {}) listed twice", pair.u(), pair.v())));
        }
        out.insert(pair, row.score);
    }
    Ok(out)
}

pub fn load_scores(path: &Path, detector: &str) -> Result<EdgeScores> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_scores(file, &path.display().to_string(), detector)
}

/// Node classifier checkpoint.
#[derive(Debug, Serialize, Deserialize)]
struct GcnFile {
    kind: String,
    #[serde(flatten)]
    model: GcnModel,
}

const GCN_KIND: &str = "gcn-node-classifier";

pub fn gcn_to_json(m: &GcnModel) -> String {
    let file = GcnFile {
        kind: GCN_KIND.into(),
        model: m.clone(),
    };
    to_json_line(&file)
}

pub fn parse_gcn(text: &str, origin: &str) -> Result<GcnModel> {
    let file: GcnFile = parse_json(text, origin)?;
    if file.kind != GCN_KIND {
        return Err(CliError::Schema(format!("{origin}: expected kind '{GCN_KIND}', found '{}'", file.kind)));
    }
    let m = file.model;
    let (w1, w2, w_out) = (m.encoder.w1.shape(), m.encoder.w2.shape(), m.w_out.shape());
    if w1.1 != w2.0 || w2.1 != w_out.0 || w_out.1 == 0 {
        return Err(CliError::Schema(format!("{origin}: inconsistent weight shapes {w1:?}, {w2:?}, {w_out:?}")));
    }
    Ok(m)
}

pub fn save_gcn(path: &Path, m: &GcnModel) -> Result<()> {
    write_text(path, &gcn_to_json(m))
}

pub fn load_gcn(path: &Path) -> Result<GcnModel> {
    parse_gcn(&read_text(path)?, &path.display().to_string())
}

pub fn save_ggd_checkpoints(path: &Path, snapshots: &[GgdSnapshot]) -> Result<()> {
    write_text(path, &to_json_line(&snapshots))
}

pub fn load_ggd_checkpoints(path: &Path) -> Result<Vec<GgdSnapshot>> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

pub fn save_attack(path: &Path, r: &AttackResult) -> Result<()> {
    write_text(path, &to_json_line(r))
}

pub fn load_attack(path: &Path) -> Result<AttackResult> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// Reads any JSON document.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json_line(value))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("in-memory documents serialize");
    text.push('\n');
    text
}
