//! Named detectors as exposed on the command line.

use std::fmt;
use std::str::FromStr;

use edog_core::ensemble::{EdogDetector, EdogScores};
use edog_core::ggd::{ggd_scores, lp_filter_ggd};
use edog_core::lp::{ald_detector, lp_pair_scores, train_lp};
use edog_core::metrics::{heuristic_scores, katz_detector_scores, Heuristic, DEFAULT_KATZ_BETA};
use edog_core::numkit::derive_seed;
use edog_core::od::od_detect;
use edog_core::{EdgeScores, Graph};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "lp")]
    Lp,
    #[serde(rename = "ggd")]
    Ggd,
    #[serde(rename = "lp+ggd")]
    LpGgd,
    #[serde(rename = "od")]
    Od,
    #[serde(rename = "edog")]
    Edog,
    #[serde(rename = "ald")]
    Ald,
    #[serde(rename = "katz")]
    Katz,
    #[serde(rename = "cn")]
    Cn,
    #[serde(rename = "aa")]
    Aa,
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::Lp,
        Method::Ggd,
        Method::LpGgd,
        Method::Od,
        Method::Edog,
        Method::Ald,
        Method::Katz,
        Method::Cn,
        Method::Aa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Lp => "lp",
            Method::Ggd => "ggd",
            Method::LpGgd => "lp+ggd",
            Method::Od => "od",
            Method::Edog => "edog",
            Method::Ald => "ald",
            Method::Katz => "katz",
            Method::Cn => "cn",
            Method::Aa => "aa",
        }
    }

    /// The ensemble's constituents, scored as part of an ensemble run.
    pub fn is_constituent(self) -> bool {
        matches!(self, Method::LpGgd | Method::Ggd | Method::Od)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown detection method '{s}'")))
    }
}

/// Maliciousness of every edge of `g` under `method`.
pub fn detect(g: &Graph, method: Method, seed: u64) -> Result<EdgeScores> {
    let scores = match method {
        Method::Lp => {
            let m = train_lp(g, seed)?;
            lp_pair_scores(&m, g, &g.edge_list())?
        }
        Method::Ggd => ggd_scores(g, seed)?,
        Method::LpGgd => lp_filter_ggd(g, seed)?,
        Method::Od => od_detect(g, seed)?,
        Method::Edog => EdogDetector::fit(g, seed)?.detect(g)?.edog,
        Method::Ald => ald_detector(g, seed)?,
        Method::Katz => katz_detector_scores(g, DEFAULT_KATZ_BETA)?,
        Method::Cn => heuristic_scores(g, Heuristic::CommonNeighbors)?,
        Method::Aa => heuristic_scores(g, Heuristic::AdamicAdar)?,
    };
    Ok(scores)
}

/// Runs several detectors under one master seed. Each method `m` gets
/// `derive_seed(seed, m)` except the ensemble, which takes `seed` itself and
/// derives its constituents' seeds the same way, so a constituent listed
/// next to the ensemble is computed once.
pub fn detect_many(g: &Graph, methods: &[Method], seed: u64) -> Result<Vec<(Method, EdgeScores)>> {
    let ensemble: Option<EdogScores> = if methods.contains(&Method::Edog) {
        Some(EdogDetector::fit(g, seed)?.detect(g)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(methods.len());
    for &m in methods {
        let scores = match (&ensemble, m) {
            (Some(e), Method::Edog) => e.edog.clone(),
            (Some(e), Method::LpGgd) => e.lp_ggd.clone(),
            (Some(e), Method::Ggd) => e.ggd.clone(),
            (Some(e), Method::Od) => e.od.clone(),
            _ => detect(g, m, derive_seed(seed, m.name()))?,
        };
        out.push((m, scores));
    }
    Ok(out)
}
