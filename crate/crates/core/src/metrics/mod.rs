//! Link heuristics, centrality and evaluation metrics.

mod auc;
mod betweenness;
mod heuristics;
mod katz;

pub use auc::{auc_from_labels, roc_auc};
pub use betweenness::betweenness;
pub use heuristics::{
    adamic_adar, ald_features, common_neighbors, heuristic_scores, Heuristic, PairFeatures, ALD_DIM,
    DISTANCE_CAP,
};
pub use katz::{katz_detector_scores, katz_matrix, spectral_radius_estimate, DEFAULT_KATZ_BETA};
