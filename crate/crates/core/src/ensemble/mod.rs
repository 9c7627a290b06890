//! Extremely randomized trees over encoded feature vectors, with stratified
//! splitting, cross-validated grid search, Gini importances and evaluation.

pub mod dataset;
pub mod eval;
pub mod forest;
pub mod grid;
pub mod importance;
pub mod split;
pub mod tree;

pub use dataset::{Dataset, Encoding, FeatureEncoding};
pub use eval::{evaluate, EvalReport};
pub use forest::{fit, predict, predict_proba, tree_rng, FitParams, Forest, KRule};
pub use grid::{grid_search, CvCell, GridSpec};
pub use importance::{importances, ImportanceEntry, ImportanceReport};
pub use split::{stratified_folds, stratified_split};
pub use tree::{gini, TreeNode};
