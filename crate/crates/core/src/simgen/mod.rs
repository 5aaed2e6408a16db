//! Synthetic ground truth (random causal DAGs, discrete sampling, latent
//! marginalization) and the evaluation metrics: PAG accuracy, causal
//! accuracy, confusion matrices.

mod bayesnet;
mod eval;
mod generate;
mod manifest;

pub use bayesnet::DiscreteBayesNet;
pub use eval::{causal_accuracy, confusion_matrix, pag_accuracy, ConfusionMatrix, EvalReport, MARK_CATEGORIES};
pub use generate::{random_cpts, random_dag, random_ground_truth, sample_dataset, GroundTruth};
pub use manifest::ExperimentManifest;

/// Column projection dropping hidden variables; row count preserved.
pub fn drop_columns(
    ds: &crate::scoring::Dataset,
    hidden: &[usize],
) -> crate::error::Result<crate::scoring::Dataset> {
    ds.drop_columns(hidden)
}
