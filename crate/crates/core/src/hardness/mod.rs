//! Moduli of uniform convexity, the three- and four-point inequalities
//! they imply, and two families of finite metrics with no 4-point subspace
//! embedding isometrically (in `ℓ_2`, and in any space whose modulus
//! dominates a given `δ`).

use thiserror::Error;

use crate::embeddings::EmbedError;
use crate::metric::MetricError;

pub mod convexity;
pub mod l2_hard;
pub mod modulus;
pub mod uc_construction;

pub use convexity::{convexity_lemma_gap, lemma_gap_in, uc_slack, LemmaGap, UcSlack, WideGap};
pub use l2_hard::{build_l2_hard_metric, verify_no_isometric_quadruple, L2HardConstruction, QuadrupleCertificate, QuadrupleReport};
pub use modulus::{make_modulus, ConvexityModulus, ModulusError, ModulusSpec};
pub use uc_construction::{
    all_margins, build_uc_hard_metric, build_uc_hard_metric_with, condition_b_margin, condition_b_margin_with_eta,
    quadruple_gaps, EtaSchedule, MarginRecord, QuadrupleRecord, UCConstruction,
};

#[derive(Debug, Error)]
pub enum HardnessError {
    #[error("invalid size {0}")]
    InvalidSize(usize),
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error("points must be distinct")]
    CoincidentPoints,
    #[error("modulus inverse argument {0} outside [0, 2]")]
    InverseArgumentOutOfRange(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("no admissible s at stage {stage} after {halvings} halvings")]
    SearchFailure { stage: usize, halvings: u64 },
    #[error("stage {0} has no triple i < j < k below its last point")]
    VacuousStage(usize),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("some quadruple still embeds after {0} shrink rounds")]
    ShrinkLimitExceeded(u32),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("internal error: {0}")]
    Internal(String),
}
