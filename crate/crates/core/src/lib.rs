//! Finite metric spaces, low-distortion embeddings of `K_{n,n}` and
//! `{0,1,2}` metrics, roundness bounds, isometric-hardness constructions and
//! a metric Ramsey harness over random graphs.

pub mod bounds;
pub mod cli;
pub mod embeddings;
pub mod hardness;
pub mod json;
pub mod linalg;
pub mod metric;
pub mod ramsey;
pub mod scalar;
pub mod wide;
