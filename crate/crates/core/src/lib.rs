//! Vanishing homology of complex projective hypersurfaces whose singular
//! locus has dimension at most one, computed from local singularity data
//! with exact integer linear algebra.
//!
//! The pipeline is: [`model::parse_config`] → [`model::validate`] →
//! [`engine::analyze`], with [`oracle::oracle_check`] as an independent
//! chain-level cross-check and [`cli::run`] tying them together.

pub mod cli;
pub mod engine;
pub mod lattice;
pub mod local;
pub mod model;
pub mod oracle;
mod serde_util;
