//! Active learning of half spaces with label and comparison queries.
//!
//! A pool-based learner may ask an annotator for the label of a point
//! (`sign(f(x))`) or for a comparison between two points (`f(x1) >= f(x2)?`).
//! This crate implements the exact-rational machinery around that model:
//!
//! - [`geometry`]: arbitrary-precision rational vectors, homogeneous linear
//!   concepts, lifting of affine inputs, and margin / minimal-ratio reports;
//! - [`lp`]: exact feasibility of homogeneous systems of strict and
//!   non-strict linear inequalities;
//! - [`query`]: queries, answered transcripts, and a simulated annotator
//!   with exact query accounting;
//! - [`infer`]: version-space inference (which labels are forced by a
//!   transcript) plus the cone fast paths;
//! - [`learn`]: the 2D cone algorithm, comparison-based sorting, the weak
//!   confident learner, the boosting loop, and a statistical wrapper;
//! - [`lab`]: instance generators and certified lower-bound witnesses;
//! - [`io`]: the plain-text instance/witness format.
//!
//! All core arithmetic is exact; floating point only ever appears in
//! experiment statistics.

pub mod cone;
pub mod error;
pub mod geometry;
pub mod infer;
pub mod io;
pub mod lab;
pub mod learn;
pub mod lp;
pub mod query;

pub use error::{Error, Result};
pub use geometry::{LinearConcept, MarginReport, RationalVector, Sign};
pub use infer::{InferenceResult, PartialHypothesis, VersionSpace};
pub use io::ParsedFile;
pub use lab::{Instance, InstanceKind, VerificationReport, WitnessInstance, WitnessKind};
pub use learn::{BoostConfig, RunReport};
pub use lp::{ConstraintSystem, Feasibility, LinearForm};
pub use query::{AnsweredQuery, Query, QueryStats, QueryTranscript, SimulatedOracle};

/// Exact arbitrary-precision rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

use num_bigint::BigInt;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
