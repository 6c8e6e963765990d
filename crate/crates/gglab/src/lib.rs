//! A laboratory for idealized models of group and ring computation.
//!
//! The crate simulates algorithms that may touch group elements only through
//! gates (labeling, group operation, equality, plus problem-specific oracles),
//! tracks the linear polynomials those gates induce over the hidden exponents,
//! and turns transcripts into short encodings whose lengths are audited
//! against the incompressibility of the hidden instance.  Known-order and
//! unknown-order groups, a random-representation variant, smooth-element
//! oracles, and small quantum register machines are all covered.
//!
//! Entry points:
//! * [`oracle::Session`] runs a generic algorithm and records a transcript.
//! * [`tracker`] reconstructs polynomial state and collision structure.
//! * [`codecs`] compresses winning transcripts and audits the bit counts.
//! * [`harness`] wires everything into seeded, reproducible experiments.

pub mod algebra;
pub mod algorithms;
pub mod codecs;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod quantum;
pub mod rr;
pub mod smooth;
pub mod stats;
pub mod tracker;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
