//! Core algorithms for reader-personalized offensive-comment prediction.
//!
//! The crate is `no_std` (it needs `alloc`) and performs no IO. File formats,
//! the HTTP service, and the command line live in the `commentshield` crate.
//!
//! Pipeline at a glance:
//!
//! - [`corpus`] indexes news, comments, 5-point ratings and the offensive-only
//!   feedback records, and selects the capped feedback set per reader.
//! - [`textprep`] normalizes raw news and comment text.
//! - [`encoder`] maps a `(news, comment)` pair to a fixed-dimension vector.
//! - [`commenter`] learns commenter embeddings by predicting authorship.
//! - [`personalizer`] builds target/reader vectors and trains the
//!   offensive-probability heads for the three model kinds.
//! - [`eval`] computes PR curves, average precision, threshold tables and
//!   Precision@k.
//! - [`synth`] generates corpora with known ground truth.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod commenter;
pub mod corpus;
pub mod encoder;
mod error;
pub mod eval;
pub mod hash;
pub mod linalg;
pub mod personalizer;
pub mod seed;
pub mod synth;
pub mod textprep;

pub use error::{Error, Result};
