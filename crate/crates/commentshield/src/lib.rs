//! File formats, training pipeline, evaluation reports, HTTP service and CLI
//! around [`commentshield_core`].

pub mod artifacts;
pub mod cli;
pub mod config;
mod error;
pub mod jsonl;
pub mod pipeline;
pub mod report;
pub mod service;
pub mod store_io;

pub use error::{Error, Result};
