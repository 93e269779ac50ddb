//! Batch experiments over discriminant families: scans that certify
//! `max |D_N| >= sqrt(S2 / S1)`, family-density checks, Kronecker lookups and
//! resonator summaries, with JSONL or CSV persistence.

pub mod commands;
pub mod config;
mod error;
pub mod record;

pub use error::{CliError, Result};
