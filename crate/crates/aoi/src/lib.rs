//! File formats, parallel drivers and the command-line front end for the
//! `aoi-core` library.

pub mod cli;
pub mod config;
pub mod dump;
pub mod error;
pub mod fit;
pub mod golden;
pub mod parallel;
pub mod report;
pub mod trace;

pub use error::{AppError, Result};
