#![no_std]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod model;
pub mod numeric;
pub mod optimizer;
pub mod shs;
pub mod sim;

pub use error::{Error, Result};
pub use model::{DiscreteState, SystemConfig, UnifiedRate, Variant};
