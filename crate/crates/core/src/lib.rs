pub mod analysis;
pub mod cache;
pub mod cf;
pub mod cli;
pub mod config;
pub mod dimension;
pub mod error;
pub mod interval;
pub mod quadratic;
pub mod sft;
pub mod spectrum;

pub use error::{Error, Result};
