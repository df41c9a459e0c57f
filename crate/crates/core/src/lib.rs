pub mod blocks;
pub mod calculus;
pub mod cli;
pub mod ct;
pub mod discretize;
pub mod dt;
pub mod error;
pub mod rational;
pub mod spectral;

pub use error::{Error, Result};
