pub mod algebra;
pub mod basechange;
pub mod cli;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod operad;
pub mod random;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
