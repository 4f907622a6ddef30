pub mod arith;
pub mod curve;
pub mod data;
pub mod error;
pub mod euler_characteristics;
pub mod euler_data;
pub mod padic;
pub mod report;
pub mod series;
pub mod verifier;

pub use error::{Error, Result};
