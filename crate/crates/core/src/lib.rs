pub mod apolarity;
pub mod binform;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rank;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Domain, Scalar};
