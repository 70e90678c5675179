pub mod cli;
pub mod code;
pub mod decomp;
pub mod error;
pub mod extension;
pub mod galois;
pub mod linalg;
pub mod pauli;

pub use error::{Error, Result};
