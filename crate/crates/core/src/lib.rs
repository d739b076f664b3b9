pub mod cli;
pub mod error;
pub mod gaussian;
pub mod groupring;
pub mod groups;
pub mod grlwe;
pub mod lattices;
pub mod matrix;
pub mod pke;

pub use error::{Error, Result};
