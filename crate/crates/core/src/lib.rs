pub mod algebra;
pub mod classify;
pub mod error;
pub mod filtration;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod morphisms;
pub mod rational;
pub mod sample;
pub mod selftest;
pub mod text;
pub mod witt;

pub use error::{Error, Result};
