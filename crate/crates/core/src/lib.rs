//! Heisenberg-calculus symbol algebra, regularized traces and the index
//! character on contact manifolds.

pub mod character;
pub mod cli;
pub mod contactgeo;
pub mod error;
pub mod fock;
pub mod moyal;
pub mod rtrace;
pub mod symcore;

pub use error::{Error, Result};
