//! The Weyl–Moyal product engine, graded expansions, the involution ι and
//! the paired symbol algebra.

pub mod gaussian;
pub mod term;

pub use term::{moyal_term, moyal_term_poly, poly_star};
pub mod resolvent;
pub mod closure;
pub mod expansion;
pub mod paired;
pub mod invert;
pub mod parse;
