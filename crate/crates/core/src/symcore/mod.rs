//! Exact coefficient arithmetic: polynomials, radial rational functions,
//! Laurent series and special numbers.

pub mod laurent;
pub mod poly;
pub mod radial;
pub mod scalar;
pub mod special;

pub use laurent::LaurentT;
pub use poly::{Mono, PolyC};
pub use radial::{sphere_integral, HomTerm, RadialRat, SphereValue};
pub use scalar::{CRat, Rat, C64};
pub use special::{bernoulli, zeta_neg};

/// Exact product of two polynomials.
pub fn poly_mul(a: &PolyC, b: &PolyC) -> PolyC {
    a.mul(b)
}
