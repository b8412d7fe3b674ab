//! Exact and floating scalar types shared by every module.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type Rat = BigRational;
/// Complex number with rational real and imaginary parts.
pub type CRat = Complex<BigRational>;
pub type C64 = Complex<f64>;

/// Field operations needed by generic series and kernel code.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_rat(r: &Rat) -> Self;
    fn to_c64(&self) -> C64;
}

impl Coeff for CRat {
    fn from_rat(r: &Rat) -> Self {
        CRat::new(r.clone(), Rat::zero())
    }
    fn to_c64(&self) -> C64 {
        crat_to_c64(self)
    }
}

impl Coeff for C64 {
    fn from_rat(r: &Rat) -> Self {
        C64::new(rat_to_f64(r), 0.0)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rint(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn crat(re: Rat, im: Rat) -> CRat {
    CRat::new(re, im)
}

pub fn cr(re: Rat) -> CRat {
    CRat::new(re, Rat::zero())
}

pub fn ci(v: i64) -> CRat {
    CRat::new(rint(v), Rat::zero())
}

/// The imaginary unit as an exact scalar.
pub fn i_unit() -> CRat {
    CRat::new(Rat::zero(), Rat::one())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            // Very large numerator/denominator: scale down before dividing.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let a = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

pub fn crat_to_c64(z: &CRat) -> C64 {
    C64::new(rat_to_f64(&z.re), rat_to_f64(&z.im))
}

/// Exact rational value of a finite double.
pub fn rat_from_f64(x: f64) -> Rat {
    Rat::from_f64(x).unwrap_or_else(Rat::zero)
}

/// Exact complex rational value of a finite complex double.
pub fn crat_from_c64(z: C64) -> CRat {
    CRat::new(rat_from_f64(z.re), rat_from_f64(z.im))
}

pub fn is_zero_c(z: &CRat) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// `i^k` for any integer k.
pub fn i_pow(k: i64) -> CRat {
    match k.rem_euclid(4) {
        0 => ci(1),
        1 => i_unit(),
        2 => ci(-1),
        _ => -i_unit(),
    }
}

pub fn c64_close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}
