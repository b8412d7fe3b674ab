//! Truncated Laurent series in the heat parameter t.

use super::scalar::{rint, Coeff, Rat};
use super::special::factorial;
use num_traits::Zero;

/// Σ_{k=lead}^{order} c_k t^k, known exactly through t^order.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentT<T: Coeff> {
    pub lead: i32,
    pub coeffs: Vec<T>,
    pub order: i32,
}

/// Default number of powers kept beyond the constant term.
pub const DEFAULT_ORDER: i32 = 4;

impl<T: Coeff> LaurentT<T> {
    pub fn new(lead: i32, mut coeffs: Vec<T>, order: i32) -> Self {
        let len = (order - lead + 1).max(0) as usize;
        coeffs.resize(len, T::zero());
        LaurentT {
            lead,
            coeffs,
            order,
        }
    }

    pub fn zero(order: i32) -> Self {
        LaurentT::new(0, vec![], order)
    }

    pub fn constant(c: T, order: i32) -> Self {
        LaurentT::new(0, vec![c], order)
    }

    /// The monomial t^k.
    pub fn t_pow(k: i32, order: i32) -> Self {
        LaurentT::new(k, vec![T::one()], order)
    }

    pub fn coeff(&self, k: i32) -> T {
        if k < self.lead || k > self.order {
            return T::zero();
        }
        self.coeffs[(k - self.lead) as usize].clone()
    }

    pub fn constant_term(&self) -> T {
        self.coeff(0)
    }

    pub fn scale(&self, c: &T) -> Self {
        LaurentT::new(
            self.lead,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.order,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let lead = self.lead.min(other.lead);
        let order = self.order.min(other.order);
        let coeffs = (lead..=order)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        LaurentT::new(lead, coeffs, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-T::one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lead = self.lead + other.lead;
        // Each factor is exact through its own order.
        let order = (self.order + other.lead).min(other.order + self.lead);
        let len = (order - lead + 1).max(0) as usize;
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentT::new(lead, out, order)
    }

    /// Drops leading zero coefficients.
    pub fn normalize(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if skip == self.coeffs.len() {
            return LaurentT::zero(self.order);
        }
        LaurentT::new(
            self.lead + skip as i32,
            self.coeffs[skip..].to_vec(),
            self.order,
        )
    }

    /// Multiplicative inverse of a series whose leading coefficient is nonzero.
    pub fn inverse(&self) -> Self {
        let s = self.normalize();
        assert!(!s.coeffs.is_empty(), "inverse of zero series");
        let rel = s.order - s.lead; // relative precision
        let lead = -s.lead;
        let len = (rel + 1) as usize;
        let a0 = s.coeffs[0].clone();
        let mut b = vec![T::zero(); len];
        b[0] = T::one() / a0.clone();
        for k in 1..len {
            let mut acc = T::zero();
            for j in 1..=k {
                if j < s.coeffs.len() {
                    acc = acc + s.coeffs[j].clone() * b[k - j].clone();
                }
            }
            b[k] = -acc / a0.clone();
        }
        LaurentT::new(lead, b, lead + rel)
    }

    pub fn powi(&self, k: i32) -> Self {
        if k < 0 {
            return self.inverse().powi(-k);
        }
        let s = self.normalize();
        let rel = s.order - s.lead;
        let mut acc = LaurentT::new(0, vec![T::one()], rel);
        for _ in 0..k {
            acc = acc.mul(&s);
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> LaurentT<U> {
        LaurentT::new(self.lead, self.coeffs.iter().map(f).collect(), self.order)
    }
}

/// Series of sinh(t)/t, cosh(t), tanh(t)/t through t^order (order ≥ 0).
fn sinh_over_t<T: Coeff>(order: i32) -> LaurentT<T> {
    let c = (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                T::from_rat(&Rat::new(1.into(), factorial(k as u32 + 1)))
            } else {
                T::zero()
            }
        })
        .collect();
    LaurentT::new(0, c, order)
}

fn cosh_series<T: Coeff>(order: i32) -> LaurentT<T> {
    let c = (0..=order)
        .map(|k| {
            if k % 2 == 0 {
                T::from_rat(&Rat::new(1.into(), factorial(k as u32)))
            } else {
                T::zero()
            }
        })
        .collect();
    LaurentT::new(0, c, order)
}

/// sinh(t)^a · cosh(t)^b as a Laurent series exact through t^order.
pub fn sinh_cosh_power<T: Coeff>(a: i32, b: i32, order: i32) -> LaurentT<T> {
    let rel = order - a;
    let rel = rel.max(0);
    let s = sinh_over_t::<T>(rel).powi(a);
    let c = cosh_series::<T>(rel).powi(b);
    let body = s.mul(&c);
    LaurentT::new(
        body.lead + a,
        body.coeffs.clone(),
        (body.order + a).min(order),
    )
}

/// tanh(t) through t^order.
pub fn tanh_series<T: Coeff>(order: i32) -> LaurentT<T> {
    sinh_cosh_power::<T>(1, -1, order)
}

/// Rational 1/2 as a coefficient.
pub fn half<T: Coeff>() -> T {
    T::from_rat(&Rat::new(1.into(), 2.into()))
}

pub fn from_int<T: Coeff>(k: i64) -> T {
    T::from_rat(&rint(k))
}

impl<T: Coeff> Zero for LaurentT<T> {
    fn zero() -> Self {
        LaurentT::zero(DEFAULT_ORDER)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<T: Coeff> std::ops::Add for LaurentT<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        LaurentT::add(&self, &rhs)
    }
}
