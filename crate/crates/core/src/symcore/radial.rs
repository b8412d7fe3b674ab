//! Radial rational functions P·Q⁻ᵏ and homogeneous expansion terms.

use super::poly::{mono_deg, PolyC};
use super::scalar::{ci, CRat, C64};
use super::special::sphere_moment_pi;
use num_traits::Zero;

/// A function P(x,ξ)·Q⁻ᵏ kept in lowest terms (Q does not divide P when k > 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadialRat {
    num: PolyC,
    k: u32,
}

impl RadialRat {
    pub fn new(num: PolyC, k: u32) -> Self {
        let mut r = RadialRat { num, k };
        r.canonicalize();
        r
    }

    pub fn zero(n: usize) -> Self {
        RadialRat {
            num: PolyC::zero(n),
            k: 0,
        }
    }

    pub fn from_poly(p: PolyC) -> Self {
        RadialRat { num: p, k: 0 }
    }

    /// Q⁻ᵏ.
    pub fn q_inv_pow(n: usize, k: u32) -> Self {
        RadialRat::new(PolyC::one(n), k)
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_by_q() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn n(&self) -> usize {
        self.num.n()
    }

    pub fn numerator(&self) -> &PolyC {
        &self.num
    }

    pub fn q_power(&self) -> u32 {
        self.k
    }

    /// The canonical list of (P, k) pairs; at most one entry.
    pub fn terms(&self) -> Vec<(PolyC, u32)> {
        if self.num.is_zero() {
            vec![]
        } else {
            vec![(self.num.clone(), self.k)]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.k == 0
    }

    /// Homogeneity degree, if the numerator is homogeneous.
    pub fn hdeg(&self) -> Option<i32> {
        if self.num.is_zero() || !self.num.is_homogeneous() {
            return None;
        }
        Some(self.num.degree().unwrap() as i32 - 2 * self.k as i32)
    }

    fn lift(&self, k: u32) -> PolyC {
        debug_assert!(k >= self.k);
        let q = PolyC::q(self.n());
        self.num.mul(&q.pow(k - self.k))
    }

    pub fn add(&self, other: &RadialRat) -> RadialRat {
        let k = self.k.max(other.k);
        RadialRat::new(self.lift(k).add(&other.lift(k)), k)
    }

    pub fn sub(&self, other: &RadialRat) -> RadialRat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RadialRat {
        RadialRat {
            num: self.num.neg(),
            k: self.k,
        }
    }

    pub fn scale(&self, c: &CRat) -> RadialRat {
        RadialRat::new(self.num.scale(c), self.k)
    }

    pub fn mul(&self, other: &RadialRat) -> RadialRat {
        RadialRat::new(self.num.mul(&other.num), self.k + other.k)
    }

    pub fn mul_poly(&self, p: &PolyC) -> RadialRat {
        RadialRat::new(self.num.mul(p), self.k)
    }

    /// ∂/∂v for v the variable with index `var`.
    pub fn deriv(&self, var: usize) -> RadialRat {
        if self.k == 0 {
            return RadialRat::from_poly(self.num.deriv(var));
        }
        let n = self.n();
        let q = PolyC::q(n);
        let v = PolyC::var(n, var);
        let top = self
            .num
            .deriv(var)
            .mul(&q)
            .sub(&v.mul(&self.num).scale(&ci(2 * self.k as i64)));
        RadialRat::new(top, self.k + 1)
    }

    pub fn deriv_multi(&self, gamma: &[u16]) -> RadialRat {
        let mut r = self.clone();
        for (var, &g) in gamma.iter().enumerate() {
            for _ in 0..g {
                r = r.deriv(var);
            }
        }
        r
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        let q: f64 = v.iter().map(|a| a * a).sum();
        self.num.eval(v) / q.powi(self.k as i32)
    }

    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> RadialRat {
        RadialRat::new(self.num.linear_substitute(m), self.k)
    }
}

impl std::fmt::Debug for RadialRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/Q^{}", self.num, self.k)
        }
    }
}

/// Exact value c·π^n of an integral over the unit sphere S^{2n−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereValue {
    pub n: usize,
    pub pi_coeff: CRat,
}

impl SphereValue {
    pub fn value(&self) -> C64 {
        super::scalar::crat_to_c64(&self.pi_coeff) * std::f64::consts::PI.powi(self.n as i32)
    }

    /// The value multiplied by (2π)^{−n}, which is rational.
    pub fn normalized(&self) -> CRat {
        self.pi_coeff.clone() / ci(1i64 << self.n)
    }
}

/// A homogeneous expansion term with its homogeneity degree.
#[derive(Clone, Debug, PartialEq)]
pub struct HomTerm {
    pub value: RadialRat,
    pub hdeg: i32,
}

impl HomTerm {
    pub fn new(value: RadialRat, hdeg: i32) -> Self {
        debug_assert!(value.is_zero() || value.hdeg() == Some(hdeg));
        HomTerm { value, hdeg }
    }

    /// Whether value(s·v) = s^hdeg·value(v), checked on the stored form.
    pub fn is_consistent(&self) -> bool {
        self.value.is_zero() || self.value.hdeg() == Some(self.hdeg)
    }
}

/// ∫_{S^{2n−1}} m dθ, using Q = 1 on the unit sphere.
pub fn sphere_integral(m: &HomTerm) -> SphereValue {
    sphere_integral_poly(m.value.numerator())
}

pub fn sphere_integral_poly(p: &PolyC) -> SphereValue {
    let mut acc = CRat::zero();
    for (mono, c) in p.terms() {
        let w = sphere_moment_pi(mono);
        if !w.is_zero() {
            acc += c.clone() * super::scalar::cr(w);
        }
    }
    SphereValue {
        n: p.n(),
        pi_coeff: acc,
    }
}

/// Total degree helper re-exported for callers working with monomials.
pub fn monomial_degree(m: &[u16]) -> u32 {
    mono_deg(m)
}
