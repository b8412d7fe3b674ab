//! Truncated step-2 polyhomogeneous expansions with optional closures.

use super::closure::{ClassTag, Closure};
use super::gaussian::GaussSum;
use super::resolvent::ResolventSum;
use super::term::moyal_term;
use crate::error::{Error, Result};
use crate::symcore::radial::{HomTerm, RadialRat};
use crate::symcore::scalar::{ci, CRat, Rat, C64};
use crate::symcore::PolyC;
use num_traits::One;
use std::collections::BTreeMap;

/// Default number of step-2 terms kept beyond the leading one.
pub fn default_depth(n: usize) -> usize {
    n + 3
}

/// Σ_j a_j with a_j homogeneous of degree order − 2j.
///
/// Terms are keyed by homogeneity degree. `valid_down_to` is the lowest
/// hdeg for which the stored terms are known; `None` means the stored
/// terms are the complete expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct PhgExpansion {
    n: usize,
    order: i32,
    terms: BTreeMap<i32, RadialRat>,
    valid_down_to: Option<i32>,
    closure: Option<Closure>,
}

fn sign(e: i32) -> CRat {
    if e.rem_euclid(2) == 0 {
        ci(1)
    } else {
        ci(-1)
    }
}

impl PhgExpansion {
    fn build(
        n: usize,
        order: i32,
        mut terms: BTreeMap<i32, RadialRat>,
        valid_down_to: Option<i32>,
        closure: Option<Closure>,
    ) -> Self {
        if let Some(v) = valid_down_to {
            terms.retain(|h, _| *h >= v);
        }
        terms.retain(|_, t| !t.is_zero());
        debug_assert!(terms.keys().all(|h| *h <= order && (order - h) % 2 == 0));
        PhgExpansion {
            n,
            order,
            terms,
            valid_down_to,
            closure,
        }
    }

    pub fn zero(n: usize) -> Self {
        Self::build(n, 0, BTreeMap::new(), None, Some(Closure::zero(n)))
    }

    pub fn one(n: usize) -> Self {
        Self::from_poly(PolyC::one(n)).expect("constant")
    }

    pub fn constant(n: usize, c: CRat) -> Self {
        Self::one(n).scale(&c)
    }

    /// Polynomial symbol; all homogeneous parts must share the parity of the degree.
    pub fn from_poly(p: PolyC) -> Result<Self> {
        let order = p.degree().unwrap_or(0) as i32;
        Self::from_poly_with_order(p, order)
    }

    pub fn from_poly_with_order(p: PolyC, order: i32) -> Result<Self> {
        let n = p.n();
        let mut terms = BTreeMap::new();
        for (d, part) in p.homogeneous_parts() {
            let d = d as i32;
            if d > order || (order - d) % 2 != 0 {
                return Err(Error::NotInAlgebraA(format!(
                    "polynomial part of degree {d} does not fit a step-2 expansion of order {order}"
                )));
            }
            terms.insert(d, RadialRat::from_poly(part));
        }
        Ok(Self::build(n, order, terms, None, Some(Closure::from_poly(p))))
    }

    /// Schwartz symbol: every expansion term vanishes.
    pub fn from_gauss(g: GaussSum) -> Self {
        let n = g.n;
        Self::build(n, 0, BTreeMap::new(), None, Some(Closure::from_gauss(g)))
    }

    /// Expansion read off a closure, kept through `depth` step-2 terms.
    pub fn from_closure(c: Closure, order: i32, depth: usize) -> Self {
        let n = c.n();
        let valid = order - 2 * depth as i32;
        let exact = c.resolvent.is_zero();
        let terms = c.expansion(if exact { i32::MIN / 4 } else { valid });
        Self::build(
            n,
            order,
            terms,
            if exact { None } else { Some(valid) },
            Some(c),
        )
    }

    /// The resolvent (Q − γ)⁻¹ as an order −2 expansion.
    pub fn resolvent(n: usize, gamma: Rat, depth: usize) -> Self {
        let c = Closure::from_resolvent(ResolventSum::pure(n, gamma, ci(1)));
        Self::from_closure(c, -2, depth)
    }

    /// A bare homogeneous symbol with no closure.
    pub fn from_terms(
        n: usize,
        order: i32,
        terms: BTreeMap<i32, RadialRat>,
        valid_down_to: Option<i32>,
    ) -> Self {
        Self::build(n, order, terms, valid_down_to, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn valid_down_to(&self) -> Option<i32> {
        self.valid_down_to
    }

    /// Number of known step-2 terms beyond the leading one; None when exact.
    pub fn depth(&self) -> Option<usize> {
        self.valid_down_to
            .map(|v| ((self.order - v) / 2).max(0) as usize)
    }

    pub fn closure(&self) -> Option<&Closure> {
        self.closure.as_ref()
    }

    pub fn tag(&self) -> ClassTag {
        match &self.closure {
            Some(c) => c.tag(),
            None => ClassTag::None,
        }
    }

    pub fn terms(&self) -> &BTreeMap<i32, RadialRat> {
        &self.terms
    }

    pub fn is_polynomial(&self) -> bool {
        self.valid_down_to.is_none()
            && self.terms.values().all(|t| t.is_polynomial())
            && self
                .closure
                .as_ref()
                .is_none_or(|c| c.gauss.is_zero() && c.resolvent.is_zero())
    }

    /// Polynomial value when the symbol is a polynomial.
    pub fn as_poly(&self) -> Option<PolyC> {
        if !self.is_polynomial() {
            return None;
        }
        let mut p = PolyC::zero(self.n);
        for t in self.terms.values() {
            p = p.add(t.numerator());
        }
        Some(p)
    }

    pub fn is_known(&self, hdeg: i32) -> bool {
        self.valid_down_to.is_none_or(|v| hdeg >= v)
    }

    /// Term of homogeneity `hdeg`, failing when it lies below the known range.
    pub fn term_at(&self, hdeg: i32) -> Result<HomTerm> {
        if !self.is_known(hdeg) {
            return Err(Error::DepthTooShallow {
                valid: self.valid_down_to.unwrap_or(i32::MIN),
                needed: hdeg,
            });
        }
        let v = self
            .terms
            .get(&hdeg)
            .cloned()
            .unwrap_or_else(|| RadialRat::zero(self.n));
        Ok(HomTerm { value: v, hdeg })
    }

    /// The j-th step-2 term, of hdeg order − 2j.
    pub fn term(&self, j: usize) -> Result<HomTerm> {
        self.term_at(self.order - 2 * j as i32)
    }

    fn combine(&self, o: &Self, f: impl Fn(&RadialRat, &RadialRat) -> RadialRat) -> Self {
        assert_eq!(self.n, o.n);
        let (hi, lo) = if self.order >= o.order { (self, o) } else { (o, self) };
        assert!(
            (hi.order - lo.order) % 2 == 0 || lo.terms.is_empty(),
            "adding expansions of different parity"
        );
        let order = hi.order;
        let valid = match (self.valid_down_to, o.valid_down_to) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let zero = RadialRat::zero(self.n);
        let mut terms = BTreeMap::new();
        for h in self.terms.keys().chain(o.terms.keys()) {
            let a = self.terms.get(h).unwrap_or(&zero);
            let b = o.terms.get(h).unwrap_or(&zero);
            terms.insert(*h, f(a, b));
        }
        Self::build(self.n, order, terms, valid, None)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.combine(o, |a, b| a.add(b));
        r.closure = match (&self.closure, &o.closure) {
            (Some(a), Some(b)) => Some(a.add(b)),
            _ => None,
        };
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CRat) -> Self {
        let terms = self.terms.iter().map(|(h, t)| (*h, t.scale(c))).collect();
        Self::build(
            self.n,
            self.order,
            terms,
            self.valid_down_to,
            self.closure.as_ref().map(|cl| cl.scale(c)),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-CRat::one())
    }

    /// Moyal product: c_p = Σ_{2k+l+m=p} B_k(a_l, b_m).
    pub fn star(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let order = self.order + o.order;
        let both_poly = self.is_polynomial() && o.is_polynomial();
        let valid = if both_poly {
            None
        } else {
            match (self.valid_down_to, o.valid_down_to) {
                (Some(a), Some(b)) => Some((a + o.order).max(b + self.order)),
                (Some(a), None) => Some(a + o.order),
                (None, Some(b)) => Some(b + self.order),
                (None, None) => {
                    let poly_side = self.is_polynomial() || o.is_polynomial();
                    if poly_side {
                        None
                    } else {
                        Some(order - 2 * default_depth(n) as i32)
                    }
                }
            }
        };
        let mut terms: BTreeMap<i32, RadialRat> = BTreeMap::new();
        for (ha, ta) in &self.terms {
            for (hb, tb) in &o.terms {
                let cap = match (ta.is_polynomial(), tb.is_polynomial()) {
                    (true, _) | (_, true) => {
                        let da = ta.numerator().degree().unwrap_or(0);
                        let db = tb.numerator().degree().unwrap_or(0);
                        match (ta.is_polynomial(), tb.is_polynomial()) {
                            (true, true) => da.min(db),
                            (true, false) => da,
                            _ => db,
                        }
                    }
                    _ => u32::MAX,
                };
                let a = HomTerm { value: ta.clone(), hdeg: *ha };
                let b = HomTerm { value: tb.clone(), hdeg: *hb };
                let mut k = 0u32;
                while k <= cap {
                    let h = ha + hb - 2 * k as i32;
                    if let Some(v) = valid {
                        if h < v {
                            break;
                        }
                    }
                    let t = moyal_term(&a, &b, k);
                    if !t.value.is_zero() {
                        let e = terms.entry(h).or_insert_with(|| RadialRat::zero(n));
                        *e = e.add(&t.value);
                    }
                    k += 1;
                }
            }
        }
        let closure = match (&self.closure, &o.closure) {
            (Some(a), Some(b)) => a.star(b),
            _ => None,
        };
        Self::build(n, order, terms, valid, closure)
    }

    /// Involution with signs (−1)^{(grade − h)/2} on the term of hdeg h.
    pub fn iota_graded(&self, grade: i32) -> Result<Self> {
        if (grade - self.order).rem_euclid(2) != 0 {
            return Err(Error::NotInAlgebraA(format!(
                "grade {grade} has the wrong parity for order {}",
                self.order
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(h, t)| (*h, t.scale(&sign((grade - h) / 2))))
            .collect();
        let closure = self.closure.as_ref().and_then(|c| c.iota(grade));
        Ok(Self::build(
            self.n,
            self.order,
            terms,
            self.valid_down_to,
            closure,
        ))
    }

    /// ι: the j-th step-2 term is multiplied by (−1)^j.
    pub fn iota(&self) -> Self {
        self.iota_graded(self.order).expect("order has its own parity")
    }

    /// Restrict to the terms with hdeg ≥ `valid`.
    pub fn truncate(&self, valid: i32) -> Self {
        let v = match self.valid_down_to {
            Some(old) => old.max(valid),
            None => valid,
        };
        let mut r = self.clone();
        r.valid_down_to = Some(v);
        r.terms.retain(|h, _| *h >= v);
        r
    }

    /// Sum of the known terms with hdeg ≥ `down_to`.
    pub fn partial_sum(&self, v: &[f64], down_to: i32) -> C64 {
        self.terms
            .iter()
            .filter(|(h, _)| **h >= down_to)
            .map(|(_, t)| t.eval(v))
            .sum()
    }

    pub fn eval(&self, v: &[f64]) -> Option<C64> {
        self.closure.as_ref().map(|c| c.eval(v))
    }

    /// Linear change of variables v ↦ M v applied to every part.
    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(h, t)| (*h, t.linear_substitute(m)))
            .collect();
        Self::build(
            self.n,
            self.order,
            terms,
            self.valid_down_to,
            self.closure.as_ref().map(|c| c.linear_substitute(m)),
        )
    }

    /// Whether both expansions agree on every term known to both.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let lo = match (self.valid_down_to, o.valid_down_to) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => i32::MIN,
        };
        let zero = RadialRat::zero(self.n);
        self.terms
            .keys()
            .chain(o.terms.keys())
            .filter(|h| **h >= lo)
            .all(|h| self.terms.get(h).unwrap_or(&zero) == o.terms.get(h).unwrap_or(&zero))
    }

    pub fn is_zero_expansion(&self) -> bool {
        self.terms.values().all(|t| t.is_zero())
    }
}

/// Lowest hdeg known for both operands of a binary operation.
pub fn joint_valid(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
