//! Sparse polynomials in (x₁..xₙ, ξ₁..ξₙ) with exact complex-rational coefficients.

use super::scalar::{ci, crat_to_c64, is_zero_c, rint, CRat, C64};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent multi-index; entries `0..n` are the x-exponents, `n..2n` the ξ-exponents.
pub type Mono = Vec<u16>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyC {
    n: usize,
    terms: BTreeMap<Mono, CRat>,
}

impl PolyC {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "half-dimension must be at least 1");
        PolyC {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: CRat) -> Self {
        let mut p = PolyC::zero(n);
        p.add_term(vec![0; 2 * n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        PolyC::constant(n, ci(1))
    }

    pub fn monomial(n: usize, mono: Mono, c: CRat) -> Self {
        assert_eq!(mono.len(), 2 * n);
        let mut p = PolyC::zero(n);
        p.add_term(mono, c);
        p
    }

    /// The coordinate function with index `var` (x_j = j, ξ_j = n + j).
    pub fn var(n: usize, var: usize) -> Self {
        let mut m = vec![0; 2 * n];
        m[var] = 1;
        PolyC::monomial(n, m, ci(1))
    }

    pub fn x(n: usize, j: usize) -> Self {
        PolyC::var(n, j)
    }

    pub fn xi(n: usize, j: usize) -> Self {
        PolyC::var(n, n + j)
    }

    /// Q = Σ (x_j² + ξ_j²).
    pub fn q(n: usize) -> Self {
        let mut p = PolyC::zero(n);
        for v in 0..2 * n {
            let mut m = vec![0; 2 * n];
            m[v] = 2;
            p.add_term(m, ci(1));
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Mono, CRat)>) -> Self {
        let mut p = PolyC::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Mono, CRat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_deg(m)).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_deg(m)).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn coeff(&self, m: &[u16]) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    pub fn constant_term(&self) -> CRat {
        self.coeff(&vec![0; 2 * self.n])
    }

    pub fn add_term(&mut self, m: Mono, c: CRat) {
        debug_assert_eq!(m.len(), 2 * self.n);
        if is_zero_c(&c) {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if is_zero_c(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &PolyC) -> PolyC {
        assert_eq!(self.n, other.n);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &PolyC) -> PolyC {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyC {
        self.scale(&ci(-1))
    }

    pub fn scale(&self, c: &CRat) -> PolyC {
        if is_zero_c(c) {
            return PolyC::zero(self.n);
        }
        PolyC {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &PolyC) -> PolyC {
        assert_eq!(self.n, other.n);
        let mut r = PolyC::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Mono = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                r.add_term(m, ca.clone() * cb.clone());
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> PolyC {
        (0..k).fold(PolyC::one(self.n), |acc, _| acc.mul(self))
    }

    /// Partial derivative with respect to variable `var`.
    pub fn deriv(&self, var: usize) -> PolyC {
        let mut r = PolyC::zero(self.n);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] = e - 1;
            r.add_term(m2, c.clone() * ci(e as i64));
        }
        r
    }

    /// Mixed partial ∂^γ for a full 2n multi-index γ.
    pub fn deriv_multi(&self, gamma: &[u16]) -> PolyC {
        let mut r = PolyC::zero(self.n);
        'outer: for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut m2 = m.clone();
            for v in 0..2 * self.n {
                let g = gamma[v];
                if g == 0 {
                    continue;
                }
                if m[v] < g {
                    continue 'outer;
                }
                let mut f = 1i64;
                for t in 0..g {
                    f *= (m[v] - t) as i64;
                }
                coef *= ci(f);
                m2[v] = m[v] - g;
            }
            r.add_term(m2, coef);
        }
        r
    }

    pub fn homogeneous_part(&self, d: u32) -> PolyC {
        PolyC {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_deg(m) == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Decomposition into nonzero homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, PolyC> {
        let mut out: BTreeMap<u32, PolyC> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(mono_deg(m))
                .or_insert_with(|| PolyC::zero(self.n))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&CRat) -> CRat) -> PolyC {
        PolyC::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn conj(&self) -> PolyC {
        self.map_coeffs(|c| c.conj())
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        self.eval_c(&v.iter().map(|&a| C64::new(a, 0.0)).collect::<Vec<_>>())
    }

    pub fn eval_c(&self, v: &[C64]) -> C64 {
        assert_eq!(v.len(), 2 * self.n);
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = crat_to_c64(c);
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= v[k].powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_exact(&self, v: &[CRat]) -> CRat {
        let mut acc = CRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= v[k].clone();
                }
            }
            acc += t;
        }
        acc
    }

    /// Composition with a linear map: returns v ↦ self(M v), `m` given row-major (2n × 2n).
    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> PolyC {
        let dim = 2 * self.n;
        let images: Vec<PolyC> = (0..dim)
            .map(|row| {
                let mut p = PolyC::zero(self.n);
                for (col, c) in m[row].iter().enumerate() {
                    let mut mono = vec![0; dim];
                    mono[col] = 1;
                    p.add_term(mono, c.clone());
                }
                p
            })
            .collect();
        let mut out = PolyC::zero(self.n);
        for (mono, c) in &self.terms {
            let mut t = PolyC::constant(self.n, c.clone());
            for (k, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[k]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact quotient by Q if Q divides `self`.
    pub fn div_by_q(&self) -> Option<PolyC> {
        let n = self.n;
        let mut rem = self.clone();
        let mut quot = PolyC::zero(n);
        // Reduce modulo Q using x₁² = Q − (the other squares).
        let q_rest: Vec<usize> = (1..2 * n).collect();
        loop {
            let lead = rem
                .terms
                .iter()
                .find(|(m, _)| m[0] >= 2)
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = lead else { break };
            let mut base = m.clone();
            base[0] -= 2;
            quot.add_term(base.clone(), c.clone());
            // rem -= c·base·Q
            rem.add_term(m, -c.clone());
            for &v in &q_rest {
                let mut mm = base.clone();
                mm[v] += 2;
                rem.add_term(mm, -c.clone());
            }
        }
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    /// Whether every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Whether every coefficient is purely imaginary.
    pub fn is_imaginary(&self) -> bool {
        self.terms.values().all(|c| c.re.is_zero())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| crat_to_c64(c).norm())
            .fold(0.0, f64::max)
    }

    /// Whether every monomial has even total degree parity equal to `parity`.
    pub fn has_parity(&self, parity: u32) -> bool {
        self.terms.keys().all(|m| mono_deg(m) % 2 == parity % 2)
    }
}

pub fn mono_deg(m: &[u16]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

impl fmt::Debug for PolyC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = m.iter().all(|&e| e == 0);
            let mut parts: Vec<String> = Vec::new();
            if c.im.is_zero() {
                if c.re != rint(1) || is_const {
                    parts.push(format!("{}", c.re));
                }
            } else if c.re.is_zero() {
                parts.push(format!("{}i", c.im));
            } else {
                parts.push(format!("({}+{}i)", c.re, c.im));
            }
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = if k < self.n {
                    format!("x{}", k + 1)
                } else {
                    format!("xi{}", k - self.n + 1)
                };
                parts.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
