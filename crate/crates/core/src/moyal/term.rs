//! The graded Moyal bidifferential terms (a#b)_k.

use crate::symcore::radial::{HomTerm, RadialRat};
use crate::symcore::scalar::{cr, i_pow, CRat};
use crate::symcore::special::factorial;
use crate::symcore::{Mono, PolyC};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Objects that can be differentiated in the phase-space variables.
pub trait DiffTerm: Clone {
    fn num_pairs(&self) -> usize;
    fn d(&self, var: usize) -> Self;
    fn is_zero_term(&self) -> bool;
}

impl DiffTerm for PolyC {
    fn num_pairs(&self) -> usize {
        self.n()
    }
    fn d(&self, var: usize) -> Self {
        self.deriv(var)
    }
    fn is_zero_term(&self) -> bool {
        self.is_zero()
    }
}

impl DiffTerm for RadialRat {
    fn num_pairs(&self) -> usize {
        self.n()
    }
    fn d(&self, var: usize) -> Self {
        self.deriv(var)
    }
    fn is_zero_term(&self) -> bool {
        self.is_zero()
    }
}

/// Memoized mixed partial derivatives of a fixed term.
pub struct DerivCache<A: DiffTerm> {
    map: HashMap<Mono, A>,
}

impl<A: DiffTerm> DerivCache<A> {
    pub fn new(base: &A) -> Self {
        let mut map = HashMap::new();
        map.insert(vec![0; 2 * base.num_pairs()], base.clone());
        DerivCache { map }
    }

    pub fn get(&mut self, gamma: &[u16]) -> A {
        if let Some(v) = self.map.get(gamma) {
            return v.clone();
        }
        let var = gamma.iter().position(|&g| g > 0).expect("base is cached");
        let mut parent = gamma.to_vec();
        parent[var] -= 1;
        let p = self.get(&parent);
        let r = if p.is_zero_term() { p } else { p.d(var) };
        self.map.insert(gamma.to_vec(), r.clone());
        r
    }
}

/// All multi-indices of length `parts` with entries summing to `k`.
pub fn compositions(k: u32, parts: usize) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; parts];
    fn rec(k: u32, i: usize, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i + 1 == cur.len() {
            cur[i] = k as u16;
            out.push(cur.clone());
            return;
        }
        for a in 0..=k {
            cur[i] = a as u16;
            rec(k - a, i + 1, cur, out);
        }
        cur[i] = 0;
    }
    if parts == 0 {
        return out;
    }
    rec(k, 0, &mut cur, &mut out);
    out
}

fn mono_factorial(m: &[u16]) -> BigInt {
    m.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e as u32))
}

/// (i/2)^k.
pub fn half_i_pow(k: u32) -> CRat {
    let two_k = BigInt::from(2).pow(k);
    i_pow(k as i64) * cr(BigRational::new(BigInt::one(), two_k))
}

/// The index pairs and signed weights (−1)^{|β|}/(α!β!) of the k-th Moyal term,
/// returned as (derivative of a, derivative of b, weight).
pub fn moyal_index_set(n: usize, k: u32) -> Vec<(Mono, Mono, CRat)> {
    let mut out = Vec::new();
    for ab in compositions(k, 2 * n) {
        let (alpha, beta) = ab.split_at(n);
        let bsum: u32 = beta.iter().map(|&e| e as u32).sum();
        let w = BigRational::new(
            if bsum.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() },
            mono_factorial(alpha) * mono_factorial(beta),
        );
        let mut da = alpha.to_vec();
        da.extend_from_slice(beta);
        let mut db = beta.to_vec();
        db.extend_from_slice(alpha);
        out.push((da, db, cr(w)));
    }
    out
}

/// Generic k-th Moyal term (i/2)^k Σ (−1)^{|β|}/(α!β!) ∂x^α∂ξ^β a · ∂x^β∂ξ^α b.
pub fn moyal_term_with<A: DiffTerm, B: DiffTerm, C>(
    ca: &mut DerivCache<A>,
    cb: &mut DerivCache<B>,
    n: usize,
    k: u32,
    mul: impl Fn(&A, &B) -> C,
    add: impl Fn(C, C) -> C,
    scale: impl Fn(C, &CRat) -> C,
    zero: C,
) -> C {
    let mut acc = zero;
    for (da, db, w) in moyal_index_set(n, k) {
        let x = ca.get(&da);
        if x.is_zero_term() {
            continue;
        }
        let y = cb.get(&db);
        if y.is_zero_term() {
            continue;
        }
        acc = add(acc, scale(mul(&x, &y), &w));
    }
    scale(acc, &half_i_pow(k))
}

/// (i/2)^k (a#b)_k for polynomials.
pub fn moyal_term_poly(a: &PolyC, b: &PolyC, k: u32) -> PolyC {
    let n = a.n();
    let mut ca = DerivCache::new(a);
    let mut cb = DerivCache::new(b);
    moyal_term_with(
        &mut ca,
        &mut cb,
        n,
        k,
        |x: &PolyC, y: &PolyC| x.mul(y),
        |x, y| x.add(&y),
        |x, c| x.scale(c),
        PolyC::zero(n),
    )
}

/// (i/2)^k (a#b)_k for homogeneous radial terms; hdeg drops by 2k.
pub fn moyal_term(a: &HomTerm, b: &HomTerm, k: u32) -> HomTerm {
    let n = a.value.n();
    let mut ca = DerivCache::new(&a.value);
    let mut cb = DerivCache::new(&b.value);
    let v = moyal_term_with(
        &mut ca,
        &mut cb,
        n,
        k,
        |x: &RadialRat, y: &RadialRat| x.mul(y),
        |x, y| x.add(&y),
        |x, c| x.scale(c),
        RadialRat::zero(n),
    );
    HomTerm {
        value: v,
        hdeg: a.hdeg + b.hdeg - 2 * k as i32,
    }
}

type OneDimKey = (u16, u16, u16, u16);

/// Product of one-mode monomials x^a ξ^b # x^c ξ^d graded by order:
/// entries (k, exponent of x, exponent of ξ, coefficient including (i/2)^k).
fn one_dim_product(key: OneDimKey) -> Vec<(u32, u16, u16, CRat)> {
    let (a, b, c, d) = key;
    let mut out = Vec::new();
    let ff = |m: u16, p: u16| -> BigInt {
        let mut r = BigInt::one();
        for t in 0..p {
            r *= BigInt::from(m - t);
        }
        r
    };
    for p in 0..=a.min(d) {
        for q in 0..=b.min(c) {
            let num = ff(a, p) * ff(b, q) * ff(c, q) * ff(d, p);
            let den = factorial(p as u32) * factorial(q as u32);
            let sign = if q % 2 == 0 { 1 } else { -1 };
            let k = (p + q) as u32;
            let coeff = cr(BigRational::new(num * sign, den)) * half_i_pow(k);
            out.push((k, a - p + c - q, b - q + d - p, coeff));
        }
    }
    out
}

/// Full Moyal product of polynomials split by order k, using the
/// factorization of the Moyal operator over the n modes.
pub fn poly_star_graded(a: &PolyC, b: &PolyC) -> BTreeMap<u32, PolyC> {
    let n = a.n();
    assert_eq!(n, b.n());
    let mut cache: HashMap<OneDimKey, Vec<(u32, u16, u16, CRat)>> = HashMap::new();
    let mut out: BTreeMap<u32, PolyC> = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let c0 = ca.clone() * cb.clone();
            // partial products over modes: (k, mono, coeff)
            let mut partial: Vec<(u32, Mono, CRat)> = vec![(0, vec![0; 2 * n], c0)];
            for j in 0..n {
                let key = (ma[j], ma[n + j], mb[j], mb[n + j]);
                let table = cache
                    .entry(key)
                    .or_insert_with(|| one_dim_product(key))
                    .clone();
                let mut next = Vec::with_capacity(partial.len() * table.len());
                for (k, m, c) in &partial {
                    for (k1, ex, eq, c1) in &table {
                        let mut m2 = m.clone();
                        m2[j] = *ex;
                        m2[n + j] = *eq;
                        next.push((k + k1, m2, c.clone() * c1.clone()));
                    }
                }
                partial = next;
            }
            for (k, m, c) in partial {
                if !c.is_zero() {
                    out.entry(k)
                        .or_insert_with(|| PolyC::zero(n))
                        .add_term(m, c);
                }
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Exact Moyal product of two polynomials.
pub fn poly_star(a: &PolyC, b: &PolyC) -> PolyC {
    poly_star_graded(a, b)
        .into_values()
        .fold(PolyC::zero(a.n()), |acc, p| acc.add(&p))
}

/// Moyal commutator a#b − b#a of polynomials.
pub fn poly_commutator(a: &PolyC, b: &PolyC) -> PolyC {
    poly_star(a, b).sub(&poly_star(b, a))
}
