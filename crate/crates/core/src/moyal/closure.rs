//! Closed-form evaluators attached to expansions, and their composition.

use super::gaussian::{GaussSum, GaussTerm, NormalForm};
use super::resolvent::{level_factor, ResolventSum};
use super::term::{moyal_term_with, poly_star, DerivCache, DiffTerm};
use crate::symcore::radial::RadialRat;
use crate::symcore::scalar::{cr, CRat, Rat, C64};
use crate::symcore::PolyC;
use num_traits::One;
use serde::Serialize;
use std::collections::BTreeMap;

/// Which closed-form class a symbol's closure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    Rational,
    Gaussian,
    ResolventIntegral,
    None,
}

/// poly + Σ P_λ e^{−λQ} + Σ P·K_{γ,k}(Q).
#[derive(Clone, Debug, PartialEq)]
pub struct Closure {
    pub poly: PolyC,
    pub gauss: GaussSum,
    pub resolvent: ResolventSum,
}

/// Pointwise multiplication by a polynomial, used to compose with
/// polynomial factors through finite Moyal sums.
trait PolyModule: DiffTerm {
    fn mul_by(&self, p: &PolyC) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn times(&self, c: &CRat) -> Self;
    fn zero_of(n: usize) -> Self;
}

impl PolyModule for GaussSum {
    fn mul_by(&self, p: &PolyC) -> Self {
        let mut r = GaussSum::zero(self.n);
        for t in self.terms() {
            r.add_term(GaussTerm::new(t.poly.mul(p), t.lambda));
        }
        r
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, c: &CRat) -> Self {
        self.scale(c)
    }
    fn zero_of(n: usize) -> Self {
        GaussSum::zero(n)
    }
}

impl DiffTerm for GaussSum {
    fn num_pairs(&self) -> usize {
        self.n
    }
    fn d(&self, var: usize) -> Self {
        let mut r = GaussSum::zero(self.n);
        for t in self.terms() {
            r.add_term(t.d(var));
        }
        r
    }
    fn is_zero_term(&self) -> bool {
        self.is_zero()
    }
}

impl PolyModule for ResolventSum {
    fn mul_by(&self, p: &PolyC) -> Self {
        self.mul_poly(p)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn times(&self, c: &CRat) -> Self {
        self.scale(c)
    }
    fn zero_of(n: usize) -> Self {
        ResolventSum::zero(n)
    }
}

/// p # x (poly_left = true) or x # p, a finite Moyal sum.
fn poly_star_module<M: PolyModule>(p: &PolyC, x: &M, poly_left: bool) -> M {
    let n = p.n();
    let deg = match p.degree() {
        Some(d) => d,
        None => return M::zero_of(n),
    };
    let mut acc = M::zero_of(n);
    let mut cp = DerivCache::new(p);
    let mut cx = DerivCache::new(x);
    for k in 0..=deg {
        let t = if poly_left {
            moyal_term_with(
                &mut cp,
                &mut cx,
                n,
                k,
                |a: &PolyC, b: &M| b.mul_by(a),
                |a, b| a.plus(&b),
                |a, c| a.times(c),
                M::zero_of(n),
            )
        } else {
            moyal_term_with(
                &mut cx,
                &mut cp,
                n,
                k,
                |a: &M, b: &PolyC| a.mul_by(b),
                |a, b| a.plus(&b),
                |a, c| a.times(c),
                M::zero_of(n),
            )
        };
        acc = acc.plus(&t);
    }
    acc
}

pub fn poly_star_gauss(p: &PolyC, g: &GaussSum) -> GaussSum {
    poly_star_module(p, g, true)
}

pub fn gauss_star_poly(g: &GaussSum, p: &PolyC) -> GaussSum {
    poly_star_module(p, g, false)
}

pub fn gauss_sum_star(a: &GaussSum, b: &GaussSum) -> GaussSum {
    let mut r = GaussSum::zero(a.n);
    for ta in a.terms() {
        let na = NormalForm::from_gauss(&ta);
        for tb in b.terms() {
            let nb = NormalForm::from_gauss(&tb);
            r.add_term(na.mul(&nb).to_gauss());
        }
    }
    r
}

/// G # R where G has only λ = 1 parts and R is pure; None otherwise.
fn gauss_star_pure_resolvent(g: &GaussSum, r: &ResolventSum, gauss_left: bool) -> Option<GaussSum> {
    let pure = r.pure_parts()?;
    let n = g.n;
    let mut out = GaussSum::zero(n);
    for t in g.terms() {
        if t.lambda != Rat::one() {
            return None;
        }
        let nf = NormalForm::from_gauss(&t);
        for (gamma, c) in &pure {
            let mut acc = NormalForm::zero(n, Rat::one());
            for ((a, b), v) in &nf.terms {
                let level: u32 = if gauss_left {
                    b.iter().map(|&e| e as u32).sum()
                } else {
                    a.iter().map(|&e| e as u32).sum()
                };
                let den = level_factor(n, level, gamma);
                let mut single = NormalForm::zero(n, Rat::one());
                single
                    .terms
                    .insert((a.clone(), b.clone()), v.clone() * cr(den) * c.clone());
                acc = acc.add(&single);
            }
            out.add_term(acc.to_gauss());
        }
    }
    Some(out)
}


/// R_γ # R_δ = (R_γ − R_δ)/(γ − δ) for pure resolvents with γ ≠ δ.
fn pure_resolvent_star(a: &ResolventSum, b: &ResolventSum) -> Option<ResolventSum> {
    let pa = a.pure_parts()?;
    let pb = b.pure_parts()?;
    let n = a.n;
    let mut out = ResolventSum::zero(n);
    for (g, c1) in &pa {
        for (d, c2) in &pb {
            if g == d {
                return None;
            }
            let f = c1.clone() * c2.clone() * cr((g - d).recip());
            out.add_part(g.clone(), 0, PolyC::constant(n, f.clone()));
            out.add_part(d.clone(), 0, PolyC::constant(n, -f));
        }
    }
    Some(out)
}

impl Closure {
    pub fn zero(n: usize) -> Self {
        Closure {
            poly: PolyC::zero(n),
            gauss: GaussSum::zero(n),
            resolvent: ResolventSum::zero(n),
        }
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn from_poly(p: PolyC) -> Self {
        let mut c = Closure::zero(p.n());
        c.poly = p;
        c
    }

    pub fn from_gauss(g: GaussSum) -> Self {
        let mut c = Closure::zero(g.n);
        c.gauss = g;
        c
    }

    pub fn from_resolvent(r: ResolventSum) -> Self {
        let mut c = Closure::zero(r.n);
        c.resolvent = r;
        c
    }

    pub fn tag(&self) -> ClassTag {
        if !self.resolvent.is_zero() {
            ClassTag::ResolventIntegral
        } else if !self.gauss.is_zero() {
            ClassTag::Gaussian
        } else {
            ClassTag::Rational
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.gauss.is_zero() && self.resolvent.is_zero()
    }

    pub fn add(&self, o: &Closure) -> Closure {
        Closure {
            poly: self.poly.add(&o.poly),
            gauss: self.gauss.add(&o.gauss),
            resolvent: self.resolvent.add(&o.resolvent),
        }
    }

    pub fn scale(&self, c: &CRat) -> Closure {
        Closure {
            poly: self.poly.scale(c),
            gauss: self.gauss.scale(c),
            resolvent: self.resolvent.scale(c),
        }
    }

    pub fn neg(&self) -> Closure {
        self.scale(&-CRat::one())
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        let mut acc = self.poly.eval(v);
        if !self.gauss.is_zero() {
            acc += self.gauss.eval(v);
        }
        if !self.resolvent.is_zero() {
            acc += self.resolvent.eval(v);
        }
        acc
    }

    /// Moyal product of closures when every pair of parts has a closed form.
    pub fn star(&self, o: &Closure) -> Option<Closure> {
        let n = self.n();
        let mut out = Closure::zero(n);
        out.poly = poly_star(&self.poly, &o.poly);
        // polynomial × anything
        if !o.gauss.is_zero() {
            out.gauss = out.gauss.add(&poly_star_gauss(&self.poly, &o.gauss));
        }
        if !o.resolvent.is_zero() {
            out.resolvent = out
                .resolvent
                .add(&poly_star_module(&self.poly, &o.resolvent, true));
        }
        if !self.gauss.is_zero() {
            out.gauss = out.gauss.add(&gauss_star_poly(&self.gauss, &o.poly));
        }
        if !self.resolvent.is_zero() {
            out.resolvent = out
                .resolvent
                .add(&poly_star_module(&o.poly, &self.resolvent, false));
        }
        // gaussian × gaussian
        if !self.gauss.is_zero() && !o.gauss.is_zero() {
            out.gauss = out.gauss.add(&gauss_sum_star(&self.gauss, &o.gauss));
        }
        // gaussian × pure resolvent
        if !self.gauss.is_zero() && !o.resolvent.is_zero() {
            out.gauss = out
                .gauss
                .add(&gauss_star_pure_resolvent(&self.gauss, &o.resolvent, true)?);
        }
        if !self.resolvent.is_zero() && !o.gauss.is_zero() {
            out.gauss = out
                .gauss
                .add(&gauss_star_pure_resolvent(&o.gauss, &self.resolvent, false)?);
        }
        // pure resolvent × pure resolvent
        if !self.resolvent.is_zero() && !o.resolvent.is_zero() {
            out.resolvent = out
                .resolvent
                .add(&pure_resolvent_star(&self.resolvent, &o.resolvent)?);
        }
        Some(out)
    }

    /// Expansion terms implied by the closure, hdeg ≥ `valid`.
    pub fn expansion(&self, valid: i32) -> BTreeMap<i32, RadialRat> {
        let mut out: BTreeMap<i32, RadialRat> = BTreeMap::new();
        for (d, p) in self.poly.homogeneous_parts() {
            if d as i32 >= valid {
                out.insert(d as i32, RadialRat::from_poly(p));
            }
        }
        for (h, t) in self.resolvent.expansion(valid) {
            let e = out.entry(h).or_insert_with(|| RadialRat::zero(self.n()));
            *e = e.add(&t);
        }
        out.retain(|_, t| !t.is_zero());
        out
    }

    /// Grade-r involution of the non-Schwartz parts; gaussian parts are dropped.
    pub fn iota(&self, grade: i32) -> Option<Closure> {
        let mut poly = PolyC::zero(self.n());
        for (d, p) in self.poly.homogeneous_parts() {
            let diff = grade - d as i32;
            if diff.rem_euclid(2) != 0 {
                return None;
            }
            let s = if (diff / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            poly = poly.add(&p.scale(&crate::symcore::scalar::ci(s)));
        }
        let resolvent = self.resolvent.iota(grade)?;
        if !resolvent.is_admissible() {
            return None;
        }
        Some(Closure {
            poly,
            gauss: GaussSum::zero(self.n()),
            resolvent,
        })
    }

    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> Closure {
        Closure {
            poly: self.poly.linear_substitute(m),
            gauss: self.gauss.linear_substitute(m),
            resolvent: self.resolvent.linear_substitute(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::gaussian::vacuum_symbol;
    use crate::symcore::scalar::{ci, rat, rint};

    fn s_closure(n: usize) -> Closure {
        Closure::from_gauss(GaussSum::single(vacuum_symbol(n)))
    }

    #[test]
    fn vacuum_idempotent() {
        for n in 1..=2 {
            let s = s_closure(n);
            assert_eq!(s.star(&s).unwrap(), s);
        }
    }

    #[test]
    fn q_on_vacuum() {
        for n in 1..=2 {
            let s = s_closure(n);
            let q = Closure::from_poly(PolyC::q(n));
            let l = q.star(&s).unwrap();
            let r = s.star(&q).unwrap();
            assert_eq!(l, s.scale(&ci(n as i64)));
            assert_eq!(r, l);
        }
    }

    #[test]
    fn resolvent_inverts_q_minus_gamma() {
        for (n, g) in [(1usize, rat(1, 2)), (2, rat(-3, 4)), (2, rat(1, 3))] {
            let qg = PolyC::q(n).sub(&PolyC::constant(n, cr(g.clone())));
            let r = Closure::from_resolvent(ResolventSum::pure(n, g, ci(1)));
            let pl = Closure::from_poly(qg);
            let a = pl.star(&r).unwrap();
            let b = r.star(&pl).unwrap();
            for v in [[0.3, -0.2, 0.7, 0.1], [1.5, 0.4, -2.0, 0.9]] {
                let v = &v[..2 * n];
                assert!((a.eval(v) - 1.0).norm() < 1e-9, "{:?}", a.eval(v));
                assert!((b.eval(v) - 1.0).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn gauss_times_resolvent_matches_spectral() {
        // R_γ # s = s/(n−γ)
        let n = 1;
        let g = rat(1, 2);
        let s = s_closure(n);
        let r = Closure::from_resolvent(ResolventSum::pure(n, g.clone(), ci(1)));
        let p = r.star(&s).unwrap();
        assert_eq!(p, s.scale(&cr((rint(n as i64) - g).recip())));
    }

    #[test]
    fn resolvent_identity() {
        let n = 2;
        let (g, d) = (rat(1, 2), rat(-1, 3));
        let a = Closure::from_resolvent(ResolventSum::pure(n, g.clone(), ci(1)));
        let b = Closure::from_resolvent(ResolventSum::pure(n, d.clone(), ci(1)));
        let ab = a.star(&b).unwrap();
        // check (Q−γ)#ab = R_δ
        let qg = Closure::from_poly(PolyC::q(n).sub(&PolyC::constant(n, cr(g))));
        let lhs = qg.star(&ab).unwrap();
        for v in [[0.3, -0.2, 0.7, 0.1], [2.5, 0.4, -2.0, 0.9]] {
            assert!((lhs.eval(&v) - b.eval(&v)).norm() < 1e-9);
        }
    }

    #[test]
    fn gauss_semigroup_with_higher_hermite() {
        // exercise polynomial prefactors: (x s) # (ξ s) via poly#gauss equals NF route
        let n = 1;
        let s = GaussSum::single(vacuum_symbol(n));
        let xs = poly_star_gauss(&PolyC::x(n, 0), &s);
        let sx = gauss_star_poly(&s, &PolyC::xi(n, 0));
        let via_nf = gauss_sum_star(&xs, &sx);
        // x#s#s#ξ = x#s#ξ
        let direct = gauss_star_poly(&xs, &PolyC::xi(n, 0));
        assert_eq!(via_nf, direct);
    }
}
