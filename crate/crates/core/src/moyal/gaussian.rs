//! The gaussian class P·e^{−λQ} and its exact normal-form algebra.
//!
//! With z_j = x_j + iξ_j, every gaussian-class symbol is a finite sum of
//! z̄^{#α} # G_λ # z^{#β}, where G_λ = e^{−λQ}. Moving G_λ past z̄ or z costs a
//! factor r = (1−λ)/(1+λ), and G_a # G_b = (1+ab)^{−n} G_{(a+b)/(1+ab)}.

use super::term::DiffTerm;
use crate::symcore::scalar::{ci, cr, i_unit, rat, rat_to_f64, rint, CRat, Rat, C64};
use crate::symcore::special::{binomial, factorial, gauss_moment_pi};
use crate::symcore::{Mono, PolyC};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

pub fn rat_pow(r: &Rat, k: i32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..k.unsigned_abs() {
        acc *= r;
    }
    if k < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// A single term P·e^{−λQ} with λ > 0.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTerm {
    pub lambda: Rat,
    pub poly: PolyC,
}

impl GaussTerm {
    pub fn new(poly: PolyC, lambda: Rat) -> Self {
        assert!(lambda > Rat::zero(), "gaussian exponent must be positive");
        GaussTerm { lambda, poly }
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        let q: f64 = v.iter().map(|a| a * a).sum();
        self.poly.eval(v) * (-rat_to_f64(&self.lambda) * q).exp()
    }

    /// (2π)^{−n} ∫ P e^{−λQ} dv, exact.
    pub fn integral_normalized(&self) -> CRat {
        let n = self.n() as i32;
        let mut acc = CRat::zero();
        for (m, c) in self.poly.terms() {
            let w = gauss_moment_pi(m);
            if w.is_zero() {
                continue;
            }
            let half: i32 = m.iter().map(|&e| e as i32).sum::<i32>() / 2;
            let lam = rat_pow(&self.lambda, -(half + n));
            acc += c.clone() * cr(w * lam);
        }
        acc / ci(1i64 << n)
    }
}

impl DiffTerm for GaussTerm {
    fn num_pairs(&self) -> usize {
        self.n()
    }
    fn d(&self, var: usize) -> Self {
        let n = self.n();
        let v = PolyC::var(n, var);
        let two_l = cr(self.lambda.clone() * rint(2));
        GaussTerm {
            lambda: self.lambda.clone(),
            poly: self.poly.deriv(var).sub(&v.mul(&self.poly).scale(&two_l)),
        }
    }
    fn is_zero_term(&self) -> bool {
        self.poly.is_zero()
    }
}

/// Σ_λ P_λ e^{−λQ}.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussSum {
    pub n: usize,
    pub parts: BTreeMap<Rat, PolyC>,
}

impl GaussSum {
    pub fn zero(n: usize) -> Self {
        GaussSum {
            n,
            parts: BTreeMap::new(),
        }
    }

    pub fn single(t: GaussTerm) -> Self {
        let mut g = GaussSum::zero(t.n());
        g.add_term(t);
        g
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_term(&mut self, t: GaussTerm) {
        let e = self
            .parts
            .entry(t.lambda.clone())
            .or_insert_with(|| PolyC::zero(t.poly.n()));
        *e = e.add(&t.poly);
        if e.is_zero() {
            self.parts.remove(&t.lambda);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = GaussTerm> + '_ {
        self.parts.iter().map(|(l, p)| GaussTerm {
            lambda: l.clone(),
            poly: p.clone(),
        })
    }

    pub fn add(&self, other: &GaussSum) -> GaussSum {
        let mut r = self.clone();
        for t in other.terms() {
            r.add_term(t);
        }
        r
    }

    pub fn scale(&self, c: &CRat) -> GaussSum {
        let mut r = GaussSum::zero(self.n);
        for t in self.terms() {
            r.add_term(GaussTerm::new(t.poly.scale(c), t.lambda));
        }
        r
    }

    pub fn neg(&self) -> GaussSum {
        self.scale(&-CRat::one())
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        self.terms().map(|t| t.eval(v)).sum()
    }

    pub fn integral_normalized(&self) -> CRat {
        self.terms()
            .fold(CRat::zero(), |acc, t| acc + t.integral_normalized())
    }

    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> GaussSum {
        let mut r = GaussSum::zero(self.n);
        for t in self.terms() {
            r.add_term(GaussTerm::new(t.poly.linear_substitute(m), t.lambda));
        }
        r
    }
}

/// Σ c_{αβ} z̄^{#α} # G_λ # z^{#β} for a fixed λ.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub n: usize,
    pub lambda: Rat,
    pub terms: BTreeMap<(Mono, Mono), CRat>,
}

fn add_into(map: &mut BTreeMap<(Mono, Mono), CRat>, key: (Mono, Mono), c: CRat) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(key.clone()).or_insert_with(CRat::zero);
    *e = e.clone() + c;
    if e.is_zero() {
        map.remove(&key);
    }
}

/// r = (1−λ)/(1+λ).
pub fn ratio_r(lambda: &Rat) -> Rat {
    (Rat::one() - lambda) / (Rat::one() + lambda)
}

/// Rewrites P(x,ξ) in the variables (z̄, z): first n slots z̄, last n slots z.
pub fn to_zbar_z(p: &PolyC) -> PolyC {
    let n = p.n();
    let half = cr(rat(1, 2));
    let ihalf = i_unit() * half.clone();
    let mut m = vec![vec![CRat::zero(); 2 * n]; 2 * n];
    for j in 0..n {
        m[j][j] = half.clone();
        m[j][n + j] = half.clone();
        m[n + j][j] = ihalf.clone();
        m[n + j][n + j] = -ihalf.clone();
    }
    p.linear_substitute(&m)
}

impl NormalForm {
    pub fn zero(n: usize, lambda: Rat) -> Self {
        NormalForm {
            n,
            lambda,
            terms: BTreeMap::new(),
        }
    }

    /// G_λ itself.
    pub fn gaussian(n: usize, lambda: Rat) -> Self {
        let mut nf = NormalForm::zero(n, lambda);
        nf.terms
            .insert((vec![0; n], vec![0; n]), CRat::one());
        nf
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        assert_eq!(self.lambda, other.lambda);
        let mut r = self.clone();
        for (k, c) in &other.terms {
            add_into(&mut r.terms, k.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, c: &CRat) -> NormalForm {
        let mut r = NormalForm::zero(self.n, self.lambda.clone());
        for (k, v) in &self.terms {
            add_into(&mut r.terms, k.clone(), v.clone() * c.clone());
        }
        r
    }

    /// Pointwise multiplication by z̄_j.
    fn mul_zbar(&self, j: usize) -> NormalForm {
        let h = cr(Rat::one() / (Rat::one() + &self.lambda));
        let mut r = NormalForm::zero(self.n, self.lambda.clone());
        for ((a, b), c) in &self.terms {
            let mut a2 = a.clone();
            a2[j] += 1;
            add_into(&mut r.terms, (a2, b.clone()), c.clone() * h.clone());
            if b[j] > 0 {
                let mut b2 = b.clone();
                b2[j] -= 1;
                add_into(&mut r.terms, (a.clone(), b2), c.clone() * ci(b[j] as i64));
            }
        }
        r
    }

    /// Pointwise multiplication by z_j.
    fn mul_z(&self, j: usize) -> NormalForm {
        let h = cr(Rat::one() / (Rat::one() + &self.lambda));
        let mut r = NormalForm::zero(self.n, self.lambda.clone());
        for ((a, b), c) in &self.terms {
            let mut b2 = b.clone();
            b2[j] += 1;
            add_into(&mut r.terms, (a.clone(), b2), c.clone() * h.clone());
            if a[j] > 0 {
                let mut a2 = a.clone();
                a2[j] -= 1;
                add_into(&mut r.terms, (a2, b.clone()), c.clone() * ci(a[j] as i64));
            }
        }
        r
    }

    /// Normal form of the pointwise symbol P·e^{−λQ}.
    pub fn from_gauss(t: &GaussTerm) -> NormalForm {
        let n = t.n();
        let zp = to_zbar_z(&t.poly);
        let mut cache: HashMap<Mono, NormalForm> = HashMap::new();
        cache.insert(vec![0; 2 * n], NormalForm::gaussian(n, t.lambda.clone()));
        fn get(
            m: &Mono,
            n: usize,
            cache: &mut HashMap<Mono, NormalForm>,
        ) -> NormalForm {
            if let Some(v) = cache.get(m) {
                return v.clone();
            }
            let var = m.iter().position(|&e| e > 0).unwrap();
            let mut parent = m.clone();
            parent[var] -= 1;
            let p = get(&parent, n, cache);
            let r = if var < n {
                p.mul_zbar(var)
            } else {
                p.mul_z(var - n)
            };
            cache.insert(m.clone(), r.clone());
            r
        }
        let mut out = NormalForm::zero(n, t.lambda.clone());
        for (m, c) in zp.terms() {
            let nf = get(m, n, &mut cache);
            out = out.add(&nf.scale(c));
        }
        out
    }

    /// Pointwise form Σ c·(z̄^{#α} # G_λ # z^{#β}).
    pub fn to_gauss(&self) -> GaussTerm {
        let n = self.n;
        let mut acc = PolyC::zero(n);
        let half = cr(rat(1, 2));
        let ihalf = i_unit() * half.clone();
        let mut cache: HashMap<(Mono, Mono), PolyC> = HashMap::new();
        for ((a, b), c) in &self.terms {
            let p = nf_monomial_poly(n, &self.lambda, a, b, &half, &ihalf, &mut cache);
            acc = acc.add(&p.scale(c));
        }
        GaussTerm {
            lambda: self.lambda.clone(),
            poly: acc,
        }
    }

    /// Moyal product in normal form.
    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let n = self.n;
        let a = &self.lambda;
        let b = &other.lambda;
        let ab1 = Rat::one() + a * b;
        let c = (a + b) / &ab1;
        let pref = cr(rat_pow(&ab1, -(n as i32)));
        let ra = ratio_r(a);
        let rb = ratio_r(b);
        let mut out = NormalForm::zero(n, c);
        for ((al, be), c1) in &self.terms {
            for ((ga, de), c2) in &other.terms {
                // z^β # z̄^γ = Σ_κ w z̄^{γ−κ} # z^{β−κ}
                for kappa in kappa_range(be, ga) {
                    let mut w = Rat::one();
                    let mut mu_deg = 0i32;
                    let mut nu_deg = 0i32;
                    let mut new_a = al.clone();
                    let mut new_b = de.clone();
                    for j in 0..n {
                        let k = kappa[j] as u32;
                        let bj = be[j] as u32;
                        let gj = ga[j] as u32;
                        w *= Rat::from_integer(
                            binomial(bj, k) * binomial(gj, k) * factorial(k) * num_bigint::BigInt::from(2).pow(k),
                        );
                        mu_deg += (gj - k) as i32;
                        nu_deg += (bj - k) as i32;
                        new_a[j] += (gj - k) as u16;
                        new_b[j] += (bj - k) as u16;
                    }
                    let coef = c1.clone()
                        * c2.clone()
                        * pref.clone()
                        * cr(w * rat_pow(&ra, mu_deg) * rat_pow(&rb, nu_deg));
                    add_into(&mut out.terms, (new_a, new_b), coef);
                }
            }
        }
        out
    }
}

fn kappa_range(beta: &[u16], gamma: &[u16]) -> Vec<Mono> {
    let mut out: Vec<Mono> = vec![vec![]];
    for j in 0..beta.len() {
        let top = beta[j].min(gamma[j]);
        let mut next = Vec::new();
        for k in &out {
            for v in 0..=top {
                let mut k2 = k.clone();
                k2.push(v);
                next.push(k2);
            }
        }
        out = next;
    }
    out
}

fn nf_monomial_poly(
    n: usize,
    lambda: &Rat,
    a: &Mono,
    b: &Mono,
    half: &CRat,
    ihalf: &CRat,
    cache: &mut HashMap<(Mono, Mono), PolyC>,
) -> PolyC {
    if let Some(p) = cache.get(&(a.clone(), b.clone())) {
        return p.clone();
    }
    let res = if let Some(j) = a.iter().position(|&e| e > 0) {
        // z̄_j # f = z̄_j f + (i/2)∂ξ_j f − (1/2)∂x_j f
        let mut a2 = a.clone();
        a2[j] -= 1;
        let f = GaussTerm {
            lambda: lambda.clone(),
            poly: nf_monomial_poly(n, lambda, &a2, b, half, ihalf, cache),
        };
        let zbar = PolyC::x(n, j).sub(&PolyC::xi(n, j).scale(&i_unit()));
        zbar.mul(&f.poly)
            .add(&f.d(n + j).poly.scale(ihalf))
            .sub(&f.d(j).poly.scale(half))
    } else if let Some(j) = b.iter().position(|&e| e > 0) {
        // f # z_j = f z_j − (1/2)∂x_j f − (i/2)∂ξ_j f
        let mut b2 = b.clone();
        b2[j] -= 1;
        let f = GaussTerm {
            lambda: lambda.clone(),
            poly: nf_monomial_poly(n, lambda, a, &b2, half, ihalf, cache),
        };
        let z = PolyC::x(n, j).add(&PolyC::xi(n, j).scale(&i_unit()));
        z.mul(&f.poly)
            .sub(&f.d(j).poly.scale(half))
            .sub(&f.d(n + j).poly.scale(ihalf))
    } else {
        PolyC::one(n)
    };
    cache.insert((a.clone(), b.clone()), res.clone());
    res
}

/// Exact Moyal product of two gaussian terms.
pub fn gauss_star(a: &GaussTerm, b: &GaussTerm) -> GaussTerm {
    NormalForm::from_gauss(a)
        .mul(&NormalForm::from_gauss(b))
        .to_gauss()
}

/// The vacuum symbol s = 2^n e^{−Q}.
pub fn vacuum_symbol(n: usize) -> GaussTerm {
    GaussTerm::new(PolyC::constant(n, ci(1i64 << n)), Rat::one())
}
