//! The resolvent-integral class Σ P(v)·K_{γ,k}(Q) with
//! K_{γ,k}(q) = ∫₀¹ u^k W_γ(u) e^{−qu} du and
//! W_γ(u) = (1+u)^{γ/2+n/2−1} (1−u)^{n/2−γ/2−1}.
//! P·K_{γ,0} with P = 1 is the Weyl symbol of (H−γ)^{−1}, H = Op(Q), for γ < n.

use super::term::DiffTerm;
use crate::symcore::radial::RadialRat;
use crate::symcore::scalar::{cr, ci, rat, rat_to_f64, rint, CRat, Rat, C64};
use crate::symcore::special::factorial;
use crate::symcore::PolyC;
use num_traits::{One, Zero};
use quadrature::double_exponential::integrate;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

/// Above this value of q the kernel is evaluated from its asymptotic series.
const Q_ASYMPTOTIC: f64 = 60.0;

/// The weight W_γ for a fixed half-dimension n.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub n: usize,
    pub gamma: Rat,
}

/// Generalized binomial coefficients C(e, i), i = 0..len.
fn binom_series(e: &Rat, len: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(len);
    let mut c = Rat::one();
    for i in 0..len {
        out.push(c.clone());
        c = c * (e - rint(i as i64)) / rint(i as i64 + 1);
    }
    out
}

impl Kernel {
    pub fn new(n: usize, gamma: Rat) -> Self {
        Kernel { n, gamma }
    }

    /// Exponent of (1+u).
    pub fn a(&self) -> Rat {
        &self.gamma / rint(2) + rat(self.n as i64, 2) - Rat::one()
    }

    /// Exponent of (1−u).
    pub fn b(&self) -> Rat {
        rat(self.n as i64, 2) - &self.gamma / rint(2) - Rat::one()
    }

    /// Whether the integral converges at u = 1, i.e. γ < n.
    pub fn is_admissible(&self) -> bool {
        self.b() > -Rat::one()
    }

    /// Exact Taylor coefficients of W_γ at u = 0.
    pub fn taylor(&self, len: usize) -> Vec<Rat> {
        let pa = binom_series(&self.a(), len);
        let pb: Vec<Rat> = binom_series(&self.b(), len)
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c } else { -c })
            .collect();
        (0..len)
            .map(|m| (0..=m).fold(Rat::zero(), |acc, i| acc + &pa[i] * &pb[m - i]))
            .collect()
    }

    pub fn taylor_f64(&self, len: usize) -> Vec<f64> {
        self.taylor(len).iter().map(rat_to_f64).collect()
    }

    pub fn w(&self, u: f64) -> f64 {
        let a = rat_to_f64(&self.a());
        let b = rat_to_f64(&self.b());
        (1.0 + u).powf(a) * (1.0 - u).powf(b)
    }

    /// K_{γ,k}(q) = ∫₀¹ u^k W_γ(u) e^{−qu} du.
    pub fn k_integral(&self, k: u32, q: f64) -> f64 {
        if q > Q_ASYMPTOTIC {
            return self.k_asymptotic(k, q);
        }
        let a = rat_to_f64(&self.a());
        let b = rat_to_f64(&self.b());
        let tol = 1e-15;
        let left = integrate(
            |u| u.powi(k as i32) * (1.0 + u).powf(a) * (1.0 - u).powf(b) * (-q * u).exp(),
            0.0,
            0.5,
            tol,
        )
        .integral;
        // s = 1 − u = t^p with p = 1/(b+1) absorbs the endpoint singularity.
        let p = 1.0 / (b + 1.0);
        let right = integrate(
            |t| {
                let s = t.powf(p);
                let u = 1.0 - s;
                p * u.powi(k as i32) * (2.0 - s).powf(a) * (-q * u).exp()
            },
            0.0,
            0.5f64.powf(b + 1.0),
            tol,
        )
        .integral;
        left + right
    }

    /// Watson-lemma series Σ w_i (k+i)! q^{−k−i−1}; accurate to e^{−q}.
    fn k_asymptotic(&self, k: u32, q: f64) -> f64 {
        thread_local! {
            static TAYLOR: RefCell<HashMap<(usize, Rat), Rc<Vec<f64>>>> = RefCell::new(HashMap::new());
        }
        let w = TAYLOR.with(|m| {
            m.borrow_mut()
                .entry((self.n, self.gamma.clone()))
                .or_insert_with(|| Rc::new(self.taylor_f64(80)))
                .clone()
        });
        let mut sum = 0.0;
        let mut fact_over_pow = (1..=k).fold(1.0 / q, |acc, j| acc * j as f64 / q);
        for (i, wi) in w.iter().enumerate() {
            let term = wi * fact_over_pow;
            sum += term;
            if term.abs() < 1e-18 * sum.abs().max(1e-300) && i > 4 {
                break;
            }
            fact_over_pow *= (k as f64 + i as f64 + 1.0) / q;
        }
        sum
    }
}

/// Σ_{(γ,k)} P_{γ,k}(v)·K_{γ,k}(Q).
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventSum {
    pub n: usize,
    pub parts: BTreeMap<(Rat, u32), PolyC>,
}

impl ResolventSum {
    pub fn zero(n: usize) -> Self {
        ResolventSum {
            n,
            parts: BTreeMap::new(),
        }
    }

    /// c·K_{γ,0}(Q), i.e. c times the symbol of (H−γ)^{−1}.
    pub fn pure(n: usize, gamma: Rat, c: CRat) -> Self {
        let mut r = ResolventSum::zero(n);
        r.add_part(gamma, 0, PolyC::constant(n, c));
        r
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, gamma: Rat, k: u32, p: PolyC) {
        let key = (gamma, k);
        let e = self
            .parts
            .entry(key.clone())
            .or_insert_with(|| PolyC::zero(p.n()));
        *e = e.add(&p);
        if e.is_zero() {
            self.parts.remove(&key);
        }
    }

    pub fn add(&self, other: &ResolventSum) -> ResolventSum {
        let mut r = self.clone();
        for ((g, k), p) in &other.parts {
            r.add_part(g.clone(), *k, p.clone());
        }
        r
    }

    pub fn scale(&self, c: &CRat) -> ResolventSum {
        let mut r = ResolventSum::zero(self.n);
        for ((g, k), p) in &self.parts {
            r.add_part(g.clone(), *k, p.scale(c));
        }
        r
    }

    pub fn mul_poly(&self, q: &PolyC) -> ResolventSum {
        let mut r = ResolventSum::zero(self.n);
        for ((g, k), p) in &self.parts {
            r.add_part(g.clone(), *k, p.mul(q));
        }
        r
    }

    /// Whether every part is a constant multiple of K_{γ,0}.
    pub fn is_pure(&self) -> bool {
        self.parts
            .iter()
            .all(|((_, k), p)| *k == 0 && p.degree().unwrap_or(0) == 0)
    }

    /// The pure parts as (γ, c).
    pub fn pure_parts(&self) -> Option<Vec<(Rat, CRat)>> {
        if !self.is_pure() {
            return None;
        }
        Some(
            self.parts
                .iter()
                .map(|((g, _), p)| (g.clone(), p.constant_term()))
                .collect(),
        )
    }

    pub fn gammas(&self) -> Vec<Rat> {
        let mut g: Vec<Rat> = self.parts.keys().map(|(g, _)| g.clone()).collect();
        g.dedup();
        g
    }

    pub fn is_admissible(&self) -> bool {
        self.parts
            .keys()
            .all(|(g, _)| Kernel::new(self.n, g.clone()).is_admissible())
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        let q: f64 = v.iter().map(|a| a * a).sum();
        let mut acc = C64::new(0.0, 0.0);
        for ((g, k), p) in &self.parts {
            let kern = Kernel::new(self.n, g.clone());
            acc += p.eval(v) * kern.k_integral(*k, q);
        }
        acc
    }

    /// Homogeneous expansion terms with hdeg ≥ `valid`, keyed by hdeg.
    pub fn expansion(&self, valid: i32) -> BTreeMap<i32, RadialRat> {
        let mut out: BTreeMap<i32, RadialRat> = BTreeMap::new();
        for ((g, k), p) in &self.parts {
            let kern = Kernel::new(self.n, g.clone());
            for (d, pd) in p.homogeneous_parts() {
                // hdeg of term i: d − 2(k+i+1)
                let top = d as i32 - 2 * (*k as i32 + 1);
                if top < valid {
                    continue;
                }
                let count = ((top - valid) / 2 + 1) as usize;
                let w = kern.taylor(count);
                for (i, wi) in w.iter().enumerate() {
                    if wi.is_zero() {
                        continue;
                    }
                    let kk = *k + i as u32;
                    let c = cr(wi * Rat::from_integer(factorial(kk)));
                    let term = RadialRat::new(pd.scale(&c), kk + 1);
                    let h = top - 2 * i as i32;
                    let e = out.entry(h).or_insert_with(|| RadialRat::zero(self.n));
                    *e = e.add(&term);
                }
            }
        }
        out.retain(|_, t| !t.is_zero());
        out
    }

    /// Grade-r involution: sends P_d·K_{γ,k} to (−1)^{(r−d)/2+k+1} P_d·K_{−γ,k}.
    pub fn iota(&self, grade: i32) -> Option<ResolventSum> {
        let mut r = ResolventSum::zero(self.n);
        for ((g, k), p) in &self.parts {
            for (d, pd) in p.homogeneous_parts() {
                let diff = grade - d as i32;
                if diff.rem_euclid(2) != 0 {
                    return None;
                }
                let e = diff / 2 + *k as i32 + 1;
                let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
                r.add_part(-g.clone(), *k, pd.scale(&ci(sign)));
            }
        }
        Some(r)
    }

    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> ResolventSum {
        let mut r = ResolventSum::zero(self.n);
        for ((g, k), p) in &self.parts {
            r.add_part(g.clone(), *k, p.linear_substitute(m));
        }
        r
    }
}

impl DiffTerm for ResolventSum {
    fn num_pairs(&self) -> usize {
        self.n
    }
    /// ∂_v (P K_k) = (∂_v P) K_k − 2 v P K_{k+1}.
    fn d(&self, var: usize) -> Self {
        let v = PolyC::var(self.n, var);
        let mut r = ResolventSum::zero(self.n);
        for ((g, k), p) in &self.parts {
            r.add_part(g.clone(), *k, p.deriv(var));
            r.add_part(g.clone(), k + 1, v.mul(p).scale(&ci(-2)));
        }
        r
    }
    fn is_zero_term(&self) -> bool {
        self.is_zero()
    }
}

/// 1/(n − γ) style spectral factor used when a vacuum-level gaussian meets a
/// pure resolvent: (H−γ)^{−1} acts on level m by 1/(n + 2m − γ).
pub fn level_factor(n: usize, level: u32, gamma: &Rat) -> Rat {
    (rint(n as i64 + 2 * level as i64) - gamma).recip()
}

