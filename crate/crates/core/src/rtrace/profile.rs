//! Sphere-averaged profiles g(r) = ∫_{S^{2n−1}} f(rθ) dθ of the remainder
//! symbol left after removing homogeneous terms of hdeg > −2n.

use super::quad::{sphere_quadrature, sphere_rule, RadialRule};
use crate::error::{Error, Result};
use crate::moyal::closure::Closure;
use crate::moyal::resolvent::Kernel;
use crate::symcore::radial::{sphere_integral_poly, RadialRat};
use crate::symcore::scalar::{rat_to_f64, C64};
use crate::symcore::PolyC;
use crate::moyal::expansion::PhgExpansion;
use std::collections::BTreeMap;

/// Number of asymptotic terms used beyond r_far.
const FAR_TERMS: i32 = 24;
pub const R_FAR: f64 = 12.0;

/// How sphere integrals of polynomials are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereMode {
    Exact,
    Numeric,
}

enum Piece {
    Gauss { lambda: f64, by_deg: Vec<(i32, C64)> },
    Kernel { kern: Kernel, k: u32, by_deg: Vec<(i32, C64)> },
    Power { h: i32, s: C64 },
}

impl Piece {
    fn eval(&self, r: f64) -> C64 {
        let radial = |by_deg: &[(i32, C64)]| -> C64 {
            by_deg.iter().map(|(d, s)| s * r.powi(*d)).sum()
        };
        match self {
            Piece::Gauss { lambda, by_deg } => radial(by_deg) * (-lambda * r * r).exp(),
            Piece::Kernel { kern, k, by_deg } => radial(by_deg) * kern.k_integral(*k, r * r),
            Piece::Power { h, s } => s * r.powi(*h),
        }
    }
}

pub struct Profile {
    n: usize,
    near: Vec<Piece>,
    far: Vec<Piece>,
}

struct Sphere {
    mode: SphereMode,
    rule: Vec<(Vec<f64>, f64)>,
}

impl Sphere {
    fn new(n: usize, mode: SphereMode, max_deg: u32) -> Result<Self> {
        let rule = match mode {
            SphereMode::Exact => Vec::new(),
            SphereMode::Numeric => sphere_rule(n, (max_deg as usize + 2).max(8))?,
        };
        Ok(Sphere { mode, rule })
    }

    fn integral(&self, p: &PolyC) -> C64 {
        match self.mode {
            SphereMode::Exact => sphere_integral_poly(p).value(),
            SphereMode::Numeric => sphere_quadrature(p, &self.rule),
        }
    }

    fn by_deg(&self, p: &PolyC) -> Vec<(i32, C64)> {
        p.homogeneous_parts()
            .iter()
            .map(|(d, pd)| (*d as i32, self.integral(pd)))
            .filter(|(_, s)| s.norm() > 0.0)
            .collect()
    }

    /// A homogeneous RadialRat restricted to Q = 1.
    fn term(&self, t: &RadialRat) -> C64 {
        self.integral(t.numerator())
    }
}

fn max_degree(c: &Closure, terms: &BTreeMap<i32, RadialRat>) -> u32 {
    let g = c.gauss.parts.values().filter_map(|p| p.degree());
    let r = c.resolvent.parts.values().filter_map(|p| p.degree());
    let t = terms.values().filter_map(|t| t.numerator().degree());
    g.chain(r).chain(t).max().unwrap_or(0)
}

impl Profile {
    /// Profile of closure − Σ_{hdeg > −2n} terms. The polynomial part of the
    /// closure and the matching homogeneous terms cancel symbolically.
    pub fn remainder(a: &PhgExpansion, mode: SphereMode) -> Result<Profile> {
        let n = a.n();
        let c = a.closure().ok_or(Error::MissingClosure)?;
        let floor = -2 * n as i32;
        if !a.is_known(floor + 1) {
            return Err(Error::DepthTooShallow {
                valid: a.valid_down_to().unwrap_or(i32::MIN),
                needed: floor + 1,
            });
        }
        // Expansion terms that do not come from the polynomial part.
        let poly_parts = c.poly.homogeneous_parts();
        let mut terms = BTreeMap::new();
        for (h, t) in a.terms() {
            if *h <= floor {
                continue;
            }
            let mut t = t.clone();
            if *h >= 0 {
                if let Some(p) = poly_parts.get(&(*h as u32)) {
                    t = t.sub(&RadialRat::from_poly(p.clone()));
                }
            }
            if !t.is_zero() {
                terms.insert(*h, t);
            }
        }
        let deep = c.resolvent.expansion(floor - 2 * FAR_TERMS);
        let sphere = Sphere::new(n, mode, max_degree(c, &terms).max(max_degree(c, &deep)))?;

        let mut near = Vec::new();
        let mut far = Vec::new();
        for (lam, p) in &c.gauss.parts {
            let by_deg = sphere.by_deg(p);
            let lambda = rat_to_f64(lam);
            near.push(Piece::Gauss { lambda, by_deg: by_deg.clone() });
            far.push(Piece::Gauss { lambda, by_deg });
        }
        for ((g, k), p) in &c.resolvent.parts {
            near.push(Piece::Kernel {
                kern: Kernel::new(n, g.clone()),
                k: *k,
                by_deg: sphere.by_deg(p),
            });
        }
        for (h, t) in &terms {
            near.push(Piece::Power { h: *h, s: -sphere.term(t) });
        }
        for (h, t) in deep.range(..=floor) {
            far.push(Piece::Power { h: *h, s: sphere.term(t) });
        }
        Ok(Profile { n, near, far })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, r: f64) -> C64 {
        let pieces = if r <= R_FAR { &self.near } else { &self.far };
        pieces.iter().map(|p| p.eval(r)).sum()
    }

    /// Values r^{2n−1} g(r) at the nodes of a radial rule.
    pub fn weighted_values(&self, rule: &RadialRule) -> Vec<C64> {
        use rayon::prelude::*;
        let e = 2 * self.n as i32 - 1;
        rule.nodes
            .par_iter()
            .map(|&r| self.eval(r) * r.powi(e))
            .collect()
    }
}
