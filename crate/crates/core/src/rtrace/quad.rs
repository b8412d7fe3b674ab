//! Gauss–Legendre rules, radial panels and sphere rules for S¹ and S³.

use crate::error::{Error, Result};
use crate::symcore::scalar::{crat_to_c64, C64};
use crate::symcore::PolyC;
use std::f64::consts::PI;

/// Nodes and weights of the m-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// A fixed set of nodes and weights on [0, ∞).
#[derive(Clone, Debug)]
pub struct RadialRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Panels [0,1], [1,3], [3,6], [6,r_far] of m points each, and a tail r = r_far/s.
pub fn radial_rule(m: usize, r_far: f64) -> RadialRule {
    let (x, w) = gauss_legendre(m);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let edges = [0.0, 1.0, 3.0, 6.0, r_far];
    for p in edges.windows(2) {
        let (a, b) = (p[0], p[1]);
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(0.5 * (b - a) * xi + 0.5 * (a + b));
            weights.push(0.5 * (b - a) * wi);
        }
    }
    for (xi, wi) in x.iter().zip(&w) {
        let s = 0.5 * (xi + 1.0);
        nodes.push(r_far / s);
        weights.push(0.5 * wi * r_far / (s * s));
    }
    RadialRule { nodes, weights }
}

/// Product rule on S^{2n−1} ⊂ R^{2n}, coordinates ordered (x, ξ).
///
/// n = 1 is the trapezoid rule in the angle; n = 2 uses Hopf coordinates
/// z₁ = cos η e^{iφ₁}, z₂ = sin η e^{iφ₂} with Gauss–Legendre in cos²η.
/// Both are exact for polynomials of degree below `m`.
pub fn sphere_rule(n: usize, m: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    match n {
        1 => Ok((0..m)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / m as f64;
                (vec![th.cos(), th.sin()], 2.0 * PI / m as f64)
            })
            .collect()),
        2 => {
            let (x, w) = gauss_legendre(m / 2 + 1);
            let dphi = 2.0 * PI / m as f64;
            let mut out = Vec::with_capacity(x.len() * m * m);
            for (xi, wi) in x.iter().zip(&w) {
                let c2 = 0.5 * (xi + 1.0);
                let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
                // dη sinη cosη = d(cos²η)/2
                let wc = 0.25 * wi * dphi * dphi;
                for j1 in 0..m {
                    let p1 = dphi * j1 as f64;
                    for j2 in 0..m {
                        let p2 = dphi * j2 as f64;
                        out.push((
                            vec![c * p1.cos(), s * p2.cos(), c * p1.sin(), s * p2.sin()],
                            wc,
                        ));
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!(
            "numeric sphere rule for n = {n}"
        ))),
    }
}

/// A polynomial with float coefficients, for repeated evaluation.
pub struct FloatPoly {
    terms: Vec<(Vec<u16>, C64)>,
}

impl FloatPoly {
    pub fn new(p: &PolyC) -> Self {
        FloatPoly {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), crat_to_c64(c)))
                .collect(),
        }
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c * m
                    .iter()
                    .zip(v)
                    .map(|(&e, x)| x.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    }
}

/// ∫_{S^{2n−1}} p dθ with a numeric rule.
pub fn sphere_quadrature(p: &PolyC, rule: &[(Vec<f64>, f64)]) -> C64 {
    let fp = FloatPoly::new(p);
    rule.iter().map(|(v, w)| fp.eval(v) * *w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::radial::sphere_integral_poly;

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-15);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn radial_rule_gaussian_moment() {
        let r = radial_rule(40, 12.0);
        let s: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * x.powi(3) * (-x * x).exp())
            .sum();
        assert!((s - 0.5).abs() < 1e-14);
    }

    #[test]
    fn sphere_rules_match_exact_moments() {
        for n in 1..=2 {
            let rule = sphere_rule(n, 24).unwrap();
            let p = PolyC::q(n).pow(3).add(&PolyC::x(n, 0).pow(4));
            let exact = sphere_integral_poly(&p).value();
            let num = sphere_quadrature(&p, &rule);
            assert!((exact - num).norm() < 1e-12, "n = {n}");
        }
    }
}
