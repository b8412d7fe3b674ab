//! Heat-kernel route: (2π)^{−n} ∫ a·h_t with h_t = (cosh t)^{−n} e^{−Q tanh t}.

use super::profile::{Profile, SphereMode, R_FAR};
use super::quad::radial_rule;
use crate::error::{Error, Result};
use crate::moyal::closure::Closure;
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::gaussian::GaussSum;
use crate::moyal::resolvent::{Kernel, ResolventSum};
use crate::symcore::laurent::{sinh_cosh_power, LaurentT};
use crate::symcore::radial::{sphere_integral, sphere_integral_poly, HomTerm};
use crate::symcore::scalar::{cr, crat_to_c64, rat_to_f64, rint, CRat, Rat, C64};
use crate::symcore::special::{binomial, factorial, gauss_moment_pi};
use crate::symcore::PolyC;
use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};
use quadrature::double_exponential::integrate;

/// Order through which closed-form Laurent series are kept.
pub const HEAT_ORDER: i32 = 3;

/// Sample points of the remainder fit: 8 log-spaced t in [0.05, 0.8].
pub fn fit_times() -> Vec<f64> {
    let (a, b) = (0.05f64.ln(), 0.8f64.ln());
    (0..8).map(|i| (a + (b - a) * i as f64 / 7.0).exp()).collect()
}

/// Least-squares fit of the remainder against {1, t log t, t, t², t³}.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderFit {
    pub coeffs: [C64; 5],
    pub condition: f64,
    pub residual: f64,
}

impl RemainderFit {
    pub fn zero() -> Self {
        RemainderFit {
            coeffs: [C64::new(0.0, 0.0); 5],
            condition: 1.0,
            residual: 0.0,
        }
    }

    pub fn constant(&self) -> C64 {
        self.coeffs[0]
    }
}

#[derive(Clone, Debug)]
pub struct HeatTrace {
    /// Exact contribution of the homogeneous terms of hdeg > −2n.
    pub singular: LaurentT<CRat>,
    /// Coefficient of log t; equals Res(a).
    pub log_coeff: CRat,
    pub fit: RemainderFit,
}

impl HeatTrace {
    /// Singular part plus fitted power terms, through t³ (the t log t
    /// coefficient is kept in `fit`).
    pub fn series(&self) -> LaurentT<C64> {
        let s = self.singular.map(crat_to_c64);
        let f = &self.fit.coeffs;
        let fitted = LaurentT::new(0, vec![f[0], f[2], f[3], f[4]], HEAT_ORDER);
        s.add(&fitted)
    }
}

/// (2π)^{−n} ∫ T·h_t for a homogeneous term of hdeg −2m, m < n:
/// c_m Γ(n−m) / (2 sinh^{n−m} t cosh^m t) with c_m the normalized sphere integral.
pub fn homogeneous_heat(n: usize, t: &HomTerm, order: i32) -> LaurentT<CRat> {
    let h = t.hdeg;
    if h % 2 != 0 || t.value.is_zero() {
        return LaurentT::zero(order);
    }
    let m = -h / 2;
    assert!(m < n as i32, "term of hdeg {h} is not integrable at the origin");
    let c = sphere_integral(t).normalized();
    let g = Rat::from_integer(factorial((n as i32 - m - 1) as u32)) / rint(2);
    sinh_cosh_power::<CRat>(-(n as i32 - m), -m, order).scale(&(c * cr(g)))
}

fn poly_heat(p: &PolyC, order: i32) -> LaurentT<CRat> {
    let n = p.n();
    let mut acc = LaurentT::zero(order);
    for (d, pd) in p.homogeneous_parts() {
        let t = HomTerm {
            value: crate::symcore::radial::RadialRat::from_poly(pd),
            hdeg: d as i32,
        };
        acc = acc.add(&homogeneous_heat(n, &t, order));
    }
    acc
}

/// TR̂ of a polynomial, exact.
pub fn poly_constant_term(p: &PolyC) -> CRat {
    poly_heat(p, 0).coeff(0)
}

/// (2π)^{−n} ∫ v^α K_{γ,k}(Q) h_t dv has t⁰ coefficient `constant` and
/// log t coefficient `log`, both per unit coefficient.
#[derive(Clone, Copy, Debug)]
pub struct FinitePart {
    pub constant: C64,
    pub log: f64,
    pub error: f64,
}

/// Finite part of ∫₀¹ u^k W(u)(u+τ)^{−p} du · cosh^{−n}t at τ = tanh t.
///
/// Writing W_k = u^k W = Σ w_j u^j, the terms with j ≤ p−1 are integrated in
/// closed form (powers τ^{j−p+1} and one log τ); the rest, of order u^p,
/// contributes ∫₀¹ (W_k − Σ_{j<p} w_j u^j) u^{−p} du.
pub fn resolvent_finite_part(kern: &Kernel, k: u32, p: u32) -> FinitePart {
    let n = kern.n as i32;
    let p_i = p as i32;
    let len = (p + k) as usize + 80;
    let w = kern.taylor(len);
    let wk = |j: usize| -> Rat {
        if j < k as usize {
            Rat::zero()
        } else {
            w[j - k as usize].clone()
        }
    };
    let sgn = |e: i32| if e % 2 == 0 { Rat::one() } else { -Rat::one() };
    let mut exact = Rat::zero();
    for j in 0..p_i - 1 {
        let wj = wk(j as usize);
        if wj.is_zero() {
            continue;
        }
        let s = j - p_i + 1;
        let mut beta = Rat::zero();
        for i in 0..=j {
            beta -= Rat::from_integer(binomial(j as u32, i as u32)) * sgn(j - i) / rint((i - p_i + 1) as i64);
        }
        let ct = sinh_cosh_power::<CRat>(s, -s - n, 0).coeff(0).re;
        exact += wj * (Rat::one() / rint(s as i64) + beta * ct);
    }
    let jl = p_i - 1;
    let wl = wk(jl as usize);
    let mut g = Rat::zero();
    for i in 0..jl {
        g -= Rat::from_integer(binomial(jl as u32, i as u32)) * sgn(jl - i) / rint((i - p_i + 1) as i64);
    }
    exact += &wl * g;

    // ∫₀¹ (W_k − Σ_{j<p} w_j u^j) u^{−p} du, Taylor tail on [0, u0].
    let u0 = 0.3f64;
    let mut head = 0.0;
    for j in p as usize..len {
        let e = (j - p as usize + 1) as i32;
        head += rat_to_f64(&wk(j)) * u0.powi(e) / e as f64;
    }
    let a = rat_to_f64(&kern.a());
    let b = rat_to_f64(&kern.b());
    let pw = 1.0 / (b + 1.0);
    let kp = k as i32 - p_i;
    let tol = 1e-15;
    let mid = 0.65;
    let left = integrate(
        |u| u.powi(kp) * (1.0 + u).powf(a) * (1.0 - u).powf(b),
        u0,
        mid,
        tol,
    );
    let right = integrate(
        |t| {
            let s = t.powf(pw);
            let u = 1.0 - s;
            pw * u.powi(kp) * (2.0 - s).powf(a)
        },
        0.0,
        (1.0 - mid).powf(b + 1.0),
        tol,
    );
    let mut poly = 0.0;
    for j in 0..p as usize {
        let wj = rat_to_f64(&wk(j));
        let e = j as i32 - p_i + 1;
        poly += wj
            * if e == 0 {
                -u0.ln()
            } else {
                (1.0 - u0.powi(e)) / e as f64
            };
    }
    let numeric = head + left.integral + right.integral - poly;
    FinitePart {
        constant: C64::new(rat_to_f64(&exact) + numeric, 0.0),
        log: -rat_to_f64(&wl),
        error: left.error_estimate + right.error_estimate + 1e-15 * numeric.abs(),
    }
}

/// Constant and log coefficients of the heat trace of a resolvent sum.
pub fn resolvent_heat_ct(r: &ResolventSum) -> (C64, C64, f64) {
    let n = r.n;
    let scale = 0.5f64.powi(n as i32);
    let mut constant = C64::new(0.0, 0.0);
    let mut log = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for ((g, k), p) in &r.parts {
        let kern = Kernel::new(n, g.clone());
        for (mono, c) in p.terms() {
            let a = gauss_moment_pi(mono);
            if a.is_zero() {
                continue;
            }
            let half: u32 = mono.iter().map(|&e| e as u32).sum::<u32>() / 2;
            let fp = resolvent_finite_part(&kern, *k, half + n as u32);
            let f = crat_to_c64(c) * rat_to_f64(&a) * scale;
            constant += f * fp.constant;
            log += f * fp.log;
            err += f.norm() * fp.error;
        }
    }
    (constant, log, err)
}

/// Exact t⁰ coefficient of a gaussian sum: its trace.
pub fn gauss_heat_ct(g: &GaussSum) -> CRat {
    g.integral_normalized()
}

/// t⁰ coefficient and log t coefficient of the heat trace of a closure.
pub fn closure_constant_term(c: &Closure) -> (C64, C64, f64) {
    let p = crat_to_c64(&poly_heat(&c.poly, 0).coeff(0));
    let g = crat_to_c64(&gauss_heat_ct(&c.gauss));
    let (r, log, err) = resolvent_heat_ct(&c.resolvent);
    (p + g + r, log, err)
}

/// Res a = −(2(2π)^n)^{−1} ∫_S a_{−2n}; exact.
pub fn residue(a: &PhgExpansion) -> Result<CRat> {
    let n = a.n();
    let t = a.term_at(-2 * n as i32)?;
    let s = sphere_integral_poly(t.value.numerator());
    Ok(-s.pi_coeff / cr(Rat::from_integer((1i64 << (n + 1)).into())))
}

fn least_squares(ts: &[f64], ys: &[C64]) -> RemainderFit {
    let basis = |t: f64| [1.0, t * t.ln(), t, t * t, t * t * t];
    let a = DMatrix::from_fn(ts.len(), 5, |i, j| basis(ts[i])[j]);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    let solve = |y: DVector<f64>| svd.solve(&y, 1e-14).expect("svd solve");
    let re = solve(DVector::from_iterator(ys.len(), ys.iter().map(|y| y.re)));
    let im = solve(DVector::from_iterator(ys.len(), ys.iter().map(|y| y.im)));
    let mut coeffs = [C64::new(0.0, 0.0); 5];
    for j in 0..5 {
        coeffs[j] = C64::new(re[j], im[j]);
    }
    let fitted_re = &a * &re;
    let fitted_im = &a * &im;
    let residual = (0..ts.len())
        .map(|i| (C64::new(fitted_re[i], fitted_im[i]) - ys[i]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    RemainderFit {
        coeffs,
        condition,
        residual,
    }
}

/// Numeric ∫ remainder·h_t at the fit times, log t part removed, then fitted.
pub fn fit_remainder(a: &PhgExpansion, log_coeff: C64) -> Result<RemainderFit> {
    let c = a.closure().ok_or(Error::MissingClosure)?;
    if c.gauss.is_zero() && c.resolvent.is_zero() {
        return Ok(RemainderFit::zero());
    }
    let n = a.n();
    let prof = Profile::remainder(a, SphereMode::Exact)?;
    let rule = radial_rule(48, R_FAR);
    let vals = prof.weighted_values(&rule);
    let norm = (2.0 * std::f64::consts::PI).powi(-(n as i32));
    let ts = fit_times();
    let ys: Vec<C64> = ts
        .iter()
        .map(|&t| {
            let (ch, th) = (t.cosh().powi(-(n as i32)), t.tanh());
            let s: C64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .zip(&vals)
                .map(|((r, w), v)| v * (w * (-r * r * th).exp()))
                .sum();
            s * ch * norm - log_coeff * t.ln()
        })
        .collect();
    let fit = least_squares(&ts, &ys);
    let scale = ys.iter().map(|y| y.norm()).fold(1.0, f64::max);
    if !fit.residual.is_finite() || fit.residual > 1e-3 * scale {
        return Err(Error::NonConvergentRemainder(format!(
            "fit residual {:.3e}",
            fit.residual
        )));
    }
    Ok(fit)
}

/// Heat trace of `a`: exact singular part, Res as log coefficient, fitted remainder.
pub fn heat_trace(a: &PhgExpansion) -> Result<HeatTrace> {
    let n = a.n();
    a.closure().ok_or(Error::MissingClosure)?;
    let log_coeff = residue(a)?;
    let mut singular = LaurentT::zero(HEAT_ORDER);
    for (h, t) in a.terms() {
        if *h > -2 * n as i32 {
            singular = singular.add(&homogeneous_heat(
                n,
                &HomTerm {
                    value: t.clone(),
                    hdeg: *h,
                },
                HEAT_ORDER,
            ));
        }
    }
    let fit = fit_remainder(a, crat_to_c64(&log_coeff))?;
    Ok(HeatTrace {
        singular,
        log_coeff,
        fit,
    })
}
