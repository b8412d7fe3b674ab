//! Regularized traces: Res, TR̂ through the heat kernel, and τ on paired symbols.

pub mod heat;
pub mod profile;
pub mod quad;
pub mod spectral;

use crate::error::{Error, Result};
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::paired::PairedSymbol;
use crate::symcore::scalar::{ci, crat_to_c64, CRat, C64};
use num_traits::Zero;
use profile::{Profile, SphereMode, R_FAR};
use serde::Serialize;

pub use heat::{heat_trace, HeatTrace, RemainderFit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    HeatClosedForm,
    NumericRIntegral,
    FockTrace,
}

mod complex_pair {
    use super::C64;
    use serde::Serializer;
    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&z.re)?;
        t.serialize_element(&z.im)?;
        t.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    #[serde(with = "complex_pair")]
    pub value: C64,
    pub route: Route,
    #[serde(with = "complex_pair")]
    pub residual_log_coeff: C64,
    pub error_estimate: f64,
}

/// Res a, exact. Zero when a has no term of hdeg −2n.
pub fn res(a: &PhgExpansion) -> Result<CRat> {
    heat::residue(a)
}

/// TR̂(a) as the t⁰ coefficient of the heat trace. With `strict`, a nonzero
/// residue is an error; otherwise its value is reported as the log t coefficient.
pub fn trh(a: &PhgExpansion, strict: bool) -> Result<TraceReport> {
    let c = a.closure().ok_or(Error::MissingClosure)?;
    let r = res(a)?;
    if strict && !r.is_zero() {
        return Err(Error::NonzeroResidue(format!(
            "Res = {}",
            crat_to_c64(&r)
        )));
    }
    let (value, log, err) = heat::closure_constant_term(c);
    Ok(TraceReport {
        value,
        route: Route::HeatClosedForm,
        residual_log_coeff: log,
        error_estimate: err,
    })
}

/// w₊ − (−1)^n w₋ with w₋ in the grade-0 convention.
pub fn combined(s: &PairedSymbol) -> Result<PhgExpansion> {
    let sign = if s.n().is_multiple_of(2) { ci(1) } else { ci(-1) };
    Ok(s.plus.sub(&s.absolute_minus()?.scale(&sign)))
}

pub fn tau(s: &PairedSymbol) -> Result<TraceReport> {
    trh(&combined(s)?, true)
}

/// (2π)^{−n} ∫ R(σ), radial Gauss–Legendre times a numeric sphere rule.
pub fn tau_numeric(s: &PairedSymbol) -> Result<TraceReport> {
    let a = combined(s)?;
    let n = a.n();
    let r = res(&a)?;
    if !r.is_zero() {
        return Err(Error::NonzeroResidue(format!("Res = {}", crat_to_c64(&r))));
    }
    let c = a.closure().ok_or(Error::MissingClosure)?;
    if c.gauss.is_zero() && c.resolvent.is_zero() {
        // R(σ) vanishes identically.
        return Ok(TraceReport {
            value: C64::new(0.0, 0.0),
            route: Route::NumericRIntegral,
            residual_log_coeff: C64::new(0.0, 0.0),
            error_estimate: 0.0,
        });
    }
    let prof = Profile::remainder(&a, SphereMode::Numeric)?;
    let norm = (2.0 * std::f64::consts::PI).powi(-(n as i32));
    let integrate = |m: usize| -> C64 {
        let rule = quad::radial_rule(m, R_FAR);
        let vals = prof.weighted_values(&rule);
        vals.iter().zip(&rule.weights).map(|(v, w)| v * *w).sum::<C64>() * norm
    };
    let mut prev = integrate(32);
    for m in [64, 128] {
        let cur = integrate(m);
        let err = (cur - prev).norm();
        if err < 1e-9 * cur.norm().max(1.0) {
            return Ok(TraceReport {
                value: cur,
                route: Route::NumericRIntegral,
                residual_log_coeff: C64::new(0.0, 0.0),
                error_estimate: err,
            });
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged(format!(
        "radial rule stalled near {prev}"
    )))
}

/// τ through the spectral decomposition of H: ζ-regularized Fock diagonals
/// for polynomials, level sums for gaussians, spectral sums for pure resolvents.
pub fn tau_fock(s: &PairedSymbol) -> Result<TraceReport> {
    let a = combined(s)?;
    let c = a.closure().ok_or(Error::MissingClosure)?;
    let p = crat_to_c64(&spectral::poly_zeta_trace(&c.poly)?);
    let (g, gerr) = spectral::gauss_fock_trace(&c.gauss)?;
    let (r, res) = if c.resolvent.is_zero() {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    } else {
        let parts = c.resolvent.pure_parts().ok_or_else(|| {
            Error::Unsupported("spectral route needs constant resolvent coefficients".into())
        })?;
        spectral::resolvent_zeta_trace(a.n(), &parts)?
    };
    Ok(TraceReport {
        value: p + g + r,
        route: Route::FockTrace,
        residual_log_coeff: -res,
        error_estimate: gerr + 1e-13,
    })
}

/// Every route that applies, with error estimates widened to the spread.
pub fn tau_all(s: &PairedSymbol) -> Result<Vec<TraceReport>> {
    let mut out = vec![tau(s)?];
    if let Ok(r) = tau_numeric(s) {
        out.push(r);
    }
    match tau_fock(s) {
        Ok(r) => out.push(r),
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e),
    }
    let spread = out
        .iter()
        .map(|r| (r.value - out[0].value).norm())
        .fold(0.0, f64::max);
    for r in &mut out {
        r.error_estimate = r.error_estimate.max(spread);
    }
    Ok(out)
}
