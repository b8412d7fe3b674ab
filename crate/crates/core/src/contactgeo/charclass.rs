//! Chern–Weil forms truncated at the manifold dimension.

use super::connection::MatForm;
use super::s3::{Atlas, ValuedForm};
use crate::error::{Error, Result};
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;
use std::f64::consts::PI;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

fn trace(f: &MatForm) -> ValuedForm<C64> {
    ValuedForm {
        charts: f.charts.iter().map(|c| c.trace()).collect(),
    }
}

fn one(atlas: &Atlas) -> ValuedForm<C64> {
    atlas.constant(C64::new(1.0, 0.0))
}

fn truncate(f: ValuedForm<C64>, dim: usize) -> ValuedForm<C64> {
    f.apply(|c| {
        let mut c = c.clone();
        c.comps.retain(|m, _| m.count_ones() as usize <= dim);
        c
    })
}

/// Odd Chern character −Σ_l (2πi)^{−(l+1)} l!/(2l+1)! tr(f⁻¹df)^{2l+1}
/// of a unitary matrix function.
pub fn ch_odd(atlas: &Atlas, f: &MatForm) -> Result<ValuedForm<C64>> {
    for c in &f.charts {
        let v = c.comps.get(&0).ok_or_else(|| Error::NotUnitary("f has no degree-0 part".into()))?;
        for m in v {
            let d = (m.adjoint() * m - DMatrix::identity(m.nrows(), m.ncols())).norm();
            if d > 1e-8 {
                return Err(Error::NotUnitary(format!("‖f*f − 1‖ = {d:.2e}")));
            }
        }
    }
    let finv = f.apply(|c| c.map(|m| m.adjoint()));
    let a = finv.wedge(&f.d()?);
    let mut out = one(atlas).part(1);
    let mut pow = a.clone();
    let a2 = a.wedge(&a);
    let mut l = 0;
    while 2 * l < atlas.dim {
        let c = -C64::new(0.0, 2.0 * PI).powi(-(l as i32 + 1)) * factorial(l) / factorial(2 * l + 1);
        out = out.add(&trace(&pow).scale(c));
        pow = pow.wedge(&a2);
        l += 1;
    }
    Ok(out)
}

/// θ ∈ u(n) ⊂ sp(2n) as a complex n×n matrix: θ_xx + i θ_ξx.
pub fn complexify(theta: &MatForm, n: usize) -> MatForm {
    theta.apply(|c| {
        c.map(|m| {
            let mut z = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    z[(i, j)] = m[(i, j)] + C64::new(0.0, 1.0) * m[(n + i, j)];
                }
            }
            z
        })
    })
}

/// c₁ = (i/2π) tr_ℂ θ.
pub fn c1(theta: &MatForm, n: usize) -> ValuedForm<C64> {
    trace(&complexify(theta, n)).scale(C64::new(0.0, 1.0 / (2.0 * PI)))
}

/// c₂ = ½(c₁² − (i/2π)² tr(Ω∧Ω)).
pub fn c2(theta: &MatForm, n: usize) -> ValuedForm<C64> {
    let om = complexify(theta, n);
    let k = C64::new(0.0, 1.0 / (2.0 * PI));
    let c = trace(&om).scale(k);
    c.wedge(&c)
        .sub(&trace(&om.wedge(&om)).scale(k * k))
        .scale(C64::new(0.5, 0.0))
}

/// Td(H^{1,0}) = 1 + ½c₁ + (c₁² + c₂)/12, truncated at dim M.
pub fn todd(atlas: &Atlas, theta: &MatForm, n: usize) -> ValuedForm<C64> {
    let c = c1(theta, n);
    let mut t = one(atlas).add(&c.scale(C64::new(0.5, 0.0)));
    if atlas.dim >= 4 {
        t = t.add(&c.wedge(&c).add(&c2(theta, n)).scale(C64::new(1.0 / 12.0, 0.0)));
    }
    truncate(t, atlas.dim)
}

/// Â(M) = 1 − p₁/24 with p₁ = −(1/8π²) tr(R∧R) for an so(m)-valued
/// curvature R of TM; the degree-4 term drops on manifolds of dimension < 4.
pub fn a_hat(atlas: &Atlas, tm_curvature: Option<&MatForm>) -> Result<ValuedForm<C64>> {
    let base = one(atlas);
    if atlas.dim < 4 {
        return Ok(base);
    }
    let r = tm_curvature
        .ok_or_else(|| Error::Unsupported("Â above dimension 3 needs TM curvature".into()))?;
    let p1 = trace(&r.wedge(r)).scale(C64::new(-1.0 / (8.0 * PI * PI), 0.0));
    Ok(truncate(base.add(&p1.scale(C64::new(-1.0 / 24.0, 0.0))), atlas.dim))
}

/// The Bott generator [[z₁, −z̄₂], [z₂, z̄₁]] of π₃(U(2)).
pub fn bott(p: &[f64; 4]) -> DMatrix<C64> {
    let z1 = C64::new(p[0], p[1]);
    let z2 = C64::new(p[2], p[3]);
    DMatrix::from_row_slice(2, 2, &[z1, -z2.conj(), z2, z1.conj()])
}
