//! Invertible symbol-valued sections r with r⁻¹, and the covariant
//! derivative ∇η = dη + [ν(β), η] induced by a connection on H.

use super::words::{ad_nu, nu_form, sp_components, SymForm, WordAlgebra, VACUUM};
use crate::contactgeo::{Atlas, ConnData, MatForm, ValuedForm};
use crate::error::{Error, Result};
use crate::moyal::invert::invert_scalar;
use crate::moyal::paired::PairedSymbol;
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectionKind {
    Toeplitz,
    Automorphism,
    Constant,
}

#[derive(Clone, Debug)]
pub struct SymbolSection {
    pub kind: SectionKind,
    pub r: usize,
    pub sym: SymForm,
    pub inv: SymForm,
}

fn unitary_defect(f: &MatForm) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for c in &f.charts {
        let v = c
            .comps
            .get(&0)
            .ok_or_else(|| Error::NotUnitary("section has no degree-0 part".into()))?;
        for m in v {
            let e = (m.adjoint() * m - DMatrix::identity(m.nrows(), m.ncols())).norm();
            worst = worst.max(e);
        }
    }
    Ok(worst)
}

fn matrix_size(f: &MatForm) -> Result<usize> {
    f.charts
        .iter()
        .find_map(|c| c.comps.get(&0).and_then(|v| v.first()).map(|m| m.nrows()))
        .ok_or_else(|| Error::Unsupported("empty matrix field".into()))
}

impl SymbolSection {
    /// r = f ⊗ s + 1 ⊗ (1 − s) written as (f − 1) ⊗ S + 1 ⊗ ONE.
    pub fn toeplitz(atlas: &Atlas, f: &MatForm) -> Result<Self> {
        let e = unitary_defect(f)?;
        if e > 1e-12 {
            return Err(Error::NotUnitary(format!("‖f*f − 1‖ = {e:.2e}")));
        }
        let r = matrix_size(f)?;
        let one = atlas.constant(DMatrix::<C64>::identity(r, r));
        let finv = f.apply(|c| c.map(|m| m.adjoint()));
        let mut sym = SymForm::single(r, vec![], one.clone());
        sym.add_term(vec![VACUUM], f.sub(&one));
        let mut inv = SymForm::single(r, vec![], one.clone());
        inv.add_term(vec![VACUUM], finv.sub(&one));
        Ok(SymbolSection {
            kind: SectionKind::Toeplitz,
            r,
            sym,
            inv,
        })
    }

    /// g ⊗ (1, 1) for an invertible matrix function g.
    pub fn automorphism(g: &MatForm) -> Result<Self> {
        let r = matrix_size(g)?;
        let nan = C64::new(f64::NAN, 0.0);
        let ginv = g.apply(|c| {
            c.map(|m| {
                m.clone()
                    .try_inverse()
                    .unwrap_or_else(|| DMatrix::from_element(r, r, nan))
            })
        });
        for c in &ginv.charts {
            if let Some(v) = c.comps.get(&0) {
                if v.iter().any(|m| m.iter().any(|x| !x.is_finite())) {
                    return Err(Error::NotElliptic("matrix function is singular".into()));
                }
            }
        }
        Ok(SymbolSection {
            kind: SectionKind::Automorphism,
            r,
            sym: SymForm::single(r, vec![], g.clone()),
            inv: SymForm::single(r, vec![], ginv),
        })
    }

    /// A fixed scalar symbol σ with a given inverse, constant over the
    /// manifold.
    pub fn constant(atlas: &Atlas, alg: &WordAlgebra, sigma: PairedSymbol, sigma_inv: PairedSymbol) -> Result<Self> {
        let (a, ca) = alg.register(sigma);
        let (b, cb) = alg.register(sigma_inv);
        let one = |c: C64| atlas.constant(DMatrix::<C64>::identity(1, 1) * c);
        Ok(SymbolSection {
            kind: SectionKind::Constant,
            r: 1,
            sym: SymForm::single(1, vec![a], one(ca)),
            inv: SymForm::single(1, vec![b], one(cb)),
        })
    }

    /// As `constant`, inverting σ to the given depth.
    pub fn constant_inverted(atlas: &Atlas, alg: &WordAlgebra, sigma: PairedSymbol, depth: usize) -> Result<Self> {
        let inv = invert_scalar(&sigma, depth)?;
        Self::constant(atlas, alg, sigma, inv)
    }
}

/// ν(θ) ⊗ 1_r: a 2-form over words in the ν-generators, each of shape (p, −p).
pub type ThetaBold = SymForm;

/// A connection on H expressed through the ν-generators.
#[derive(Clone, Debug)]
pub struct SymConnection {
    pub beta: Vec<ValuedForm<C64>>,
    pub theta: Vec<ValuedForm<C64>>,
}

impl SymConnection {
    pub fn new(conn: &ConnData) -> Result<Self> {
        Ok(SymConnection {
            beta: sp_components(&conn.beta, conn.n)?,
            theta: sp_components(&conn.theta, conn.n)?,
        })
    }

    /// ν(θ) ⊗ 1_r.
    pub fn theta_bold(&self, atlas: &Atlas, r: usize) -> ThetaBold {
        nu_form(&self.theta, r, atlas)
    }

    /// ν(β) ⊗ 1_r.
    pub fn beta_bold(&self, atlas: &Atlas, r: usize) -> SymForm {
        nu_form(&self.beta, r, atlas)
    }

    pub fn nabla(&self, alg: &WordAlgebra, atlas: &Atlas, eta: &SymForm) -> Result<SymForm> {
        Ok(eta.d()?.add(&ad_nu(alg, &self.beta, eta, atlas)?))
    }
}
