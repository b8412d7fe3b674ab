//! Connections on H in the fixed frame: β is an sp(2n)-valued 1-form and
//! θ = dβ + ½[β, β] = dβ + β∧β.

use super::s3::{Atlas, ValuedForm};
use crate::error::Result;
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;

pub type MatForm = ValuedForm<DMatrix<C64>>;

/// J₀ on the model fiber, variables ordered (x, ξ).
pub fn j0(n: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(k, n + k)] = C64::new(-1.0, 0.0);
        m[(n + k, k)] = C64::new(1.0, 0.0);
    }
    m
}

#[derive(Clone, Debug)]
pub struct ConnData {
    pub n: usize,
    pub beta: MatForm,
    pub theta: MatForm,
}

fn lift(a: &ValuedForm<C64>, m: &DMatrix<C64>, atlas: &Atlas) -> MatForm {
    let mf = atlas.constant(m.clone());
    ValuedForm {
        charts: a.charts.iter().zip(&mf.charts).map(|(s, f)| s.times(f)).collect(),
    }
}

impl ConnData {
    pub fn from_beta(n: usize, beta: MatForm) -> Result<Self> {
        let theta = beta.d()?.add(&beta.wedge(&beta));
        Ok(ConnData { n, beta, theta })
    }

    /// β = 0 in the frame.
    pub fn flat(atlas: &Atlas) -> Self {
        let z = atlas.constant(DMatrix::<C64>::zeros(2 * atlas.n, 2 * atlas.n));
        let zero = z.part(1);
        ConnData {
            n: atlas.n,
            beta: zero.clone(),
            theta: zero,
        }
    }

    /// Unitary connection β = 2α ⊗ J₀; its curvature 2dα ⊗ J₀ is a
    /// multiple of the Levi form.
    pub fn levi(atlas: &Atlas) -> Result<Self> {
        let beta = lift(&atlas.alpha(), &j0(atlas.n), atlas).scale(C64::new(2.0, 0.0));
        Self::from_beta(atlas.n, beta)
    }

    /// max |θ − dβ − β∧β| where both sides are defined.
    pub fn structure_defect(&self) -> Result<f64> {
        let r = self.theta.sub(&self.beta.d()?.add(&self.beta.wedge(&self.beta)));
        Ok(mat_max(&r))
    }

    /// max |dθ + β∧θ − θ∧β|.
    pub fn bianchi_defect(&self) -> Result<f64> {
        let r = self
            .theta
            .d()?
            .add(&self.beta.wedge(&self.theta))
            .sub(&self.theta.wedge(&self.beta));
        Ok(mat_max(&r))
    }
}

/// Largest entry over nodes where the form is valid.
pub fn mat_max(f: &MatForm) -> f64 {
    f.charts
        .iter()
        .map(|c| {
            let g = &c.grid;
            c.comps
                .values()
                .flat_map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|(i, _)| g.inside(*i, g.ghost - c.valid))
                        .map(|(_, m)| m.iter().map(|x| x.norm()).fold(0.0, f64::max))
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Scalar form times a constant matrix.
pub fn scalar_times(a: &ValuedForm<C64>, m: &DMatrix<C64>, atlas: &Atlas) -> MatForm {
    lift(a, m, atlas)
}
