//! Truncated Fock basis and exact/float operator matrices.

use crate::symcore::scalar::{crat_to_c64, CRat, C64};
use nalgebra::DMatrix;
use num_traits::Zero;
use std::collections::HashMap;

/// Occupation vectors (k₁..kₙ) with Σkᵢ ≤ cutoff, graded then lexicographically descending.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBasis {
    n: usize,
    cutoff: u32,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn states_of_total(n: usize, total: u32, out: &mut Vec<Vec<u32>>) {
    fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            rec(prefix, left - k, slots - 1, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), total, n, out);
}

impl FockBasis {
    pub fn new(n: usize, cutoff: u32) -> Self {
        assert!(n >= 1);
        let mut states = Vec::new();
        for t in 0..=cutoff {
            states_of_total(n, t, &mut states);
        }
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        FockBasis {
            n,
            cutoff,
            states,
            index,
        }
    }

    /// 24 for n = 1, 12 for n = 2, 8 otherwise.
    pub fn default_cutoff(n: usize) -> u32 {
        match n {
            1 => 24,
            2 => 12,
            _ => 8,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn index_of(&self, k: &[u32]) -> Option<usize> {
        self.index.get(k).copied()
    }

    pub fn total(&self, i: usize) -> u32 {
        self.states[i].iter().sum()
    }

    /// ‖f_k‖ for f_k = (√2 a†)^k |0⟩, i.e. Π √(2^{kⱼ} kⱼ!).
    pub fn f_norm(&self, i: usize) -> f64 {
        self.states[i]
            .iter()
            .map(|&k| {
                let mut v = 1.0f64;
                for t in 1..=k {
                    v *= 2.0 * t as f64;
                }
                v.sqrt()
            })
            .product()
    }
}

/// Operator matrix in the orthonormal Hermite basis.
#[derive(Clone, Debug)]
pub struct FockOp {
    pub basis: FockBasis,
    pub mat: DMatrix<C64>,
}

impl FockOp {
    pub fn zeros(basis: &FockBasis) -> Self {
        let d = basis.dim();
        FockOp {
            basis: basis.clone(),
            mat: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(basis: &FockBasis) -> Self {
        let d = basis.dim();
        FockOp {
            basis: basis.clone(),
            mat: DMatrix::identity(d, d),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn mul(&self, o: &FockOp) -> FockOp {
        FockOp {
            basis: self.basis.clone(),
            mat: &self.mat * &o.mat,
        }
    }

    pub fn add(&self, o: &FockOp) -> FockOp {
        FockOp {
            basis: self.basis.clone(),
            mat: &self.mat + &o.mat,
        }
    }

    pub fn scale(&self, c: C64) -> FockOp {
        FockOp {
            basis: self.basis.clone(),
            mat: &self.mat * c,
        }
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.mat.is_empty() {
            return 0.0;
        }
        self.mat
            .clone()
            .singular_values()
            .iter()
            .cloned()
            .fold(0.0, f64::max)
    }

    /// exp(s·A) for Hermitian A.
    pub fn exp_hermitian(&self, s: f64) -> FockOp {
        let eig = self.mat.clone().symmetric_eigen();
        let d = self.basis.dim();
        let mut diag = DMatrix::<C64>::zeros(d, d);
        for i in 0..d {
            diag[(i, i)] = C64::new((s * eig.eigenvalues[i]).exp(), 0.0);
        }
        let v = &eig.eigenvectors;
        FockOp {
            basis: self.basis.clone(),
            mat: v * diag * v.adjoint(),
        }
    }
}

/// Operator matrix in the unnormalized basis f_k, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactOp {
    pub basis: FockBasis,
    /// mat[i][j]: coefficient of f_i in A f_j.
    pub mat: Vec<Vec<CRat>>,
}

impl ExactOp {
    pub fn zeros(basis: &FockBasis) -> Self {
        let d = basis.dim();
        ExactOp {
            basis: basis.clone(),
            mat: vec![vec![CRat::zero(); d]; d],
        }
    }

    pub fn mul(&self, o: &ExactOp) -> ExactOp {
        let d = self.basis.dim();
        let mut r = ExactOp::zeros(&self.basis);
        for i in 0..d {
            for k in 0..d {
                let a = &self.mat[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &o.mat[k][j];
                    if !b.is_zero() {
                        r.mat[i][j] = r.mat[i][j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        r
    }

    pub fn trace(&self) -> CRat {
        (0..self.basis.dim())
            .map(|i| self.mat[i][i].clone())
            .fold(CRat::zero(), |a, b| a + b)
    }

    /// Same operator in the orthonormal basis e_k = f_k/‖f_k‖.
    pub fn to_float(&self) -> FockOp {
        let d = self.basis.dim();
        let norms: Vec<f64> = (0..d).map(|i| self.basis.f_norm(i)).collect();
        let mat = DMatrix::from_fn(d, d, |i, j| crat_to_c64(&self.mat[i][j]) * (norms[i] / norms[j]));
        FockOp {
            basis: self.basis.clone(),
            mat,
        }
    }
}
