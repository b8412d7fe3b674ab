//! Mehler heat kernel, vacuum projection and float pure gaussians.

use super::basis::{FockBasis, FockOp};
use crate::moyal::gaussian::{vacuum_symbol, GaussTerm};
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;

/// c·e^{−λQ} with float parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureGauss {
    pub n: usize,
    pub coeff: C64,
    pub lambda: f64,
}

impl PureGauss {
    /// c_a G_a # c_b G_b = c_a c_b (1+ab)^{−n} G_{(a+b)/(1+ab)}.
    pub fn star(&self, o: &PureGauss) -> PureGauss {
        assert_eq!(self.n, o.n);
        let (a, b) = (self.lambda, o.lambda);
        let d = 1.0 + a * b;
        PureGauss {
            n: self.n,
            coeff: self.coeff * o.coeff * d.powi(-(self.n as i32)),
            lambda: (a + b) / d,
        }
    }

    pub fn eval(&self, v: &[f64]) -> C64 {
        let q: f64 = v.iter().map(|t| t * t).sum();
        self.coeff * (-self.lambda * q).exp()
    }

    /// (2π)^{−n} ∫ c e^{−λQ} = c (2λ)^{−n}.
    pub fn trace(&self) -> C64 {
        self.coeff * (2.0 * self.lambda).powi(-(self.n as i32))
    }

    /// diag(c (1+λ)^{−n} r^{|m|}), r = (1−λ)/(1+λ).
    pub fn to_fock(&self, basis: &FockBasis) -> FockOp {
        assert_eq!(basis.n(), self.n);
        let r = (1.0 - self.lambda) / (1.0 + self.lambda);
        let pref = self.coeff * (1.0 + self.lambda).powi(-(self.n as i32));
        let d = basis.dim();
        let mut mat = DMatrix::<C64>::zeros(d, d);
        for i in 0..d {
            mat[(i, i)] = pref * r.powi(basis.total(i) as i32);
        }
        FockOp {
            basis: basis.clone(),
            mat,
        }
    }
}

/// Symbol of e^{−tH}: (cosh t)^{−n} e^{−Q tanh t}.
pub fn mehler_symbol(n: usize, t: f64) -> PureGauss {
    assert!(t > 0.0);
    PureGauss {
        n,
        coeff: C64::new(t.cosh().powi(-(n as i32)), 0.0),
        lambda: t.tanh(),
    }
}

/// Tr e^{−tH} = (2 sinh t)^{−n}.
pub fn heat_trace_exact(n: usize, t: f64) -> f64 {
    (2.0 * t.sinh()).powi(-(n as i32))
}

/// Truncated Σ_{|m| ≤ N} e^{−t(n+2|m|)}.
pub fn heat_trace_truncated(basis: &FockBasis, t: f64) -> f64 {
    let n = basis.n() as f64;
    (0..basis.dim())
        .map(|i| (-t * (n + 2.0 * basis.total(i) as f64)).exp())
        .sum()
}

/// Bound on the tail Σ_{|m| > N} e^{−t(n+2|m|)} for n = 1.
pub fn heat_tail_bound_n1(cutoff: u32, t: f64) -> f64 {
    (-t * (2.0 * cutoff as f64 + 3.0)).exp() / (1.0 - (-2.0 * t).exp())
}

/// e₀e₀*.
pub fn vacuum_projection(basis: &FockBasis) -> FockOp {
    let d = basis.dim();
    let mut mat = DMatrix::<C64>::zeros(d, d);
    mat[(0, 0)] = C64::new(1.0, 0.0);
    FockOp {
        basis: basis.clone(),
        mat,
    }
}

/// s = 2ⁿ e^{−Q}.
pub fn vacuum_symbol_term(n: usize) -> GaussTerm {
    vacuum_symbol(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::quantize::quantize_poly;
    use crate::symcore::PolyC;

    #[test]
    fn semigroup() {
        for n in 1..=2 {
            let (t1, t2) = (0.3, 0.55);
            let p = mehler_symbol(n, t1).star(&mehler_symbol(n, t2));
            let q = mehler_symbol(n, t1 + t2);
            assert!((p.lambda - q.lambda).abs() < 1e-15);
            assert!((p.coeff - q.coeff).norm() < 1e-15);
        }
    }

    #[test]
    fn trace_is_inverse_two_sinh() {
        for t in [0.2, 1.0, 2.5] {
            let m = mehler_symbol(1, t);
            assert!((m.trace().re - heat_trace_exact(1, t)).abs() < 1e-13);
        }
    }

    #[test]
    fn matches_matrix_exponential() {
        let b = FockBasis::new(1, 24);
        let h = quantize_poly(&PolyC::q(1), &b);
        for t in [0.2, 1.0] {
            let e = h.exp_hermitian(-t);
            let m = mehler_symbol(1, t).to_fock(&b);
            let diff = (&e.mat - &m.mat).norm();
            assert!(diff < 1e-12, "t = {t}: {diff}");
        }
    }

    #[test]
    fn large_t_tends_to_vacuum() {
        let m = mehler_symbol(1, 30.0);
        // e^{nt} h_t → 2ⁿ e^{−Q}
        let v = [0.4, -0.3];
        let lhs = m.eval(&v) * (30.0f64).exp();
        let rhs = 2.0 * (-(0.16 + 0.09f64)).exp();
        assert!((lhs.re - rhs).abs() < 1e-10);
    }
}
