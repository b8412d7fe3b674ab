//! Weyl quantization of polynomial and gaussian symbols on the Fock basis.
//!
//! Everything is computed in the basis f_k = (√2 a†)^k |0⟩ where
//! X f_k = k f_{k−1} + ½ f_{k+1} and D f_k = −ik f_{k−1} + (i/2) f_{k+1},
//! so matrix entries are exact rationals.

use super::basis::{ExactOp, FockBasis, FockOp};
use crate::moyal::gaussian::{ratio_r, rat_pow, GaussSum, GaussTerm, NormalForm};
use crate::symcore::scalar::{cr, i_unit, CRat, Rat};
use crate::symcore::special::factorial;
use crate::symcore::{Mono, PolyC};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

type SVec = BTreeMap<Vec<u32>, CRat>;

fn push(v: &mut SVec, k: Vec<u32>, c: CRat) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k.clone()).or_insert_with(CRat::zero);
    *e = e.clone() + c;
    if e.is_zero() {
        v.remove(&k);
    }
}

/// X_j or D_j (var ≥ n) applied to f_k.
fn apply_var(n: usize, var: usize, k: &[u32]) -> SVec {
    let j = var % n;
    let mut out = SVec::new();
    let half = cr(Rat::new(1.into(), 2.into()));
    let mut up = k.to_vec();
    up[j] += 1;
    let (c_down, c_up) = if var < n {
        (cr(Rat::from_integer(k[j].into())), half)
    } else {
        (
            -i_unit() * cr(Rat::from_integer(k[j].into())),
            i_unit() * half,
        )
    };
    push(&mut out, up, c_up);
    if k[j] > 0 {
        let mut down = k.to_vec();
        down[j] -= 1;
        push(&mut out, down, c_down);
    }
    out
}

/// Weyl-ordered monomial operators acting on basis vectors, memoized.
struct MonoActor {
    n: usize,
    cache: HashMap<(Mono, Vec<u32>), SVec>,
}

impl MonoActor {
    fn new(n: usize) -> Self {
        MonoActor {
            n,
            cache: HashMap::new(),
        }
    }

    /// Op(v·m') = ½(V Op(m') + Op(m') V) for a variable v.
    fn act(&mut self, m: &Mono, k: &[u32]) -> SVec {
        let key = (m.clone(), k.to_vec());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let res = match m.iter().position(|&e| e > 0) {
            None => {
                let mut v = SVec::new();
                v.insert(k.to_vec(), CRat::one());
                v
            }
            Some(var) => {
                let mut rest = m.clone();
                rest[var] -= 1;
                let half = cr(Rat::new(1.into(), 2.into()));
                let mut out = SVec::new();
                for (s, c) in self.act(&rest, k) {
                    for (t, d) in apply_var(self.n, var, &s) {
                        push(&mut out, t, c.clone() * d * half.clone());
                    }
                }
                for (s, c) in apply_var(self.n, var, k) {
                    for (t, d) in self.act(&rest, &s) {
                        push(&mut out, t, c.clone() * d * half.clone());
                    }
                }
                out
            }
        };
        self.cache.insert(key, res.clone());
        res
    }
}

/// Compression of Op^w(P) to the basis, exact.
pub fn quantize_poly_exact(p: &PolyC, basis: &FockBasis) -> ExactOp {
    let n = basis.n();
    assert_eq!(p.n(), n);
    let mut actor = MonoActor::new(n);
    let mut op = ExactOp::zeros(basis);
    for (j, k) in basis.states().iter().enumerate() {
        for (m, c) in p.terms() {
            for (s, d) in actor.act(m, k) {
                if let Some(i) = basis.index_of(&s) {
                    op.mat[i][j] = op.mat[i][j].clone() + c.clone() * d;
                }
            }
        }
    }
    op
}

/// ⟨f_k, Op^w(P) f_k⟩ coefficients for each state k, exact.
pub fn diagonal_exact(p: &PolyC, states: &[Vec<u32>]) -> Vec<CRat> {
    let mut actor = MonoActor::new(p.n());
    states
        .iter()
        .map(|k| {
            let mut acc = CRat::zero();
            for (m, c) in p.terms() {
                if let Some(d) = actor.act(m, k).get(k) {
                    acc += c.clone() * d.clone();
                }
            }
            acc
        })
        .collect()
}

pub fn quantize_poly(p: &PolyC, basis: &FockBasis) -> FockOp {
    quantize_poly_exact(p, basis).to_float()
}

/// Ĝ_λ = diag((1+λ)^{−n} r^{|m|}) dressed by (√2a†)^α … (√2a)^β.
pub fn quantize_normal_form_exact(nf: &NormalForm, basis: &FockBasis) -> ExactOp {
    let n = basis.n();
    let lam = &nf.lambda;
    let r = ratio_r(lam);
    let pref = rat_pow(&(Rat::one() / (Rat::one() + lam)), n as i32);
    let mut op = ExactOp::zeros(basis);
    for (j, k) in basis.states().iter().enumerate() {
        for ((alpha, beta), c) in &nf.terms {
            if k.iter().zip(beta).any(|(&kk, &b)| kk < b as u32) {
                continue;
            }
            let mut w = pref.clone();
            let mut target = Vec::with_capacity(n);
            let mut level = 0u32;
            for t in 0..n {
                let (kk, b, a) = (k[t], beta[t] as u32, alpha[t] as u32);
                // (√2 a)^b f_k = 2^b k!/(k−b)! f_{k−b}
                w *= Rat::from_integer(
                    num_bigint::BigInt::from(2).pow(b) * factorial(kk) / factorial(kk - b),
                );
                level += kk - b;
                target.push(kk - b + a);
            }
            if r.is_zero() {
                if level > 0 {
                    continue;
                }
            } else {
                w *= rat_pow(&r, level as i32);
            }
            if let Some(i) = basis.index_of(&target) {
                op.mat[i][j] = op.mat[i][j].clone() + c.clone() * cr(w);
            }
        }
    }
    op
}

pub fn quantize_gauss_exact(g: &GaussSum, basis: &FockBasis) -> ExactOp {
    let mut op = ExactOp::zeros(basis);
    for t in g.terms() {
        let q = quantize_normal_form_exact(&NormalForm::from_gauss(&t), basis);
        for (row, qrow) in op.mat.iter_mut().zip(q.mat) {
            for (a, b) in row.iter_mut().zip(qrow) {
                *a = a.clone() + b;
            }
        }
    }
    op
}

pub fn quantize_gauss(g: &GaussSum, basis: &FockBasis) -> FockOp {
    quantize_gauss_exact(g, basis).to_float()
}

pub fn quantize_gauss_term(t: &GaussTerm, basis: &FockBasis) -> FockOp {
    quantize_gauss(&GaussSum::single(t.clone()), basis)
}

/// Columns whose image under an operator of degree `deg` stays inside the basis.
pub fn interior(basis: &FockBasis, deg: u32) -> Vec<usize> {
    (0..basis.dim())
        .filter(|&i| basis.total(i) + deg <= basis.cutoff())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::gaussian::vacuum_symbol;
    use crate::moyal::poly_star;
    use crate::symcore::scalar::{ci, rat};

    #[test]
    fn oscillator_spectrum() {
        let b = FockBasis::new(1, 6);
        let q = quantize_poly_exact(&PolyC::q(1), &b);
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let want = if i == j { ci(2 * i as i64 + 1) } else { ci(0) };
                assert_eq!(q.mat[i][j], want);
            }
        }
    }

    #[test]
    fn x_xi_symmetrized() {
        // Op(xξ) = (XD + DX)/2
        let b = FockBasis::new(1, 5);
        let x = quantize_poly_exact(&PolyC::x(1, 0), &FockBasis::new(1, 6));
        let d = quantize_poly_exact(&PolyC::xi(1, 0), &FockBasis::new(1, 6));
        let xd = x.mul(&d);
        let dx = d.mul(&x);
        let op = quantize_poly_exact(&PolyC::x(1, 0).mul(&PolyC::xi(1, 0)), &b);
        let half = cr(rat(1, 2));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(op.mat[i][j], (xd.mat[i][j].clone() + dx.mat[i][j].clone()) * half.clone());
            }
        }
    }

    #[test]
    fn vacuum_is_rank_one_projection() {
        let b = FockBasis::new(2, 4);
        let s = quantize_gauss_exact(&GaussSum::single(vacuum_symbol(2)), &b);
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let want = if i == 0 && j == 0 { ci(1) } else { ci(0) };
                assert_eq!(s.mat[i][j], want);
            }
        }
    }

    #[test]
    fn homomorphism_small() {
        let n = 1;
        let b = FockBasis::new(n, 10);
        let a = PolyC::x(n, 0).mul(&PolyC::x(n, 0)).add(&PolyC::xi(n, 0));
        let c = PolyC::x(n, 0).mul(&PolyC::xi(n, 0));
        let lhs = quantize_poly_exact(&a, &b).mul(&quantize_poly_exact(&c, &b));
        let rhs = quantize_poly_exact(&poly_star(&a, &c), &b);
        for j in interior(&b, 4) {
            for i in 0..b.dim() {
                assert_eq!(lhs.mat[i][j], rhs.mat[i][j]);
            }
        }
    }
}
