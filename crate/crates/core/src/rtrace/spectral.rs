//! Spectral route: ζ-regularized traces FP_{s=0} Tr(A H^{−s}) through the
//! Fock diagonal. The spectrum of H is n + 2N with multiplicity C(N+n−1, n−1).

use crate::error::{Error, Result};
use crate::fock::quantize::diagonal_exact;
use crate::moyal::gaussian::{ratio_r, GaussSum, NormalForm};
use crate::symcore::scalar::{cr, crat_to_c64, rat_to_f64, rint, CRat, Rat, C64};
use crate::symcore::special::{zeta_neg, zeta_pos};
use crate::symcore::PolyC;
use num_traits::{One, Zero};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_n(n: usize) -> Result<()> {
    if n == 1 || n == 2 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("spectral route for n = {n}")))
    }
}

/// Monomial coefficients of the polynomial through (x_i, y_i).
fn interpolate(xs: &[Rat], ys: &[CRat]) -> Vec<CRat> {
    let m = xs.len();
    let mut dd: Vec<CRat> = ys.to_vec();
    for l in 1..m {
        for i in (l..m).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / cr(&xs[i] - &xs[i - l]);
        }
    }
    // Horner expansion of the Newton form.
    let mut c = vec![CRat::zero(); m];
    for i in (0..m).rev() {
        // c ← c·(x − x_i) + dd_i
        let mut next = vec![CRat::zero(); m];
        for j in 0..m {
            if c[j].is_zero() {
                continue;
            }
            if j + 1 < m {
                next[j + 1] = next[j + 1].clone() + c[j].clone();
            }
            next[j] = next[j].clone() - c[j].clone() * cr(xs[i].clone());
        }
        next[0] = next[0].clone() + dd[i].clone();
        c = next;
    }
    c
}

/// FP_{s=0} of Σ_N mult(N)·λ_N^{−s} D(N) for the Fock diagonal D of Op(P), exact.
pub fn poly_zeta_trace(p: &PolyC) -> Result<CRat> {
    let n = p.n();
    check_n(n)?;
    let deg = p.degree().unwrap_or(0) as usize;
    let pts = deg / 2 + 3;
    let mut xs = Vec::with_capacity(pts);
    let mut ys = Vec::with_capacity(pts);
    for level in 0..pts as u32 {
        let states: Vec<Vec<u32>> = if n == 1 {
            vec![vec![level]]
        } else {
            (0..=level).map(|a| vec![a, level - a]).collect()
        };
        let sum = diagonal_exact(p, &states)
            .into_iter()
            .fold(CRat::zero(), |a, b| a + b);
        ys.push(sum);
        // n = 1: variable λ = 2N+1; n = 2: variable M = N+1 with λ = 2M.
        xs.push(if n == 1 {
            rint(2 * level as i64 + 1)
        } else {
            rint(level as i64 + 1)
        });
    }
    let c = interpolate(&xs, &ys);
    let mut acc = CRat::zero();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let z = zeta_neg(j as u32);
        // n = 1: (1 − 2^{j}) ζ(−j);  n = 2: ζ(−j)
        let f = if n == 1 {
            (Rat::one() - Rat::from_integer(num_bigint::BigInt::from(2).pow(j as u32))) * z
        } else {
            z
        };
        acc += cj.clone() * cr(f);
    }
    Ok(acc)
}

/// Laurent data at s = 0 of Σ_N mult(N) λ_N^{−a−s}: (finite part, residue).
fn dirichlet_fp(n: usize, a: i32) -> (f64, f64) {
    let ln2 = std::f64::consts::LN_2;
    let zeta = |s: i32| -> f64 {
        if s <= 0 {
            rat_to_f64(&zeta_neg((-s) as u32))
        } else {
            zeta_pos(s as f64)
        }
    };
    match n {
        1 if a == 1 => (0.5 * (EULER_GAMMA + ln2), 0.5),
        1 => ((1.0 - 2f64.powi(-a)) * zeta(a), 0.0),
        _ if a == 2 => (0.25 * (EULER_GAMMA - ln2), 0.25),
        _ => (2f64.powi(-a) * zeta(a - 1), 0.0),
    }
}

/// FP_{s=0} Σ_N mult(N) λ_N^{−s} Σ_i c_i/(λ_N − γ_i), with the residue at s = 0.
pub fn resolvent_zeta_trace(n: usize, parts: &[(Rat, CRat)]) -> Result<(C64, C64)> {
    check_n(n)?;
    let parts: Vec<(f64, C64)> = parts
        .iter()
        .map(|(g, c)| (rat_to_f64(g), crat_to_c64(c)))
        .collect();
    let jmax = 12;
    let mut fp = C64::new(0.0, 0.0);
    let mut res = C64::new(0.0, 0.0);
    for j in 0..=jmax {
        let m: C64 = parts.iter().map(|(g, c)| c * g.powi(j)).sum();
        let (f, r) = dirichlet_fp(n, 1 + j);
        fp += m * f;
        res += m * r;
    }
    // Convergent remainder Σ_i c_i γ_i^{J+1} λ^{−J−1}/(λ − γ_i).
    let mut tail = C64::new(0.0, 0.0);
    for level in 0..4000u32 {
        let lam = n as f64 + 2.0 * level as f64;
        let mult = if n == 1 { 1.0 } else { level as f64 + 1.0 };
        let t: C64 = parts
            .iter()
            .map(|(g, c)| c * g.powi(jmax + 1) / (lam.powi(jmax + 1) * (lam - g)))
            .sum();
        tail += t * mult;
        if t.norm() * mult < 1e-19 && level > 10 {
            break;
        }
    }
    Ok((fp + tail, res))
}

/// Σ_k ⟨e_k, Ĝ e_k⟩ over the full Fock space, summed level by level.
pub fn gauss_fock_trace(g: &GaussSum) -> Result<(C64, f64)> {
    let n = g.n;
    check_n(n)?;
    let mut total = C64::new(0.0, 0.0);
    for t in g.terms() {
        let nf = NormalForm::from_gauss(&t);
        let r = rat_to_f64(&ratio_r(&nf.lambda));
        let pref = (1.0 + rat_to_f64(&nf.lambda)).powi(-(n as i32));
        let diag: Vec<(Vec<u32>, C64)> = nf
            .terms
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|((_, b), c)| (b.iter().map(|&e| e as u32).collect(), crat_to_c64(c)))
            .collect();
        let top = diag.iter().map(|(b, _)| b.iter().sum::<u32>()).max().unwrap_or(0);
        let mut quiet = 0;
        for level in 0..20000u32 {
            let states: Vec<Vec<u32>> = if n == 1 {
                vec![vec![level]]
            } else {
                (0..=level).map(|a| vec![a, level - a]).collect()
            };
            let mut lev = C64::new(0.0, 0.0);
            for k in &states {
                for (b, c) in &diag {
                    if k.iter().zip(b).any(|(kk, bb)| kk < bb) {
                        continue;
                    }
                    let mut w = pref;
                    let mut rest = 0;
                    for (kk, bb) in k.iter().zip(b) {
                        // 2^b k!/(k−b)!
                        for i in 0..*bb {
                            w *= 2.0 * (kk - i) as f64;
                        }
                        rest += kk - bb;
                    }
                    w *= if rest == 0 { 1.0 } else { r.powi(rest as i32) };
                    lev += c * w;
                }
            }
            total += lev;
            if level > top + 4 && lev.norm() <= 1e-18 * total.norm().max(1e-300) {
                quiet += 1;
                if quiet >= 4 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if r == 0.0 && level > top {
                break;
            }
        }
    }
    Ok((total, 1e-14 * total.norm().max(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::poly_star;
    use crate::symcore::scalar::{ci, rat};

    #[test]
    fn zeta_trace_table_n1() {
        let q = PolyC::q(1);
        let mut p = PolyC::one(1);
        let want = [
            rat(0, 1),
            rat(1, 12),
            rat(0, 1),
            rat(-7, 120),
            rat(0, 1),
            rat(31, 252),
        ];
        for w in want {
            assert_eq!(poly_zeta_trace(&p).unwrap(), cr(w));
            p = poly_star(&p, &q);
        }
    }

    #[test]
    fn resolvent_pair_n1_tangent() {
        let g = rat(1, 3);
        let (v, res) =
            resolvent_zeta_trace(1, &[(g.clone(), ci(1)), (-g.clone(), ci(-1))]).unwrap();
        let want = std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI / 6.0).tan();
        assert!((v.re - want).abs() < 1e-13, "{v} vs {want}");
        assert!(res.norm() < 1e-15);
    }

    #[test]
    fn resolvent_pair_n2_cotangent() {
        let g = rat(1, 2);
        let (v, res) =
            resolvent_zeta_trace(2, &[(g.clone(), ci(1)), (-g.clone(), ci(1))]).unwrap();
        let x = 0.5;
        let want = -(std::f64::consts::PI * x / 4.0) / (std::f64::consts::PI * x / 2.0).tan();
        assert!((v.re - want).abs() < 1e-13, "{v} vs {want}");
        assert!(res.norm() < 1e-15);
    }
}
