//! μ⁻¹ : sp(2n) → 𝔤 and ν(φ) = (μ⁻¹φ, −μ⁻¹φ).

use crate::error::{Error, Result};
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::paired::PairedSymbol;
use crate::symcore::scalar::{cr, crat_from_c64, i_unit, rat, CRat, Rat, C64};
use crate::symcore::PolyC;
use nalgebra::DMatrix;
use num_traits::Zero;

/// Purely imaginary homogeneous quadratic, an element of 𝔤.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadHamiltonian {
    pub value: PolyC,
}

impl QuadHamiltonian {
    pub fn new(value: PolyC) -> Result<Self> {
        let ok = value.is_zero() || (value.is_homogeneous() && value.degree() == Some(2));
        if !ok || !value.is_imaginary() {
            return Err(Error::NotSymplecticLieAlgebra(
                "expected a purely imaginary homogeneous quadratic".into(),
            ));
        }
        Ok(QuadHamiltonian { value })
    }
}

/// ω(a, b) = aᵀΩb for ω = Σ dx_j ∧ dξ_j.
fn omega_entry(n: usize, a: usize, b: usize) -> i64 {
    if a < n && b == a + n {
        1
    } else if a >= n && b + n == a {
        -1
    } else {
        0
    }
}

/// max |φᵀΩ + Ωφ|.
pub fn sp_defect(phi: &DMatrix<C64>) -> f64 {
    let d = phi.nrows();
    let n = d / 2;
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for c in 0..d {
                s += phi[(c, a)] * omega_entry(n, c, b) as f64;
                s += omega_entry(n, a, c) as f64 * phi[(c, b)];
            }
            worst = worst.max(s.norm());
        }
    }
    worst
}

fn check_sp(phi: &DMatrix<C64>, tol: f64) -> Result<usize> {
    let d = phi.nrows();
    if d == 0 || !d.is_multiple_of(2) || phi.ncols() != d {
        return Err(Error::NotSymplecticLieAlgebra(format!(
            "{}×{} matrix",
            phi.nrows(),
            phi.ncols()
        )));
    }
    let scale = phi.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let e = sp_defect(phi);
    if e > tol * scale {
        return Err(Error::NotSymplecticLieAlgebra(format!("φᵀΩ + Ωφ = {e:.2e}")));
    }
    if phi.iter().any(|x| x.im.abs() > tol * scale) {
        return Err(Error::NotSymplecticLieAlgebra("complex entries".into()));
    }
    Ok(d / 2)
}

/// X(v) = −(i/2) ω(φv, v), exact in the entries of φ.
pub fn mu_inverse_exact(phi: &[Vec<Rat>]) -> Result<QuadHamiltonian> {
    let d = phi.len();
    if d == 0 || !d.is_multiple_of(2) || phi.iter().any(|r| r.len() != d) {
        return Err(Error::NotSymplecticLieAlgebra(format!("{d}-row matrix")));
    }
    let n = d / 2;
    for a in 0..d {
        for b in 0..d {
            let mut s = Rat::zero();
            for c in 0..d {
                s += phi[c][a].clone() * Rat::from_integer(omega_entry(n, c, b).into());
                s += Rat::from_integer(omega_entry(n, a, c).into()) * phi[c][b].clone();
            }
            if !s.is_zero() {
                return Err(Error::NotSymplecticLieAlgebra(format!(
                    "φᵀΩ + Ωφ has entry {s} at ({a}, {b})"
                )));
            }
        }
    }
    let mut p = PolyC::zero(n);
    let coef = -i_unit() * cr(rat(1, 2));
    // ω(φv, v) = Σ_{a,b,c} φ_{ca} v_a Ω_{cb} v_b
    for a in 0..d {
        for b in 0..d {
            let mut w = Rat::zero();
            for c in 0..d {
                let o = omega_entry(n, c, b);
                if o != 0 {
                    w += phi[c][a].clone() * Rat::from_integer(o.into());
                }
            }
            if w.is_zero() {
                continue;
            }
            let mut mono = vec![0u16; d];
            mono[a] += 1;
            mono[b] += 1;
            p.add_term(mono, coef.clone() * cr(w));
        }
    }
    QuadHamiltonian::new(p)
}

/// μ⁻¹ for a float matrix. The coordinates in `sp_basis` are converted to
/// rationals exactly, which projects away defects below the tolerance.
pub fn mu_inverse(phi: &DMatrix<C64>) -> Result<QuadHamiltonian> {
    let n = check_sp(phi, 1e-10)?;
    let d = 2 * n;
    let mut exact = vec![vec![Rat::zero(); d]; d];
    for (c, e) in sp_coords(phi).iter().zip(sp_basis(n)) {
        let c = crat_from_c64(C64::new(c.re, 0.0)).re;
        for i in 0..d {
            for j in 0..d {
                if e[(i, j)].re != 0.0 {
                    exact[i][j] += c.clone() * Rat::from_integer((e[(i, j)].re as i64).into());
                }
            }
        }
    }
    mu_inverse_exact(&exact)
}

/// (X, −X) in the grade-0 convention.
pub fn nu_of(x: &QuadHamiltonian) -> Result<PairedSymbol> {
    let n = x.value.n();
    if x.value.is_zero() {
        return Ok(PairedSymbol::zero(n));
    }
    PairedSymbol::with_grade(PhgExpansion::from_poly(x.value.clone())?, 0)
}

pub fn nu(phi: &DMatrix<C64>) -> Result<PairedSymbol> {
    nu_of(&mu_inverse(phi)?)
}

/// Basis of sp(2n): [[E_ij, 0], [0, −E_ji]], then symmetric upper-right
/// blocks (i ≤ j), then symmetric lower-left blocks (i ≤ j).
pub fn sp_basis(n: usize) -> Vec<DMatrix<C64>> {
    let d = 2 * n;
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = DMatrix::zeros(d, d);
            m[(i, j)] = one;
            m[(n + j, n + i)] = -one;
            out.push(m);
        }
    }
    for (ro, co) in [(0, n), (n, 0)] {
        for i in 0..n {
            for j in i..n {
                let mut m = DMatrix::zeros(d, d);
                m[(ro + i, co + j)] = one;
                m[(ro + j, co + i)] = one;
                out.push(m);
            }
        }
    }
    out
}

/// Coordinates of φ ∈ sp(2n) in `sp_basis`.
pub fn sp_coords(phi: &DMatrix<C64>) -> Vec<C64> {
    let n = phi.nrows() / 2;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(phi[(i, j)]);
        }
    }
    for (ro, co) in [(0, n), (n, 0)] {
        for i in 0..n {
            for j in i..n {
                out.push(phi[(ro + i, co + j)]);
            }
        }
    }
    out
}

/// ν of each basis element, exact.
pub fn nu_basis(n: usize) -> Result<Vec<PairedSymbol>> {
    sp_basis(n).iter().map(nu).collect()
}

/// (φ.w)(v) = −w(φv) for a linear symbol w.
pub fn act_on_linear(phi: &[Vec<Rat>], w: &PolyC) -> PolyC {
    let d = phi.len();
    let mut m = vec![vec![CRat::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            m[i][j] = cr(phi[i][j].clone());
        }
    }
    w.linear_substitute(&m).neg()
}
