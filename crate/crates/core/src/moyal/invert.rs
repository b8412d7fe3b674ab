//! Parametrices of elliptic paired symbols.
//!
//! Three shapes are supported: a constant matrix plus gaussian deviations
//! at λ = 1 (inverted exactly as a finite-rank perturbation on Fock space),
//! the scalar a·Q + b (inverted by the resolvent), and expansions whose
//! leading term is C·Q^e (Neumann series, no closure). Anything else is
//! rejected.

use super::closure::Closure;
use super::expansion::PhgExpansion;
use super::gaussian::{GaussSum, GaussTerm, NormalForm};
use super::paired::{MatrixSymbol, PairedSymbol};
use super::resolvent::{Kernel, ResolventSum};
use crate::error::{Error, Result};
use crate::symcore::radial::RadialRat;
use crate::symcore::scalar::{cr, CRat, Rat};
use crate::symcore::special::factorial;
use crate::symcore::{Mono, PolyC};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Exact inverse by Gauss–Jordan elimination; None when singular.
pub fn exact_inverse(m: &[Vec<CRat>]) -> Option<Vec<Vec<CRat>>> {
    let d = m.len();
    let mut a: Vec<Vec<CRat>> = m.to_vec();
    let mut inv: Vec<Vec<CRat>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { CRat::one() } else { CRat::zero() })
                .collect()
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        let pinv = CRat::one() / p;
        for j in 0..d {
            a[col][j] = a[col][j].clone() * pinv.clone();
            inv[col][j] = inv[col][j].clone() * pinv.clone();
        }
        for r in 0..d {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..d {
                let t = a[col][j].clone() * f.clone();
                a[r][j] = a[r][j].clone() - t;
                let t = inv[col][j].clone() * f.clone();
                inv[r][j] = inv[r][j].clone() - t;
            }
        }
    }
    Some(inv)
}

fn pow2(k: u32) -> Rat {
    Rat::from_integer(num_bigint::BigInt::from(2).pow(k))
}

/// 2^{|β|} β! / 2^n: the weight linking normal-form coefficients at λ = 1
/// to matrix entries in the basis f_k = (√2 a†)^k |0⟩.
fn vacuum_weight(beta: &Mono) -> Rat {
    let n = beta.len() as u32;
    let mut w = Rat::one();
    for &b in beta {
        w *= pow2(b as u32) * Rat::from_integer(factorial(b as u32));
    }
    w / pow2(n)
}

/// Splits a closure side into (constant, λ=1 normal form); None if other parts occur.
fn constant_plus_vacuum(c: &Closure) -> Option<(CRat, NormalForm)> {
    let n = c.n();
    if !c.resolvent.is_zero() {
        return None;
    }
    let p = &c.poly;
    if p.degree().unwrap_or(0) > 0 {
        return None;
    }
    let k = p.constant_term();
    let mut nf = NormalForm::zero(n, Rat::one());
    for t in c.gauss.terms() {
        if t.lambda != Rat::one() {
            return None;
        }
        nf = nf.add(&NormalForm::from_gauss(&t));
    }
    Some((k, nf))
}

/// Inverts C ⊗ 1 + D where D is an r×r array of λ=1 normal forms.
fn invert_finite_rank(
    n: usize,
    c: &[Vec<CRat>],
    d: &[Vec<NormalForm>],
) -> Result<(Vec<Vec<CRat>>, Vec<Vec<NormalForm>>)> {
    let r = c.len();
    let cinv = exact_inverse(c)
        .ok_or_else(|| Error::NotElliptic("constant part is singular".into()))?;
    let mut states: BTreeSet<Mono> = BTreeSet::new();
    for row in d {
        for nf in row {
            for (a, b) in nf.terms.keys() {
                states.insert(a.clone());
                states.insert(b.clone());
            }
        }
    }
    let states: Vec<Mono> = states.into_iter().collect();
    let idx: BTreeMap<&Mono, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let m = states.len();
    let dim = r * m;
    let mut a = vec![vec![CRat::zero(); dim]; dim];
    for i in 0..r {
        for j in 0..r {
            for s in 0..m {
                a[i * m + s][j * m + s] = c[i][j].clone();
            }
            for ((al, be), v) in &d[i][j].terms {
                let w = cr(vacuum_weight(be));
                let (p, q) = (i * m + idx[al], j * m + idx[be]);
                a[p][q] = a[p][q].clone() + v.clone() * w;
            }
        }
    }
    let ainv = exact_inverse(&a).ok_or_else(|| {
        Error::NotElliptic("finite-rank compression is singular".into())
    })?;
    let mut e = vec![vec![NormalForm::zero(n, Rat::one()); r]; r];
    for i in 0..r {
        for j in 0..r {
            for (s, al) in states.iter().enumerate() {
                for (t, be) in states.iter().enumerate() {
                    let mut v = ainv[i * m + s][j * m + t].clone();
                    if s == t {
                        v -= cinv[i][j].clone();
                    }
                    if v.is_zero() {
                        continue;
                    }
                    let w = cr(vacuum_weight(be));
                    let mut single = NormalForm::zero(n, Rat::one());
                    single.terms.insert((al.clone(), be.clone()), v / w);
                    e[i][j] = e[i][j].add(&single);
                }
            }
        }
    }
    Ok((cinv, e))
}

fn side_closures(s: &MatrixSymbol, plus: bool) -> Option<Vec<Closure>> {
    s.entries
        .iter()
        .map(|e| {
            if plus {
                e.plus.closure().cloned()
            } else {
                e.minus.closure().cloned()
            }
        })
        .collect()
}

fn try_finite_rank(s: &MatrixSymbol) -> Result<Option<MatrixSymbol>> {
    let n = s.n();
    let r = s.r;
    let (plus, minus) = match (side_closures(s, true), side_closures(s, false)) {
        (Some(p), Some(m)) => (p, m),
        _ => return Ok(None),
    };
    let mut sides = Vec::new();
    for cl in [&plus, &minus] {
        let mut c = vec![vec![CRat::zero(); r]; r];
        let mut d = vec![vec![NormalForm::zero(n, Rat::one()); r]; r];
        for i in 0..r {
            for j in 0..r {
                match constant_plus_vacuum(&cl[i * r + j]) {
                    Some((k, nf)) => {
                        c[i][j] = k;
                        d[i][j] = nf;
                    }
                    None => return Ok(None),
                }
            }
        }
        sides.push(invert_finite_rank(n, &c, &d)?);
    }
    let to_closure = |k: &CRat, nf: &NormalForm| {
        let mut cl = Closure::from_poly(PolyC::constant(n, k.clone()));
        if !nf.is_zero() {
            cl.gauss = GaussSum::single(nf.to_gauss());
        }
        cl
    };
    let grade = s.grade();
    let mut entries = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let p = PhgExpansion::from_closure(to_closure(&sides[0].0[i][j], &sides[0].1[i][j]), 0, 0);
            let m = PhgExpansion::from_closure(to_closure(&sides[1].0[i][j], &sides[1].1[i][j]), 0, 0);
            entries.push(PairedSymbol::from_parts(p, m, -grade)?);
        }
    }
    Ok(Some(MatrixSymbol { r, entries }))
}

/// (a, b) when the side is exactly a·Q + b with a ≠ 0.
fn affine_in_q(c: &Closure) -> Option<(CRat, CRat)> {
    if !c.gauss.is_zero() || !c.resolvent.is_zero() {
        return None;
    }
    let n = c.n();
    let b = c.poly.constant_term();
    let rest = c.poly.sub(&PolyC::constant(n, b.clone()));
    let q = PolyC::q(n);
    let a = rest.coeff(&{
        let mut m = vec![0u16; 2 * n];
        m[0] = 2;
        m
    });
    if a.is_zero() || rest != q.scale(&a) {
        return None;
    }
    Some((a, b))
}

/// 1/(a(Q − γ)) with γ = −b/a, as a closure when the kernel is admissible.
fn resolvent_side(n: usize, a: &CRat, b: &CRat) -> Result<Option<Closure>> {
    let g = -b.clone() / a.clone();
    if !g.im.is_zero() {
        return Ok(None);
    }
    let gamma = g.re;
    // spectrum of Op(Q) is n, n+2, …
    let shifted = &gamma - Rat::from_integer((n as i64).into());
    if shifted >= Rat::zero() && shifted.is_integer() && shifted.to_integer() % 2 == num_bigint::BigInt::zero() {
        return Err(Error::NotElliptic(format!(
            "γ = {gamma} is an eigenvalue of the harmonic oscillator"
        )));
    }
    if !Kernel::new(n, gamma.clone()).is_admissible() {
        return Ok(None);
    }
    let inv_a = CRat::one() / a.clone();
    Ok(Some(Closure::from_resolvent(ResolventSum::pure(n, gamma, inv_a))))
}

fn try_resolvent(s: &MatrixSymbol, depth: usize) -> Result<Option<MatrixSymbol>> {
    if s.r != 1 {
        return Ok(None);
    }
    let e = &s.entries[0];
    let n = e.n();
    let (pc, mc) = match (e.plus.closure(), e.minus.closure()) {
        (Some(p), Some(m)) => (p, m),
        _ => return Ok(None),
    };
    let ((pa, pb), (ma, mb)) = match (affine_in_q(pc), affine_in_q(mc)) {
        (Some(p), Some(m)) => (p, m),
        _ => return Ok(None),
    };
    let plus_cl = resolvent_side(n, &pa, &pb)?;
    let minus_cl = resolvent_side(n, &ma, &mb)?;
    let (plus_cl, minus_cl) = match (plus_cl, minus_cl) {
        (Some(p), Some(m)) => (p, m),
        _ => return Ok(None),
    };
    let plus = PhgExpansion::from_closure(plus_cl, -2, depth);
    let minus = PhgExpansion::from_closure(minus_cl, -2, depth);
    let grade = -e.grade;
    let p = PairedSymbol::from_parts(plus, minus, grade)?;
    Ok(Some(MatrixSymbol::scalar(p)))
}

/// Leading term C·Q^e of an entry, as (C, e); None if not of that shape.
fn leading_q_power(e: &PhgExpansion) -> Option<(CRat, i32)> {
    let t = e.terms().get(&e.order())?;
    let num = t.numerator();
    let k = t.q_power() as i32;
    if k > 0 {
        if num.degree() != Some(0) {
            return None;
        }
        return Some((num.constant_term(), -k));
    }
    // polynomial c·Q^m
    let d = num.degree()?;
    if d % 2 != 0 {
        return None;
    }
    let m = d / 2;
    let qm = PolyC::q(num.n()).pow(m);
    let mut mono = vec![0u16; 2 * num.n()];
    mono[0] = d as u16;
    let c = num.coeff(&mono);
    if c.is_zero() || *num != qm.scale(&c) {
        return None;
    }
    Some((c, m as i32))
}

fn q_power_expansion(n: usize, e: i32, c: &CRat) -> PhgExpansion {
    if e >= 0 {
        let p = PolyC::q(n).pow(e as u32).scale(c);
        return PhgExpansion::from_poly_with_order(p, 2 * e).expect("homogeneous");
    }
    let t = RadialRat::new(PolyC::constant(n, c.clone()), (-e) as u32);
    PhgExpansion::from_terms(n, 2 * e, BTreeMap::from([(2 * e, t)]), None)
}

/// Matrix of expansions with entries multiplied termwise.
fn mat_mul(a: &[PhgExpansion], b: &[PhgExpansion], r: usize) -> Vec<PhgExpansion> {
    let mut out = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let mut acc = a[i * r].star(&b[j]);
            for k in 1..r {
                acc = acc.add(&a[i * r + k].star(&b[k * r + j]));
            }
            out.push(acc);
        }
    }
    out
}

fn neumann_side(a: &[PhgExpansion], r: usize, depth: usize) -> Result<Vec<PhgExpansion>> {
    let n = a[0].n();
    let order = a.iter().map(|e| e.order()).max().unwrap_or(0);
    let mut c = vec![vec![CRat::zero(); r]; r];
    let mut power: Option<i32> = None;
    for i in 0..r {
        for j in 0..r {
            let e = &a[i * r + j];
            if e.order() < order || !e.terms().contains_key(&order) {
                continue;
            }
            let (k, p) = leading_q_power(e).ok_or_else(|| {
                Error::Unsupported("leading term is not a multiple of a power of Q".into())
            })?;
            if power.is_some_and(|q| q != p) {
                return Err(Error::Unsupported("mixed leading powers".into()));
            }
            power = Some(p);
            c[i][j] = k;
        }
    }
    let e = power.ok_or_else(|| Error::NotElliptic("leading term vanishes".into()))?;
    let cinv = exact_inverse(&c)
        .ok_or_else(|| Error::NotElliptic("leading matrix is singular".into()))?;
    let b: Vec<PhgExpansion> = (0..r * r)
        .map(|idx| q_power_expansion(n, -e, &cinv[idx / r][idx % r]))
        .collect();
    // a # b = 1 − rem, rem of order ≤ −2
    let ab = mat_mul(a, &b, r);
    let valid = -2 * depth as i32;
    let ident = |i: usize, j: usize| {
        if i == j {
            PhgExpansion::one(n)
        } else {
            PhgExpansion::zero(n)
        }
    };
    let rem: Vec<PhgExpansion> = (0..r * r)
        .map(|idx| ident(idx / r, idx % r).sub(&ab[idx]).truncate(valid))
        .collect();
    let mut sum: Vec<PhgExpansion> = (0..r * r).map(|idx| ident(idx / r, idx % r)).collect();
    let mut pw = sum.clone();
    for _ in 0..depth {
        pw = mat_mul(&pw, &rem, r)
            .into_iter()
            .map(|x| x.truncate(valid))
            .collect();
        sum = sum.iter().zip(&pw).map(|(s, p)| s.add(p)).collect();
    }
    let inv = mat_mul(&b, &sum, r);
    let vd = -2 * e - 2 * depth as i32;
    Ok(inv.into_iter().map(|x| x.truncate(vd)).collect())
}

fn try_neumann(s: &MatrixSymbol, depth: usize) -> Result<MatrixSymbol> {
    let r = s.r;
    let plus: Vec<PhgExpansion> = s.entries.iter().map(|e| e.plus.clone()).collect();
    let inv = neumann_side(&plus, r, depth)?;
    let grade = -s.grade();
    let entries = inv
        .into_iter()
        .map(|p| PairedSymbol::with_grade(strip_closure(p), grade))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixSymbol { r, entries })
}

fn strip_closure(p: PhgExpansion) -> PhgExpansion {
    PhgExpansion::from_terms(p.n(), p.order(), p.terms().clone(), p.valid_down_to())
}

/// Parametrix of σ through `depth` step-2 terms.
pub fn invert(s: &MatrixSymbol, depth: usize) -> Result<MatrixSymbol> {
    if let Some(r) = try_finite_rank(s)? {
        return Ok(r);
    }
    if let Some(r) = try_resolvent(s, depth)? {
        return Ok(r);
    }
    try_neumann(s, depth)
}

/// Scalar convenience wrapper.
pub fn invert_scalar(s: &PairedSymbol, depth: usize) -> Result<PairedSymbol> {
    Ok(invert(&MatrixSymbol::scalar(s.clone()), depth)?.entries.remove(0))
}

/// The Toeplitz-type symbol f·s + (1 − s) on the plus side, 1 on the minus side.
pub fn toeplitz_entry_closure(n: usize, f: &CRat, diag: bool) -> Closure {
    let s = super::gaussian::vacuum_symbol(n);
    let shift = if diag { f.clone() - CRat::one() } else { f.clone() };
    let mut cl = Closure::from_poly(if diag { PolyC::one(n) } else { PolyC::zero(n) });
    cl.gauss = GaussSum::single(GaussTerm::new(s.poly.scale(&shift), s.lambda));
    cl
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::paired::make_paired;
    use crate::symcore::scalar::{ci, crat, rat};

    #[test]
    fn identity_inverse() {
        let id = MatrixSymbol::identity(1, 1);
        assert_eq!(invert(&id, 4).unwrap().entries[0].plus.as_poly(), Some(PolyC::one(1)));
    }

    #[test]
    fn toeplitz_scalar_inverse() {
        let n = 1;
        let f = crat(rat(3, 5), rat(4, 5));
        let plus = PhgExpansion::from_closure(toeplitz_entry_closure(n, &f, true), 0, 0);
        let minus = PhgExpansion::one(n);
        let t = PairedSymbol::from_parts(plus, minus, 0).unwrap();
        let inv = invert_scalar(&t, 4).unwrap();
        let want = toeplitz_entry_closure(n, &(CRat::one() / f), true);
        assert_eq!(inv.plus.closure().unwrap().gauss, want.gauss);
        assert_eq!(inv.minus.as_poly(), Some(PolyC::one(n)));
        let prod = t.mul(&inv);
        assert!(prod.plus.closure().unwrap().gauss.is_zero());
    }

    #[test]
    fn resolvent_inverse() {
        let n = 1;
        let g = rat(1, 2);
        let p = PolyC::q(n).sub(&PolyC::constant(n, cr(g.clone())));
        let s = make_paired(PhgExpansion::from_poly(p).unwrap());
        let inv = invert_scalar(&s, 4).unwrap();
        assert_eq!(inv.grade, -2);
        let prod = s.mul(&inv);
        let one = PhgExpansion::one(n);
        assert!(prod.plus.agrees_with(&one));
        assert!(prod.minus.agrees_with(&one));
    }

    #[test]
    fn neumann_matches_resolvent_expansion() {
        let n = 2;
        let g = rat(1, 3);
        let p = PolyC::q(n).sub(&PolyC::constant(n, cr(g.clone())));
        let e = PhgExpansion::from_terms(
            n,
            2,
            PhgExpansion::from_poly(p).unwrap().terms().clone(),
            None,
        );
        let s = make_paired(e);
        let inv = invert_scalar(&s, 5).unwrap();
        let r = PhgExpansion::resolvent(n, g, 5);
        assert!(inv.plus.agrees_with(&r));
        assert_eq!(inv.plus.valid_down_to(), Some(-12));
    }

    #[test]
    fn spectral_point_rejected() {
        let n = 1;
        let p = PolyC::q(n).sub(&PolyC::constant(n, ci(3)));
        let s = make_paired(PhgExpansion::from_poly(p).unwrap());
        assert!(matches!(invert_scalar(&s, 3), Err(Error::NotElliptic(_))));
    }
}
