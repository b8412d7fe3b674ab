//! Pairs (σ₊, σ₋) in the algebra 𝒜 and matrices of them.

use super::expansion::PhgExpansion;
use crate::error::{Error, Result};
use crate::symcore::scalar::{ci, CRat};
use crate::symcore::PolyC;
use num_traits::One;

/// σ = (σ₊, σ₋) with (σ₋)_h = (−1)^{(grade−h)/2} (σ₊)_h on the expansion.
///
/// `grade` is the Heisenberg order used for the sign convention: 2 for
/// (Q−γ, Q+γ), 0 for Toeplitz symbols and for ν(φ) = (p, −p).
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSymbol {
    pub plus: PhgExpansion,
    pub minus: PhgExpansion,
    pub grade: i32,
}

fn parity_sign(e: i32) -> CRat {
    if e.rem_euclid(2) == 0 {
        ci(1)
    } else {
        ci(-1)
    }
}

/// Minus side generated by ι at the order of `plus`.
pub fn make_paired(plus: PhgExpansion) -> PairedSymbol {
    let grade = plus.order();
    let minus = plus.iota();
    PairedSymbol { plus, minus, grade }
}

impl PairedSymbol {
    pub fn with_grade(plus: PhgExpansion, grade: i32) -> Result<Self> {
        let minus = plus.iota_graded(grade)?;
        Ok(PairedSymbol { plus, minus, grade })
    }

    /// Accepts an independent minus side after checking compatibility.
    pub fn from_parts(plus: PhgExpansion, minus: PhgExpansion, grade: i32) -> Result<Self> {
        let expected = plus.iota_graded(grade)?;
        if plus.n() != minus.n() || !expected.agrees_with(&minus) {
            return Err(Error::NotInAlgebraA(
                "minus side is not the involution of the plus side".into(),
            ));
        }
        Ok(PairedSymbol { plus, minus, grade })
    }

    pub fn identity(n: usize) -> Self {
        make_paired(PhgExpansion::one(n))
    }

    pub fn zero(n: usize) -> Self {
        PairedSymbol {
            plus: PhgExpansion::zero(n),
            minus: PhgExpansion::zero(n),
            grade: 0,
        }
    }

    pub fn constant(n: usize, c: CRat) -> Self {
        make_paired(PhgExpansion::constant(n, c))
    }

    /// (p, p) paired at the degree of p.
    pub fn from_poly(p: PolyC) -> Result<Self> {
        Ok(make_paired(PhgExpansion::from_poly(p)?))
    }

    pub fn n(&self) -> usize {
        self.plus.n()
    }

    pub fn is_compatible(&self) -> bool {
        self.plus
            .iota_graded(self.grade)
            .map(|e| e.agrees_with(&self.minus))
            .unwrap_or(false)
    }

    /// The same element written with another grade convention.
    pub fn regrade(&self, grade: i32) -> Result<Self> {
        let d = grade - self.grade;
        if d.rem_euclid(2) != 0 {
            return Err(Error::NotInAlgebraA(format!(
                "cannot regrade from {} to {grade}",
                self.grade
            )));
        }
        Ok(PairedSymbol {
            plus: self.plus.clone(),
            minus: self.minus.scale(&parity_sign(d / 2)),
            grade,
        })
    }

    /// Minus side in the grade-0 convention used by the trace.
    pub fn absolute_minus(&self) -> Result<PhgExpansion> {
        Ok(self.regrade(0)?.minus)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let o = o.regrade(self.grade)?;
        Ok(PairedSymbol {
            plus: self.plus.add(&o.plus),
            minus: self.minus.add(&o.minus),
            grade: self.grade,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &CRat) -> Self {
        PairedSymbol {
            plus: self.plus.scale(c),
            minus: self.minus.scale(c),
            grade: self.grade,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-CRat::one())
    }

    /// (u₊#w₊, w₋#u₋).
    pub fn mul(&self, w: &Self) -> Self {
        let r = PairedSymbol {
            plus: self.plus.star(&w.plus),
            minus: w.minus.star(&self.minus),
            grade: self.grade + w.grade,
        };
        debug_assert!(r.is_compatible());
        r
    }

    pub fn commutator(&self, w: &Self) -> Result<Self> {
        self.mul(w).sub(&w.mul(self))
    }

    pub fn linear_substitute(&self, m: &[Vec<CRat>]) -> Self {
        PairedSymbol {
            plus: self.plus.linear_substitute(m),
            minus: self.minus.linear_substitute(m),
            grade: self.grade,
        }
    }
}

pub fn pair_mul(u: &PairedSymbol, w: &PairedSymbol) -> PairedSymbol {
    u.mul(w)
}

/// r×r matrix of paired symbols, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSymbol {
    pub r: usize,
    pub entries: Vec<PairedSymbol>,
}

impl MatrixSymbol {
    pub fn new(r: usize, entries: Vec<PairedSymbol>) -> Result<Self> {
        if entries.len() != r * r || r == 0 {
            return Err(Error::Unsupported("matrix symbol has wrong shape".into()));
        }
        let g = entries[0].grade;
        if entries.iter().any(|e| (e.grade - g).rem_euclid(2) != 0) {
            return Err(Error::NotInAlgebraA("entries of mixed parity".into()));
        }
        let entries = entries
            .into_iter()
            .map(|e| e.regrade(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixSymbol { r, entries })
    }

    pub fn scalar(s: PairedSymbol) -> Self {
        MatrixSymbol {
            r: 1,
            entries: vec![s],
        }
    }

    pub fn identity(n: usize, r: usize) -> Self {
        let mut e = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                e.push(if i == j {
                    PairedSymbol::identity(n)
                } else {
                    PairedSymbol::zero(n)
                });
            }
        }
        MatrixSymbol { r, entries: e }
    }

    pub fn n(&self) -> usize {
        self.entries[0].n()
    }

    pub fn grade(&self) -> i32 {
        self.entries[0].grade
    }

    pub fn get(&self, i: usize, j: usize) -> &PairedSymbol {
        &self.entries[i * self.r + j]
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        assert_eq!(self.r, o.r);
        let r = self.r;
        let mut e = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                let mut acc: Option<PairedSymbol> = None;
                for k in 0..r {
                    let t = self.get(i, k).mul(o.get(k, j));
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t)?,
                    });
                }
                e.push(acc.expect("r ≥ 1"));
            }
        }
        Ok(MatrixSymbol { r, entries: e })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixSymbol { r: self.r, entries })
    }

    pub fn is_compatible(&self) -> bool {
        self.entries.iter().all(|e| e.is_compatible())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::scalar::{cr, i_unit, rat};

    #[test]
    fn heisenberg_symbol_minus_side() {
        let n = 1;
        let g = rat(1, 2);
        let p = PolyC::q(n).sub(&PolyC::constant(n, cr(g.clone())));
        let s = make_paired(PhgExpansion::from_poly(p).unwrap());
        let want = PolyC::q(n).add(&PolyC::constant(n, cr(g)));
        assert_eq!(s.minus.as_poly().unwrap(), want);
        assert_eq!(s.grade, 2);
    }

    #[test]
    fn bracket_of_linear_pairs() {
        let n = 1;
        let x = PairedSymbol::from_poly(PolyC::x(n, 0)).unwrap();
        let xi = PairedSymbol::from_poly(PolyC::xi(n, 0)).unwrap();
        let c = x.commutator(&xi).unwrap();
        assert_eq!(c.plus.as_poly().unwrap(), PolyC::constant(n, i_unit()));
        assert_eq!(c.minus.as_poly().unwrap(), PolyC::constant(n, -i_unit()));
    }

    #[test]
    fn incompatible_rejected() {
        let n = 1;
        let p = PhgExpansion::from_poly(PolyC::q(n).add(&PolyC::one(n))).unwrap();
        let r = PairedSymbol::from_parts(p.clone(), p, 2);
        assert!(matches!(r, Err(Error::NotInAlgebraA(_))));
    }

    #[test]
    fn zero_is_not_rejected() {
        let z = PairedSymbol::zero(2);
        assert!(z.is_compatible());
        assert!(z.plus.is_zero_expansion());
    }
}
