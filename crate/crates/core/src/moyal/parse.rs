//! Symbol literals: `Q`, `x1`, `xi2`, `i`, rationals, `exp(-c*Q)`,
//! `resolvent(Q, gamma)`, with `+ - * ^` and parentheses. `*` is the
//! pointwise product.

use super::closure::Closure;
use super::expansion::PhgExpansion;
use super::gaussian::{GaussSum, GaussTerm};
use super::resolvent::ResolventSum;
use crate::error::{Error, Result};
use crate::symcore::scalar::{cr, i_unit, CRat, Rat};
use crate::symcore::PolyC;
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            out.push(Tok::Num(parse_decimal(&cs[st..i].iter().collect::<String>())?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// Exact rational from a decimal literal such as `0.25`.
pub fn parse_decimal(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("bad number '{s}'"));
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    Ok(Rat::new(num, BigInt::from(10).pow(frac.len() as u32)))
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Closure> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Closure> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let r = self.unary()?;
                acc = pointwise_mul(&acc, &r)?;
            } else if self.eat('/') {
                let r = self.unary()?;
                let c = as_constant(&r)
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::Parse("division only by nonzero constants".into()))?;
                acc = acc.scale(&(CRat::one() / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Closure> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Closure> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(r)) if r.is_integer() => {
                    self.pos += 1;
                    r.to_integer()
                }
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            };
            let e: u32 = e
                .try_into()
                .map_err(|_| Error::Parse("exponent out of range".into()))?;
            let mut acc = Closure::from_poly(PolyC::one(self.n));
            for _ in 0..e {
                acc = pointwise_mul(&acc, &base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Closure> {
        let n = self.n;
        match self.peek().cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Closure::from_poly(PolyC::constant(n, cr(r))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                self.ident(&id)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn index(&self, s: &str) -> Result<usize> {
        let j: usize = s
            .parse()
            .map_err(|_| Error::Parse(format!("bad variable index '{s}'")))?;
        if j == 0 || j > self.n {
            return Err(Error::Parse(format!("variable index {j} out of range 1..={}", self.n)));
        }
        Ok(j - 1)
    }

    fn ident(&mut self, id: &str) -> Result<Closure> {
        let n = self.n;
        match id {
            "Q" => Ok(Closure::from_poly(PolyC::q(n))),
            "i" => Ok(Closure::from_poly(PolyC::constant(n, i_unit()))),
            "s" => Ok(Closure::from_gauss(GaussSum::single(
                super::gaussian::vacuum_symbol(n),
            ))),
            "exp" => {
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                let lam = gaussian_rate(&arg, n)?;
                Ok(Closure::from_gauss(GaussSum::single(GaussTerm::new(
                    PolyC::one(n),
                    lam,
                ))))
            }
            "resolvent" => {
                self.expect('(')?;
                let q = self.expr()?;
                if q.poly != PolyC::q(n) || !q.gauss.is_zero() || !q.resolvent.is_zero() {
                    return Err(Error::Parse("resolvent takes Q as first argument".into()));
                }
                self.expect(',')?;
                let g = self.expr()?;
                self.expect(')')?;
                let g = as_constant(&g)
                    .filter(|c| c.im.is_zero())
                    .ok_or_else(|| Error::Parse("resolvent parameter must be real".into()))?;
                let r = ResolventSum::pure(n, g.re, CRat::one());
                if !r.is_admissible() {
                    return Err(Error::Unsupported(format!(
                        "resolvent closure needs |gamma| < {n}"
                    )));
                }
                Ok(Closure::from_resolvent(r))
            }
            _ => {
                if let Some(rest) = id.strip_prefix("xi") {
                    Ok(Closure::from_poly(PolyC::xi(n, self.index(rest)?)))
                } else if let Some(rest) = id.strip_prefix('x') {
                    Ok(Closure::from_poly(PolyC::x(n, self.index(rest)?)))
                } else {
                    Err(Error::Parse(format!("unknown identifier '{id}'")))
                }
            }
        }
    }
}

fn as_constant(c: &Closure) -> Option<CRat> {
    if !c.gauss.is_zero() || !c.resolvent.is_zero() || c.poly.degree().unwrap_or(0) > 0 {
        return None;
    }
    Some(c.poly.constant_term())
}

/// λ for an exponent of the form −λ·Q.
fn gaussian_rate(arg: &Closure, n: usize) -> Result<Rat> {
    let bad = || Error::Parse("exp takes an argument of the form -c*Q with c > 0".into());
    if !arg.gauss.is_zero() || !arg.resolvent.is_zero() {
        return Err(bad());
    }
    let mut mono = vec![0u16; 2 * n];
    mono[0] = 2;
    let c = arg.poly.coeff(&mono);
    if !c.im.is_zero() || arg.poly != PolyC::q(n).scale(&c) {
        return Err(bad());
    }
    let lam = -c.re;
    if lam <= Rat::zero() {
        return Err(bad());
    }
    Ok(lam)
}

fn pointwise_mul(a: &Closure, b: &Closure) -> Result<Closure> {
    let n = a.n();
    let mut out = Closure::from_poly(a.poly.mul(&b.poly));
    let poly_times_gauss = |p: &PolyC, g: &GaussSum| {
        let mut r = GaussSum::zero(n);
        for t in g.terms() {
            r.add_term(GaussTerm::new(t.poly.mul(p), t.lambda));
        }
        r
    };
    out.gauss = poly_times_gauss(&a.poly, &b.gauss).add(&poly_times_gauss(&b.poly, &a.gauss));
    for ta in a.gauss.terms() {
        for tb in b.gauss.terms() {
            out.gauss.add_term(GaussTerm::new(ta.poly.mul(&tb.poly), &ta.lambda + &tb.lambda));
        }
    }
    out.resolvent = a.resolvent.mul_poly(&b.poly).add(&b.resolvent.mul_poly(&a.poly));
    let mixed = (!a.resolvent.is_zero() && !(b.gauss.is_zero() && b.resolvent.is_zero()))
        || (!b.resolvent.is_zero() && !(a.gauss.is_zero() && a.resolvent.is_zero()));
    if mixed {
        return Err(Error::Unsupported(
            "pointwise products of resolvents with non-polynomial factors".into(),
        ));
    }
    Ok(out)
}

/// Parses a literal into a closure on ℝ^{2n}.
pub fn parse_closure(s: &str, n: usize) -> Result<Closure> {
    let toks = lex(s)?;
    let mut p = Parser { toks: &toks, pos: 0, n };
    let c = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(c)
}

/// Highest homogeneity degree present in the closure's expansion.
pub fn closure_order(c: &Closure) -> Result<i32> {
    let mut best: Option<i32> = None;
    let mut parity: Option<i32> = None;
    let mut note = |h: i32| -> Result<()> {
        if let Some(p) = parity {
            if (h - p).rem_euclid(2) != 0 {
                return Err(Error::NotInAlgebraA(
                    "symbol mixes even and odd homogeneity".into(),
                ));
            }
        }
        parity = Some(h);
        best = Some(best.map_or(h, |b| b.max(h)));
        Ok(())
    };
    for d in c.poly.homogeneous_parts().keys() {
        note(*d as i32)?;
    }
    for h in c.resolvent.expansion(-64).keys() {
        note(*h)?;
    }
    Ok(best.unwrap_or(0))
}

/// Parses a literal into an expansion with the default conventions.
pub fn parse_symbol(s: &str, n: usize, depth: usize) -> Result<PhgExpansion> {
    let c = parse_closure(s, n)?;
    let order = closure_order(&c)?;
    Ok(PhgExpansion::from_closure(c, order, depth))
}
