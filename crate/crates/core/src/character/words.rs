//! Symbol-valued forms written over words in a finite set of generator
//! symbols. A form is Σ_w M_w ⊗ w with matrix-valued scalar forms M_w;
//! traces of words are computed once, exactly where possible, and cached.

use super::mu::{nu_basis, sp_basis, sp_coords};
use crate::contactgeo::forms::{merge_sign, FormCoeff};
use crate::contactgeo::{Atlas, Field, MatForm, ValuedForm};
use crate::error::{Error, Result};
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::gaussian::{vacuum_symbol, GaussSum};
use crate::moyal::paired::PairedSymbol;
use crate::rtrace::{self, spectral};
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

pub type Word = Vec<u16>;

/// Generator 0 is the vacuum pair (s, 0); generators 1..=dim sp(2n) are ν of
/// the `sp_basis` elements.
pub const VACUUM: u16 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordRoute {
    /// Polynomial pairs have τ = 0.
    PolynomialShortcut,
    FockTrace,
    HeatClosedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WordTrace {
    pub value: C64,
    pub route: WordRoute,
}

type Lin = Vec<(u16, C64)>;

pub struct WordAlgebra {
    n: usize,
    sp_dim: usize,
    gens: RwLock<Vec<PairedSymbol>>,
    ad: Mutex<HashMap<(u16, u16), Lin>>,
    cache: Mutex<HashMap<Word, Arc<OnceLock<Result<WordTrace>>>>>,
}

/// Whether a pair is identically zero.
fn is_zero_pair(p: &PairedSymbol) -> bool {
    let z = |e: &PhgExpansion| {
        e.is_zero_expansion()
            && e.closure()
                .map(|c| c.is_zero())
                .unwrap_or(true)
    };
    z(&p.plus) && z(&p.minus)
}

impl WordAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        let s = PairedSymbol::with_grade(
            PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n))),
            0,
        )?;
        let mut gens = vec![s];
        let nb = nu_basis(n)?;
        let sp_dim = nb.len();
        gens.extend(nb);
        Ok(WordAlgebra {
            n,
            sp_dim,
            gens: RwLock::new(gens),
            ad: Mutex::new(HashMap::new()),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sp_dim(&self) -> usize {
        self.sp_dim
    }

    pub fn generator(&self, id: u16) -> PairedSymbol {
        self.gens.read().unwrap()[id as usize].clone()
    }

    pub fn num_generators(&self) -> usize {
        self.gens.read().unwrap().len()
    }

    /// Registers a symbol, reusing an existing generator equal to ±sym.
    pub fn register(&self, sym: PairedSymbol) -> (u16, C64) {
        let mut g = self.gens.write().unwrap();
        let neg = sym.neg();
        for (i, e) in g.iter().enumerate() {
            if *e == sym {
                return (i as u16, C64::new(1.0, 0.0));
            }
            if *e == neg {
                return (i as u16, C64::new(-1.0, 0.0));
            }
        }
        g.push(sym);
        ((g.len() - 1) as u16, C64::new(1.0, 0.0))
    }

    /// [ν(e_k), g] as a combination of generators. Brackets of ν-generators
    /// stay in the span of ν(sp_basis) since ν is a Lie morphism.
    pub fn ad(&self, k: u16, g: u16) -> Result<Lin> {
        if let Some(v) = self.ad.lock().unwrap().get(&(k, g)) {
            return Ok(v.clone());
        }
        let sp = self.sp_dim as u16;
        let lin = if (1..=sp).contains(&g) {
            let b = sp_basis(self.n);
            let (x, y) = (&b[(k - 1) as usize], &b[(g - 1) as usize]);
            let br = x * y - y * x;
            sp_coords(&br)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.norm() != 0.0)
                .map(|(m, c)| (m as u16 + 1, c))
                .collect()
        } else {
            let c = self.generator(k).commutator(&self.generator(g))?;
            if is_zero_pair(&c) {
                vec![]
            } else {
                vec![self.register(c)]
            }
        };
        self.ad.lock().unwrap().insert((k, g), lin.clone());
        Ok(lin)
    }

    /// Product of the generators of a word; the empty word is (1, 1).
    pub fn realize(&self, w: &[u16]) -> PairedSymbol {
        let mut acc = PairedSymbol::identity(self.n);
        for &g in w {
            acc = acc.mul(&self.generator(g));
        }
        acc
    }

    fn trace_uncached(&self, w: &[u16]) -> Result<WordTrace> {
        let sym = self.realize(w);
        let a = rtrace::combined(&sym)?;
        let c = a.closure().ok_or(Error::MissingClosure)?;
        if c.gauss.is_zero() && c.resolvent.is_zero() && a.is_polynomial() {
            return Ok(WordTrace {
                value: C64::new(0.0, 0.0),
                route: WordRoute::PolynomialShortcut,
            });
        }
        if a.is_zero_expansion() && c.poly.is_zero() && c.resolvent.is_zero() {
            let (v, _) = spectral::gauss_fock_trace(&c.gauss)?;
            return Ok(WordTrace {
                value: v,
                route: WordRoute::FockTrace,
            });
        }
        let r = rtrace::tau(&sym)?;
        Ok(WordTrace {
            value: r.value,
            route: WordRoute::HeatClosedForm,
        })
    }

    /// τ of a word, cached.
    pub fn trace(&self, w: &[u16]) -> Result<WordTrace> {
        let cell = {
            let mut m = self.cache.lock().unwrap();
            m.entry(w.to_vec()).or_default().clone()
        };
        cell.get_or_init(|| self.trace_uncached(w)).clone()
    }

    /// τ of a word through the heat route, bypassing dispatch.
    pub fn trace_heat(&self, w: &[u16]) -> Result<C64> {
        Ok(rtrace::tau(&self.realize(w))?.value)
    }

    /// Number of cached word traces by route.
    pub fn route_counts(&self) -> BTreeMap<String, usize> {
        let m = self.cache.lock().unwrap();
        let mut out = BTreeMap::new();
        for cell in m.values() {
            if let Some(Ok(t)) = cell.get() {
                let k = serde_json::to_value(t.route)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                *out.entry(k).or_insert(0) += 1;
            }
        }
        out
    }
}

/// A form at one node: degree mask ↦ coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalForm<T>(pub BTreeMap<u32, T>);

impl<T: FormCoeff> LocalForm<T> {
    pub fn empty() -> Self {
        LocalForm(BTreeMap::new())
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, v) in &o.0 {
            match self.0.get_mut(m) {
                Some(w) => *w = w.add(v),
                None => {
                    self.0.insert(*m, v.clone());
                }
            }
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        LocalForm(self.0.iter().map(|(m, v)| (*m, v.scale(c))).collect())
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out: BTreeMap<u32, T> = BTreeMap::new();
        for (ma, a) in &self.0 {
            for (mb, b) in &o.0 {
                if ma & mb != 0 {
                    continue;
                }
                let v = a.mul(b).scale(C64::new(merge_sign(*ma, *mb), 0.0));
                match out.get_mut(&(ma | mb)) {
                    Some(w) => *w = w.add(&v),
                    None => {
                        out.insert(ma | mb, v);
                    }
                }
            }
        }
        LocalForm(out)
    }
}

fn mat_is_zero(m: &DMatrix<C64>) -> bool {
    m.iter().all(|x| x.re == 0.0 && x.im == 0.0)
}

/// Symbol-valued form at one node.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalElem(pub BTreeMap<Word, LocalForm<DMatrix<C64>>>);

impl LocalElem {
    pub fn empty() -> Self {
        LocalElem(BTreeMap::new())
    }

    /// The unit: identity matrix on the empty word.
    pub fn unit(r: usize) -> Self {
        let mut f = LocalForm::empty();
        f.0.insert(0, DMatrix::identity(r, r));
        let mut m = BTreeMap::new();
        m.insert(vec![], f);
        LocalElem(m)
    }

    fn prune(mut self) -> Self {
        for f in self.0.values_mut() {
            f.0.retain(|_, m| !mat_is_zero(m));
        }
        self.0.retain(|_, f| !f.0.is_empty());
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, f) in &o.0 {
            out.0.entry(w.clone()).or_insert_with(LocalForm::empty).add_assign(f);
        }
        out.prune()
    }

    pub fn scale(&self, c: C64) -> Self {
        LocalElem(self.0.iter().map(|(w, f)| (w.clone(), f.scale(c))).collect()).prune()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out: BTreeMap<Word, LocalForm<DMatrix<C64>>> = BTreeMap::new();
        for (wa, fa) in &self.0 {
            for (wb, fb) in &o.0 {
                let f = fa.wedge(fb);
                if f.0.is_empty() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.entry(w).or_insert_with(LocalForm::empty).add_assign(&f);
            }
        }
        LocalElem(out).prune()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// τ ∘ tr, a scalar form.
    pub fn trace(&self, alg: &WordAlgebra) -> Result<LocalForm<C64>> {
        let mut out = LocalForm::empty();
        for (w, f) in &self.0 {
            let t = alg.trace(w)?.value;
            let s = LocalForm(f.0.iter().map(|(m, v)| (*m, v.trace() * t)).collect());
            out.add_assign(&s);
        }
        Ok(out)
    }

    /// Evaluates the plus side of every word at v; a numeric witness for
    /// identities between words.
    pub fn eval_plus(&self, alg: &WordAlgebra, v: &[f64]) -> LocalForm<DMatrix<C64>> {
        let mut out = LocalForm::empty();
        for (w, f) in &self.0 {
            let s = alg.realize(w);
            let x = s
                .plus
                .eval(v)
                .unwrap_or_else(|| s.plus.partial_sum(v, i32::MIN / 2));
            out.add_assign(&f.scale(x));
        }
        out
    }
}

/// Σ_w M_w ⊗ w over an atlas.
#[derive(Clone, Debug)]
pub struct SymForm {
    pub r: usize,
    pub terms: BTreeMap<Word, MatForm>,
}

impl SymForm {
    pub fn zero(r: usize) -> Self {
        SymForm {
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(r: usize, w: Word, f: MatForm) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, f);
        SymForm { r, terms }
    }

    pub fn add_term(&mut self, w: Word, f: MatForm) {
        let v = match self.terms.remove(&w) {
            Some(g) => g.add(&f),
            None => f,
        };
        self.terms.insert(w, v);
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, f) in &o.terms {
            out.add_term(w.clone(), f.clone());
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        SymForm {
            r: self.r,
            terms: self.terms.iter().map(|(w, f)| (w.clone(), f.scale(c))).collect(),
        }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = SymForm::zero(self.r);
        for (wa, fa) in &self.terms {
            for (wb, fb) in &o.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, fa.wedge(fb));
            }
        }
        out
    }

    pub fn d(&self) -> Result<Self> {
        let mut out = SymForm::zero(self.r);
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.d()?);
        }
        Ok(out)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|f| f.degree()).max()
    }

    /// Nodewise restriction.
    pub fn at(&self, chart: usize, node: usize) -> LocalElem {
        let mut out = BTreeMap::new();
        for (w, f) in &self.terms {
            let field = &f.charts[chart];
            let mut lf = LocalForm::empty();
            for (m, v) in &field.comps {
                lf.0.insert(*m, v[node].clone());
            }
            out.insert(w.clone(), lf);
        }
        LocalElem(out).prune()
    }

    /// Fewest valid ghost layers over all terms.
    pub fn valid(&self) -> usize {
        self.terms
            .values()
            .flat_map(|f| f.charts.iter().map(|c| c.valid))
            .min()
            .unwrap_or(usize::MAX)
    }
}

/// Scalar form times the r×r identity.
pub fn scalar_identity(a: &ValuedForm<C64>, r: usize, atlas: &Atlas) -> MatForm {
    crate::contactgeo::connection::scalar_times(a, &DMatrix::identity(r, r), atlas)
}

/// Coefficients of an sp(2n)-valued form in `sp_basis`, one scalar form each.
pub fn sp_components(f: &MatForm, n: usize) -> Result<Vec<ValuedForm<C64>>> {
    let dim = sp_basis(n).len();
    let mut out = Vec::with_capacity(dim);
    for k in 0..dim {
        out.push(ValuedForm {
            charts: f
                .charts
                .iter()
                .map(|c| {
                    let mut f = c.map(|m| sp_coords(m)[k]);
                    f.comps.retain(|_, v| v.iter().any(|x| x.norm() != 0.0));
                    f
                })
                .collect(),
        });
    }
    for c in &f.charts {
        let g = &c.grid;
        for v in c.comps.values() {
            for (i, m) in v.iter().enumerate() {
                if !g.inside(i, g.ghost - c.valid) {
                    continue;
                }
                let e = super::mu::sp_defect(m);
                if e > 1e-9 * (1.0 + m.norm()) {
                    return Err(Error::NotSymplecticLieAlgebra(format!(
                        "connection coefficient off sp(2n) by {e:.2e}"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Σ_k c_k ⊗ [k] for scalar coefficient forms of the ν-generators.
pub fn nu_form(coeffs: &[ValuedForm<C64>], r: usize, atlas: &Atlas) -> SymForm {
    let mut out = SymForm::zero(r);
    for (k, c) in coeffs.iter().enumerate() {
        if c.charts.iter().all(|f| f.comps.is_empty()) {
            continue;
        }
        out.add_term(vec![k as u16 + 1], scalar_identity(c, r, atlas));
    }
    out
}

/// ad_k extended to words by the Leibniz rule.
pub fn ad_word(alg: &WordAlgebra, k: u16, w: &[u16]) -> Result<Vec<(Word, C64)>> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for (g, c) in alg.ad(k, w[i])? {
            let mut v = w.to_vec();
            v[i] = g;
            out.push((v, c));
        }
    }
    Ok(out)
}

/// [ν(β), η] for a 1-form β given by its ν-coefficients and a homogeneous η.
pub fn ad_nu(alg: &WordAlgebra, beta: &[ValuedForm<C64>], eta: &SymForm, atlas: &Atlas) -> Result<SymForm> {
    let mut out = SymForm::zero(eta.r);
    for (k, b) in beta.iter().enumerate() {
        if b.charts.iter().all(|f| f.comps.is_empty()) {
            continue;
        }
        let bm = scalar_identity(b, eta.r, atlas);
        for (w, f) in &eta.terms {
            let prod = bm.wedge(f);
            for (v, c) in ad_word(alg, k as u16 + 1, w)? {
                out.add_term(v, prod.scale(c));
            }
        }
    }
    Ok(out)
}

/// The empty field helper for zero symbol forms on an atlas.
pub fn zero_field(atlas: &Atlas, chart: usize) -> Field<DMatrix<C64>> {
    Field::zero(atlas.charts[chart].grid.clone())
}
