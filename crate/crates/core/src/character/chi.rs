//! χ(r) = Σ_{l,I} (−1/2πi)^{I+l+1} l!/(I+2l+1)! τ tr(r⁻¹ θ^{i₀} ∇r θ^{i₁} ∇r⁻¹ ⋯ ∇r θ^{i_{2l+1}})
//! evaluated nodewise, and its integral against Â.

use super::section::{SymConnection, SymbolSection};
use super::words::{LocalElem, LocalForm, WordAlgebra};
use crate::contactgeo::{a_hat, c1, ch_odd, Atlas, ConnData, Field, MatForm, ValuedForm};
use crate::error::Result;
use crate::symcore::scalar::C64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// (−1/(2πi))^{I+l+1} l!/(I+2l+1)!
pub fn chi_coefficient(l: usize, i: usize) -> C64 {
    let base = -C64::new(0.0, 2.0 * PI).inv();
    base.powi((i + l + 1) as i32) * factorial(l) / factorial(i + 2 * l + 1)
}

/// (l, I) pairs with 2I + 2l + 1 ≤ dim.
pub fn chi_terms(dim: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut l = 0;
    while 2 * l < dim {
        let mut i = 0;
        while 2 * i + 2 * l < dim {
            out.push((l, i));
            i += 1;
        }
        l += 1;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ChiForm {
    pub total: ValuedForm<C64>,
    pub terms: BTreeMap<(usize, usize), ValuedForm<C64>>,
}

struct NodeInputs {
    rinv: LocalElem,
    nr: LocalElem,
    nri: LocalElem,
    theta: LocalElem,
}

fn node_terms(alg: &WordAlgebra, dim: usize, r: usize, x: &NodeInputs) -> Result<Vec<((usize, usize), LocalForm<C64>)>> {
    let imax = dim.saturating_sub(1) / 2;
    let mut th_pow = vec![LocalElem::unit(r)];
    for k in 1..=imax {
        let next = th_pow[k - 1].mul(&x.theta);
        th_pow.push(next);
    }
    let mut out = Vec::new();
    let mut l = 0;
    while 2 * l < dim {
        let il = (dim - 1 - 2 * l) / 2;
        // p[I]: partial products with I curvature factors so far
        let mut p: Vec<LocalElem> = vec![x.rinv.clone()];
        p.resize(il + 1, LocalElem::empty());
        for j in 0..=2 * l + 1 {
            let mut q = vec![LocalElem::empty(); il + 1];
            for (a, pa) in p.iter().enumerate() {
                if pa.is_zero() {
                    continue;
                }
                for (b, tb) in th_pow.iter().enumerate().take(il + 1 - a) {
                    q[a + b] = q[a + b].add(&pa.mul(tb));
                }
            }
            p = q;
            if j <= 2 * l {
                let nab = if j % 2 == 0 { &x.nr } else { &x.nri };
                p = p.iter().map(|e| e.mul(nab)).collect();
            }
        }
        for (i, e) in p.iter().enumerate() {
            let t = e.trace(alg)?.scale(chi_coefficient(l, i));
            out.push(((l, i), t));
        }
        l += 1;
    }
    Ok(out)
}

/// χ of a section for a connection on H, on every node where all inputs
/// are valid.
pub fn chi(alg: &WordAlgebra, atlas: &Atlas, conn: &SymConnection, sec: &SymbolSection) -> Result<ChiForm> {
    let r = sec.r;
    let nr = conn.nabla(alg, atlas, &sec.sym)?;
    let nri = conn.nabla(alg, atlas, &sec.inv)?;
    let theta = conn.theta_bold(atlas, r);
    let valid = nr.valid().min(nri.valid()).min(theta.valid()).min(sec.inv.valid());
    let mut total = Vec::new();
    let mut terms: BTreeMap<(usize, usize), Vec<Field<C64>>> = BTreeMap::new();
    for key in chi_terms(atlas.dim) {
        terms.insert(key, Vec::new());
    }
    for (ci, chart) in atlas.charts.iter().enumerate() {
        let g = chart.grid.clone();
        let nodes: Vec<usize> = (0..g.len()).filter(|&i| g.inside(i, g.ghost - valid)).collect();
        let per_node: Vec<(usize, Vec<((usize, usize), LocalForm<C64>)>)> = nodes
            .par_iter()
            .map(|&i| {
                let x = NodeInputs {
                    rinv: sec.inv.at(ci, i),
                    nr: nr.at(ci, i),
                    nri: nri.at(ci, i),
                    theta: theta.at(ci, i),
                };
                node_terms(alg, atlas.dim, r, &x).map(|t| (i, t))
            })
            .collect::<Result<_>>()?;
        let mut fields: BTreeMap<(usize, usize), Field<C64>> = BTreeMap::new();
        for key in chi_terms(atlas.dim) {
            let mut f = Field::zero(g.clone());
            f.valid = valid;
            fields.insert(key, f);
        }
        for (i, ts) in per_node {
            for (key, lf) in ts {
                let f = fields.get_mut(&key).expect("term key");
                for (m, v) in lf.0 {
                    f.comps
                        .entry(m)
                        .or_insert_with(|| vec![C64::new(0.0, 0.0); g.len()])[i] += v;
                }
            }
        }
        let mut sum = Field::zero(g.clone());
        sum.valid = valid;
        for (key, f) in fields {
            sum = sum.add(&f);
            terms.get_mut(&key).expect("term key").push(f);
        }
        sum.valid = valid;
        total.push(sum);
    }
    Ok(ChiForm {
        total: ValuedForm { charts: total },
        terms: terms
            .into_iter()
            .map(|(k, charts)| (k, ValuedForm { charts }))
            .collect(),
    })
}

/// Ch(f) ∧ exp(½c₁) for a unitary matrix function, truncated at dim M.
pub fn toeplitz_closed_form(atlas: &Atlas, f: &MatForm, conn: &ConnData) -> Result<ValuedForm<C64>> {
    let half = c1(&conn.theta, conn.n).scale(C64::new(0.5, 0.0));
    let mut e = atlas.constant(C64::new(1.0, 0.0));
    let mut pow = e.clone();
    let mut k = 1;
    while 2 * k <= atlas.dim {
        pow = pow.wedge(&half).scale(C64::new(1.0 / k as f64, 0.0));
        e = e.add(&pow);
        k += 1;
    }
    Ok(ch_odd(atlas, f)?.wedge(&e))
}

#[derive(Clone, Debug, Serialize)]
pub struct TermContribution {
    pub l: usize,
    pub curvature_power: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub value: [f64; 2],
    pub nearest_integer: i64,
    pub abs_error: f64,
    pub per_term_breakdown: Vec<TermContribution>,
    pub word_routes: BTreeMap<String, usize>,
}

/// ∫ χ(r) ∧ Â over the atlas; `tm_curvature` is the curvature of TM when
/// dim M ≥ 4.
pub fn index(
    alg: &WordAlgebra,
    atlas: &Atlas,
    conn: &SymConnection,
    sec: &SymbolSection,
    tm_curvature: Option<&MatForm>,
) -> Result<IndexReport> {
    let x = chi(alg, atlas, conn, sec)?;
    let ah = a_hat(atlas, tm_curvature)?;
    let mut value = C64::new(0.0, 0.0);
    let mut per = Vec::new();
    for ((l, i), f) in &x.terms {
        let v = atlas.integrate(&f.wedge(&ah).part(atlas.dim as u32))?;
        value += v;
        per.push(TermContribution {
            l: *l,
            curvature_power: *i,
            re: v.re,
            im: v.im,
        });
    }
    let nearest = value.re.round();
    Ok(IndexReport {
        value: [value.re, value.im],
        nearest_integer: nearest as i64,
        abs_error: (value - C64::new(nearest, 0.0)).norm(),
        per_term_breakdown: per,
        word_routes: alg.route_counts(),
    })
}
