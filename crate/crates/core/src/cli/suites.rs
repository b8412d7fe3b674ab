//! Named verification suites for `verify`.

use super::config::{RunConfig, Suite};
use super::report::Check;
use crate::character::words::{sp_components, LocalElem, WordAlgebra};
use crate::character::{mu_inverse_exact, SymConnection};
use crate::contactgeo::{std_s3_with, ConnData};
use crate::error::Result;
use crate::fock::basis::FockBasis;
use crate::fock::hz::hz_terms;
use crate::fock::mehler::{heat_trace_exact, heat_tail_bound_n1, mehler_symbol};
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::gaussian::{vacuum_symbol, GaussSum, GaussTerm};
use crate::moyal::paired::PairedSymbol;
use crate::moyal::poly_star;
use crate::rtrace::{self, heat::poly_constant_term, trh};
use crate::symcore::scalar::{cr, crat_from_c64, crat_to_c64, i_unit, rat, Rat, CRat, C64};
use crate::symcore::special::zeta_neg;
use crate::symcore::PolyC;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::TraceTable => trace_table(),
        Suite::Vacuum => vacuum(cfg),
        Suite::HzStructure => hz_structure(cfg),
        Suite::Mehler => mehler(cfg),
        Suite::CurvatureTraces => curvature_traces(cfg),
        Suite::TraceProperty => trace_property(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::TraceTable,
                Suite::Vacuum,
                Suite::HzStructure,
                Suite::Mehler,
                Suite::CurvatureTraces,
                Suite::TraceProperty,
            ] {
                out.extend(run_suite(s, cfg)?);
            }
            Ok(out)
        }
    }
}

/// TR̂(Q^{#k}) = (1 − 2ᵏ)ζ(−k) for n = 1.
fn trace_table() -> Result<Vec<Check>> {
    let q = PolyC::q(1);
    let mut p = PolyC::one(1);
    let mut out = Vec::new();
    for k in 0..=5u32 {
        let want = (Rat::one() - Rat::from_integer(2.into()).pow(k as i32)) * zeta_neg(k);
        let exact = poly_constant_term(&p);
        out.push(Check::exact(
            format!("trace-table/exact/k={k}"),
            json!(exact.re.to_string()),
            json!(want.to_string()),
            exact == cr(want.clone()),
        ));
        let r = trh(&PhgExpansion::from_poly(p.clone())?, true)?;
        let w = crat_to_c64(&cr(want));
        out.push(Check::close(format!("trace-table/float/k={k}"), r.value, w, 1e-10));
        p = poly_star(&p, &q);
    }
    Ok(out)
}

/// Random element of u(n) ⊂ sp(2n) with small rational entries.
pub fn random_unitary_generator(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    let d = 2 * n;
    let mut m = vec![vec![Rat::zero(); d]; d];
    let mut r = || Rat::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
    for i in 0..n {
        for j in i..n {
            let b = r();
            m[n + i][j] = b.clone();
            m[n + j][i] = b.clone();
            m[i][n + j] = -b.clone();
            m[j][n + i] = -b;
            if j > i {
                let a = r();
                m[i][j] = a.clone();
                m[j][i] = -a.clone();
                m[n + i][n + j] = a.clone();
                m[n + j][n + i] = -a;
            }
        }
    }
    m
}

fn vacuum_pair(n: usize) -> Result<PairedSymbol> {
    PairedSymbol::with_grade(PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n))), 0)
}

fn vacuum(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in 1..=2 {
        let s = PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n)));
        let ss = s.star(&s);
        out.push(Check::flag(
            format!("vacuum/s#s=s/n={n}"),
            ss.closure().map(|c| &c.gauss) == s.closure().map(|c| &c.gauss) && ss.is_zero_expansion(),
        ));
        let qs = PhgExpansion::from_poly(PolyC::q(n))?.star(&s);
        let ns = s.scale(&cr(Rat::from_integer((n as i64).into())));
        out.push(Check::flag(
            format!("vacuum/Q#s=ns/n={n}"),
            qs.closure().map(|c| &c.gauss) == ns.closure().map(|c| &c.gauss) && qs.is_zero_expansion(),
        ));
        for sample in 0..3 {
            let t = random_unitary_generator(n, &mut rng);
            let x = mu_inverse_exact(&t)?;
            let nu = PairedSymbol::with_grade(PhgExpansion::from_poly(x.value)?, 0)?;
            let mut half = CRat::zero();
            for k in 0..n {
                half = half + cr(t[k][k].clone()) + i_unit() * cr(t[n + k][k].clone());
            }
            let half = crat_to_c64(&(half * cr(rat(1, 2))));
            let mut w = vacuum_pair(n)?;
            for i in 0..=3 {
                let got = rtrace::tau(&w)?.value;
                let tol = 1e-10 * (1.0 + half.norm().powi(i));
                out.push(Check::close(
                    format!("vacuum/Tr(theta^i s)/n={n}/sample={sample}/i={i}"),
                    got,
                    half.powi(i),
                    tol,
                ));
                w = nu.mul(&w);
            }
        }
    }
    Ok(out)
}

fn hz_structure(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for z in [C64::new(0.3, 0.0), C64::new(1.0, 1.0), C64::new(2.5, 0.0)] {
        let h = hz_terms(z, cfg.n, 8);
        for j in [1usize, 2, 3, 5, 6, 7] {
            out.push(Check::close(
                format!("hz/vanishing/z={z}/j={j}"),
                h[j],
                C64::new(0.0, 0.0),
                1e-10,
            ));
        }
        out.push(Check::exact(
            format!("hz/nonzero/z={z}/j=4"),
            json!([h[4].re, h[4].im]),
            json!("nonzero"),
            h[4].norm() > 1e-6,
        ));
    }
    Ok(out)
}

fn mehler(cfg: &RunConfig) -> Result<Vec<Check>> {
    let basis = FockBasis::new(1, cfg.fock_cutoff);
    let mut out = Vec::new();
    for t in [0.2, 1.0] {
        let truncated = mehler_symbol(1, t).to_fock(&basis).trace();
        let bound = heat_tail_bound_n1(cfg.fock_cutoff, t) + 1e-12;
        out.push(Check::close(
            format!("mehler/t={t}"),
            truncated,
            C64::new(heat_trace_exact(1, t), 0.0),
            bound,
        ));
    }
    Ok(out)
}

/// τ(θᵏ) at every node through the polynomial shortcut, and through the
/// heat route on a few nodes with the coefficients made exact.
fn curvature_traces(cfg: &RunConfig) -> Result<Vec<Check>> {
    let atlas = std_s3_with(cfg.grid)?;
    let conn = ConnData::levi(&atlas)?;
    let sc = SymConnection::new(&conn)?;
    let alg = WordAlgebra::new(atlas.n)?;
    let theta = sc.theta_bold(&atlas, 1);
    let valid = theta.valid();
    let mut out = Vec::new();
    let mut worst_shortcut: f64 = 0.0;
    let mut worst_heat: f64 = 0.0;
    let mut heat_nodes = 0;
    for (ci, chart) in atlas.charts.iter().enumerate() {
        let g = &chart.grid;
        let nodes: Vec<usize> = (0..g.len()).filter(|&i| g.inside(i, g.ghost - valid)).collect();
        let stride = (nodes.len() / 5).max(1);
        for (k, &i) in nodes.iter().enumerate() {
            let th = theta.at(ci, i);
            let mut pow = LocalElem::unit(1);
            for _ in 0..=3 {
                let t = pow.trace(&alg)?;
                for v in t.0.values() {
                    worst_shortcut = worst_shortcut.max(v.norm());
                }
                if k % stride == 0 && heat_nodes < 10 {
                    worst_heat = worst_heat.max(heat_trace_of(&alg, &pow)?);
                }
                pow = pow.mul(&th);
            }
            if k % stride == 0 && heat_nodes < 10 {
                heat_nodes += 1;
            }
        }
    }
    out.push(Check::close(
        "curvature-traces/shortcut".into(),
        C64::new(worst_shortcut, 0.0),
        C64::new(0.0, 0.0),
        1e-10,
    ));
    out.push(Check::close(
        format!("curvature-traces/heat/{heat_nodes}-nodes"),
        C64::new(worst_heat, 0.0),
        C64::new(0.0, 0.0),
        1e-10,
    ));
    let parts = sp_components(&conn.theta, atlas.n)?;
    out.push(Check::flag("curvature-traces/theta-nonzero".into(), parts.iter().any(|p| p.max_abs() > 0.1)));
    Ok(out)
}

/// Largest |τ| over the form components, each realized as one exact symbol.
pub fn heat_trace_of(alg: &WordAlgebra, e: &LocalElem) -> Result<f64> {
    let mut masks = std::collections::BTreeSet::new();
    for f in e.0.values() {
        masks.extend(f.0.keys().copied());
    }
    let mut worst: f64 = 0.0;
    for m in masks {
        let mut acc = PairedSymbol::zero(alg.n());
        for (w, f) in &e.0 {
            if let Some(c) = f.0.get(&m) {
                acc = acc.add(&alg.realize(w).scale(&crat_from_c64(c.trace())))?;
            }
        }
        worst = worst.max(rtrace::tau(&acc)?.value.norm());
    }
    Ok(worst)
}

fn random_poly(n: usize, deg: u32, rng: &mut ChaCha8Rng) -> PolyC {
    let mut p = PolyC::zero(n);
    for _ in 0..4 {
        let mut mono = vec![0u16; 2 * n];
        // even degrees keep the pair inside one step-2 expansion
        for _ in 0..2 * rng.gen_range(0..=deg / 2) {
            mono[rng.gen_range(0..2 * n)] += 1;
        }
        let c = Rat::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into());
        p.add_term(mono, cr(c));
    }
    p
}

fn random_model_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<PairedSymbol> {
    let lam = rat(1, rng.gen_range(1..=3));
    let g = GaussTerm::new(random_poly(n, 2, rng), lam);
    PairedSymbol::with_grade(PhgExpansion::from_gauss(GaussSum::single(g)), 0)
}

/// Rotation by the Pythagorean angle (3/5, 4/5) in each (x_j, ξ_j) plane.
fn rotation(n: usize) -> Vec<Vec<CRat>> {
    let d = 2 * n;
    let mut m = vec![vec![CRat::zero(); d]; d];
    for j in 0..n {
        m[j][j] = cr(rat(3, 5));
        m[j][n + j] = cr(rat(-4, 5));
        m[n + j][j] = cr(rat(4, 5));
        m[n + j][n + j] = cr(rat(3, 5));
    }
    m
}

fn trace_property(cfg: &RunConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut largest: f64 = 0.0;
    let count = 50;
    for k in 0..count {
        let n = 1 + k % 2;
        let a = random_model_pair(n, &mut rng)?;
        let b = if k % 3 == 0 {
            random_model_pair(n, &mut rng)?
        } else {
            PairedSymbol::from_poly(random_poly(n, 2, &mut rng))?
        };
        let ab = rtrace::tau(&a.mul(&b))?.value;
        let ba = rtrace::tau(&b.mul(&a))?.value;
        worst = worst.max((ab - ba).norm());
        largest = largest.max(ab.norm());
        let ta = rtrace::tau(&a)?.value;
        let tr = rtrace::tau(&a.linear_substitute(&rotation(n)))?.value;
        worst_inv = worst_inv.max((ta - tr).norm());
    }
    Ok(vec![
        Check::flag("trace-property/nontrivial".into(), largest > 1e-3),
        Check::close(
            format!("trace-property/commutator/{count}-pairs"),
            C64::new(worst, 0.0),
            C64::new(0.0, 0.0),
            1e-8,
        ),
        Check::close(
            format!("trace-property/symplectic-invariance/{count}-pairs"),
            C64::new(worst_inv, 0.0),
            C64::new(0.0, 0.0),
            1e-8,
        ),
    ])
}
