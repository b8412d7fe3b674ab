//! `trace`, `char` and `index`.

use super::config::{Connection, Example, RunConfig};
use super::report::Check;
use crate::character::{chi, index, toeplitz_closed_form, SymConnection, SymbolSection, WordAlgebra};
use crate::contactgeo::{bott, std_s3_with, Atlas, ConnData, MatForm, ValuedForm};
use crate::error::{Error, Result};
use crate::moyal::expansion::PhgExpansion;
use crate::moyal::invert::invert_scalar;
use crate::moyal::paired::PairedSymbol;
use crate::moyal::parse::{closure_order, parse_closure, parse_symbol};
use crate::rtrace;
use crate::symcore::scalar::{cr, rat, C64};
use crate::symcore::PolyC;
use serde_json::{json, Value};
use std::collections::BTreeMap;

const RESOLVENT_LITERAL: &str = "resolvent(Q, 0.5)";

fn parse_pair(lit: &str, cfg: &RunConfig) -> Result<PairedSymbol> {
    let order = closure_order(&parse_closure(lit, cfg.n)?)?;
    let plus = parse_symbol(lit, cfg.n, cfg.depth())?;
    PairedSymbol::with_grade(plus, cfg.grade.unwrap_or(order))
}

pub fn trace(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let lit = match (&cfg.symbol, cfg.example) {
        (Some(s), _) => s.clone(),
        (None, Some(Example::Resolvent)) => RESOLVENT_LITERAL.to_string(),
        (None, Some(e)) => {
            return Err(Error::Config(format!("example {e:?} has no scalar trace")));
        }
        (None, None) => unreachable!("validated"),
    };
    let s = parse_pair(&lit, cfg)?;
    let reports = rtrace::tau_all(&s)?;
    let mut checks = Vec::new();
    for r in &reports[1..] {
        checks.push(Check::close(
            format!("trace/agreement/{}", json!(r.route).as_str().unwrap_or("")),
            r.value,
            reports[0].value,
            1e-6,
        ));
    }
    let result = json!({
        "symbol": lit,
        "grade": s.grade,
        "routes": reports,
    });
    Ok((result, checks))
}

fn connection(cfg: &RunConfig, atlas: &Atlas) -> Result<ConnData> {
    Ok(match cfg.connection {
        Connection::Levi => ConnData::levi(atlas)?,
        Connection::Flat => ConnData::flat(atlas),
    })
}

fn shifted_q(n: usize, g: crate::symcore::scalar::Rat) -> Result<PairedSymbol> {
    let p = PolyC::q(n).sub(&PolyC::constant(n, cr(g)));
    PairedSymbol::with_grade(PhgExpansion::from_poly(p)?, 2)
}

struct Built {
    section: SymbolSection,
    toeplitz: Option<MatForm>,
    example: String,
}

fn build(cfg: &RunConfig, atlas: &Atlas, alg: &WordAlgebra) -> Result<Built> {
    let depth = cfg.depth();
    if let Some(lit) = &cfg.symbol {
        let s = parse_pair(lit, cfg)?;
        return Ok(Built {
            section: SymbolSection::constant_inverted(atlas, alg, s, depth)?,
            toeplitz: None,
            example: lit.clone(),
        });
    }
    let ex = cfg.example.expect("validated");
    let name = json!(ex).as_str().unwrap_or("").to_string();
    Ok(match ex {
        Example::BottToeplitz => {
            let f = atlas.sample(bott);
            Built {
                section: SymbolSection::toeplitz(atlas, &f)?,
                toeplitz: Some(f),
                example: name,
            }
        }
        Example::Automorphism => {
            let g = atlas.sample(|p| bott(p) * C64::new(1.5 + 0.4 * p[0], 0.0));
            Built {
                section: SymbolSection::automorphism(&g)?,
                toeplitz: None,
                example: name,
            }
        }
        Example::Resolvent => {
            // (Q − ½, Q + ½) brought to order 0 by (Q − ⅓, Q + ⅓)⁻¹
            let p = shifted_q(cfg.n, rat(1, 2))?;
            let l = shifted_q(cfg.n, rat(1, 3))?;
            let s0 = invert_scalar(&l, depth)?.mul(&p);
            let s0_inv = invert_scalar(&p, depth)?.mul(&l);
            Built {
                section: SymbolSection::constant(atlas, alg, s0, s0_inv)?,
                toeplitz: None,
                example: name,
            }
        }
    })
}

fn setup(cfg: &RunConfig) -> Result<(Atlas, ConnData, WordAlgebra)> {
    if cfg.n != 1 {
        return Err(Error::Config(format!("S³ carries a rank-2 contact distribution; n = {} given", cfg.n)));
    }
    let atlas = std_s3_with(cfg.grid)?;
    let conn = connection(cfg, &atlas)?;
    let alg = WordAlgebra::new(atlas.n)?;
    Ok((atlas, conn, alg))
}

fn samples(atlas: &Atlas, form: &ValuedForm<C64>) -> Value {
    let charts: Vec<Value> = atlas
        .charts
        .iter()
        .zip(&form.charts)
        .map(|(c, f)| {
            let g = &c.grid;
            let nodes: Vec<Value> = (0..g.len())
                .filter(|&i| g.is_interior(i))
                .map(|i| {
                    let comps: BTreeMap<String, [f64; 2]> = f
                        .comps
                        .iter()
                        .map(|(m, v)| (format!("{m:03b}"), [v[i].re, v[i].im]))
                        .collect();
                    json!({"u": g.coords(i), "p": c.points[i], "partition": c.partition[i], "chi": comps})
                })
                .collect();
            json!({"chart": c.name, "nodes": nodes})
        })
        .collect();
    json!({"schema": super::config::SCHEMA, "charts": charts})
}

pub fn char(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let (atlas, conn, alg) = setup(cfg)?;
    let b = build(cfg, &atlas, &alg)?;
    let sc = SymConnection::new(&conn)?;
    let x = chi(&alg, &atlas, &sc, &b.section)?;
    let mut terms = Vec::new();
    for ((l, i), f) in &x.terms {
        let top = atlas.integrate(&f.part(atlas.dim as u32))?;
        terms.push(json!({
            "l": l,
            "curvature_power": i,
            "degree": 2 * i + 2 * l + 1,
            "max_abs": f.max_abs(),
            "integral": [top.re, top.im],
        }));
    }
    let total = atlas.integrate(&x.total.part(atlas.dim as u32))?;
    let scale = x.total.max_abs();
    let dchi = x.total.d()?.max_abs();
    let mut checks = vec![Check::close(
        "char/closed".into(),
        C64::new(dchi, 0.0),
        C64::new(0.0, 0.0),
        1e-2 * scale.max(1e-12),
    )];
    let mut result = json!({
        "example": b.example,
        "connection": cfg.connection,
        "terms": terms,
        "integral": [total.re, total.im],
        "max_abs": scale,
        "d_chi_max_abs": dchi,
        "word_routes": alg.route_counts(),
    });
    if let Some(f) = &b.toeplitz {
        let closed = toeplitz_closed_form(&atlas, f, &conn)?;
        let diff = x.total.sub(&closed).max_abs();
        result["closed_form_max_diff"] = json!(diff);
        checks.push(Check::close(
            "char/toeplitz-closed-form".into(),
            C64::new(diff, 0.0),
            C64::new(0.0, 0.0),
            1e-6,
        ));
    }
    if let Some(path) = &cfg.emit_samples {
        let text = samples(&atlas, &x.total).to_string();
        std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    }
    Ok((result, checks))
}

pub fn index_cmd(cfg: &RunConfig) -> Result<(Value, Vec<Check>)> {
    let (atlas, conn, alg) = setup(cfg)?;
    let b = build(cfg, &atlas, &alg)?;
    let sc = SymConnection::new(&conn)?;
    let rep = index(&alg, &atlas, &sc, &b.section, None)?;
    let value = C64::new(rep.value[0], rep.value[1]);
    let mut checks = Vec::new();
    let mut result = json!(rep);
    result["example"] = json!(b.example);
    if b.toeplitz.is_some() {
        let deg = atlas.mapping_degree(|p| *p)?;
        result["mapping_degree"] = json!(deg);
        checks.push(Check::flag("index/unit-magnitude".into(), rep.nearest_integer.abs() == 1));
        checks.push(Check::close(
            "index/nearest-integer".into(),
            value,
            C64::new(rep.nearest_integer as f64, 0.0),
            1e-2,
        ));
        checks.push(Check::close("index/mapping-degree".into(), value, C64::new(deg, 0.0), 1e-2));
    } else {
        checks.push(Check::close("index/vanishes".into(), value, C64::new(0.0, 0.0), 1e-8));
    }
    Ok((result, checks))
}
