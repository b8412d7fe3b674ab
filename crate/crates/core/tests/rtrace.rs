use contact_index::moyal::expansion::PhgExpansion;
use contact_index::moyal::gaussian::{vacuum_symbol, GaussSum};
use contact_index::moyal::paired::{pair_mul, PairedSymbol};
use contact_index::moyal::poly_star;
use contact_index::rtrace::heat::poly_constant_term;
use contact_index::rtrace::{heat_trace, res, tau, tau_fock, tau_numeric, trh};
use contact_index::symcore::radial::RadialRat;
use contact_index::symcore::scalar::{ci, cr, rat, C64};
use contact_index::symcore::PolyC;
use contact_index::Error;
use std::collections::BTreeMap;
use std::f64::consts::PI;

fn resolvent_pair(n: usize, g: (i64, i64)) -> PairedSymbol {
    PairedSymbol::with_grade(PhgExpansion::resolvent(n, rat(g.0, g.1), n + 3), 0).unwrap()
}

fn vacuum_pair(n: usize) -> PairedSymbol {
    PairedSymbol::with_grade(PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n))), 0)
        .unwrap()
}

#[test]
fn oscillator_power_trace_table() {
    let q = PolyC::q(1);
    let mut p = PolyC::one(1);
    let want = [(0, 1), (1, 12), (0, 1), (-7, 120), (0, 1), (31, 252)];
    for (a, b) in want {
        assert_eq!(poly_constant_term(&p), cr(rat(a, b)));
        let r = trh(&PhgExpansion::from_poly(p.clone()).unwrap(), true).unwrap();
        assert!((r.value.re - a as f64 / b as f64).abs() < 1e-15);
        p = poly_star(&p, &q);
    }
}

#[test]
fn residue_of_inverse_q() {
    let c = ci(3);
    let mut terms = BTreeMap::new();
    terms.insert(-2, RadialRat::q_inv_pow(1, 1).scale(&c));
    let a = PhgExpansion::from_terms(1, -2, terms, Some(-2));
    assert_eq!(res(&a).unwrap(), cr(rat(-3, 2)));
    assert_eq!(res(&PhgExpansion::from_poly(PolyC::q(1)).unwrap()).unwrap(), ci(0));
    let shallow = PhgExpansion::from_terms(1, -2, BTreeMap::new(), Some(0));
    assert!(matches!(res(&shallow), Err(Error::DepthTooShallow { .. })));
}

#[test]
fn heat_trace_of_one_is_half_csch() {
    let h = heat_trace(&PhgExpansion::one(1)).unwrap();
    let s = h.series();
    assert!((s.coeff(-1).re - 0.5).abs() < 1e-15);
    assert!(s.coeff(0).norm() < 1e-15);
    assert!((s.coeff(1).re + 1.0 / 12.0).abs() < 1e-15);
    assert!((s.coeff(3).re - 7.0 / 720.0).abs() < 1e-15);
}

#[test]
fn heat_trace_of_q_matches_spectral_sum() {
    let h = heat_trace(&PhgExpansion::from_poly(PolyC::q(1)).unwrap()).unwrap();
    let s = h.series();
    // Σ(2l+1)e^{−(2l+1)t} at small t against the Laurent series.
    let t: f64 = 0.05;
    let direct: f64 = (0..4000)
        .map(|l| (2 * l + 1) as f64 * (-(2 * l + 1) as f64 * t).exp())
        .sum();
    let series: f64 = (-2..=3).map(|k| s.coeff(k).re * t.powi(k)).sum();
    assert!((direct - series).abs() < 1e-5, "{direct} vs {series}");
    assert!((s.coeff(0).re - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn heat_trace_of_vacuum_fits_exponential() {
    let a = PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(1)));
    let h = heat_trace(&a).unwrap();
    // Tr(s e^{−tH}) = e^{−t}
    assert!((h.fit.constant().re - 1.0).abs() < 1e-3);
    assert!(h.fit.condition.is_finite());
}

#[test]
fn lone_resolvent_has_nonzero_residue() {
    let a = PhgExpansion::resolvent(1, rat(1, 3), 4);
    assert!(matches!(trh(&a, true), Err(Error::NonzeroResidue(_))));
    let r = trh(&a, false).unwrap();
    // the log t coefficient of the heat trace is Res
    let want = contact_index::symcore::scalar::crat_to_c64(&res(&a).unwrap());
    assert!((r.residual_log_coeff - want).norm() < 1e-14);
}

#[test]
fn polynomial_pairs_have_zero_tau() {
    for n in 1..=2 {
        let p = PolyC::q(n).pow(2).add(&PolyC::x(n, 0).mul(&PolyC::xi(n, 0)));
        let s = PairedSymbol::from_poly(p).unwrap();
        assert_eq!(tau(&s).unwrap().value, C64::new(0.0, 0.0));
        assert_eq!(tau_numeric(&s).unwrap().value, C64::new(0.0, 0.0));
        assert!(tau_fock(&s).unwrap().value.norm() < 1e-15);
    }
}

#[test]
fn hamiltonian_fiber_powers_have_zero_tau() {
    let h = PolyC::x(1, 0).mul(&PolyC::xi(1, 0));
    let th = PairedSymbol::with_grade(PhgExpansion::from_poly(h).unwrap(), 0).unwrap();
    let mut p = th.clone();
    for _ in 0..3 {
        assert!(tau(&p).unwrap().value.norm() < 1e-15);
        p = pair_mul(&p, &th);
    }
}

#[test]
fn vacuum_pair_has_unit_tau() {
    for n in 1..=2 {
        let s = vacuum_pair(n);
        let a = tau(&s).unwrap();
        let b = tau_numeric(&s).unwrap();
        let c = tau_fock(&s).unwrap();
        assert!((a.value.re - 1.0).abs() < 1e-15);
        assert!((b.value - a.value).norm() < 1e-8);
        assert!((c.value - a.value).norm() < 1e-12);
    }
}

#[test]
fn resolvent_pairs_agree_across_routes() {
    for (n, g) in [(1, (1, 3)), (1, (-1, 2)), (2, (1, 2)), (2, (-3, 4))] {
        let s = resolvent_pair(n, g);
        let gf = g.0 as f64 / g.1 as f64;
        let oracle = if n == 1 {
            PI / 2.0 * (PI * gf / 2.0).tan()
        } else {
            -(PI * gf / 4.0) / (PI * gf / 2.0).tan()
        };
        let a = tau(&s).unwrap();
        let b = tau_numeric(&s).unwrap();
        let c = tau_fock(&s).unwrap();
        assert!(a.residual_log_coeff.norm() < 1e-10);
        assert!((a.value.re - oracle).abs() < 1e-9, "n={n} γ={gf}: {} vs {oracle}", a.value);
        assert!((b.value.re - oracle).abs() < 1e-6, "numeric {} vs {oracle}", b.value);
        assert!((c.value.re - oracle).abs() < 1e-10, "fock {} vs {oracle}", c.value);
    }
}
