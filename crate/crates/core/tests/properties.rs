use contact_index::moyal::expansion::PhgExpansion;
use contact_index::moyal::gaussian::{GaussSum, GaussTerm};
use contact_index::moyal::paired::PairedSymbol;
use contact_index::moyal::poly_star;
use contact_index::rtrace::{res, tau};
use contact_index::symcore::radial::{sphere_integral_poly, RadialRat};
use contact_index::symcore::scalar::{ci, cr, i_unit, rat, CRat, Rat};
use contact_index::symcore::PolyC;
use num_traits::Zero;
use proptest::prelude::*;

/// (monomial exponents, real numerator, imaginary numerator, denominator)
type RawTerm = (Vec<u16>, i64, i64, i64);

fn raw_terms(n: usize, max_deg: u16, max_terms: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, 2 * n), -6i64..=6, -3i64..=3, 1i64..=4),
        1..=max_terms,
    )
}

/// Terms with total degree above `max_deg` are dropped; `parity` keeps only one parity.
fn build(n: usize, raw: &[RawTerm], max_deg: u32, parity: Option<u32>) -> PolyC {
    let mut p = PolyC::zero(n);
    for (mono, re, im, den) in raw {
        let d: u32 = mono.iter().map(|&e| e as u32).sum();
        if d > max_deg || parity.is_some_and(|q| d % 2 != q) {
            continue;
        }
        let c = cr(rat(*re, *den)) + i_unit() * cr(rat(*im, *den));
        p.add_term(mono.clone(), c);
    }
    p
}

fn poly(n: usize, max_deg: u32, parity: Option<u32>) -> impl Strategy<Value = PolyC> {
    raw_terms(n, max_deg as u16, 4).prop_map(move |r| build(n, &r, max_deg, parity))
}

fn nonzero_poly(n: usize, max_deg: u32, parity: u32) -> impl Strategy<Value = PolyC> {
    poly(n, max_deg, Some(parity)).prop_filter("nonzero", |p| !p.is_zero())
}

/// Orthogonal and symplectic: rotation by (3/5, 4/5) in each (x_j, ξ_j) plane.
fn rotation(n: usize) -> Vec<Vec<CRat>> {
    let mut m = vec![vec![CRat::zero(); 2 * n]; 2 * n];
    for j in 0..n {
        m[j][j] = cr(rat(3, 5));
        m[j][n + j] = cr(rat(-4, 5));
        m[n + j][j] = cr(rat(4, 5));
        m[n + j][n + j] = cr(rat(3, 5));
    }
    m
}

fn gauss_pair(p: PolyC, lam: Rat) -> PairedSymbol {
    PairedSymbol::with_grade(PhgExpansion::from_gauss(GaussSum::single(GaussTerm::new(p, lam))), 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_is_associative((a, b, c) in (1usize..=2).prop_flat_map(|n| (poly(n, 4, None), poly(n, 4, None), poly(n, 4, None)))) {
        prop_assert_eq!(poly_star(&poly_star(&a, &b), &c), poly_star(&a, &poly_star(&b, &c)));
    }

    #[test]
    fn star_has_unit_and_is_bilinear(a in poly(2, 4, None), b in poly(2, 4, None), c in poly(2, 4, None)) {
        prop_assert_eq!(poly_star(&a, &PolyC::one(2)), a.clone());
        prop_assert_eq!(poly_star(&a, &b.add(&c)), poly_star(&a, &b).add(&poly_star(&a, &c)));
    }

    #[test]
    fn iota_reverses_products(
        pa in 0u32..2,
        pb in 0u32..2,
        a in nonzero_poly(1, 5, 0),
        a1 in nonzero_poly(1, 5, 1),
        b in nonzero_poly(1, 5, 0),
        b1 in nonzero_poly(1, 5, 1),
    ) {
        let a = PhgExpansion::from_poly(if pa == 0 { a } else { a1 }).unwrap();
        let b = PhgExpansion::from_poly(if pb == 0 { b } else { b1 }).unwrap();
        prop_assert_eq!(a.star(&b).iota(), b.iota().star(&a.iota()));
        prop_assert_eq!(a.iota().iota(), a);
    }

    #[test]
    fn radial_rationals_form_a_ring(
        p in poly(2, 3, None), q in poly(2, 3, None), r in poly(2, 3, None),
        kp in 0u32..3, kq in 0u32..3, kr in 0u32..3,
    ) {
        let (x, y, z) = (RadialRat::new(p, kp), RadialRat::new(q, kq), RadialRat::new(r, kr));
        prop_assert!(x.add(&y).sub(&y.add(&x)).is_zero());
        prop_assert!(x.mul(&y).sub(&y.mul(&x)).is_zero());
        prop_assert!(x.mul(&y).mul(&z).sub(&x.mul(&y.mul(&z))).is_zero());
        prop_assert!(x.mul(&y.add(&z)).sub(&x.mul(&y).add(&x.mul(&z))).is_zero());
        prop_assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn sphere_integral_is_rotation_invariant((n, p) in (1usize..=2).prop_flat_map(|n| (Just(n), poly(n, 6, None)))) {
        let rotated = p.linear_substitute(&rotation(n));
        prop_assert_eq!(sphere_integral_poly(&rotated), sphere_integral_poly(&p));
    }

    #[test]
    fn sphere_integral_sees_q_as_one(n in 1usize..=3, k in 0u32..4) {
        // |S^{2n−1}| = 2πⁿ/(n−1)!
        let fact: i64 = (1..n as i64).product();
        let area = cr(rat(2, fact));
        prop_assert_eq!(sphere_integral_poly(&PolyC::q(n).pow(k)).pi_coeff, area.clone());
        // x₁² carries 1/2n of it
        prop_assert_eq!(sphere_integral_poly(&PolyC::x(n, 0).pow(2)).pi_coeff, area / ci(2 * n as i64));
    }

    #[test]
    fn residue_of_iota_changes_sign_by_grade(
        (n, p) in (1usize..=2).prop_flat_map(|n| (Just(n), nonzero_poly(n, 4, 0))),
        g in 1i64..=5,
    ) {
        let a = PhgExpansion::resolvent(n, rat(g, 7), n + 4).star(&PhgExpansion::from_poly(p).unwrap());
        let r = res(&a).unwrap();
        let ri = res(&a.iota()).unwrap();
        // the hdeg −2n term of ι a carries (−1)^{(order + 2n)/2}
        let sign = if (a.order() + 2 * n as i32).rem_euclid(4) == 0 { ci(1) } else { ci(-1) };
        prop_assert_eq!(ri, sign * r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tau_is_a_trace(
        p in nonzero_poly(1, 4, 0),
        q in nonzero_poly(1, 4, 0),
        la in 1i64..=3,
        lb in 1i64..=3,
        poly_b in any::<bool>(),
    ) {
        let a = gauss_pair(p, rat(1, la));
        let b = if poly_b { PairedSymbol::from_poly(q).unwrap() } else { gauss_pair(q, rat(1, lb)) };
        let ab = tau(&a.mul(&b)).unwrap().value;
        let ba = tau(&b.mul(&a)).unwrap().value;
        prop_assert!((ab - ba).norm() <= 1e-8 * (1.0 + ab.norm()), "{} vs {}", ab, ba);
    }

    #[test]
    fn tau_is_symplectically_invariant(
        (n, p) in (1usize..=2).prop_flat_map(|n| (Just(n), nonzero_poly(n, 4, 0))),
        la in 1i64..=3,
    ) {
        let a = gauss_pair(p, rat(1, la));
        let t = tau(&a).unwrap().value;
        let r = tau(&a.linear_substitute(&rotation(n))).unwrap().value;
        prop_assert!((t - r).norm() <= 1e-8 * (1.0 + t.norm()));
    }
}
