use contact_index::character::chi::{chi_coefficient, chi_terms};
use contact_index::character::mu::{act_on_linear, nu_basis, sp_coords, sp_defect};
use contact_index::character::words::{nu_form, sp_components, LocalElem, SymForm};
use contact_index::character::*;
use contact_index::contactgeo::connection::scalar_times;
use contact_index::contactgeo::*;
use contact_index::moyal::expansion::PhgExpansion;
use contact_index::moyal::gaussian::{vacuum_symbol, GaussSum};
use contact_index::moyal::invert::invert_scalar;
use contact_index::moyal::paired::PairedSymbol;
use contact_index::moyal::poly_star;
use contact_index::rtrace;
use contact_index::symcore::scalar::{cr, crat_from_c64, i_unit, rat, Rat, C64};
use contact_index::symcore::PolyC;
use contact_index::Error;
use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn vacuum_pair(n: usize) -> PairedSymbol {
    PairedSymbol::with_grade(PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n))), 0).unwrap()
}

fn to_dm(m: &[Vec<Rat>]) -> DMatrix<C64> {
    let d = m.len();
    DMatrix::from_fn(d, d, |i, j| c(contact_index::symcore::scalar::rat_to_f64(&m[i][j])))
}

/// Random element of sp(2n) with small integer entries: [[A, B], [C, −Aᵀ]].
fn random_sp(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
    let d = 2 * n;
    let mut m = vec![vec![Rat::zero(); d]; d];
    let mut r = || Rat::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=3).into());
    for i in 0..n {
        for j in 0..n {
            let a = r();
            m[i][j] = a.clone();
            m[n + j][n + i] = -a;
        }
        for j in i..n {
            let b = r();
            m[i][n + j] = b.clone();
            m[j][n + i] = b;
            let cc = r();
            m[n + i][j] = cc.clone();
            m[n + j][i] = cc;
        }
    }
    m
}

/// Random element of u(n) ⊂ sp(2n): [[A, −B], [B, A]], A antisymmetric, B symmetric.
fn random_u(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rat>> {
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

#[test]
fn mu_inverse_of_complex_structure_is_half_i_q() {
    for n in 1..=2 {
        let x = mu_inverse(&j0(n)).unwrap();
        assert_eq!(x.value, PolyC::q(n).scale(&(i_unit() * cr(rat(1, 2)))));
        let z = mu_inverse(&DMatrix::zeros(2 * n, 2 * n)).unwrap();
        assert!(z.value.is_zero());
        assert_eq!(nu(&DMatrix::zeros(2 * n, 2 * n)).unwrap(), PairedSymbol::zero(n));
    }
    let p = nu(&j0(1)).unwrap();
    let half_iq = PolyC::q(1).scale(&(i_unit() * cr(rat(1, 2))));
    assert_eq!(p.plus.as_poly().unwrap(), half_iq);
    assert_eq!(p.minus.as_poly().unwrap(), half_iq.neg());
}

#[test]
fn mu_inverse_rejects_non_symplectic() {
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]);
    assert!(matches!(mu_inverse(&m), Err(Error::NotSymplecticLieAlgebra(_))));
    let odd = DMatrix::<C64>::zeros(3, 3);
    assert!(matches!(mu_inverse(&odd), Err(Error::NotSymplecticLieAlgebra(_))));
}

#[test]
fn hamiltonian_acts_on_linear_symbols() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=2 {
        let mut phis = vec![random_sp(n, &mut rng), random_sp(n, &mut rng)];
        let j: Vec<Vec<Rat>> = (0..2 * n)
            .map(|i| (0..2 * n).map(|k| crat_from_c64(j0(n)[(i, k)]).re).collect())
            .collect();
        phis.push(j);
        for phi in phis {
            let x = mu_inverse_exact(&phi).unwrap().value;
            for var in 0..2 * n {
                let w = PolyC::var(n, var);
                let br = poly_star(&x, &w).sub(&poly_star(&w, &x));
                assert_eq!(br, act_on_linear(&phi, &w), "n={n} var={var}");
            }
        }
    }
}

#[test]
fn nu_is_a_lie_algebra_morphism() {
    for n in 1..=2 {
        let basis = sp_basis(n);
        let nb = nu_basis(n).unwrap();
        for (a, pa) in basis.iter().zip(&nb) {
            for (b, pb) in basis.iter().zip(&nb) {
                let lhs = nu(&(a * b - b * a)).unwrap();
                let rhs = pa.commutator(pb).unwrap();
                assert_eq!(lhs.plus.as_poly(), rhs.plus.as_poly());
                assert_eq!(lhs.minus.as_poly(), rhs.minus.as_poly());
            }
        }
    }
}

#[test]
fn commutator_with_nu_is_the_derivative_action() {
    // [ν(φ), (w, w')] = (φ.w, φ.w') for linear w and w' = ι(w)
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=2 {
        let phi = random_sp(n, &mut rng);
        let p = nu(&to_dm(&phi)).unwrap();
        for var in 0..2 * n {
            let w = PairedSymbol::from_poly(PolyC::var(n, var)).unwrap();
            let br = p.commutator(&w).unwrap();
            let want_plus = act_on_linear(&phi, &PolyC::var(n, var));
            assert_eq!(br.plus.as_poly().unwrap(), want_plus);
            let want_minus = act_on_linear(&phi, &w.minus.as_poly().unwrap());
            assert_eq!(br.minus.as_poly().unwrap(), want_minus);
        }
    }
}

#[test]
fn unitary_hamiltonian_acts_on_vacuum_by_half_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=2 {
        for _ in 0..3 {
            let t = random_u(n, &mut rng);
            let tm = to_dm(&t);
            assert!(sp_defect(&tm) < 1e-14);
            let x = mu_inverse_exact(&t).unwrap();
            let s = PhgExpansion::from_gauss(GaussSum::single(vacuum_symbol(n)));
            let lhs = PhgExpansion::from_poly(x.value.clone()).unwrap().star(&s);
            // ½ tr_C T with T ↦ T_xx + i T_ξx
            let mut half_tr = cr(Rat::zero());
            for k in 0..n {
                half_tr = half_tr + cr(t[k][k].clone()) + i_unit() * cr(t[n + k][k].clone());
            }
            half_tr *= cr(rat(1, 2));
            assert_eq!(lhs.closure().unwrap().gauss, s.scale(&half_tr).closure().unwrap().gauss);
            assert!(lhs.is_zero_expansion());
        }
    }
}

#[test]
fn vacuum_trace_of_unitary_powers() {
    // Tr(ν(T)^i s) = (½ tr_C T)^i
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=2 {
        let t = random_u(n, &mut rng);
        let tm = to_dm(&t);
        let p = nu(&tm).unwrap();
        let mut half = C64::new(0.0, 0.0);
        for k in 0..n {
            half += tm[(k, k)] + C64::new(0.0, 1.0) * tm[(n + k, k)];
        }
        half *= 0.5;
        let mut w = vacuum_pair(n);
        for i in 0..=3 {
            let got = rtrace::tau(&w).unwrap().value;
            assert!((got - half.powi(i)).norm() < 1e-10 * (1.0 + half.norm().powi(i)), "n={n} i={i}");
            w = p.mul(&w);
        }
    }
}

#[test]
fn traces_of_curvature_words_vanish() {
    for n in 1..=2 {
        let alg = WordAlgebra::new(n).unwrap();
        let d = alg.sp_dim() as u16;
        let mut words: Vec<Vec<u16>> = vec![vec![]];
        for len in 1..=3 {
            let mut next = Vec::new();
            for w in words.iter().filter(|w| w.len() == len - 1) {
                for g in 1..=d {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            words.extend(next);
        }
        if n == 2 {
            words.retain(|w| w.len() <= 2 || w.iter().all(|&g| g <= 4));
        }
        for w in &words {
            let t = alg.trace(w).unwrap();
            assert_eq!(t.route, WordRoute::PolynomialShortcut);
            assert_eq!(t.value, C64::new(0.0, 0.0));
            let h = alg.trace_heat(w).unwrap();
            assert!(h.norm() < 1e-10, "word {w:?}: {h}");
        }
    }
}

fn bott_atlas() -> (Atlas, MatForm) {
    let atlas = std_s3().unwrap();
    let f = atlas.sample(bott);
    (atlas, f)
}

/// Levi connection plus a non-unitary sp(2) perturbation.
fn perturbation(atlas: &Atlas) -> MatForm {
    let g = atlas.sample(|p| c(0.3 * p[0] + 0.2 * p[3] * p[3]));
    let k = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.5), c(0.0), c(-1.0)]);
    scalar_times(&g.wedge(&atlas.alpha()), &k, atlas)
}

fn perturbed(atlas: &Atlas) -> ConnData {
    let levi = ConnData::levi(atlas).unwrap();
    ConnData::from_beta(1, levi.beta.add(&perturbation(atlas))).unwrap()
}

fn max_local(e: &contact_index::character::words::LocalForm<DMatrix<C64>>) -> f64 {
    e.0.values()
        .flat_map(|m| m.iter().map(|x| x.norm()))
        .fold(0.0, f64::max)
}

/// Nodes of chart 0 on which every input is valid, sampled sparsely.
fn probe_nodes(atlas: &Atlas, valid: usize, count: usize) -> Vec<usize> {
    let g = &atlas.charts[0].grid;
    let all: Vec<usize> = (0..g.len()).filter(|&i| g.inside(i, g.ghost - valid)).collect();
    let step = (all.len() / count).max(1);
    all.into_iter().step_by(step).take(count).collect()
}

const PROBE_V: [[f64; 2]; 3] = [[0.3, -0.2], [1.1, 0.4], [-0.7, 0.9]];

#[test]
fn flat_connection_gives_plain_derivative() {
    let (atlas, f) = bott_atlas();
    let alg = WordAlgebra::new(1).unwrap();
    let conn = SymConnection::new(&ConnData::flat(&atlas)).unwrap();
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    assert!(conn.theta_bold(&atlas, 2).terms.is_empty());
    let nr = conn.nabla(&alg, &atlas, &sec.sym).unwrap();
    let dr = sec.sym.d().unwrap();
    for i in probe_nodes(&atlas, 2, 50) {
        assert_eq!(nr.at(0, i), dr.at(0, i));
    }
}

#[test]
fn unitary_connection_differentiates_toeplitz_symbol_by_df() {
    let (atlas, f) = bott_atlas();
    let alg = WordAlgebra::new(1).unwrap();
    let conn = SymConnection::new(&ConnData::levi(&atlas).unwrap()).unwrap();
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    let nr = conn.nabla(&alg, &atlas, &sec.sym).unwrap();
    let df = f.d().unwrap();
    let want = SymForm::single(2, vec![0], df);
    // d(f − 1) and df differ only by rounding
    for i in probe_nodes(&atlas, 2, 200) {
        for ch in 0..2 {
            let (a, b) = (nr.at(ch, i), want.at(ch, i));
            assert_eq!(a.0.keys().collect::<Vec<_>>(), vec![&vec![0u16]]);
            let d = a.add(&b.scale(c(-1.0)));
            assert!(d.0.values().all(|f| max_local(f) < 1e-13));
        }
    }
}

#[test]
fn toeplitz_symbol_shapes() {
    let atlas = std_s3_with(12).unwrap();
    let one = atlas.constant(DMatrix::<C64>::identity(2, 2));
    let sec = SymbolSection::toeplitz(&atlas, &one).unwrap();
    assert_eq!(sec.sym.at(0, 100), LocalElem::unit(2));
    assert_eq!(sec.inv.at(1, 100), LocalElem::unit(2));
    let bad = atlas.constant(DMatrix::<C64>::identity(2, 2) * c(1.0 + 1e-9));
    assert!(matches!(SymbolSection::toeplitz(&atlas, &bad), Err(Error::NotUnitary(_))));
    // the inverse is f⁻¹ s + (1 − s)
    let f = atlas.sample(bott);
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    let i = 300;
    let prod = sec.sym.at(0, i).mul(&sec.inv.at(0, i));
    let alg = WordAlgebra::new(1).unwrap();
    // words [], [0], [0, 0]; s # s = s makes the realized product the unit
    let mut total = DMatrix::<C64>::zeros(2, 2);
    for v in PROBE_V {
        let e = prod.eval_plus(&alg, &v);
        total += e.0.get(&0).unwrap() - DMatrix::<C64>::identity(2, 2);
    }
    assert!(total.norm() < 1e-12);
}

#[test]
fn curvature_identities_of_symbol_connection() {
    let (atlas, f) = bott_atlas();
    let alg = WordAlgebra::new(1).unwrap();
    let cd = perturbed(&atlas);
    let conn = SymConnection::new(&cd).unwrap();
    let theta = conn.theta_bold(&atlas, 2);
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();

    // ∇²r = [θ, r]
    let nr = conn.nabla(&alg, &atlas, &sec.sym).unwrap();
    let nnr = conn.nabla(&alg, &atlas, &nr).unwrap();
    let th_r = {
        let a = theta.wedge(&sec.sym);
        let b = sec.sym.wedge(&theta).scale(c(-1.0));
        a.add(&b)
    };
    // ∇θ = 0
    let theta1 = conn.theta_bold(&atlas, 1);
    let nth = conn.nabla(&alg, &atlas, &theta1).unwrap();
    let mut worst_sq: f64 = 0.0;
    let mut worst_bianchi: f64 = 0.0;
    for i in probe_nodes(&atlas, 0, 400) {
        let diff = nnr.at(0, i).add(&th_r.at(0, i).scale(c(-1.0)));
        for v in PROBE_V {
            worst_sq = worst_sq.max(max_local(&diff.eval_plus(&alg, &v)));
        }
        worst_bianchi = worst_bianchi.max(
            nth.at(0, i)
                .0
                .values()
                .flat_map(|f| f.0.values())
                .map(|m| m.norm())
                .fold(0.0, f64::max),
        );
    }
    assert!(worst_sq < 2e-2, "∇²r − [θ, r] = {worst_sq:.3e}");
    assert!(worst_bianchi < 5e-2, "∇θ = {worst_bianchi:.3e}");
    assert!(nth.terms.keys().all(|w| w.len() == 1 && w[0] >= 1 && w[0] <= 3));
}

#[test]
fn change_of_connection_shifts_curvature() {
    let atlas = std_s3().unwrap();
    let alg = WordAlgebra::new(1).unwrap();
    let levi = ConnData::levi(&atlas).unwrap();
    let conn = SymConnection::new(&levi).unwrap();
    let conn2 = SymConnection::new(&perturbed(&atlas)).unwrap();
    let kappa = nu_form(&sp_components(&perturbation(&atlas), 1).unwrap(), 1, &atlas);
    let rhs = conn
        .theta_bold(&atlas, 1)
        .add(&conn.nabla(&alg, &atlas, &kappa).unwrap())
        .add(&kappa.wedge(&kappa));
    let lhs = conn2.theta_bold(&atlas, 1);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in probe_nodes(&atlas, 2, 400) {
        let d = lhs.at(0, i).add(&rhs.at(0, i).scale(c(-1.0)));
        for v in PROBE_V {
            worst = worst.max(max_local(&d.eval_plus(&alg, &v)));
            scale = scale.max(max_local(&lhs.at(0, i).eval_plus(&alg, &v)));
        }
    }
    assert!(scale > 0.1);
    assert!(worst < 1e-2 * scale, "θ' − θ − ∇κ − κ² = {worst:.3e} (scale {scale:.3e})");
}

#[test]
fn chi_coefficients_and_truncation() {
    assert_eq!(chi_terms(3), vec![(0, 0), (0, 1), (1, 0)]);
    assert_eq!(chi_terms(1), vec![(0, 0)]);
    assert!(chi_terms(0).is_empty());
    assert_eq!(chi_terms(5).len(), 6);
    // l = 0, I = 0: −1/(2πi)
    assert!((chi_coefficient(0, 0) - C64::new(0.0, 1.0 / (2.0 * PI))).norm() < 1e-16);
    // l = 1, I = 0: (−1/(2πi))² / 6 = −1/(24π²)
    assert!((chi_coefficient(1, 0) - c(-1.0 / (24.0 * PI * PI))).norm() < 1e-16);
}

#[test]
fn bott_toeplitz_character() {
    let (atlas, f) = bott_atlas();
    let levi = ConnData::levi(&atlas).unwrap();
    let alg = WordAlgebra::new(1).unwrap();
    let conn = SymConnection::new(&levi).unwrap();
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    let x = chi(&alg, &atlas, &conn, &sec).unwrap();

    // the general formula agrees with Ch(f) ∧ exp(½c₁) node by node
    let closed = toeplitz_closed_form(&atlas, &f, &levi).unwrap();
    let diff = x.total.sub(&closed);
    assert!(diff.max_abs() < 1e-6, "χ − closed form = {:.3e}", diff.max_abs());
    assert!(x.total.max_abs() > 1e-2);

    // closed form
    let dchi = x.total.d().unwrap();
    assert!(dchi.max_abs() < 1e-2 * x.total.max_abs(), "dχ = {:.3e}", dchi.max_abs());

    // golden sign: with α∧dα orientation the Bott generator has index +deg
    let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
    let deg = atlas.mapping_degree(|p| *p).unwrap();
    assert_eq!(rep.nearest_integer, 1);
    assert!((rep.value[0] - deg).abs() < 1e-3, "index {} vs degree {}", rep.value[0], deg);
    assert!(rep.abs_error < 1e-2);
    assert!(rep.value[1].abs() < 1e-10);
    assert_eq!(rep.per_term_breakdown.len(), 3);
    assert!(rep.word_routes.contains_key("fock-trace"));
}

#[test]
fn toeplitz_index_is_connection_independent() {
    let (atlas, f) = bott_atlas();
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    let mut values = Vec::new();
    for cd in [ConnData::levi(&atlas).unwrap(), perturbed(&atlas), ConnData::flat(&atlas)] {
        let alg = WordAlgebra::new(1).unwrap();
        let conn = SymConnection::new(&cd).unwrap();
        values.push(index(&alg, &atlas, &conn, &sec, None).unwrap().value[0]);
    }
    for v in &values[1..] {
        assert!((v - values[0]).abs() < 1e-3, "{values:?}");
    }
}

#[test]
fn twisted_bott_has_the_same_index() {
    let atlas = std_s3().unwrap();
    let f = atlas.sample(|p| bott(p) * C64::from_polar(1.0, 0.7 * p[3] * p[0]));
    let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
    let alg = WordAlgebra::new(1).unwrap();
    let conn = SymConnection::new(&ConnData::levi(&atlas).unwrap()).unwrap();
    let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
    assert_eq!(rep.nearest_integer, 1);
    assert!(rep.abs_error < 1e-2);
}

fn block(a: DMatrix<C64>, b: DMatrix<C64>) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(&a);
    m.view_mut((2, 2), (2, 2)).copy_from(&b);
    m
}

#[test]
fn direct_sums_add_indices() {
    let atlas = std_s3().unwrap();
    let cases: [(fn(&[f64; 4]) -> DMatrix<C64>, i64); 2] = [
        (|p| block(bott(p), bott(p)), 2),
        (|p| block(bott(p), bott(p).adjoint()), 0),
    ];
    let conn = SymConnection::new(&ConnData::flat(&atlas)).unwrap();
    for (g, want) in cases {
        let f = atlas.sample(g);
        let sec = SymbolSection::toeplitz(&atlas, &f).unwrap();
        let alg = WordAlgebra::new(1).unwrap();
        let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
        assert_eq!(rep.nearest_integer, want);
        assert!(rep.abs_error < 2e-2, "{}", rep.abs_error);
    }
}

#[test]
fn bundle_automorphism_has_zero_index() {
    let atlas = std_s3().unwrap();
    let g = atlas.sample(|p| bott(p) * c(1.5 + 0.4 * p[0]));
    let sec = SymbolSection::automorphism(&g).unwrap();
    for cd in [ConnData::levi(&atlas).unwrap(), perturbed(&atlas)] {
        let alg = WordAlgebra::new(1).unwrap();
        let conn = SymConnection::new(&cd).unwrap();
        let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
        assert!(rep.value[0].abs() <= 1e-8 && rep.value[1].abs() <= 1e-8, "{:?}", rep.value);
    }
}

#[test]
fn identity_symbol_has_zero_index() {
    let atlas = std_s3_with(16).unwrap();
    let one = atlas.constant(DMatrix::<C64>::identity(1, 1));
    let sec = SymbolSection::automorphism(&one).unwrap();
    let alg = WordAlgebra::new(1).unwrap();
    let conn = SymConnection::new(&ConnData::levi(&atlas).unwrap()).unwrap();
    let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
    assert_eq!(rep.value, [0.0, 0.0]);
}

#[test]
fn order_reduced_constant_symbol_has_zero_index() {
    let atlas = std_s3_with(16).unwrap();
    let n = 1;
    let shifted = |g: Rat| {
        let p = PolyC::q(n).sub(&PolyC::constant(n, cr(g)));
        PairedSymbol::with_grade(PhgExpansion::from_poly(p).unwrap(), 2).unwrap()
    };
    let p = shifted(rat(1, 3));
    let l = shifted(rat(1, 2));
    assert_eq!(p.minus.as_poly().unwrap(), PolyC::q(n).add(&PolyC::constant(n, cr(rat(1, 3)))));
    let depth = n + 3;
    let sigma0 = invert_scalar(&l, depth).unwrap().mul(&p);
    let sigma0_inv = invert_scalar(&p, depth).unwrap().mul(&l);
    let conn = SymConnection::new(&ConnData::levi(&atlas).unwrap()).unwrap();
    for (s, si) in [(p.clone(), invert_scalar(&p, depth).unwrap()), (sigma0, sigma0_inv)] {
        let alg = WordAlgebra::new(n).unwrap();
        let sec = SymbolSection::constant(&atlas, &alg, s, si).unwrap();
        let rep = index(&alg, &atlas, &conn, &sec, None).unwrap();
        assert_eq!(rep.value, [0.0, 0.0]);
    }
}

#[test]
fn sp_components_reject_non_symplectic_forms() {
    let atlas = std_s3_with(12).unwrap();
    let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]);
    let bad = scalar_times(&atlas.alpha(), &m, &atlas);
    assert!(matches!(sp_components(&bad, 1), Err(Error::NotSymplecticLieAlgebra(_))));
    let good = scalar_times(&atlas.alpha(), &j0(1), &atlas);
    let parts = sp_components(&good, 1).unwrap();
    assert_eq!(parts.len(), 3);
    assert_eq!(sp_coords(&j0(1)), vec![c(0.0), c(-1.0), c(1.0)]);
}
