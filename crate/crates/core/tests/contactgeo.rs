use contact_index::contactgeo::s3::{chart_coords, step};
use contact_index::contactgeo::*;
use contact_index::symcore::scalar::C64;
use contact_index::Error;
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn s3() -> &'static Atlas {
    static A: OnceLock<Atlas> = OnceLock::new();
    A.get_or_init(|| std_s3().unwrap())
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn wiggle(p: &[f64; 4]) -> f64 {
    (p[0] + 2.0 * p[3]).sin() + p[1] * p[2] * (0.5 * p[0]).cos()
}

fn wiggle_grad(p: &[f64; 4]) -> [f64; 4] {
    let a = (p[0] + 2.0 * p[3]).cos();
    [
        a - 0.5 * p[1] * p[2] * (0.5 * p[0]).sin(),
        p[2] * (0.5 * p[0]).cos(),
        p[1] * (0.5 * p[0]).cos(),
        2.0 * a,
    ]
}

#[test]
fn chart_invariants_hold_at_every_node() {
    for ch in &s3().charts {
        let d = ch.invariant_defects();
        assert!(d.ok(1e-10), "{}: {d:?}", ch.name);
    }
}

#[test]
fn contact_volume_is_nowhere_vanishing() {
    for ch in &s3().charts {
        let v = ch.contact_volume();
        let vals = &v.comps[&0b111];
        let min = vals.iter().map(|x| x.re * ch.orientation).fold(f64::INFINITY, f64::min);
        assert!(min > 0.0, "{}: {min}", ch.name);
    }
}

#[test]
fn reeb_field_is_the_hopf_field() {
    // kernel of dα, normalized by α, from the chart components alone
    for ch in &s3().charts {
        let da = ch.dalpha();
        for node in (0..ch.grid.len()).step_by(97) {
            let w = |m: u32| da.get(m, node).unwrap().re;
            let k = [w(0b110), -w(0b101), w(0b011)];
            let a: f64 = (0..3).map(|i| ch.alpha.get(1 << i, node).unwrap().re * k[i]).sum();
            for i in 0..3 {
                let want = k[i] / a;
                assert!((ch.reeb[i][node] - want).abs() < 1e-10 * (1.0 + want.abs()));
            }
        }
    }
}

#[test]
fn derivative_of_constant_vanishes() {
    let f = s3().constant(c(2.5)).d().unwrap();
    assert_eq!(f.max_abs(), 0.0);
}

fn gradient_error(nodes: usize) -> f64 {
    let atlas = std_s3_with(nodes).unwrap();
    let df = atlas.sample(|p| c(wiggle(p))).d().unwrap();
    let mut err: f64 = 0.0;
    for (ch, f) in atlas.charts.iter().zip(&df.charts) {
        for node in 0..ch.grid.len() {
            if !ch.grid.is_interior(node) || ch.partition[node] == 0.0 {
                continue;
            }
            let g = wiggle_grad(&ch.points[node]);
            for i in 0..3 {
                let want: f64 = (0..4).map(|k| g[k] * ch.jacobian[node][k][i]).sum();
                err = err.max((f.get(1 << i, node).unwrap().re - want).abs());
            }
        }
    }
    err
}

#[test]
fn exterior_derivative_is_fourth_order() {
    let coarse = gradient_error(21);
    let fine = gradient_error(41);
    // h shrinks by 2 exactly
    let ratio = coarse / fine;
    assert!(ratio > 13.0 && ratio < 19.0, "{coarse:e} {fine:e} {ratio}");
}

#[test]
fn d_squared_vanishes() {
    let f = s3().sample(|p| c(wiggle(p)));
    let dd = f.d().unwrap().d().unwrap();
    assert!(dd.max_abs() < 1e-9, "{}", dd.max_abs());
}

#[test]
fn stencil_margin_is_enforced() {
    let f = s3().sample(|p| c(wiggle(p)));
    let r = f.d().unwrap().d().unwrap().d();
    assert!(matches!(r, Err(Error::BoundaryStencil)));
}

#[test]
fn sphere_volume() {
    // ∫α∧dα = 2·vol(S³) = 4π²
    let mut prev = f64::INFINITY;
    for nodes in [16, 24, 32] {
        let a = std_s3_with(nodes).unwrap();
        let v = a.integrate(&a.contact_volume()).unwrap();
        let err = (v.re / 2.0 - 2.0 * PI * PI).abs();
        assert!(err < prev);
        prev = err;
    }
    assert!(prev < 1e-4, "{prev}");
}

#[test]
fn stokes_on_closed_sphere() {
    let a = s3();
    let f = a.sample(|p| c(wiggle(p)));
    let eta = f.wedge(&a.dalpha());
    let v = a.integrate(&eta.d().unwrap()).unwrap();
    assert!(v.norm() < 1e-6, "{v}");
}

/// 8π ∫ g(t)√(1−t²) dt: slices of S³ at height y₂ = t are 2-spheres.
fn slice_oracle(g: impl Fn(f64) -> f64) -> f64 {
    let m = 20000;
    let h = 2.0 / m as f64;
    let f = |t: f64| g(t) * (1.0 - t * t).max(0.0).sqrt();
    let mut s = f(-1.0) + f(1.0);
    for k in 1..m {
        let t = -1.0 + k as f64 * h;
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    8.0 * PI * s * h / 3.0
}

#[test]
fn partition_consistency() {
    // supported inside the blending band: one chart alone sees all of it
    let a = std_s3_with(48).unwrap();
    let bump = |t: f64| {
        let t = t / 0.29;
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        }
    };
    let want = slice_oracle(bump);
    let form = a
        .sample(|p| c(bump(p[3]) * (1.0 + p[0])))
        .wedge(&a.contact_volume());
    let blended = a.integrate(&form).unwrap();
    assert!((blended.re - want).abs() < 1e-3 * want, "{blended} {want}");
    for keep in 0..2 {
        let mut single = a.clone();
        for (k, ch) in single.charts.iter_mut().enumerate() {
            for (node, x) in ch.partition.iter_mut().enumerate() {
                let inside = ch.points[node][3].abs() < 0.295 && ch.grid.is_interior(node);
                *x = if k == keep && inside { 1.0 } else { 0.0 };
            }
        }
        let v = single.integrate(&form).unwrap();
        assert!((v - blended).norm() < 1e-3 * want, "{v} {blended}");
    }
}

#[test]
fn partition_functions_sum_to_one() {
    let a = s3();
    for ch in &a.charts {
        for node in (0..ch.grid.len()).step_by(31) {
            let p = ch.points[node];
            let other = if ch.pole > 0.0 { step(p[3]) } else { 1.0 - step(p[3]) };
            assert!((ch.partition[node] + other - 1.0).abs() < 1e-15);
            let u = chart_coords(ch.pole, &p);
            let back = ch.grid.coords(node);
            for i in 0..3 {
                assert!((u[i] - back[i]).abs() < 1e-12 * (1.0 + back[i].abs()));
            }
        }
    }
}

#[test]
fn form_from_another_grid_is_rejected() {
    let a = s3();
    let b = std_s3_with(16).unwrap();
    let r = a.integrate(&b.contact_volume());
    assert!(matches!(r, Err(Error::ChartOverlapMismatch(_))));
}

#[test]
fn levi_connection_curvature() {
    let a = s3();
    let conn = ConnData::levi(a).unwrap();
    assert_eq!(conn.n, 1);
    let want = contact_index::contactgeo::connection::scalar_times(
        &a.dalpha().scale(c(2.0)),
        &j0(1),
        a,
    );
    let diff = contact_index::contactgeo::connection::mat_max(&conn.theta.sub(&want));
    // curvature components reach 16 near the chart origins
    assert!(diff < 2e-2, "{diff}");
    assert!(conn.structure_defect().unwrap() < 1e-12);
    assert!(conn.bianchi_defect().unwrap() < 5e-2);
    // u(1)-valued: every curvature component commutes with J₀
    for ch in &conn.theta.charts {
        for v in ch.comps.values() {
            for m in v.iter().step_by(101) {
                assert!((m * j0(1) - j0(1) * m).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn flat_connection_has_no_curvature() {
    let conn = ConnData::flat(s3());
    assert!(conn.theta.degree().is_none());
    assert_eq!(conn.bianchi_defect().unwrap(), 0.0);
}

#[test]
fn characteristic_forms_on_a_three_manifold() {
    let a = s3();
    let conn = ConnData::levi(a).unwrap();
    let ah = a_hat(a, None).unwrap();
    assert_eq!(ah.degree(), Some(0));
    let td = todd(a, &conn.theta, 1);
    assert!(td.degree().unwrap() <= 3);
    // c₁ = −θ_J/2π = −dα/π
    let c = c1(&conn.theta, 1).sub(&a.dalpha().scale(c(-1.0 / PI)));
    assert!(c.max_abs() < 5e-3, "{}", c.max_abs());
    let vol = a.integrate(&c1(&conn.theta, 1).wedge(&a.alpha())).unwrap();
    assert!((vol.re + 4.0 * PI).abs() < 5e-3, "{vol}");
}

#[test]
fn ch_odd_of_constant_is_zero() {
    let a = s3();
    let u = DMatrix::from_row_slice(2, 2, &[c(0.6), c(-0.8), c(0.8), c(0.6)]);
    let ch = ch_odd(a, &a.constant(u)).unwrap();
    assert!(ch.max_abs() < 1e-12);
}

#[test]
fn ch_odd_rejects_non_unitary() {
    let a = s3();
    let m = DMatrix::from_element(2, 2, c(1.0));
    assert!(matches!(ch_odd(a, &a.constant(m)), Err(Error::NotUnitary(_))));
}

#[test]
fn bott_generator_has_unit_degree() {
    let a = s3();
    let ch = ch_odd(a, &a.sample(bott)).unwrap();
    let idx = a.integrate(&ch.part(3)).unwrap();
    let deg = a.mapping_degree(|p| *p).unwrap();
    assert!((deg - 1.0).abs() < 1e-3, "{deg}");
    assert!(idx.im.abs() < 1e-8, "{idx}");
    // golden: with the α∧dα orientation ∫Ch₃(bott) = +deg
    assert!((idx.re - deg).abs() < 1e-3, "{idx} {deg}");
}

#[test]
fn reflected_map_has_degree_minus_one() {
    let a = s3();
    let deg = a.mapping_degree(|p| [p[0], -p[1], p[2], p[3]]).unwrap();
    assert!((deg + 1.0).abs() < 1e-3, "{deg}");
}

#[test]
fn point_fiber_integrates_values() {
    let p = point_fiber(2);
    assert_eq!(p.n, 2);
    let v = p.integrate(&p.constant(c(3.0))).unwrap();
    assert_eq!(v, c(3.0));
    assert_eq!(p.constant(c(1.0)).d().unwrap().degree(), None);
}

/// Tricubic Lagrange interpolation of one component at chart point u.
fn interp(f: &Field<C64>, mask: u32, u: &[f64; 3]) -> f64 {
    let g = &f.grid;
    let v = &f.comps[&mask];
    let mut base = [0usize; 3];
    let mut w = [[0.0; 4]; 3];
    for a in 0..3 {
        let x = (u[a] - g.lo) / g.h;
        let i0 = x.floor() as usize - 1;
        base[a] = i0;
        for k in 0..4 {
            let mut l = 1.0;
            for m in 0..4 {
                if m != k {
                    l *= (x - (i0 + m) as f64) / (k as f64 - m as f64);
                }
            }
            w[a][k] = l;
        }
    }
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let idx = g.flat(&[base[0] + i, base[1] + j, base[2] + k]);
                s += w[0][i] * w[1][j] * w[2][k] * v[idx].re;
            }
        }
    }
    s
}

/// Flux of a chart 2-form through the coordinate sphere |u| = ρ.
fn sphere_flux(f: &Field<C64>, rho: f64) -> f64 {
    let (mt, mp) = (64, 128);
    let mut total = 0.0;
    for a in 0..mt {
        let th = PI * (a as f64 + 0.5) / mt as f64;
        for b in 0..mp {
            let ph = 2.0 * PI * b as f64 / mp as f64;
            let nrm = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let u = [rho * nrm[0], rho * nrm[1], rho * nrm[2]];
            let fv = [interp(f, 0b110, &u), -interp(f, 0b101, &u), interp(f, 0b011, &u)];
            let dot: f64 = (0..3).map(|i| fv[i] * nrm[i]).sum();
            total += dot * rho * rho * th.sin() * (PI / mt as f64) * (2.0 * PI / mp as f64);
        }
    }
    total
}

#[test]
fn first_chern_form_has_no_periods() {
    let a = s3();
    let conn = ConnData::levi(a).unwrap();
    let c = c1(&conn.theta, 1);
    for (k, rho) in [(0, 0.5), (0, 1.0), (1, 0.8)] {
        let flux = sphere_flux(&c.charts[k], rho);
        assert!(flux.abs() < 1e-3, "ρ = {rho}: {flux}");
    }
    // sanity: a 2-form with a point source is seen by the probe
    let ch = &a.charts[0];
    let src = ch.sample(&|p: &[f64; 4]| {
        let u = contact_index::contactgeo::s3::chart_coords(1.0, p);
        let r3 = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + 1e-12).powf(1.5);
        C64::new(1.0 / r3, 0.0)
    });
    let mut radial = Field::zero(ch.grid.clone());
    for (axis, mask, sgn) in [(0usize, 0b110u32, 1.0), (1, 0b101, -1.0), (2, 0b011, 1.0)] {
        let vals = (0..ch.grid.len())
            .map(|i| src.comps[&0][i] * (sgn * ch.grid.coords(i)[axis]))
            .collect();
        radial.comps.insert(mask, vals);
    }
    let s = sphere_flux(&radial, 1.0);
    assert!((s - 4.0 * PI).abs() < 5e-3, "{s}");
}
