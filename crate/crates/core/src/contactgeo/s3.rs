//! The standard contact sphere S³ ⊂ ℂ² on two stereographic charts, and
//! the one-node point manifold.
//!
//! Ambient coordinates are ordered (x₁, y₁, x₂, y₂) with z_k = x_k + i y_k.
//! α = Σ (x_k dy_k − y_k dx_k), the restriction of −i∂r for r = |z|² − 1.

use super::forms::{FormCoeff, Field, Grid};
use crate::error::{Error, Result};
use crate::symcore::scalar::C64;
use rayon::prelude::*;
use std::sync::Arc;

pub const DEFAULT_NODES: usize = 32;
pub const BOX_HALF: f64 = 1.5;
pub const GHOST: usize = 4;
/// Half-width of the partition-of-unity transition band in y₂.
pub const BLEND: f64 = 0.3;

/// One chart of a contact manifold sampled on a structured grid.
#[derive(Clone, Debug)]
pub struct ContactChart {
    pub name: &'static str,
    pub dim: usize,
    pub grid: Arc<Grid>,
    /// +1: projection from (0,0,0,1); −1: from (0,0,0,−1).
    pub pole: f64,
    /// Embedded point of every node.
    pub points: Vec<[f64; 4]>,
    /// ∂p/∂u at every node, row K = ambient coordinate.
    pub jacobian: Vec<[[f64; 3]; 4]>,
    pub alpha: Field<C64>,
    /// ω = −dα.
    pub omega: Field<C64>,
    /// Reeb field, components per axis.
    pub reeb: Vec<Vec<f64>>,
    /// Frame (e₁, e₂ = Je₁) of H, components per axis.
    pub frame: [Vec<Vec<f64>>; 2],
    /// J in the frame.
    pub j_matrix: [[f64; 2]; 2],
    pub partition: Vec<f64>,
    /// Sign of (α∧dα)_{123} on this chart.
    pub orientation: f64,
}

/// Charts plus partition of unity.
#[derive(Clone, Debug)]
pub struct Atlas {
    /// Fiber dimension n (dim M = 2n + 1, or 0 for the point).
    pub n: usize,
    pub dim: usize,
    pub charts: Vec<ContactChart>,
}

fn smooth(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// C^∞ step from 0 (h ≤ −BLEND) to 1 (h ≥ BLEND).
pub fn step(h: f64) -> f64 {
    let t = (h + BLEND) / (2.0 * BLEND);
    let (a, b) = (smooth(t), smooth(1.0 - t));
    a / (a + b)
}

/// Inverse stereographic projection from the pole (0,0,0,s).
pub fn chart_point(s: f64, u: &[f64]) -> [f64; 4] {
    let r2: f64 = u.iter().map(|x| x * x).sum();
    let d = 1.0 + r2;
    [2.0 * u[0] / d, 2.0 * u[1] / d, 2.0 * u[2] / d, s * (r2 - 1.0) / d]
}

/// Stereographic projection from the pole (0,0,0,s).
pub fn chart_coords(s: f64, p: &[f64; 4]) -> [f64; 3] {
    let w = 1.0 - s * p[3];
    [p[0] / w, p[1] / w, p[2] / w]
}

fn chart_jacobian(s: f64, u: &[f64]) -> [[f64; 3]; 4] {
    let r2: f64 = u.iter().map(|x| x * x).sum();
    let d = 1.0 + r2;
    let mut j = [[0.0; 3]; 4];
    for i in 0..3 {
        for k in 0..3 {
            j[k][i] = if i == k { 2.0 / d } else { 0.0 } - 4.0 * u[k] * u[i] / (d * d);
        }
        j[3][i] = s * 4.0 * u[i] / (d * d);
    }
    j
}

/// Chart components of an ambient tangent vector at p.
fn push_vector(s: f64, p: &[f64; 4], v: &[f64; 4]) -> [f64; 3] {
    let w = 1.0 - s * p[3];
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = v[k] / w + p[k] * s * v[3] / (w * w);
    }
    out
}

/// Hopf field T = iz.
pub fn hopf(p: &[f64; 4]) -> [f64; 4] {
    [-p[1], p[0], -p[3], p[2]]
}

/// X₁ = (−z̄₂, z̄₁) and iX₁.
fn h_frame(p: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
    let x = [-p[2], p[3], p[0], -p[1]];
    ([x[0], x[1], x[2], x[3]], [-x[1], x[0], -x[3], x[2]])
}

const PAIRS: [(usize, usize, u32); 3] = [(0, 1, 0b011), (0, 2, 0b101), (1, 2, 0b110)];

impl ContactChart {
    fn s3(name: &'static str, pole: f64, nodes: usize) -> Self {
        let grid = Arc::new(Grid::cube(3, nodes, BOX_HALF, GHOST));
        let len = grid.len();
        let coords: Vec<Vec<f64>> = (0..len).map(|i| grid.coords(i)).collect();
        let points: Vec<[f64; 4]> = coords.par_iter().map(|u| chart_point(pole, u)).collect();
        let jacobian: Vec<[[f64; 3]; 4]> =
            coords.par_iter().map(|u| chart_jacobian(pole, u)).collect();

        let mut alpha_c = vec![vec![C64::new(0.0, 0.0); len]; 3];
        let mut omega_c = vec![vec![C64::new(0.0, 0.0); len]; 3];
        let mut reeb = vec![vec![0.0; len]; 3];
        let mut e1 = vec![vec![0.0; len]; 3];
        let mut e2 = vec![vec![0.0; len]; 3];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for node in 0..len {
            let p = &points[node];
            let j = &jacobian[node];
            let a = [-p[1], p[0], -p[3], p[2]];
            for i in 0..3 {
                alpha_c[i][node] = C64::new((0..4).map(|k| a[k] * j[k][i]).sum(), 0.0);
            }
            for (c, &(i, k, _)) in PAIRS.iter().enumerate() {
                let mut da = 0.0;
                for (kk, ll) in [(0, 1), (2, 3)] {
                    da += 2.0 * (j[kk][i] * j[ll][k] - j[kk][k] * j[ll][i]);
                }
                omega_c[c][node] = C64::new(-da, 0.0);
            }
            let t = push_vector(pole, p, &hopf(p));
            let (x1, ix1) = h_frame(p);
            let f1 = push_vector(pole, p, &x1);
            let f2 = push_vector(pole, p, &ix1);
            for i in 0..3 {
                reeb[i][node] = t[i];
                e1[i][node] = r * f1[i];
                e2[i][node] = r * f2[i];
            }
        }
        let mut alpha = Field::zero(grid.clone());
        for (i, v) in alpha_c.into_iter().enumerate() {
            alpha.comps.insert(1 << i, v);
        }
        let mut omega = Field::zero(grid.clone());
        for (v, &(_, _, mask)) in omega_c.into_iter().zip(PAIRS.iter()) {
            omega.comps.insert(mask, v);
        }
        let partition = points
            .iter()
            .map(|p| if pole > 0.0 { 1.0 - step(p[3]) } else { step(p[3]) })
            .collect();
        let vol = alpha.wedge(&omega).get(0b111, grid.flat(&[nodes / 2 + GHOST; 3])).copied();
        // α∧dα = −α∧ω
        let orientation = -vol.map(|v| v.re.signum()).unwrap_or(1.0);
        ContactChart {
            name,
            dim: 3,
            grid,
            pole,
            points,
            jacobian,
            alpha,
            omega,
            reeb,
            frame: [e1, e2],
            j_matrix: [[0.0, -1.0], [1.0, 0.0]],
            partition,
            orientation,
        }
    }

    fn point() -> Self {
        let grid = Arc::new(Grid::point());
        ContactChart {
            name: "point",
            dim: 0,
            grid: grid.clone(),
            pole: 1.0,
            points: vec![[0.0; 4]],
            jacobian: vec![[[0.0; 3]; 4]],
            alpha: Field::zero(grid.clone()),
            omega: Field::zero(grid),
            reeb: vec![],
            frame: [vec![], vec![]],
            j_matrix: [[0.0, -1.0], [1.0, 0.0]],
            partition: vec![1.0],
            orientation: 1.0,
        }
    }

    pub fn dalpha(&self) -> Field<C64> {
        self.omega.scale(C64::new(-1.0, 0.0))
    }

    /// α∧dα.
    pub fn contact_volume(&self) -> Field<C64> {
        self.alpha.wedge(&self.dalpha())
    }

    /// Samples a function of the embedded point as a degree-0 field.
    pub fn sample<T: FormCoeff>(&self, f: &(impl Fn(&[f64; 4]) -> T + Sync)) -> Field<T> {
        Field::scalar(self.grid.clone(), self.points.par_iter().map(f).collect())
    }

    /// Maximal deviations of the contact and compatibility identities over
    /// all nodes.
    pub fn invariant_defects(&self) -> InvariantDefects {
        let len = self.grid.len();
        let one_form = |f: &Field<C64>, v: &[Vec<f64>], node: usize| -> f64 {
            (0..3)
                .map(|i| f.get(1 << i, node).map(|c| c.re).unwrap_or(0.0) * v[i][node])
                .sum()
        };
        let two_form = |v: &[Vec<f64>], w: &[Vec<f64>], node: usize| -> f64 {
            PAIRS
                .iter()
                .map(|&(i, k, m)| {
                    let c = self.omega.get(m, node).map(|c| c.re).unwrap_or(0.0);
                    c * (v[i][node] * w[k][node] - v[k][node] * w[i][node])
                })
                .sum()
        };
        let da_t = self.dalpha().contract(&self.reeb);
        let j = self.j_matrix;
        let mut d = InvariantDefects::default();
        for node in 0..len {
            d.alpha_reeb = d.alpha_reeb.max((one_form(&self.alpha, &self.reeb, node) - 1.0).abs());
            for i in 0..3 {
                let c = da_t.get(1 << i, node).map(|c| c.norm()).unwrap_or(0.0);
                d.dalpha_reeb = d.dalpha_reeb.max(c);
            }
            for e in &self.frame {
                d.frame_in_h = d.frame_in_h.max(one_form(&self.alpha, e, node).abs());
            }
            // ω on the frame: [[0, w], [−w, 0]]
            let w = two_form(&self.frame[0], &self.frame[1], node);
            d.min_nondegeneracy = if node == 0 { w.abs() } else { d.min_nondegeneracy.min(w.abs()) };
            let om = [[0.0, w], [-w, 0.0]];
            // Jᵀ ω J − ω and ω(Jv, v) for v = e₁, e₂
            let mut inv: f64 = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    let mut s = 0.0;
                    for c in 0..2 {
                        for e in 0..2 {
                            s += j[c][a] * om[c][e] * j[e][b];
                        }
                    }
                    inv = inv.max((s - om[a][b]).abs());
                }
            }
            d.j_invariance = d.j_invariance.max(inv);
            for a in 0..2 {
                // ω(J e_a, e_a) = Σ_c J[c][a] ω[c][a]
                let v: f64 = (0..2).map(|c| j[c][a] * om[c][a]).sum();
                d.min_positivity = if node == 0 && a == 0 { v } else { d.min_positivity.min(v) };
            }
        }
        let mut jj: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let s: f64 = (0..2).map(|c| j[a][c] * j[c][b]).sum();
                jj = jj.max((s + if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
        d.j_square = jj;
        d
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct InvariantDefects {
    pub alpha_reeb: f64,
    pub dalpha_reeb: f64,
    pub frame_in_h: f64,
    pub j_square: f64,
    pub j_invariance: f64,
    /// min over nodes of |ω(e₁, e₂)|.
    pub min_nondegeneracy: f64,
    /// min over nodes and frame vectors of ω(Jv, v).
    pub min_positivity: f64,
}

impl InvariantDefects {
    pub fn ok(&self, tol: f64) -> bool {
        self.alpha_reeb <= tol
            && self.dalpha_reeb <= tol
            && self.frame_in_h <= tol
            && self.j_square <= tol
            && self.j_invariance <= tol
            && self.min_nondegeneracy > tol
            && self.min_positivity >= -tol
    }
}

/// Standard contact S³ on two stereographic charts with `nodes` per axis.
pub fn std_s3_with(nodes: usize) -> Result<Atlas> {
    if nodes < 8 {
        return Err(Error::Unsupported(format!("{nodes} nodes per axis")));
    }
    let atlas = Atlas {
        n: 1,
        dim: 3,
        charts: vec![
            ContactChart::s3("north", 1.0, nodes),
            ContactChart::s3("south", -1.0, nodes),
        ],
    };
    atlas.check_overlap()?;
    Ok(atlas)
}

pub fn std_s3() -> Result<Atlas> {
    std_s3_with(DEFAULT_NODES)
}

/// Degenerate one-node manifold carrying fiber dimension n.
pub fn point_fiber(n: usize) -> Atlas {
    Atlas {
        n,
        dim: 0,
        charts: vec![ContactChart::point()],
    }
}

/// A form given chart by chart.
#[derive(Clone, Debug)]
pub struct ValuedForm<T> {
    pub charts: Vec<Field<T>>,
}

impl<T: FormCoeff> ValuedForm<T> {
    pub fn zip(&self, o: &Self, f: impl Fn(&Field<T>, &Field<T>) -> Field<T>) -> Self {
        ValuedForm {
            charts: self.charts.iter().zip(&o.charts).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn apply(&self, f: impl Fn(&Field<T>) -> Field<T>) -> Self {
        ValuedForm {
            charts: self.charts.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(&b.scale(C64::new(-1.0, 0.0))))
    }

    pub fn wedge(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.wedge(b))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.apply(|a| a.scale(c))
    }

    pub fn part(&self, degree: u32) -> Self {
        self.apply(|a| a.part(degree))
    }

    pub fn d(&self) -> Result<Self> {
        Ok(ValuedForm {
            charts: self.charts.iter().map(|f| f.d()).collect::<Result<_>>()?,
        })
    }

    pub fn degree(&self) -> Option<u32> {
        self.charts.iter().filter_map(|f| f.degree()).max()
    }
}

impl ValuedForm<C64> {
    pub fn max_abs(&self) -> f64 {
        self.charts
            .iter()
            .map(|f| f.max_abs(f.grid.ghost - f.valid))
            .fold(0.0, f64::max)
    }
}

impl Atlas {
    pub fn sample<T: FormCoeff>(&self, f: impl Fn(&[f64; 4]) -> T + Sync) -> ValuedForm<T> {
        ValuedForm {
            charts: self.charts.iter().map(|c| c.sample(&f)).collect(),
        }
    }

    pub fn constant<T: FormCoeff>(&self, c: T) -> ValuedForm<T> {
        self.sample(move |_| c.clone())
    }

    pub fn alpha(&self) -> ValuedForm<C64> {
        ValuedForm {
            charts: self.charts.iter().map(|c| c.alpha.clone()).collect(),
        }
    }

    pub fn dalpha(&self) -> ValuedForm<C64> {
        ValuedForm {
            charts: self.charts.iter().map(|c| c.dalpha()).collect(),
        }
    }

    pub fn contact_volume(&self) -> ValuedForm<C64> {
        ValuedForm {
            charts: self.charts.iter().map(|c| c.contact_volume()).collect(),
        }
    }

    /// Chart maps invert each other on the blended region and each chart
    /// carries a constant orientation there.
    pub fn check_overlap(&self) -> Result<()> {
        for c in &self.charts {
            if c.dim == 0 {
                continue;
            }
            let vol = c.contact_volume();
            for node in 0..c.grid.len() {
                if c.partition[node] == 0.0 {
                    continue;
                }
                let u = c.grid.coords(node);
                let back = chart_coords(c.pole, &c.points[node]);
                let err: f64 = (0..3).map(|i| (back[i] - u[i]).abs()).fold(0.0, f64::max);
                if err > 1e-10 * (1.0 + u.iter().map(|x| x.abs()).sum::<f64>()) {
                    return Err(Error::ChartOverlapMismatch(format!(
                        "{} chart does not invert at node {node}",
                        c.name
                    )));
                }
                let v = vol.get(0b111, node).map(|v| v.re).unwrap_or(0.0);
                if v * c.orientation <= 0.0 {
                    return Err(Error::ChartOverlapMismatch(format!(
                        "{} chart orientation flips at node {node}",
                        c.name
                    )));
                }
                if c.grid.is_interior(node) {
                    continue;
                }
                return Err(Error::ChartOverlapMismatch(format!(
                    "{} partition function leaks into ghost layers",
                    c.name
                )));
            }
        }
        let total: f64 = self
            .charts
            .iter()
            .map(|c| if c.dim == 0 { 1.0 } else { 0.0 })
            .sum();
        if self.dim == 0 && total != 1.0 {
            return Err(Error::ChartOverlapMismatch("point atlas".into()));
        }
        Ok(())
    }

    /// Oriented integral of the top-degree part, blended by the partition
    /// of unity with trapezoid weights.
    pub fn integrate(&self, form: &ValuedForm<C64>) -> Result<C64> {
        if form.charts.len() != self.charts.len() {
            return Err(Error::ChartOverlapMismatch(format!(
                "form has {} charts, atlas {}",
                form.charts.len(),
                self.charts.len()
            )));
        }
        let mut total = C64::new(0.0, 0.0);
        for (c, f) in self.charts.iter().zip(&form.charts) {
            if *f.grid != *c.grid {
                return Err(Error::ChartOverlapMismatch(format!(
                    "form sampled on a different grid than chart {}",
                    c.name
                )));
            }
            let top = (1u32 << c.dim) - 1;
            let Some(vals) = f.comps.get(&top) else {
                continue;
            };
            let g = &c.grid;
            let w0 = g.h.powi(c.dim as i32);
            // collected before summing so the result does not depend on
            // the thread schedule
            let terms: Vec<C64> = (0..g.len())
                .into_par_iter()
                .filter(|&i| g.is_interior(i) && c.partition[i] != 0.0)
                .map(|i| {
                    let edges = g
                        .multi(i)
                        .iter()
                        .filter(|&&k| k == g.ghost || k + 1 + g.ghost == g.m)
                        .count();
                    vals[i] * (c.partition[i] * w0 * 0.5f64.powi(edges as i32))
                })
                .collect();
            let s: C64 = terms.iter().sum();
            total += s * c.orientation;
        }
        Ok(total)
    }

    /// Degree of F: S³ → S³ from ∫F*(α∧dα)/∫α∧dα, with F*α built from
    /// finite-difference differentials of the components of F.
    pub fn mapping_degree(&self, map: impl Fn(&[f64; 4]) -> [f64; 4] + Sync) -> Result<f64> {
        if self.dim != 3 {
            return Err(Error::Unsupported("mapping degree needs a 3-manifold".into()));
        }
        let comp = |k: usize| self.sample(|p| C64::new(map(p)[k], 0.0));
        let f: Vec<ValuedForm<C64>> = (0..4).map(comp).collect();
        let df: Vec<ValuedForm<C64>> = f.iter().map(|x| x.d()).collect::<Result<_>>()?;
        let mut pa = f[0].wedge(&df[1]).sub(&f[1].wedge(&df[0]));
        pa = pa.add(&f[2].wedge(&df[3])).sub(&f[3].wedge(&df[2]));
        let pda = df[0].wedge(&df[1]).add(&df[2].wedge(&df[3])).scale(C64::new(2.0, 0.0));
        let num = self.integrate(&pa.wedge(&pda))?;
        let den = self.integrate(&self.contact_volume())?;
        Ok((num / den).re)
    }
}
