//! Differential forms sampled on a structured chart grid.
//!
//! Components are stored per basis monomial du^I (a bitmask of coordinate
//! axes) as one array over the grid nodes. `d` uses 4th-order central
//! differences; each application consumes two ghost layers.

use crate::error::{Error, Result};
use crate::symcore::scalar::C64;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Coefficients of a form: scalars or matrices (noncommutative product).
pub trait FormCoeff: Clone + Send + Sync {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, c: C64) -> Self;
}

impl FormCoeff for C64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: C64) -> Self {
        self * c
    }
}

impl FormCoeff for DMatrix<C64> {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: C64) -> Self {
        self * c
    }
}

/// Cubic grid [lo, lo + (m−1)h]^dim including `ghost` layers on each side.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub dim: usize,
    /// Nodes per axis including ghosts.
    pub m: usize,
    pub ghost: usize,
    pub lo: f64,
    pub h: f64,
}

impl Grid {
    /// `interior` nodes spanning [−half, half] per axis, plus ghost layers.
    pub fn cube(dim: usize, interior: usize, half: f64, ghost: usize) -> Self {
        let h = 2.0 * half / (interior as f64 - 1.0);
        Grid {
            dim,
            m: interior + 2 * ghost,
            ghost,
            lo: -half - ghost as f64 * h,
            h,
        }
    }

    /// A single node, for fiberwise computations.
    pub fn point() -> Self {
        Grid {
            dim: 0,
            m: 1,
            ghost: 0,
            lo: 0.0,
            h: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi(&self, idx: usize) -> Vec<usize> {
        let mut r = idx;
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = r % self.m;
            r /= self.m;
        }
        out
    }

    pub fn flat(&self, multi: &[usize]) -> usize {
        multi.iter().fold(0, |acc, &i| acc * self.m + i)
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.multi(idx)
            .iter()
            .map(|&i| self.lo + i as f64 * self.h)
            .collect()
    }

    /// Whether the node lies at least `layers` nodes inside the full grid.
    pub fn inside(&self, idx: usize, layers: usize) -> bool {
        self.multi(idx)
            .iter()
            .all(|&i| i >= layers && i + layers < self.m)
    }

    /// Node of the interior box (ghost layers excluded).
    pub fn is_interior(&self, idx: usize) -> bool {
        self.inside(idx, self.ghost)
    }
}

fn popcount_below(mask: u32, axis: usize) -> u32 {
    (mask & ((1u32 << axis) - 1)).count_ones()
}

/// Sign of du^A ∧ du^B rewritten in increasing order.
pub fn merge_sign(a: u32, b: u32) -> f64 {
    let mut swaps = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A form field: components du^I ↦ values at every node.
#[derive(Clone, Debug)]
pub struct Field<T> {
    pub grid: Arc<Grid>,
    /// Ghost layers on which values are valid.
    pub valid: usize,
    pub comps: BTreeMap<u32, Vec<T>>,
}

impl<T: FormCoeff> Field<T> {
    pub fn zero(grid: Arc<Grid>) -> Self {
        let valid = grid.ghost;
        Field {
            grid,
            valid,
            comps: BTreeMap::new(),
        }
    }

    /// Degree-0 field from node values.
    pub fn scalar(grid: Arc<Grid>, values: Vec<T>) -> Self {
        assert_eq!(values.len(), grid.len());
        let valid = grid.ghost;
        let mut comps = BTreeMap::new();
        comps.insert(0, values);
        Field { grid, valid, comps }
    }

    pub fn component(grid: Arc<Grid>, mask: u32, values: Vec<T>) -> Self {
        let mut f = Field::zero(grid);
        f.comps.insert(mask, values);
        f
    }

    /// Highest degree with a stored component.
    pub fn degree(&self) -> Option<u32> {
        self.comps.keys().map(|m| m.count_ones()).max()
    }

    pub fn get(&self, mask: u32, node: usize) -> Option<&T> {
        self.comps.get(&mask).map(|v| &v[node])
    }

    fn shared_valid(&self, o: &Self) -> usize {
        assert!(Arc::ptr_eq(&self.grid, &o.grid) || self.grid == o.grid);
        self.valid.min(o.valid)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut comps = self.comps.clone();
        for (m, v) in &o.comps {
            match comps.get_mut(m) {
                Some(w) => w.par_iter_mut().zip(v).for_each(|(a, b)| *a = a.add(b)),
                None => {
                    comps.insert(*m, v.clone());
                }
            }
        }
        Field {
            grid: self.grid.clone(),
            valid: self.shared_valid(o),
            comps,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Field {
            grid: self.grid.clone(),
            valid: self.valid,
            comps: self
                .comps
                .iter()
                .map(|(m, v)| (*m, v.par_iter().map(|x| x.scale(c)).collect()))
                .collect(),
        }
    }

    /// Keep only components of the given degree.
    pub fn part(&self, degree: u32) -> Self {
        Field {
            grid: self.grid.clone(),
            valid: self.valid,
            comps: self
                .comps
                .iter()
                .filter(|(m, _)| m.count_ones() == degree)
                .map(|(m, v)| (*m, v.clone()))
                .collect(),
        }
    }

    /// Nodewise wedge product, coefficient order preserved.
    pub fn wedge(&self, o: &Self) -> Self {
        let valid = self.shared_valid(o);
        let mut comps: BTreeMap<u32, Vec<T>> = BTreeMap::new();
        for (ma, va) in &self.comps {
            for (mb, vb) in &o.comps {
                if ma & mb != 0 {
                    continue;
                }
                let s = C64::new(merge_sign(*ma, *mb), 0.0);
                let prod: Vec<T> = va
                    .par_iter()
                    .zip(vb)
                    .map(|(a, b)| a.mul(b).scale(s))
                    .collect();
                match comps.get_mut(&(ma | mb)) {
                    Some(w) => w.par_iter_mut().zip(&prod).for_each(|(a, b)| *a = a.add(b)),
                    None => {
                        comps.insert(ma | mb, prod);
                    }
                }
            }
        }
        Field {
            grid: self.grid.clone(),
            valid,
            comps,
        }
    }

    /// Exterior derivative by 4th-order central differences.
    pub fn d(&self) -> Result<Self> {
        let g = &self.grid;
        if g.dim == 0 {
            return Ok(Field::zero(g.clone()));
        }
        if self.valid < 2 {
            return Err(Error::BoundaryStencil);
        }
        let valid = self.valid - 2;
        let layers = g.ghost - valid;
        let stride: Vec<usize> = (0..g.dim).map(|a| g.m.pow((g.dim - 1 - a) as u32)).collect();
        let inv = C64::new(1.0 / (12.0 * g.h), 0.0);
        let mut comps: BTreeMap<u32, Vec<T>> = BTreeMap::new();
        for (mask, v) in &self.comps {
            for axis in 0..g.dim {
                if mask & (1 << axis) != 0 {
                    continue;
                }
                let sgn = if popcount_below(*mask, axis).is_multiple_of(2) { 1.0 } else { -1.0 };
                let st = stride[axis];
                let deriv: Vec<T> = (0..g.len())
                    .into_par_iter()
                    .map(|i| {
                        if !g.inside(i, layers) {
                            return v[i].scale(C64::new(0.0, 0.0));
                        }
                        let t = v[i + 2 * st]
                            .scale(C64::new(-1.0, 0.0))
                            .add(&v[i + st].scale(C64::new(8.0, 0.0)))
                            .add(&v[i - st].scale(C64::new(-8.0, 0.0)))
                            .add(&v[i - 2 * st]);
                        t.scale(inv * sgn)
                    })
                    .collect();
                let key = mask | (1 << axis);
                match comps.get_mut(&key) {
                    Some(w) => w.par_iter_mut().zip(&deriv).for_each(|(a, b)| *a = a.add(b)),
                    None => {
                        comps.insert(key, deriv);
                    }
                }
            }
        }
        Ok(Field {
            grid: g.clone(),
            valid,
            comps,
        })
    }

    /// Interior product with a vector field given by components per axis.
    pub fn contract(&self, vf: &[Vec<f64>]) -> Self {
        let g = &self.grid;
        let mut comps: BTreeMap<u32, Vec<T>> = BTreeMap::new();
        for (mask, v) in &self.comps {
            for axis in 0..g.dim {
                if mask & (1 << axis) == 0 {
                    continue;
                }
                let sgn = if popcount_below(*mask, axis).is_multiple_of(2) { 1.0 } else { -1.0 };
                let out: Vec<T> = v
                    .par_iter()
                    .zip(&vf[axis])
                    .map(|(x, c)| x.scale(C64::new(sgn * c, 0.0)))
                    .collect();
                let key = mask & !(1 << axis);
                match comps.get_mut(&key) {
                    Some(w) => w.par_iter_mut().zip(&out).for_each(|(a, b)| *a = a.add(b)),
                    None => {
                        comps.insert(key, out);
                    }
                }
            }
        }
        Field {
            grid: g.clone(),
            valid: self.valid,
            comps,
        }
    }

    pub fn map<U: FormCoeff>(&self, f: impl Fn(&T) -> U + Sync) -> Field<U> {
        Field {
            grid: self.grid.clone(),
            valid: self.valid,
            comps: self
                .comps
                .iter()
                .map(|(m, v)| (*m, v.par_iter().map(&f).collect()))
                .collect(),
        }
    }
}

impl Field<C64> {
    /// Largest |component| over nodes at least `layers` inside the grid.
    pub fn max_abs(&self, layers: usize) -> f64 {
        let g = &self.grid;
        self.comps
            .values()
            .flat_map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(i, _)| g.inside(*i, layers))
                    .map(|(_, x)| x.norm())
            })
            .fold(0.0, f64::max)
    }

    /// Scalar field times a matrix-valued field.
    pub fn times(&self, m: &Field<DMatrix<C64>>) -> Field<DMatrix<C64>> {
        let lifted = self.map(|c| DMatrix::from_element(1, 1, *c));
        let valid = self.valid.min(m.valid);
        let mut comps: BTreeMap<u32, Vec<DMatrix<C64>>> = BTreeMap::new();
        for (ma, va) in &lifted.comps {
            for (mb, vb) in &m.comps {
                if ma & mb != 0 {
                    continue;
                }
                let s = merge_sign(*ma, *mb);
                let prod: Vec<DMatrix<C64>> = va
                    .par_iter()
                    .zip(vb)
                    .map(|(a, b)| b * (a[(0, 0)] * s))
                    .collect();
                match comps.get_mut(&(ma | mb)) {
                    Some(w) => w.par_iter_mut().zip(&prod).for_each(|(a, b)| *a += b),
                    None => {
                        comps.insert(ma | mb, prod);
                    }
                }
            }
        }
        Field {
            grid: self.grid.clone(),
            valid,
            comps,
        }
    }
}

impl Field<DMatrix<C64>> {
    /// Nodewise matrix trace.
    pub fn trace(&self) -> Field<C64> {
        self.map(|m| m.trace())
    }

    /// [A, B] = A∧B − (−1)^{ab} B∧A for homogeneous degrees a, b.
    pub fn graded_commutator(&self, o: &Self) -> Self {
        let a = self.degree().unwrap_or(0);
        let b = o.degree().unwrap_or(0);
        let s = if (a * b).is_multiple_of(2) { -1.0 } else { 1.0 };
        self.wedge(o).add(&o.wedge(self).scale(C64::new(s, 0.0)))
    }
}
