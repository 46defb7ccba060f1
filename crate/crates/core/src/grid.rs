//! Uniform grids on `[0, pi]` and piecewise-linear grid functions.
//!
//! A [`GridFn`] keeps a left and a right limit at every node so that jumps
//! located on nodes (the split point `a` of a potential, the point `pi - a`
//! of the `w` densities) are represented exactly. Inside a cell the function
//! is the linear interpolant between the right limit at the left node and the
//! left limit at the right node.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;

pub const MIN_SUBINTERVALS: usize = 16;

/// Uniform grid `x_k = k pi / m`, `k = 0..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    m: usize,
}

impl GridSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < MIN_SUBINTERVALS {
            return Err(Error::GridTooCoarse(m));
        }
        Ok(Self { m })
    }

    pub fn subintervals(&self) -> usize {
        self.m
    }

    pub fn nodes(&self) -> usize {
        self.m + 1
    }

    pub fn step(&self) -> f64 {
        PI / self.m as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        k as f64 * PI / self.m as f64
    }

    /// Cell index containing `x` (clamped to `0..m`) and the local offset.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let h = self.step();
        let s = (x / h).floor();
        let cell = if s < 0.0 {
            0
        } else {
            (s as usize).min(self.m - 1)
        };
        (cell, x - cell as f64 * h)
    }

    /// Node index if `x` sits on a node up to rounding.
    pub fn node_at(&self, x: f64) -> Option<usize> {
        let s = x / self.step();
        let k = s.round();
        if (s - k).abs() < 1e-9 && k >= 0.0 && k as usize <= self.m {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// Piecewise-linear complex function on a [`GridSpec`] with one-sided node values.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    grid: GridSpec,
    left: Vec<C>,
    right: Vec<C>,
}

impl GridFn {
    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.nodes();
        Self {
            grid,
            left: vec![C::new(0.0, 0.0); n],
            right: vec![C::new(0.0, 0.0); n],
        }
    }

    /// Continuous function from node values.
    pub fn from_nodes(grid: GridSpec, values: Vec<C>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::GridMismatch {
                expected: grid.nodes(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            left: values.clone(),
            right: values,
        })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> C) -> Self {
        let values: Vec<C> = (0..grid.nodes()).map(|k| f(grid.x(k))).collect();
        Self {
            grid,
            left: values.clone(),
            right: values,
        }
    }

    pub fn from_one_sided(grid: GridSpec, left: Vec<C>, right: Vec<C>) -> Result<Self> {
        for v in [&left, &right] {
            if v.len() != grid.nodes() {
                return Err(Error::GridMismatch {
                    expected: grid.nodes(),
                    got: v.len(),
                });
            }
        }
        Ok(Self { grid, left, right })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn left(&self) -> &[C] {
        &self.left
    }

    pub fn right(&self) -> &[C] {
        &self.right
    }

    pub fn set(&mut self, k: usize, left: C, right: C) {
        self.left[k] = left;
        self.right[k] = right;
    }

    /// Mean of the one-sided limits at node `k`.
    pub fn node(&self, k: usize) -> C {
        (self.left[k] + self.right[k]) * 0.5
    }

    /// Node values, averaging across jumps.
    pub fn node_values(&self) -> Vec<C> {
        (0..self.grid.nodes()).map(|k| self.node(k)).collect()
    }

    /// Value inside `cell` at local offset `dx` in `[0, h]`.
    pub fn eval_in_cell(&self, cell: usize, dx: f64) -> C {
        let h = self.grid.step();
        let s = dx / h;
        self.right[cell] * (1.0 - s) + self.left[cell + 1] * s
    }

    /// Point evaluation; at a node the mean of the one-sided limits, except
    /// at the ends of `[0, pi]` where only one side exists.
    pub fn eval(&self, x: f64) -> C {
        if let Some(k) = self.grid.node_at(x) {
            if k == 0 {
                return self.right[0];
            }
            if k == self.grid.subintervals() {
                return self.left[k];
            }
            return self.node(k);
        }
        let (cell, dx) = self.grid.locate(x);
        self.eval_in_cell(cell, dx)
    }

    /// Right limit at `x` (the value seen from `x + 0`).
    pub fn eval_right(&self, x: f64) -> C {
        match self.grid.node_at(x) {
            Some(k) if k < self.grid.subintervals() => self.right[k],
            Some(k) => self.left[k],
            None => self.eval(x),
        }
    }

    /// Left limit at `x`.
    pub fn eval_left(&self, x: f64) -> C {
        match self.grid.node_at(x) {
            Some(k) if k > 0 => self.left[k],
            Some(_) => self.right[0],
            None => self.eval(x),
        }
    }

    /// Exact integral of the interpolant over `[x_lo_node, x_hi_node]`.
    pub fn integrate_nodes(&self, lo: usize, hi: usize) -> C {
        let h = self.grid.step();
        (lo..hi)
            .map(|c| (self.right[c] + self.left[c + 1]) * (0.5 * h))
            .sum()
    }

    /// Running integral from 0, exact for the interpolant.
    pub fn antiderivative(&self) -> Antiderivative {
        Antiderivative::new(self)
    }

    /// `sqrt(int |f|^2)` by cellwise trapezoid on the one-sided values.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_over(0, self.grid.subintervals())
    }

    pub fn l2_norm_over(&self, lo: usize, hi: usize) -> f64 {
        let h = self.grid.step();
        let s: f64 = (lo..hi)
            .map(|c| 0.5 * h * (self.right[c].norm_sqr() + self.left[c + 1].norm_sqr()))
            .sum();
        s.sqrt()
    }

    pub fn map(&self, f: impl Fn(C) -> C) -> Self {
        Self {
            grid: self.grid,
            left: self.left.iter().map(|&v| f(v)).collect(),
            right: self.right.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(C, C) -> C) -> Self {
        assert_eq!(self.grid, other.grid, "grid functions on different grids");
        Self {
            grid: self.grid,
            left: self.left.iter().zip(&other.left).map(|(&a, &b)| f(a, b)).collect(),
            right: self
                .right
                .iter()
                .zip(&other.right)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn is_finite(&self) -> std::result::Result<(), usize> {
        for k in 0..self.grid.nodes() {
            let ok = |v: C| v.re.is_finite() && v.im.is_finite();
            if !ok(self.left[k]) || !ok(self.right[k]) {
                return Err(k);
            }
        }
        Ok(())
    }
}

/// Exact antiderivative `F(x) = int_0^x f` of a [`GridFn`] interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative {
    grid: GridSpec,
    cumulative: Vec<C>,
    cell_lo: Vec<C>,
    cell_hi: Vec<C>,
}

impl Antiderivative {
    fn new(f: &GridFn) -> Self {
        let grid = f.grid();
        let h = grid.step();
        let m = grid.subintervals();
        let mut cumulative = Vec::with_capacity(m + 1);
        cumulative.push(C::new(0.0, 0.0));
        for c in 0..m {
            let prev = cumulative[c];
            cumulative.push(prev + (f.right[c] + f.left[c + 1]) * (0.5 * h));
        }
        Self {
            grid,
            cumulative,
            cell_lo: f.right[..m].to_vec(),
            cell_hi: f.left[1..].to_vec(),
        }
    }

    /// `int_0^x f`, with `x` clamped to `[0, pi]`.
    pub fn eval(&self, x: f64) -> C {
        let m = self.grid.subintervals();
        if x <= 0.0 {
            return C::new(0.0, 0.0);
        }
        if x >= PI {
            return self.cumulative[m];
        }
        let (cell, dx) = self.grid.locate(x);
        let h = self.grid.step();
        let s = dx / h;
        // int_0^dx of linear interpolant lo + (hi - lo) t/h
        let part = self.cell_lo[cell] * dx + (self.cell_hi[cell] - self.cell_lo[cell]) * (0.5 * s * dx);
        self.cumulative[cell] + part
    }

    pub fn at_node(&self, k: usize) -> C {
        self.cumulative[k]
    }

    /// `int_lo^hi f`.
    pub fn between(&self, lo: f64, hi: f64) -> C {
        self.eval(hi) - self.eval(lo)
    }
}
