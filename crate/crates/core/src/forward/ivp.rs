//! Method-of-steps oracle for `-y'' + q+(x) y(x-a) + q-(x) y(0) = lambda y`
//! with `y(0) = 1`, `y'(0) = 0` and the constant initial function `y = y(0)`
//! on `(-a, 0)`.
//!
//! Since `a >= pi/2`, the delayed argument `x - a` of the second step always
//! falls inside the first step `(0, a)`. The first-step solution is therefore
//! re-integrated alongside the second step on the shifted variable
//! `s = x - a`, which gives the delayed value at every RK4 stage without
//! interpolation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::KahanSum;
use crate::potential::PotentialPair;

type C = Complex64;

const TOLERANCE: f64 = 1e-12;
const MAX_STEPS_PER_CELL: usize = 4096;

#[derive(Debug, Clone)]
pub struct IvpSolution {
    /// `y(pi)`, equal to `Delta_0(lambda)`.
    pub y_end: C,
    /// `y'(pi)`, equal to `Delta_1(lambda)`.
    pub dy_end: C,
    /// `y` at the grid nodes, from the finest pass.
    pub trajectory: Option<Vec<C>>,
}

struct Pass {
    y_end: C,
    dy_end: C,
    trajectory: Vec<C>,
}

fn rk4_pass(pot: &PotentialPair, lambda: C, per_cell: usize) -> Pass {
    let grid = pot.grid();
    let ka = pot.a_index();
    let m = grid.subintervals();
    let h = grid.step();
    let step = h / per_cell as f64;
    let qm = pot.qminus();
    let qp = pot.qplus();
    let mut trajectory = Vec::with_capacity(m + 1);

    // first step on (0, a): y'' = q-(x) - lambda y
    let first = |cell: usize, dx: f64, y: C| qm.eval_in_cell(cell, dx) - lambda * y;
    let (mut ys, mut dys) = (KahanSum::new(C::new(1.0, 0.0)), KahanSum::new(C::new(0.0, 0.0)));
    trajectory.push(ys.value());
    for cell in 0..ka {
        for i in 0..per_cell {
            let (y, dy) = (ys.value(), dys.value());
            let t0 = i as f64 * step;
            let tm = t0 + 0.5 * step;
            let t1 = t0 + step;
            let k1y = dy;
            let k1d = first(cell, t0, y);
            let k2y = dy + k1d * (0.5 * step);
            let k2d = first(cell, tm, y + k1y * (0.5 * step));
            let k3y = dy + k2d * (0.5 * step);
            let k3d = first(cell, tm, y + k2y * (0.5 * step));
            let k4y = dy + k3d * step;
            let k4d = first(cell, t1, y + k3y * step);
            ys.add((k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (step / 6.0));
            dys.add((k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (step / 6.0));
        }
        trajectory.push(ys.value());
    }

    // second step on (a, pi) coupled with the first-step solution u(x - a)
    let (mut us, mut dus) = (KahanSum::new(C::new(1.0, 0.0)), KahanSum::new(C::new(0.0, 0.0)));
    let (mut vs, mut dvs) = (ys, dys);
    let rhs = |cell: usize, dx: f64, u: C, v: C| -> (C, C) {
        (
            qm.eval_in_cell(cell, dx) - lambda * u,
            qp.eval_in_cell(ka + cell, dx) * u - lambda * v,
        )
    };
    for cell in 0..m - ka {
        for i in 0..per_cell {
            let (u, du, v, dv) = (us.value(), dus.value(), vs.value(), dvs.value());
            let t0 = i as f64 * step;
            let tm = t0 + 0.5 * step;
            let t1 = t0 + step;
            let hs = 0.5 * step;
            let (k1u, k1v) = (du, dv);
            let (k1du, k1dv) = rhs(cell, t0, u, v);
            let (k2u, k2v) = (du + k1du * hs, dv + k1dv * hs);
            let (k2du, k2dv) = rhs(cell, tm, u + k1u * hs, v + k1v * hs);
            let (k3u, k3v) = (du + k2du * hs, dv + k2dv * hs);
            let (k3du, k3dv) = rhs(cell, tm, u + k2u * hs, v + k2v * hs);
            let (k4u, k4v) = (du + k3du * step, dv + k3dv * step);
            let (k4du, k4dv) = rhs(cell, t1, u + k3u * step, v + k3v * step);
            let w = step / 6.0;
            us.add((k1u + k2u * 2.0 + k3u * 2.0 + k4u) * w);
            dus.add((k1du + k2du * 2.0 + k3du * 2.0 + k4du) * w);
            vs.add((k1v + k2v * 2.0 + k3v * 2.0 + k4v) * w);
            dvs.add((k1dv + k2dv * 2.0 + k3dv * 2.0 + k4dv) * w);
        }
        trajectory.push(vs.value());
    }
    Pass {
        y_end: vs.value(),
        dy_end: dvs.value(),
        trajectory,
    }
}

fn rel_diff(a: C, b: C) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

/// Integrates the initial value problem by fixed-step RK4 on the grid cells,
/// halving the step until two successive passes agree to `1e-12` (relative to
/// `max(1, |y|)`); the last two passes are then combined by Richardson
/// extrapolation.
pub fn solve_ivp_method_of_steps(pot: &PotentialPair, lambda: C) -> Result<IvpSolution> {
    let mut per_cell = 1;
    let mut coarse = rk4_pass(pot, lambda, per_cell);
    loop {
        per_cell *= 2;
        if per_cell > MAX_STEPS_PER_CELL {
            let last = rk4_pass(pot, lambda, per_cell / 2);
            return Err(Error::StepSizeFailure(
                rel_diff(last.y_end, coarse.y_end).max(rel_diff(last.dy_end, coarse.dy_end)),
            ));
        }
        let fine = rk4_pass(pot, lambda, per_cell);
        let diff = rel_diff(fine.y_end, coarse.y_end).max(rel_diff(fine.dy_end, coarse.dy_end));
        if diff < TOLERANCE {
            let extrapolate = |f: C, c: C| (f * 16.0 - c) / 15.0;
            return Ok(IvpSolution {
                y_end: extrapolate(fine.y_end, coarse.y_end),
                dy_end: extrapolate(fine.dy_end, coarse.dy_end),
                trajectory: Some(fine.trajectory),
            });
        }
        coarse = fine;
    }
}
