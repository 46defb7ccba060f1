//! Reading off `q-` and recovering `q+` from the integral equation
//! `q+(x) + int_x^pi Q(x,t) q+(t) dt = W(x)` on `(a, pi)`.

use num_complex::Complex64;

use crate::grid::{Antiderivative, GridFn, GridSpec};
use crate::numerics::volterra::solve_triangular_volterra;
use crate::potential::DelayParameter;

type C = Complex64;

/// `q-(x) = (w0(pi-x) + w1(pi-x))/2` on `(0, a)`, zero beyond, together with
/// the `L2(0, a)` norm of `w0(pi-.) - w1(pi-.)` (zero for exact data). The
/// values at `0` and `a` are extrapolated from the interior.
pub fn extract_qminus(w0: &GridFn, w1: &GridFn, a: DelayParameter) -> (GridFn, f64) {
    let grid = w0.grid();
    extract_qminus_at(w0, w1, a.snap(grid))
}

pub fn extract_qminus_at(w0: &GridFn, w1: &GridFn, a_index: usize) -> (GridFn, f64) {
    let grid = w0.grid();
    let m = grid.subintervals();
    let zero = C::new(0.0, 0.0);
    let mut qm = GridFn::zeros(grid);
    let mut diff = GridFn::zeros(grid);
    for k in 0..=a_index {
        let r = m - k;
        let v = (w0.node(r) + w1.node(r)) * 0.5;
        let d = w0.node(r) - w1.node(r);
        if k < a_index {
            qm.set(k, v, v);
            diff.set(k, d, d);
        } else {
            qm.set(k, v, zero);
            diff.set(k, d, zero);
        }
    }
    let consistency = diff.l2_norm_over(0, a_index);
    // x = 0 and x = a read w at pi and pi - a, where the sine series vanishes
    // and w jumps respectively; continue the interior values instead
    if a_index >= 3 {
        let v0 = qm.node(1) * 2.0 - qm.node(2);
        qm.set(0, v0, v0);
        let va = qm.right()[a_index - 1] * 2.0 - qm.right()[a_index - 2];
        qm.set(a_index, va, zero);
    }
    (qm, consistency)
}

/// Right-hand side and kernel of the equation for `q+`.
#[derive(Debug, Clone)]
pub struct VolterraSystem {
    grid: GridSpec,
    a_index: usize,
    rhs: Vec<C>,
    qminus_anti: Antiderivative,
}

impl VolterraSystem {
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn a_index(&self) -> usize {
        self.a_index
    }

    pub fn a(&self) -> f64 {
        self.grid.x(self.a_index)
    }

    /// Abscissae `x_k`, `k = a_index..=m`.
    pub fn nodes(&self) -> Vec<f64> {
        (self.a_index..=self.grid.subintervals())
            .map(|k| self.grid.x(k))
            .collect()
    }

    /// `W(x_k)` for the nodes returned by [`Self::nodes`].
    pub fn rhs(&self) -> &[C] {
        &self.rhs
    }

    /// `Q(x, t)` for `a <= x <= t <= pi`.
    pub fn kernel(&self, x: f64, t: f64) -> C {
        let a = self.a();
        let s = if t > 2.0 * x - a { 2.0 * (x - a) } else { 2.0 * (t - x) };
        self.qminus_anti.eval(s) * 2.0
    }
}

/// `W(x) = 2(w1 + w0)(pi + a - 2x)` left of `(a + pi)/2` and
/// `2(w1 - w0)(2x - pi - a)` right of it; at the midpoint the two branches
/// are averaged. The end values are extrapolated from the interior.
pub fn assemble_volterra(w0: &GridFn, w1: &GridFn, qminus: &GridFn, a: DelayParameter) -> VolterraSystem {
    assemble_volterra_at(w0, w1, qminus, a.snap(w0.grid()))
}

pub fn assemble_volterra_at(w0: &GridFn, w1: &GridFn, qminus: &GridFn, a_index: usize) -> VolterraSystem {
    let grid = w0.grid();
    let m = grid.subintervals();
    let mut rhs: Vec<C> = (a_index..=m)
        .map(|k| {
            let (two_k, pivot) = (2 * k, m + a_index);
            if two_k < pivot {
                let r = pivot - two_k;
                (w1.node(r) + w0.node(r)) * 2.0
            } else if two_k > pivot {
                let r = two_k - pivot;
                (w1.node(r) - w0.node(r)) * 2.0
            } else {
                w1.node(0) * 2.0
            }
        })
        .collect();
    // both ends read w at pi - a, where it jumps; use the one-sided trend
    let last = rhs.len() - 1;
    if last >= 4 {
        rhs[0] = rhs[1] * 2.0 - rhs[2];
        rhs[last] = rhs[last - 1] * 2.0 - rhs[last - 2];
    }
    VolterraSystem {
        grid,
        a_index,
        rhs,
        qminus_anti: qminus.antiderivative(),
    }
}

/// `q+` on the whole grid (zero on `(0, a)`, right limit at `a`) and the
/// residual of the discretized equation.
pub fn solve_volterra(system: &VolterraSystem) -> (GridFn, f64) {
    let xs = system.nodes();
    let sol = solve_triangular_volterra(&xs, |x, t| system.kernel(x, t), system.rhs());
    let grid = system.grid;
    let ka = system.a_index;
    let mut qp = GridFn::zeros(grid);
    for (i, &v) in sol.values.iter().enumerate() {
        let k = ka + i;
        if k == ka {
            qp.set(k, C::new(0.0, 0.0), v);
        } else {
            qp.set(k, v, v);
        }
    }
    (qp, sol.residual)
}
