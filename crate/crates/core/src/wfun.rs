//! The densities `w0`, `w1` of the integral representations of the
//! characteristic functions, and the constant `omega`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::GridFn;
use crate::kernels;
use crate::potential::{DelayParameter, PotentialPair};

type C = Complex64;

/// `(omega, w0, w1)` parameterizing both characteristic functions.
#[derive(Debug, Clone, PartialEq)]
pub struct CharFnModel {
    pub omega: C,
    pub w0: GridFn,
    pub w1: GridFn,
    pub a: DelayParameter,
}

impl CharFnModel {
    /// Grid index of `pi - a`, where the densities may jump.
    pub fn junction_index(&self) -> usize {
        let g = self.w0.grid();
        g.subintervals() - g.node_at(self.a.value()).unwrap_or_else(|| self.a.snap(g))
    }
}

/// Builds `w0`, `w1` from the split potential.
///
/// With `F_j(x) = w_j(pi - x)`: on `(0, a)` both equal `q-(x)`; on `(a, pi)`
/// they are the midpoint terms `(q+((a+x)/2) -+ q+(pi+(a-x)/2))/4` plus half
/// the integral over `t in (0, x-a)` of `q-(t)` against differences of the
/// antiderivative of `q+`. The outer `t` integral is the trapezoid rule on
/// grid nodes.
pub fn build_w_functions(pot: &PotentialPair) -> CharFnModel {
    let grid = pot.grid();
    let m = grid.subintervals();
    let ka = pot.a_index();
    let a = pot.a();
    let h = grid.step();
    let zero = C::new(0.0, 0.0);
    let total_plus = pot.qplus_integral(PI);
    let qm = pot.qminus();

    let mut w0 = GridFn::zeros(grid);
    let mut w1 = GridFn::zeros(grid);

    // F_j on (a, pi], evaluated from the formulas
    let formula = |k: usize| -> (C, C) {
        let x = grid.x(k);
        let mid_lo = pot.qplus_at(0.5 * (a + x));
        let mid_hi = pot.qplus_at(PI + 0.5 * (a - x));
        let mut f0 = (mid_lo - mid_hi) * 0.25;
        let mut f1 = (mid_lo + mid_hi) * 0.25;
        let cells = k - ka; // t runs over nodes 0..=cells, x - a = cells * h
        if cells > 0 {
            let mut d0 = zero;
            let mut d1 = zero;
            for c in 0..cells {
                for (node, qv) in [(c, qm.right()[c]), (c + 1, qm.left()[c + 1])] {
                    if qv == zero {
                        continue;
                    }
                    let t = grid.x(node);
                    let p_lo = pot.qplus_integral(0.5 * (a + x + t));
                    let p_hi = pot.qplus_integral(PI + 0.5 * (a + t - x));
                    let wt = 0.5 * h;
                    d0 += qv * (p_hi - p_lo) * wt;
                    d1 += qv * (total_plus * 2.0 - p_lo - p_hi) * wt;
                }
            }
            f0 += d0 * 0.5;
            f1 += d1 * 0.5;
        }
        (f0, f1)
    };

    for k in 0..=m {
        // one-sided values of F_j at x_k: (from the left, from the right)
        let ((l0, l1), (r0, r1)) = if k < ka {
            let (l, r) = (qm.left()[k], qm.right()[k]);
            ((l, l), (r, r))
        } else if k == ka {
            let l = qm.left()[k];
            ((l, l), formula(k))
        } else {
            let v = formula(k);
            (v, v)
        };
        // reflection x -> pi - x swaps the sides
        let i = m - k;
        w0.set(i, r0, l0);
        w1.set(i, r1, l1);
    }

    CharFnModel {
        omega: kernels::omega(pot),
        w0,
        w1,
        a: pot.delay(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::potential::{random_smooth, Builtin};

    fn grid() -> GridSpec {
        GridSpec::new(512).unwrap()
    }

    fn max_abs(f: &GridFn) -> f64 {
        f.left()
            .iter()
            .chain(f.right())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_potential_gives_zero_model() {
        let model = build_w_functions(&Builtin::Zero.potential(grid()));
        assert_eq!(model.omega, C::new(0.0, 0.0));
        assert_eq!(max_abs(&model.w0), 0.0);
        assert_eq!(max_abs(&model.w1), 0.0);
    }

    #[test]
    fn step_qplus_model() {
        let g = grid();
        let model = build_w_functions(&Builtin::StepQplus.potential(g));
        assert!((model.omega.re - PI / 4.0).abs() < 1e-14);
        assert!(max_abs(&model.w0) < 1e-15);
        let mid = g.subintervals() / 2;
        for k in 0..=g.subintervals() {
            let expect_left = if k <= mid { 0.5 } else { 0.0 };
            let expect_right = if k < mid { 0.5 } else { 0.0 };
            assert!((model.w1.left()[k].re - expect_left).abs() < 1e-15, "k = {k}");
            assert!((model.w1.right()[k].re - expect_right).abs() < 1e-15, "k = {k}");
        }
    }

    #[test]
    fn step_qminus_model() {
        let g = grid();
        let model = build_w_functions(&Builtin::StepQminus.potential(g));
        assert_eq!(model.omega, C::new(0.0, 0.0));
        let mid = g.subintervals() / 2;
        for k in 0..=g.subintervals() {
            let inside_r = k >= mid;
            let inside_l = k > mid;
            for w in [&model.w0, &model.w1] {
                assert_eq!(w.right()[k].re, if inside_r { 1.0 } else { 0.0 }, "k = {k}");
                assert_eq!(w.left()[k].re, if inside_l { 1.0 } else { 0.0 }, "k = {k}");
            }
        }
    }

    #[test]
    fn densities_agree_beyond_pi_minus_a() {
        for (seed, frac) in [(1u64, 0.5), (2, 0.6), (3, 0.75)] {
            let g = grid();
            let a = DelayParameter::new(frac * PI).unwrap();
            let model = build_w_functions(&random_smooth(g, a, seed, 2.0));
            let j = model.junction_index();
            for k in j + 1..=g.subintervals() {
                assert!((model.w0.node(k) - model.w1.node(k)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn additive_in_qminus_when_qplus_vanishes() {
        let g = grid();
        let a = DelayParameter::new(0.6 * PI).unwrap();
        let p1 = random_smooth(g, a, 11, 1.0);
        let p2 = random_smooth(g, a, 12, 1.0);
        let zero = |_| C::new(0.0, 0.0);
        let only_minus = |p: &PotentialPair| {
            let qm = p.qminus().clone();
            PotentialPair::from_pieces(g, a, move |x| qm.eval_left(x), zero).unwrap()
        };
        let (m1, m2) = (only_minus(&p1), only_minus(&p2));
        let sum = PotentialPair::from_pieces(
            g,
            a,
            |x| m1.qminus().eval_left(x) + m2.qminus().eval_left(x),
            zero,
        )
        .unwrap();
        let (w_a, w_b, w_s) = (
            build_w_functions(&m1),
            build_w_functions(&m2),
            build_w_functions(&sum),
        );
        let diff0 = w_s.w0.zip_with(&w_a.w0.zip_with(&w_b.w0, |x, y| x + y), |x, y| x - y);
        let diff1 = w_s.w1.zip_with(&w_a.w1.zip_with(&w_b.w1, |x, y| x + y), |x, y| x - y);
        assert!(max_abs(&diff0) < 1e-13);
        assert!(max_abs(&diff1) < 1e-13);
    }
}
