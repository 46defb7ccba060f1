//! Evaluation of the characteristic functions from their integral
//! representations.
//!
//! The densities are piecewise linear, so each cell integral against
//! `cos(rho x)` or `sin(rho x)/rho` is done in closed form. Every term is
//! written through `cos`, `sinc` and `rho^2`, which keeps the result an even
//! function of `rho` bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::KahanSum;
use crate::numerics::special::{sinc, sinc_curvature, sinc_slope};
use crate::wfun::CharFnModel;

type C = Complex64;

const SERIES_BELOW: f64 = 0.5;

/// Boundary condition at `pi`: `y(pi) = 0` or `y'(pi) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    Dirichlet,
    Neumann,
}

impl Boundary {
    pub const BOTH: [Boundary; 2] = [Boundary::Dirichlet, Boundary::Neumann];

    /// The index `j` of the condition `y^(j)(pi) = 0`.
    pub fn index(self) -> u8 {
        match self {
            Boundary::Dirichlet => 0,
            Boundary::Neumann => 1,
        }
    }

    pub fn from_index(j: u8) -> Option<Self> {
        match j {
            0 => Some(Boundary::Dirichlet),
            1 => Some(Boundary::Neumann),
            _ => None,
        }
    }

    /// Unperturbed square root `n + (1-j)/2`.
    pub fn base_root(self, n: usize) -> f64 {
        match self {
            Boundary::Dirichlet => n as f64 + 0.5,
            Boundary::Neumann => n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    centre: f64,
    mean: [C; 2],
    slope: [C; 2],
}

/// `sin z / z`, `cos z` and optionally `(sin z - z cos z)/z^3`.
fn trig(z: C, want_slope: bool) -> (C, C, C) {
    if z.norm() < SERIES_BELOW {
        let h = if want_slope { sinc_slope(z) } else { C::new(0.0, 0.0) };
        (sinc(z), z.cos(), h)
    } else {
        let (s, c) = (z.sin(), z.cos());
        let h = if want_slope {
            (s - z * c) / (z * z * z)
        } else {
            C::new(0.0, 0.0)
        };
        (s / z, c, h)
    }
}

/// Evaluator for `Delta_0`, `Delta_1` built from a [`CharFnModel`].
#[derive(Debug, Clone)]
pub struct CharFnEvaluator {
    model: CharFnModel,
    half_width: f64,
    tail: f64,
    cells: Vec<Cell>,
}

impl CharFnEvaluator {
    pub fn new(model: CharFnModel) -> Self {
        let grid = model.w0.grid();
        let h = grid.step();
        let d = 0.5 * h;
        let cells = (0..grid.subintervals())
            .map(|c| {
                let pick = |w: &crate::grid::GridFn| (w.right()[c], w.left()[c + 1]);
                let (l0, r0) = pick(&model.w0);
                let (l1, r1) = pick(&model.w1);
                Cell {
                    centre: grid.x(c) + d,
                    mean: [(l0 + r0) * 0.5, (l1 + r1) * 0.5],
                    slope: [(r0 - l0) / h, (r1 - l1) / h],
                }
            })
            .collect();
        let tail = PI - model.a.value();
        Self {
            model,
            half_width: d,
            tail,
            cells,
        }
    }

    pub fn model(&self) -> &CharFnModel {
        &self.model
    }

    pub fn omega(&self) -> C {
        self.model.omega
    }

    /// `Delta_j(lambda)`.
    pub fn eval(&self, j: Boundary, lambda: C) -> C {
        self.eval_rho(j, lambda.sqrt())
    }

    /// `Delta_j(rho^2)`.
    pub fn eval_rho(&self, j: Boundary, rho: C) -> C {
        self.evaluate(j, rho, false).0
    }

    /// `(Delta_j(rho^2), dDelta_j/dlambda)` at `lambda = rho^2`.
    pub fn eval_with_derivative(&self, j: Boundary, rho: C) -> (C, C) {
        self.evaluate(j, rho, true)
    }

    fn evaluate(&self, j: Boundary, rho: C, deriv: bool) -> (C, C) {
        let lam = rho * rho;
        let d = self.half_width;
        let b = self.tail;
        let omega = self.model.omega;
        let (sinc_d, _, h_d) = trig(rho * d, true);
        let k_d = if deriv { sinc_curvature(rho * d) } else { C::new(0.0, 0.0) };
        let (sinc_pi, cos_pi, h_pi) = trig(rho * PI, deriv);
        let (sinc_b, cos_b, h_b) = trig(rho * b, deriv);
        let idx = j.index() as usize;

        let (val0, der0) = match j {
            Boundary::Dirichlet => (
                cos_pi + omega * b * sinc_b,
                -sinc_pi * (PI * PI / 2.0) - omega * (b * b * b / 2.0) * h_b,
            ),
            Boundary::Neumann => (
                -lam * sinc_pi * PI + omega * cos_b,
                -sinc_pi * PI + lam * h_pi * (PI * PI * PI / 2.0) - omega * sinc_b * (b * b / 2.0),
            ),
        };

        let mut val = KahanSum::new(val0);
        let mut der = KahanSum::new(der0);
        let d2 = d * d;
        let d3 = d2 * d;
        for cell in &self.cells {
            let c = cell.centre;
            let (sinc_c, cos_c, h_c) = trig(rho * c, deriv);
            let m0 = cell.mean[idx];
            let m1 = cell.slope[idx];
            match j {
                Boundary::Dirichlet => {
                    val.add(m0 * (2.0 * c * d) * sinc_c * sinc_d + m1 * (2.0 * d3) * cos_c * h_d);
                    if deriv {
                        der.add(
                            m0 * (2.0 * c * d)
                                * (-(h_c * sinc_d) * (c * c / 2.0) - sinc_c * h_d * (d2 / 2.0))
                                + m1 * (2.0 * d3)
                                    * (-(sinc_c * h_d) * (c * c / 2.0) - cos_c * k_d * (d2 / 2.0)),
                        );
                    }
                }
                Boundary::Neumann => {
                    val.add(m0 * (2.0 * d) * cos_c * sinc_d - m1 * (2.0 * c * d3) * lam * sinc_c * h_d);
                    if deriv {
                        der.add(
                            m0 * (2.0 * d)
                                * (-(sinc_c * sinc_d) * (c * c / 2.0) - cos_c * h_d * (d2 / 2.0))
                                - m1 * (2.0 * c * d3)
                                    * (sinc_c * h_d
                                        + lam * (-(h_c * h_d) * (c * c / 2.0) - sinc_c * k_d * (d2 / 2.0))),
                        );
                    }
                }
            }
        }
        (val.value(), der.value())
    }
}

/// `Delta_j(lambda)` for a model; builds a throwaway evaluator.
pub fn eval_char_fn(j: Boundary, lambda: C, model: &CharFnModel) -> C {
    CharFnEvaluator::new(model.clone()).eval(j, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::potential::{random_smooth, Builtin, DelayParameter};
    use crate::wfun::build_w_functions;

    fn evaluator(b: Builtin) -> CharFnEvaluator {
        CharFnEvaluator::new(build_w_functions(&b.potential(GridSpec::new(512).unwrap())))
    }

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn zero_potential_closed_forms() {
        let ev = evaluator(Builtin::Zero);
        assert!((ev.eval(Boundary::Dirichlet, c(1.0)) - c(-1.0)).norm() < 1e-15);
        assert!(ev.eval(Boundary::Neumann, c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn step_potentials_closed_forms() {
        let ev = evaluator(Builtin::StepQminus);
        assert!(ev.eval(Boundary::Dirichlet, c(1.0)).norm() < 1e-13);
        assert!((ev.eval(Boundary::Neumann, c(1.0)) - c(-1.0)).norm() < 1e-13);

        let ev = evaluator(Builtin::StepQplus);
        assert!((ev.eval(Boundary::Dirichlet, c(1.0)) - c(PI / 4.0 - 1.0)).norm() < 1e-13);
        assert!((ev.eval(Boundary::Neumann, c(1.0)) - c(0.5)).norm() < 1e-13);
    }

    #[test]
    fn step_qplus_matches_closed_form_off_axis() {
        // Delta_1 = -rho sin(rho pi) + (pi/4) cos(rho pi/2) + sin(rho pi/2)/(2 rho)
        let ev = evaluator(Builtin::StepQplus);
        for &lam in &[C::new(3.7, 2.0), C::new(-12.0, 0.5), C::new(40.0, -8.0)] {
            let rho = lam.sqrt();
            let exact = -rho * (rho * PI).sin()
                + (rho * PI / 2.0).cos() * (PI / 4.0)
                + (rho * PI / 2.0).sin() / (rho * 2.0);
            let got = ev.eval(Boundary::Neumann, lam);
            assert!((got - exact).norm() < 1e-11 * (1.0 + exact.norm()), "{lam}");
        }
    }

    #[test]
    fn evaluation_is_even_in_rho() {
        let g = GridSpec::new(256).unwrap();
        let a = DelayParameter::new(0.6 * PI).unwrap();
        let ev = CharFnEvaluator::new(build_w_functions(&random_smooth(g, a, 5, 2.0)));
        for &rho in &[C::new(0.3, 0.1), C::new(4.2, -1.3), C::new(1e-6, 2e-6), C::new(17.0, 0.0)] {
            for j in Boundary::BOTH {
                assert_eq!(ev.eval_rho(j, rho), ev.eval_rho(j, -rho));
            }
        }
    }

    #[test]
    fn lambda_derivative_matches_difference_quotient() {
        let g = GridSpec::new(128).unwrap();
        let a = DelayParameter::new(0.75 * PI).unwrap();
        let ev = CharFnEvaluator::new(build_w_functions(&random_smooth(g, a, 9, 1.5)));
        for &lam in &[C::new(0.0, 0.0), C::new(0.1, 0.05), C::new(7.3, 1.1), C::new(-5.0, 3.0)] {
            for j in Boundary::BOTH {
                let (_, d) = ev.eval_with_derivative(j, lam.sqrt());
                let e = 1e-5;
                let fd = (ev.eval(j, lam + e) - ev.eval(j, lam - e)) / (2.0 * e);
                assert!((d - fd).norm() < 1e-6 * (1.0 + d.norm()), "j={j:?} lam={lam}: {d} vs {fd}");
            }
        }
    }
}
