//! Fourier coefficients of the kernel functions and their synthesis.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::grid::{GridFn, GridSpec};
use crate::inverse::product::ProductCharFn;
use crate::potential::DelayParameter;

type C = Complex64;

/// Sine coefficients `a_n` of `w0` and cosine coefficients `b_n` of `w1`,
/// indexed by `n = 0..=n_max` (`a_0` is always zero).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub a: Vec<C>,
    pub b: Vec<C>,
}

impl FourierCoefficients {
    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `a_n = n (Delta_0(n^2) - (-1)^n) + omega (-1)^n sin(n a)` and
/// `b_n = Delta_1(n^2) - omega (-1)^n cos(n a)`.
pub fn fourier_coefficients(
    prod0: &ProductCharFn,
    prod1: &ProductCharFn,
    omega: C,
    a: DelayParameter,
    n_max: usize,
) -> FourierCoefficients {
    let a = a.value();
    let pairs: Vec<(C, C)> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let lam = C::new(nf * nf, 0.0);
            let s = parity(n);
            let an = if n == 0 {
                C::new(0.0, 0.0)
            } else {
                (prod0.eval(lam) - s) * nf + omega * (s * (nf * a).sin())
            };
            let bn = prod1.eval(lam) - omega * (s * (nf * a).cos());
            (an, bn)
        })
        .collect();
    let (a, b) = pairs.into_iter().unzip();
    FourierCoefficients { a, b }
}

/// `w0 = (2/pi) sum a_n sin(n x)`, `w1 = b_0/pi + (2/pi) sum b_n cos(n x)`
/// sampled at the grid nodes. With `fejer` the partial sums are replaced by
/// their Cesaro means.
pub fn synthesize_w(coeffs: &FourierCoefficients, grid: GridSpec, fejer: bool) -> (GridFn, GridFn) {
    let n_max = coeffs.n_max();
    let weight = |n: usize| {
        if fejer {
            1.0 - n as f64 / (n_max + 1) as f64
        } else {
            1.0
        }
    };
    let sums: Vec<(C, C)> = (0..grid.nodes())
        .into_par_iter()
        .map(|k| {
            let x = grid.x(k);
            let mut w0 = C::new(0.0, 0.0);
            let mut w1 = coeffs.b[0] / PI;
            for n in 1..=n_max {
                let (s, c) = (n as f64 * x).sin_cos();
                let f = 2.0 / PI * weight(n);
                w0 += coeffs.a[n] * (f * s);
                w1 += coeffs.b[n] * (f * c);
            }
            (w0, w1)
        })
        .collect();
    let (w0, w1): (Vec<C>, Vec<C>) = sums.into_iter().unzip();
    (
        GridFn::from_nodes(grid, w0).expect("node count matches grid"),
        GridFn::from_nodes(grid, w1).expect("node count matches grid"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn zero_coefficients_give_zero_functions() {
        let coeffs = FourierCoefficients {
            a: vec![c(0.0); 9],
            b: vec![c(0.0); 9],
        };
        let (w0, w1) = synthesize_w(&coeffs, GridSpec::new(32).unwrap(), false);
        assert!(w0.l2_norm() == 0.0 && w1.l2_norm() == 0.0);
    }

    #[test]
    fn half_indicator_cosine_series() {
        // b_0 = pi/4, b_n = sin(n pi/2)/(2n): w1 = 1/2 on (0, pi/2), 0 beyond
        let n_max = 2000;
        let mut b = vec![c(PI / 4.0)];
        b.extend((1..=n_max).map(|n| c((n as f64 * PI / 2.0).sin() / (2.0 * n as f64))));
        let coeffs = FourierCoefficients {
            a: vec![c(0.0); n_max + 1],
            b,
        };
        let grid = GridSpec::new(64).unwrap();
        let (_, w1) = synthesize_w(&coeffs, grid, true);
        for k in [4usize, 10, 20, 44, 54, 60] {
            let expect = if grid.x(k) < PI / 2.0 { 0.5 } else { 0.0 };
            assert!((w1.node(k) - expect).norm() < 5e-3, "k={k}: {}", w1.node(k));
        }
    }

    #[test]
    fn fejer_weights_damp_the_top_mode() {
        let mut a = vec![c(0.0); 5];
        a[4] = c(1.0);
        let coeffs = FourierCoefficients { a, b: vec![c(0.0); 5] };
        let grid = GridSpec::new(16).unwrap();
        let (raw, _) = synthesize_w(&coeffs, grid, false);
        let (smooth, _) = synthesize_w(&coeffs, grid, true);
        let k = 1;
        assert!((smooth.node(k) - raw.node(k) * 0.2).norm() < 1e-14);
    }
}
