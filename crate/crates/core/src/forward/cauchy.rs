//! Direct quadrature of the Cauchy-problem solution `z(pi, lambda; q-)` and of
//! `C^(j)(pi, lambda)` from the transformation-operator kernels.
//!
//! These use plain trapezoid sums in `t` and serve as a second route to
//! `Delta_j = C^(j)(pi) + z^(j)(pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::forward::charfn::Boundary;
use crate::kernels::{kernel_kj, omega};
use crate::numerics::special::sinc;
use crate::potential::PotentialPair;

type C = Complex64;

/// Free-term densities `(E0, E1)` at node `k`, without the `r(t)` part.
fn inner_terms(pot: &PotentialPair, k: usize) -> (C, C) {
    let grid = pot.grid();
    let a = pot.a();
    let ka = pot.a_index();
    let zero = C::new(0.0, 0.0);
    if k <= ka {
        return (zero, zero);
    }
    let t = grid.x(k);
    let h = grid.step();
    let r = pot.qminus();
    let total = pot.qplus_integral(PI);
    let (mut d0, mut d1) = (zero, zero);
    for c in 0..k - ka {
        for (node, rv) in [(c, r.right()[c]), (c + 1, r.left()[c + 1])] {
            let tau = grid.x(node);
            let lo = pot.qplus_integral(0.5 * (a + t + tau));
            let hi = pot.qplus_integral(PI + 0.5 * (a + tau - t));
            d0 += rv * (hi - lo) * (0.5 * h);
            d1 += rv * (total * 2.0 - lo - hi) * (0.5 * h);
        }
    }
    (d0 * 0.5, d1 * 0.5)
}

/// `(z(pi, lambda; q-), z'(pi, lambda; q-))`.
pub fn eval_cauchy_z(lambda: C, pot: &PotentialPair) -> (C, C) {
    let grid = pot.grid();
    let h = grid.step();
    let m = grid.subintervals();
    let rho = lambda.sqrt();
    let r = pot.qminus();
    let inner: Vec<(C, C)> = (0..=m).map(|k| inner_terms(pot, k)).collect();
    let mut z = C::new(0.0, 0.0);
    let mut dz = C::new(0.0, 0.0);
    for c in 0..m {
        for (node, rv) in [(c, r.right()[c]), (c + 1, r.left()[c + 1])] {
            let s = PI - grid.x(node);
            let (d0, d1) = inner[node];
            z += (rv + d0) * sinc(rho * s) * s * (0.5 * h);
            dz += (rv + d1) * (rho * s).cos() * (0.5 * h);
        }
    }
    (z, dz)
}

/// `C(pi, lambda)` (`j = 0`) or `C'(pi, lambda)` (`j = 1`) from the kernel
/// representations, trapezoid in `t` over `(a, pi)`.
pub fn eval_c_pi(j: Boundary, lambda: C, pot: &PotentialPair) -> C {
    let grid = pot.grid();
    let h = grid.step();
    let m = grid.subintervals();
    let ka = pot.a_index();
    let a = pot.a();
    let rho = lambda.sqrt();
    let om = omega(pot);
    let b = PI - a;
    let jj = j.index();
    let mut acc = match j {
        Boundary::Dirichlet => (rho * PI).cos() + om * b * sinc(rho * b),
        Boundary::Neumann => -lambda * sinc(rho * PI) * PI + om * (rho * b).cos(),
    };
    for k in ka..=m {
        let t = grid.x(k);
        let wt = if k == ka || k == m { 0.5 * h } else { h };
        let kern = kernel_kj(jj, PI, t, pot).expect("t lies in [a, pi]");
        let s = PI - t;
        let basis = match j {
            Boundary::Dirichlet => sinc(rho * s) * s,
            Boundary::Neumann => (rho * s).cos(),
        };
        acc += kern * basis * wt;
    }
    acc
}
