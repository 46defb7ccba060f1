//! Backward trapezoid-Nystrom sweep for `u(x) + int_x^b K(x,t) u(t) dt = f(x)`.

use num_complex::Complex64;

type C = Complex64;

#[derive(Debug, Clone)]
pub struct VolterraSolution {
    pub values: Vec<C>,
    /// Max-norm residual of the discretized equations.
    pub residual: f64,
}

/// Trapezoid weight of node `i` in `int_{x_k}^{x_last}` with uniform step `h`.
fn weight(k: usize, i: usize, last: usize, h: f64) -> f64 {
    if k == last {
        0.0
    } else if i == k || i == last {
        0.5 * h
    } else {
        h
    }
}

/// Solves the discretized equation on uniformly spaced nodes `xs` by backward
/// substitution from the right end.
///
/// # Panics
/// If a diagonal factor `1 + h K(x_k, x_k) / 2` vanishes, which cannot happen
/// for bounded kernels once `h` is small enough.
pub fn solve_triangular_volterra<K>(xs: &[f64], kernel: K, rhs: &[C]) -> VolterraSolution
where
    K: Fn(f64, f64) -> C,
{
    let n = xs.len();
    assert_eq!(n, rhs.len(), "rhs and nodes differ in length");
    if n == 0 {
        return VolterraSolution {
            values: vec![],
            residual: 0.0,
        };
    }
    let last = n - 1;
    let h = if n > 1 { xs[1] - xs[0] } else { 0.0 };
    let mut u = vec![C::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = C::new(0.0, 0.0);
        for i in k + 1..n {
            acc += kernel(xs[k], xs[i]) * u[i] * weight(k, i, last, h);
        }
        let diag = C::new(1.0, 0.0) + kernel(xs[k], xs[k]) * weight(k, k, last, h);
        assert!(diag.norm() > 1e-12, "singular diagonal in Volterra sweep");
        u[k] = (rhs[k] - acc) / diag;
    }
    let residual = discrete_residual(xs, &kernel, rhs, &u);
    VolterraSolution { values: u, residual }
}

/// Max-norm residual of the trapezoid-discretized equation for candidate `u`.
pub fn discrete_residual<K>(xs: &[f64], kernel: &K, rhs: &[C], u: &[C]) -> f64
where
    K: Fn(f64, f64) -> C,
{
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    let last = n - 1;
    let h = if n > 1 { xs[1] - xs[0] } else { 0.0 };
    (0..n)
        .map(|k| {
            let mut lhs = u[k];
            for i in k..n {
                lhs += kernel(xs[k], xs[i]) * u[i] * weight(k, i, last, h);
            }
            (lhs - rhs[k]).norm()
        })
        .fold(0.0, f64::max)
}

/// Dense matrix of the same discretization, row `k` acting on all unknowns.
pub fn dense_system<K>(xs: &[f64], kernel: K) -> Vec<Vec<C>>
where
    K: Fn(f64, f64) -> C,
{
    let n = xs.len();
    let last = n.saturating_sub(1);
    let h = if n > 1 { xs[1] - xs[0] } else { 0.0 };
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let id = if i == k { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) };
                    if i < k {
                        id
                    } else {
                        id + kernel(xs[k], xs[i]) * weight(k, i, last, h)
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn nodes(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn zero_kernel_returns_rhs() {
        let xs = nodes(PI / 2.0, PI, 33);
        let rhs: Vec<C> = xs.iter().map(|&x| C::new(x.sin(), x)).collect();
        let sol = solve_triangular_volterra(&xs, |_, _| C::new(0.0, 0.0), &rhs);
        assert_eq!(sol.values, rhs);
        assert_eq!(sol.residual, 0.0);
    }

    #[test]
    fn unit_kernel_recovers_constant() {
        let xs = nodes(PI / 2.0, PI, 65);
        let rhs: Vec<C> = xs.iter().map(|&x| C::new(1.0 + (PI - x), 0.0)).collect();
        let sol = solve_triangular_volterra(&xs, |_, _| C::new(1.0, 0.0), &rhs);
        for v in &sol.values {
            assert!((v - C::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
