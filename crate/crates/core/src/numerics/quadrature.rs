use num_complex::Complex64;

use crate::grid::{GridFn, GridSpec};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    Trapezoid,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub grid: GridSpec,
}

impl QuadratureRule {
    pub fn trapezoid(grid: GridSpec) -> Self {
        Self {
            kind: QuadratureKind::Trapezoid,
            grid,
        }
    }

    pub fn simpson(grid: GridSpec) -> Self {
        Self {
            kind: QuadratureKind::Simpson,
            grid,
        }
    }

    /// Node weights for the node-aligned interval `[x_lo, x_hi]`.
    ///
    /// Simpson is applied to pairs of cells; an odd trailing cell falls back
    /// to the trapezoid rule.
    pub fn weights(&self, lo: usize, hi: usize) -> Vec<f64> {
        let h = self.grid.step();
        let mut w = vec![0.0; hi.saturating_sub(lo) + 1];
        if hi <= lo {
            return w;
        }
        let cells = hi - lo;
        match self.kind {
            QuadratureKind::Trapezoid => {
                for c in 0..cells {
                    w[c] += 0.5 * h;
                    w[c + 1] += 0.5 * h;
                }
            }
            QuadratureKind::Simpson => {
                let pairs = cells / 2;
                for p in 0..pairs {
                    w[2 * p] += h / 3.0;
                    w[2 * p + 1] += 4.0 * h / 3.0;
                    w[2 * p + 2] += h / 3.0;
                }
                if cells % 2 == 1 {
                    w[cells - 1] += 0.5 * h;
                    w[cells] += 0.5 * h;
                }
            }
        }
        w
    }
}

/// Integral of `f` over `[lo, hi]`; non-node endpoints are handled by exact
/// integration of the linear interpolant on the partial cells.
pub fn integrate(f: &GridFn, lo: f64, hi: f64, rule: &QuadratureRule) -> C {
    if hi <= lo {
        return C::new(0.0, 0.0);
    }
    let anti = f.antiderivative();
    match rule.kind {
        QuadratureKind::Trapezoid => anti.between(lo, hi),
        QuadratureKind::Simpson => {
            let g = rule.grid;
            let h = g.step();
            let first = g.node_at(lo).unwrap_or_else(|| ((lo / h).ceil() as usize).min(g.subintervals()));
            let last = g.node_at(hi).unwrap_or_else(|| (hi / h).floor() as usize);
            if last <= first {
                return anti.between(lo, hi);
            }
            let w = rule.weights(first, last);
            let cells = last - first;
            let mut inner = C::new(0.0, 0.0);
            for (i, wi) in w.iter().enumerate() {
                let k = first + i;
                // end nodes of the aligned block see only the inner side
                let v = if i == 0 {
                    f.right()[k]
                } else if i == cells {
                    f.left()[k]
                } else {
                    f.node(k)
                };
                inner += v * *wi;
            }
            anti.between(lo, g.x(first)) + inner + anti.between(g.x(last), hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_integrates_to_length() {
        let g = GridSpec::new(64).unwrap();
        let one = GridFn::from_fn(g, |_| C::new(1.0, 0.0));
        for rule in [QuadratureRule::trapezoid(g), QuadratureRule::simpson(g)] {
            assert!((integrate(&one, 0.0, PI, &rule).re - PI).abs() < 1e-13);
            assert_eq!(integrate(&one, 1.0, 1.0, &rule), C::new(0.0, 0.0));
            let w: f64 = rule.weights(3, 40).iter().sum();
            assert!((w - 37.0 * g.step()).abs() < 1e-13);
        }
    }

    #[test]
    fn sine_integral_within_trapezoid_bound() {
        let g = GridSpec::new(512).unwrap();
        let f = GridFn::from_fn(g, |x| C::new(x.sin(), 0.0));
        let v = integrate(&f, 0.0, PI, &QuadratureRule::trapezoid(g));
        assert!((v.re - 2.0).abs() < 2e-5, "{v}");
        let s = integrate(&f, 0.0, PI, &QuadratureRule::simpson(g));
        assert!((s.re - 2.0).abs() < 1e-10, "{s}");
    }

    #[test]
    fn partial_cells_are_linear() {
        let g = GridSpec::new(16).unwrap();
        let f = GridFn::from_fn(g, |x| C::new(x, 0.0));
        let (lo, hi) = (0.1, 2.9);
        let exact = 0.5 * (hi * hi - lo * lo);
        for rule in [QuadratureRule::trapezoid(g), QuadratureRule::simpson(g)] {
            assert!((integrate(&f, lo, hi, &rule).re - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn trapezoid_converges_at_second_order() {
        let err = |m: usize| {
            let g = GridSpec::new(m).unwrap();
            let f = GridFn::from_fn(g, |x| C::new((3.0 * x).cos() + x * x, 0.0));
            let exact = (3.0 * PI).sin() / 3.0 + PI.powi(3) / 3.0;
            (integrate(&f, 0.0, PI, &QuadratureRule::trapezoid(g)).re - exact).abs()
        };
        for m in [32, 64, 128] {
            let ratio = err(m) / err(2 * m);
            assert!(ratio > 3.5, "m = {m}: ratio {ratio}");
        }
    }
}
