//! Characteristic functions rebuilt from their zeros.
//!
//! Each product is written relative to the unperturbed one, so only the
//! ratios `(lambda_n - lambda)/(nu_n^2 - lambda)` are multiplied and the
//! remaining infinite product is replaced by its closed form. The factor
//! whose pole is nearest to `rho` is merged with that closed form, which
//! removes the singularity at `lambda = nu_n^2` analytically.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::forward::Boundary;
use crate::numerics::special::sinc;
use crate::spectrum::{principal_sqrt, SpectralSequence};

type C = Complex64;

/// Synthetic continuation of a truncated spectrum by the two-term
/// asymptotics `rho_n = nu_n + omega cos(nu_n a)/(pi n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticTail {
    pub omega: C,
    pub a: f64,
    /// Number of synthetic eigenvalues appended after the measured ones.
    pub len: usize,
}

/// `Delta_j` as a regularized product over a spectral sequence.
#[derive(Debug, Clone)]
pub struct ProductCharFn {
    j: Boundary,
    measured: usize,
    lambdas: Vec<C>,
}

impl ProductCharFn {
    pub fn new(spectrum: &SpectralSequence) -> Self {
        ProductCharFn {
            j: spectrum.j,
            measured: spectrum.len(),
            lambdas: spectrum.lambdas.clone(),
        }
    }

    pub fn with_tail(spectrum: &SpectralSequence, tail: AsymptoticTail) -> Self {
        let mut p = Self::new(spectrum);
        let start = spectrum.len();
        for n in start..start + tail.len {
            let nu = spectrum.j.base_root(n);
            let rho = C::new(nu, 0.0) + tail.omega * ((nu * tail.a).cos() / (PI * n as f64));
            p.lambdas.push(rho * rho);
        }
        p
    }

    pub fn boundary(&self) -> Boundary {
        self.j
    }

    /// Length of the measured part of the spectrum (the horizon `N`).
    pub fn horizon(&self) -> usize {
        self.measured
    }

    /// Total number of factors, synthetic tail included.
    pub fn factors(&self) -> usize {
        self.lambdas.len()
    }

    pub fn eval(&self, lambda: C) -> C {
        let rho = principal_sqrt(lambda);
        let len = self.lambdas.len();
        let nu = |n: usize| self.j.base_root(n);
        // index whose unperturbed root is nearest to rho
        let near = match self.j {
            Boundary::Dirichlet => (rho.re - 0.5).round().max(0.0) as usize,
            Boundary::Neumann => rho.re.round().max(0.0) as usize,
        };
        let merged = near < len && !(self.j == Boundary::Neumann && near == 0);

        let mut value = if merged {
            let k = near;
            let eps = rho - nu(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = match self.j {
                // cos(rho pi)/(nu_k^2 - lambda)
                Boundary::Dirichlet => sinc(eps * PI) * (sign * PI) / (rho + nu(k)),
                // pi sinc(rho pi)/(k^2 - lambda)
                Boundary::Neumann => -sinc(eps * PI) * (sign * PI) / (rho * (rho + nu(k))),
            };
            base * (self.lambdas[k] - lambda)
        } else {
            match self.j {
                Boundary::Dirichlet => (rho * PI).cos(),
                Boundary::Neumann => sinc(rho * PI) * PI,
            }
        };

        for (n, &ln) in self.lambdas.iter().enumerate() {
            if merged && n == near {
                continue;
            }
            if self.j == Boundary::Neumann && n == 0 {
                value *= ln - lambda;
                continue;
            }
            let v = nu(n);
            value *= (ln - lambda) / (v * v - lambda);
        }
        value
    }

    /// Unregularized truncated product, for cross-checks only.
    pub fn eval_direct(&self, lambda: C) -> C {
        let mut value = C::new(1.0, 0.0);
        for (n, &ln) in self.lambdas.iter().enumerate() {
            if self.j == Boundary::Neumann && n == 0 {
                value *= (ln - lambda) * PI;
                continue;
            }
            let v = self.j.base_root(n);
            value *= (ln - lambda) / (v * v);
        }
        value
    }
}

/// `Delta_j(lambda)` from the spectrum alone.
pub fn product_char_fn(spectrum: &SpectralSequence, lambda: C) -> C {
    ProductCharFn::new(spectrum).eval(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::DelayParameter;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn unperturbed(j: Boundary, n: usize) -> SpectralSequence {
        let a = DelayParameter::new(PI / 2.0).unwrap();
        let l = (0..n).map(|k| c(j.base_root(k).powi(2))).collect();
        SpectralSequence::new(j, a, l).unwrap()
    }

    #[test]
    fn unperturbed_dirichlet_is_cosine() {
        let s = unperturbed(Boundary::Dirichlet, 20);
        assert!((product_char_fn(&s, c(0.0)) - 1.0).norm() < 1e-14);
        assert!((product_char_fn(&s, c(1.0)) + 1.0).norm() < 1e-14);
        for lam in [c(2.25), c(7.3), C::new(-3.0, 2.0), c(900.0)] {
            let rho = lam.sqrt();
            let got = product_char_fn(&s, lam);
            assert!((got - (rho * PI).cos()).norm() < 1e-12 * (1.0 + got.norm()), "{lam}");
        }
    }

    #[test]
    fn unperturbed_neumann_is_rho_sine() {
        let s = unperturbed(Boundary::Neumann, 20);
        assert!((product_char_fn(&s, c(0.25)) + 0.5).norm() < 1e-14);
        for lam in [c(0.0), c(1.0), c(16.0), C::new(5.0, -1.0), c(1e4)] {
            let rho = lam.sqrt();
            let exact = -rho * (rho * PI).sin();
            let got = product_char_fn(&s, lam);
            assert!((got - exact).norm() < 1e-11 * (1.0 + lam.norm()), "{lam}: {got} vs {exact}");
        }
    }

    #[test]
    fn direct_product_converges_to_closed_form() {
        // the raw product only converges like 1/N
        let err = |n: usize| {
            let s = unperturbed(Boundary::Neumann, n);
            (ProductCharFn::new(&s).eval_direct(c(0.25)) + 0.5).norm()
        };
        let (e1, e2) = (err(1000), err(10000));
        assert!(e2 < e1 && e2 < 1e-4, "{e1} {e2}");
    }

    #[test]
    fn pole_limit_is_continuous() {
        let a = DelayParameter::new(2.0).unwrap();
        let l: Vec<C> = (0..12).map(|k| c((k as f64 + 0.05).powi(2))).collect();
        let s = SpectralSequence::new(Boundary::Neumann, a, l).unwrap();
        let p = ProductCharFn::new(&s);
        for k in [1.0f64, 4.0, 9.0] {
            let at = p.eval(c(k * k));
            let near = p.eval(c(k * k + 1e-7));
            assert!((at - near).norm() < 1e-5 * (1.0 + at.norm()));
        }
    }

    #[test]
    fn tail_reproduces_two_term_asymptotics() {
        let tail = AsymptoticTail { omega: c(0.3), a: 2.0, len: 5 };
        let s = unperturbed(Boundary::Neumann, 10);
        let p = ProductCharFn::with_tail(&s, tail);
        assert_eq!(p.factors(), 15);
        assert_eq!(p.horizon(), 10);
        let rho = p.lambdas[12].sqrt();
        assert!((rho - (12.0 + 0.3 * (24.0f64).cos() / (12.0 * PI))).norm() < 1e-14);
    }
}
