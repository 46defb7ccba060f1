use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::forward::Boundary;
use crate::potential::DelayParameter;

/// Eigenvalues `lambda_{n,j}` for `n = 0..len`, ordered by the real part of
/// their square roots. Multiple eigenvalues appear as repeated adjacent
/// entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSequence {
    pub j: Boundary,
    pub delay: DelayParameter,
    pub lambdas: Vec<C>,
}

/// Two square roots closer than this are the same eigenvalue.
pub const CLUSTER_TOL: f64 = 1e-6;

impl SpectralSequence {
    pub fn new(j: Boundary, delay: DelayParameter, lambdas: Vec<C>) -> Result<Self> {
        if let Some(n) = lambdas
            .iter()
            .position(|l| !l.re.is_finite() || !l.im.is_finite())
        {
            return Err(Error::NonFinite(n));
        }
        Ok(SpectralSequence { j, delay, lambdas })
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Principal square root of `lambda_n` (non-negative real part).
    pub fn rho(&self, n: usize) -> C {
        principal_sqrt(self.lambdas[n])
    }

    pub fn rhos(&self) -> Vec<C> {
        self.lambdas.iter().map(|&l| principal_sqrt(l)).collect()
    }

    /// Unperturbed root `n + (1 - j)/2`.
    pub fn base_root(&self, n: usize) -> f64 {
        self.j.base_root(n)
    }

    /// Groups of adjacent entries whose square roots agree to [`CLUSTER_TOL`],
    /// as `(first index, multiplicity)`.
    pub fn clusters(&self) -> Vec<(usize, usize)> {
        let rhos = self.rhos();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (n, r) in rhos.iter().enumerate() {
            match out.last_mut() {
                Some((start, mult)) if (rhos[*start] - r).norm() < CLUSTER_TOL => *mult += 1,
                _ => out.push((n, 1)),
            }
        }
        out
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::SpectrumTooShort {
                needed: n,
                got: self.len(),
            });
        }
        Ok(SpectralSequence {
            j: self.j,
            delay: self.delay,
            lambdas: self.lambdas[..n].to_vec(),
        })
    }
}

/// Square root with `Re >= 0`; on the negative axis the root is `i sqrt|x|`.
pub fn principal_sqrt(z: C) -> C {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}
