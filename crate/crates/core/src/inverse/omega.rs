//! Recovering `omega` from the Neumann spectrum.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::Boundary;
use crate::inverse::product::{AsymptoticTail, ProductCharFn};
use crate::potential::DelayParameter;
use crate::spectrum::SpectralSequence;

type C = Complex64;

/// Indices with `|cos(n a)|` below this are skipped by the ratio estimator.
pub const COS_THRESHOLD: f64 = 0.3;
/// Number of sample points used by the sample estimator.
pub const SAMPLE_POINTS: usize = 16;
/// Default length of the asymptotic continuation, as a multiple of the
/// spectrum length.
pub const DEFAULT_TAIL_FACTOR: usize = 16;
/// Fixed-point passes between the tail and the sample estimate.
const TAIL_PASSES: usize = 2;

fn check_neumann(s: &SpectralSequence) -> Result<()> {
    if s.j != Boundary::Neumann {
        return Err(Error::WrongBoundaryIndex {
            expected: 1,
            got: s.j.index(),
        });
    }
    Ok(())
}

/// Averages `pi n (rho_n - n)/cos(n a)` over the last quarter of the indices
/// with `|cos(n a)| >= 0.3`.
pub fn estimate_omega_ratio(spectrum1: &SpectralSequence, a: DelayParameter) -> Result<C> {
    check_neumann(spectrum1)?;
    if spectrum1.len() < 16 {
        return Err(Error::SpectrumTooShort {
            needed: 16,
            got: spectrum1.len(),
        });
    }
    let a = a.value();
    let values: Vec<C> = (1..spectrum1.len())
        .filter(|&n| (n as f64 * a).cos().abs() >= COS_THRESHOLD)
        .map(|n| {
            let nf = n as f64;
            (spectrum1.rho(n) - nf) * (PI * nf / (nf * a).cos())
        })
        .collect();
    if values.len() < 4 {
        return Err(Error::InsufficientIndices(values.len()));
    }
    let tail = &values[values.len() - values.len() / 4..];
    Ok(tail.iter().sum::<C>() / tail.len() as f64)
}

/// Evaluates `Delta_1(xi^2) + xi sin(xi pi)` at `xi_n = 2 pi n/(pi - a)`,
/// `n = 1..=16`, and extrapolates their running means linearly in `1/n`.
///
/// Each sample is `omega` plus a Fourier coefficient of `w1` that oscillates
/// with `n` when `w1` has jumps; the running mean of those coefficients
/// behaves like `c/n`, which the linear fit removes.
///
/// The sample points reach `32 pi/(pi - a)`, beyond the last eigenvalue once
/// `a` is close to `pi`, so the product is continued by the asymptotic tail
/// (see [`estimate_omega_sample_tailed`]).
pub fn estimate_omega_sample(spectrum1: &SpectralSequence, a: DelayParameter) -> Result<C> {
    let start = estimate_omega_ratio(spectrum1, a)?;
    estimate_omega_sample_tailed(spectrum1, a, start, DEFAULT_TAIL_FACTOR)
}

/// Sample estimate on the product continued by `tail_factor * len` synthetic
/// eigenvalues. The tail depends on `omega`; starting from `start`, the
/// estimate is fed back into the tail twice. `tail_factor = 0` uses the bare
/// truncated product.
pub fn estimate_omega_sample_tailed(
    spectrum1: &SpectralSequence,
    a: DelayParameter,
    start: C,
    tail_factor: usize,
) -> Result<C> {
    check_neumann(spectrum1)?;
    if tail_factor == 0 {
        return estimate_omega_sample_with(&ProductCharFn::new(spectrum1), a);
    }
    let mut omega = start;
    for _ in 0..TAIL_PASSES {
        let tail = AsymptoticTail {
            omega,
            a: a.value(),
            len: tail_factor * spectrum1.len(),
        };
        omega = estimate_omega_sample_with(&ProductCharFn::with_tail(spectrum1, tail), a)?;
    }
    Ok(omega)
}

pub fn estimate_omega_sample_with(product: &ProductCharFn, a: DelayParameter) -> Result<C> {
    if product.boundary() != Boundary::Neumann {
        return Err(Error::WrongBoundaryIndex {
            expected: 1,
            got: product.boundary().index(),
        });
    }
    let values = omega_samples(product, a);
    let mut means = Vec::with_capacity(values.len());
    let mut acc = C::new(0.0, 0.0);
    for (i, v) in values.iter().enumerate() {
        acc += v;
        means.push(acc / (i + 1) as f64);
    }
    Ok(extrapolate_inverse_n(&means))
}

/// The raw samples `Delta_1(xi_n^2) + xi_n sin(xi_n pi)`, `n = 1..=16`.
pub fn omega_samples(product: &ProductCharFn, a: DelayParameter) -> Vec<C> {
    let period = PI - a.value();
    (1..=SAMPLE_POINTS)
        .map(|n| {
            let xi = 2.0 * PI * n as f64 / period;
            product.eval(C::new(xi * xi, 0.0)) + xi * (xi * PI).sin()
        })
        .collect()
}

/// Least-squares line through the last half of `(1/n, v_n)`, evaluated at 0.
fn extrapolate_inverse_n(values: &[C]) -> C {
    let start = values.len() / 2;
    let pts: Vec<(f64, C)> = (start..values.len())
        .map(|i| (1.0 / (i + 1) as f64, values[i]))
        .collect();
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sy: C = pts.iter().map(|p| p.1).sum();
    let sxy: C = pts.iter().map(|p| p.1 * p.0).sum();
    let slope = (sxy * k - sy * sx) / (k * sxx - sx * sx);
    (sy - slope * sx) / k
}

/// Fits `omega` to the Fourier data produced by the two products.
///
/// For `n` in the upper three quarters of `1..n_max`, the products give
/// `Delta_1(n^2) = omega (-1)^n cos(n a) + b_n` and
/// `n (Delta_0(n^2) - (-1)^n) = -omega (-1)^n sin(n a) + a_n`.
/// The coefficients `a_n`, `b_n` decay, and their leading `1/n` and `1/n^2`
/// parts come from the jump of `w0`, `w1` at `pi - a` and from their values
/// and slopes at the ends. Those patterns are fitted jointly with `omega` by
/// least squares, so the estimate is not biased by them.
pub fn fit_omega(prod0: &ProductCharFn, prod1: &ProductCharFn, a: DelayParameter, n_max: usize) -> Result<C> {
    let lo = (n_max / 4).max(1);
    if n_max < lo + 8 {
        return Err(Error::SpectrumTooShort {
            needed: 16,
            got: n_max + 1,
        });
    }
    let a = a.value();
    let ks: Vec<usize> = (lo..=n_max).collect();
    let mut design = DMatrix::<C>::zeros(2 * ks.len(), 8);
    let mut data = DVector::<C>::zeros(2 * ks.len());
    let real = |x: f64| C::new(x, 0.0);
    for (i, &k) in ks.iter().enumerate() {
        let kf = k as f64;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let (sn, cs) = (kf * a).sin_cos();
        let lam = real(kf * kf);
        let (r1, r0) = (2 * i, 2 * i + 1);
        data[r1] = prod1.eval(lam);
        design[(r1, 0)] = real(sign * cs);
        design[(r1, 1)] = real(sign * sn / kf);
        design[(r1, 2)] = real(1.0 / (kf * kf));
        design[(r1, 3)] = real(sign / (kf * kf));
        data[r0] = (prod0.eval(lam) - sign) * kf;
        design[(r0, 0)] = real(-sign * sn);
        design[(r0, 4)] = real(sign * cs / kf);
        design[(r0, 5)] = real(1.0 / kf);
        design[(r0, 6)] = real(sign / kf);
        design[(r0, 7)] = real(sign * sn / (kf * kf));
    }
    let fit = design
        .svd(true, true)
        .solve(&data, 1e-13)
        .map_err(|_| Error::InsufficientIndices(ks.len()))?;
    Ok(fit[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    fn seq(rhos: impl Iterator<Item = C>, a: f64) -> SpectralSequence {
        let lam = rhos.map(|r| r * r).collect();
        SpectralSequence::new(Boundary::Neumann, DelayParameter::new(a).unwrap(), lam).unwrap()
    }

    #[test]
    fn unperturbed_gives_zero() {
        let s = seq((0..64).map(|n| c(n as f64)), PI / 2.0);
        let a = s.delay;
        assert!(estimate_omega_ratio(&s, a).unwrap().norm() < 1e-14);
        assert!(estimate_omega_sample(&s, a).unwrap().norm() < 1e-10);
    }

    #[test]
    fn ratio_recovers_synthetic_omega() {
        let a = 2.0;
        let s = seq(
            (0..128).map(|n| {
                let nf = n as f64;
                if n == 0 {
                    c(0.0)
                } else {
                    c(nf + 0.5 * (nf * a).cos() / (PI * nf))
                }
            }),
            a,
        );
        let w = estimate_omega_ratio(&s, s.delay).unwrap();
        assert!((w - 0.5).norm() < 1e-6, "{w}");
    }

    #[test]
    fn fit_is_exact_for_unperturbed_products() {
        let a = DelayParameter::new(0.7 * PI).unwrap();
        let l0 = (0..64).map(|n| c((n as f64 + 0.5).powi(2))).collect();
        let s0 = SpectralSequence::new(Boundary::Dirichlet, a, l0).unwrap();
        let s1 = seq((0..64).map(|n| c(n as f64)), a.value());
        let w = fit_omega(&ProductCharFn::new(&s0), &ProductCharFn::new(&s1), a, 63).unwrap();
        assert!(w.norm() < 1e-10, "{w}");
    }

    #[test]
    fn wrong_boundary_is_rejected() {
        let a = DelayParameter::new(2.0).unwrap();
        let l = (0..32).map(|n| c((n as f64 + 0.5).powi(2))).collect();
        let s = SpectralSequence::new(Boundary::Dirichlet, a, l).unwrap();
        assert!(matches!(
            estimate_omega_ratio(&s, a),
            Err(Error::WrongBoundaryIndex { expected: 1, got: 0 })
        ));
    }

    #[test]
    fn short_or_degenerate_spectra() {
        let s = seq((0..8).map(|n| c(n as f64)), 2.0);
        assert!(estimate_omega_ratio(&s, s.delay).is_err());
    }

    #[test]
    fn extrapolation_is_exact_for_lines() {
        let v: Vec<C> = (1..=16).map(|n| c(0.7 + 2.0 / n as f64)).collect();
        assert!((extrapolate_inverse_n(&v) - 0.7).norm() < 1e-12);
    }
}
