//! Diagnostics for the necessary conditions on a pair of spectra: the
//! eigenvalue asymptotics, the normalization relation at `lambda = 0` and the
//! exponential type of the remainder functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::Boundary;
use crate::inverse::product::{AsymptoticTail, ProductCharFn};
use crate::numerics::diagnostics::l2_tail_diagnostic;
use crate::potential::DelayParameter;
use crate::spectrum::SpectralSequence;

type C = Complex64;

/// Default `r` values for [`check_overdetermination`].
pub const DECAY_SAMPLES: [f64; 8] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
/// Default `r` values for [`estimate_exponential_type`].
pub const TYPE_SAMPLES: [f64; 5] = [2.0, 2.5, 3.0, 3.5, 4.0];
/// `|theta(-ir)|` below this fraction of `e^{pi r}` is indistinguishable
/// from rounding in the products.
pub const THETA_FLOOR: f64 = 1e-7;

/// Residuals `kappa_n` below this size are treated as root-finding noise.
pub const KAPPA_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub omega_fit: C,
    /// `kappa_n = n (rho_n - nu_n - omega cos(nu_n a)/(pi n))`, with `kappa_0 = 0`.
    pub kappa: Vec<C>,
    /// Cumulative tail energies of `kappa` (see [`l2_tail_diagnostic`]).
    pub kappa_partial_sums: Vec<f64>,
    pub kappa_stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterizationReport {
    pub omega_fit: C,
    pub kappa_residuals: Vec<C>,
    pub kappa_stable: bool,
    pub a4_residual: C,
    pub decay_samples: Vec<f64>,
    /// `None` when no Dirichlet spectrum was supplied.
    pub char_decay: Option<Vec<f64>>,
    /// True when the last half of `char_decay` is non-increasing above the
    /// rounding floor (see [`decay_trend_ok`]).
    pub decay_monotone_tail: Option<bool>,
    /// Types of `theta_0` (if available) and `theta_1`.
    pub exp_type_estimates: (Option<f64>, f64),
}

/// Least-squares `omega` over the upper half of the indices of the model
/// `rho_n = nu_n + omega cos(nu_n a)/(pi n)`, and the residuals `kappa_n`.
pub fn check_asymptotics(spectrum: &SpectralSequence, a: DelayParameter) -> Result<AsymptoticFit> {
    let len = spectrum.len();
    if len < 32 {
        return Err(Error::SpectrumTooShort { needed: 32, got: len });
    }
    let a = a.value();
    let coeff = |n: usize| {
        let nu = spectrum.base_root(n);
        (nu * a).cos() / (PI * n as f64)
    };
    let window = len / 2..len;
    if window
        .clone()
        .all(|n| (spectrum.base_root(n) * a).cos().abs() < 0.1)
    {
        return Err(Error::IllConditionedFit);
    }
    let (mut num, mut den) = (C::new(0.0, 0.0), 0.0);
    for n in window {
        let c = coeff(n);
        num += (spectrum.rho(n) - spectrum.base_root(n)) * c;
        den += c * c;
    }
    let omega_fit = num / den;
    let kappa: Vec<C> = (0..len)
        .map(|n| {
            if n == 0 {
                C::new(0.0, 0.0)
            } else {
                (spectrum.rho(n) - spectrum.base_root(n) - omega_fit * coeff(n)) * n as f64
            }
        })
        .collect();
    let (kappa_partial_sums, kappa_stable) = l2_tail_diagnostic(&kappa[1..], KAPPA_FLOOR);
    Ok(AsymptoticFit {
        omega_fit,
        kappa,
        kappa_partial_sums,
        kappa_stable,
    })
}

fn require(s: &SpectralSequence, j: Boundary) -> Result<()> {
    if s.j != j {
        return Err(Error::WrongBoundaryIndex {
            expected: j.index(),
            got: s.j.index(),
        });
    }
    Ok(())
}

/// `Delta_1(0)/pi - 2 omega/pi` from the regularized product.
pub fn check_a4(spectrum1: &SpectralSequence, omega: C) -> Result<C> {
    require(spectrum1, Boundary::Neumann)?;
    Ok((ProductCharFn::new(spectrum1).eval(C::new(0.0, 0.0)) - omega * 2.0) / PI)
}

/// The same residual written as `lambda_0 prod_{n>=1} lambda_n/n^2 - 2 omega/pi`.
pub fn check_a4_direct(spectrum1: &SpectralSequence, omega: C) -> Result<C> {
    require(spectrum1, Boundary::Neumann)?;
    let mut p = spectrum1.lambdas[0];
    for (n, &l) in spectrum1.lambdas.iter().enumerate().skip(1) {
        p *= l / (n * n) as f64;
    }
    Ok(p - omega * (2.0 / PI))
}

/// `theta_0(rho) = rho (Delta_0 - cos(rho pi)) - omega sin(rho (pi - a))` and
/// `theta_1(rho) = Delta_1 + rho sin(rho pi) - omega cos(rho (pi - a))`.
pub fn theta(product: &ProductCharFn, omega: C, a: f64, rho: C) -> C {
    let lam = rho * rho;
    let d = product.eval(lam);
    match product.boundary() {
        Boundary::Dirichlet => rho * (d - (rho * PI).cos()) - omega * (rho * (PI - a)).sin(),
        Boundary::Neumann => d + rho * (rho * PI).sin() - omega * (rho * (PI - a)).cos(),
    }
}

fn completed(s: &SpectralSequence, omega: C, a: f64) -> ProductCharFn {
    ProductCharFn::with_tail(
        s,
        AsymptoticTail {
            omega,
            a,
            len: 16 * s.len(),
        },
    )
}

/// `|i theta_0(-ir) - theta_1(-ir)| e^{-(pi - a) r}` at each `r`.
///
/// The products are continued by their two-term asymptotics. Each value
/// is the difference of quantities of size `e^{pi r}`, so the relative
/// accuracy of the products sets a floor that grows like `e^{a r}`.
pub fn check_overdetermination(
    spectrum0: &SpectralSequence,
    spectrum1: &SpectralSequence,
    omega: C,
    a: DelayParameter,
    r_samples: &[f64],
) -> Result<Vec<f64>> {
    require(spectrum0, Boundary::Dirichlet)?;
    require(spectrum1, Boundary::Neumann)?;
    let a = a.value();
    let p0 = completed(spectrum0, omega, a);
    let p1 = completed(spectrum1, omega, a);
    Ok(r_samples
        .iter()
        .map(|&r| {
            let rho = C::new(0.0, -r);
            let t0 = theta(&p0, omega, a, rho);
            let t1 = theta(&p1, omega, a, rho);
            let v = t0 * C::new(0.0, 1.0) - t1;
            if v.norm() == 0.0 {
                0.0
            } else {
                (v.norm().ln() - (PI - a) * r).exp()
            }
        })
        .collect())
}

/// Rounding level of the decay diagnostic at `r`: the products carry a
/// relative error near `1e-6` at worst, amplified by `e^{a r}`.
pub fn decay_floor(a: DelayParameter, r: f64) -> f64 {
    1e-6 * (a.value() * r).exp()
}

/// True when the last half of the decay sequence never increases, values
/// below [`decay_floor`] counting as noise.
pub fn decay_trend_ok(r_samples: &[f64], decay: &[f64], a: DelayParameter) -> bool {
    let half = decay.len() / 2;
    (half.max(1)..decay.len()).all(|i| decay[i] <= decay[i - 1] || decay[i] <= decay_floor(a, r_samples[i]))
}

/// Least-squares slope of `log |theta_j(-ir)|` against `r`. Samples under
/// [`THETA_FLOOR`] are dropped; with fewer than two left theta is treated
/// as identically zero and the type is 0.
pub fn estimate_exponential_type(
    spectrum: &SpectralSequence,
    omega: C,
    a: DelayParameter,
    r_samples: &[f64],
) -> Result<f64> {
    let a = a.value();
    let p = completed(spectrum, omega, a);
    let pts: Vec<(f64, f64)> = r_samples
        .iter()
        .filter_map(|&r| {
            let v = theta(&p, omega, a, C::new(0.0, -r)).norm();
            (v > THETA_FLOOR * (PI * r).exp()).then(|| (r, v.ln()))
        })
        .collect();
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((k * sxy - sx * sy) / (k * sxx - sx * sx))
}

/// Runs every check with the default samples. Only the asymptotics,
/// the normalization relation and the type of `theta_1` need the Neumann
/// spectrum alone.
pub fn characterize(
    spectrum0: Option<&SpectralSequence>,
    spectrum1: &SpectralSequence,
    a: DelayParameter,
) -> Result<CharacterizationReport> {
    let fit = check_asymptotics(spectrum1, a)?;
    let omega = fit.omega_fit;
    let a4_residual = check_a4(spectrum1, omega)?;
    let t1 = estimate_exponential_type(spectrum1, omega, a, &TYPE_SAMPLES)?;
    let (char_decay, decay_monotone_tail, t0) = match spectrum0 {
        Some(s0) => {
            let decay = check_overdetermination(s0, spectrum1, omega, a, &DECAY_SAMPLES)?;
            let ok = decay_trend_ok(&DECAY_SAMPLES, &decay, a);
            let t0 = estimate_exponential_type(s0, omega, a, &TYPE_SAMPLES)?;
            (Some(decay), Some(ok), Some(t0))
        }
        None => (None, None, None),
    };
    Ok(CharacterizationReport {
        omega_fit: omega,
        kappa_residuals: fit.kappa,
        kappa_stable: fit.kappa_stable,
        a4_residual,
        decay_samples: DECAY_SAMPLES.to_vec(),
        char_decay,
        decay_monotone_tail,
        exp_type_estimates: (t0, t1),
    })
}
