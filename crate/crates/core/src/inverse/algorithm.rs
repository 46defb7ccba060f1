//! The reconstruction pipeline from two spectra to the potential.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::Boundary;
use crate::grid::{GridFn, GridSpec};
use crate::inverse::fourier::{fourier_coefficients, synthesize_w, FourierCoefficients};
use crate::inverse::omega::{estimate_omega_ratio, estimate_omega_sample_tailed, fit_omega};
use crate::inverse::product::{AsymptoticTail, ProductCharFn};
use crate::inverse::volterra_system::{assemble_volterra_at, extract_qminus_at, solve_volterra};
use crate::potential::{DelayParameter, PotentialPair};
use crate::spectrum::SpectralSequence;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OmegaMethod {
    #[default]
    Sample,
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseOptions {
    pub omega_method: OmegaMethod,
    pub fejer: bool,
    /// Length of the asymptotic continuation of each spectrum, as a multiple
    /// of its measured length; 0 uses the bare truncated products.
    pub tail_factor: usize,
    /// Refit `omega` against the Fourier data of both products.
    pub refine_omega: bool,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            omega_method: OmegaMethod::Sample,
            fejer: false,
            tail_factor: 16,
            refine_omega: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// The estimate used by the reconstruction.
    pub omega: C,
    /// The other estimator, kept as a cross-check.
    pub omega_alt: C,
    pub qminus_consistency: f64,
    pub volterra_residual: f64,
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub potential: PotentialPair,
    pub coefficients: FourierCoefficients,
    pub w0: GridFn,
    pub w1: GridFn,
    pub diagnostics: Diagnostics,
}

impl Reconstruction {
    /// `q = q- + q+` on the grid.
    pub fn q(&self) -> GridFn {
        self.potential.combined()
    }
}

fn build_products(
    s0: &SpectralSequence,
    s1: &SpectralSequence,
    omega: C,
    a: f64,
    opts: &InverseOptions,
) -> (ProductCharFn, ProductCharFn) {
    if opts.tail_factor == 0 {
        return (ProductCharFn::new(s0), ProductCharFn::new(s1));
    }
    let tail = AsymptoticTail {
        omega,
        a,
        len: opts.tail_factor * s0.len(),
    };
    (ProductCharFn::with_tail(s0, tail), ProductCharFn::with_tail(s1, tail))
}

/// Reconstructs `q` from the Dirichlet and Neumann spectra.
pub fn run_algorithm1(
    spectrum0: &SpectralSequence,
    spectrum1: &SpectralSequence,
    a: DelayParameter,
    grid: GridSpec,
) -> Result<Reconstruction> {
    run_algorithm1_with(spectrum0, spectrum1, a, grid, &InverseOptions::default())
}

pub fn run_algorithm1_with(
    spectrum0: &SpectralSequence,
    spectrum1: &SpectralSequence,
    a: DelayParameter,
    grid: GridSpec,
    opts: &InverseOptions,
) -> Result<Reconstruction> {
    for (s, want) in [(spectrum0, Boundary::Dirichlet), (spectrum1, Boundary::Neumann)] {
        if s.j != want {
            return Err(Error::WrongBoundaryIndex {
                expected: want.index(),
                got: s.j.index(),
            });
        }
    }
    if spectrum0.len() != spectrum1.len() {
        return Err(Error::LengthMismatch(spectrum0.len(), spectrum1.len()));
    }
    let n = spectrum0.len();
    if n < 16 {
        return Err(Error::SpectrumTooShort { needed: 16, got: n });
    }
    let a_index = a.snap(grid);
    let a_used = grid.x(a_index);
    let delay = DelayParameter::new(a_used)?;
    let n_max = n - 1;
    if grid.subintervals() < 4 * n_max {
        log::warn!(
            "grid with {} subintervals under-resolves {} Fourier modes",
            grid.subintervals(),
            n_max
        );
    }

    // (i)-(ii): products and omega
    let omega_ratio = estimate_omega_ratio(spectrum1, delay)?;
    let omega_sample = estimate_omega_sample_tailed(spectrum1, delay, omega_ratio, opts.tail_factor)?;
    let (mut omega, omega_alt) = match opts.omega_method {
        OmegaMethod::Sample => (omega_sample, omega_ratio),
        OmegaMethod::Ratio => (omega_ratio, omega_sample),
    };
    let (mut prod0, mut prod1) = build_products(spectrum0, spectrum1, omega, a_used, opts);
    if opts.refine_omega {
        omega = fit_omega(&prod0, &prod1, delay, n_max)?;
        (prod0, prod1) = build_products(spectrum0, spectrum1, omega, a_used, opts);
    }
    log::info!("omega = {omega} (cross-check {omega_alt})");

    // (iii): Fourier inversion
    let coefficients = fourier_coefficients(&prod0, &prod1, omega, delay, n_max);
    let (w0, w1) = synthesize_w(&coefficients, grid, opts.fejer);

    // (iv): q- on (0, a)
    let (qminus, qminus_consistency) = extract_qminus_at(&w0, &w1, a_index);
    let tail_start = 3 * n_max / 4;
    let tail_energy: f64 = (tail_start..=n_max)
        .map(|k| coefficients.a[k].norm_sqr() + coefficients.b[k].norm_sqr())
        .sum::<f64>()
        * (2.0 / std::f64::consts::PI);
    if qminus_consistency > 10.0 * tail_energy.sqrt() {
        log::warn!(
            "q- consistency {qminus_consistency:e} exceeds ten times the coefficient tail {:e}",
            tail_energy.sqrt()
        );
    }

    // (v): q+ on (a, pi)
    let system = assemble_volterra_at(&w0, &w1, &qminus, a_index);
    let (qplus, volterra_residual) = solve_volterra(&system);

    // (vi)
    let potential = PotentialPair::from_parts(a, a_index, qminus, qplus)?;
    Ok(Reconstruction {
        potential,
        coefficients,
        w0,
        w1,
        diagnostics: Diagnostics {
            omega,
            omega_alt,
            qminus_consistency,
            volterra_residual,
        },
    })
}
