//! Reconstruction of the potential from two spectra.

pub mod algorithm;
pub mod fourier;
pub mod omega;
pub mod product;
pub mod volterra_system;

pub use algorithm::{run_algorithm1, run_algorithm1_with, Diagnostics, InverseOptions, OmegaMethod, Reconstruction};
pub use fourier::{fourier_coefficients, synthesize_w, FourierCoefficients};
pub use omega::{estimate_omega_ratio, estimate_omega_sample, estimate_omega_sample_tailed, fit_omega};
pub use product::{product_char_fn, AsymptoticTail, ProductCharFn};
pub use volterra_system::{assemble_volterra, extract_qminus, solve_volterra, VolterraSystem};
