//! Forward problem: characteristic functions, eigenvalues and the
//! method-of-steps oracle.

pub mod cauchy;
pub mod charfn;
pub mod ivp;
pub mod spectrum;

pub use cauchy::{eval_c_pi, eval_cauchy_z};
pub use charfn::{eval_char_fn, Boundary, CharFnEvaluator};
pub use ivp::{solve_ivp_method_of_steps, IvpSolution};
pub use spectrum::{compute_spectrum, compute_spectrum_with, seed_rho, SpectrumOptions};
