//! Inverse spectral problem for a Sturm–Liouville operator with a constant
//! delay and a frozen-argument term.

pub mod characterization;
pub mod cli;
pub mod error;
pub mod forward;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod kernels;
pub mod numerics;
pub mod potential;
pub mod spectrum;
pub mod wfun;

pub use error::{Error, Result};
pub use forward::{Boundary, CharFnEvaluator};
pub use grid::{GridFn, GridSpec};
pub use potential::{Builtin, DelayParameter, PotentialPair};
pub use spectrum::SpectralSequence;
pub use wfun::{build_w_functions, CharFnModel};
