//! Shared numerical kernels.

pub mod diagnostics;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod sum;
pub mod volterra;

pub use diagnostics::l2_tail_diagnostic;
pub use quadrature::{integrate, QuadratureKind, QuadratureRule};
pub use roots::{newton_root, RootError};
pub use sum::KahanSum;
pub use volterra::{solve_triangular_volterra, VolterraSolution};
