//! Computation engine for S¹-equivariant elliptic genera.
//!
//! Modules, bottom-up:
//! - [`series`]: truncated power/Laurent series, nilpotent coefficient algebras
//!   and symmetric-function expansions.
//! - [`elliptic`]: period lattices, torsion points and the Jacobi sine.
//! - [`charclass`]: equivariant characteristic, Euler and Thom classes.
//! - [`genus`]: localization sums and rigidity checks.
//! - [`transfer`]: rotation-number bookkeeping at torsion points.
//! - [`sheafmod`]: local Smith forms over `C[u]` and divisors on the curve.

pub mod charclass;
pub mod elliptic;
pub mod error;
pub mod genus;
pub mod par;
pub mod series;
pub mod sheafmod;
pub mod transfer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
