//! Parity-detection Mach-Zehnder interferometry for twin-Fock, two-mode
//! squeezed vacuum and pair coherent input states.
//!
//! Two independent routes compute every observable:
//!
//! - [`analytic`] evaluates closed forms (Legendre sums, arcsine laws,
//!   error propagation);
//! - [`oracle`] propagates the input through exact Fock-space beam-splitter
//!   unitaries from [`fock`] and measures parity on the output amplitudes.
//!
//! [`sweeps`] turns either into plot-ready scan rows, and [`checks`]
//! cross-validates the two routes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod checks;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod special_fn;
pub mod states;
pub mod sweeps;

pub use error::{Error, Result};
pub use fock::{BeamSplitterKind, JointDistribution, Mode, TwoModeState};
pub use num_complex::Complex64;
pub use states::{DiagonalCoeffs, PairCoherentParam, SqueezeParam, StateFamily};
