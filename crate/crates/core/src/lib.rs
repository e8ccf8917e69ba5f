//! Exact Dirac-Kepler spectrum for a Dirac particle whose mass depends on
//! position as m*(r) = m (1 + a/r), together with independent numerical
//! oracles, the small-coupling expansion, radial wavefunctions and a
//! laboratory for kinetic-operator orderings of the same mass profile.
//!
//! Natural units hbar = m = c = 1 throughout; `a` is in Compton units and
//! `alpha` is the Coulomb coupling.

// negated comparisons are the NaN-rejecting form used throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod expansion;
pub mod model;
pub mod numerics;
pub mod oracle;
pub mod ordering;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use model::{BoundStatus, Branch, LevelResult, ModelParams, QuantumNumbers};
pub use spectrum::energy_exact;
