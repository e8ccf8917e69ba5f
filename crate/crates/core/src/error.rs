use thiserror::Error;

/// Failures raised anywhere in the library.
///
/// The variants fall into three families that the CLI maps onto exit codes:
/// invalid input, physics-domain outcomes (no bound state, fall to center)
/// and numerical failures of the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum numbers: n_r={n_r}, l={l}, 2j={two_j}")]
    InvalidQuantumNumbers { n_r: u32, l: u32, two_j: u32 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("no bound states: a = {a} is not below the classical radius e^2/mc^2 = {alpha}")]
    NoBoundState { a: f64, alpha: f64 },

    #[error("fall to center: (j+1/2)^2 + a^2 - alpha^2 = {radicand} leaves no real l*")]
    FallToCenter { radicand: f64 },

    #[error("mesh too coarse: eigenvalue #{index} = {eigenvalue} is not bound inside the box")]
    MeshTooCoarse { index: usize, eigenvalue: f64 },

    #[error("box too small: r_max = {r_max} must exceed {required}")]
    BoxTooSmall { r_max: f64, required: f64 },

    #[error(
        "no sign change of the self-consistency residual on [{lo}, {hi}] (F(lo) = {f_lo}, F(hi) = {f_hi})"
    )]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{count} sign changes of the self-consistency residual on [{lo}, {hi}]; root is not unique")]
    MultipleRoots { count: usize, lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (|F| = {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("adaptive quadrature did not converge on [{lo}, {hi}]")]
    QuadratureFailed { lo: f64, hi: f64 },

    #[error("effective mass 1 + a/r = {mass} is not positive at r = {r}")]
    MassNotPositive { r: f64, mass: f64 },

    #[error("ordering {label} is unbounded below near the m* = 0 wall (1 + eps - eta*rho = {gamma} > 1)")]
    UnboundedOrdering { label: String, gamma: f64 },

    #[error("no classical well for E = {energy}")]
    NoClassicalWell { energy: f64 },
}

impl Error {
    /// Physics outcomes rather than bad input or numerical trouble.
    pub fn is_physics_domain(&self) -> bool {
        matches!(self, Error::NoBoundState { .. } | Error::FallToCenter { .. })
    }

    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidQuantumNumbers { .. }
                | Error::InvalidParameter { .. }
                | Error::UnboundedOrdering { .. }
        )
    }
}

impl serde::Serialize for Error {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
