//! Dimensionless model parameters and quantum-number bookkeeping.
//!
//! Natural units throughout: hbar = m = c = 1, so the Compton length is 1,
//! e^2 = alpha and the classical electron radius is alpha. The mass
//! parameter `a` is stored in Compton units; `a_bar = a / alpha` is the
//! same length in classical-radius units.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// Coupling and mass-length parameter of m*(r) = 1 + a/r with U = -alpha/r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    alpha: f64,
    a: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, a: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and non-negative",
            });
        }
        if !a.is_finite() {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "must be finite",
            });
        }
        Ok(Self { alpha, a })
    }

    /// Builds parameters from the classical-radius form a = a_bar * alpha.
    pub fn from_a_bar(alpha: f64, a_bar: f64) -> Result<Self> {
        if !a_bar.is_finite() {
            return Err(Error::InvalidParameter {
                name: "a_bar",
                value: a_bar,
                reason: "must be finite",
            });
        }
        Self::new(alpha, a_bar * alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `a / alpha`, undefined without a Coulomb coupling.
    pub fn a_bar(&self) -> Option<f64> {
        (self.alpha > 0.0).then(|| self.a / self.alpha)
    }
}

/// Which sign of the j = l +- 1/2 doublet a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// j = l + 1/2
    Upper,
    /// j = l - 1/2
    Lower,
}

/// (n_r, l, j) with j kept as the odd integer 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuantumNumbers {
    n_r: u32,
    l: u32,
    two_j: u32,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, l: u32, two_j: u32) -> Result<Self> {
        let upper = two_j == 2 * l + 1;
        let lower = l >= 1 && two_j == 2 * l - 1;
        if !(upper || lower) {
            return Err(Error::InvalidQuantumNumbers { n_r, l, two_j });
        }
        Ok(Self { n_r, l, two_j })
    }

    /// S_{1/2}-type state: l = 0, j = 1/2.
    pub fn s_half(n_r: u32) -> Self {
        Self { n_r, l: 0, two_j: 1 }
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn branch(&self) -> Branch {
        if self.two_j == 2 * self.l + 1 {
            Branch::Upper
        } else {
            Branch::Lower
        }
    }

    /// j + 1/2, an integer.
    pub fn j_plus_half(&self) -> u32 {
        self.two_j.div_ceil(2)
    }

    /// Principal quantum number n = n_r + l + 1.
    pub fn principal(&self) -> u32 {
        self.n_r + self.l + 1
    }

    /// Every state with principal number n, ordered by (l, j).
    pub fn with_principal(n: u32) -> Vec<Self> {
        let mut states = Vec::new();
        for l in 0..n {
            let n_r = n - l - 1;
            if l >= 1 {
                states.push(Self { n_r, l, two_j: 2 * l - 1 });
            }
            states.push(Self { n_r, l, two_j: 2 * l + 1 });
        }
        states
    }

    /// All states with principal number 1..=n_max, ordered by (n, l, j).
    pub fn up_to_principal(n_max: u32) -> Vec<Self> {
        (1..=n_max).flat_map(Self::with_principal).collect()
    }

    /// Spectroscopic label such as `2P1/2`.
    pub fn label(&self) -> String {
        const LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUV";
        let letter = LETTERS
            .get(self.l as usize)
            .map(|c| (*c as char).to_string())
            .unwrap_or_else(|| format!("[l={}]", self.l));
        format!("{}{}{}/2", self.principal(), letter, self.two_j)
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Derived quantities for one bound level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelResult {
    pub l_star: f64,
    pub n_star: f64,
    /// e*^2 = epsilon * alpha - a
    pub e_star_sq: f64,
    /// E / mc^2
    pub epsilon: f64,
    /// epsilon - 1, evaluated without cancellation
    pub epsilon_minus_one: f64,
}

/// Whether the parameters admit a family of bound levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundStatus {
    Bound,
    /// a = alpha: the spectrum collapses onto the single level E = mc^2.
    SingleLevel,
    Unbound,
}

impl BoundStatus {
    pub fn classify(params: &ModelParams) -> Self {
        if bound_state_condition(params) {
            BoundStatus::Bound
        } else if params.a == params.alpha {
            BoundStatus::SingleLevel
        } else {
            BoundStatus::Unbound
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundStatus::Bound => "bound",
            BoundStatus::SingleLevel => "single-level",
            BoundStatus::Unbound => "unbound",
        }
    }
}

/// Radicand (j+1/2)^2 + a^2 - alpha^2 under the square root of l*.
pub fn discriminant(params: &ModelParams, qn: &QuantumNumbers) -> f64 {
    let k = qn.j_plus_half() as f64;
    k * k + params.a * params.a - params.alpha * params.alpha
}

/// Bound levels exist iff a < alpha (a < e^2/mc^2 in physical units).
pub fn bound_state_condition(params: &ModelParams) -> bool {
    params.a < params.alpha
}
