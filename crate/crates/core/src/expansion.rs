//! Small-alpha expansion of the exact spectrum with a = a_bar * alpha.
//!
//! All routines return epsilon - 1 alongside epsilon where cancellation
//! matters: the truncation residuals of interest are O(alpha^6), far below
//! the spacing of doubles near 1.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, QuantumNumbers};
use crate::spectrum::energy_exact;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionInput {
    alpha: f64,
    a_bar: f64,
    qn: QuantumNumbers,
}

impl ExpansionInput {
    /// `a_bar = 1` is accepted as the fixed point where every level sits at
    /// epsilon = 1.
    pub fn new(alpha: f64, a_bar: f64, qn: QuantumNumbers) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and non-negative",
            });
        }
        if !a_bar.is_finite() || a_bar > 1.0 {
            return Err(Error::InvalidParameter {
                name: "a_bar",
                value: a_bar,
                reason: "must not exceed 1",
            });
        }
        Ok(Self { alpha, a_bar, qn })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a_bar(&self) -> f64 {
        self.a_bar
    }

    pub fn qn(&self) -> QuantumNumbers {
        self.qn
    }

    /// Principal quantum number n = n_r + l + 1.
    pub fn n(&self) -> u32 {
        self.qn.principal()
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::from_a_bar(self.alpha, self.a_bar)
    }
}

/// Bohr term -mass * alpha^2 / (2 n^2) for a particle of the given mass.
pub fn bohr_term(mass: f64, alpha: f64, n: u32) -> f64 {
    let n = n as f64;
    -mass * alpha * alpha / (2.0 * n * n)
}

/// Mass that reproduces the order-alpha^2 term: m (1 - a_bar)^2.
pub fn renormalized_mass(a_bar: f64) -> f64 {
    (1.0 - a_bar) * (1.0 - a_bar)
}

/// Order-alpha^2 term -(alpha^2 / 2n^2)(1 - a_bar)^2, written out directly.
pub fn leading_correction(input: &ExpansionInput) -> f64 {
    let n = input.n() as f64;
    let alpha = input.alpha;
    let one_minus = 1.0 - input.a_bar;
    -alpha * alpha / (2.0 * n * n) * one_minus * one_minus
}

/// Order-alpha^4 fine-structure term of the expansion.
pub fn fine_structure_correction(input: &ExpansionInput) -> f64 {
    let n = input.n() as f64;
    let k = input.qn.j_plus_half() as f64;
    let ab = input.a_bar;
    let alpha2 = input.alpha * input.alpha;
    -alpha2 * alpha2 / (2.0 * n.powi(4))
        * (1.0 - ab).powi(3)
        * (n / k * (1.0 + ab) - 0.75 * (1.0 + ab / 3.0))
}

/// epsilon - 1 of the two-term expansion.
pub fn energy_expansion_shift(input: &ExpansionInput) -> f64 {
    leading_correction(input) + fine_structure_correction(input)
}

/// Two-term quasirelativistic energy in units of mc^2.
pub fn energy_expansion(input: &ExpansionInput) -> f64 {
    1.0 + energy_expansion_shift(input)
}

/// epsilon - 1 of the first-order rest-energy estimate -(alpha^2/2n^2)(1 - 2 a_bar).
pub fn rest_energy_shift(input: &ExpansionInput) -> f64 {
    let n = input.n() as f64;
    -input.alpha * input.alpha / (2.0 * n * n) * (1.0 - 2.0 * input.a_bar)
}

/// Bohr energy plus the first-order shift a_bar <e^2/r> = a_bar alpha^2 / n^2
/// of the position-dependent rest energy.
pub fn rest_energy_estimate(input: &ExpansionInput) -> f64 {
    1.0 + rest_energy_shift(input)
}

/// |rest-energy estimate - expansion truncated at order alpha^2|, which is
/// (alpha^2 / 2n^2) a_bar^2: the two agree at linear order in a_bar.
pub fn linearization_consistency(a_bar: f64, qn: QuantumNumbers, alpha: f64) -> Result<f64> {
    let input = ExpansionInput::new(alpha, a_bar, qn)?;
    Ok((rest_energy_shift(&input) - leading_correction(&input)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualPoint {
    pub alpha: f64,
    /// |exact - expansion|
    pub residual: f64,
}

/// Truncation residual of the expansion against the exact spectrum for each alpha.
pub fn residual_order_probe(
    a_bar: f64,
    qn: QuantumNumbers,
    alphas: &[f64],
) -> Result<Vec<ResidualPoint>> {
    if alphas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter {
            name: "alphas",
            value: alphas.first().copied().unwrap_or(f64::NAN),
            reason: "probe grid must be strictly decreasing",
        });
    }
    alphas
        .iter()
        .map(|&alpha| {
            let input = ExpansionInput::new(alpha, a_bar, qn)?;
            let exact = energy_exact(&input.params()?, &qn)?;
            let residual = (exact.epsilon_minus_one - energy_expansion_shift(&input)).abs();
            Ok(ResidualPoint { alpha, residual })
        })
        .collect()
}

/// residual(alpha_i) / residual(alpha_{i+1}) for consecutive probe points.
pub fn residual_ratios(points: &[ResidualPoint]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| w[0].residual / w[1].residual)
        .collect()
}

/// Default probe grid; smaller alphas push residuals toward rounding level.
pub const DEFAULT_PROBE_ALPHAS: [f64; 3] = [0.04, 0.02, 0.01];
