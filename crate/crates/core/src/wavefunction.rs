//! Radial bound-state functions of the effective Coulomb problem.
//!
//! R(r) = N rho^{l*} exp(-rho/2) L_{n_r}^{(2l*+1)}(rho), rho = 2 e*^2 r / n*,
//! i.e. hydrogen functions with non-integer orbital number and an effective
//! charge. Only this scalar radial factor is built; no spinor assembly.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::{LevelResult, QuantumNumbers};
use crate::numerics::{generalized_laguerre, sign_changes, Adaptive};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialWavefunction {
    pub l_star: f64,
    pub n_star: f64,
    pub e_star_sq: f64,
    pub n_r: u32,
    /// effective Bohr radius 1 / e*^2
    pub scale: f64,
    pub norm_constant: f64,
}

impl RadialWavefunction {
    /// State n_r of the fixed-charge family (l*, e*^2), with n* = n_r + l* + 1.
    pub fn hydrogenic(e_star_sq: f64, l_star: f64, n_r: u32) -> Result<Self> {
        if !(e_star_sq > 0.0 && e_star_sq.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "e_star_sq",
                value: e_star_sq,
                reason: "bound radial functions need e*^2 > 0",
            });
        }
        if !(l_star > -1.0) {
            return Err(Error::InvalidParameter {
                name: "l_star",
                value: l_star,
                reason: "must exceed -1",
            });
        }
        let n_star = n_r as f64 + l_star + 1.0;
        let k = n_r as f64;
        // int rho^{b+1} e^{-rho} [L_k^b]^2 = 2 n* Gamma(k + b + 1) / k!,  b = 2l* + 1
        let ln_norm = 1.5 * (2.0 * e_star_sq / n_star).ln()
            + 0.5 * (ln_gamma(k + 1.0) - (2.0 * n_star).ln() - ln_gamma(k + 2.0 * l_star + 2.0));
        Ok(Self {
            l_star,
            n_star,
            e_star_sq,
            n_r,
            scale: 1.0 / e_star_sq,
            norm_constant: ln_norm.exp(),
        })
    }

    pub fn rho(&self, r: f64) -> f64 {
        2.0 * self.e_star_sq * r / self.n_star
    }

    /// R(r); the prefactor is combined in log space so large rho does not overflow.
    pub fn value(&self, r: f64) -> f64 {
        let rho = self.rho(r);
        let lag = generalized_laguerre(self.n_r, 2.0 * self.l_star + 1.0, rho);
        let log_envelope = self.norm_constant.ln() + self.l_star * rho.ln() - 0.5 * rho;
        lag * log_envelope.exp()
    }

    /// Radius past which the density r^2 R^2 is negligible.
    pub fn outer_radius(&self) -> f64 {
        let power = 2.0 * (self.n_r as f64 + self.l_star + 1.0);
        let rho_end = 2.0 * power + 80.0;
        rho_end * self.n_star / (2.0 * self.e_star_sq)
    }

    /// int_0^inf f(r) r^2 dr with r = t^2, which tames the r^{2l*} endpoint.
    fn radial_integral<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let t_end = self.outer_radius().sqrt();
        let integrator = Adaptive {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            panels: 32,
            ..Adaptive::default()
        };
        integrator.integrate(
            |t| {
                let r = t * t;
                if r == 0.0 {
                    0.0
                } else {
                    f(r) * r * r * 2.0 * t
                }
            },
            0.0,
            t_end,
        )
    }

    pub fn norm_squared(&self) -> Result<f64> {
        self.radial_integral(|r| self.value(r).powi(2))
    }

    /// Interior sign changes on (0, outer radius).
    pub fn node_count(&self) -> usize {
        let samples = 20_000;
        let r_end = self.outer_radius();
        let values: Vec<f64> = (1..samples)
            .map(|i| self.value(r_end * i as f64 / samples as f64))
            .collect();
        let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        sign_changes(&values, 1e-14 * peak)
    }

    /// Least-squares slope of log|R| against log r on [r_lo, r_hi].
    pub fn near_origin_exponent(&self, r_lo: f64, r_hi: f64) -> f64 {
        let count = 41;
        let (llo, lhi) = (r_lo.ln(), r_hi.ln());
        let points: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let x = llo + (lhi - llo) * i as f64 / (count - 1) as f64;
                (x, self.value(x.exp()).abs().ln())
            })
            .collect();
        let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count as f64;
        let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count as f64;
        let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
        let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
        sxy / sxx
    }
}

/// Radial function of an emitted bound level.
pub fn radial_wavefunction(level: &LevelResult, qn: &QuantumNumbers) -> Result<RadialWavefunction> {
    if !(level.e_star_sq > 0.0) {
        return Err(Error::InvalidParameter {
            name: "e_star_sq",
            value: level.e_star_sq,
            reason: "level is not a bound state",
        });
    }
    let wf = RadialWavefunction::hydrogenic(level.e_star_sq, level.l_star, qn.n_r())?;
    debug_assert!((wf.n_star - level.n_star).abs() <= 1e-12 * level.n_star);
    Ok(wf)
}

/// Pointwise R(r) for r > 0.
pub fn evaluate(wf: &RadialWavefunction, r_values: &[f64]) -> Vec<f64> {
    r_values.iter().map(|&r| wf.value(r)).collect()
}

/// |int R^2 r^2 dr - 1| by adaptive quadrature.
pub fn normalization_check(wf: &RadialWavefunction) -> Result<f64> {
    Ok((wf.norm_squared()? - 1.0).abs())
}

/// int R_a R_b r^2 dr.
pub fn overlap(a: &RadialWavefunction, b: &RadialWavefunction) -> Result<f64> {
    let wider = if a.outer_radius() >= b.outer_radius() { a } else { b };
    wider.radial_integral(|r| a.value(r) * b.value(r))
}
