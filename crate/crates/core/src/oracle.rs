//! Finite-volume oracle for the effective radial problem
//!
//!   -1/2 u'' + [l*(l*+1)/(2 r^2) - e*^2/r] u = E* u,   u = r R,
//!
//! and for the energy self-consistency that arises because e*^2 and E*
//! both depend on epsilon.
//!
//! With non-integer l* < 0, u ~ r^{l*+1} has an infinite slope at the
//! origin and a plain three-point scheme on u loses its O(h^2) rate. The
//! operator is therefore discretized for f = u / r^{l*+1}, which is smooth:
//!
//!   -1/2 (r^{2s} f')' - e*^2 r^{2s-1} f = E* r^{2s} f,   s = l* + 1,
//!
//! on vertex cells [r_i - h/2, r_i + h/2] (the first cell is [0, h/2]) with
//! cell weights and the Coulomb term integrated exactly. The flux vanishes
//! at r = 0 and f(r_max) = 0. The result is a symmetric tridiagonal
//! pencil reduced to standard form and solved by Sturm bisection, so the
//! n_r-th eigenvalue is picked by index.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{bound_state_condition, ModelParams, QuantumNumbers};
use crate::numerics::{brent, richardson, sign_changes, SymTridiagonal};
use crate::spectrum::energy_exact;

/// Uniform radial mesh with spacing h = r_max / (n_points + 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMesh {
    r_max: f64,
    n_points: usize,
}

impl RadialMesh {
    pub const MIN_POINTS: usize = 200;
    pub const DEFAULT_POINTS: usize = 4000;

    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r_max",
                value: r_max,
                reason: "must be positive and finite",
            });
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n_points as f64,
                reason: "at least 200 mesh points are required",
            });
        }
        Ok(Self { r_max, n_points })
    }

    /// Box of 40 n*^2 / max(e*^2, 0.1) around a level with the default point count.
    pub fn for_level(n_star: f64, e_star_sq: f64) -> Result<Self> {
        Self::new(40.0 * n_star * n_star / e_star_sq.max(0.1), Self::DEFAULT_POINTS)
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.n_points + 1) as f64
    }

    /// Same box with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            r_max: self.r_max,
            n_points: 2 * self.n_points + 1,
        }
    }

    /// Box large enough for a level of this size: ten classical radii n*^2/e*^2.
    pub fn check_box(&self, n_star: f64, e_star_sq: f64) -> Result<()> {
        let required = 10.0 * n_star * n_star / e_star_sq;
        if self.r_max <= required {
            return Err(Error::BoxTooSmall {
                r_max: self.r_max,
                required,
            });
        }
        Ok(())
    }
}

/// q^th power difference hi^q - lo^q without cancellation for lo close to hi.
fn power_difference(lo: f64, hi: f64, q: f64) -> f64 {
    if lo <= 0.0 {
        return hi.powf(q);
    }
    lo.powf(q) * (q * ((hi - lo) / lo).ln_1p()).exp_m1()
}

/// Discretized radial operator for fixed (e*^2, l*).
#[derive(Debug, Clone)]
pub struct RadialOperator {
    matrix: SymTridiagonal,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exponent: f64,
}

impl RadialOperator {
    pub fn new(e_star_sq: f64, l_star: f64, mesh: &RadialMesh) -> Result<Self> {
        if !(e_star_sq.is_finite() && e_star_sq >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "e_star_sq",
                value: e_star_sq,
                reason: "must be non-negative",
            });
        }
        if !(l_star > -1.0) {
            return Err(Error::InvalidParameter {
                name: "l_star",
                value: l_star,
                reason: "must exceed -1",
            });
        }
        let s = l_star + 1.0;
        let two_s = 2.0 * s;
        let h = mesh.spacing();
        let count = mesh.n_points + 1;
        let nodes: Vec<f64> = (0..count).map(|i| i as f64 * h).collect();

        let mut weights = Vec::with_capacity(count);
        let mut diag = Vec::with_capacity(count);
        let mut off = Vec::with_capacity(count - 1);
        let mut flux_left = 0.0;
        for (i, &r) in nodes.iter().enumerate() {
            let lo = (r - 0.5 * h).max(0.0);
            let hi = r + 0.5 * h;
            // int r^{2s} dr and int r^{2s-1} dr over the cell
            let w = power_difference(lo, hi, two_s + 1.0) / (two_s + 1.0);
            let coulomb = -e_star_sq * power_difference(lo, hi, two_s) / two_s;
            let flux_right = (i as f64 + 0.5).powf(two_s) * h.powf(two_s) / h;
            weights.push(w);
            diag.push(0.5 * (flux_left + flux_right) + coulomb);
            if i + 1 < count {
                off.push(-0.5 * flux_right);
            }
            flux_left = flux_right;
        }
        let matrix = SymTridiagonal::from_generalized(&diag, &off, &weights);
        Ok(Self {
            matrix,
            nodes,
            weights,
            exponent: s,
        })
    }

    pub fn matrix(&self) -> &SymTridiagonal {
        &self.matrix
    }

    /// Eigenvalue by index, with no check that it is bound.
    pub fn eigenvalue(&self, n_r: usize) -> f64 {
        self.matrix.eigenvalue(n_r)
    }

    /// Node radii and u = r^{l*+1} f at each node for the given eigenvalue.
    pub fn eigenfunction(&self, eigenvalue: f64) -> (Vec<f64>, Vec<f64>) {
        let y = self.matrix.eigenvector(eigenvalue);
        let u = y
            .iter()
            .zip(&self.weights)
            .zip(&self.nodes)
            .map(|((c, w), r)| c / w.sqrt() * r.powf(self.exponent))
            .collect();
        (self.nodes.clone(), u)
    }
}

/// The n_r-th eigenvalue (ascending, from 0) of the discretized effective
/// radial operator.
pub fn effective_hamiltonian_eigenvalue(
    e_star_sq: f64,
    l_star: f64,
    n_r: u32,
    mesh: &RadialMesh,
) -> Result<f64> {
    if !(e_star_sq > 0.0) {
        return Err(Error::InvalidParameter {
            name: "e_star_sq",
            value: e_star_sq,
            reason: "an attractive effective charge is required",
        });
    }
    let op = RadialOperator::new(e_star_sq, l_star, mesh)?;
    let value = op.eigenvalue(n_r as usize);
    if value >= 0.0 {
        return Err(Error::MeshTooCoarse {
            index: n_r as usize,
            eigenvalue: value,
        });
    }
    Ok(value)
}

/// Eigenvalue Richardson-extrapolated over (h, h/2).
pub fn extrapolated_eigenvalue(
    e_star_sq: f64,
    l_star: f64,
    n_r: u32,
    mesh: &RadialMesh,
) -> Result<f64> {
    let coarse = effective_hamiltonian_eigenvalue(e_star_sq, l_star, n_r, mesh)?;
    let fine = effective_hamiltonian_eigenvalue(e_star_sq, l_star, n_r, &mesh.refined())?;
    Ok(richardson(coarse, fine, 2))
}

/// Interior sign changes of the n_r-th discrete eigenfunction.
pub fn eigenfunction_nodes(e_star_sq: f64, l_star: f64, n_r: u32, mesh: &RadialMesh) -> Result<usize> {
    let op = RadialOperator::new(e_star_sq, l_star, mesh)?;
    let value = op.eigenvalue(n_r as usize);
    let (_, u) = op.eigenfunction(value);
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(sign_changes(&u, 1e-10 * peak))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    /// self-consistent E / mc^2
    pub epsilon: f64,
    /// final |F(epsilon)|
    pub residual: f64,
    /// |extrapolated - fine-mesh| effective eigenvalue at the root
    pub mesh_error_estimate: f64,
    pub iterations: usize,
}

/// Points of the sign-change pre-scan over the epsilon bracket.
pub const PRESCAN_POINTS: usize = 32;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Self-consistent energy: the root in epsilon of
/// F(epsilon) = E*_{n_r}(epsilon*alpha - a) - (epsilon^2 - 1)/2
/// with E* taken from the Richardson-extrapolated discrete operator.
pub fn self_consistent_energy(
    params: &ModelParams,
    qn: &QuantumNumbers,
    mesh: &RadialMesh,
    tol: f64,
) -> Result<OracleResult> {
    let (alpha, a) = (params.alpha(), params.a());
    if !bound_state_condition(params) {
        return Err(Error::NoBoundState { a, alpha });
    }
    // l* and the box scale come from the closed form; the energy does not
    let reference = energy_exact(params, qn)?;
    let l_star = reference.l_star;
    if !(l_star > -1.0) {
        return Err(Error::FallToCenter {
            radicand: crate::model::discriminant(params, qn),
        });
    }
    mesh.check_box(reference.n_star, reference.e_star_sq)?;
    let n_r = qn.n_r() as usize;
    let fine_mesh = mesh.refined();

    let effective = |epsilon: f64| -> Result<(f64, f64)> {
        let charge = epsilon * alpha - a;
        let coarse = RadialOperator::new(charge, l_star, mesh)?.eigenvalue(n_r);
        let fine = RadialOperator::new(charge, l_star, &fine_mesh)?.eigenvalue(n_r);
        Ok((richardson(coarse, fine, 2), fine))
    };
    let residual_at = |epsilon: f64| -> Result<f64> {
        let (value, _) = effective(epsilon)?;
        Ok(value - 0.5 * (epsilon - 1.0) * (epsilon + 1.0))
    };

    let lo = if alpha > 0.0 { (a / alpha + 1e-9).max(0.01) } else { 0.01 };
    let hi = 1.0 - 1e-12;
    let grid: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (PRESCAN_POINTS - 1) as f64)
        .collect();
    let values = grid
        .iter()
        .map(|&e| residual_at(e))
        .collect::<Result<Vec<f64>>>()?;
    let crossings: Vec<usize> = (0..PRESCAN_POINTS - 1)
        .filter(|&i| values[i].signum() != values[i + 1].signum())
        .collect();
    let bracket = match crossings.as_slice() {
        [] => {
            return Err(Error::BracketFailure {
                lo,
                hi,
                f_lo: values[0],
                f_hi: values[PRESCAN_POINTS - 1],
            })
        }
        [i] => (grid[*i], grid[*i + 1]),
        many => {
            return Err(Error::MultipleRoots {
                count: many.len(),
                lo,
                hi,
            })
        }
    };

    let root = brent(residual_at, bracket.0, bracket.1, 1e-15, tol)?;
    if root.fx.abs() >= tol {
        return Err(Error::NoConvergence {
            iterations: root.iterations,
            residual: root.fx.abs(),
        });
    }
    let (extrapolated, fine) = effective(root.x)?;
    if extrapolated >= 0.0 {
        return Err(Error::MeshTooCoarse {
            index: n_r,
            eigenvalue: extrapolated,
        });
    }
    Ok(OracleResult {
        epsilon: root.x,
        residual: root.fx.abs(),
        mesh_error_estimate: (extrapolated - fine).abs(),
        iterations: root.iterations + PRESCAN_POINTS,
    })
}

/// Oracle run with the default box for the level.
pub fn self_consistent_energy_default(params: &ModelParams, qn: &QuantumNumbers) -> Result<OracleResult> {
    let reference = energy_exact(params, qn)?;
    let mesh = RadialMesh::for_level(reference.n_star, reference.e_star_sq)?;
    self_consistent_energy(params, qn, &mesh, DEFAULT_TOL)
}

/// One analytic-vs-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub params: ModelParams,
    pub qn: QuantumNumbers,
    pub analytic: f64,
    pub oracle: Result<OracleResult>,
}

impl OracleComparison {
    pub fn relative_deviation(&self) -> Option<f64> {
        self.oracle
            .as_ref()
            .ok()
            .map(|o| ((o.epsilon - self.analytic) / self.analytic).abs())
    }
}

/// alpha in {0.1, 0.3, 0.6} x a in {-0.5, 0, alpha/2} x n_r in {0, 1, 2}
/// x {S1/2, P1/2, P3/2, D3/2}.
pub fn standard_grid() -> Vec<(ModelParams, QuantumNumbers)> {
    let mut cases = Vec::new();
    for alpha in [0.1, 0.3, 0.6] {
        for a in [-0.5, 0.0, 0.5 * alpha] {
            let params = ModelParams::new(alpha, a).expect("grid parameters are valid");
            cases.extend(standard_states(2).into_iter().map(|qn| (params, qn)));
        }
    }
    cases
}

/// n_r in 0..=n_r_max for each of S1/2, P1/2, P3/2, D3/2.
pub fn standard_states(n_r_max: u32) -> Vec<QuantumNumbers> {
    let mut states = Vec::new();
    for n_r in 0..=n_r_max {
        for (l, two_j) in [(0, 1), (1, 1), (1, 3), (2, 3)] {
            states.push(QuantumNumbers::new(n_r, l, two_j).expect("valid coupling"));
        }
    }
    states
}

/// Runs the oracle over a list of cases in parallel; output order follows input.
pub fn compare_grid(cases: &[(ModelParams, QuantumNumbers)]) -> Result<Vec<OracleComparison>> {
    cases
        .par_iter()
        .map(|(params, qn)| {
            let analytic = energy_exact(params, qn)?.epsilon;
            Ok(OracleComparison {
                params: *params,
                qn: *qn,
                analytic,
                oracle: self_consistent_energy_default(params, qn),
            })
        })
        .collect()
}
