//! Non-relativistic laboratory for the kinetic-operator ordering problem.
//!
//! The Schrodinger Hamiltonian for m*(r) = 1 + a/r is taken from the
//! two-sided von Roos family
//!
//!   H = 1/4 (m^eta p m^eps p m^rho + m^rho p m^eps p m^eta) - alpha/r,
//!   eta + eps + rho = -1.
//!
//! For u = r R the radial part reduces to
//!
//!   -1/2 (u'/m)' + q(r) u,
//!   q = -gamma a^2 / (2 r^4 m^3) + a / (2 r^3 m^2) + l(l+1) / (2 m r^2) - alpha/r,
//!
//! with gamma = 1 + eps - eta*rho. The Laplacian of m vanishes away from the
//! origin, so only the (m')^2 term depends on the ordering; the a/(2 r^3 m^2)
//! term is the first-derivative remainder of the 3D divergence.
//!
//! For a < 0 the mass vanishes at r = |a|. The problem is confined to
//! r > |a| (1 + 1e-6) by a hard wall, and orderings with gamma > 1, whose
//! potential is unbounded below at the wall, are rejected.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{bisect, richardson, GaussLegendre, SymTridiagonal};
use crate::oracle::RadialMesh;

/// Relative offset of the hard wall from the m* = 0 point.
pub const WALL_OFFSET: f64 = 1e-6;
pub const HERMITICITY_TOL: f64 = 1e-13;
pub const DEFAULT_ORDERING_POINTS: usize = 20_000;
const EXPONENT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderingSpec {
    pub eta: f64,
    pub eps: f64,
    pub rho: f64,
}

impl OrderingSpec {
    pub fn new(eta: f64, eps: f64, rho: f64) -> Result<Self> {
        let sum = eta + eps + rho;
        if !sum.is_finite() || (sum + 1.0).abs() > EXPONENT_SUM_TOL {
            return Err(Error::InvalidParameter {
                name: "eta + eps + rho",
                value: sum,
                reason: "ordering exponents must sum to -1",
            });
        }
        Ok(Self { eta, eps, rho })
    }

    /// m^{-1/2} p^2 m^{-1/2}.
    pub fn symmetric() -> Self {
        Self { eta: -0.5, eps: 0.0, rho: -0.5 }
    }

    /// p m^{-1} p.
    pub fn ben_daniel_duke() -> Self {
        Self { eta: 0.0, eps: -1.0, rho: 0.0 }
    }

    pub fn gora_williams() -> Self {
        Self { eta: -1.0, eps: 0.0, rho: 0.0 }
    }

    pub fn li_kuhn() -> Self {
        Self { eta: 0.0, eps: -0.5, rho: -0.5 }
    }

    pub fn mustafa_mazharimousavi() -> Self {
        Self { eta: -0.25, eps: -0.5, rho: -0.25 }
    }

    /// Coefficient of -(m')^2 / (2 m^3) in the reduced potential.
    pub fn gamma(&self) -> f64 {
        1.0 + self.eps - self.eta * self.rho
    }

    pub fn label(&self) -> String {
        let named = [
            (Self::symmetric(), "symmetric"),
            (Self::ben_daniel_duke(), "ben-daniel-duke"),
            (Self::gora_williams(), "gora-williams"),
            (Self::li_kuhn(), "li-kuhn"),
            (Self::mustafa_mazharimousavi(), "mustafa-mazharimousavi"),
        ];
        // the family is symmetric under eta <-> rho
        let swapped = Self { eta: self.rho, eps: self.eps, rho: self.eta };
        named
            .iter()
            .find(|(spec, _)| spec == self || *spec == swapped)
            .map(|(_, name)| name.to_string())
            .unwrap_or_else(|| format!("({},{},{})", self.eta, self.eps, self.rho))
    }

    /// Parses a named ordering or an `eta,eps,rho` triple.
    pub fn parse(text: &str) -> Result<Self> {
        let name = text.trim().to_ascii_lowercase();
        let named = match name.as_str() {
            "symmetric" | "sym" | "zhu-kroemer" => Some(Self::symmetric()),
            "ben-daniel-duke" | "bdd" => Some(Self::ben_daniel_duke()),
            "gora-williams" | "gw" => Some(Self::gora_williams()),
            "li-kuhn" | "lk" => Some(Self::li_kuhn()),
            "mustafa-mazharimousavi" | "mm" => Some(Self::mustafa_mazharimousavi()),
            _ => None,
        };
        if let Some(spec) = named {
            return Ok(spec);
        }
        let parts: Vec<f64> = name
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter {
                name: "ordering",
                value: f64::NAN,
                reason: "expected a named ordering or eta,eps,rho",
            })?;
        match parts.as_slice() {
            [eta, eps, rho] => Self::new(*eta, *eps, *rho),
            _ => Err(Error::InvalidParameter {
                name: "ordering",
                value: parts.len() as f64,
                reason: "expected exactly three exponents",
            }),
        }
    }
}

/// Orderings compared against the symmetric reference by default.
pub fn comparison_orderings() -> Vec<OrderingSpec> {
    vec![
        OrderingSpec::ben_daniel_duke(),
        OrderingSpec::li_kuhn(),
        OrderingSpec::mustafa_mazharimousavi(),
    ]
}

/// Radial PDM problem. The mesh gives the box and the interior point count;
/// nodes are graded quadratically toward the inner boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdmProblem {
    pub a: f64,
    pub alpha: f64,
    pub l: u32,
    pub ordering: OrderingSpec,
    pub mesh: RadialMesh,
}

impl PdmProblem {
    pub fn new(a: f64, alpha: f64, l: u32, ordering: OrderingSpec, mesh: RadialMesh) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a,
                reason: "must be finite",
            });
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and non-negative",
            });
        }
        if a < 0.0 && ordering.gamma() > 1.0 {
            return Err(Error::UnboundedOrdering {
                label: ordering.label(),
                gamma: ordering.gamma(),
            });
        }
        let problem = Self { a, alpha, l, ordering, mesh };
        if mesh.r_max() <= problem.inner_radius() {
            return Err(Error::BoxTooSmall {
                r_max: mesh.r_max(),
                required: problem.inner_radius(),
            });
        }
        Ok(problem)
    }

    /// Problem with a box sized for the lowest `count` levels.
    pub fn with_default_mesh(a: f64, alpha: f64, l: u32, ordering: OrderingSpec, count: usize) -> Result<Self> {
        Self::new(a, alpha, l, ordering, default_mesh(alpha, l, count)?)
    }

    /// Inner boundary: the hard wall for a < 0, the origin otherwise.
    pub fn inner_radius(&self) -> f64 {
        if self.a < 0.0 {
            -self.a * (1.0 + WALL_OFFSET)
        } else {
            0.0
        }
    }

    pub fn mass(&self, r: f64) -> f64 {
        1.0 + self.a / r
    }

    pub fn reduced_potential(&self, r: f64) -> f64 {
        reduced_potential(self.a, self.alpha, self.l, &self.ordering, r)
    }
}

/// Box (4 n^2 + 40) / max(alpha, 0.1) with n the highest principal number
/// requested, and the default point count.
pub fn default_mesh(alpha: f64, l: u32, count: usize) -> Result<RadialMesh> {
    let n = (count as f64) + l as f64;
    RadialMesh::new((4.0 * n * n + 40.0) / alpha.max(0.1), DEFAULT_ORDERING_POINTS)
}

/// q(r) of the reduced radial operator -1/2 (u'/m)' + q u.
pub fn reduced_potential(a: f64, alpha: f64, l: u32, ordering: &OrderingSpec, r: f64) -> f64 {
    let m = 1.0 + a / r;
    let r2 = r * r;
    let l = l as f64;
    -ordering.gamma() * a * a / (2.0 * r2 * r2 * m * m * m) + a / (2.0 * r2 * r * m * m)
        + l * (l + 1.0) / (2.0 * m * r2)
        - alpha / r
}

struct Assembly {
    matrix: SymTridiagonal,
    asymmetry: f64,
}

/// Quadratic-form discretization of int [u'^2 / (2m) + q u^2] dr on
/// r = r_in + (r_max - r_in) x^2 with uniform x and Dirichlet ends.
fn assemble(problem: &PdmProblem, n_points: usize) -> Result<Assembly> {
    let r_in = problem.inner_radius();
    let span = problem.mesh.r_max() - r_in;
    let h = 1.0 / (n_points + 1) as f64;
    let map = |x: f64| (r_in + span * x * x, 2.0 * span * x);

    let coupling = |x_mid: f64| -> Result<f64> {
        let (r, g) = map(x_mid);
        let m = problem.mass(r);
        if !(m > 0.0) {
            return Err(Error::MassNotPositive { r, mass: m });
        }
        Ok(1.0 / (m * g * h * h))
    };

    let mut diag = Vec::with_capacity(n_points);
    let mut upper = Vec::with_capacity(n_points.saturating_sub(1));
    let mut lower = Vec::with_capacity(n_points.saturating_sub(1));
    let mut weights = Vec::with_capacity(n_points);
    for i in 1..=n_points {
        let x = i as f64 * h;
        let (r, g) = map(x);
        let m = problem.mass(r);
        if !(m > 0.0) {
            return Err(Error::MassNotPositive { r, mass: m });
        }
        // each row evaluates its own half-cell couplings; the two off-diagonal
        // triangles are built independently and compared below
        let left = coupling(x - 0.5 * h)?;
        let right = coupling(x + 0.5 * h)?;
        diag.push(0.5 * (left + right) + problem.reduced_potential(r) * g);
        weights.push(g);
        if i < n_points {
            upper.push(-0.5 * right);
        }
        if i > 1 {
            lower.push(-0.5 * left);
        }
    }
    let scale = diag.iter().chain(&upper).fold(0.0f64, |m, v| m.max(v.abs()));
    let asymmetry = upper
        .iter()
        .zip(&lower)
        .fold(0.0f64, |m, (u, l)| m.max((u - l).abs()))
        / scale;
    if asymmetry > HERMITICITY_TOL {
        return Err(Error::InvalidParameter {
            name: "asymmetry",
            value: asymmetry,
            reason: "discretized Hamiltonian is not symmetric",
        });
    }
    Ok(Assembly {
        matrix: SymTridiagonal::from_generalized(&diag, &upper, &weights),
        asymmetry,
    })
}

/// Relative asymmetry max|H_ij - H_ji| / max|H| of the assembled operator.
pub fn hermiticity_defect(problem: &PdmProblem) -> Result<f64> {
    Ok(assemble(problem, problem.mesh.n_points())?.asymmetry)
}

fn eigenvalues_on(problem: &PdmProblem, n_points: usize, count: usize) -> Result<Vec<f64>> {
    let values = assemble(problem, n_points)?.matrix.lowest(count);
    if let Some((index, &eigenvalue)) = values.iter().enumerate().find(|(_, v)| **v >= 0.0) {
        return Err(Error::MeshTooCoarse { index, eigenvalue });
    }
    Ok(values)
}

/// Lowest `count` eigenvalues on the problem's mesh.
pub fn pdm_eigenvalues(problem: &PdmProblem, count: usize) -> Result<Vec<f64>> {
    eigenvalues_on(problem, problem.mesh.n_points(), count)
}

/// Lowest `count` eigenvalues Richardson-extrapolated over (h, h/2).
pub fn pdm_eigenvalues_extrapolated(problem: &PdmProblem, count: usize) -> Result<Vec<f64>> {
    let n = problem.mesh.n_points();
    let (coarse, fine) = rayon::join(
        || eigenvalues_on(problem, n, count),
        || eigenvalues_on(problem, 2 * n + 1, count),
    );
    let (coarse, fine) = (coarse?, fine?);
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| richardson(*c, *f, 2))
        .collect())
}

/// r^2 p_r^2 = 2 E r^2 + 2 (alpha + E a) r + 2 a alpha - (l + 1/2)^2.
fn classical_quadratic(a: f64, alpha: f64, l: u32, energy: f64) -> (f64, f64, f64) {
    let langer = l as f64 + 0.5;
    (2.0 * energy, 2.0 * (alpha + energy * a), 2.0 * a * alpha - langer * langer)
}

/// Classically allowed interval (r1, r2).
///
/// At r = |a| the quadratic equals -(l + 1/2)^2 for every E, so for a < 0
/// both turning points lie on the same side of the m* = 0 point and the
/// wall never bounds the classical motion.
fn allowed_interval(a: f64, alpha: f64, l: u32, energy: f64) -> Result<(f64, f64)> {
    let (qa, qb, qc) = classical_quadratic(a, alpha, l, energy);
    let disc = qb * qb - 4.0 * qa * qc;
    if !(energy < 0.0) || !(disc > 0.0) {
        return Err(Error::NoClassicalWell { energy });
    }
    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
    let (mut r1, mut r2) = (q / qa, qc / q);
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    let wall = if a < 0.0 { -a } else { 0.0 };
    if r2 <= wall {
        return Err(Error::NoClassicalWell { energy });
    }
    if r1 <= 0.0 && wall == 0.0 {
        // the action diverges at the origin: classical fall to center
        let langer = l as f64 + 0.5;
        return Err(Error::FallToCenter {
            radicand: langer * langer - 2.0 * a * alpha,
        });
    }
    Ok((r1, r2))
}

/// Radial action int p_r dr over the allowed interval at energy E < 0,
/// integrated in r = lo + (r2 - lo) sin^2(theta).
///
/// The 1/r factor peaks near theta ~ sqrt(lo / (r2 - lo)) for wide wells, so
/// the theta range is split geometrically around that scale and each panel
/// gets the full rule.
pub fn radial_action(a: f64, alpha: f64, l: u32, energy: f64, rule: &GaussLegendre) -> Result<f64> {
    let (r1, r2) = allowed_interval(a, alpha, l, energy)?;
    let lo = r1;
    let width = r2 - lo;
    let k = (-2.0 * energy).sqrt();
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let r = lo + width * s * s;
        // p_r = sqrt(2|E| (r - r1)(r2 - r)) / r with both factors formed
        // from the substitution directly
        let above = (lo - r1) + width * s * s;
        let below = width * c * c;
        k * (above * below).sqrt() / r * 2.0 * width * s * c
    };
    let mut breaks = vec![0.0];
    let mut t = lo / width;
    while t < 0.25 {
        breaks.push(t.sqrt().asin());
        t *= 8.0;
    }
    breaks.push(std::f64::consts::FRAC_PI_2);
    Ok(breaks
        .windows(2)
        .map(|w| rule.integrate(integrand, w[0], w[1]))
        .sum())
}

/// Bohr-Sommerfeld level: int p_r dr = pi (n_r + 1/2) between the turning points.
pub fn wkb_level(a: f64, alpha: f64, l: u32, n_r: u32, rule: &GaussLegendre) -> Result<f64> {
    if !(alpha > 0.0) {
        // alpha = 0 leaves any well inside r < |a|, where m* <= 0
        return Err(Error::NoClassicalWell { energy: 0.0 });
    }
    let pi = std::f64::consts::PI;
    let mismatch = |energy: f64| -> Result<f64> {
        let target = pi * (n_r as f64 + 0.5);
        match radial_action(a, alpha, l, energy, rule) {
            Ok(action) => Ok(action - target),
            Err(Error::NoClassicalWell { .. }) => Ok(-target),
            Err(e) => Err(e),
        }
    };
    let mut lo = -1.0;
    while mismatch(lo)? > 0.0 {
        lo *= 2.0;
        if lo < -1e12 {
            return Err(Error::NoClassicalWell { energy: lo });
        }
    }
    let mut hi = -1e-3 * alpha * alpha / ((n_r + l + 1) as f64).powi(2);
    while mismatch(hi)? < 0.0 {
        hi *= 0.25;
        if hi > -1e-290 {
            return Err(Error::NoClassicalWell { energy: hi });
        }
    }
    Ok(bisect(mismatch, lo, hi, 0.0, 1e-10)?.x)
}

/// Bohr-Sommerfeld levels for n_r = 0..=n_r_max.
pub fn wkb_levels(a: f64, alpha: f64, l: u32, n_r_max: u32) -> Result<Vec<f64>> {
    let rule = GaussLegendre::new(64);
    (0..=n_r_max)
        .into_par_iter()
        .map(|n_r| wkb_level(a, alpha, l, n_r, &rule))
        .collect()
}

/// Closed-form quantization (alpha + E a) / sqrt(-2E) = n_r + 1/2 + sqrt(C),
/// C = (l + 1/2)^2 - 2 a alpha, valid when both turning points lie outside
/// m* = 0. Returns None when no root exists.
pub fn wkb_closed_form(a: f64, alpha: f64, l: u32, n_r: u32) -> Option<f64> {
    let langer = l as f64 + 0.5;
    let c = langer * langer - 2.0 * a * alpha;
    if c <= 0.0 {
        return None;
    }
    let k = n_r as f64 + 0.5 + c.sqrt();
    // x = sqrt(-2E) solves (a/2) x^2 + k x - alpha = 0
    let disc = k * k + 2.0 * a * alpha;
    if disc < 0.0 {
        return None;
    }
    let x = 2.0 * alpha / (k + disc.sqrt());
    (x > 0.0).then(|| -0.5 * x * x)
}

/// Levels of the symmetric reference and of each compared ordering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingStudy {
    pub a: f64,
    pub alpha: f64,
    pub l: u32,
    pub reference: Vec<f64>,
    pub orderings: Vec<OrderingSpec>,
    pub levels: Vec<Vec<f64>>,
    pub wkb: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingRow {
    pub n_r: u32,
    pub ordering: String,
    pub energy: f64,
    /// |E_ord - E_symmetric| / |E(n_r + 1) - E(n_r)|
    pub spread: f64,
    pub energy_wkb: f64,
}

impl OrderingStudy {
    /// Extrapolated levels 0..=n_r_max + 1 for every ordering, plus WKB.
    pub fn run(a: f64, alpha: f64, l: u32, orderings: &[OrderingSpec], n_r_max: u32) -> Result<Self> {
        let count = n_r_max as usize + 2;
        let mesh = default_mesh(alpha, l, count)?;
        Self::run_on(a, alpha, l, orderings, n_r_max, mesh)
    }

    pub fn run_on(
        a: f64,
        alpha: f64,
        l: u32,
        orderings: &[OrderingSpec],
        n_r_max: u32,
        mesh: RadialMesh,
    ) -> Result<Self> {
        let count = n_r_max as usize + 2;
        let mut all = vec![OrderingSpec::symmetric()];
        all.extend_from_slice(orderings);
        let mut solved: Vec<Vec<f64>> = all
            .par_iter()
            .map(|spec| {
                let problem = PdmProblem::new(a, alpha, l, *spec, mesh)?;
                pdm_eigenvalues_extrapolated(&problem, count)
            })
            .collect::<Result<_>>()?;
        let reference = solved.remove(0);
        Ok(Self {
            a,
            alpha,
            l,
            reference,
            orderings: orderings.to_vec(),
            levels: solved,
            wkb: wkb_levels(a, alpha, l, n_r_max)?,
        })
    }

    pub fn n_r_max(&self) -> u32 {
        (self.reference.len() - 2) as u32
    }

    pub fn spacing(&self, n_r: u32) -> f64 {
        let i = n_r as usize;
        (self.reference[i + 1] - self.reference[i]).abs()
    }

    /// Largest |E_ord - E_symmetric| over the compared orderings, in units of
    /// the local level spacing.
    pub fn spread(&self, n_r: u32) -> f64 {
        let i = n_r as usize;
        self.levels
            .iter()
            .map(|levels| (levels[i] - self.reference[i]).abs())
            .fold(0.0, f64::max)
            / self.spacing(n_r)
    }

    /// |E_WKB - E_symmetric| in units of the local level spacing.
    pub fn wkb_gap(&self, n_r: u32) -> f64 {
        let i = n_r as usize;
        (self.wkb[i] - self.reference[i]).abs() / self.spacing(n_r)
    }

    pub fn rows(&self) -> Vec<OrderingRow> {
        let mut rows = Vec::new();
        for n_r in 0..=self.n_r_max() {
            let i = n_r as usize;
            let spacing = self.spacing(n_r);
            rows.push(OrderingRow {
                n_r,
                ordering: OrderingSpec::symmetric().label(),
                energy: self.reference[i],
                spread: 0.0,
                energy_wkb: self.wkb[i],
            });
            for (spec, levels) in self.orderings.iter().zip(&self.levels) {
                rows.push(OrderingRow {
                    n_r,
                    ordering: spec.label(),
                    energy: levels[i],
                    spread: (levels[i] - self.reference[i]).abs() / spacing,
                    energy_wkb: self.wkb[i],
                });
            }
        }
        rows
    }
}

/// max over `orderings` of |E_ord(n_r) - E_symmetric(n_r)| / |E(n_r+1) - E(n_r)|.
pub fn ordering_spread(a: f64, alpha: f64, l: u32, orderings: &[OrderingSpec], n_r: u32) -> Result<f64> {
    let count = n_r as usize + 2;
    let mesh = default_mesh(alpha, l, count)?;
    let mut all = vec![OrderingSpec::symmetric()];
    all.extend_from_slice(orderings);
    let solved: Vec<Vec<f64>> = all
        .par_iter()
        .map(|spec| pdm_eigenvalues_extrapolated(&PdmProblem::new(a, alpha, l, *spec, mesh)?, count))
        .collect::<Result<_>>()?;
    let i = n_r as usize;
    let reference = &solved[0];
    let spacing = (reference[i + 1] - reference[i]).abs();
    Ok(solved[1..]
        .iter()
        .map(|levels| (levels[i] - reference[i]).abs())
        .fold(0.0, f64::max)
        / spacing)
}
