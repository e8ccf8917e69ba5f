//! Closed-form spectrum of the Dirac-Kepler problem with m*(r) = 1 + a/r.
//!
//! The squared Dirac equation reduces to a Coulomb-like radial problem with
//! effective orbital number l*, effective charge e*^2 = epsilon*alpha - a and
//! effective energy (epsilon^2 - 1)/2. Bohr quantization of that problem,
//! (epsilon^2 - 1) n*^2 + (epsilon*alpha - a)^2 = 0, is a quadratic in
//! epsilon; only the positive-energy root is returned.

use crate::error::{Error, Result};
use crate::model::{discriminant, Branch, LevelResult, ModelParams, QuantumNumbers};

/// Absolute tolerance on the defining-quadratic residual of every level.
pub const QUADRATIC_RESIDUAL_TOL: f64 = 1e-12;

fn radicand_root(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    let radicand = discriminant(params, qn);
    if radicand < 0.0 || radicand.is_nan() {
        return Err(Error::FallToCenter { radicand });
    }
    Ok(radicand.sqrt())
}

/// Effective orbital number sqrt((j+1/2)^2 + a^2 - alpha^2) - 1/2 -+ 1/2.
pub fn l_star(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    let root = radicand_root(params, qn)?;
    Ok(match qn.branch() {
        Branch::Upper => root - 1.0,
        Branch::Lower => root,
    })
}

/// n* = n_r + l* + 1.
///
/// The integer part is summed first so that partner states sharing n_r + l*
/// (e.g. nS1/2 and nP1/2) get bit-identical n*.
pub fn n_star(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    let root = radicand_root(params, qn)?;
    let base = match qn.branch() {
        Branch::Upper => qn.n_r(),
        Branch::Lower => qn.n_r() + 1,
    };
    let n = base as f64 + root;
    if n <= 0.0 {
        // only reachable for n_r = 0 on the upper branch at radicand = 0
        return Err(Error::FallToCenter {
            radicand: discriminant(params, qn),
        });
    }
    Ok(n)
}

/// epsilon - 1 for the positive root, free of the cancellation in
/// `epsilon - 1` when the binding is tiny.
fn shift_from_n_star(alpha: f64, a: f64, n: f64) -> f64 {
    let n2 = n * n;
    let big_d = n2 + alpha * alpha - a * a;
    let root_d = big_d.sqrt();
    // numerator of epsilon - 1 is (alpha - a)(n*a - alpha*sqrt(D)) / (sqrt(D) + n*)
    let mixed = if a <= 0.0 {
        n * a - alpha * root_d
    } else {
        -(alpha - a) * (alpha + a) * (n2 + alpha * alpha) / (n * a + alpha * root_d)
    };
    (alpha - a) * mixed / ((root_d + n) * (n2 + alpha * alpha))
}

fn epsilon_from_n_star(alpha: f64, a: f64, n: f64) -> f64 {
    let n2 = n * n;
    let ratio = alpha * alpha / n2;
    (a * alpha / n2 + (1.0 + (alpha * alpha - a * a) / n2).sqrt()) / (1.0 + ratio)
}

/// Residual (eps^2 - 1)/2 + (eps*alpha - a)^2 / (2 n*^2) of the defining quadratic.
pub fn quadratic_residual(params: &ModelParams, level: &LevelResult) -> f64 {
    let s = level.epsilon_minus_one;
    let charge = level.epsilon * params.alpha() - params.a();
    0.5 * s * (2.0 + s) + charge * charge / (2.0 * level.n_star * level.n_star)
}

/// Exact positive-branch energy of the level `qn`.
///
/// At the boundary a = alpha every level collapses onto epsilon = 1 with
/// e*^2 = 0; that case is returned rather than rejected.
pub fn energy_exact(params: &ModelParams, qn: &QuantumNumbers) -> Result<LevelResult> {
    let (alpha, a) = (params.alpha(), params.a());
    if a > alpha {
        return Err(Error::NoBoundState { a, alpha });
    }
    let l = l_star(params, qn)?;
    let n = n_star(params, qn)?;
    if a == alpha {
        return Ok(LevelResult {
            l_star: l,
            n_star: n,
            e_star_sq: 0.0,
            epsilon: 1.0,
            epsilon_minus_one: 0.0,
        });
    }
    let epsilon = epsilon_from_n_star(alpha, a, n);
    let level = LevelResult {
        l_star: l,
        n_star: n,
        e_star_sq: epsilon * alpha - a,
        epsilon,
        epsilon_minus_one: shift_from_n_star(alpha, a, n),
    };
    assert!(
        level.e_star_sq > 0.0,
        "positive branch produced e*^2 = {} for {qn} at {params:?}",
        level.e_star_sq
    );
    let residual = quadratic_residual(params, &level);
    assert!(
        residual.abs() < QUADRATIC_RESIDUAL_TOL,
        "quadratic residual {residual} for {qn} at {params:?}"
    );
    Ok(level)
}

fn require_free(params: &ModelParams) -> Result<()> {
    if params.alpha() != 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: params.alpha(),
            reason: "the free case requires alpha = 0",
        });
    }
    Ok(())
}

/// Levels without Coulomb coupling: epsilon = sqrt(1 - (a/n*)^2), bound for a < 0.
pub fn energy_free_case(params: &ModelParams, qn: &QuantumNumbers) -> Result<f64> {
    require_free(params)?;
    let a = params.a();
    if a >= 0.0 {
        return Err(Error::NoBoundState { a, alpha: 0.0 });
    }
    let n = n_star(params, qn)?;
    // n*^2 - a^2 expanded so that the a^2 terms cancel exactly
    let root = radicand_root(params, qn)?;
    let base = match qn.branch() {
        Branch::Upper => qn.n_r(),
        Branch::Lower => qn.n_r() + 1,
    } as f64;
    let k = qn.j_plus_half() as f64;
    let gap = base * base + 2.0 * base * root + k * k;
    Ok(gap.sqrt() / n)
}

/// Ground state (n_r = 0, l = 0, j = 1/2):
/// epsilon = (a*alpha + sqrt(1 + a^2 - alpha^2)) / (1 + a^2).
pub fn ground_state_energy(params: &ModelParams) -> Result<f64> {
    let (alpha, a) = (params.alpha(), params.a());
    if a > alpha {
        return Err(Error::NoBoundState { a, alpha });
    }
    let radicand = 1.0 + a * a - alpha * alpha;
    if radicand <= 0.0 {
        return Err(Error::FallToCenter { radicand });
    }
    Ok((a * alpha + radicand.sqrt()) / (1.0 + a * a))
}

/// Rest energy of the free (alpha = 0) ground state, read as a mean mass
/// m / sqrt(1 + a^2).
pub fn mean_effective_mass(params: &ModelParams) -> Result<f64> {
    require_free(params)?;
    let a = params.a();
    if a > 0.0 {
        return Err(Error::NoBoundState { a, alpha: 0.0 });
    }
    Ok(1.0 / (1.0 + a * a).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64, a: f64) -> ModelParams {
        ModelParams::new(alpha, a).unwrap()
    }

    fn qn(n_r: u32, l: u32, two_j: u32) -> QuantumNumbers {
        QuantumNumbers::new(n_r, l, two_j).unwrap()
    }

    /// Bisection on the defining quadratic, sharing nothing with the closed form
    /// except n*.
    fn quadratic_bisection(alpha: f64, a: f64, n: f64) -> f64 {
        let f = |e: f64| 0.5 * (e * e - 1.0) + (e * alpha - a).powi(2) / (2.0 * n * n);
        let mut lo = if alpha > 0.0 { (a / alpha).max(0.0) } else { 0.0 };
        let mut hi = 1.0;
        assert!(f(lo) < 0.0 && f(hi) >= 0.0);
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn l_star_examples() {
        assert_eq!(l_star(&params(0.0, 0.0), &qn(0, 0, 1)).unwrap(), 0.0);
        assert_eq!(l_star(&params(0.0, 0.0), &qn(0, 1, 1)).unwrap(), 1.0);
        let v = l_star(&params(0.5, 0.0), &qn(0, 0, 1)).unwrap();
        assert!((v - (0.75f64.sqrt() - 1.0)).abs() < 1e-16);
        assert!((v + 0.133_974_596_215_561_35).abs() < 1e-15);
    }

    #[test]
    fn l_star_reports_fall_to_center() {
        let err = l_star(&params(1.2, 0.0), &qn(0, 0, 1)).unwrap_err();
        assert!(matches!(err, Error::FallToCenter { radicand } if radicand < 0.0));
        // the same coupling is fine for j = 3/2
        assert!(l_star(&params(1.2, 0.0), &qn(0, 1, 3)).is_ok());
    }

    #[test]
    fn n_star_examples() {
        assert_eq!(n_star(&params(0.0, 0.0), &qn(0, 0, 1)).unwrap(), 1.0);
        let v = n_star(&params(0.0, -1.0), &qn(0, 0, 1)).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        let p = params(0.3, 0.05);
        assert_eq!(
            n_star(&p, &qn(1, 0, 1)).unwrap(),
            n_star(&p, &qn(0, 1, 1)).unwrap()
        );
    }

    #[test]
    fn n_star_matches_sum_with_l_star() {
        let p = params(0.37, -0.21);
        for q in QuantumNumbers::up_to_principal(5) {
            let n = n_star(&p, &q).unwrap();
            let sum = q.n_r() as f64 + l_star(&p, &q).unwrap() + 1.0;
            assert!((n - sum).abs() <= 4.0 * f64::EPSILON * n, "{q}");
        }
    }

    #[test]
    fn energy_exact_examples() {
        let gs = qn(0, 0, 1);
        let level = energy_exact(&params(0.5, 0.0), &gs).unwrap();
        assert!((level.epsilon - 0.75f64.sqrt()).abs() < 1e-15);

        for q in QuantumNumbers::up_to_principal(3) {
            let level = energy_exact(&params(0.3, 0.3), &q).unwrap();
            assert_eq!(level.epsilon, 1.0);
        }

        // frozen from a 40-digit bisection on the quadratic
        let level = energy_exact(&params(0.2, -0.4), &gs).unwrap();
        assert!((level.epsilon - 0.843_362_521_056_755_36).abs() < 1e-15);
        let n = level.n_star;
        assert!((level.epsilon - quadratic_bisection(0.2, -0.4, n)).abs() < 1e-14);
        let excited = energy_exact(&params(0.2, -0.4), &qn(2, 0, 1)).unwrap();
        assert!((excited.epsilon - 0.980_816_585_216_586_26).abs() < 1e-15);
    }

    #[test]
    fn energy_exact_error_paths() {
        let gs = qn(0, 0, 1);
        assert_eq!(
            energy_exact(&params(0.1, 0.2), &gs),
            Err(Error::NoBoundState { a: 0.2, alpha: 0.1 })
        );
        assert!(matches!(
            energy_exact(&params(1.5, 0.0), &gs),
            Err(Error::FallToCenter { .. })
        ));
    }

    #[test]
    fn level_fields_consistent() {
        let p = params(0.1, 0.05);
        let level = energy_exact(&p, &qn(0, 0, 1)).unwrap();
        assert!((level.epsilon - 0.998_746_077_065_899_01).abs() < 1e-15);
        assert!((level.e_star_sq - (level.epsilon * 0.1 - 0.05)).abs() < 1e-17);
        let d = level.epsilon - 1.0 - level.epsilon_minus_one;
        assert!(d.abs() < 4.5e-16, "{d:e}");
        let shift = -1.253_922_934_100_990_5e-3;
        assert!((level.epsilon_minus_one / shift - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_case_examples() {
        let gs = qn(0, 0, 1);
        let v = energy_free_case(&params(0.0, -1.0), &gs).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        // a^2/(2 n*^2) with n*^2 = 1 + 1e-6
        let weak = energy_free_case(&params(0.0, -0.001), &gs).unwrap();
        assert!((weak - 0.999_999_500_000_375).abs() < 1e-15);
        let deep = energy_free_case(&params(0.0, -100.0), &gs).unwrap();
        assert!((deep - 0.009_999_500_037_496_875).abs() < 1e-15);
        assert!((deep - 1.0 / 100.0).abs() < 1e-6);
        assert!(energy_free_case(&params(0.0, 0.0), &gs).is_err());
        assert!(energy_free_case(&params(0.1, -1.0), &gs).is_err());
    }

    #[test]
    fn free_case_agrees_with_exact() {
        for a in [-0.001, -0.5, -1.0, -3.0, -100.0] {
            for q in QuantumNumbers::up_to_principal(4) {
                let p = params(0.0, a);
                let free = energy_free_case(&p, &q).unwrap();
                let exact = energy_exact(&p, &q).unwrap().epsilon;
                assert!((free - exact).abs() <= 1e-14, "a={a} {q}: {free} vs {exact}");
            }
        }
    }

    #[test]
    fn ground_state_examples() {
        assert!((ground_state_energy(&params(0.0, -1.0)).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(ground_state_energy(&params(0.0, 0.0)).unwrap(), 1.0);
        let v = ground_state_energy(&params(0.3, 0.1)).unwrap();
        assert!((v - 0.979_372_578_873_805_85).abs() < 1e-15);
        let n = n_star(&params(0.3, 0.1), &qn(0, 0, 1)).unwrap();
        assert!((v - quadratic_bisection(0.3, 0.1, n)).abs() < 1e-14);
    }

    #[test]
    fn mean_mass_examples() {
        let m = |a| mean_effective_mass(&params(0.0, a)).unwrap();
        assert!((m(-1.0) - 0.5f64.sqrt()).abs() < 2e-16);
        assert_eq!(m(0.0), 1.0);
        assert!((m(-3.0) - 0.316_227_766_016_837_93).abs() < 2e-16);
        for a in [-0.2, -1.0, -7.5] {
            let g = ground_state_energy(&params(0.0, a)).unwrap();
            assert!((g - m(a)).abs() < 1e-15);
        }
        assert!(mean_effective_mass(&params(0.0, 0.5)).is_err());
    }

    #[test]
    fn monotone_binding_in_a() {
        for q in [qn(0, 0, 1), qn(1, 1, 1), qn(2, 2, 5)] {
            let mut prev = -1.0;
            for i in 0..=60 {
                let a = -3.0 + i as f64 * (3.3 / 60.0);
                let a = a.min(0.3);
                let e = energy_exact(&params(0.3, a), &q).unwrap().epsilon;
                assert!(e >= prev, "{q} a={a}");
                prev = e;
            }
        }
    }

    proptest! {
        #[test]
        fn quadratic_residual_and_branch(
            alpha in 0.0f64..0.95,
            t in 0.0f64..1.0,
            n_r in 0u32..6,
            l in 0u32..4,
            upper in any::<bool>(),
        ) {
            // a spans [-3, alpha)
            let a = -3.0 + t * (alpha + 3.0) * 0.999;
            let two_j = if upper || l == 0 { 2 * l + 1 } else { 2 * l - 1 };
            let q = qn(n_r, l, two_j);
            let p = params(alpha, a);
            let level = energy_exact(&p, &q).unwrap();
            prop_assert!(quadratic_residual(&p, &level).abs() < QUADRATIC_RESIDUAL_TOL);
            prop_assert!(level.e_star_sq > 0.0);
            prop_assert!(level.epsilon > 0.0 && level.epsilon <= 1.0);
            prop_assert!((level.epsilon - 1.0 - level.epsilon_minus_one).abs() < 4e-16);
        }

        #[test]
        fn s_p_degeneracy_is_exact(alpha in 0.0f64..0.9, a in -2.0f64..0.0, n in 2u32..8) {
            let p = params(alpha, a.min(alpha));
            let s = energy_exact(&p, &qn(n - 1, 0, 1)).unwrap();
            let pst = energy_exact(&p, &qn(n - 2, 1, 1)).unwrap();
            prop_assert_eq!(s.epsilon, pst.epsilon);
        }

        #[test]
        fn sommerfeld_reduction(alpha in 0.0f64..0.99, n_r in 0u32..5, l in 0u32..4) {
            let q = qn(n_r, l, 2 * l + 1);
            let k = q.j_plus_half() as f64;
            let n = n_r as f64 + (k * k - alpha * alpha).sqrt();
            let reference = 1.0 / (1.0 + (alpha / n).powi(2)).sqrt();
            let e = energy_exact(&params(alpha, 0.0), &q).unwrap().epsilon;
            prop_assert!(((e - reference) / reference).abs() <= 1e-14);
        }
    }
}
