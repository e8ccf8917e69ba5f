//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::{Command, ExitCode};
use std::time::Instant;

use pdm_kepler::expansion::{
    bohr_term, leading_correction, renormalized_mass, residual_order_probe, residual_ratios, ExpansionInput,
};
use pdm_kepler::oracle::{self_consistent_energy_default, standard_grid};
use pdm_kepler::ordering::{comparison_orderings, OrderingStudy};
use pdm_kepler::spectrum::{energy_exact, ground_state_energy, n_star};
use pdm_kepler::wavefunction::{normalization_check, radial_wavefunction};
use pdm_kepler::{Error, ModelParams, QuantumNumbers};
use rayon::prelude::*;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

/// Dirac-Coulomb fine-structure formula.
fn sommerfeld(alpha: f64, qn: &QuantumNumbers) -> f64 {
    let k = qn.j_plus_half() as f64;
    let n = qn.principal() as f64;
    let denom = n - k + (k * k - alpha * alpha).sqrt();
    1.0 / (1.0 + (alpha / denom).powi(2)).sqrt()
}

fn sommerfeld_reduction() -> Verdict {
    let mut worst = 0.0f64;
    for alpha in [0.01, 0.1, 0.5] {
        let params = ModelParams::new(alpha, 0.0).unwrap();
        for qn in QuantumNumbers::up_to_principal(3) {
            let exact = energy_exact(&params, &qn).unwrap().epsilon;
            let reference = sommerfeld(alpha, &qn);
            worst = worst.max(((exact - reference) / reference).abs());
        }
    }
    verdict(worst <= 1e-14, format!("max relative deviation {worst:.2e} (tol 1e-14)"))
}

fn single_level_boundary() -> Verdict {
    let mut worst = 0.0f64;
    let mut count = 0;
    for alpha in [0.0073, 0.1, 0.3, 0.6, 0.9] {
        let params = ModelParams::from_a_bar(alpha, 1.0).unwrap();
        for qn in QuantumNumbers::up_to_principal(6) {
            let level = energy_exact(&params, &qn).unwrap();
            worst = worst.max((level.epsilon - 1.0).abs());
            count += 1;
        }
    }
    verdict(worst <= 1e-12, format!("{count} levels, max |epsilon - 1| = {worst:.2e} (tol 1e-12)"))
}

fn free_case() -> Verdict {
    let mut worst = 0.0f64;
    for a in [-0.5, -1.0, -3.0] {
        let params = ModelParams::new(0.0, a).unwrap();
        for qn in QuantumNumbers::up_to_principal(4) {
            let n = n_star(&params, &qn).unwrap();
            let expected = (1.0 - (a / n).powi(2)).sqrt();
            worst = worst.max((energy_exact(&params, &qn).unwrap().epsilon - expected).abs());
        }
        let ground = ground_state_energy(&params).unwrap();
        worst = worst.max((ground - 1.0 / (1.0 + a * a).sqrt()).abs());
        let via_exact = energy_exact(&params, &QuantumNumbers::s_half(0)).unwrap().epsilon;
        worst = worst.max((via_exact - 1.0 / (1.0 + a * a).sqrt()).abs());
    }
    verdict(worst <= 1e-14, format!("max deviation {worst:.2e} (tol 1e-14)"))
}

fn oracle_agreement() -> Verdict {
    let cases = standard_grid();
    let results: Vec<Result<f64, Error>> = cases
        .par_iter()
        .map(|(params, qn)| {
            let exact = energy_exact(params, qn)?.epsilon;
            let oracle = self_consistent_energy_default(params, qn)?.epsilon;
            Ok(((oracle - exact) / exact).abs())
        })
        .collect();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for ((params, qn), result) in cases.iter().zip(&results) {
        match result {
            Ok(dev) => {
                worst = worst.max(*dev);
                if *dev > 1e-6 {
                    failures.push(format!("{qn} alpha={} a={}: {dev:.2e}", params.alpha(), params.a()));
                }
            }
            Err(e) => failures.push(format!("{qn} alpha={} a={}: {e}", params.alpha(), params.a())),
        }
    }
    let mut detail = format!("{} cases, max relative deviation {worst:.2e} (tol 1e-6)", cases.len());
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join("; ")));
    }
    verdict(failures.is_empty(), detail)
}

fn degeneracy() -> Verdict {
    let mut analytic_ok = true;
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for alpha in [0.1, 0.3, 0.6] {
        for a in [-0.5, 0.0, 0.5 * alpha] {
            let params = ModelParams::new(alpha, a).unwrap();
            for n_r in 1..=2 {
                let s = QuantumNumbers::s_half(n_r);
                let p = QuantumNumbers::new(n_r - 1, 1, 1).unwrap();
                let (es, ep) = (energy_exact(&params, &s).unwrap(), energy_exact(&params, &p).unwrap());
                analytic_ok &= es.epsilon == ep.epsilon;
                match (self_consistent_energy_default(&params, &s), self_consistent_energy_default(&params, &p)) {
                    (Ok(os), Ok(op)) => worst = worst.max(((os.epsilon - op.epsilon) / os.epsilon).abs()),
                    (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
                }
            }
        }
    }
    let passed = analytic_ok && errors.is_empty() && worst <= 1e-6;
    verdict(
        passed,
        format!(
            "analytic identical: {analytic_ok}; oracle max relative split {worst:.2e} (tol 1e-6){}",
            if errors.is_empty() { String::new() } else { format!("; errors: {}", errors.join("; ")) }
        ),
    )
}

fn expansion_order() -> Verdict {
    let mut ratios = Vec::new();
    for a_bar in [0.0, 0.3, 0.8] {
        for qn in [QuantumNumbers::s_half(0), QuantumNumbers::s_half(1)] {
            let points = residual_order_probe(a_bar, qn, &[0.02, 0.01]).unwrap();
            ratios.push((a_bar, qn, residual_ratios(&points)[0]));
        }
    }
    let passed = ratios.iter().all(|(_, _, r)| ((r - 64.0) / 64.0).abs() <= 0.2);
    let listing: Vec<String> = ratios
        .iter()
        .map(|(a_bar, qn, r)| format!("abar={a_bar} {qn}: {r:.2}"))
        .collect();
    verdict(passed, format!("ratios {} (64 +- 20%)", listing.join(", ")))
}

fn mass_renormalization() -> Verdict {
    let mut worst = 0.0f64;
    let mut numeric = 0.0f64;
    for a_bar in [-0.5, 0.0, 0.25, 0.6, 0.9] {
        for qn in [QuantumNumbers::s_half(0), QuantumNumbers::new(1, 1, 3).unwrap()] {
            let alpha = 0.01;
            let input = ExpansionInput::new(alpha, a_bar, qn).unwrap();
            let term = leading_correction(&input);
            let bohr = bohr_term(renormalized_mass(a_bar), alpha, qn.principal());
            worst = worst.max(((term - bohr) / bohr).abs());
            // cross-check the coefficient against the exact spectrum at small alpha
            let small = 1e-4;
            let exact = energy_exact(&ModelParams::from_a_bar(small, a_bar).unwrap(), &qn).unwrap();
            let coefficient = exact.epsilon_minus_one / (small * small);
            let expected = bohr_term(renormalized_mass(a_bar), 1.0, qn.principal());
            numeric = numeric.max(((coefficient - expected) / expected).abs());
        }
    }
    verdict(
        worst <= 1e-14 && numeric <= 1e-6,
        format!("term vs Bohr(m(1-abar)^2) {worst:.2e} (tol 1e-14); exact alpha^2 coefficient at alpha=1e-4 within {numeric:.2e}"),
    )
}

fn wavefunction_integrity() -> Verdict {
    let cases = standard_grid();
    let results: Vec<Result<(f64, bool, f64), Error>> = cases
        .par_iter()
        .map(|(params, qn)| {
            let level = energy_exact(params, qn)?;
            let wf = radial_wavefunction(&level, qn)?;
            let norm = normalization_check(&wf)?;
            let nodes_ok = wf.node_count() == qn.n_r() as usize;
            // rho in [1e-7, 1e-5]
            let to_r = |rho: f64| rho * wf.n_star / (2.0 * wf.e_star_sq);
            let slope = wf.near_origin_exponent(to_r(1e-7), to_r(1e-5));
            Ok((norm, nodes_ok, (slope - wf.l_star).abs()))
        })
        .collect();
    let mut worst_norm = 0.0f64;
    let mut worst_slope = 0.0f64;
    let mut bad_nodes = 0;
    let mut errors = Vec::new();
    for r in &results {
        match r {
            Ok((norm, nodes_ok, slope)) => {
                worst_norm = worst_norm.max(*norm);
                worst_slope = worst_slope.max(*slope);
                bad_nodes += usize::from(!nodes_ok);
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let passed = errors.is_empty() && worst_norm <= 1e-8 && bad_nodes == 0 && worst_slope <= 1e-3;
    verdict(
        passed,
        format!(
            "{} states: max normalization error {worst_norm:.2e} (tol 1e-8), node mismatches {bad_nodes}, max exponent error {worst_slope:.2e} (tol 1e-3){}",
            cases.len(),
            if errors.is_empty() { String::new() } else { format!("; errors: {}", errors.join("; ")) }
        ),
    )
}

fn ordering_insensitivity() -> Verdict {
    let study = match OrderingStudy::run(-0.3, 1.0, 0, &comparison_orderings(), 30) {
        Ok(s) => s,
        Err(e) => return verdict(false, format!("study failed: {e}")),
    };
    let (s5, s30) = (study.spread(5), study.spread(30));
    let (w5, w30) = (study.wkb_gap(5), study.wkb_gap(30));
    verdict(
        s30 < s5 && w30 < w5,
        format!("spread n_r=5: {s5:.4}, n_r=30: {s30:.4}; |E_WKB - E_sym|/spacing n_r=5: {w5:.4}, n_r=30: {w30:.4}"),
    )
}

fn error_paths() -> Verdict {
    let gs = QuantumNumbers::s_half(0);
    let mut checks = Vec::new();
    for (alpha, a) in [(0.1, 0.1000001), (0.1, 0.5), (0.0, 1e-9), (0.0, 2.0)] {
        let params = ModelParams::new(alpha, a).unwrap();
        checks.push(matches!(energy_exact(&params, &gs), Err(Error::NoBoundState { .. })));
    }
    let critical = ModelParams::new(1.2, 0.1).unwrap();
    checks.push(matches!(energy_exact(&critical, &gs), Err(Error::FallToCenter { .. })));
    let library_ok = checks.iter().all(|c| *c);

    let bin = env!("CARGO_BIN_EXE_pdm-kepler");
    let code = |args: &[&str]| Command::new(bin).args(args).output().map(|o| o.status.code());
    let unbound = code(&["spectrum", "--alpha", "0.1", "--a", "0.5"]);
    let falling = code(&["spectrum", "--alpha", "1.2", "--a", "0.1"]);
    let cli_ok = matches!(unbound, Ok(Some(2))) && matches!(falling, Ok(Some(2)));
    verdict(
        library_ok && cli_ok,
        format!("typed errors: {library_ok}; CLI exit codes no-bound {unbound:?}, fall-to-center {falling:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("Sommerfeld reduction", sommerfeld_reduction),
        ("single-level boundary", single_level_boundary),
        ("free-case spectrum", free_case),
        ("oracle agreement", oracle_agreement),
        ("S1/2-P1/2 degeneracy", degeneracy),
        ("expansion order", expansion_order),
        ("mass-renormalization coefficient", mass_renormalization),
        ("wavefunction integrity", wavefunction_integrity),
        ("ordering insensitivity", ordering_insensitivity),
        ("error paths", error_paths),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let tag = if v.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!v.passed);
        println!("{tag} criterion {:>2} {name}: {} [{:.2} s]", i + 1, v.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
