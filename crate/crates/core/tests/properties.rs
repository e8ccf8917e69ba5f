use pdm_kepler::expansion::{energy_expansion, ExpansionInput};
use pdm_kepler::oracle::self_consistent_energy_default;
use pdm_kepler::ordering::{hermiticity_defect, OrderingSpec, PdmProblem, HERMITICITY_TOL};
use pdm_kepler::oracle::RadialMesh;
use pdm_kepler::spectrum::energy_exact;
use pdm_kepler::wavefunction::{normalization_check, overlap, radial_wavefunction, RadialWavefunction};
use pdm_kepler::{ModelParams, QuantumNumbers};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = QuantumNumbers> {
    (0u32..4, 0u32..4, any::<bool>()).prop_map(|(n_r, l, upper)| {
        let two_j = if upper || l == 0 { 2 * l + 1 } else { 2 * l - 1 };
        QuantumNumbers::new(n_r, l, two_j).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn binding_weakens_as_a_grows(alpha in 0.0f64..0.9, t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, qn in state()) {
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        prop_assume!(hi - lo > 1e-6);
        // a in [-5, alpha]
        let at = |t: f64| -5.0 + t * (alpha + 5.0);
        let e_lo = energy_exact(&ModelParams::new(alpha, at(lo)).unwrap(), &qn).unwrap();
        let e_hi = energy_exact(&ModelParams::new(alpha, at(hi)).unwrap(), &qn).unwrap();
        prop_assert!(e_lo.epsilon <= e_hi.epsilon);
        prop_assert!(e_lo.e_star_sq > 0.0);
    }

    #[test]
    fn boundary_is_a_single_level(alpha in 0.0f64..0.95, qn in state()) {
        let params = ModelParams::from_a_bar(alpha, 1.0).unwrap();
        prop_assert_eq!(energy_exact(&params, &qn).unwrap().epsilon, 1.0);
        let input = ExpansionInput::new(alpha, 1.0, qn).unwrap();
        prop_assert_eq!(energy_expansion(&input), 1.0);
    }

    #[test]
    fn unbound_above_the_classical_radius(alpha in 0.0f64..0.95, excess in 1e-9f64..10.0, qn in state()) {
        let params = ModelParams::new(alpha, alpha + excess).unwrap();
        let is_no_bound = matches!(energy_exact(&params, &qn), Err(pdm_kepler::Error::NoBoundState { .. }));
        prop_assert!(is_no_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn radial_functions_are_normalized(alpha in 0.0f64..0.9, a in -2.0f64..0.0, qn in state()) {
        prop_assume!(alpha > 0.05 || a < -0.05);
        let params = ModelParams::new(alpha, a).unwrap();
        let level = energy_exact(&params, &qn).unwrap();
        let wf = radial_wavefunction(&level, &qn).unwrap();
        prop_assert!(normalization_check(&wf).unwrap() < 1e-8);
        prop_assert_eq!(wf.node_count(), qn.n_r() as usize);
    }

    #[test]
    fn fixed_charge_family_orthogonal(e2 in 0.05f64..2.0, l_star in -0.9f64..3.0, i in 0u32..4, j in 0u32..4) {
        prop_assume!(i != j);
        let a = RadialWavefunction::hydrogenic(e2, l_star, i).unwrap();
        let b = RadialWavefunction::hydrogenic(e2, l_star, j).unwrap();
        prop_assert!(overlap(&a, &b).unwrap().abs() < 1e-7);
    }

    #[test]
    fn ordering_operator_is_symmetric(eta in -1.0f64..0.5, eps in -1.0f64..0.5, a in -0.5f64..0.5, l in 0u32..3) {
        let rho = -1.0 - eta - eps;
        let spec = OrderingSpec::new(eta, eps, rho).unwrap();
        prop_assume!(a >= 0.0 || spec.gamma() <= 1.0);
        let problem = PdmProblem::new(a, 1.0, l, spec, RadialMesh::new(60.0, 2000).unwrap()).unwrap();
        prop_assert!(hermiticity_defect(&problem).unwrap() < HERMITICITY_TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn oracle_agrees_off_grid(alpha in 0.05f64..0.6, t in 0.0f64..1.0, n_r in 0u32..4, l in 0u32..3, upper in any::<bool>()) {
        // a in [-0.6, min(0.6, 0.9 alpha)]
        let a = -0.6 + t * (0.6f64.min(0.9 * alpha) + 0.6);
        let two_j = if upper || l == 0 { 2 * l + 1 } else { 2 * l - 1 };
        let qn = QuantumNumbers::new(n_r, l, two_j).unwrap();
        let params = ModelParams::new(alpha, a).unwrap();
        let exact = energy_exact(&params, &qn).unwrap().epsilon;
        let oracle = self_consistent_energy_default(&params, &qn).unwrap().epsilon;
        prop_assert!(((oracle - exact) / exact).abs() < 1e-6, "{} vs {}", oracle, exact);
    }
}
