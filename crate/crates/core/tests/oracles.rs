use amk_core::oracle::fock::{displace_first_mode, twin_beam_ket};
use amk_core::oracle::{
    direct_conditionals_quadrature, helstrom_fock, mc_receiver, onoff_prob_quadrature, FockState,
    McReceiver,
};
use amk_core::{
    helstrom_pe, ke_conditionals, qe_ideal, ChannelBudget, DirectReceiverConfig, NoiseParams,
    SingleModeState,
};

#[test]
fn twin_beam_helstrom_matches_closed_form() {
    let dim = 24;
    for &(n, beta) in &[(0.6, 0.5), (1.5, 2.0 / 3.0), (2.0, 0.25)] {
        let budget = ChannelBudget::new(n, beta).unwrap();
        assert!(budget.twb_photons() <= 1.0);
        let seed = twin_beam_ket(budget.twb_parameter(), dim);
        let displaced = displace_first_mode(&seed, budget.amplitude(), dim);
        let out = helstrom_fock(
            &FockState::from_ket(&seed).unwrap(),
            &FockState::from_ket(&displaced).unwrap(),
        )
        .unwrap();
        let expect = qe_ideal(n, beta).unwrap();
        assert!((out.error_probability - expect).abs() < 1e-8, "N={n} beta={beta}");
    }
}

#[test]
fn single_mode_helstrom_converges_with_dimension() {
    let n: f64 = 2.0;
    let exact = helstrom_pe(n).unwrap();
    let errors: Vec<f64> = [10, 20, 40]
        .iter()
        .map(|&dim| {
            let out = helstrom_fock(
                &FockState::vacuum(dim).unwrap(),
                &FockState::coherent((2.0 * n).sqrt(), dim).unwrap(),
            )
            .unwrap();
            (out.error_probability - exact).abs()
        })
        .collect();
    assert!(errors[0] > errors[2]);
    assert!(errors[2] < 1e-12, "{errors:?}");
}

#[test]
fn displaced_thermal_helstrom_is_below_half() {
    let state = SingleModeState::new(1.0, 0.2).unwrap();
    let seed = FockState::thermal(0.2, 40).unwrap();
    let disp = FockState::displaced_thermal(&state, 40).unwrap();
    let pe = helstrom_fock(&seed, &disp).unwrap().error_probability;
    // noise can only hurt relative to the pure pair of the same amplitude
    assert!(pe > helstrom_pe(0.5).unwrap() && pe < 0.5);
}

#[test]
fn quadrature_agrees_with_conditionals() {
    let cfg = DirectReceiverConfig::new(0.97).unwrap();
    let noise = NoiseParams::new(0.9, 0.15, 0.12).unwrap();
    let closed = ke_conditionals(1.7, &cfg, &noise).unwrap();
    let quad = direct_conditionals_quadrature(1.7, &cfg, &noise).unwrap();
    assert!((closed.miss - quad.miss).abs() < 1e-10);
    assert!((closed.false_alarm - quad.false_alarm).abs() < 1e-10);
}

#[test]
fn quadrature_step_halving_small() {
    let cfg = DirectReceiverConfig::new(0.99).unwrap();
    for &(amp, nbar, reference) in &[(0.0, 0.05, -10.0), (2.5, 0.3, -24.0), (0.4, 0.0, 0.0)] {
        let input = SingleModeState::new(amp, nbar).unwrap();
        let out = onoff_prob_quadrature(&input, reference, &cfg, 0.8).unwrap();
        assert!(out.refinement_change < 1e-8);
    }
}

#[test]
fn monte_carlo_is_reproducible_across_runs() {
    let noise = NoiseParams::new(0.85, 0.1, 0.05).unwrap();
    let setup = McReceiver::Heterodyne { n: 2.0, beta: 0.2, noise };
    let a = mc_receiver(&setup, 500_000, 42).unwrap();
    let b = mc_receiver(&setup, 500_000, 42).unwrap();
    assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    assert_eq!(a.shots, 500_000);
    assert_eq!(a.seed, 42);
}
