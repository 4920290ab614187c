//! Direct (on/off) and homodyne receivers for the coherent AMK pair
//! `{|0⟩, |α⟩}` with `N = α²/2`.

use serde::Serialize;

use crate::channel::{evolve_single_mode, NoiseParams, SingleModeState};
use crate::error::{check, check_energy, Result};
use crate::special::half_erfc;

/// Beam-splitter transmissivity `τ = cos²φ` used to null the signal
/// before the on/off detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectReceiverConfig {
    transmissivity: f64,
}

impl DirectReceiverConfig {
    pub const DEFAULT_TRANSMISSIVITY: f64 = 0.99;

    pub fn new(transmissivity: f64) -> Result<Self> {
        check(
            transmissivity > 0.0 && transmissivity <= 1.0,
            "transmissivity",
            "0 < transmissivity <= 1",
            transmissivity,
        )?;
        Ok(Self { transmissivity })
    }

    pub fn transmissivity(&self) -> f64 {
        self.transmissivity
    }

    /// Mixing angle `φ` with `cos²φ = τ`.
    pub fn mixing_angle(&self) -> f64 {
        self.transmissivity.sqrt().acos()
    }

    /// Reference amplitude `β' = -α'/tanφ` that nulls a received amplitude `α'`.
    /// Infinite when `τ = 1`.
    pub fn nulling_reference(&self, received_amplitude: f64) -> f64 {
        let tan_phi = ((1.0 - self.transmissivity) / self.transmissivity).sqrt();
        -received_amplitude / tan_phi
    }
}

impl Default for DirectReceiverConfig {
    fn default() -> Self {
        Self {
            transmissivity: Self::DEFAULT_TRANSMISSIVITY,
        }
    }
}

/// Homodyne decision threshold `Λ`: outcomes above it are read as `|α⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecisionThreshold(f64);

impl DecisionThreshold {
    pub fn new(value: f64) -> Result<Self> {
        check(!value.is_nan(), "lambda_threshold", "not NaN", value)?;
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The two conditional error probabilities of a binary receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Conditionals {
    /// Inferring the seed when the displaced state was sent, `K(0|α)`.
    pub miss: f64,
    /// Inferring the displaced state when the seed was sent, `K(α|0)`.
    pub false_alarm: f64,
}

impl Conditionals {
    pub fn average(&self) -> f64 {
        0.5 * (self.miss + self.false_alarm)
    }
}

pub(crate) fn single_mode_amplitude(n: f64) -> f64 {
    (2.0 * n).sqrt()
}

/// Ideal direct detection: `exp(-2Nτ)/2`.
pub fn ke_ideal(n: f64, cfg: &DirectReceiverConfig) -> Result<f64> {
    check_energy(n)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    Ok(0.5 * (-2.0 * n * cfg.transmissivity).exp())
}

/// Conditional probabilities of the noise-matched on/off receiver.
///
/// The signal arm carries a displaced thermal state; the reference
/// `β' = -α'/tanφ` nulls the displaced symbol, leaving only the
/// transmitted thermal photons `ηM'τ` to trigger false clicks.
pub fn ke_conditionals(
    n: f64,
    cfg: &DirectReceiverConfig,
    noise: &NoiseParams,
) -> Result<Conditionals> {
    check_energy(n)?;
    let tau = cfg.transmissivity;
    let eta = noise.eta();
    let s = eta * noise.added_thermal() * tau;
    let miss = s / (1.0 + s);
    let false_alarm = (-2.0 * n * eta * noise.decay() * tau / (1.0 + s)).exp() / (1.0 + s);
    Ok(Conditionals { miss, false_alarm })
}

/// Noisy direct detection error probability.
pub fn ke_noisy(n: f64, cfg: &DirectReceiverConfig, noise: &NoiseParams) -> Result<f64> {
    check_energy(n)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    Ok(ke_conditionals(n, cfg, noise)?.average())
}

/// Variance of the noisy homodyne outcome: `¼ + ½M' + (1-η)/(4η)`.
pub fn homodyne_variance(state: &SingleModeState, eta: f64) -> f64 {
    state.quadrature_variance() + (1.0 - eta) / (4.0 * eta)
}

/// Density of the homodyne outcome `x` for a displaced thermal input seen by a
/// detector of efficiency `eta`.
pub fn homodyne_density(x: f64, state: &SingleModeState, eta: f64) -> Result<f64> {
    check(eta > 0.0 && eta <= 1.0, "eta", "0 < eta <= 1", eta)?;
    let var = homodyne_variance(state, eta);
    let d = x - state.amplitude;
    Ok((-d * d / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
}

/// Ideal homodyne receiver with the optimal threshold `α/2`.
pub fn he_ideal(n: f64) -> Result<f64> {
    check_energy(n)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    Ok(half_erfc(n.sqrt()))
}

pub fn he_noisy(n: f64, noise: &NoiseParams) -> Result<f64> {
    check_energy(n)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    let eta = noise.eta();
    let arg = (eta * n).sqrt() * (-0.5 * noise.gamma_t()).exp()
        / (1.0 + 2.0 * eta * noise.added_thermal()).sqrt();
    Ok(half_erfc(arg))
}

/// Optimal homodyne threshold `Λ = ½ α e^{-Γt/2}`.
pub fn homodyne_optimal_threshold(n: f64, noise: &NoiseParams) -> Result<DecisionThreshold> {
    check_energy(n)?;
    Ok(DecisionThreshold(
        0.5 * single_mode_amplitude(n) * (-0.5 * noise.gamma_t()).exp(),
    ))
}

/// Both homodyne error tails at an arbitrary threshold.
pub fn he_conditionals(
    n: f64,
    noise: &NoiseParams,
    threshold: DecisionThreshold,
) -> Result<Conditionals> {
    check_energy(n)?;
    let received = evolve_single_mode(single_mode_amplitude(n), noise);
    let width = (2.0 * homodyne_variance(&received, noise.eta())).sqrt();
    let lambda = threshold.0;
    Ok(Conditionals {
        miss: half_erfc((received.amplitude - lambda) / width),
        false_alarm: half_erfc(lambda / width),
    })
}

pub fn he_with_threshold(n: f64, noise: &NoiseParams, threshold: DecisionThreshold) -> Result<f64> {
    Ok(he_conditionals(n, noise, threshold)?.average())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noisy(eta: f64, gt: f64, m: f64) -> NoiseParams {
        NoiseParams::new(eta, gt, m).unwrap()
    }

    #[test]
    fn degenerate_energy_is_one_half() {
        let cfg = DirectReceiverConfig::default();
        assert_eq!(ke_ideal(0.0, &cfg).unwrap(), 0.5);
        assert_eq!(ke_noisy(0.0, &cfg, &noisy(0.5, 0.3, 0.3)).unwrap(), 0.5);
        assert_eq!(he_ideal(0.0).unwrap(), 0.5);
        assert_eq!(he_noisy(0.0, &noisy(0.5, 0.3, 0.3)).unwrap(), 0.5);
    }

    #[test]
    fn rejects_negative_energy() {
        let cfg = DirectReceiverConfig::default();
        assert!(ke_ideal(-1.0, &cfg).is_err());
        assert!(ke_noisy(-1e-9, &cfg, &NoiseParams::IDEAL).is_err());
        assert!(he_ideal(-0.1).is_err());
        assert!(he_noisy(f64::NAN, &NoiseParams::IDEAL).is_err());
        assert!(DirectReceiverConfig::new(0.0).is_err());
        assert!(DirectReceiverConfig::new(1.5).is_err());
    }

    #[test]
    fn ideal_direct_values() {
        let cfg = DirectReceiverConfig::new(1.0).unwrap();
        assert!((ke_ideal(1.0, &cfg).unwrap() - 0.5 * (-2.0f64).exp()).abs() < 1e-16);
        let c = ke_conditionals(1.0, &cfg, &NoiseParams::IDEAL).unwrap();
        assert_eq!(c.miss, 0.0);
    }

    #[test]
    fn noisy_direct_reduces_to_ideal() {
        let cfg = DirectReceiverConfig::default();
        for i in 0..100 {
            let n = 0.05 + 0.1 * i as f64;
            let a = ke_noisy(n, &cfg, &NoiseParams::IDEAL).unwrap();
            let b = ke_ideal(n, &cfg).unwrap();
            assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn noisy_direct_reference_value() {
        // 2D phase-space quadrature (scipy dblquad) of the two conditionals
        let cfg = DirectReceiverConfig::new(0.99).unwrap();
        let v = ke_noisy(2.0, &cfg, &noisy(0.95, 0.1, 0.1)).unwrap();
        assert!((v - 0.0214129300089354).abs() < 1e-12, "{v}");
    }

    #[test]
    fn noisy_direct_large_energy_floor() {
        let cfg = DirectReceiverConfig::new(0.99).unwrap();
        let noise = noisy(0.95, 0.1, 0.2);
        let s = 0.95 * 0.2 * (1.0 - f64::exp(-0.1)) * 0.99;
        let floor = s / (2.0 * (1.0 + s));
        assert!((ke_noisy(1e4, &cfg, &noise).unwrap() - floor).abs() < 1e-12);
    }

    #[test]
    fn homodyne_density_shape() {
        let vac = SingleModeState::coherent(0.0);
        for &x in &[-1.0, -0.2, 0.0, 0.7] {
            let expect = (2.0 / std::f64::consts::PI).sqrt() * (-2.0f64 * x * x).exp();
            assert!((homodyne_density(x, &vac, 1.0).unwrap() - expect).abs() < 1e-15);
        }
        let s = SingleModeState::new(1.0, 0.2).unwrap();
        assert!((homodyne_variance(&s, 0.8) - (0.25 + 0.1 + 0.0625)).abs() < 1e-15);
        // integrates to one and peaks at the amplitude
        let h = 1e-3;
        let mass: f64 = (-8000..=8000)
            .map(|i| homodyne_density(1.0 + i as f64 * h, &s, 0.8).unwrap())
            .sum::<f64>()
            * h;
        assert!((mass - 1.0).abs() < 1e-12);
        let peak = homodyne_density(1.0, &s, 0.8).unwrap();
        assert!(peak > homodyne_density(1.001, &s, 0.8).unwrap());
        assert!(peak > homodyne_density(0.999, &s, 0.8).unwrap());
    }

    #[test]
    fn homodyne_ideal_values_and_asymptote() {
        assert!((he_ideal(1.0).unwrap() - 0.078_649_603_525_142_57).abs() < 1e-16);
        let mut last = f64::INFINITY;
        for &n in &[10.0, 50.0, 200.0] {
            let ratio = he_ideal(n).unwrap() / ((-n).exp() / (2.0 * (std::f64::consts::PI * n).sqrt()));
            assert!((ratio - 1.0).abs() < last);
            last = (ratio - 1.0).abs();
        }
        assert!(last < 5e-3);
    }

    #[test]
    fn homodyne_noisy_reduces_and_vanishes() {
        for i in 0..100 {
            let n = 0.05 + 0.1 * i as f64;
            assert!((he_noisy(n, &NoiseParams::IDEAL).unwrap() - he_ideal(n).unwrap()).abs() <= 1e-14);
        }
        assert!(he_noisy(1e4, &noisy(0.5, 0.5, 0.5)).unwrap() < 1e-100);
        assert!((he_noisy(2.0, &noisy(0.85, 0.1, 0.05)).unwrap() - 0.040324799093922).abs() < 1e-14);
    }

    #[test]
    fn threshold_rule() {
        let n = 1.0;
        let opt = homodyne_optimal_threshold(n, &NoiseParams::IDEAL).unwrap();
        assert!((opt.value() - 0.5 * f64::sqrt(2.0)).abs() < 1e-15);
        let at_opt = he_with_threshold(n, &NoiseParams::IDEAL, opt).unwrap();
        assert!((at_opt - he_ideal(n).unwrap()).abs() < 1e-15);
        for &far in &[1e6, -1e6] {
            let v = he_with_threshold(n, &NoiseParams::IDEAL, DecisionThreshold::new(far).unwrap()).unwrap();
            assert_eq!(v, 0.5);
        }
        let noise = noisy(0.8, 0.2, 0.1);
        let opt = homodyne_optimal_threshold(n, &noise).unwrap();
        assert!((he_with_threshold(n, &noise, opt).unwrap() - he_noisy(n, &noise).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn bounds_and_monotonicity_grid() {
        let cfg = DirectReceiverConfig::default();
        let ns: Vec<f64> = (0..200).map(|i| 0.01 + i as f64 * 0.05).collect();
        for &eta in &[0.5, 0.75, 1.0] {
            for &gt in &[0.0, 0.25, 0.5] {
                for &m in &[0.0, 0.25, 0.5] {
                    let noise = noisy(eta, gt, m);
                    let mut prev = (0.5, 0.5);
                    for &n in &ns {
                        let k = ke_noisy(n, &cfg, &noise).unwrap();
                        let h = he_noisy(n, &noise).unwrap();
                        assert!(k > 0.0 && k <= 0.5 && h > 0.0 && h <= 0.5);
                        assert!(k < prev.0 && h < prev.1);
                        prev = (k, h);
                    }
                }
            }
        }
    }

    #[test]
    fn homodyne_non_increasing_in_efficiency() {
        for &n in &[0.1, 1.0, 5.0] {
            let mut prev = 0.5;
            for i in 0..=50 {
                let eta = 0.5 + 0.01 * i as f64;
                let h = he_noisy(n, &noisy(eta, 0.2, 0.3)).unwrap();
                assert!(h <= prev);
                prev = h;
            }
        }
    }
}
