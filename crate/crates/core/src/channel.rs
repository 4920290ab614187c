//! Channel parameters and the closed-form Gaussian noise evolution.
//!
//! Propagation through a lossy thermal channel maps a displaced vacuum with
//! real amplitude `α` to a displaced thermal state with amplitude
//! `α e^{-Γt/2}` and thermal occupation `M (1 - e^{-Γt})`. The damping rate
//! and the time only ever appear as the product `Γt`, which is what
//! [`NoiseParams`] stores.

use serde::Serialize;

use crate::error::{check, check_energy, check_fraction, Result};

/// Detector efficiency `η`, damping product `Γt` and bath occupation `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParams {
    eta: f64,
    gamma_t: f64,
    m_thermal: f64,
}

impl NoiseParams {
    /// Unit efficiency, no loss, no thermal photons.
    pub const IDEAL: NoiseParams = NoiseParams {
        eta: 1.0,
        gamma_t: 0.0,
        m_thermal: 0.0,
    };

    pub fn new(eta: f64, gamma_t: f64, m_thermal: f64) -> Result<Self> {
        check(eta > 0.0 && eta <= 1.0, "eta", "0 < eta <= 1", eta)?;
        check(
            gamma_t.is_finite() && gamma_t >= 0.0,
            "gamma_t",
            "0 <= gamma_t < inf",
            gamma_t,
        )?;
        check(
            m_thermal.is_finite() && m_thermal >= 0.0,
            "m",
            "0 <= m < inf",
            m_thermal,
        )?;
        Ok(Self {
            eta,
            gamma_t,
            m_thermal,
        })
    }

    /// Same channel seen through a detector of different efficiency.
    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(eta, self.gamma_t, self.m_thermal)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    pub fn m_thermal(&self) -> f64 {
        self.m_thermal
    }

    /// `e^{-Γt}`, the energy transmission of the channel.
    pub fn decay(&self) -> f64 {
        (-self.gamma_t).exp()
    }

    /// `1 - e^{-Γt}`.
    pub fn loss(&self) -> f64 {
        -(-self.gamma_t).exp_m1()
    }

    /// Thermal photons picked up in transit, `M' = M (1 - e^{-Γt})`.
    pub fn added_thermal(&self) -> f64 {
        self.m_thermal * self.loss()
    }

    /// Diffusion coefficient of the Green kernel, `D² = ½(M + ½)(1 - e^{-Γt})`.
    pub fn diffusion(&self) -> f64 {
        0.5 * (self.m_thermal + 0.5) * self.loss()
    }

    pub fn is_ideal(&self) -> bool {
        *self == Self::IDEAL
    }
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// A displaced thermal state with real amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleModeState {
    pub amplitude: f64,
    pub thermal_mean: f64,
}

impl SingleModeState {
    pub fn new(amplitude: f64, thermal_mean: f64) -> Result<Self> {
        check(amplitude.is_finite(), "amplitude", "finite", amplitude)?;
        check(
            thermal_mean.is_finite() && thermal_mean >= 0.0,
            "thermal_mean",
            "0 <= thermal_mean < inf",
            thermal_mean,
        )?;
        Ok(Self {
            amplitude,
            thermal_mean,
        })
    }

    pub fn coherent(amplitude: f64) -> Self {
        Self {
            amplitude,
            thermal_mean: 0.0,
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitude * self.amplitude + self.thermal_mean
    }

    /// Variance of either quadrature `x = (a + a†)/2`: `¼ + ½ M'`.
    pub fn quadrature_variance(&self) -> f64 {
        0.25 + 0.5 * self.thermal_mean
    }
}

/// Propagate a displaced vacuum of amplitude `alpha` through the noisy channel.
pub fn evolve_single_mode(alpha: f64, noise: &NoiseParams) -> SingleModeState {
    SingleModeState {
        amplitude: alpha * (-0.5 * noise.gamma_t).exp(),
        thermal_mean: noise.added_thermal(),
    }
}

/// Energy split between the twin beam and the displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelBudget {
    total_energy: f64,
    entanglement_fraction: f64,
}

impl ChannelBudget {
    pub fn new(total_energy: f64, entanglement_fraction: f64) -> Result<Self> {
        check(
            total_energy.is_finite() && total_energy > 0.0,
            "n",
            "0 < n < inf",
            total_energy,
        )?;
        check_fraction(entanglement_fraction)?;
        Ok(Self {
            total_energy,
            entanglement_fraction,
        })
    }

    /// Coherent-only channel (β = 0).
    pub fn single_mode(total_energy: f64) -> Result<Self> {
        Self::new(total_energy, 0.0)
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn entanglement_fraction(&self) -> f64 {
        self.entanglement_fraction
    }

    /// Photons carried by the twin beam, `N_λ = βN`.
    pub fn twb_photons(&self) -> f64 {
        self.entanglement_fraction * self.total_energy
    }

    /// Displacement amplitude `α = sqrt(2N(1-β))`.
    pub fn amplitude(&self) -> f64 {
        amplitude_for(self.total_energy, self.entanglement_fraction)
    }

    /// Twin-beam parameter `λ = sqrt(N_λ/(N_λ+2))`.
    pub fn twb_parameter(&self) -> f64 {
        let n = self.twb_photons();
        (n / (n + 2.0)).sqrt()
    }

    /// Squeezing `r` with `λ = tanh r`.
    pub fn squeezing(&self) -> f64 {
        self.twb_parameter().atanh()
    }

    /// `Δ_λ² = (1-λ)/(1+λ)`.
    pub fn twb_variance(&self) -> f64 {
        twb_variance(self.twb_photons())
    }
}

pub(crate) fn amplitude_for(n: f64, beta: f64) -> f64 {
    (2.0 * n * (1.0 - beta)).sqrt()
}

/// `Δ_λ² = (1-λ)/(1+λ)` as a function of the twin-beam photon number,
/// written as `1/(N_λ + 1 + sqrt(N_λ(N_λ+2)))` so it stays accurate for large `N_λ`.
pub fn twb_variance(n_lambda: f64) -> f64 {
    1.0 / (n_lambda + 1.0 + (n_lambda * (n_lambda + 2.0)).sqrt())
}

/// Which of the two AMK symbols was sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Symbol {
    /// The undisplaced seed.
    Zero,
    /// The seed displaced by `α`.
    One,
}

/// Evolved twin-beam descriptor. `Σ₊²` and `Σ₋²` are the variances of the
/// rotated quadrature combinations; the displacement sits on mode `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoModeGaussianState {
    pub sigma_plus_sq: f64,
    pub sigma_minus_sq: f64,
    pub displacement: f64,
}

impl TwoModeGaussianState {
    /// The state is inseparable iff `Σ₋² < ¼`.
    pub fn is_entangled(&self) -> bool {
        self.sigma_minus_sq < 0.25
    }
}

pub fn evolve_two_mode(
    budget: &ChannelBudget,
    symbol: Symbol,
    noise: &NoiseParams,
) -> TwoModeGaussianState {
    let delta_sq = budget.twb_variance();
    let decay = noise.decay();
    let diffusion = noise.diffusion();
    let displacement = match symbol {
        Symbol::Zero => 0.0,
        Symbol::One => budget.amplitude() * (-0.5 * noise.gamma_t()).exp(),
    };
    TwoModeGaussianState {
        sigma_plus_sq: diffusion + 0.25 / delta_sq * decay,
        sigma_minus_sq: diffusion + 0.25 * delta_sq * decay,
        displacement,
    }
}

/// `Σ₋²` of the evolved twin beam, the separability witness.
pub fn sigma_minus_sq(n_lambda: f64, noise: &NoiseParams) -> f64 {
    noise.diffusion() + 0.25 * twb_variance(n_lambda) * noise.decay()
}

/// Validate a raw `(n, β)` pair without requiring `n > 0`.
pub(crate) fn check_energy_split(n: f64, beta: f64) -> Result<()> {
    check_energy(n)?;
    check_fraction(beta)
}
