//! Twin-beam channel read out by heterodyne (or multiport homodyne) detection.
//!
//! A fraction `β` of the channel energy `N` goes into the twin beam
//! (`N_λ = βN`) and the rest into the displacement `α = sqrt(2N(1-β))` of
//! mode `a`. The receiver measures `Z = a - b†` and thresholds `Re z`.

use serde::Serialize;

use crate::channel::{
    amplitude_for, check_energy_split, sigma_minus_sq, twb_variance, ChannelBudget, NoiseParams,
};
use crate::error::{check, Result};
use crate::special::{half_erfc, helstrom_from_exponent};

/// Variance `Δ²` of the complex heterodyne outcome (`Re z` has variance `Δ²/2`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct HeterodyneVariance(f64);

impl HeterodyneVariance {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `Δ²_{η,Γ,M} = (1+2M)(1-e^{-Γt}) + Δ_λ² e^{-Γt} + (1-η)/η`.
pub fn heterodyne_variance(n: f64, beta: f64, noise: &NoiseParams) -> Result<HeterodyneVariance> {
    check_energy_split(n, beta)?;
    let eta = noise.eta();
    Ok(HeterodyneVariance(
        (1.0 + 2.0 * noise.m_thermal()) * noise.loss()
            + twb_variance(beta * n) * noise.decay()
            + (1.0 - eta) / eta,
    ))
}

/// Helstrom error for the pure twin-beam pair `{|λ⟩⟩, D_a(α)|λ⟩⟩}`.
pub fn qe_ideal(n: f64, beta: f64) -> Result<f64> {
    check_energy_split(n, beta)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    Ok(helstrom_from_exponent(2.0 * n * (1.0 - beta) * (1.0 + beta * n)))
}

/// Ideal heterodyne error at the optimal threshold `α/2`.
pub fn re_ideal(n: f64, beta: f64) -> Result<f64> {
    re_noisy(n, beta, &NoiseParams::IDEAL)
}

/// Optimal twin-beam fraction for the ideal receiver, `N/(2(1+N))`.
pub fn beta_opt_ideal(n: f64) -> Result<f64> {
    check(n.is_finite() && n > 0.0, "n", "0 < n < inf", n)?;
    Ok(n / (2.0 * (1.0 + n)))
}

/// Noisy heterodyne error with threshold `Λ = ½ α e^{-Γt/2}`.
pub fn re_noisy(n: f64, beta: f64, noise: &NoiseParams) -> Result<f64> {
    let variance = heterodyne_variance(n, beta, noise)?;
    if n == 0.0 {
        return Ok(0.5);
    }
    let alpha = amplitude_for(n, beta);
    Ok(half_erfc(
        0.5 * alpha * (-0.5 * noise.gamma_t()).exp() / variance.0.sqrt(),
    ))
}

/// Shared pieces of the optimal-fraction closed form.
struct OptTerms {
    numerator: f64,
    a: f64,
    b: f64,
    /// `2x(1-u)` with `x = ηN e^{-Γt}`, `u = η e^{-Γt}`.
    c_signal: f64,
    /// `f = ηM'(1 + ηNe^{-Γt} + ηM')`.
    f: f64,
}

fn opt_terms(n: f64, noise: &NoiseParams) -> OptTerms {
    let eta = noise.eta();
    let decay = noise.decay();
    let x = eta * n * decay;
    let u = eta * decay;
    let m = eta * noise.added_thermal();
    let f = m * (1.0 + x + m);
    OptTerms {
        numerator: eta * eta * n * decay * decay,
        a: x * (2.0 - u) + 4.0 * f,
        b: 1.0 + x + 2.0 * m,
        c_signal: 2.0 * x * (1.0 - u),
        f,
    }
}

/// Twin-beam fraction minimising [`re_noisy`].
///
/// Stationarity of `α² e^{-Γt}/Δ²_{η,Γ,M}` in `N_λ` reduces to a quadratic whose
/// positive root is `η²N e^{-2Γt} / (1 + A + B sqrt(1 + C))` with
/// `A = x(2-u) + 4f`, `B = 1 + x + 2ηM'`, `C = 2x(1-u) + 4f`.
pub fn beta_opt_full(n: f64, noise: &NoiseParams) -> Result<f64> {
    check(n.is_finite() && n > 0.0, "n", "0 < n < inf", n)?;
    let t = opt_terms(n, noise);
    let c = t.c_signal + 4.0 * t.f;
    Ok(t.numerator / (1.0 + t.a + t.b * (1.0 + c).sqrt()))
}

/// Closed form with the `C = 2x(1-u) + 2f` coefficient as it is commonly
/// quoted. It coincides with [`beta_opt_full`] when `ηM' = 0` and is kept for
/// diagnostics only.
pub fn beta_opt_as_printed(n: f64, noise: &NoiseParams) -> Result<f64> {
    check(n.is_finite() && n > 0.0, "n", "0 < n < inf", n)?;
    let t = opt_terms(n, noise);
    let c = t.c_signal + 2.0 * t.f;
    Ok(t.numerator / (1.0 + t.a + t.b * (1.0 + c).sqrt()))
}

/// Entanglement diagnostics of the evolved twin beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub is_entangled: bool,
    pub sigma_minus_sq: f64,
    /// `Γt_s`; infinite when `M = 0`.
    pub survival_gamma_t: f64,
    /// Smallest fraction keeping the pair inseparable at this `Γt`; `None`
    /// when no `β < 1` does.
    pub survival_fraction: Option<f64>,
    /// The alternative closed form with denominator `N[1 - 2N(e^{Γt}-1)]`;
    /// `None` when it is not finite.
    pub survival_fraction_as_printed: Option<f64>,
}

/// Survival time `Γt_s = ln(1 + (sqrt(N_λ(N_λ+2)) - N_λ)/(2M))`.
pub fn survival_gamma_t(n_lambda: f64, m_thermal: f64) -> f64 {
    if m_thermal == 0.0 {
        return f64::INFINITY;
    }
    let gap = (n_lambda * (n_lambda + 2.0)).sqrt() - n_lambda;
    (gap / (2.0 * m_thermal)).ln_1p()
}

/// Fraction `β_s` at which `Σ₋² = ¼` after propagation.
///
/// With `c = 2M(e^{Γt} - 1)` the boundary `sqrt(N_λ(N_λ+2)) - N_λ = c` gives
/// `N_λ = c²/(2(1-c))`.
pub fn survival_fraction(n: f64, noise: &NoiseParams) -> Result<Option<f64>> {
    check(n.is_finite() && n > 0.0, "n", "0 < n < inf", n)?;
    let c = 2.0 * noise.m_thermal() * noise.gamma_t().exp_m1();
    if c >= 1.0 {
        return Ok(None);
    }
    let beta = c * c / (2.0 * n * (1.0 - c));
    Ok((beta < 1.0).then_some(beta))
}

pub fn survival_fraction_as_printed(n: f64, noise: &NoiseParams) -> Result<f64> {
    check(n.is_finite() && n > 0.0, "n", "0 < n < inf", n)?;
    let grow = noise.gamma_t().exp_m1();
    let m = noise.m_thermal();
    Ok(2.0 * m * m * grow * grow / (n * (1.0 - 2.0 * n * grow)))
}

pub fn separability(budget: &ChannelBudget, noise: &NoiseParams) -> Result<SeparabilityReport> {
    let n = budget.total_energy();
    let sigma = sigma_minus_sq(budget.twb_photons(), noise);
    let printed = survival_fraction_as_printed(n, noise)?;
    Ok(SeparabilityReport {
        is_entangled: sigma < 0.25,
        sigma_minus_sq: sigma,
        survival_gamma_t: survival_gamma_t(budget.twb_photons(), noise.m_thermal()),
        survival_fraction: survival_fraction(n, noise)?,
        survival_fraction_as_printed: printed.is_finite().then_some(printed),
    })
}
