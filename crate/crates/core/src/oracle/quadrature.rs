//! Phase-space quadrature of the on/off receiver.
//!
//! The no-click probability is the overlap `π ∫ W_ρ W_Π` of the reduced
//! Wigner function at the detector with that of `Π₀(η) = Σ (1-η)ⁿ |n⟩⟨n|`,
//! a scaled thermal operator of width `(2-η)/(2η)`. For real amplitudes the
//! four-dimensional integral over the two beam-splitter inputs splits into
//! independent position and momentum parts, each a 2D trapezoid sum.

use std::f64::consts::PI;

use crate::channel::{evolve_single_mode, NoiseParams, SingleModeState};
use crate::error::{check, check_energy, Error, Result};
use crate::single_mode::{Conditionals, DirectReceiverConfig};

/// Accepted change of the result when the grid step is halved.
pub const REFINEMENT_TOLERANCE: f64 = 1e-8;
/// Half-width of the integration box in standard deviations.
const BOX_SIGMAS: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    /// `|I(h/2) - I(h)|` at the accepted step.
    pub refinement_change: f64,
}

/// Gaussian marginal of a Wigner function with per-mode width `v = n̄ + ½`.
fn marginal(x: f64, mean: f64, v: f64) -> f64 {
    (-(x - mean) * (x - mean) / v).exp() / (PI * v).sqrt()
}

struct Axis {
    mean_a: f64,
    mean_b: f64,
}

struct Setup {
    cos: f64,
    sin: f64,
    v_a: f64,
    v_b: f64,
    v_det: f64,
}

impl Setup {
    /// `∫∫ dγ dλ W_a(cγ - sλ) W_b(sγ + cλ) W_Π(γ)` along one axis.
    fn axis_integral(&self, axis: &Axis, step_divisor: f64) -> f64 {
        let (c, s) = (self.cos, self.sin);
        let g0 = c * axis.mean_a + s * axis.mean_b;
        let l0 = -s * axis.mean_a + c * axis.mean_b;
        let wide = (self.v_a.max(self.v_b).max(self.v_det) / 2.0).sqrt();
        let narrow = (self.v_a.min(self.v_b) / 2.0).sqrt();
        let h = narrow / step_divisor;
        let g_range = (g0.min(0.0) - BOX_SIGMAS * wide, g0.max(0.0) + BOX_SIGMAS * wide);
        let l_range = (l0 - BOX_SIGMAS * wide, l0 + BOX_SIGMAS * wide);
        let ng = ((g_range.1 - g_range.0) / h).ceil() as usize;
        let nl = ((l_range.1 - l_range.0) / h).ceil() as usize;
        let hg = (g_range.1 - g_range.0) / ng as f64;
        let hl = (l_range.1 - l_range.0) / nl as f64;
        let weight = |i: usize, n: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
        let mut total = 0.0;
        for i in 0..=ng {
            let g = g_range.0 + i as f64 * hg;
            let det = marginal(g, 0.0, self.v_det);
            let mut row = 0.0;
            for j in 0..=nl {
                let l = l_range.0 + j as f64 * hl;
                row += weight(j, nl)
                    * marginal(c * g - s * l, axis.mean_a, self.v_a)
                    * marginal(s * g + c * l, axis.mean_b, self.v_b);
            }
            total += weight(i, ng) * det * row;
        }
        total * hg * hl
    }

    fn no_click(&self, x: &Axis, eta: f64, step_divisor: f64) -> f64 {
        let y = Axis { mean_a: 0.0, mean_b: 0.0 };
        PI / eta * self.axis_integral(x, step_divisor) * self.axis_integral(&y, step_divisor)
    }
}

/// No-click probability of an on/off detector with efficiency `eta`
/// fed by the output port `cosφ·a + sinφ·b` of the receiver's beam
/// splitter, where `a` is `input` and `b` a coherent reference of real
/// amplitude `reference`.
pub fn onoff_prob_quadrature(
    input: &SingleModeState,
    reference: f64,
    cfg: &DirectReceiverConfig,
    eta: f64,
) -> Result<QuadratureOutcome> {
    check(eta > 0.0 && eta <= 1.0, "eta", "0 < eta <= 1", eta)?;
    check(reference.is_finite(), "reference", "finite", reference)?;
    let phi = cfg.mixing_angle();
    let setup = Setup {
        cos: phi.cos(),
        sin: phi.sin(),
        v_a: input.thermal_mean + 0.5,
        v_b: 0.5,
        v_det: (2.0 - eta) / (2.0 * eta),
    };
    let x = Axis {
        mean_a: input.amplitude,
        mean_b: reference,
    };
    let coarse = setup.no_click(&x, eta, 2.0);
    let fine = setup.no_click(&x, eta, 4.0);
    let change = (fine - coarse).abs();
    if change > REFINEMENT_TOLERANCE {
        return Err(Error::QuadratureNotConverged {
            change,
            tolerance: REFINEMENT_TOLERANCE,
        });
    }
    Ok(QuadratureOutcome {
        value: fine,
        refinement_change: change,
    })
}

/// Conditional errors of the noisy direct receiver computed by quadrature.
/// Requires `τ < 1` so that the nulling reference is finite.
pub fn direct_conditionals_quadrature(
    n: f64,
    cfg: &DirectReceiverConfig,
    noise: &NoiseParams,
) -> Result<Conditionals> {
    check_energy(n)?;
    let tau = cfg.transmissivity();
    check(tau < 1.0, "transmissivity", "transmissivity < 1", tau)?;
    let displaced = evolve_single_mode((2.0 * n).sqrt(), noise);
    let seed = SingleModeState::new(0.0, displaced.thermal_mean)?;
    let reference = cfg.nulling_reference(displaced.amplitude);
    let eta = noise.eta();
    let p0_displaced = onoff_prob_quadrature(&displaced, reference, cfg, eta)?.value;
    let p0_seed = onoff_prob_quadrature(&seed, reference, cfg, eta)?.value;
    Ok(Conditionals {
        miss: 1.0 - p0_displaced,
        false_alarm: p0_seed,
    })
}
