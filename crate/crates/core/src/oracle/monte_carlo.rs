//! Monte Carlo sampling of the three receivers.
//!
//! Shots are split into fixed-size chunks; chunk `k` draws from a ChaCha8
//! stream `k` of the given seed, so estimates do not depend on how rayon
//! schedules the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{evolve_single_mode, twb_variance, ChannelBudget, NoiseParams, SingleModeState};
use crate::error::{check, check_energy, Result};
use crate::oracle::fock::photon_number_distribution;
use crate::single_mode::{homodyne_optimal_threshold, DecisionThreshold, DirectReceiverConfig};

pub const MIN_SHOTS: u64 = 1000;
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub shots: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Distance from `target` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target) / self.std_err
    }
}

/// A receiver to simulate at energy `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum McReceiver {
    Direct {
        n: f64,
        config: DirectReceiverConfig,
        noise: NoiseParams,
    },
    Homodyne {
        n: f64,
        noise: NoiseParams,
        /// Defaults to the optimal midpoint.
        threshold: Option<DecisionThreshold>,
    },
    Heterodyne {
        n: f64,
        beta: f64,
        noise: NoiseParams,
    },
}

fn run_chunks<F>(shots: u64, seed: u64, shot: F) -> Result<McEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    check(shots >= MIN_SHOTS, "shots", "shots >= 1000", shots as f64)?;
    let chunks = shots.div_ceil(CHUNK);
    let errors: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = CHUNK.min(shots - k * CHUNK);
            (0..len).filter(|_| shot(&mut rng)).count() as u64
        })
        .sum();
    let mean = errors as f64 / shots as f64;
    Ok(McEstimate {
        mean,
        std_err: (mean * (1.0 - mean) / shots as f64).sqrt(),
        shots,
        seed,
    })
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Calibration: estimate the mean of a Bernoulli(`p`) variable.
pub fn mc_bernoulli(p: f64, shots: u64, seed: u64) -> Result<McEstimate> {
    check((0.0..=1.0).contains(&p), "p", "0 <= p <= 1", p)?;
    run_chunks(shots, seed, |rng| rng.random::<f64>() < p)
}

/// Cumulative photon-number table; the tail beyond it carries < 1e-15.
fn cumulative(state: &SingleModeState) -> Vec<f64> {
    let nbar = state.thermal_mean;
    let spread = (state.amplitude.powi(2) * (2.0 * nbar + 1.0) + nbar * (nbar + 1.0)).sqrt();
    let geometric_tail = if nbar > 0.0 {
        35.0 / (1.0 + 1.0 / nbar).ln()
    } else {
        0.0
    };
    let cutoff = (state.mean_photon_number() + 20.0 * spread + geometric_tail + 60.0) as usize;
    let mut acc = 0.0;
    photon_number_distribution(state, cutoff)
        .into_iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_count(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Any of `photons` survives independent loss with efficiency `eta`.
fn detects(photons: usize, eta: f64, rng: &mut ChaCha8Rng) -> bool {
    (0..photons).any(|_| rng.random::<f64>() < eta)
}

/// Estimate the error probability of a receiver with equiprobable symbols.
pub fn mc_receiver(setup: &McReceiver, shots: u64, seed: u64) -> Result<McEstimate> {
    match *setup {
        McReceiver::Direct { n, config, noise } => {
            check_energy(n)?;
            let received = evolve_single_mode((2.0 * n).sqrt(), &noise);
            let phi = config.mixing_angle();
            // At the detector the displaced symbol is nulled; the seed
            // leaves `-α' cosφ`. The reference arm adds no thermal noise.
            let thermal = received.thermal_mean * config.transmissivity();
            let cdf_displaced = cumulative(&SingleModeState::new(0.0, thermal)?);
            let cdf_seed = cumulative(&SingleModeState::new(-received.amplitude * phi.cos(), thermal)?);
            let eta = noise.eta();
            run_chunks(shots, seed, |rng| {
                if rng.random::<bool>() {
                    // click on the nulled symbol is read as the seed
                    let k = sample_count(&cdf_displaced, rng);
                    detects(k, eta, rng)
                } else {
                    let k = sample_count(&cdf_seed, rng);
                    !detects(k, eta, rng)
                }
            })
        }
        McReceiver::Homodyne { n, noise, threshold } => {
            check_energy(n)?;
            let received = evolve_single_mode((2.0 * n).sqrt(), &noise);
            let lambda = match threshold {
                Some(t) => t.value(),
                None => homodyne_optimal_threshold(n, &noise)?.value(),
            };
            let thermal_sd = (0.5 * received.thermal_mean).sqrt();
            let detector_sd = ((1.0 - noise.eta()) / (4.0 * noise.eta())).sqrt();
            run_chunks(shots, seed, |rng| {
                let one = rng.random::<bool>();
                let mean = if one { received.amplitude } else { 0.0 };
                let x = mean + 0.5 * normal(rng) + thermal_sd * normal(rng) + detector_sd * normal(rng);
                if one {
                    x <= lambda
                } else {
                    x > lambda
                }
            })
        }
        McReceiver::Heterodyne { n, beta, noise } => {
            let budget = ChannelBudget::new(n, beta)?;
            let alpha = budget.amplitude();
            let shrink = (-0.5 * noise.gamma_t()).exp();
            let lambda = 0.5 * alpha * shrink;
            // u = x_a - x_b, traced through preparation, channel and detection
            let initial_sd = (0.5 * twb_variance(budget.twb_photons())).sqrt();
            let diffusion_sd = (2.0 * noise.diffusion()).sqrt();
            let detector_sd = ((1.0 - noise.eta()) / (2.0 * noise.eta())).sqrt();
            run_chunks(shots, seed, |rng| {
                let one = rng.random::<bool>();
                let mean = if one { alpha } else { 0.0 };
                let u0 = mean + initial_sd * normal(rng);
                let u = u0 * shrink + diffusion_sd * normal(rng) + detector_sd * normal(rng);
                if one {
                    u <= lambda
                } else {
                    u > lambda
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_mode::{he_noisy, ke_noisy};

    #[test]
    fn bernoulli_calibration() {
        let p = 0.0314;
        let within = (0..50u64)
            .filter(|&seed| mc_bernoulli(p, 200_000, seed).unwrap().z_score(p).abs() < 3.0)
            .count();
        assert!(within >= 47, "{within}/50");
    }

    #[test]
    fn deterministic_for_seed() {
        let setup = McReceiver::Homodyne {
            n: 1.0,
            noise: NoiseParams::new(0.85, 0.1, 0.05).unwrap(),
            threshold: None,
        };
        let a = mc_receiver(&setup, 300_000, 7).unwrap();
        let b = mc_receiver(&setup, 300_000, 7).unwrap();
        assert_eq!(a, b);
        let c = mc_receiver(&setup, 300_000, 8).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn too_few_shots_rejected() {
        assert!(mc_bernoulli(0.5, 999, 1).is_err());
    }

    #[test]
    fn homodyne_agrees_with_closed_form() {
        let noise = NoiseParams::new(0.85, 0.1, 0.05).unwrap();
        let est = mc_receiver(&McReceiver::Homodyne { n: 1.0, noise, threshold: None }, 1_000_000, 3).unwrap();
        assert!(est.z_score(he_noisy(1.0, &noise).unwrap()).abs() < 4.0);
    }

    #[test]
    fn direct_agrees_with_closed_form() {
        let noise = NoiseParams::new(0.95, 0.1, 0.1).unwrap();
        let config = DirectReceiverConfig::new(0.99).unwrap();
        let est = mc_receiver(&McReceiver::Direct { n: 1.0, config, noise }, 1_000_000, 5).unwrap();
        assert!(est.z_score(ke_noisy(1.0, &config, &noise).unwrap()).abs() < 4.0);
    }
}
