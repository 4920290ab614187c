//! Receiver comparison: Helstrom baseline, the `A_e`, `B_e`, `C_e`
//! comparison functions, crossover energies and best-receiver regimes.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::NoiseParams;
use crate::entangled::{beta_opt_full, re_noisy};
use crate::error::{check, check_energy, Result};
use crate::single_mode::{he_noisy, ke_noisy, DirectReceiverConfig};
use crate::special::helstrom_from_exponent;

/// Helstrom bound for the coherent AMK pair, `(1 - sqrt(1 - e^{-2N}))/2`.
pub fn helstrom_pe(n: f64) -> Result<f64> {
    check_energy(n)?;
    Ok(helstrom_from_exponent(2.0 * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Direct,
    Homodyne,
    Heterodyne,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Direct, Receiver::Homodyne, Receiver::Heterodyne];

    pub fn label(&self) -> &'static str {
        match self {
            Receiver::Direct => "Direct (single mode)",
            Receiver::Homodyne => "Homodyne (single mode)",
            Receiver::Heterodyne => "Heterodyne (entangled)",
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Receiver::Direct => "direct",
            Receiver::Homodyne => "homodyne",
            Receiver::Heterodyne => "heterodyne",
        };
        f.write_str(s)
    }
}

/// Which comparison function to scan. The first receiver named wins where the
/// function is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReceiverPair {
    #[serde(rename = "hom-vs-direct")]
    HomVsDirect,
    #[serde(rename = "het-vs-direct")]
    HetVsDirect,
    #[serde(rename = "het-vs-hom")]
    HetVsHom,
}

impl ReceiverPair {
    pub const ALL: [ReceiverPair; 3] = [
        ReceiverPair::HomVsDirect,
        ReceiverPair::HetVsDirect,
        ReceiverPair::HetVsHom,
    ];

    /// Receiver in the numerator (better where the function is positive).
    pub fn challenger(&self) -> Receiver {
        match self {
            ReceiverPair::HomVsDirect => Receiver::Homodyne,
            ReceiverPair::HetVsDirect | ReceiverPair::HetVsHom => Receiver::Heterodyne,
        }
    }

    /// Receiver in the denominator.
    pub fn baseline(&self) -> Receiver {
        match self {
            ReceiverPair::HomVsDirect | ReceiverPair::HetVsDirect => Receiver::Direct,
            ReceiverPair::HetVsHom => Receiver::Homodyne,
        }
    }
}

impl fmt::Display for ReceiverPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReceiverPair::HomVsDirect => "hom-vs-direct",
            ReceiverPair::HetVsDirect => "het-vs-direct",
            ReceiverPair::HetVsHom => "het-vs-hom",
        };
        f.write_str(s)
    }
}

/// Channel noise shared by all receivers plus one efficiency per receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonParams {
    pub eta_ken: f64,
    pub eta_hom: f64,
    pub eta_het: f64,
    pub gamma_t: f64,
    pub m_thermal: f64,
    pub transmissivity: f64,
}

impl ComparisonParams {
    pub fn new(
        eta_ken: f64,
        eta_hom: f64,
        eta_het: f64,
        gamma_t: f64,
        m_thermal: f64,
        transmissivity: f64,
    ) -> Result<Self> {
        let p = Self {
            eta_ken,
            eta_hom,
            eta_het,
            gamma_t,
            m_thermal,
            transmissivity,
        };
        for r in Receiver::ALL {
            p.noise(r)?;
        }
        p.direct_config()?;
        Ok(p)
    }

    /// Noise-free channel and detectors.
    pub fn ideal(transmissivity: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 0.0, 0.0, transmissivity)
    }

    pub fn noise(&self, receiver: Receiver) -> Result<NoiseParams> {
        let eta = match receiver {
            Receiver::Direct => self.eta_ken,
            Receiver::Homodyne => self.eta_hom,
            Receiver::Heterodyne => self.eta_het,
        };
        NoiseParams::new(eta, self.gamma_t, self.m_thermal)
    }

    pub fn direct_config(&self) -> Result<DirectReceiverConfig> {
        DirectReceiverConfig::new(self.transmissivity)
    }
}

/// Error probability of `receiver` at energy `n`; heterodyne always runs at the
/// optimal twin-beam fraction.
pub fn error_probability(receiver: Receiver, n: f64, params: &ComparisonParams) -> Result<f64> {
    check_energy(n)?;
    let noise = params.noise(receiver)?;
    match receiver {
        Receiver::Direct => ke_noisy(n, &params.direct_config()?, &noise),
        Receiver::Homodyne => he_noisy(n, &noise),
        Receiver::Heterodyne => {
            if n == 0.0 {
                return Ok(0.5);
            }
            re_noisy(n, beta_opt_full(n, &noise)?, &noise)
        }
    }
}

/// `1 - P(challenger)/P(baseline)`; positive where the challenger wins.
pub fn comparison(pair: ReceiverPair, n: f64, params: &ComparisonParams) -> Result<f64> {
    let num = error_probability(pair.challenger(), n, params)?;
    let den = error_probability(pair.baseline(), n, params)?;
    Ok(1.0 - num / den)
}

/// Homodyne against direct detection.
pub fn a_e(n: f64, params: &ComparisonParams) -> Result<f64> {
    comparison(ReceiverPair::HomVsDirect, n, params)
}

/// Heterodyne (twin beam, optimal fraction) against direct detection.
pub fn b_e(n: f64, params: &ComparisonParams) -> Result<f64> {
    comparison(ReceiverPair::HetVsDirect, n, params)
}

/// Heterodyne against homodyne with a common efficiency.
pub fn c_e(n: f64, noise: &NoiseParams) -> Result<f64> {
    let params = ComparisonParams::new(
        noise.eta(),
        noise.eta(),
        noise.eta(),
        noise.gamma_t(),
        noise.m_thermal(),
        1.0,
    )?;
    comparison(ReceiverPair::HetVsHom, n, &params)
}

/// Large-energy limit of the error probability.
pub fn asymptotic_floor(receiver: Receiver, params: &ComparisonParams) -> Result<f64> {
    let noise = params.noise(receiver)?;
    Ok(match receiver {
        Receiver::Direct => {
            let s = noise.eta() * noise.added_thermal() * params.transmissivity;
            s / (2.0 * (1.0 + s))
        }
        Receiver::Homodyne | Receiver::Heterodyne => 0.0,
    })
}

/// Resolution settings for [`find_crossovers_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Coarse step as a fraction of `n_max`.
    pub relative_step: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub root_tolerance: f64,
    /// Offset used to certify a root by a sign flip.
    pub certify_offset: f64,
    /// Number of coarse steps near zero that are rescanned 10x finer.
    pub refined_steps: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            relative_step: 1e-3,
            root_tolerance: 1e-6,
            certify_offset: 1e-5,
            refined_steps: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub energy: f64,
    /// The comparison function takes opposite signs at `energy ± certify_offset`.
    pub certified: bool,
    /// Within one coarse step of either end of the scanned range.
    pub boundary_uncertain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub from: f64,
    pub to: f64,
    pub best: Receiver,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub pair: ReceiverPair,
    pub n_max: f64,
    pub thresholds: Vec<Threshold>,
    pub regimes: Vec<Regime>,
}

impl CrossoverReport {
    pub fn energies(&self) -> Vec<f64> {
        self.thresholds.iter().map(|t| t.energy).collect()
    }

    pub fn has_crossover(&self) -> bool {
        !self.thresholds.is_empty()
    }
}

/// Scan grid on `(0, n_max]`: the first `refined_steps` coarse steps are
/// sampled ten times finer.
fn scan_grid(n_max: f64, opts: &ScanOptions) -> Vec<f64> {
    let step = opts.relative_step * n_max;
    let fine = step / 10.0;
    let fine_count = opts.refined_steps * 10;
    let coarse_count = (1.0 / opts.relative_step).round() as usize;
    let mut grid: Vec<f64> = (1..=fine_count).map(|i| i as f64 * fine).collect();
    grid.extend((opts.refined_steps + 1..=coarse_count).map(|i| i as f64 * step));
    if let Some(last) = grid.last_mut() {
        *last = n_max;
    }
    grid
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, f_lo: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo_positive = f_lo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign changes of the comparison function on `(0, n_max]` with default resolution.
pub fn find_crossovers(
    pair: ReceiverPair,
    params: &ComparisonParams,
    n_max: f64,
) -> Result<CrossoverReport> {
    find_crossovers_with(pair, params, n_max, &ScanOptions::default())
}

pub fn find_crossovers_with(
    pair: ReceiverPair,
    params: &ComparisonParams,
    n_max: f64,
    opts: &ScanOptions,
) -> Result<CrossoverReport> {
    check(n_max.is_finite() && n_max > 0.0, "n_max", "0 < n_max < inf", n_max)?;
    check(
        opts.relative_step > 0.0 && opts.relative_step < 1.0,
        "relative_step",
        "0 < relative_step < 1",
        opts.relative_step,
    )?;
    let f = |n: f64| comparison(pair, n, params);
    let grid = scan_grid(n_max, opts);
    let values = grid
        .par_iter()
        .map(|&n| f(n))
        .collect::<Result<Vec<f64>>>()?;

    let step = opts.relative_step * n_max;
    let mut thresholds = Vec::new();
    for i in 1..grid.len() {
        if (values[i - 1] > 0.0) != (values[i] > 0.0) {
            let energy = bisect(&f, grid[i - 1], grid[i], values[i - 1], opts.root_tolerance)?;
            let certified = energy > opts.certify_offset && {
                let below = f(energy - opts.certify_offset)?;
                let above = f(energy + opts.certify_offset)?;
                (below > 0.0) != (above > 0.0)
            };
            thresholds.push(Threshold {
                energy,
                certified,
                boundary_uncertain: energy < step || energy > n_max - step,
            });
        }
    }

    let mut edges = vec![0.0];
    edges.extend(thresholds.iter().map(|t| t.energy));
    edges.push(n_max);
    let mut regimes = Vec::with_capacity(edges.len() - 1);
    for w in edges.windows(2) {
        let best = if f(0.5 * (w[0] + w[1]))? > 0.0 {
            pair.challenger()
        } else {
            pair.baseline()
        };
        regimes.push(Regime {
            from: w[0],
            to: w[1],
            best,
        });
    }

    Ok(CrossoverReport {
        pair,
        n_max,
        thresholds,
        regimes,
    })
}

/// Best of the three receivers across `(0, n_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeTable {
    pub n_max: f64,
    pub regimes: Vec<Regime>,
}

impl RegimeTable {
    pub fn boundaries(&self) -> Vec<f64> {
        self.regimes.iter().skip(1).map(|r| r.from).collect()
    }
}

fn best_receiver(n: f64, params: &ComparisonParams) -> Result<Receiver> {
    let mut best = (Receiver::Direct, f64::INFINITY);
    for r in Receiver::ALL {
        let p = error_probability(r, n, params)?;
        if p < best.1 {
            best = (r, p);
        }
    }
    Ok(best.0)
}

pub fn regime_table(params: &ComparisonParams, n_max: f64) -> Result<RegimeTable> {
    check(n_max.is_finite() && n_max > 0.0, "n_max", "0 < n_max < inf", n_max)?;
    let opts = ScanOptions::default();
    let grid = scan_grid(n_max, &opts);
    let labels = grid
        .par_iter()
        .map(|&n| best_receiver(n, params))
        .collect::<Result<Vec<Receiver>>>()?;

    let mut regimes = vec![Regime {
        from: 0.0,
        to: n_max,
        best: labels[0],
    }];
    for i in 1..grid.len() {
        let (old, new) = (labels[i - 1], labels[i]);
        if old == new {
            continue;
        }
        let diff = |n: f64| -> Result<f64> {
            Ok(error_probability(old, n, params)? - error_probability(new, n, params)?)
        };
        let f_lo = diff(grid[i - 1])?;
        let edge = bisect(&diff, grid[i - 1], grid[i], f_lo, opts.root_tolerance)?;
        if let Some(last) = regimes.last_mut() {
            last.to = edge;
        }
        regimes.push(Regime {
            from: edge,
            to: n_max,
            best: new,
        });
    }
    Ok(RegimeTable { n_max, regimes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_mode::{he_ideal, ke_ideal};

    fn figure_params(gt: f64, m: f64) -> ComparisonParams {
        ComparisonParams::new(0.95, 0.85, 0.85, gt, m, 0.99).unwrap()
    }

    #[test]
    fn helstrom_values() {
        assert_eq!(helstrom_pe(0.0).unwrap(), 0.5);
        assert!(helstrom_pe(400.0).unwrap() < 1e-300);
        assert!((helstrom_pe(1.0).unwrap() - 0.035_063_252_483_903_11).abs() < 1e-16);
        assert!(helstrom_pe(-1.0).is_err());
    }

    #[test]
    fn helstrom_is_a_floor() {
        let cfg = DirectReceiverConfig::new(1.0).unwrap();
        for i in 1..=1000 {
            let n = 0.01 * i as f64;
            let p = helstrom_pe(n).unwrap();
            assert!(p <= ke_ideal(n, &cfg).unwrap());
            assert!(p <= he_ideal(n).unwrap());
        }
    }

    #[test]
    fn ideal_signs() {
        let p = ComparisonParams::ideal(0.99).unwrap();
        assert!(a_e(0.5, &p).unwrap() > 0.0);
        let p9 = ComparisonParams::ideal(0.9).unwrap();
        assert!(a_e(1.09, &p9).unwrap() > 0.0);
        assert!(a_e(1.12, &p9).unwrap() < 0.0);
        assert!(b_e(6.0, &p).unwrap() > 0.0);
        assert!(b_e(2.0, &p).unwrap() < 0.0);
        assert!(c_e(1e-3, &NoiseParams::IDEAL).unwrap() < 0.0);
        assert!(c_e(9.0, &NoiseParams::IDEAL).unwrap() > 0.0);
    }

    #[test]
    fn ideal_hom_vs_direct_single_root() {
        let r = find_crossovers(
            ReceiverPair::HomVsDirect,
            &ComparisonParams::ideal(1.0 - 1e-9).unwrap(),
            10.0,
        )
        .unwrap();
        assert_eq!(r.thresholds.len(), 1);
        assert!((r.thresholds[0].energy - 0.77).abs() < 0.01);
        assert_eq!(r.regimes[0].best, Receiver::Homodyne);
        assert_eq!(r.regimes[1].best, Receiver::Direct);
    }

    #[test]
    fn ideal_het_vs_direct_upper_root() {
        let r = find_crossovers(
            ReceiverPair::HetVsDirect,
            &ComparisonParams::ideal(0.99).unwrap(),
            10.0,
        )
        .unwrap();
        let upper = r.energies().last().copied().unwrap();
        assert!((upper - 4.46).abs() < 0.02);
    }

    #[test]
    fn het_vs_hom_ideal_single_root() {
        let r = find_crossovers(
            ReceiverPair::HetVsHom,
            &ComparisonParams::ideal(0.99).unwrap(),
            10.0,
        )
        .unwrap();
        assert_eq!(r.thresholds.len(), 1);
        assert!(r.thresholds[0].certified);
        assert_eq!(r.regimes.last().unwrap().best, Receiver::Heterodyne);
    }

    #[test]
    fn noisy_hom_vs_direct_two_roots() {
        let p = figure_params(0.05, 0.05);
        let r = find_crossovers(ReceiverPair::HomVsDirect, &p, 10.0).unwrap();
        assert_eq!(r.thresholds.len(), 2);
        let labels: Vec<_> = r.regimes.iter().map(|g| g.best).collect();
        assert_eq!(labels, [Receiver::Homodyne, Receiver::Direct, Receiver::Homodyne]);
        // dense scan at 1e-3 resolution agrees on the count
        let mut changes = 0;
        let mut prev = a_e(1e-3, &p).unwrap() > 0.0;
        for i in 2..=10_000 {
            let s = a_e(i as f64 * 1e-3, &p).unwrap() > 0.0;
            changes += (s != prev) as usize;
            prev = s;
        }
        assert_eq!(changes, 2);
    }

    #[test]
    fn b_e_flips_between_roots() {
        let p = figure_params(0.1, 0.1);
        let r = find_crossovers(ReceiverPair::HetVsDirect, &p, 10.0).unwrap();
        let e = r.energies();
        assert_eq!(e.len(), 2);
        assert!(b_e(0.5 * (e[0] + e[1]), &p).unwrap() < 0.0);
        assert!(b_e(0.5 * e[0], &p).unwrap() > 0.0);
        assert!(b_e(e[1] + 1.0, &p).unwrap() > 0.0);
    }

    #[test]
    fn threshold_grows_with_noise() {
        let nth = |gt: f64| {
            let p = ComparisonParams::new(0.85, 0.85, 0.85, gt, 0.1, 1.0).unwrap();
            find_crossovers(ReceiverPair::HetVsHom, &p, 30.0).unwrap().thresholds[0].energy
        };
        assert!(nth(0.2) > nth(0.01));
    }

    #[test]
    fn no_crossover_is_not_an_error() {
        // homodyne beats direct everywhere on a tiny window
        let r = find_crossovers(
            ReceiverPair::HomVsDirect,
            &ComparisonParams::ideal(0.99).unwrap(),
            0.3,
        )
        .unwrap();
        assert!(!r.has_crossover());
        assert_eq!(r.regimes.len(), 1);
        assert_eq!(r.regimes[0].best, Receiver::Homodyne);
        assert!(find_crossovers(ReceiverPair::HomVsDirect, &figure_params(0.1, 0.1), 0.0).is_err());
    }

    #[test]
    fn boundary_roots_are_flagged() {
        let r = find_crossovers(
            ReceiverPair::HomVsDirect,
            &ComparisonParams::ideal(0.99).unwrap(),
            0.7945,
        )
        .unwrap();
        assert_eq!(r.thresholds.len(), 1);
        assert!(r.thresholds[0].boundary_uncertain);
    }

    #[test]
    fn regimes_partition_and_alternate() {
        let p = figure_params(0.2, 0.2);
        for pair in ReceiverPair::ALL {
            let r = find_crossovers(pair, &p, 30.0).unwrap();
            assert_eq!(r.regimes.first().unwrap().from, 0.0);
            assert_eq!(r.regimes.last().unwrap().to, 30.0);
            for w in r.regimes.windows(2) {
                assert_eq!(w[0].to, w[1].from);
                assert_ne!(w[0].best, w[1].best);
            }
            for w in r.thresholds.windows(2) {
                assert!(w[0].energy < w[1].energy);
            }
        }
    }

    #[test]
    fn floors() {
        let p = ComparisonParams::new(0.95, 0.85, 0.85, 0.1, 0.0, 0.99).unwrap();
        assert_eq!(asymptotic_floor(Receiver::Direct, &p).unwrap(), 0.0);
        let p = ComparisonParams::new(0.95, 0.85, 0.85, 0.1, 0.2, 0.99).unwrap();
        let floor = asymptotic_floor(Receiver::Direct, &p).unwrap();
        let at = error_probability(Receiver::Direct, 1e4, &p).unwrap();
        assert!((at - floor).abs() < 1e-6);
        assert_eq!(asymptotic_floor(Receiver::Homodyne, &p).unwrap(), 0.0);
        assert_eq!(asymptotic_floor(Receiver::Heterodyne, &p).unwrap(), 0.0);
    }

    #[test]
    fn ideal_regime_table() {
        let t = regime_table(&ComparisonParams::ideal(0.99).unwrap(), 10.0).unwrap();
        let labels: Vec<_> = t.regimes.iter().map(|r| r.best).collect();
        assert_eq!(labels, [Receiver::Homodyne, Receiver::Direct, Receiver::Heterodyne]);
        let b = t.boundaries();
        assert!((b[0] - 0.79).abs() < 0.02);
        assert!((b[1] - 4.46).abs() < 0.02);
    }
}
