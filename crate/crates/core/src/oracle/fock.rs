//! Truncated Fock-space states and the optimal (Helstrom) measurement.

use std::f64::consts::PI;

use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::channel::SingleModeState;
use crate::error::{check, Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
/// Eigenvalues of `ρ₂ - ρ₁` below this magnitude count as zero.
const ZERO_EIGENVALUE: f64 = 1e-12;
/// Trace deficits above this are reported.
pub const TRUNCATION_WARNING: f64 = 1e-6;

/// A density matrix in the number basis truncated to `dim` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    matrix: DMatrix<Complex64>,
    trace_deficit: f64,
}

impl FockState {
    /// Wrap a density matrix, checking hermiticity, positivity and trace.
    pub fn from_density(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        let asym = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {asym:e})")));
        }
        let support = joint_support(&[&matrix]);
        let eig = reduced_eigen(&matrix, &support)?;
        let lowest = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if lowest < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:e}")));
        }
        let trace = matrix.trace().re;
        if trace > 1.0 + HERMITIAN_TOL || trace <= 0.0 {
            return Err(Error::InvalidState(format!("trace {trace} outside (0, 1]")));
        }
        Ok(Self {
            matrix,
            trace_deficit: (1.0 - trace).max(0.0),
        })
    }

    /// `|ψ⟩⟨ψ|` for a (possibly truncated, so sub-normalised) ket.
    pub fn from_ket(ket: &DVector<Complex64>) -> Result<Self> {
        Self::from_density(ket * ket.adjoint())
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::number(0, dim)
    }

    pub fn number(n: usize, dim: usize) -> Result<Self> {
        check(n < dim, "n", "n < dim", n as f64)?;
        let mut ket = DVector::zeros(dim);
        ket[n] = Complex64::new(1.0, 0.0);
        Self::from_ket(&ket)
    }

    /// Coherent state with real amplitude.
    pub fn coherent(alpha: f64, dim: usize) -> Result<Self> {
        Self::from_ket(&coherent_ket(alpha, dim))
    }

    pub fn thermal(mean: f64, dim: usize) -> Result<Self> {
        check(mean >= 0.0 && mean.is_finite(), "thermal_mean", "0 <= mean < inf", mean)?;
        let ratio = mean / (1.0 + mean);
        let mut p = 1.0 / (1.0 + mean);
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = Complex64::new(p, 0.0);
            p *= ratio;
        }
        Self::from_density(m)
    }

    /// `D(α) ν_{M'} D†(α)` with the displacement built on an enlarged space.
    pub fn displaced_thermal(state: &SingleModeState, dim: usize) -> Result<Self> {
        let big = 2 * dim + (4.0 * state.amplitude * state.amplitude).ceil() as usize + 20;
        let d = displacement_operator(state.amplitude, big);
        let nu = Self::thermal(state.thermal_mean, big)?;
        let full = &d * &nu.matrix * d.adjoint();
        let block = full.view((0, 0), (dim, dim)).into_owned();
        // restore exact hermiticity lost to rounding
        let sym = (&block + block.adjoint()) * Complex64::new(0.5, 0.0);
        Self::from_density(sym)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `1 - Tr ρ`, the probability mass lost to truncation.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.matrix[(k, k)].re).collect()
    }
}

/// Indices whose row is non-zero in at least one of `matrices`.
fn joint_support(matrices: &[&DMatrix<Complex64>]) -> Vec<usize> {
    let dim = matrices[0].nrows();
    (0..dim)
        .filter(|&i| matrices.iter().any(|m| m.row(i).iter().any(|z| *z != Complex64::new(0.0, 0.0))))
        .collect()
}

fn restrict(m: &DMatrix<Complex64>, support: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(support.len(), support.len(), |i, j| m[(support[i], support[j])])
}

/// Eigendecomposition on the joint support. Dropping identically zero
/// rows is exact and keeps the QR iteration away from massively
/// degenerate null spaces, on which it can fail to converge.
fn reduced_eigen(m: &DMatrix<Complex64>, support: &[usize]) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let eig = SymmetricEigen::new(restrict(m, support));
    if eig.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidState("eigendecomposition did not converge".into()));
    }
    Ok(eig)
}

/// Truncated coherent ket `e^{-α²/2} Σ αⁿ/√n! |n⟩`.
pub fn coherent_ket(alpha: f64, dim: usize) -> DVector<Complex64> {
    let mut ket = DVector::zeros(dim);
    let mut amp = (-0.5 * alpha * alpha).exp();
    for k in 0..dim {
        ket[k] = Complex64::new(amp, 0.0);
        amp *= alpha / ((k + 1) as f64).sqrt();
    }
    ket
}

fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// `exp(α(a† - a))` in a `dim`-level truncation, via the eigenbasis of the
/// Hermitian generator `i(a† - a)`. Only the low-lying block is accurate.
pub fn displacement_operator(alpha: f64, dim: usize) -> DMatrix<Complex64> {
    let a = annihilation(dim);
    let generator = (a.adjoint() - &a) * Complex64::new(0.0, 1.0);
    let eig = SymmetricEigen::new(generator);
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(0.0, -alpha * l).exp()));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Twin beam `sqrt(1-λ²) Σ λⁿ |n⟩|n⟩` on `dim × dim` levels (index `n_a·dim + n_b`).
pub fn twin_beam_ket(lambda: f64, dim: usize) -> DVector<Complex64> {
    let mut ket = DVector::zeros(dim * dim);
    let mut amp = (1.0 - lambda * lambda).sqrt();
    for k in 0..dim {
        ket[k * dim + k] = Complex64::new(amp, 0.0);
        amp *= lambda;
    }
    ket
}

/// Apply `D_a(α) ⊗ I` to a two-mode ket with `dim` levels per mode.
pub fn displace_first_mode(ket: &DVector<Complex64>, alpha: f64, dim: usize) -> DVector<Complex64> {
    let big = 2 * dim + (4.0 * alpha * alpha).ceil() as usize + 20;
    let d = displacement_operator(alpha, big);
    let d = d.view((0, 0), (dim, dim));
    let mut out = DVector::zeros(dim * dim);
    for na in 0..dim {
        for nb in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for ma in 0..dim {
                acc += d[(na, ma)] * ket[ma * dim + nb];
            }
            out[na * dim + nb] = acc;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelstromOutcome {
    pub error_probability: f64,
    /// `P(seed | displaced)`.
    pub miss: f64,
    /// `P(displaced | seed)`.
    pub false_alarm: f64,
    /// Largest trace deficit of the two inputs.
    pub truncation_deficit: f64,
}

/// Minimum-error discrimination of `seed` (symbol 1) and `displaced`
/// (symbol 2) by projecting on the sign of the eigenvalues of
/// `ρ₂ - ρ₁`; the null space is split evenly between the two outcomes.
pub fn helstrom_fock(seed: &FockState, displaced: &FockState) -> Result<HelstromOutcome> {
    if seed.dim() != displaced.dim() {
        return Err(Error::DimensionMismatch {
            left: seed.dim(),
            right: displaced.dim(),
        });
    }
    let deficit = seed.trace_deficit.max(displaced.trace_deficit);
    if deficit > TRUNCATION_WARNING {
        warn!("Fock truncation at dim {} loses {deficit:e} of the trace", seed.dim());
    }
    let support = joint_support(&[&seed.matrix, &displaced.matrix]);
    let eig = reduced_eigen(&(&displaced.matrix - &seed.matrix), &support)?;
    let v = &eig.eigenvectors;
    let weight_displaced: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if l.abs() < ZERO_EIGENVALUE {
                0.5
            } else if l > 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    // rows outside the support are zero in both states and carry no weight
    let diag = |rho: &DMatrix<Complex64>| -> Vec<f64> {
        let rotated = v.adjoint() * restrict(rho, &support) * v;
        (0..rotated.nrows()).map(|k| rotated[(k, k)].re).collect()
    };
    let d_seed = diag(&seed.matrix);
    let d_disp = diag(&displaced.matrix);
    let false_alarm: f64 = d_seed.iter().zip(&weight_displaced).map(|(p, w)| p * w).sum();
    let miss: f64 = d_disp.iter().zip(&weight_displaced).map(|(p, w)| p * (1.0 - w)).sum();
    Ok(HelstromOutcome {
        error_probability: 0.5 * (miss + false_alarm),
        miss,
        false_alarm,
        truncation_deficit: deficit,
    })
}

/// Photon-number distribution `p(0..cutoff)` of a displaced thermal state,
/// obtained by discrete Fourier inversion of its number characteristic
/// function `E[e^{iθn}] = exp(-|γ|²(1-z)/(1+n̄(1-z))) / (1+n̄(1-z))`, `z = e^{iθ}`.
pub fn photon_number_distribution(state: &SingleModeState, cutoff: usize) -> Vec<f64> {
    let gamma_sq = state.amplitude * state.amplitude;
    let nbar = state.thermal_mean;
    let spread = (gamma_sq * (2.0 * nbar + 1.0) + nbar * (nbar + 1.0)).sqrt();
    let needed = (8.0 * (state.mean_photon_number() + 20.0 * spread + 40.0)) as usize;
    let points = needed.max(4 * cutoff).max(256).next_power_of_two();
    let samples: Vec<Complex64> = (0..points)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / points as f64;
            let one_minus_z = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
            let denom = Complex64::new(1.0, 0.0) + one_minus_z * nbar;
            (-(one_minus_z * gamma_sq) / denom).exp() / denom
        })
        .collect();
    (0..cutoff)
        .map(|n| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(k, s)| s * Complex64::from_polar(1.0, -2.0 * PI * (n * k % points) as f64 / points as f64))
                .sum();
            (sum.re / points as f64).max(0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn helstrom_closed(n: f64) -> f64 {
        0.5 * (1.0 - (1.0 - (-2.0 * n).exp()).sqrt())
    }

    #[test]
    fn identical_states_are_indistinguishable() {
        let s = FockState::coherent(0.8, 20).unwrap();
        let out = helstrom_fock(&s, &s).unwrap();
        assert!((out.error_probability - 0.5).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_states_are_perfectly_distinguishable() {
        let a = FockState::number(0, 8).unwrap();
        let b = FockState::number(1, 8).unwrap();
        assert!(helstrom_fock(&a, &b).unwrap().error_probability.abs() < 1e-15);
    }

    #[test]
    fn coherent_pair_matches_closed_form() {
        let n: f64 = 1.0;
        let out = helstrom_fock(
            &FockState::vacuum(40).unwrap(),
            &FockState::coherent((2.0 * n).sqrt(), 40).unwrap(),
        )
        .unwrap();
        assert!((out.error_probability - helstrom_closed(n)).abs() < 1e-8);
    }

    #[test]
    fn convergence_with_truncation() {
        for &n in &[0.5f64, 1.0, 2.0] {
            let errs: Vec<f64> = [10, 20, 40]
                .iter()
                .map(|&d| {
                    let out = helstrom_fock(
                        &FockState::vacuum(d).unwrap(),
                        &FockState::coherent((2.0 * n).sqrt(), d).unwrap(),
                    )
                    .unwrap();
                    (out.error_probability - helstrom_closed(n)).abs()
                })
                .collect();
            assert!(errs[1] <= errs[0] && errs[2] <= errs[1], "{errs:?}");
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = FockState::vacuum(5).unwrap();
        let b = FockState::vacuum(6).unwrap();
        assert!(matches!(helstrom_fock(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_density_is_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(FockState::from_density(m).is_err());
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(FockState::from_density(m).is_err());
    }

    #[test]
    fn truncation_deficit_reported() {
        let s = FockState::coherent(3.0, 10).unwrap();
        assert!(s.trace_deficit() > 1e-3);
        let s = FockState::coherent(3.0, 64).unwrap();
        assert!(s.trace_deficit() < 1e-14);
    }

    #[test]
    fn displacement_builds_coherent_states() {
        let d = displacement_operator(1.2, 80);
        let col: DVector<Complex64> = d.column(0).into_owned();
        let expect = coherent_ket(1.2, 80);
        for k in 0..20 {
            assert!((col[k] - expect[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn number_distribution_two_routes() {
        let state = SingleModeState::new(1.1, 0.3).unwrap();
        let fourier = photon_number_distribution(&state, 30);
        let fock = FockState::displaced_thermal(&state, 30).unwrap().photon_distribution();
        for k in 0..30 {
            assert!((fourier[k] - fock[k]).abs() < 1e-12, "k={k}");
        }
        let total: f64 = fourier.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        let mean: f64 = fourier.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - state.mean_photon_number()).abs() < 1e-9);
    }

    #[test]
    fn pure_coherent_distribution_is_poisson() {
        let state = SingleModeState::coherent(1.5);
        let p = photon_number_distribution(&state, 20);
        let mut poisson = (-2.25f64).exp();
        for (k, &pk) in p.iter().enumerate() {
            assert!((pk - poisson).abs() < 1e-14);
            poisson *= 2.25 / (k + 1) as f64;
        }
    }
}
