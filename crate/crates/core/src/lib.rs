//! Error probabilities of binary amplitude-keyed (AMK) optical channels.
//!
//! A coherent pair `{|0⟩, |α⟩}` is read with direct (on/off) or homodyne
//! detection; the twin-beam variant displaces one arm of an entangled
//! state and is read with a joint heterodyne measurement. All receivers
//! share one channel model of loss `Γt`, thermal noise `M` and detector
//! efficiency `η`. The [`oracle`] module recomputes the same quantities by
//! independent routes for verification.

pub mod channel;
pub mod comparator;
pub mod entangled;
pub mod error;
pub mod oracle;
pub mod single_mode;
pub mod special;

pub use channel::{
    evolve_single_mode, evolve_two_mode, sigma_minus_sq, twb_variance, ChannelBudget, NoiseParams,
    SingleModeState, Symbol, TwoModeGaussianState,
};
pub use comparator::{
    a_e, asymptotic_floor, b_e, c_e, comparison, error_probability, find_crossovers,
    find_crossovers_with, helstrom_pe, regime_table, ComparisonParams, CrossoverReport, Receiver,
    ReceiverPair, Regime, RegimeTable, ScanOptions, Threshold,
};
pub use entangled::{
    beta_opt_as_printed, beta_opt_full, beta_opt_ideal, heterodyne_variance, qe_ideal, re_ideal,
    re_noisy, separability, survival_fraction, survival_fraction_as_printed, survival_gamma_t,
    HeterodyneVariance, SeparabilityReport,
};
pub use error::{Error, Result};
pub use single_mode::{
    he_conditionals, he_ideal, he_noisy, he_with_threshold, homodyne_density,
    homodyne_optimal_threshold, homodyne_variance, ke_conditionals, ke_ideal, ke_noisy,
    Conditionals, DecisionThreshold, DirectReceiverConfig,
};
