//! Independent verification engines.
//!
//! Nothing in here is used by the closed-form receivers; each engine
//! reaches the same quantities by a different route so the two can be
//! compared: truncated Fock-space optimal measurements, phase-space
//! quadrature, Monte Carlo sampling of the receivers, and a grid/golden
//! section minimiser.

pub mod fock;
pub mod monte_carlo;
pub mod optimize;
pub mod quadrature;

pub use fock::{helstrom_fock, photon_number_distribution, FockState, HelstromOutcome};
pub use monte_carlo::{mc_bernoulli, mc_receiver, McEstimate, McReceiver, MIN_SHOTS};
pub use optimize::{grid_argmin, ArgMin};
pub use quadrature::{direct_conditionals_quadrature, onoff_prob_quadrature, QuadratureOutcome};
