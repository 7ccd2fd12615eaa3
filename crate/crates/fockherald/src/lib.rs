//! Exact simulation and analysis of photon-number-resolving detection built
//! from non-discriminating (click / no-click) detectors.
//!
//! The crate provides:
//!
//! * sparse multimode Fock states and sub-normalized pure-state ensembles
//!   ([`fock`]);
//! * beamsplitters, loss channels and circuits with exact Fock-basis action
//!   ([`elements`]);
//! * inefficient click and number-resolving detector conditioning
//!   ([`detection`]);
//! * closed-form detection probabilities ([`analytic`]) with an independent
//!   brute-force enumeration oracle ([`oracle`]);
//! * the cascade, time-multiplexed and conditioned-chain counting schemes
//!   ([`schemes`]);
//! * a heralded linear-optical CNOT gate with worst-case fidelity and success
//!   probability search ([`cnot`]);
//! * agreement suites ([`validate`]) and the command-line front end ([`cli`]).
//!
//! A two-photon pulse hitting a single-stage conditioned tap is perceived as
//! one photon only when exactly the tap detector fires:
//!
//! ```
//! use fockherald::analytic::chain_prob_m1;
//! use fockherald::schemes::{simulate_chain, ChainConfig};
//!
//! let config = ChainConfig { k: 1, eta_ref: 0.1, eta_eff: 0.9 };
//! let simulated = simulate_chain(2, &config).unwrap();
//! assert!((simulated - 0.0261).abs() < 1e-12);
//! assert!((simulated - chain_prob_m1(2, 0.1, 0.9)).abs() < 1e-12);
//! ```

pub mod analytic;
pub mod cli;
pub mod cnot;
pub mod detection;
pub mod elements;
pub mod error;
pub mod fock;
mod math;
pub mod oracle;
pub mod schemes;
pub mod validate;

pub use error::{Error, Result};
pub use fock::{Ensemble, OccupationVector, SparseState};
pub use num_complex::Complex64;
