//! Secrecy degrees-of-freedom simulation for multi-antenna wiretap and
//! confidential broadcast channels with delayed channel state feedback.
//!
//! The crate builds the artificial-noise transmission schemes as explicit
//! linear Gaussian models ([`schemes`]), evaluates exact Gaussian mutual
//! informations over Monte Carlo fading draws ([`numerics`], [`estimator`])
//! and compares the fitted high-SNR slopes with the secrecy DoF region
//! ([`region`]).

pub mod channel;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod numerics;
pub mod region;
pub mod schemes;

pub use error::{Error, Result};
