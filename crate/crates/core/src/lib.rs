//! Question-answer quantum states built from e-variables.
//!
//! * [`conceptual`]: finite spaces, group actions, e-variables and their
//!   exhaustive checks.
//! * [`spin`]: spin-j component operators and the states |a;k⟩.
//! * [`measure`]: density operators, resolutions of identity, likelihood
//!   effects, POVMs and the Born rule for noisy data.
//! * [`inference`]: posteriors, MLE and credibility sets over answers.
//! * [`reconstruction`]: the Hilbert space of functions of θ⁰ on a finite
//!   system, candidate |a;k⟩ vectors and group-averaged resolutions.
//! * [`scenario`]: observer-dependent states for the cat, Wigner's-friend
//!   and two-slit set-ups.

pub mod conceptual;
pub mod error;
pub mod fixtures;
pub mod inference;
pub mod measure;
pub mod operator;
pub mod reconstruction;
pub mod scenario;
pub mod serial;
pub mod spin;

pub use error::{Error, Result};
