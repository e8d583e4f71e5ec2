//! Numerical toolkit for one-shot quantum decoupling.
//!
//! The crate works on small dense quantum states and channels and provides:
//!
//! - dense complex linear algebra with Hermitian functional calculus ([`matrix`], [`hermitian`]),
//! - states, channels and random ensembles ([`state`], [`channel`], [`haar`]),
//! - the Umegaki, Petz and sandwiched Rényi divergences and `D_max` ([`divergence`]),
//! - conditional Rényi entropies and coherent informations ([`condentropy`]),
//! - the decoupling error, its Monte Carlo estimate and the one-shot bounds around it ([`decoupling`]),
//! - error-exponent evaluation for decoupling, state merging, distillation and coding ([`exponents`]).
//!
//! All logarithms are base 2 unless a function says otherwise. The crate is `no_std` compatible
//! (it needs `alloc`); the `std` feature is on by default.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod condentropy;
pub mod decoupling;
pub mod divergence;
mod error;
pub mod exponents;
mod extended;
pub mod haar;
pub mod hermitian;
mod linalg;
pub mod matrix;
pub mod metrics;
pub mod optimize;
pub mod rng;
pub mod search;
pub mod state;
mod tolerance;

pub use channel::QuantumChannel;
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use hermitian::{EigenDecomposition, HermitianOperator};
pub use matrix::{ComplexMatrix, C64};
pub use rng::SeededRng;
pub use state::{BipartiteState, MultipartiteState, Subsystem};
pub use tolerance::Tolerances;

/// Float methods for `no_std` builds; with `std` the inherent methods win.
#[allow(unused_imports)]
pub(crate) use num_traits::Float;
