//! Numerics for the Bernoulli model T_n = sum_{k<=n} k Z_k of the Dickman
//! distribution: an error-controlled Dickman-function table, the analytic
//! kernels of the characteristic-function factorization, exact finite-n
//! distributions with independent oracles, and a seeded Monte-Carlo engine
//! for the almost-sure hit-count law.

pub mod asllt;
pub mod bernoulli;
pub mod dickman;
pub mod error;
pub mod kahan;
pub mod kernels;
pub mod metrics;
pub mod pmf;
pub mod poisson;
pub mod polylog;
pub mod quad;
pub mod rng;
pub mod sici;
pub mod target;
pub mod verify;

pub use dickman::{exp_neg_gamma, DickmanTable, EULER_GAMMA};
pub use error::{Error, Result};
pub use pmf::{Pmf, PmfKind};
