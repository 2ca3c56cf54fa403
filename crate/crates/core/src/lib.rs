//! Bivariate beta distributions built from gamma ratios.
//!
//! This crate provides, in layers:
//!
//! - [`numerics`]: log-gamma/digamma/trigamma, and seeded random streams
//!   with gamma, beta, and binomial generators ([`numerics::RngStream`]);
//! - [`model`]: exact samplers for the five- and eight-parameter
//!   bivariate beta families, their marginal beta laws, and the
//!   closed-form cross moment of the five-parameter family;
//! - [`priors`]: the gamma and modified-uniform priors used by the
//!   likelihood-free engines, with a small named registry;
//! - [`summaries`]: the eight-component summary statistic vector and the
//!   L1 summary distance;
//! - [`estimation`]: beta and beta-binomial maximum likelihood, and the
//!   modified maximum likelihood (moment-closure) estimator of the
//!   five-parameter family;
//! - [`abc`]: accept-reject and Metropolis-Hastings approximate Bayesian
//!   computation engines, deterministic for a fixed seed regardless of
//!   thread count;
//! - [`betabinom`]: the bivariate beta-binomial model for 5x5 purchase
//!   count tables, with the bundled grocery data;
//! - [`study`]: the simulation-study driver and its report files behind
//!   the command-line interface.
//!
//! Everything random is addressed by `(master_seed, stream_index)`; see
//! [`numerics::StreamFamily`]. Re-running any routine with the same seed
//! reproduces its output bit for bit, including under parallelism.

pub mod abc;
pub mod betabinom;
pub mod error;
pub mod estimation;
pub mod model;
pub mod numerics;
pub mod priors;
pub mod study;
pub mod summaries;

pub use error::{Error, Result};
