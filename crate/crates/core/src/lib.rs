//! Monte Carlo simulator for entanglement-assisted optical ranging with
//! cross-correlated balanced homodyne detection.
//!
//! The pipeline for one trial is
//!
//! 1. [`field_source`]: sample white Gaussian quadrature fluctuations of the
//!    entangled probe/idler pair (or a classical common-phase-noise pair),
//!    the environment, vacuum ports and reference fields;
//! 2. [`channel`]: delay and attenuate the probe and add receiver noise;
//! 3. [`homodyne`]: form the idler and the two probe photocurrent
//!    fluctuations;
//! 4. [`correlator`]: scan idler/probe cross-correlations over lag, build the
//!    phase-free statistic `c1² + c2²`, locate the peak and decide.
//!
//! [`analytic`] holds the closed-form predictions the simulation is checked
//! against and [`experiment`] runs ensembles of trials.

pub mod analytic;
pub mod channel;
pub mod correlator;
pub mod error;
pub mod experiment;
pub mod field_source;
pub mod homodyne;
pub mod seed;

pub use error::{Error, Result};
