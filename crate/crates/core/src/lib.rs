//! Kernel and Kaplan-Meier based estimation of the extreme value index from
//! randomly right-censored heavy-tailed samples.
//!
//! The crate covers sampling from Pareto-type models under random censoring,
//! Kaplan-Meier curves, the estimators themselves, their asymptotic
//! constants, data-driven choice of `k` and a Monte-Carlo engine.

pub mod asymptotics;
pub mod commands;
pub mod error;
pub mod estimators;
pub mod io;
pub mod kernels;
pub mod models;
pub mod montecarlo;
pub mod parallel;
pub mod quadrature;
pub mod rng;
pub mod selection;
pub mod survival;

pub use asymptotics::AsymptoticContext;
pub use error::{Error, Result};
pub use estimators::{Estimate, Estimator, EstimatorPath, KmSample, Undefined, Variant};
pub use kernels::{BabKernel, Kernel};
pub use models::{sample_censored, CensoredSample, CensoringScheme, Family, ParetoTypeModel};
pub use montecarlo::{run_scenario, ScenarioConfig, SimulationSummary};
pub use parallel::Execution;
pub use survival::OrderedCensoredSample;
