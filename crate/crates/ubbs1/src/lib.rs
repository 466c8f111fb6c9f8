//! Unit Birnbaum-Saunders ratio distribution.
//!
//! The law of Z = Y/(X+Y) on (0,1), where (X, Y) is a bivariate
//! Birnbaum-Saunders pair with normal-scale correlation rho. Provides exact
//! density/CDF evaluation (closed form with exponentially scaled Bessel
//! factors; Gauss-Hermite for the CDF), moments and the MGF, stress-strength
//! probability P(X < Y), modality classification, a seedable sampler, two
//! estimators (maximum likelihood with analytic gradient, maximum product of
//! spacings), a Beta baseline for model comparison, and a Monte Carlo
//! harness for estimator benchmarking.

pub mod bivariate;
pub mod dist;
mod error;
pub mod estimation;
pub mod sampling;
pub mod simulation;
pub mod specfun;

pub use dist::{CriticalPoint, ExtremumKind, Modality, ModalityReport, Ubbs1Params, UvIntermediates};
pub use error::{Error, Result};
pub use estimation::{
    fit, fit_beta_baseline, log_likelihood, log_likelihood_gradient, mps_objective, BetaFit, FitResult,
    Method, OptimizerConfig, UnitSample,
};
pub use sampling::{sample_bivariate_normal, sample_ubbs1, sample_ubbs1_with, RatioConvention, RngState};
pub use simulation::{run_grid, run_scenario, InitPolicy, Scenario, SimulationReport};
