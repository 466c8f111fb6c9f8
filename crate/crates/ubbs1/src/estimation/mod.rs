//! Parameter estimation: maximum likelihood with the analytic gradient,
//! maximum product of spacings, and a Beta baseline for model comparison.
//!
//! Fitting works in the unconstrained reparameterization (log shapes and
//! scales, atanh correlation): Nelder-Mead from each start, then a BFGS
//! polish. The likelihood route polishes with the analytic gradient pushed
//! through the transform; the spacings route uses central differences.

mod beta_fit;
mod likelihood;
mod mps;
mod optim;
mod transform;

pub use beta_fit::{fit_beta_baseline, BetaFit};
pub use likelihood::{log_likelihood, log_likelihood_gradient};
pub use mps::{mps_objective, mps_objective_with_order, spacings};
pub use transform::{from_unconstrained, jacobian_diag, to_unconstrained};

use crate::dist::Ubbs1Params;
use crate::error::{Error, Result};
use optim::{bfgs, fd_gradient, nelder_mead, MinimizeOutcome};
use serde::{Deserialize, Serialize};

/// Minimum observations for a 5-parameter fit.
const MIN_FIT_N: usize = 6;

/// An ordered dataset of observations strictly inside (0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSample {
    values: Vec<f64>,
    sorted: Vec<f64>,
    source: String,
}

impl UnitSample {
    /// Validates every value into the open interval and caches a sorted copy.
    pub fn new(values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("sample is empty".into()));
        }
        for (i, &z) in values.iter().enumerate() {
            if !(z.is_finite() && z > 0.0 && z < 1.0) {
                return Err(Error::InvalidData(format!("observation {i} = {z} is not inside (0, 1)")));
            }
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { values, sorted, source: source.into() })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nondecreasing copy cached at construction (the spacings objective
    /// consumes it on every evaluation).
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn median(&self) -> f64 {
        let n = self.sorted.len();
        if n % 2 == 1 {
            self.sorted[n / 2]
        } else {
            0.5 * (self.sorted[n / 2 - 1] + self.sorted[n / 2])
        }
    }

    /// Number of exactly tied adjacent order statistics.
    pub fn tie_count(&self) -> usize {
        self.sorted.windows(2).filter(|w| w[0] == w[1]).count()
    }
}

/// Which estimator produced a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Mps,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::Mps => "mps",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mle" => Ok(Method::Mle),
            "mps" => Ok(Method::Mps),
            other => Err(Error::InvalidData(format!("unknown method '{other}' (expected mle or mps)"))),
        }
    }
}

/// Multi-start optimizer settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Number of starts kept from the initialization grid (plus an explicit
    /// init when provided).
    pub starts: usize,
    pub nm_max_iter: usize,
    pub nm_step: f64,
    pub bfgs_max_iter: usize,
    /// Infinity-norm gradient tolerance, transformed scale.
    pub grad_tol: f64,
    /// Relative objective-change tolerance.
    pub obj_tol: f64,
    /// Quasi-Newton polish after Nelder-Mead. Off reproduces the classic
    /// simplex-only workflow.
    pub polish: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 8,
            nm_max_iter: 800,
            nm_step: 0.25,
            bfgs_max_iter: 200,
            grad_tol: 1e-6,
            obj_tol: 1e-14,
            polish: true,
        }
    }
}

/// Result of a UBBS1 fit. AIC and BIC use the log-likelihood at the returned
/// parameters whatever the fitting objective was, so spacings fits are
/// directly comparable in model-selection tables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Ubbs1Params,
    pub method: Method,
    /// Value of the fitted objective (log-likelihood or mean log spacing).
    pub objective: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Infinity norm of the transformed-scale likelihood gradient at the
    /// optimum; populated for the likelihood route only.
    pub gradient_norm: Option<f64>,
}

/// Candidate starting points: scale pair anchored by the sample median
/// (beta2/beta1 near median/(1-median), summing to 2), crossed with coarse
/// shape and correlation grids, ranked by the objective.
fn start_grid(sample: &UnitSample) -> Vec<Ubbs1Params> {
    let m = sample.median().clamp(0.02, 0.98);
    let beta1 = 2.0 * (1.0 - m);
    let beta2 = 2.0 * m;
    let alphas = [0.3, 0.8, 1.5];
    let rhos = [-0.5, 0.0, 0.5];
    let mut grid = Vec::with_capacity(27);
    for &a1 in &alphas {
        for &a2 in &alphas {
            for &r in &rhos {
                grid.push(Ubbs1Params::new(a1, a2, beta1, beta2, r).expect("grid point valid"));
            }
        }
    }
    grid
}

/// Maximizes the chosen objective. `init`, when given, always becomes the
/// first start; the rest come from the data-driven grid.
pub fn fit(
    sample: &UnitSample,
    method: Method,
    init: Option<Ubbs1Params>,
    config: &OptimizerConfig,
) -> Result<FitResult> {
    if sample.len() < MIN_FIT_N {
        return Err(Error::InsufficientData { needed: MIN_FIT_N, got: sample.len() });
    }
    if config.starts == 0 {
        return Err(Error::InvalidParams("optimizer needs at least one start".into()));
    }

    // Minimization objective on the unconstrained scale; inadmissible or
    // non-finite evaluations become +inf walls.
    let objective = |x: &[f64; 5]| -> f64 {
        if !x.iter().all(|v| v.is_finite()) {
            return f64::INFINITY;
        }
        let p = from_unconstrained(x);
        let val = match method {
            Method::Mle => log_likelihood(sample, &p),
            Method::Mps => mps_objective(sample, &p),
        };
        match val {
            Ok(v) if v.is_finite() => -v,
            _ => f64::INFINITY,
        }
    };

    // Assemble starts: explicit init first, then the best grid points.
    let mut starts: Vec<[f64; 5]> = Vec::new();
    if let Some(p) = init {
        starts.push(to_unconstrained(&p));
    }
    if starts.len() < config.starts {
        let mut ranked: Vec<([f64; 5], f64)> = start_grid(sample)
            .iter()
            .map(|p| {
                let x = to_unconstrained(p);
                let fx = objective(&x);
                (x, fx)
            })
            .collect();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (x, fx) in ranked {
            if starts.len() >= config.starts {
                break;
            }
            if fx.is_finite() {
                starts.push(x);
            }
        }
    }
    if starts.is_empty() {
        return Err(Error::NonConvergence("no admissible starting point".into()));
    }

    let mut best: Option<(MinimizeOutcome, usize)> = None;
    for x0 in &starts {
        let nm = nelder_mead(objective, *x0, config.nm_step, config.nm_max_iter, config.obj_tol);
        if !nm.fx.is_finite() {
            continue;
        }
        let polished = if !config.polish {
            nm.clone()
        } else { match method {
            Method::Mle => {
                let grad = |x: &[f64; 5]| -> [f64; 5] {
                    if !x.iter().all(|v| v.is_finite()) {
                        return [f64::NAN; 5];
                    }
                    let p = from_unconstrained(x);
                    match log_likelihood_gradient(sample, &p) {
                        Ok(g) => {
                            let jac = jacobian_diag(&p);
                            let mut out = [0.0; 5];
                            for k in 0..5 {
                                out[k] = -g[k] * jac[k];
                            }
                            out
                        }
                        Err(_) => [f64::NAN; 5],
                    }
                };
                bfgs(objective, grad, nm.x, config.bfgs_max_iter, config.grad_tol, config.obj_tol)
            }
            Method::Mps => bfgs(
                objective,
                |x| fd_gradient(objective, x),
                nm.x,
                config.bfgs_max_iter,
                config.grad_tol,
                config.obj_tol,
            ),
        } };
        let nm_converged = nm.converged;
        let (mut outcome, nm_iters) = if polished.fx <= nm.fx { (polished, nm.iterations) } else {
            (nm, 0)
        };
        outcome.iterations += nm_iters;
        outcome.converged |= nm_converged;
        let better = match &best {
            None => true,
            Some((b, _)) => outcome.fx < b.fx,
        };
        if better {
            best = Some((outcome, 0));
        }
    }

    let (outcome, _) = best.ok_or_else(|| Error::NonConvergence("every start diverged".into()))?;
    if !outcome.fx.is_finite() {
        return Err(Error::NonConvergence("optimum is not finite".into()));
    }

    let params = from_unconstrained(&outcome.x);
    let loglik = log_likelihood(sample, &params)?;
    let objective_value = match method {
        Method::Mle => loglik,
        Method::Mps => -outcome.fx,
    };
    let k = 5.0;
    let n = sample.len() as f64;
    let (converged, gradient_norm) = match method {
        Method::Mle => {
            let gnorm = outcome.grad_norm.unwrap_or(f64::INFINITY);
            (outcome.converged && gnorm.is_finite(), Some(gnorm))
        }
        Method::Mps => (outcome.converged, None),
    };

    Ok(FitResult {
        params,
        method,
        objective: objective_value,
        loglik,
        aic: -2.0 * loglik + 2.0 * k,
        bic: -2.0 * loglik + k * n.ln(),
        converged,
        iterations: outcome.iterations,
        gradient_norm,
    })
}
