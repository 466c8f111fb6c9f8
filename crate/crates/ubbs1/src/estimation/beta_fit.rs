//! Two-parameter Beta maximum likelihood baseline for model comparison.
//!
//! Newton iteration on the digamma score equations with a method-of-moments
//! start; the Jacobian is the trigamma information matrix.

use crate::error::{Error, Result};
use crate::estimation::UnitSample;
use crate::specfun::polygamma::{digamma, ln_gamma, trigamma};

#[derive(Debug, Clone, Copy)]
pub struct BetaFit {
    pub alpha: f64,
    pub beta: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn beta_loglik(mean_ln_z: f64, mean_ln_1mz: f64, n: f64, a: f64, b: f64) -> f64 {
    n * ((a - 1.0) * mean_ln_z + (b - 1.0) * mean_ln_1mz - ln_gamma(a) - ln_gamma(b) + ln_gamma(a + b))
}

pub fn fit_beta_baseline(sample: &UnitSample) -> Result<BetaFit> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean_ln_z = sample.values().iter().map(|z| z.ln()).sum::<f64>() / nf;
    let mean_ln_1mz = sample.values().iter().map(|z| (-z).ln_1p()).sum::<f64>() / nf;
    let mean = sample.values().iter().sum::<f64>() / nf;
    let var = sample.values().iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / nf;

    // Method-of-moments start; falls back to the flat prior shape when the
    // sample variance is too large for the Beta family.
    let (mut a, mut b) = if var > 0.0 && var < mean * (1.0 - mean) {
        let c = mean * (1.0 - mean) / var - 1.0;
        (mean * c, (1.0 - mean) * c)
    } else {
        (1.0, 1.0)
    };

    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..200 {
        iterations += 1;
        let psi_ab = digamma(a + b);
        let f1 = digamma(a) - psi_ab - mean_ln_z;
        let f2 = digamma(b) - psi_ab - mean_ln_1mz;
        if f1.abs().max(f2.abs()) < 1e-12 {
            converged = true;
            break;
        }
        let tri_ab = trigamma(a + b);
        let j11 = trigamma(a) - tri_ab;
        let j22 = trigamma(b) - tri_ab;
        let j12 = -tri_ab;
        let det = j11 * j22 - j12 * j12;
        if det.abs() < 1e-300 {
            break;
        }
        let mut da = -(j22 * f1 - j12 * f2) / det;
        let mut db = -(j11 * f2 - j12 * f1) / det;
        // Damp steps that would leave the positive orthant.
        let mut t = 1.0;
        while a + t * da <= 0.0 || b + t * db <= 0.0 {
            t *= 0.5;
            if t < 1e-12 {
                break;
            }
        }
        da *= t;
        db *= t;
        a += da;
        b += db;
        if da.abs().max(db.abs()) < 1e-13 * a.abs().max(b.abs()).max(1.0) {
            converged = true;
            break;
        }
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::NonConvergence("Beta Newton iteration left the parameter space".into()));
    }

    let loglik = beta_loglik(mean_ln_z, mean_ln_1mz, nf, a, b);
    let k = 2.0;
    Ok(BetaFit {
        alpha: a,
        beta: b,
        loglik,
        aic: -2.0 * loglik + 2.0 * k,
        bic: -2.0 * loglik + k * nf.ln(),
        converged,
        iterations,
    })
}
