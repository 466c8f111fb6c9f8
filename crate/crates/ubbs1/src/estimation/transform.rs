//! Bijection between the constrained parameter space and R^5 so standard
//! unconstrained optimizers apply: log for the four positive parameters,
//! atanh for the correlation.

use crate::dist::Ubbs1Params;

/// Keeps exp() in range and rho off the +-1 singularities when an optimizer
/// wanders. Forward of any reasonable parameter point is unaffected.
const LOG_CLAMP: f64 = 300.0;
const RHO_MARGIN: f64 = 1e-10;

pub fn to_unconstrained(p: &Ubbs1Params) -> [f64; 5] {
    [p.alpha1().ln(), p.alpha2().ln(), p.beta1().ln(), p.beta2().ln(), p.rho().atanh()]
}

pub fn from_unconstrained(x: &[f64; 5]) -> Ubbs1Params {
    let e = |v: f64| v.clamp(-LOG_CLAMP, LOG_CLAMP).exp();
    let rho = x[4].tanh().clamp(-(1.0 - RHO_MARGIN), 1.0 - RHO_MARGIN);
    // Components are individually valid by construction.
    Ubbs1Params::new(e(x[0]), e(x[1]), e(x[2]), e(x[3]), rho).expect("transform produced invalid params")
}

/// d(theta_i)/d(x_i) at a parameter point: theta for the log-mapped
/// coordinates, 1 - rho^2 for the atanh-mapped one. Used to push the
/// analytic likelihood gradient into the optimizer's coordinates.
pub fn jacobian_diag(p: &Ubbs1Params) -> [f64; 5] {
    [p.alpha1(), p.alpha2(), p.beta1(), p.beta2(), 1.0 - p.rho() * p.rho()]
}
