//! Maximum product of spacings objective: the mean log of the CDF spacings
//! at the order statistics, with F = 0 and F = 1 as boundary values.

use crate::dist::{Ubbs1Params, DEFAULT_QUAD_ORDER};
use crate::error::Result;
use crate::estimation::UnitSample;

/// Spacings are floored here before the log; exact ties in rounded data
/// would otherwise send the objective to -infinity.
const SPACING_FLOOR: f64 = 1e-300;

/// The n+1 CDF spacings of the sorted sample. They are nonnegative and sum
/// to one (telescoping).
pub fn spacings(sample: &UnitSample, p: &Ubbs1Params) -> Result<Vec<f64>> {
    spacings_with_order(sample, p, DEFAULT_QUAD_ORDER)
}

pub fn spacings_with_order(sample: &UnitSample, p: &Ubbs1Params, order: usize) -> Result<Vec<f64>> {
    let sorted = sample.sorted();
    let mut out = Vec::with_capacity(sorted.len() + 1);
    let mut prev = 0.0;
    for &z in sorted {
        let f = p.cdf_with_order(z, order)?;
        out.push((f - prev).max(0.0));
        prev = f;
    }
    out.push((1.0 - prev).max(0.0));
    Ok(out)
}

/// H(theta) = (1/(n+1)) sum log Delta_i. Bounded above by log(1/(n+1)),
/// attained exactly when all spacings are equal.
pub fn mps_objective(sample: &UnitSample, p: &Ubbs1Params) -> Result<f64> {
    mps_objective_with_order(sample, p, DEFAULT_QUAD_ORDER)
}

pub fn mps_objective_with_order(sample: &UnitSample, p: &Ubbs1Params, order: usize) -> Result<f64> {
    if sample.len() < 2 {
        return Err(crate::error::Error::InsufficientData { needed: 2, got: sample.len() });
    }
    let deltas = spacings_with_order(sample, p, order)?;
    let m = deltas.len() as f64;
    Ok(deltas.iter().map(|&d| d.max(SPACING_FLOOR).ln()).sum::<f64>() / m)
}
