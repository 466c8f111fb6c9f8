//! Birnbaum-Saunders primitives: the normalizing transform a(t) with its
//! derivative and inverse, marginal BS density/CDF, the bivariate BS joint
//! density, and the conditional CDF of one coordinate given the other.
//!
//! T ~ BS(alpha, beta) exactly when a(T) = (1/alpha)(sqrt(T/beta) -
//! sqrt(beta/T)) is standard normal.

use crate::error::{Error, Result};
use crate::specfun::{std_normal_cdf, std_normal_pdf};
use serde::{Deserialize, Serialize};

/// Marginal Birnbaum-Saunders parameters: shape alpha > 0, scale beta > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams {
    alpha: f64,
    beta: f64,
}

impl BsParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParams(format!("BS shape must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParams(format!("BS scale must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Bivariate Birnbaum-Saunders parameters: two marginals plus the
/// normal-scale correlation rho in (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivBsParams {
    pub x: BsParams,
    pub y: BsParams,
    rho: f64,
}

impl BivBsParams {
    pub fn new(x: BsParams, y: BsParams, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho.abs() < 1.0) {
            return Err(Error::InvalidParams(format!("correlation must lie in (-1, 1), got {rho}")));
        }
        Ok(Self { x, y, rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// a(t) = (1/alpha)(sqrt(t/beta) - sqrt(beta/t)); strictly increasing with
/// a(beta) = 0.
pub fn a_transform(t: f64, p: &BsParams) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("BS transform needs t > 0, got {t}")));
    }
    let r = (t / p.beta).sqrt();
    Ok((r - 1.0 / r) / p.alpha)
}

/// a'(t) = (1/(2 alpha t))(sqrt(t/beta) + sqrt(beta/t)) > 0.
pub fn a_derivative(t: f64, p: &BsParams) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("BS transform needs t > 0, got {t}")));
    }
    let r = (t / p.beta).sqrt();
    Ok((r + 1.0 / r) / (2.0 * p.alpha * t))
}

/// Inverse of the transform: a^{-1}(u) = (beta/4)(alpha u + sqrt((alpha u)^2 + 4))^2.
pub fn a_inverse(u: f64, p: &BsParams) -> f64 {
    let au = p.alpha * u;
    let root = au.hypot(2.0); // sqrt((alpha u)^2 + 4)
    p.beta / 4.0 * (au + root) * (au + root)
}

/// Marginal BS density phi(a(t)) a'(t).
pub fn bs_pdf(t: f64, p: &BsParams) -> Result<f64> {
    Ok(std_normal_pdf(a_transform(t, p)?) * a_derivative(t, p)?)
}

/// Marginal BS CDF Phi(a(t)).
pub fn bs_cdf(t: f64, p: &BsParams) -> Result<f64> {
    Ok(std_normal_cdf(a_transform(t, p)?))
}

/// log of the standard bivariate normal density at (u, v) with correlation rho.
pub(crate) fn log_phi2(u: f64, v: f64, rho: f64) -> f64 {
    let omr2 = 1.0 - rho * rho;
    -(2.0 * std::f64::consts::PI).ln() - 0.5 * omr2.ln()
        - (u * u + v * v - 2.0 * rho * u * v) / (2.0 * omr2)
}

/// log joint density of the bivariate BS law:
/// log phi2(a(x), a(y); rho) + log a'(x) + log a'(y).
pub fn biv_bs_log_pdf(x: f64, y: f64, p: &BivBsParams) -> Result<f64> {
    let ax = a_transform(x, &p.x)?;
    let ay = a_transform(y, &p.y)?;
    Ok(log_phi2(ax, ay, p.rho) + a_derivative(x, &p.x)?.ln() + a_derivative(y, &p.y)?.ln())
}

/// Joint density; evaluated in log space to survive extreme quantiles.
pub fn biv_bs_pdf(x: f64, y: f64, p: &BivBsParams) -> Result<f64> {
    Ok(biv_bs_log_pdf(x, y, p)?.exp())
}

/// P(X <= x | Y = y) = Phi((a(x) - rho a(y)) / sqrt(1 - rho^2)).
pub fn conditional_cdf_x_given_y(x: f64, y: f64, p: &BivBsParams) -> Result<f64> {
    let ax = a_transform(x, &p.x)?;
    let ay = a_transform(y, &p.y)?;
    Ok(std_normal_cdf((ax - p.rho * ay) / (1.0 - p.rho * p.rho).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::integrate_adaptive;

    fn bs(alpha: f64, beta: f64) -> BsParams {
        BsParams::new(alpha, beta).unwrap()
    }

    #[test]
    fn transform_at_scale_is_zero() {
        for &(a, b) in &[(0.5, 1.0), (2.0, 3.7), (1.0, 0.2)] {
            assert_eq!(a_transform(b, &bs(a, b)).unwrap(), 0.0);
        }
    }

    #[test]
    fn transform_direct_substitution() {
        // t = 4, alpha = 1, beta = 1: 2 - 1/2.
        assert!((a_transform(4.0, &bs(1.0, 1.0)).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_direct_substitution() {
        assert!((a_derivative(1.0, &bs(1.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        // (1/(2*2*4))(2 + 0.5) = 0.15625
        assert!((a_derivative(4.0, &bs(2.0, 1.0)).unwrap() - 0.15625).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = bs(0.5, 2.0);
        let t = 0.37;
        let h = 1e-6;
        let fd = (a_transform(t + h, &p).unwrap() - a_transform(t - h, &p).unwrap()) / (2.0 * h);
        let an = a_derivative(t, &p).unwrap();
        assert!(((an - fd) / an).abs() < 1e-8);
    }

    #[test]
    fn inverse_round_trips() {
        let p = bs(0.8, 1.7);
        for &t in &[0.1, 1.0, 10.0] {
            let u = a_transform(t, &p).unwrap();
            assert!((a_inverse(u, &p) - t).abs() / t < 1e-12);
        }
        for &u in &[-3.0, 0.0, 0.1, 7.0] {
            let t = a_inverse(u, &p);
            assert!((a_transform(t, &p).unwrap() - u).abs() < 1e-12);
        }
        assert_eq!(a_inverse(0.0, &p), p.beta());
    }

    #[test]
    fn transform_strictly_increasing() {
        let p = bs(1.3, 0.6);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..100 {
            let t = 10f64.powf(-2.0 + 4.0 * i as f64 / 99.0);
            let a = a_transform(t, &p).unwrap();
            assert!(a > prev);
            prev = a;
        }
    }

    #[test]
    fn joint_factorizes_at_zero_correlation() {
        let p = BivBsParams::new(bs(0.5, 1.0), bs(0.5, 1.0), 0.0).unwrap();
        let f = biv_bs_pdf(1.2, 0.8, &p).unwrap();
        let g = bs_pdf(1.2, &p.x).unwrap() * bs_pdf(0.8, &p.y).unwrap();
        assert!(((f - g) / g).abs() < 1e-14);
    }

    #[test]
    fn joint_exchange_symmetry() {
        let p = BivBsParams::new(bs(0.4, 1.3), bs(0.9, 0.7), 0.35).unwrap();
        let q = BivBsParams::new(bs(0.9, 0.7), bs(0.4, 1.3), 0.35).unwrap();
        let f = biv_bs_pdf(1.9, 0.55, &p).unwrap();
        let g = biv_bs_pdf(0.55, 1.9, &q).unwrap();
        assert!(((f - g) / g).abs() < 1e-14);
    }

    #[test]
    fn joint_normalizes() {
        // Iterated adaptive quadrature of the joint over (0, 20)^2.
        let p = BivBsParams::new(bs(0.5, 1.0), bs(0.5, 1.0), 0.5).unwrap();
        let (mass, _) = integrate_adaptive(
            |x| {
                let (inner, _) =
                    integrate_adaptive(|y| biv_bs_pdf(x, y, &p).unwrap(), 1e-8, 20.0, 1e-10).unwrap();
                inner
            },
            1e-8,
            20.0,
            1e-8,
        )
        .unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
    }

    #[test]
    fn marginal_recovered_by_integrating_out_y() {
        let p = BivBsParams::new(bs(0.6, 1.1), bs(0.8, 0.9), -0.4).unwrap();
        for i in 0..20 {
            let x = 0.15 + 0.2 * i as f64;
            let (got, _) =
                integrate_adaptive(|y| biv_bs_pdf(x, y, &p).unwrap(), 1e-9, 40.0, 1e-10).unwrap();
            let want = bs_pdf(x, &p.x).unwrap();
            assert!((got - want).abs() < 1e-6, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn conditional_independence_case() {
        let p = BivBsParams::new(bs(0.5, 1.0), bs(0.9, 2.0), 0.0).unwrap();
        for &x in &[0.3, 1.0, 2.5] {
            let c1 = conditional_cdf_x_given_y(x, 0.4, &p).unwrap();
            let c2 = conditional_cdf_x_given_y(x, 3.1, &p).unwrap();
            assert!((c1 - c2).abs() < 1e-15);
            assert!((c1 - bs_cdf(x, &p.x).unwrap()).abs() < 1e-15);
        }
        // x at its scale parameter: a(beta1) = 0, Phi(0) = 1/2.
        assert!((conditional_cdf_x_given_y(1.0, 0.7, &p).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn conditional_against_numerical_conditioning() {
        // P(X <= x | Y = y) = (d/dy slice integral) f(x', y) dx' / f_Y(y).
        let p = BivBsParams::new(bs(0.5, 1.0), bs(0.5, 1.0), 0.5).unwrap();
        let (x, y) = (2.0, 1.0);
        let (num, _) =
            integrate_adaptive(|t| biv_bs_pdf(t, y, &p).unwrap(), 1e-9, x, 1e-11).unwrap();
        let den = bs_pdf(y, &p.y).unwrap();
        let want = num / den;
        let got = conditional_cdf_x_given_y(x, y, &p).unwrap();
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }

    #[test]
    fn conditional_limits() {
        let p = BivBsParams::new(bs(0.5, 1.0), bs(0.7, 1.4), 0.6).unwrap();
        assert!(conditional_cdf_x_given_y(1e-10, 1.0, &p).unwrap() < 1e-12);
        assert!(conditional_cdf_x_given_y(1e10, 1.0, &p).unwrap() > 1.0 - 1e-12);
        let mut prev = -1.0;
        for i in 1..60 {
            let x = 0.1 * i as f64;
            let c = conditional_cdf_x_given_y(x, 0.8, &p).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(BsParams::new(0.0, 1.0).is_err());
        assert!(BsParams::new(1.0, -2.0).is_err());
        assert!(BivBsParams::new(bs(1.0, 1.0), bs(1.0, 1.0), 1.0).is_err());
        assert!(a_transform(0.0, &bs(1.0, 1.0)).is_err());
        assert!(a_derivative(-1.0, &bs(1.0, 1.0)).is_err());
        assert!(biv_bs_pdf(-0.1, 1.0, &BivBsParams::new(bs(1.0, 1.0), bs(1.0, 1.0), 0.0).unwrap()).is_err());
    }
}
