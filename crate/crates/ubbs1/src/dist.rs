//! The unit Birnbaum-Saunders ratio distribution on (0,1): the law of
//! Z = Y/(X+Y) for a correlated bivariate Birnbaum-Saunders pair.
//!
//! All density work happens in log space with exponentially scaled Bessel
//! factors: the closed form carries a prefactor exp{(1/(1-rho^2))(1/alpha1^2
//! + 1/alpha2^2)} that overflows long before the parameters get interesting,
//! so the bracket {A K0 + B K1} is folded into the log as
//! -t + logsumexp(ln A + ln K0e(t), ln B + ln K1e(t)).

use crate::error::{Error, Result};
use crate::specfun::{cached_hermite, erf, integrate_adaptive, k0_scaled, k1_scaled, QuadratureRule};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Default Gauss-Hermite order for the CDF's weighted-erf integral. Every
/// public CDF evaluation re-checks itself at twice this order.
pub const DEFAULT_QUAD_ORDER: usize = 64;

/// Agreement required between the order-n and order-2n CDF evaluations.
const CDF_CHECK_TOL: f64 = 1e-9;

/// Five-parameter vector (alpha1, alpha2, beta1, beta2, rho): shapes and
/// scales positive, |rho| < 1. Serializes as a flat 5-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 5]", into = "[f64; 5]")]
pub struct Ubbs1Params {
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    rho: f64,
}

impl TryFrom<[f64; 5]> for Ubbs1Params {
    type Error = Error;
    fn try_from(v: [f64; 5]) -> Result<Self> {
        Ubbs1Params::new(v[0], v[1], v[2], v[3], v[4])
    }
}

impl From<Ubbs1Params> for [f64; 5] {
    fn from(p: Ubbs1Params) -> [f64; 5] {
        [p.alpha1, p.alpha2, p.beta1, p.beta2, p.rho]
    }
}

impl Ubbs1Params {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64, rho: f64) -> Result<Self> {
        for (name, v) in [("alpha1", alpha1), ("alpha2", alpha2), ("beta1", beta1), ("beta2", beta2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be a positive real, got {v}")));
            }
        }
        if !(rho.is_finite() && rho.abs() < 1.0) {
            return Err(Error::InvalidParams(format!("rho must lie in (-1, 1), got {rho}")));
        }
        Ok(Self { alpha1, alpha2, beta1, beta2, rho })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }
    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
    pub fn beta1(&self) -> f64 {
        self.beta1
    }
    pub fn beta2(&self) -> f64 {
        self.beta2
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Parameters as the (alpha1, alpha2, beta1, beta2, rho) array.
    pub fn to_array(&self) -> [f64; 5] {
        (*self).into()
    }
}

/// The ratio intermediates at one point: s = 1/z - 1 and the two quadratic
/// forms u, v that feed the Bessel argument. Both are positive for every
/// valid parameter vector.
#[derive(Debug, Clone, Copy)]
pub struct UvIntermediates {
    pub s: f64,
    pub u_rho: f64,
    pub v_rho: f64,
}

/// Shape classification produced by `classify_modality`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Modality {
    Unimodal,
    Bimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub z: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalityReport {
    pub kind: Modality,
    pub critical_points: Vec<CriticalPoint>,
}

/// Everything the density and likelihood need at one point, with the pieces
/// that can over/underflow kept in log form.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ZParts {
    pub s: f64,
    pub ln_s: f64,
    /// h such that A = sqrt(beta2 s / beta1) + sqrt(beta1/(beta2 s)) = 2 cosh(h).
    pub h_a: f64,
    pub u: f64,
    pub v: f64,
    /// Bessel argument sqrt(u v)/(1 - rho^2).
    pub t: f64,
    /// g such that B = 2 cosh(g); g = (ln v - ln u + ln s - ln(beta1 beta2))/2.
    pub g_b: f64,
    pub ln_a_big: f64,
    pub ln_b_big: f64,
    pub k0e: f64,
    pub k1e: f64,
}

/// ln(2 cosh(h)) without overflow.
fn ln_two_cosh(h: f64) -> f64 {
    let a = h.abs();
    a + (-2.0 * a).exp().ln_1p()
}

fn log_sum_exp2(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// One quadratic form p^2 + q^2 - 2 rho p q written as (p - rho q)^2 +
/// (1 - rho^2) q^2, factored by max(p, q) so the log never overflows.
/// Returns (value, ln value); the value itself may round to +inf in extreme
/// corners while the log stays finite.
fn completed_square(p: f64, q: f64, rho: f64) -> (f64, f64) {
    let m = p.max(q);
    let ph = p / m;
    let qh = q / m;
    let core = (ph - rho * qh).powi(2) + (1.0 - rho * rho) * qh * qh;
    (m * m * core, 2.0 * m.ln() + core.ln())
}

pub(crate) fn parts_from_s(s: f64, ln_s: f64, p: &Ubbs1Params) -> ZParts {
    let (a1, a2, b1, b2, rho) = (p.alpha1, p.alpha2, p.beta1, p.beta2, p.rho);
    let omr2 = 1.0 - rho * rho;

    let half_ln_s = 0.5 * ln_s;
    let h_a = half_ln_s + 0.5 * (b2.ln() - b1.ln());

    // u = s/(a1^2 b1) + 1/(a2^2 b2) - (2 rho /(a1 a2)) sqrt(s/(b1 b2))
    let p_u = half_ln_s.exp() / (a1 * b1.sqrt());
    let q_u = 1.0 / (a2 * b2.sqrt());
    let (u, ln_u) = completed_square(p_u, q_u, rho);

    // v = b1/(a1^2 s) + b2/a2^2 - (2 rho /(a1 a2)) sqrt(b1 b2 / s)
    let p_v = (-half_ln_s).exp() * b1.sqrt() / a1;
    let q_v = b2.sqrt() / a2;
    let (v, ln_v) = completed_square(p_v, q_v, rho);

    let t = (0.5 * (ln_u + ln_v)).exp() / omr2;
    let g_b = 0.5 * (ln_v - ln_u) + half_ln_s - 0.5 * (b1 * b2).ln();

    ZParts {
        s,
        ln_s,
        h_a,
        u,
        v,
        t,
        g_b,
        ln_a_big: ln_two_cosh(h_a),
        ln_b_big: ln_two_cosh(g_b),
        k0e: k0_scaled(t),
        k1e: k1_scaled(t),
    }
}

pub(crate) fn parts_at(z: f64, p: &Ubbs1Params) -> ZParts {
    let s = (1.0 - z) / z;
    let ln_s = (-z).ln_1p() - z.ln();
    parts_from_s(s, ln_s, p)
}

fn check_z(z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0 && z < 1.0) {
        return Err(Error::Domain(format!("z must lie in (0, 1), got {z}")));
    }
    Ok(())
}

impl Ubbs1Params {
    /// s, u, v at one point of the support.
    pub fn uv_intermediates(&self, z: f64) -> Result<UvIntermediates> {
        check_z(z)?;
        let parts = parts_at(z, self);
        Ok(UvIntermediates { s: parts.s, u_rho: parts.u, v_rho: parts.v })
    }

    /// Natural log of the density.
    pub fn log_pdf(&self, z: f64) -> Result<f64> {
        check_z(z)?;
        Ok(self.log_pdf_unchecked(z))
    }

    pub(crate) fn log_pdf_unchecked(&self, z: f64) -> f64 {
        let parts = parts_at(z, self);
        let omr2 = 1.0 - self.rho * self.rho;
        let prefactor_exponent = (1.0 / (self.alpha1 * self.alpha1) + 1.0 / (self.alpha2 * self.alpha2)) / omr2;
        let log_norm = -(4.0 * PI * self.alpha1 * self.alpha2).ln() - 0.5 * omr2.ln();
        // (s+1)^2 / s simplifies to 1/(z (1-z)).
        let log_jacobian = -z.ln() - (-z).ln_1p();
        let a_big = 2.0 * parts.h_a.cosh();
        let rho_term = -self.rho / (self.alpha1 * self.alpha2 * omr2) * a_big;
        let bracket = log_sum_exp2(parts.ln_a_big + parts.k0e.ln(), parts.ln_b_big + parts.k1e.ln());
        prefactor_exponent + log_norm + log_jacobian + rho_term - parts.t + bracket
    }

    /// Density; the limits at both endpoints are 0.
    pub fn pdf(&self, z: f64) -> Result<f64> {
        Ok(self.log_pdf(z)?.exp())
    }

    /// Density of the type-II ratio S = X/Y in the independent case, from
    /// its own closed form (1/s prefactor rather than (s+1)^2/s).
    pub fn type2_ratio_pdf(&self, s: f64) -> Result<f64> {
        if self.rho != 0.0 {
            return Err(Error::InvalidParams(format!(
                "type-II ratio density requires independence (rho = 0), got rho = {}",
                self.rho
            )));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!("ratio point must be positive, got {s}")));
        }
        let parts = parts_from_s(s, s.ln(), self);
        let prefactor_exponent = 1.0 / (self.alpha1 * self.alpha1) + 1.0 / (self.alpha2 * self.alpha2);
        let log_norm = -(4.0 * PI * self.alpha1 * self.alpha2).ln();
        let bracket = log_sum_exp2(parts.ln_a_big + parts.k0e.ln(), parts.ln_b_big + parts.k1e.ln());
        Ok((prefactor_exponent + log_norm - s.ln() - parts.t + bracket).exp())
    }

    /// CDF via the weighted-erf integral, Gauss-Hermite order `order`,
    /// re-validated at order 2n (escalating once to 4n when the first pair
    /// is marginal). Result clamped to [0, 1].
    pub fn cdf_with_order(&self, z: f64, order: usize) -> Result<f64> {
        check_z(z)?;
        let coarse_rule = cached_hermite(order)?;
        let fine_rule = cached_hermite(2 * order)?;
        let coarse = self.cdf_core(z, &coarse_rule);
        let fine = self.cdf_core(z, &fine_rule);
        if (coarse - fine).abs() > CDF_CHECK_TOL {
            let finest = self.cdf_core(z, &cached_hermite(4 * order)?);
            if (fine - finest).abs() > CDF_CHECK_TOL {
                return Err(Error::QuadratureCheck { coarse: fine, fine: finest });
            }
            return Ok(finest.clamp(0.0, 1.0));
        }
        Ok(fine.clamp(0.0, 1.0))
    }

    /// CDF at the default quadrature order.
    pub fn cdf(&self, z: f64) -> Result<f64> {
        self.cdf_with_order(z, DEFAULT_QUAD_ORDER)
    }

    /// Single-rule CDF kernel: 1/2 - (1/2) E_w[erf(c1 w + c2 g(w))] with w
    /// standard normal, evaluated by Gauss-Hermite after w = sqrt(2) x.
    pub(crate) fn cdf_core(&self, z: f64, rule: &Arc<QuadratureRule>) -> f64 {
        let ln_s = (-z).ln_1p() - z.ln();
        self.cdf_core_from_ln_s(ln_s, rule)
    }

    fn cdf_core_from_ln_s(&self, ln_s: f64, rule: &Arc<QuadratureRule>) -> f64 {
        let omr2 = 1.0 - self.rho * self.rho;
        let h_a = 0.5 * (ln_s + self.beta2.ln() - self.beta1.ln());
        // c1 = ((a2/a1) sqrt(s b2/b1) - rho)/sqrt(2 (1-rho^2))
        let c1 = (self.alpha2 / self.alpha1 * h_a.exp() - self.rho) / (2.0 * omr2).sqrt();
        // c2 = sqrt(2) (s b2 - b1)/(a1 sqrt(s b1 b2 (1-rho^2)))
        //    = 2 sqrt(2) sinh(h_a) / (a1 sqrt(1-rho^2))
        let c2 = 2.0 * 2f64.sqrt() * h_a.sinh() / (self.alpha1 * omr2.sqrt());
        let a2 = self.alpha2;
        let sum: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &wt)| {
                let w = 2f64.sqrt() * x;
                let aw = a2 * w;
                // 1/(a2 w + sqrt((a2 w)^2 + 4)); rationalized for w < 0 where
                // the direct denominator cancels.
                let g = if w >= 0.0 { 1.0 / (aw + aw.hypot(2.0)) } else { (aw.hypot(2.0) - aw) / 4.0 };
                wt * erf(c1 * w + c2 * g)
            })
            .sum();
        0.5 - 0.5 * sum / PI.sqrt()
    }

    /// Quantile by bracketing bisection on the monotone CDF: returns z with
    /// |cdf(z) - q| below 1e-10.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        self.quantile_with_order(q, DEFAULT_QUAD_ORDER)
    }

    pub fn quantile_with_order(&self, q: f64, order: usize) -> Result<f64> {
        if !(q.is_finite() && q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1), got {q}")));
        }
        let mut lo = 1e-12;
        let mut hi = 1.0 - 1e-12;
        while self.cdf_with_order(lo, order)? > q {
            lo *= 1e-4;
            if lo < 1e-290 {
                return Err(Error::NonConvergence(format!("quantile bracket collapsed at q = {q}")));
            }
        }
        while self.cdf_with_order(hi, order)? < q {
            hi = 1.0 - (1.0 - hi) * 1e-4;
            if 1.0 - hi < 1e-15 {
                return Err(Error::NonConvergence(format!("quantile bracket collapsed at q = {q}")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f = self.cdf_with_order(mid, order)?;
            if (f - q).abs() <= 1e-10 {
                return Ok(mid);
            }
            if f < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        if (self.cdf_with_order(mid, order)? - q).abs() <= 1e-8 {
            Ok(mid)
        } else {
            Err(Error::NonConvergence(format!("quantile bisection stalled at q = {q}")))
        }
    }

    /// Raw moment E[Z^n] = n * integral of z^{n-1} (1 - F(z)) over (0,1),
    /// adaptive outer quadrature with the Gauss-Hermite CDF inside.
    pub fn moment(&self, n: u32) -> Result<f64> {
        self.moment_with_order(n, DEFAULT_QUAD_ORDER)
    }

    pub fn moment_with_order(&self, n: u32, order: usize) -> Result<f64> {
        if n < 1 {
            return Err(Error::Domain("moment order must be at least 1".into()));
        }
        // Surface any quadrature misconfiguration once, then integrate with
        // the refined rule alone.
        self.cdf_with_order(0.5, order)?;
        let rule = cached_hermite(2 * order)?;
        let eps = 1e-12;
        let nf = n as f64;
        let (value, _err) = integrate_adaptive(
            |z| nf * z.powi(n as i32 - 1) * (1.0 - self.cdf_core(z, &rule)),
            eps,
            1.0 - eps,
            1e-9,
        )?;
        // The integrand is bounded by 1, so the trimmed endpoints contribute
        // less than 2 eps.
        Ok(value.clamp(0.0, 1.0))
    }

    /// Moment generating function by power series: 1 + sum mu_n t^n / n!.
    pub fn mgf(&self, t: f64, terms: u32) -> Result<f64> {
        if !(t.is_finite() && t.abs() <= 50.0) {
            return Err(Error::Domain(format!("mgf argument must satisfy |t| <= 50, got {t}")));
        }
        if terms < 1 {
            return Err(Error::Domain("mgf needs at least one series term".into()));
        }
        let mut acc = 1.0;
        let mut t_pow_over_fact = 1.0;
        for n in 1..=terms {
            t_pow_over_fact *= t / n as f64;
            acc += self.moment(n)? * t_pow_over_fact;
        }
        Ok(acc)
    }

    /// Stress-strength probability R = P(X < Y), evaluated two ways: the
    /// dedicated erf integral at s = 1 and 1 - F(1/2). The routes must agree
    /// to 1e-10; disagreement means the quadrature is misconfigured.
    pub fn stress_strength(&self) -> Result<f64> {
        self.stress_strength_with_order(DEFAULT_QUAD_ORDER)
    }

    pub fn stress_strength_with_order(&self, order: usize) -> Result<f64> {
        let rule = cached_hermite(2 * order)?;
        // s = 1 exactly; ln s = 0. The kernel computes 1/2 - (1/2) E[erf],
        // i.e. F(1/2); R is its complement.
        let direct = 1.0 - self.cdf_core_from_ln_s(0.0, &rule);
        let via_cdf = 1.0 - self.cdf_with_order(0.5, order)?;
        if (direct - via_cdf).abs() > 1e-10 {
            return Err(Error::Anomaly(format!(
                "stress-strength routes disagree: {direct} vs {via_cdf}"
            )));
        }
        Ok(direct.clamp(0.0, 1.0))
    }

    /// Locates the critical points of the density on a uniform interior grid
    /// (sign changes of the numerical log-density derivative, refined by
    /// bisection) and classifies the shape. One critical point means
    /// unimodal, three mean bimodal; any other count is reported as a
    /// numerical anomaly.
    pub fn classify_modality(&self, grid_size: usize) -> Result<ModalityReport> {
        if grid_size < 501 {
            return Err(Error::Domain(format!("modality grid must have at least 501 points, got {grid_size}")));
        }
        let deriv = |z: f64| {
            let h = 1e-6f64.min(0.5 * z).min(0.5 * (1.0 - z));
            (self.log_pdf_unchecked(z + h) - self.log_pdf_unchecked(z - h)) / (2.0 * h)
        };
        let g = grid_size;
        let zs: Vec<f64> = (1..=g).map(|i| i as f64 / (g + 1) as f64).collect();
        let ds: Vec<f64> = zs.iter().map(|&z| deriv(z)).collect();

        let mut critical = Vec::new();
        for i in 0..g - 1 {
            let (d0, d1) = (ds[i], ds[i + 1]);
            if d0 == 0.0 {
                // Exactly flat grid point; classify by the neighbor.
                critical.push(CriticalPoint {
                    z: zs[i],
                    kind: if d1 < 0.0 { ExtremumKind::Maximum } else { ExtremumKind::Minimum },
                });
                continue;
            }
            if d0.signum() != d1.signum() && d1 != 0.0 {
                let (mut lo, mut hi) = (zs[i], zs[i + 1]);
                let mut dlo = d0;
                while hi - lo > 1e-9 {
                    let mid = 0.5 * (lo + hi);
                    let dm = deriv(mid);
                    if dm == 0.0 {
                        lo = mid;
                        break;
                    }
                    if dm.signum() == dlo.signum() {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                critical.push(CriticalPoint {
                    z: 0.5 * (lo + hi),
                    kind: if d0 > 0.0 { ExtremumKind::Maximum } else { ExtremumKind::Minimum },
                });
            }
        }

        let kinds: Vec<ExtremumKind> = critical.iter().map(|c| c.kind).collect();
        match kinds.as_slice() {
            [ExtremumKind::Maximum] => Ok(ModalityReport { kind: Modality::Unimodal, critical_points: critical }),
            [ExtremumKind::Maximum, ExtremumKind::Minimum, ExtremumKind::Maximum] => {
                Ok(ModalityReport { kind: Modality::Bimodal, critical_points: critical })
            }
            _ => Err(Error::Anomaly(format!(
                "found {} critical points ({:?}); expected a single maximum or max/min/max",
                critical.len(),
                kinds
            ))),
        }
    }
}
