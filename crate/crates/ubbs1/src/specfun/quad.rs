//! Quadrature: Gauss-Hermite rules (Golub-Welsch) and a globally adaptive
//! Gauss-Kronrod 7-15 integrator.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Which family a rule belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Nodes/weights for integrals of f(x) e^{-x^2} over the whole line
    /// (physicists' convention; weights sum to sqrt(pi)).
    GaussHermite,
    /// The embedded Gauss-Kronrod pair used by the adaptive integrator.
    GaussLegendreAdaptive,
}

/// A fixed quadrature rule: strictly increasing nodes with positive weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    /// Sum of w_i f(x_i).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss-Hermite rule of the given order for weight e^{-x^2}.
///
/// Exact for polynomials up to degree 2*order - 1. Built with the
/// Golub-Welsch algorithm: the Jacobi matrix for Hermite polynomials is
/// symmetric tridiagonal with zero diagonal and off-diagonal sqrt(k/2);
/// nodes are its eigenvalues and each weight is sqrt(pi) times the squared
/// first component of the matching eigenvector.
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if !(2..=512).contains(&order) {
        return Err(Error::Domain(format!("Gauss-Hermite order must be in [2, 512], got {order}")));
    }
    let n = order;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for (k, e) in off.iter_mut().enumerate().take(n - 1) {
        *e = ((k + 1) as f64 / 2.0).sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiag_ql(&mut diag, &mut off, &mut first)?;

    let mut order_idx: Vec<usize> = (0..n).collect();
    order_idx.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let mut nodes: Vec<f64> = order_idx.iter().map(|&i| diag[i]).collect();
    let mut weights: Vec<f64> = order_idx.iter().map(|&i| PI.sqrt() * first[i] * first[i]).collect();

    // The rule is symmetric; average the +/- pairs to remove the last
    // rounding asymmetry from the eigensolve.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    Ok(QuadratureRule { nodes, weights, kind: RuleKind::GaussHermite })
}

/// Shared cache of Gauss-Hermite rules keyed by order. The CDF evaluates two
/// rules per call, so rebuilding them each time would dominate the cost.
pub(crate) fn cached_hermite(order: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    if let Some(rule) = map.get(&order) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_hermite_rule(order)?);
    map.insert(order, rule.clone());
    Ok(rule)
}

/// Implicit-shift QL for a symmetric tridiagonal matrix, rotating a single
/// row vector alongside so that only the first eigenvector components are
/// accumulated (all Golub-Welsch needs). Classic tqli with `z` reduced to
/// one row.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonConvergence("tridiagonal QL exceeded 50 sweeps".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

// Gauss-Kronrod 7-15 pair (QUADPACK xgk/wg/wgk constants).
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// One Gauss-Kronrod 7-15 panel: returns (kronrod value, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG7[3];
    let mut res_k = fc * WGK15[7];
    for j in 0..7 {
        let x = half * XGK15[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        res_k += WGK15[j] * (f1 + f2);
        if j % 2 == 1 {
            res_g += WG7[j / 2] * (f1 + f2);
        }
    }
    let value = res_k * half;
    let err = ((res_k - res_g) * half).abs();
    // The raw |K - G| difference is usually pessimistic by orders of
    // magnitude for smooth integrands; QUADPACK's (200 |K-G|)^1.5 rescale is
    // skipped in favor of the plain bound, which only costs extra splits.
    (value, err)
}

/// Globally adaptive integration of f over [a, b] to absolute tolerance
/// `tol`: repeatedly bisects the panel with the largest error estimate.
///
/// Returns (value, err_est). Fails with the best available estimate once
/// 10^4 panels have been produced.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("bad integration interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    const MAX_PANELS: usize = 10_000;

    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }

    let (v0, e0) = qk15(&f, a, b);
    let mut panels = vec![Panel { a, b, value: v0, err: e0 }];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol {
            let value = panels.iter().map(|p| p.value).sum();
            return Ok((value, total_err));
        }
        if panels.len() >= MAX_PANELS {
            let value = panels.iter().map(|p| p.value).sum();
            return Err(Error::QuadratureBudget { value, err_est: total_err });
        }
        // Deterministic: first panel attaining the max error splits.
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Interval no longer splittable in f64; accept what we have.
            let value = panels.iter().map(|p| p.value).sum();
            return Ok((value, total_err));
        }
        let (v1, e1) = qk15(&f, pa, mid);
        let (v2, e2) = qk15(&f, mid, pb);
        panels[worst] = Panel { a: pa, b: mid, value: v1, err: e1 };
        panels.push(Panel { a: mid, b: pb, value: v2, err: e2 });
    }
}
