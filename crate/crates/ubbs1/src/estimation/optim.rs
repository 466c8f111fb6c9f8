//! Minimizers for the 5-parameter fitting problems: Nelder-Mead for global
//! progress from each start, BFGS with backtracking line search for the
//! polish. Both work on fixed-size 5-vectors; objectives may return
//! +infinity for inadmissible regions.

pub const DIM: usize = 5;

#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub x: [f64; DIM],
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Infinity norm of the gradient at the final point (BFGS only).
    pub grad_norm: Option<f64>,
}

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink
/// 1/2) with an absolute+relative spread stopping rule.
pub fn nelder_mead<F: FnMut(&[f64; DIM]) -> f64>(
    mut f: F,
    x0: [f64; DIM],
    step: f64,
    max_iter: usize,
    ftol: f64,
) -> MinimizeOutcome {
    let n = DIM;
    let mut simplex: Vec<[f64; DIM]> = Vec::with_capacity(n + 1);
    simplex.push(x0);
    for i in 0..n {
        let mut v = x0;
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let mut iters = 0;
    let mut converged = false;

    while iters < max_iter {
        iters += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if (values[worst] - values[best]).abs() <= ftol * (values[best].abs() + 1.0) {
            converged = true;
            break;
        }

        let mut centroid = [0.0; DIM];
        for &i in order.iter().take(n) {
            for k in 0..n {
                centroid[k] += simplex[i][k] / n as f64;
            }
        }

        let blend = |a: &[f64; DIM], b: &[f64; DIM], t: f64| {
            let mut out = [0.0; DIM];
            for k in 0..n {
                out[k] = a[k] + t * (b[k] - a[k]);
            }
            out
        };

        let reflected = blend(&centroid, &simplex[worst], -1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = blend(&centroid, &simplex[worst], -2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                blend(&centroid, &simplex[worst], -0.5)
            } else {
                blend(&centroid, &simplex[worst], 0.5)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best];
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    simplex[i] = blend(&anchor, &simplex[i], 0.5);
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    MinimizeOutcome { x: simplex[best], fx: values[best], iterations: iters, converged, grad_norm: None }
}

/// BFGS with Armijo backtracking. `grad` returns the gradient of `f`.
pub fn bfgs<F, G>(
    mut f: F,
    mut grad: G,
    x0: [f64; DIM],
    max_iter: usize,
    grad_tol: f64,
    ftol: f64,
) -> MinimizeOutcome
where
    F: FnMut(&[f64; DIM]) -> f64,
    G: FnMut(&[f64; DIM]) -> [f64; DIM],
{
    let n = DIM;
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = grad(&x);
    if !g.iter().all(|v| v.is_finite()) || !fx.is_finite() {
        return MinimizeOutcome { x, fx, iterations: 0, converged: false, grad_norm: Some(f64::INFINITY) };
    }
    let mut h = [[0.0; DIM]; DIM];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut iters = 0;
    let mut small_drops = 0;
    let gbar = |fx: f64| grad_tol * fx.abs().max(1.0);
    let mut converged = inf_norm(&g) < gbar(fx);

    while iters < max_iter && !converged {
        iters += 1;
        // Search direction d = -H g.
        let mut d = [0.0; DIM];
        for i in 0..n {
            for k in 0..n {
                d[i] -= h[i][k] * g[k];
            }
        }
        let mut slope: f64 = d.iter().zip(&g).map(|(di, gi)| di * gi).sum();
        if !slope.is_finite() || slope >= 0.0 {
            // Reset to steepest descent if the metric degenerated.
            for i in 0..n {
                d[i] = -g[i];
                for (k, row) in h.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = if j == k { 1.0 } else { 0.0 };
                    }
                }
            }
            slope = -g.iter().map(|gi| gi * gi).sum::<f64>();
            if slope == 0.0 {
                converged = true;
                break;
            }
        }

        let mut t = 1.0;
        let mut x_new = x;
        let mut f_new = f64::INFINITY;
        let mut accepted = false;
        for _ in 0..40 {
            for i in 0..n {
                x_new[i] = x[i] + t * d[i];
            }
            f_new = f(&x_new);
            if f_new.is_finite() && f_new <= fx + 1e-4 * t * slope {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            converged = inf_norm(&g) < gbar(fx);
            break;
        }

        let g_new = grad(&x_new);
        if !g_new.iter().all(|v| v.is_finite()) {
            x = x_new;
            fx = f_new;
            break;
        }
        let mut s = [0.0; DIM];
        let mut y = [0.0; DIM];
        for i in 0..n {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 * vec_norm(&s) * vec_norm(&y) {
            // BFGS inverse update: H <- (I - s y^T/sy) H (I - y s^T/sy) + s s^T/sy.
            let mut hy = [0.0; DIM];
            for i in 0..n {
                for k in 0..n {
                    hy[i] += h[i][k] * y[k];
                }
            }
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for k in 0..n {
                    h[i][k] += (sy + yhy) * s[i] * s[k] / (sy * sy) - (hy[i] * s[k] + s[i] * hy[k]) / sy;
                }
            }
        }

        let f_drop = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        let gnorm = inf_norm(&g);
        if gnorm < gbar(fx) {
            converged = true;
        } else if f_drop.abs() <= ftol * (fx.abs() + 1.0) {
            // Two consecutive negligible improvements count as converged;
            // a single one can just be a cautious line-search step.
            small_drops += 1;
            if small_drops >= 2 {
                converged = true;
            }
        } else {
            small_drops = 0;
        }
    }

    MinimizeOutcome { x, fx, iterations: iters, converged, grad_norm: Some(inf_norm(&g)) }
}

fn inf_norm(v: &[f64; DIM]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn vec_norm(v: &[f64; DIM]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Central finite-difference gradient used where no analytic gradient exists.
pub fn fd_gradient<F: FnMut(&[f64; DIM]) -> f64>(mut f: F, x: &[f64; DIM]) -> [f64; DIM] {
    let mut g = [0.0; DIM];
    for k in 0..DIM {
        let h = 1e-6 * x[k].abs().max(1.0);
        let mut up = *x;
        up[k] += h;
        let mut dn = *x;
        dn[k] -= h;
        g[k] = (f(&up) - f(&dn)) / (2.0 * h);
    }
    g
}
