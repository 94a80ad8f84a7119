//! Sequential minimal optimization for the linear soft-margin SVM dual
//!
//! ```text
//! max  W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j <x_i, x_j>
//! s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0
//! ```
//!
//! For each point define `g_i = y_i - <w, x_i>`. A point can move its
//! `y_i a_i` up when it is in the "up" set (`y_i = +1, a_i < C` or
//! `y_i = -1, a_i > 0`) and down when it is in the "low" set (the mirror
//! condition). The KKT conditions hold within `tol` exactly when
//! `max_up g - min_low g <= tol`, and any bias between those two values then
//! satisfies them. The solver sweeps points in index order; a point that
//! violates the condition is paired with the most violating partner on the
//! other side and the pair is optimized analytically.

use super::SvmParams;

/// Snap distance (relative to C) for treating an alpha as at a bound.
const BOUND_SNAP: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct SmoSolution {
    pub alphas: Vec<f64>,
    pub w: Vec<f64>,
    pub b: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_gap: f64,
}

struct Problem<'a> {
    x: &'a [&'a [f64]],
    y: &'a [f64],
    c: f64,
    gram: Vec<f64>,
    n: usize,
}

impl Problem<'_> {
    fn k(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.n + j]
    }

    fn in_up(&self, a: f64, y: f64) -> bool {
        if y > 0.0 {
            a < self.c
        } else {
            a > 0.0
        }
    }

    fn in_low(&self, a: f64, y: f64) -> bool {
        if y > 0.0 {
            a > 0.0
        } else {
            a < self.c
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// `w = sum_i a_i y_i x_i`.
pub(crate) fn weight_vector(x: &[&[f64]], y: &[f64], alphas: &[f64], width: usize) -> Vec<f64> {
    let mut w = vec![0.0; width];
    for ((xi, &yi), &ai) in x.iter().zip(y).zip(alphas) {
        if ai != 0.0 {
            let s = ai * yi;
            for (wk, &xk) in w.iter_mut().zip(xi.iter()) {
                *wk += s * xk;
            }
        }
    }
    w
}

/// Most violating pair: `(max_up g, argmax, min_low g, argmin)`.
fn extremes(p: &Problem<'_>, alphas: &[f64], g: &[f64]) -> (f64, Option<usize>, f64, Option<usize>) {
    let (mut up, mut up_i) = (f64::NEG_INFINITY, None);
    let (mut low, mut low_i) = (f64::INFINITY, None);
    for i in 0..p.n {
        let (a, y) = (alphas[i], p.y[i]);
        if p.in_up(a, y) && g[i] > up {
            up = g[i];
            up_i = Some(i);
        }
        if p.in_low(a, y) && g[i] < low {
            low = g[i];
            low_i = Some(i);
        }
    }
    (up, up_i, low, low_i)
}

fn gap(up: f64, low: f64) -> f64 {
    if up.is_finite() && low.is_finite() {
        (up - low).max(0.0)
    } else {
        0.0
    }
}

/// Jointly optimizes `a_u` and `a_l` with the other alphas fixed. Returns
/// false when the pair cannot move.
fn take_step(p: &Problem<'_>, alphas: &mut [f64], wx: &mut [f64], u: usize, l: usize) -> bool {
    if u == l {
        return false;
    }
    let (y1, y2) = (p.y[u], p.y[l]);
    let (a1, a2) = (alphas[u], alphas[l]);
    let c = p.c;
    let (lo, hi) = if y1 != y2 {
        ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
    } else {
        ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
    };
    if hi - lo <= BOUND_SNAP * c {
        return false;
    }
    // e_i = <w, x_i> - y_i; the bias cancels in e1 - e2.
    let e1 = wx[u] - y1;
    let e2 = wx[l] - y2;
    let eta = p.k(u, u) + p.k(l, l) - 2.0 * p.k(u, l);
    let mut a2_new = if eta > 1e-12 {
        (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
    } else {
        // Flat curvature: the objective is linear in a2 along the constraint line.
        let slope = y2 * (e1 - e2);
        if slope > 0.0 {
            hi
        } else if slope < 0.0 {
            lo
        } else {
            return false;
        }
    };
    if a2_new < BOUND_SNAP * c {
        a2_new = 0.0;
    } else if a2_new > c * (1.0 - BOUND_SNAP) {
        a2_new = c;
    }
    if a2_new == a2 {
        return false;
    }
    let s = y1 * y2;
    let mut a1_new = a1 + s * (a2 - a2_new);
    if a1_new < BOUND_SNAP * c {
        a1_new = 0.0;
    } else if a1_new > c * (1.0 - BOUND_SNAP) {
        a1_new = c;
    }
    let d1 = (a1_new - a1) * y1;
    let d2 = (a2_new - a2) * y2;
    for (k, v) in wx.iter_mut().enumerate() {
        *v += d1 * p.k(u, k) + d2 * p.k(l, k);
    }
    alphas[u] = a1_new;
    alphas[l] = a2_new;
    debug_assert!(alphas.iter().all(|&a| (0.0..=c).contains(&a)));
    debug_assert!(
        alphas.iter().zip(p.y).map(|(a, y)| a * y).sum::<f64>().abs() <= 1e-10 * c.max(1.0),
        "equality constraint drifted"
    );
    true
}

/// Solves the dual for points `x` with labels `y` in {-1, +1}.
pub(crate) fn solve(x: &[&[f64]], y: &[f64], width: usize, params: &SvmParams) -> SmoSolution {
    let n = x.len();
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = dot(x[i], x[j]);
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }
    }
    let p = Problem { x, y, c: params.c, gram, n };
    let max_iters = params.max_iters_for(n);

    let mut alphas = vec![0.0; n];
    let mut iterations = 0usize;
    let mut idle_sweeps = 0usize;
    let mut wx = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut converged = false;

    loop {
        // Resynchronize the cached margins from scratch once per sweep.
        let w = weight_vector(p.x, p.y, &alphas, width);
        for (i, (wxi, gi)) in wx.iter_mut().zip(g.iter_mut()).enumerate() {
            *wxi = dot(&w, p.x[i]);
            *gi = p.y[i] - *wxi;
        }
        let (up, _, low, _) = extremes(&p, &alphas, &g);
        if gap(up, low) <= params.tol {
            converged = true;
            break;
        }
        if iterations >= max_iters || idle_sweeps >= params.max_passes {
            break;
        }

        let mut changed = 0usize;
        for i in 0..n {
            if iterations >= max_iters {
                break;
            }
            let (up, up_i, low, low_i) = extremes(&p, &alphas, &g);
            if gap(up, low) <= params.tol {
                break;
            }
            let (a, yi) = (alphas[i], p.y[i]);
            // A free point can violate on both sides; take the larger violation.
            let as_up = if p.in_up(a, yi) { g[i] - low } else { f64::NEG_INFINITY };
            let as_low = if p.in_low(a, yi) { up - g[i] } else { f64::NEG_INFINITY };
            let pair = if as_up > params.tol && as_up >= as_low {
                low_i.map(|l| (i, l))
            } else if as_low > params.tol {
                up_i.map(|u| (u, i))
            } else {
                None
            };
            let Some((u, l)) = pair else { continue };
            if take_step(&p, &mut alphas, &mut wx, u, l) {
                changed += 1;
                iterations += 1;
                for k in 0..n {
                    g[k] = p.y[k] - wx[k];
                }
            }
        }
        if changed == 0 {
            idle_sweeps += 1;
        } else {
            idle_sweeps = 0;
        }
    }

    let w = weight_vector(p.x, p.y, &alphas, width);
    for (i, gi) in g.iter_mut().enumerate() {
        *gi = p.y[i] - dot(&w, p.x[i]);
    }
    let (up, _, low, _) = extremes(&p, &alphas, &g);
    let free: Vec<f64> =
        (0..n).filter(|&i| alphas[i] > 0.0 && alphas[i] < p.c).map(|i| g[i]).collect();
    let b = if !free.is_empty() {
        // Free points all lie in [low, up]; their mean does too.
        (free.iter().sum::<f64>() / free.len() as f64).clamp(low.min(up), up.max(low))
    } else if up.is_finite() && low.is_finite() {
        (up + low) / 2.0
    } else if up.is_finite() {
        up
    } else {
        low
    };
    let kkt_gap = gap(up, low);
    SmoSolution { alphas, w, b, iterations, converged: converged && kkt_gap <= params.tol, kkt_gap }
}
