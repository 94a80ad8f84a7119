//! Reference maximizer for the linear soft-margin SVM dual on tiny problems,
//! independent of the SMO solver: accelerated projected gradient over
//! `{0 <= a <= C, sum a_i y_i = 0}` with an exact projection (bisection on the
//! multiplier of the equality constraint).

#![allow(dead_code)]

pub struct Dataset {
    pub name: &'static str,
    pub points: &'static [(&'static [f64], f64)],
}

/// Small problems: separable, overlapping, duplicated and degenerate layouts,
/// at most 6 points in at most 3 dimensions.
pub const DATASETS: &[Dataset] = &[
    Dataset { name: "pair-1d", points: &[(&[-1.0], -1.0), (&[1.0], 1.0)] },
    Dataset { name: "line-4", points: &[(&[-2.0], -1.0), (&[-0.5], -1.0), (&[0.7], 1.0), (&[3.0], 1.0)] },
    Dataset {
        name: "square-sep",
        points: &[(&[1.0, 1.0], 1.0), (&[2.0, 1.5], 1.0), (&[-1.0, -1.0], -1.0), (&[-1.5, 0.0], -1.0)],
    },
    Dataset {
        name: "overlap-one",
        points: &[
            (&[1.0, 0.5], 1.0),
            (&[2.0, 2.0], 1.0),
            (&[-0.2, 0.1], 1.0),
            (&[-1.0, -1.0], -1.0),
            (&[0.3, 0.2], -1.0),
            (&[-2.0, 0.5], -1.0),
        ],
    },
    Dataset {
        name: "xor-ish",
        points: &[(&[1.0, 1.0], 1.0), (&[-1.0, -1.0], 1.0), (&[1.0, -1.0], -1.0), (&[-1.0, 1.0], -1.0)],
    },
    Dataset {
        name: "unbalanced-5",
        points: &[
            (&[0.0, 2.0], 1.0),
            (&[0.5, 1.5], -1.0),
            (&[1.0, 0.0], -1.0),
            (&[2.0, -0.5], -1.0),
            (&[1.5, 1.0], -1.0),
        ],
    },
    Dataset {
        name: "cube-3d",
        points: &[
            (&[1.0, 0.0, 0.0], 1.0),
            (&[0.0, 1.0, 0.0], 1.0),
            (&[0.0, 0.0, 1.0], -1.0),
            (&[1.0, 1.0, 1.0], -1.0),
            (&[0.2, 0.8, 0.1], 1.0),
            (&[0.9, 0.1, 0.7], -1.0),
        ],
    },
    Dataset {
        name: "duplicate-conflict",
        points: &[(&[1.0, 1.0], 1.0), (&[1.0, 1.0], -1.0), (&[2.0, 0.0], 1.0), (&[-1.0, 0.0], -1.0)],
    },
    Dataset {
        name: "tfidf-like",
        points: &[
            (&[0.693, 0.0, 0.0], 1.0),
            (&[0.693, 0.0, -0.29], 1.0),
            (&[0.0, 1.1, 0.0], -1.0),
            (&[0.0, 0.55, -0.29], -1.0),
            (&[0.0, 0.0, -0.29], -1.0),
        ],
    },
    Dataset {
        name: "zero-vector",
        points: &[(&[0.0, 0.0], 1.0), (&[1.0, 0.0], 1.0), (&[0.0, 0.0], -1.0), (&[0.0, 1.0], -1.0), (&[0.5, 0.5], -1.0)],
    },
    Dataset {
        name: "wide-margin-3d",
        points: &[
            (&[3.0, 1.0, -1.0], 1.0),
            (&[2.5, 2.0, 0.0], 1.0),
            (&[4.0, 0.0, 1.0], 1.0),
            (&[-3.0, 1.0, 0.5], -1.0),
            (&[-2.0, -1.0, -1.0], -1.0),
            (&[-3.5, 0.5, 0.0], -1.0),
        ],
    },
    Dataset {
        name: "collinear-mixed",
        points: &[(&[0.0, 0.0], -1.0), (&[1.0, 1.0], 1.0), (&[2.0, 2.0], -1.0), (&[3.0, 3.0], 1.0), (&[4.0, 4.0], 1.0)],
    },
];

pub const C_VALUES: [f64; 3] = [0.5, 1.0, 10.0];

fn gram(points: &[(&[f64], f64)]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|(a, _)| points.iter().map(|(b, _)| a.iter().zip(b.iter()).map(|(p, q)| p * q).sum()).collect())
        .collect()
}

/// `sum a - 1/2 a^T Q a` with `Q_ij = y_i y_j <x_i, x_j>`.
pub fn dual_objective(points: &[(&[f64], f64)], alphas: &[f64]) -> f64 {
    let k = gram(points);
    let n = points.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alphas[i] * alphas[j] * points[i].1 * points[j].1 * k[i][j];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection of `v` onto the feasible set.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> (Vec<f64>, f64) {
        let a: Vec<f64> = v.iter().zip(y).map(|(vi, yi)| (vi - lambda * yi).clamp(0.0, c)).collect();
        let s = a.iter().zip(y).map(|(ai, yi)| ai * yi).sum();
        (a, s)
    };
    // s(lambda) is non-increasing in lambda.
    let (mut lo, mut hi) = (-1.0, 1.0);
    while at(lo).1 < 0.0 {
        lo *= 2.0;
    }
    while at(hi).1 > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi)).0
}

/// Returns the maximizing alphas and the dual objective.
pub fn maximize_dual(points: &[(&[f64], f64)], c: f64) -> (Vec<f64>, f64) {
    let n = points.len();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let k = gram(points);
    let q: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| y[i] * y[j] * k[i][j]).collect()).collect();
    // Lipschitz bound on the gradient: the Frobenius norm of Q.
    let lip = q.iter().flatten().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    let step = 1.0 / lip;

    let grad = |a: &[f64]| -> Vec<f64> { (0..n).map(|i| 1.0 - (0..n).map(|j| q[i][j] * a[j]).sum::<f64>()).collect() };

    let mut a = vec![0.0; n];
    let mut z = a.clone();
    let mut t = 1.0f64;
    for _ in 0..200_000 {
        let g = grad(&z);
        let cand: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi + step * gi).collect();
        let next = project(&cand, &y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = next.iter().zip(&a).map(|(nx, ax)| nx + (t - 1.0) / t_next * (nx - ax)).collect();
        let moved: f64 = next.iter().zip(&a).map(|(p, q)| (p - q).abs()).sum();
        a = next;
        t = t_next;
        if moved < 1e-15 {
            break;
        }
    }
    let obj = dual_objective(points, &a);
    (a, obj)
}

/// Sign of `w·x + b` predictions reconstructed from oracle alphas, using the
/// midpoint of the feasible bias interval.
pub fn oracle_predictions(points: &[(&[f64], f64)], alphas: &[f64], c: f64) -> Vec<f64> {
    let dim = points[0].0.len();
    let mut w = vec![0.0; dim];
    for ((x, y), a) in points.iter().zip(alphas) {
        for (wk, xk) in w.iter_mut().zip(x.iter()) {
            *wk += a * y * xk;
        }
    }
    let wx: Vec<f64> = points.iter().map(|(x, _)| w.iter().zip(x.iter()).map(|(p, q)| p * q).sum()).collect();
    let eps = 1e-7 * c;
    let (mut up, mut low) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut free = Vec::new();
    for (i, ((_, y), a)) in points.iter().zip(alphas).enumerate() {
        let g = y - wx[i];
        let (at_lo, at_hi) = (*a <= eps, *a >= c - eps);
        if !at_lo && !at_hi {
            free.push(g);
        }
        let in_up = if *y > 0.0 { !at_hi } else { !at_lo };
        let in_low = if *y > 0.0 { !at_lo } else { !at_hi };
        if in_up {
            up = up.max(g);
        }
        if in_low {
            low = low.min(g);
        }
    }
    let b = if !free.is_empty() { free.iter().sum::<f64>() / free.len() as f64 } else { 0.5 * (up + low) };
    wx.iter().map(|v| if v + b >= 0.0 { 1.0 } else { -1.0 }).collect()
}
