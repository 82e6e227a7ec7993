//! Ascent over dominance polytopes `Delta(x) = {y in Delta : y dominates x}`.
//!
//! A polytope is handled through its vertex list: points are convex
//! combinations `y = sum_v w_v V_v`, and ascent runs over the weight simplex
//! with Euclidean projection, so every iterate stays feasible.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fmath;

/// Vertices of `Delta(x)`, as decreasing coordinate vectors.
///
/// In partial-sum coordinates `P_i = y_1 + .. + y_i` the polytope is cut
/// out by `P_i >= X_i`, `2 P_i >= P_{i-1} + P_{i+1}` and `P_{theta-1} <= 1`
/// (with `P_0 = 0`, `P_theta = 1`). Every choice of `theta - 1` tight
/// constraints is solved and kept when feasible.
pub fn dominance_vertices(x: &[f64]) -> Vec<Vec<f64>> {
    let theta = x.len();
    if theta == 1 {
        return vec![vec![1.0]];
    }
    let d = theta - 1;
    let mut px = vec![0.0; d];
    let mut acc = 0.0;
    for i in 0..d {
        acc += x[i];
        px[i] = acc;
    }
    // rows a . P >= b
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..d {
        let mut a = vec![0.0; d];
        a[i] = 1.0;
        rows.push((a, px[i]));
    }
    for i in 0..d {
        let mut a = vec![0.0; d];
        a[i] = 2.0;
        let mut b = 0.0;
        if i > 0 {
            a[i - 1] = -1.0;
        }
        if i + 1 < d {
            a[i + 1] = -1.0;
        } else {
            b = 1.0;
        }
        rows.push((a, b));
    }
    let mut last = vec![0.0; d];
    last[d - 1] = -1.0;
    rows.push((last, -1.0));

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut chosen = Vec::with_capacity(d);
    choose(rows.len(), d, 0, &mut chosen, &mut |idx| {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| rows[i].1).collect();
        let Some(p) = solve(a, b) else { return };
        if rows.iter().all(|(a, b)| dot(a, &p) >= b - 1e-12) {
            let mut y = Vec::with_capacity(theta);
            let mut prev = 0.0;
            for &pi in p.iter().chain(core::iter::once(&1.0)) {
                y.push((pi - prev).max(0.0));
                prev = pi;
            }
            if !vertices.iter().any(|v| max_diff(v, &y) < 1e-10) {
                vertices.push(y);
            }
        }
    });
    vertices
}

fn choose(
    total: usize,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..total {
        if total - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        choose(total, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            fmath::abs(a[i][col])
                .partial_cmp(&fmath::abs(a[j][col]))
                .unwrap()
        })?;
        if fmath::abs(a[piv][col]) < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                let (top, rest) = a.split_at_mut(r);
                for (x, p) in rest[0][col..n].iter_mut().zip(&top[col][col..n]) {
                    *x -= f * p;
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| fmath::abs(x - y))
        .fold(0.0, f64::max)
}

/// Euclidean projection onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut tau = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|x| (x - tau).max(0.0)).collect()
}

fn combine(vertices: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; vertices[0].len()];
    for (v, wi) in vertices.iter().zip(w) {
        if *wi != 0.0 {
            for (yj, vj) in y.iter_mut().zip(v) {
                *yj += wi * vj;
            }
        }
    }
    y
}

/// A smooth objective on the simplex with its coordinate gradient.
pub(crate) trait Objective {
    fn value(&self, y: &[f64]) -> f64;
    fn gradient(&self, y: &[f64]) -> Vec<f64>;
}

/// Result of a multi-start ascent.
#[derive(Debug, Clone)]
pub(crate) struct Ascent {
    pub value: f64,
}

const MAX_ITERS: usize = 20_000;
const STEP_TOL: f64 = 1e-12;

/// Projected-gradient ascent from weights `w`, with Armijo backtracking.
fn ascend(vertices: &[Vec<f64>], f: &dyn Objective, mut w: Vec<f64>) -> Ascent {
    let mut y = combine(vertices, &w);
    let mut fy = f.value(&y);
    let mut eta = 1e-2;
    for _ in 0..MAX_ITERS {
        let gy = f.gradient(&y);
        let gw: Vec<f64> = vertices.iter().map(|v| dot(v, &gy)).collect();
        let mut accepted = None;
        while eta > 1e-18 {
            let trial: Vec<f64> = w.iter().zip(&gw).map(|(wi, gi)| wi + eta * gi).collect();
            let w_new = project_simplex(&trial);
            let y_new = combine(vertices, &w_new);
            let f_new = f.value(&y_new);
            let gain: f64 = gw
                .iter()
                .zip(w_new.iter().zip(&w))
                .map(|(g, (a, b))| g * (a - b))
                .sum();
            if f_new >= fy + 1e-4 * gain && f_new >= fy {
                accepted = Some((w_new, y_new, f_new));
                break;
            }
            eta *= 0.5;
        }
        let Some((w_new, y_new, f_new)) = accepted else {
            break;
        };
        let step = max_diff(&w_new, &w);
        w = w_new;
        y = y_new;
        fy = f_new;
        if step < STEP_TOL {
            break;
        }
        eta *= 2.0;
    }
    Ascent { value: fy }
}

/// Multi-start ascent over the polytope spanned by `vertices`.
///
/// Starts are the vertices themselves, the barycentre, the supplied extra
/// weight vectors, and seeded random weights up to `starts` in total.
pub(crate) fn maximize_on_polytope(
    vertices: &[Vec<f64>],
    f: &dyn Objective,
    extra: &[Vec<f64>],
    starts: usize,
) -> Ascent {
    let m = vertices.len();
    let mut inits: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        let mut w = vec![0.0; m];
        w[i] = 1.0;
        inits.push(w);
    }
    inits.push(vec![1.0 / m as f64; m]);
    inits.extend(extra.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    while inits.len() < starts {
        // exponential spacings give a uniform point of the weight simplex
        let e: Vec<f64> = (0..m)
            .map(|_| -fmath::ln(1.0 - rng.random::<f64>()))
            .collect();
        let s: f64 = e.iter().sum();
        inits.push(e.iter().map(|x| x / s).collect());
    }
    let mut best: Option<Ascent> = None;
    for w in inits {
        if m == 1 {
            return Ascent {
                value: f.value(&vertices[0]),
            };
        }
        let a = ascend(vertices, f, w);
        if best.as_ref().is_none_or(|b| a.value > b.value) {
            best = Some(a);
        }
    }
    best.expect("at least one start")
}
