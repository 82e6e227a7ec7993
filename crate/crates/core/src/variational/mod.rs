//! The `n -> infinity` limit: the functional
//! `phi_beta(x) = (beta/2)(sum x_j^2 - 1) - sum x_j ln x_j` on the ordered
//! simplex, its constrained maxima, the free energy `z(beta, h)`, and the
//! critical point.
//!
//! Stationary points of `phi_beta` take at most two distinct values, so the
//! global maximum is found among the uniform point and the two-level points
//! `(t, .., t, s, .., s)` with `r` copies of `t` and `s = (1 - r t)/(theta - r)`.

mod polytope;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use polytope::dominance_vertices;
use polytope::{maximize_on_polytope, Objective};

use crate::error::{domain, Result};
use crate::fmath;

/// Tolerance used for simplex membership and dominance tests.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Maximizers within this distance of the best value are treated as ties.
pub const TIE_TOL: f64 = 1e-10;
/// Uniform grid size for root bracketing of the two-level derivative.
pub const ROOT_GRID: usize = 10_000;
/// Number of starts for the constrained ascent.
pub const ASCENT_STARTS: usize = 50;

/// A point of the ordered simplex: decreasing, nonnegative, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(domain("a simplex point needs at least one coordinate"));
        }
        if coords.iter().any(|&c| c < -SIMPLEX_TOL || !c.is_finite()) {
            return Err(domain("simplex coordinates must be nonnegative"));
        }
        if coords.windows(2).any(|w| w[0] + SIMPLEX_TOL < w[1]) {
            return Err(domain("simplex coordinates must be decreasing"));
        }
        let sum: f64 = coords.iter().sum();
        if fmath::abs(sum - 1.0) > SIMPLEX_TOL {
            return Err(domain("simplex coordinates must sum to 1"));
        }
        Ok(SimplexPoint { coords })
    }

    /// Sorts into decreasing order first.
    pub fn from_unsorted(mut coords: Vec<f64>) -> Result<Self> {
        coords.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
        Self::new(coords)
    }

    pub fn uniform(theta: usize) -> Self {
        SimplexPoint {
            coords: vec![1.0 / theta as f64; theta],
        }
    }

    /// `(1, 0, .., 0)`.
    pub fn extreme(theta: usize) -> Self {
        let mut coords = vec![0.0; theta];
        coords[0] = 1.0;
        SimplexPoint { coords }
    }

    /// The two-level point with `r` leading coordinates equal to `t`.
    pub fn two_level(theta: usize, r: usize, t: f64) -> Self {
        let s = (1.0 - r as f64 * t) / (theta - r) as f64;
        let coords = (0..theta).map(|i| if i < r { t } else { s }).collect();
        SimplexPoint { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn theta(&self) -> usize {
        self.coords.len()
    }

    pub fn first(&self) -> f64 {
        self.coords[0]
    }

    pub fn last(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// `self` dominates `other` up to [`SIMPLEX_TOL`] per partial sum.
    pub fn dominates(&self, other: &SimplexPoint) -> bool {
        let (mut a, mut b) = (0.0, 0.0);
        for (x, y) in self.coords.iter().zip(&other.coords) {
            a += x;
            b += y;
            if a + SIMPLEX_TOL < b {
                return false;
            }
        }
        true
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &SimplexPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| fmath::abs(a - b))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `phi_beta` at an arbitrary (not necessarily sorted) probability vector.
pub fn phi_coords(x: &[f64], beta: f64) -> f64 {
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let ent: f64 = x.iter().map(|&v| fmath::xlogx(v)).sum();
    beta / 2.0 * (sq - 1.0) - ent
}

pub fn phi(x: &SimplexPoint, beta: f64) -> f64 {
    phi_coords(x.coords(), beta)
}

/// A stationary point of `phi_beta` in the two-level family.
/// The uniform point is encoded with `r = theta`, `t = 1/theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub r: usize,
    pub t: f64,
    pub point: SimplexPoint,
    pub value: f64,
    /// `|d/dt phi^(r)(t)| / r` at the polished root.
    pub residual: f64,
}

/// `atanh(v) - v` given `v` and `1 - v`, accurate for small `v` and for
/// `v` close to one.
fn atanh_excess(v: f64, one_minus_v: f64) -> f64 {
    if fmath::abs(v) >= 0.1 {
        return 0.5 * (fmath::ln_1p(v) - fmath::ln(one_minus_v)) - v;
    }
    let v2 = v * v;
    let mut term = v * v2;
    let mut sum = 0.0;
    let mut k = 3.0;
    while fmath::abs(term) > 1e-18 * fmath::abs(sum) {
        sum += term / k;
        term *= v2;
        k += 2.0;
    }
    sum
}

/// The two-level point as a function of its small coordinate
/// `s in (0, 1/theta)`: `t = (1 - (theta - r) s)/r`.
fn large_coordinate(theta: usize, r: usize, s: f64) -> f64 {
    (1.0 - (theta - r) as f64 * s) / r as f64
}

/// `beta (t - s) - ln(t/s)`, proportional to the derivative of the
/// two-level restriction, as a function of `s`.
///
/// Evaluated as `d (beta - 2/(t+s)) - 2 (atanh(v) - v)` with `d = t - s`,
/// `v = d/(t+s)`, and `d`, `t + s`, `1 - v` in closed form. This keeps the
/// sign right where the terms nearly cancel (near the uniform point at
/// `beta = theta`) and resolves `s` down to the smallest floats.
fn two_level_slope(theta: usize, r: usize, beta: f64, s: f64) -> f64 {
    let (tf, rf) = (theta as f64, r as f64);
    let d = (1.0 - tf * s) / rf;
    let sum = (1.0 - (tf - 2.0 * rf) * s) / rf;
    let one_minus_v = 2.0 * rf * s / (1.0 - (tf - 2.0 * rf) * s);
    d * (beta - 2.0 / sum) - 2.0 * atanh_excess(d / sum, one_minus_v)
}

/// Bracketing grid on `(0, hi)`: uniform points, plus geometric points
/// towards both ends.
fn bracket_grid(hi: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (1..=ROOT_GRID)
        .map(|i| hi * i as f64 / (ROOT_GRID + 1) as f64)
        .collect();
    let mut scale = 0.5;
    for k in 0..1000 {
        pts.push(hi * scale);
        if k < 52 {
            pts.push(hi - hi * scale);
        }
        scale *= 0.5;
    }
    pts.retain(|&p| p > 0.0 && p < hi);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    if fmath::abs(f(a)) <= fmath::abs(f(b)) {
        a
    } else {
        b
    }
}

/// Roots closer than this to the uniform point are the uniform point.
const UNIFORM_GAP: f64 = 1e-12;

/// The uniform point and all interior stationary points of the two-level
/// restrictions on `t in (1/theta, 1/r)`, `r = 1, .., theta - 1`.
pub fn stationary_candidates(beta: f64, theta: usize) -> Vec<Candidate> {
    let uniform = SimplexPoint::uniform(theta);
    let mut out = vec![Candidate {
        r: theta,
        t: 1.0 / theta as f64,
        value: phi(&uniform, beta),
        point: uniform,
        residual: 0.0,
    }];
    for r in 1..theta {
        let slope = |s: f64| two_level_slope(theta, r, beta, s);
        let grid = bracket_grid(1.0 / theta as f64);
        let vals: Vec<f64> = grid.iter().map(|&s| slope(s)).collect();
        for i in 0..grid.len() - 1 {
            let (a, b) = (vals[i], vals[i + 1]);
            let s = if a == 0.0 {
                grid[i]
            } else if (a > 0.0) != (b > 0.0) && b != 0.0 {
                bisect(slope, grid[i], grid[i + 1])
            } else {
                continue;
            };
            let t = large_coordinate(theta, r, s);
            if t - s <= UNIFORM_GAP {
                continue;
            }
            let coords = (0..theta).map(|i| if i < r { t } else { s }).collect();
            let point = SimplexPoint { coords };
            out.push(Candidate {
                r,
                t,
                value: phi(&point, beta),
                point,
                residual: fmath::abs(slope(s)),
            });
        }
    }
    out
}

/// Global maximum of `phi_beta` with the extremal maximizers.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximizerReport {
    pub value: f64,
    pub x_up: SimplexPoint,
    pub x_down: SimplexPoint,
    pub candidates: Vec<Candidate>,
    /// Indices into `candidates` within [`TIE_TOL`] of `value`.
    pub maximizers: Vec<usize>,
}

pub fn maximize_phi(beta: f64, theta: usize) -> MaximizerReport {
    let candidates = stationary_candidates(beta, theta);
    let value = candidates
        .iter()
        .map(|c| c.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let maximizers: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].value >= value - TIE_TOL)
        .collect();
    let up = maximizers
        .iter()
        .copied()
        .max_by(|&a, &b| {
            candidates[a]
                .point
                .first()
                .partial_cmp(&candidates[b].point.first())
                .unwrap()
        })
        .unwrap();
    let down = maximizers
        .iter()
        .copied()
        .min_by(|&a, &b| {
            candidates[a]
                .point
                .last()
                .partial_cmp(&candidates[b].point.last())
                .unwrap()
        })
        .unwrap();
    MaximizerReport {
        value,
        x_up: candidates[up].point.clone(),
        x_down: candidates[down].point.clone(),
        candidates,
        maximizers,
    }
}

/// `phi_beta` plus a linear field term on one coordinate.
struct Tilted {
    beta: f64,
    h: f64,
    coord: usize,
}

impl Objective for Tilted {
    fn value(&self, y: &[f64]) -> f64 {
        phi_coords(y, self.beta) + self.h * y[self.coord]
    }

    fn gradient(&self, y: &[f64]) -> Vec<f64> {
        let mut g: Vec<f64> = y
            .iter()
            .map(|&v| self.beta * v - fmath::ln(v.max(1e-300)) - 1.0)
            .collect();
        g[self.coord] += self.h;
        g
    }
}

/// `g_beta(x) = max { phi_beta(y) : y in Delta, y dominates x }`.
pub fn g(x: &SimplexPoint, beta: f64) -> f64 {
    let report = maximize_phi(beta, x.theta());
    if report
        .maximizers
        .iter()
        .any(|&i| report.candidates[i].point.dominates(x))
    {
        return report.value;
    }
    let vertices = dominance_vertices(x.coords());
    let obj = Tilted {
        beta,
        h: 0.0,
        coord: 0,
    };
    maximize_on_polytope(&vertices, &obj, &[], ASCENT_STARTS)
        .value
        .max(phi(x, beta))
}

/// Weights of `y` over the vertices `(1/k, .., 1/k, 0, ..)` of `Delta`,
/// listed in the order produced by [`dominance_vertices`] of the uniform point.
fn simplex_weights(y: &[f64], vertices: &[Vec<f64>]) -> Vec<f64> {
    let theta = y.len();
    vertices
        .iter()
        .map(|v| {
            let k = v.iter().filter(|&&c| c > 0.0).count();
            let next = if k < theta { y[k] } else { 0.0 };
            (k as f64 * (y[k - 1] - next)).max(0.0)
        })
        .collect()
}

/// Free energy `z(beta, h)`.
///
/// Since `Delta(x)` only contains points whose first coordinate is at least
/// `x_1` (and whose last is at most `x_theta`), the outer maximum over `x`
/// is attained with `x` equal to the inner maximizer, and
/// `z = max_y [h (y_1 - 1/theta) + phi_beta(y)]` for `h >= 0`, with `y_theta`
/// in place of `y_1` for `h <= 0`.
pub fn z(beta: f64, h: f64, theta: usize) -> f64 {
    let report = maximize_phi(beta, theta);
    if h == 0.0 {
        return report.value;
    }
    let coord = if h > 0.0 { 0 } else { theta - 1 };
    let obj = Tilted { beta, h, coord };
    let vertices = dominance_vertices(&vec![1.0 / theta as f64; theta]);
    let extra: Vec<Vec<f64>> = report
        .candidates
        .iter()
        .map(|c| simplex_weights(c.point.coords(), &vertices))
        .collect();
    let best = maximize_on_polytope(&vertices, &obj, &extra, ASCENT_STARTS);
    let floor = report
        .candidates
        .iter()
        .map(|c| obj.value(c.point.coords()))
        .fold(f64::NEG_INFINITY, f64::max);
    best.value.max(floor) - h / theta as f64
}

/// One-sided derivatives `(z^+, z^-)` of `z(beta, .)` at `h = 0`.
pub fn z_derivatives(beta: f64, theta: usize) -> (f64, f64) {
    let r = maximize_phi(beta, theta);
    let c = 1.0 / theta as f64;
    (r.x_up.first() - c, r.x_down.last() - c)
}

/// Closed-form critical inverse temperature.
pub fn beta_critical(theta: usize) -> Result<f64> {
    match theta {
        0 | 1 => Err(domain("theta must be at least 2")),
        2 => Ok(2.0),
        _ => {
            let t = theta as f64;
            Ok(2.0 * (t - 1.0) / (t - 2.0) * fmath::ln(t - 1.0))
        }
    }
}

/// Threshold on `z^+` separating the ordered phase in the scan.
pub const SCAN_THRESHOLD: f64 = 1e-8;

/// Critical point located by bisection on `z^+(beta) > 1e-8`.
pub fn scan_beta_critical(theta: usize) -> Result<f64> {
    if theta < 2 {
        return Err(domain("theta must be at least 2"));
    }
    let ordered = |b: f64| z_derivatives(b, theta).0 > SCAN_THRESHOLD;
    let mut lo = 0.0;
    let mut hi = theta as f64 + 1.0;
    while !ordered(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ordered(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `R(t)`: the inverse temperature above which the two-level point at `t`
/// beats the uniform point. Continuous at `t = 1/theta` with value `theta`.
pub fn big_r(t: f64, r: usize, theta: usize) -> f64 {
    let (tf, rf) = (theta as f64, r as f64);
    let u = t - 1.0 / tf;
    let a = tf;
    let b = tf * rf / (tf - rf);
    if a.max(b) * fmath::abs(u) < 0.25 {
        // R = (2(theta - r)/theta) sum_k c_k u^{k-1} / (k(k+1)),
        // c_k = (-1)^{k+1} a^k + b^k
        let mut sum = 0.0;
        let (mut ak, mut bk, mut uk) = (a, b, 1.0);
        for k in 1..=60 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = (sign * ak + bk) * uk / (k * (k + 1)) as f64;
            sum += term;
            if (ak + bk) * fmath::abs(uk) < 1e-18 * fmath::abs(sum) {
                break;
            }
            ak *= a;
            bk *= b;
            uk *= u;
        }
        return 2.0 * (tf - rf) / tf * sum;
    }
    let rt = rf * t;
    let num = fmath::xlogx(t) * rf + (1.0 - rt) * fmath::ln((1.0 - rt) / (tf - rf)) + fmath::ln(tf);
    let den = (tf * t - 1.0) * (tf * t - 1.0);
    2.0 * tf * (tf - rf) / rf * num / den
}

/// `rho(t) = 2 theta t (1 - t) ln((1 - t)/t) / (1 - 2t)`, continuous at `t = 1/2`.
pub fn rho(t: f64, theta: usize) -> f64 {
    let w = 1.0 - 2.0 * t;
    let ratio = if fmath::abs(w) < 1e-4 {
        let w2 = w * w;
        1.0 + w2 / 3.0 + w2 * w2 / 5.0
    } else {
        fmath::atanh(w) / w
    };
    theta as f64 * (1.0 - w * w) * ratio
}

/// Result of the convexity check on `f(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    /// Largest negative part of a second central difference.
    pub max_violation: f64,
    /// `max(1, max |f|)` over the grid.
    pub scale: f64,
    /// The auxiliary `g(s) = (s - 1/p)^4 f''(s)` at `s = 1/p`.
    pub g_at_center: f64,
    /// Smallest auxiliary `g` over the grid.
    pub min_g: f64,
}

impl ConvexityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol * self.scale
            && fmath::abs(self.g_at_center) <= 1e-10
            && self.min_g >= -1e-10
    }
}

/// `f(s) = [s ln(p s) + (1 - s) ln(q (1 - s))] / (s - 1/p)^2`, with the
/// series at the removable point `s = 1/p`.
pub fn convexity_f(s: f64, p: f64, q: f64) -> f64 {
    let v = s - 1.0 / p;
    if p.max(q) * fmath::abs(v) < 0.25 {
        // sum_{k>=2} [(-1)^k p^{k-1} + q^{k-1}] v^{k-2} / (k(k-1))
        let mut sum = 0.0;
        let (mut pk, mut qk, mut vk) = (p, q, 1.0);
        for k in 2..=62 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = (sign * pk + qk) * vk / (k * (k - 1)) as f64;
            sum += term;
            if (pk + qk) * fmath::abs(vk) < 1e-18 * fmath::abs(sum) {
                break;
            }
            pk *= p;
            qk *= q;
            vk *= v;
        }
        return sum;
    }
    let num = s * fmath::ln(p * s) + (1.0 - s) * fmath::ln(q * (1.0 - s));
    num / (v * v)
}

/// Closed form of `(s - 1/p)^4 f''(s)`.
pub fn convexity_aux(s: f64, p: f64, q: f64) -> f64 {
    let c = 1.0 / p;
    let v = s - c;
    let lin = 2.0 * s + 4.0 * c;
    v * v / (s * (1.0 - s)) + lin * fmath::ln(p * s) + (6.0 - lin) * fmath::ln(q * (1.0 - s))
}

fn second_difference_violation(grid: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let vals: Vec<f64> = grid.iter().map(|&s| f(s)).collect();
    let scale = vals.iter().map(|v| fmath::abs(*v)).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    for i in 1..grid.len().saturating_sub(1) {
        let (h0, h1) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
        // divided second difference scaled to the uniform-grid form
        let d = (vals[i + 1] - vals[i]) / h1 - (vals[i] - vals[i - 1]) / h0;
        let d = d * 0.5 * (h0 + h1);
        worst = worst.max(-d);
    }
    (worst, scale)
}

/// Convexity of `f` on `grid` together with the auxiliary identity
/// `g(1/p) = 0` and `g >= 0`.
pub fn convexity_check(p: f64, q: f64, grid: &[f64]) -> Result<ConvexityReport> {
    if !(p > 0.0 && q > 0.0) || fmath::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12 {
        return Err(domain("need p, q > 0 with 1/p + 1/q = 1"));
    }
    if grid.iter().any(|&s| !(s > 0.0 && s < 1.0)) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("grid must be increasing inside (0, 1)"));
    }
    let (max_violation, scale) = second_difference_violation(grid, |s| convexity_f(s, p, q));
    let min_g = grid
        .iter()
        .map(|&s| convexity_aux(s, p, q))
        .fold(f64::INFINITY, f64::min);
    Ok(ConvexityReport {
        max_violation,
        scale,
        g_at_center: convexity_aux(1.0 / p, p, q),
        min_g,
    })
}

/// Convexity of `R` on a `t`-grid, through `s = r t`, `p = theta/r`.
pub fn big_r_convexity(r: usize, theta: usize, grid: &[f64]) -> Result<ConvexityReport> {
    if r == 0 || r >= theta {
        return Err(domain("need 1 <= r < theta"));
    }
    let p = theta as f64 / r as f64;
    let q = theta as f64 / (theta - r) as f64;
    let s_grid: Vec<f64> = grid.iter().map(|t| r as f64 * t).collect();
    let aux = convexity_check(p, q, &s_grid)?;
    let (max_violation, scale) = second_difference_violation(grid, |t| big_r(t, r, theta));
    Ok(ConvexityReport {
        max_violation,
        scale,
        ..aux
    })
}

/// `n` evenly spaced interior points of `(a, b)` including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// The point `z'` of `Delta(y)` built from `z` when `y` is within `eps` of
/// some `x` dominated by `z`: tail mass below `sqrt(eps)` is moved to the
/// first coordinate and the middle coordinates are shrunk by `1 - alpha`.
pub fn dominance_neighbor(z: &SimplexPoint, _y: &SimplexPoint, eps: f64) -> Result<SimplexPoint> {
    let theta = z.theta();
    if !(eps >= 0.0 && eps < 1.0 / (theta * theta) as f64) {
        return Err(domain("eps must lie in [0, theta^-2)"));
    }
    let root = fmath::sqrt(eps);
    let c = z.coords();
    let k = c.iter().rposition(|&v| v >= root).map_or(1, |i| i + 1);
    let alpha = (k - 1) as f64 * root;
    let tail: f64 = c[k..].iter().sum();
    let mut out = vec![0.0; theta];
    out[0] = alpha + (1.0 - alpha) * c[0] + (1.0 - alpha) * tail;
    for i in 1..k {
        out[i] = (1.0 - alpha) * c[i];
    }
    Ok(SimplexPoint { coords: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&SimplexPoint::extreme(4), 2.5), 0.0);
        let u = phi(&SimplexPoint::uniform(3), 2.0);
        assert!((u - ((1.0 / 3.0 - 1.0) + 3f64.ln())).abs() < 1e-15);
        let x = SimplexPoint::new(vec![0.75, 0.25]).unwrap();
        let want = 1.5 * (0.625 - 1.0) - (0.75 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert!((phi(&x, 3.0) - want).abs() < 1e-15);
    }

    #[test]
    fn simplex_validation() {
        assert!(SimplexPoint::new(vec![0.4, 0.6]).is_err());
        assert!(SimplexPoint::new(vec![0.6, 0.5]).is_err());
        assert!(SimplexPoint::from_unsorted(vec![0.4, 0.6]).is_ok());
    }

    #[test]
    fn subcritical_maximum_is_uniform() {
        let r = maximize_phi(1.0, 2);
        assert!((r.value - (2f64.ln() - 0.25)).abs() < 1e-14);
        assert_eq!(r.x_up, SimplexPoint::uniform(2));
    }

    #[test]
    fn supercritical_two_state_root() {
        let r = maximize_phi(3.0, 2);
        let t = r.x_up.first();
        assert!(t > 0.5);
        assert!((3.0 * (2.0 * t - 1.0) - (t / (1.0 - t)).ln()).abs() < 1e-12);
    }

    #[test]
    fn three_state_jump_past_two_thirds() {
        assert!(maximize_phi(3.0, 3).x_up.first() > 2.0 / 3.0);
    }

    #[test]
    fn critical_values() {
        assert_eq!(beta_critical(2).unwrap(), 2.0);
        assert!((beta_critical(3).unwrap() - 4.0 * 2f64.ln()).abs() < 1e-15);
        assert!(beta_critical(1).is_err());
    }

    #[test]
    fn r_and_rho_identities() {
        for theta in 3..=6 {
            assert!((rho(1.0 / theta as f64, theta) - beta_critical(theta).unwrap()).abs() < 1e-12);
        }
        for theta in 2..=6usize {
            for r in 1..theta {
                let t = (theta - r) as f64 / (r * theta) as f64;
                if t <= 1.0 / theta as f64 {
                    continue;
                }
                let lhs = big_r(t, r, theta);
                let rhs = rho(r as f64 / theta as f64, theta);
                assert!((lhs - rhs).abs() < 1e-10 * rhs.abs(), "theta {theta} r {r}");
            }
            assert!((big_r(1.0 / theta as f64, 1, theta) - theta as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn big_r_is_continuous_across_series_switch() {
        for &(r, theta) in &[(1usize, 2usize), (1, 4), (2, 5)] {
            let (tf, rf) = (theta as f64, r as f64);
            let a = tf.max(tf * rf / (tf - rf));
            let edge = 1.0 / theta as f64 + 0.25 / a;
            let below = big_r(edge - 1e-9, r, theta);
            let above = big_r(edge + 1e-9, r, theta);
            assert!((below - above).abs() < 1e-7, "{r} {theta}: {below} {above}");
        }
    }

    #[test]
    fn neighbor_fixes_extreme_point() {
        let e = SimplexPoint::extreme(3);
        assert_eq!(dominance_neighbor(&e, &e, 0.01).unwrap(), e);
        assert!(dominance_neighbor(&e, &e, 0.2).is_err());
    }

    #[test]
    fn convexity_series_matches_closed_form() {
        let (p, q): (f64, f64) = (3.0, 1.5);
        let s = 1.0 / p + 0.05;
        let num = s * (p * s).ln() + (1.0 - s) * (q * (1.0 - s)).ln();
        let direct = num / (0.05 * 0.05);
        assert!((convexity_f(s, p, q) - direct).abs() < 1e-9);
        assert!(convexity_aux(1.0 / p, p, q).abs() < 1e-14);
    }
}
