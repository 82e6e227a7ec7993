//! Brute-force oracles, written independently of the engines they check.

use num_bigint::BigUint;
use num_traits::One;

/// `n! / prod(hook lengths)` for a shape given by its nonzero rows.
pub fn hook_length_dimension(shape: &[usize]) -> BigUint {
    let rows: Vec<usize> = shape.iter().copied().filter(|&r| r > 0).collect();
    let n: usize = rows.iter().sum();
    let mut num = BigUint::one();
    for k in 2..=n {
        num *= k as u64;
    }
    let mut den = BigUint::one();
    for (i, &len) in rows.iter().enumerate() {
        for j in 0..len {
            let arm = len - j - 1;
            let leg = rows[i + 1..].iter().filter(|&&r| r > j).count();
            den *= (arm + leg + 1) as u64;
        }
    }
    num / den
}

/// Number of semistandard tableaux of `shape` with `content[i]` entries
/// equal to `i + 1`, by filling cells in reading order.
pub fn ssyt_count(shape: &[usize], content: &[usize]) -> u64 {
    let rows: Vec<usize> = shape.iter().copied().filter(|&r| r > 0).collect();
    if rows.iter().sum::<usize>() != content.iter().sum::<usize>() {
        return 0;
    }
    let cells: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<usize>> = rows.iter().map(|&len| vec![0; len]).collect();
    let mut left = content.to_vec();
    fill(&cells, 0, &mut grid, &mut left)
}

fn fill(cells: &[(usize, usize)], at: usize, grid: &mut [Vec<usize>], left: &mut [usize]) -> u64 {
    let Some(&(i, j)) = cells.get(at) else {
        return 1;
    };
    let mut lo = 1;
    if j > 0 {
        lo = lo.max(grid[i][j - 1]);
    }
    if i > 0 {
        lo = lo.max(grid[i - 1][j] + 1);
    }
    let mut total = 0;
    for v in lo..=left.len() {
        if left[v - 1] == 0 {
            continue;
        }
        left[v - 1] -= 1;
        grid[i][j] = v;
        total += fill(cells, at + 1, grid, left);
        left[v - 1] += 1;
    }
    grid[i][j] = 0;
    total
}

/// Law of the cycle type of the interchange process on three vertices at
/// inverse temperature `beta`, as `[identity, transposition, 3-cycle]`.
///
/// Each of the three edges rings at rate 1 for time `beta / 3`; the law is
/// `e^{tQ}` applied to the identity for the generator `Q` on all of `S_3`,
/// summed by Taylor series over short time steps.
pub fn s3_cycle_type_law(beta: f64) -> [f64; 3] {
    let elems: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [1, 0, 2],
        [2, 1, 0],
        [0, 2, 1],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let index = |p: [usize; 3]| elems.iter().position(|&e| e == p).unwrap();
    let mut q = [[0.0f64; 6]; 6];
    for (a, p) in elems.iter().enumerate() {
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let mut r = *p;
            r.swap(x, y);
            q[a][index(r)] += 1.0;
            q[a][a] -= 1.0;
        }
    }
    // short steps keep every Taylor series well conditioned
    let steps = (beta / 3.0 / 0.25).ceil().max(1.0) as usize;
    let dt = beta / 3.0 / steps as f64;
    let mut law = [0.0; 6];
    law[0] = 1.0;
    for _ in 0..steps {
        let mut term = law;
        for k in 1..40 {
            let mut next = [0.0; 6];
            for a in 0..6 {
                for b in 0..6 {
                    next[b] += term[a] * q[a][b] * dt / k as f64;
                }
            }
            term = next;
            for b in 0..6 {
                law[b] += term[b];
            }
        }
    }
    [law[0], law[1] + law[2] + law[3], law[4] + law[5]]
}

/// `(beta/2)(sum y^2 - 1) - sum y ln y`.
pub fn phi_value(y: &[f64], beta: f64) -> f64 {
    let sq: f64 = y.iter().map(|v| v * v).sum();
    let ent: f64 = y.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum();
    0.5 * beta * (sq - 1.0) - ent
}

/// Grid maximum of `phi` over `{y : y dominates x}` on the mesh `1/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMax {
    pub value: f64,
    pub argmax: Vec<usize>,
    /// Largest change of `phi` between the argmax and a grid neighbour.
    pub mesh_tol: f64,
}

fn grid_partitions(m: usize, theta: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=cap.min(left)).rev() {
            if v * slots < left {
                break;
            }
            cur.push(v);
            rec(left - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, theta, &mut Vec::new(), &mut out);
    out
}

fn dominates_units(y: &[usize], x: &[usize]) -> bool {
    let (mut sy, mut sx) = (0, 0);
    y.iter().zip(x).all(|(a, b)| {
        sy += a;
        sx += b;
        sy >= sx
    })
}

/// `x` is a decreasing vector of nonnegative integers summing to `m`.
pub fn grid_g(x: &[usize], m: usize, beta: f64) -> GridMax {
    let theta = x.len();
    let to_point = |u: &[usize]| -> Vec<f64> { u.iter().map(|&v| v as f64 / m as f64).collect() };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for y in grid_partitions(m, theta) {
        if !dominates_units(&y, x) {
            continue;
        }
        let v = phi_value(&to_point(&y), beta);
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, y));
        }
    }
    let (value, argmax) = best.expect("x dominates itself");
    let mut mesh_tol: f64 = 0.0;
    for i in 0..theta {
        for j in 0..theta {
            if i == j || argmax[i] == 0 {
                continue;
            }
            let mut nb = argmax.clone();
            nb[i] -= 1;
            nb[j] += 1;
            mesh_tol = mesh_tol.max((phi_value(&to_point(&nb), beta) - value).abs());
        }
    }
    GridMax {
        value,
        argmax,
        mesh_tol,
    }
}
