use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use super::Spin;
use crate::error::{domain, Error, Result};
use crate::fmath;
use crate::logvalue::{LogSumExp, LogValue};

/// Largest dense operator dimension that will be allocated.
pub const MAX_DENSE_DIM: usize = 4096;

type C64 = Complex<f64>;

fn modulus(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// A square complex matrix acting on a tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    m: DMatrix<C64>,
}

impl DenseOperator {
    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        assert!(m.is_square(), "operators are square");
        DenseOperator { m }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        DenseOperator {
            m: m.map(|x| C64::new(x, 0.0)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            m: self.m.adjoint(),
        }
    }

    pub fn mul(&self, other: &DenseOperator) -> Self {
        DenseOperator {
            m: &self.m * &other.m,
        }
    }

    pub fn add(&self, other: &DenseOperator) -> Self {
        DenseOperator {
            m: &self.m + &other.m,
        }
    }

    pub fn sub(&self, other: &DenseOperator) -> Self {
        DenseOperator {
            m: &self.m - &other.m,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        DenseOperator { m: &self.m * s }
    }

    /// `self (x) other`, with `self` acting on the slower index.
    pub fn kron(&self, other: &DenseOperator) -> Self {
        DenseOperator {
            m: self.m.kronecker(&other.m),
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &DenseOperator) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| modulus(a - b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|a| modulus(*a)).fold(0.0, f64::max)
    }

    /// Largest `|Im|` over all entries.
    pub fn max_imag(&self) -> f64 {
        self.m.iter().map(|a| fmath::abs(a.im)).fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// The real part, after checking that the operator is real symmetric
    /// to within `tol`.
    pub fn to_real_symmetric(&self, tol: f64) -> Result<DMatrix<f64>> {
        let defect = self.max_imag().max(self.hermiticity_defect());
        if defect > tol {
            return Err(Error::NotRealSymmetric(defect));
        }
        Ok(self.m.map(|z| z.re))
    }
}

/// The three spin matrices `S^1, S^2, S^3`.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub x: DenseOperator,
    pub y: DenseOperator,
    pub z: DenseOperator,
}

impl SpinOperators {
    /// `sum_j (S^j)^2`.
    pub fn casimir(&self) -> DenseOperator {
        self.x
            .mul(&self.x)
            .add(&self.y.mul(&self.y))
            .add(&self.z.mul(&self.z))
    }

    /// `S_x . S_y = sum_j S^j (x) S^j` on two sites.
    pub fn two_site_dot(&self) -> DenseOperator {
        self.x
            .kron(&self.x)
            .add(&self.y.kron(&self.y))
            .add(&self.z.kron(&self.z))
    }
}

/// Standard spin-`S` matrices in the `S^3` eigenbasis `S, S-1, .., -S`.
pub fn spin_operators(spin: Spin) -> SpinOperators {
    let d = spin.theta();
    let s = spin.as_f64();
    let mut raise = DMatrix::<C64>::zeros(d, d);
    // basis index a has m = S - a; S^+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>
    for a in 1..d {
        let m = s - a as f64;
        raise[(a - 1, a)] = C64::new(fmath::sqrt(s * (s + 1.0) - m * (m + 1.0)), 0.0);
    }
    let lower = raise.adjoint();
    let half = C64::new(0.5, 0.0);
    let minus_half_i = C64::new(0.0, -0.5);
    let x = (&raise + &lower) * half;
    let y = (&raise - &lower) * minus_half_i;
    let z = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        (0..d).map(|a| C64::new(s - a as f64, 0.0)),
    ));
    SpinOperators {
        x: DenseOperator { m: x },
        y: DenseOperator { m: y },
        z: DenseOperator { m: z },
    }
}

fn checked_dim(theta: usize, n: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim
            .checked_mul(theta)
            .filter(|&d| d <= MAX_DENSE_DIM)
            .ok_or(Error::DimensionGuard {
                dim: theta.saturating_pow(n as u32),
                limit: MAX_DENSE_DIM,
            })?;
    }
    Ok(dim)
}

/// Basis index with the digits of vertices `x` and `y` exchanged.
fn swap_digits(a: usize, x: usize, y: usize, strides: &[usize], theta: usize) -> usize {
    let dx = (a / strides[x]) % theta;
    let dy = (a / strides[y]) % theta;
    a + dy * strides[x] + dx * strides[y] - dx * strides[x] - dy * strides[y]
}

fn strides(theta: usize, n: usize) -> Vec<usize> {
    let mut s = vec![1usize; n];
    for v in (0..n.saturating_sub(1)).rev() {
        s[v] = s[v + 1] * theta;
    }
    s
}

/// The operator exchanging the tensor factors of vertices `x < y`
/// (1-based).
pub fn transposition_matrix(theta: usize, n: usize, x: usize, y: usize) -> Result<DenseOperator> {
    if !(1 <= x && x < y && y <= n) {
        return Err(domain("transposition needs 1 <= x < y <= n"));
    }
    let dim = checked_dim(theta, n)?;
    let st = strides(theta, n);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for a in 0..dim {
        let b = swap_digits(a, x - 1, y - 1, &st, theta);
        m[(b, a)] = C64::new(1.0, 0.0);
    }
    Ok(DenseOperator { m })
}

/// `H_n = -sum_{x<y} (T_xy - 1)` as a real matrix, summing edges in the
/// given order (0-based vertex pairs).
pub fn hamiltonian_from_edges(
    n: usize,
    theta: usize,
    edges: &[(usize, usize)],
) -> Result<DMatrix<f64>> {
    let dim = checked_dim(theta, n)?;
    let st = strides(theta, n);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for &(x, y) in edges {
        if x == y || x >= n || y >= n {
            return Err(domain("edge endpoints must be distinct vertices"));
        }
        for a in 0..dim {
            let b = swap_digits(a, x, y, &st, theta);
            h[(a, a)] += 1.0;
            h[(b, a)] -= 1.0;
        }
    }
    Ok(h)
}

fn complete_graph(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect()
}

/// The mean-field Hamiltonian on the complete graph.
pub fn hamiltonian(n: usize, theta: usize) -> Result<DenseOperator> {
    Ok(DenseOperator::from_real(&hamiltonian_from_edges(
        n,
        theta,
        &complete_graph(n),
    )?))
}

/// Full spectrum of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn of(m: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 0).ok_or(Error::Eigensolve(dim))?;
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Spectrum { eigenvalues })
    }

    /// `ln sum_i exp(-t eps_i)`.
    pub fn log_trace_exp(&self, t: f64) -> LogValue {
        self.eigenvalues
            .iter()
            .map(|&e| -t * e)
            .collect::<LogSumExp>()
            .finish()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Spectrum of the Hamiltonian built from `edges` (0-based vertex pairs).
///
/// Transpositions preserve how many sites carry each local state, so the
/// matrix is block diagonal over these colour contents and each block is
/// diagonalized on its own.
pub fn spectrum_from_edges(n: usize, theta: usize, edges: &[(usize, usize)]) -> Result<Spectrum> {
    let dim = checked_dim(theta, n)?;
    if edges.iter().any(|&(x, y)| x == y || x >= n || y >= n) {
        return Err(domain("edge endpoints must be distinct vertices"));
    }
    let st = strides(theta, n);
    let mut blocks: BTreeMap<Vec<u16>, Vec<usize>> = BTreeMap::new();
    for a in 0..dim {
        let mut content = vec![0u16; theta];
        for &s in &st {
            content[(a / s) % theta] += 1;
        }
        blocks.entry(content).or_default().push(a);
    }
    let mut position = vec![0usize; dim];
    for members in blocks.values() {
        for (i, &a) in members.iter().enumerate() {
            position[a] = i;
        }
    }
    let mut eigenvalues = Vec::with_capacity(dim);
    for members in blocks.values() {
        let m = members.len();
        let mut h = DMatrix::<f64>::zeros(m, m);
        for (i, &a) in members.iter().enumerate() {
            for &(x, y) in edges {
                let b = swap_digits(a, x, y, &st, theta);
                h[(i, i)] += 1.0;
                h[(position[b], i)] -= 1.0;
            }
        }
        eigenvalues.extend(Spectrum::of(h)?.eigenvalues);
    }
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Spectrum { eigenvalues })
}

/// Spectrum of `H_n`.
pub fn hamiltonian_spectrum(n: usize, theta: usize) -> Result<Spectrum> {
    spectrum_from_edges(n, theta, &complete_graph(n))
}

/// `tr exp(-(beta/n) H_n)` from the full spectrum.
pub fn trace_exp(n: usize, theta: usize, beta: f64) -> Result<LogValue> {
    Ok(hamiltonian_spectrum(n, theta)?.log_trace_exp(beta / n as f64))
}
