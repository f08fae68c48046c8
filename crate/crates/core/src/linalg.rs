//! Dense complex linear algebra for the small operators used throughout the crate.
//!
//! Matrices are square, row-major and value-semantic. The dimensions that
//! matter here are 2 (one qubit) and 4 (two qubits), so every routine is a
//! straightforward dense loop.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative Frobenius tolerance used for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (scaled by `max(1, ‖M‖_F)`).
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Builds a complex number, rejecting NaN and infinite components.
pub fn complex(re: f64, im: f64) -> Result<Complex64> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::MalformedMatrix { dim: 1, len: 1 })
    }
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Creates a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim || data.iter().any(|z| !z.is_finite()) {
            return Err(Error::MalformedMatrix {
                dim,
                len: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Creates a matrix from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Diagonal matrix with real entries.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                op: "outer",
                left: u.len(),
                right: v.len(),
            });
        }
        let n = u.len();
        let mut data = Vec::with_capacity(n * n);
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::new(n, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Column `col` as a vector.
    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim("matmul", other)?;
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Kronecker product; `self` acts on the left (more significant) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let xy = self.matmul(other)?;
        let yx = other.matmul(self)?;
        Ok(&xy - &yx)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim("add", other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim("sub", other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                op: "apply",
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    /// `‖M − M†‖_F / max(1, ‖M‖_F)`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut diff = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                diff += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        diff.sqrt() / self.frobenius_norm().max(1.0)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= HERMITIAN_TOL
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn check_dim(&self, op: &'static str, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op,
                left: self.dim,
                right: other.dim,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator impls panic on dimension mismatch; use the `Result` methods when
// dimensions are not known to agree.

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs).expect("dimension mismatch in +")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("dimension mismatch in -")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("dimension mismatch in *")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.commutator(y)
}

/// Pauli matrices and the 2×2 identity.
pub mod pauli {
    use super::{Complex64, ComplexMatrix, ONE, ZERO};

    fn two_by_two(entries: [Complex64; 4]) -> ComplexMatrix {
        ComplexMatrix::new(2, entries.to_vec()).expect("2x2 literal")
    }

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        two_by_two([ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> ComplexMatrix {
        two_by_two([ZERO, -super::I, super::I, ZERO])
    }

    pub fn z() -> ComplexMatrix {
        two_by_two([ONE, ZERO, ZERO, -ONE])
    }

    /// `[σ_x, σ_y, σ_z]`.
    pub fn all() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }
}

/// Spectral decomposition `M = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V·diag(λ)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diag(&self.eigenvalues);
        &(v * &d) * &v.adjoint()
    }

    /// Eigenvector for the `k`-th (descending) eigenvalue.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Index of the eigenvalue of largest magnitude. Ties go to the larger
    /// (positive) eigenvalue, which comes first in descending order.
    pub fn dominant_index(&self) -> usize {
        let mut best = 0;
        for (k, lambda) in self.eigenvalues.iter().enumerate() {
            if lambda.abs() > self.eigenvalues[best].abs() {
                best = k;
            }
        }
        best
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq`, which reduces the
/// 2×2 subproblem to the real symmetric case, then applies the classical
/// Jacobi rotation that annihilates it. Sweeps continue until the off-diagonal
/// Frobenius norm falls below [`JACOBI_OFF_DIAGONAL_TOL`]`·max(1, ‖M‖_F)`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let residual = m.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.dim();
    // Work on the exact Hermitian part.
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, (m.get(i, j) + m.get(j, i).conj()) * 0.5);
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut converged = false;
    let mut off = off_diagonal_norm(&a);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off > threshold {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_diagonal: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors.set(row, col, v.get(row, src));
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A ← J†·A·J`, `V ← V·J` with `J` chosen to zero `a_pq`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let magnitude = apq.norm();
    if magnitude <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / magnitude;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to the (p, q) plane.
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * j_pp + akq * j_qp);
        a.set(k, q, akp * j_pq + akq * j_qq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, j_pp.conj() * apk + j_qp.conj() * aqk);
        a.set(q, k, j_pq.conj() * apk + j_qq.conj() * aqk);
    }
    a.set(p, q, ZERO);
    a.set(q, p, ZERO);
    a.set(p, p, Complex64::new(a.get(p, p).re, 0.0));
    a.set(q, q, Complex64::new(a.get(q, q).re, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * j_pp + vkq * j_qp);
        v.set(k, q, vkp * j_pq + vkq * j_qq);
    }
}

/// Spectral norm of a Hermitian matrix: `max |λ|`.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m)?.spectral_radius())
}
