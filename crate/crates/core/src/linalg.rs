//! Dense complex linear algebra for the 2-, 4- and 8-dimensional spaces of a
//! three-qubit register.
//!
//! Basis states are ordered with qubit 1 as the most significant bit, so the
//! row index of `|q1 q2 q3>` is `4*q1 + 2*q2 + q3`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension handled anywhere in the crate.
pub const MAX_DIM: usize = 8;

/// Tolerance for treating a matrix as Hermitian on entry to the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues above `-PSD_TOL` are clipped to zero in PSD operations; anything
/// lower is an error.
pub const PSD_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// One of the three qubits, labelled 1, 2, 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Qubit(u8);

impl Qubit {
    pub const ONE: Qubit = Qubit(1);
    pub const TWO: Qubit = Qubit(2);
    pub const THREE: Qubit = Qubit(3);
    pub const ALL: [Qubit; 3] = [Qubit::ONE, Qubit::TWO, Qubit::THREE];

    pub fn new(label: usize) -> Result<Self> {
        match label {
            1..=3 => Ok(Qubit(label as u8)),
            _ => Err(Error::InvalidQubit(label)),
        }
    }

    pub fn label(self) -> usize {
        self.0 as usize
    }

    /// Bit mask of this qubit inside an 8-dimensional basis index.
    pub fn mask(self) -> usize {
        1 << (3 - self.label())
    }
}

impl TryFrom<usize> for Qubit {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        Qubit::new(value)
    }
}

impl From<Qubit> for usize {
    fn from(q: Qubit) -> usize {
        q.label()
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Row-major dense complex matrix with at most 8 rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows > 0 && cols > 0 && rows <= MAX_DIM && cols <= MAX_DIM,
            "matrix dimensions {rows}x{cols} outside 1..=8"
        );
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::Dimension(format!("{rows}x{cols} outside 1..=8")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.dagger()).scale_real(0.5)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        ComplexMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| self[(r, k)] * rhs[(k, c)]).sum()
        })
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product with row-major block layout.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Dimension(format!(
            "tensor product would be {rows}x{cols}, above the three-qubit limit"
        )));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    }))
}

/// Tensor product of a sequence of factors, left to right.
pub fn tensor_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Dimension("empty tensor product".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, f| tensor(&acc, f))
}

fn require_dim(m: &ComplexMatrix, n: usize, what: &str) -> Result<()> {
    if m.rows != n || m.cols != n {
        return Err(Error::Dimension(format!(
            "{what} needs a {n}x{n} matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    Ok(())
}

/// Reduced operator on the qubits in `keep`, listed in ascending label order
/// in the output regardless of the order given.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[Qubit]) -> Result<ComplexMatrix> {
    require_dim(rho, 8, "partial_trace")?;
    let mut kept: Vec<Qubit> = keep.to_vec();
    kept.sort();
    kept.dedup();
    if kept.is_empty() || kept.len() == 3 {
        return Err(Error::InvalidSubset(format!(
            "keep-set must hold one or two qubits, got {}",
            kept.len()
        )));
    }
    let keep_mask: usize = kept.iter().map(|q| q.mask()).sum();
    let reduced_index = |full: usize| {
        kept.iter()
            .fold(0, |acc, q| (acc << 1) | usize::from(full & q.mask() != 0))
    };
    let dim = 1 << kept.len();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..8 {
        for j in 0..8 {
            if i & !keep_mask == j & !keep_mask {
                out[(reduced_index(i), reduced_index(j))] += rho[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the row and column indices belonging to `part`.
pub fn partial_transpose(rho: &ComplexMatrix, part: Qubit) -> Result<ComplexMatrix> {
    require_dim(rho, 8, "partial_transpose")?;
    let m = part.mask();
    Ok(ComplexMatrix::from_fn(8, 8, |i, j| {
        rho[((i & !m) | (j & m), (j & !m) | (i & m))]
    }))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows).map(|r| self.vectors[(r, k)]).collect()
    }

    /// `V f(Λ) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| self.vectors[(r, k)] * self.vectors[(c, k)].conj() * mapped[k])
                .sum()
        })
    }
}

pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n = m.rows;
    let eig = m.hermitian_part().to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigen-decomposition of a PSD matrix with small negative eigenvalues clipped
/// to zero.
pub fn psd_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut eig = herm_eig(m)?;
    if let Some(&lowest) = eig.values.last() {
        if lowest < -PSD_TOL {
            return Err(Error::NegativeEigenvalue { eigenvalue: lowest });
        }
    }
    for v in &mut eig.values {
        *v = v.max(0.0);
    }
    Ok(eig)
}

/// Principal square root of a Hermitian PSD matrix.
pub fn sqrtm_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(psd_eig(m)?.reconstruct_with(f64::sqrt))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.values.iter().map(|v| v.abs()).sum())
}

/// Singular values, descending.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}
