//! Dense complex matrix kernel.
//!
//! Everything in the crate is small (a 4×4 two-qubit state, or a few hundred
//! rows once a bosonic mode is attached), so matrices are dense and every
//! exponential is evaluated spectrally: `exp(s·H) = V·diag(exp(s·λ))·V†`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Inputs whose max elementwise `|m - m†|` exceeds this are rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues down to `-PSD_CLAMP` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Largest row or column count any operation will produce.
pub const MAX_DIMENSION: usize = 4096;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix indexed `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMatrix(DMatrix::identity(n, n))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let m = CMatrix(DMatrix::from_row_slice(rows, cols, entries));
        m.check_finite()?;
        Ok(m)
    }

    /// Real-valued convenience constructor, row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries: Vec<C64> = rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect();
        Self::from_row_slice(n_rows, n_cols, &entries)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        CMatrix(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO }))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        CMatrix(DMatrix::from_fn(rows, cols, f))
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        CMatrix(DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj()))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn adjoint(&self) -> Self {
        CMatrix(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        CMatrix(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        CMatrix(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    /// Row `i` as a vector.
    pub fn row(&self, i: usize) -> Vec<C64> {
        (0..self.cols()).map(|j| self.0[(i, j)]).collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols(), "vector length must match column count");
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `A·B†`, used for similarity transforms without materializing the adjoint.
    pub fn mul_adjoint(&self, other: &CMatrix) -> Self {
        CMatrix(&self.0 * other.0.adjoint())
    }

    /// `U·self·U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        (u * self).mul_adjoint(u)
    }

    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// Max elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max elementwise `|m - m†|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        CMatrix((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    pub fn check_finite(&self) -> Result<()> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        (0..self.rows()).flat_map(|i| self.row(i)).collect()
    }

    /// Rows and columns permuted: `out[i, j] = self[perm[i], perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows());
        CMatrix::from_fn(perm.len(), perm.len(), |i, j| self.0[(perm[i], perm[j])])
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Self {
        CMatrix(m)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols(), rhs.rows(), "inner dimensions must agree");
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = checked_dim(a.rows(), b.rows())?;
    let cols = checked_dim(a.cols(), b.cols())?;
    let (br, bc) = (b.rows(), b.cols());
    Ok(CMatrix::from_fn(rows, cols, |r, col| {
        a[(r / br, col / bc)] * b[(r % br, col % bc)]
    }))
}

fn checked_dim(x: usize, y: usize) -> Result<usize> {
    let n = x.checked_mul(y).ok_or(Error::SizeLimit {
        requested: usize::MAX,
        limit: MAX_DIMENSION,
    })?;
    if n > MAX_DIMENSION {
        return Err(Error::SizeLimit {
            requested: n,
            limit: MAX_DIMENSION,
        });
    }
    Ok(n)
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all(factors: &[&CMatrix]) -> Result<CMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Dimension("kron_all needs at least one factor".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| kron(&acc, f))
}

/// Trace out every subsystem not listed in `keep`.
///
/// `dims` lists subsystem dimensions in tensor order; kept subsystems appear in
/// the result in their original relative order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "partial trace of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != m.rows() {
        return Err(Error::Dimension(format!(
            "subsystem dims {dims:?} do not factor dimension {}",
            m.rows()
        )));
    }
    if keep.is_empty() {
        return Err(Error::Dimension("keep set is empty".into()));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || kept[k] {
            return Err(Error::Dimension(format!("invalid or repeated subsystem index {k}")));
        }
        kept[k] = true;
    }

    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let kept_idx: Vec<usize> = (0..dims.len()).filter(|&s| kept[s]).collect();
    let traced_idx: Vec<usize> = (0..dims.len()).filter(|&s| !kept[s]).collect();
    let kept_offsets = subsystem_offsets(&kept_idx, dims, &strides);
    let traced_offsets = subsystem_offsets(&traced_idx, dims, &strides);

    let n = kept_offsets.len();
    let mut out = CMatrix::zeros(n, n);
    for (a, &ra) in kept_offsets.iter().enumerate() {
        for (b, &rb) in kept_offsets.iter().enumerate() {
            out[(a, b)] = traced_offsets.iter().map(|&t| m[(ra + t, rb + t)]).sum();
        }
    }
    Ok(out)
}

/// Flat-index offsets of every multi-index over the given subsystems, in
/// row-major order of those subsystems.
fn subsystem_offsets(subsystems: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    subsystems.iter().fold(vec![0usize], |acc, &s| {
        acc.iter()
            .flat_map(|&base| (0..dims[s]).map(move |i| base + i * strides[s]))
            .collect()
    })
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigenDecomposition {
    /// `V·diag(f(λ))·V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = self.eigenvectors.as_nalgebra();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        CMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(|lam| c(lam, 0.0))
    }
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized before
/// decomposition.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEigenDecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    m.check_finite()?;
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let eig = SymmetricEigen::new(m.hermitian_part().into_nalgebra());
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `exp(scale·h)` for Hermitian `h`, evaluated spectrally. With `scale = -i·t`
/// this is the propagator of `h` over time `t`.
pub fn expm_hermitian_scaled(h: &CMatrix, scale: C64) -> Result<CMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.apply_fn(|lam| (scale * lam).exp()))
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn sqrtm_psd(m: &CMatrix) -> Result<CMatrix> {
    sqrtm_psd_with_clamp(m, PSD_CLAMP)
}

/// As [`sqrtm_psd`], with a caller-chosen clamp for slightly negative eigenvalues.
pub fn sqrtm_psd_with_clamp(m: &CMatrix, clamp: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -clamp {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    Ok(eig.apply_fn(|lam| c(lam.max(0.0).sqrt(), 0.0)))
}

/// Single-qubit operators in the `{|e⟩, |g⟩}` ordering.
pub mod pauli {
    use super::{c, CMatrix, ONE, ZERO};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO })
    }

    pub fn y() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        m
    }

    /// `σz = |e⟩⟨e| - |g⟩⟨g|`.
    pub fn z() -> CMatrix {
        CMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    /// Raising operator `σ+ = |e⟩⟨g|`.
    pub fn raising() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = ONE;
        m
    }

    /// Lowering operator `σ- = |g⟩⟨e|`.
    pub fn lowering() -> CMatrix {
        raising().adjoint()
    }
}

/// Bosonic operators on the Fock levels `0..=cutoff`.
pub mod boson {
    use super::{c, CMatrix};

    /// Annihilation operator `a`.
    pub fn annihilation(cutoff: usize) -> CMatrix {
        let n = cutoff + 1;
        CMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        })
    }

    pub fn creation(cutoff: usize) -> CMatrix {
        annihilation(cutoff).adjoint()
    }

    /// Number operator `a†a`.
    pub fn number(cutoff: usize) -> CMatrix {
        let diag: Vec<f64> = (0..=cutoff).map(|k| k as f64).collect();
        CMatrix::from_real_diagonal(&diag)
    }

    /// `|0⟩` as a vector of length `cutoff + 1`.
    pub fn vacuum(cutoff: usize) -> Vec<super::C64> {
        let mut v = vec![c(0.0, 0.0); cutoff + 1];
        v[0] = c(1.0, 0.0);
        v
    }
}
