//! Dense complex matrices and the operator/vector isomorphism.
//!
//! Operators on a d-dimensional Hilbert space are identified with vectors of
//! length d^2 ("doubled space") by flattening row-major: the entry `A[n][m]`
//! lands at index `n*d + m`. Under this convention the scalar product on the
//! doubled space equals the Hilbert-Schmidt product `Tr[A^dag B]`, and
//! `(A (x) B) |C>> = |A C B^T>>` with the standard Kronecker layout.

use nalgebra::DMatrix;
use num_complex::Complex;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Entrywise tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_ENTRY_TOL: f64 = 1e-12;
/// Default threshold below which an eigenvalue counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Default tolerance for positive-semidefiniteness checks.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Dense d x d complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from a row-major entry vector of length `dim * dim`.
    pub fn from_vec(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::BadShape { dim });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for n in 0..dim {
            for mm in 0..dim {
                m[(n, mm)] = f(n, mm);
            }
        }
        m
    }

    /// Rank-one outer product |psi><psi| of a state vector.
    pub fn outer_product(psi: &[C64]) -> Self {
        let d = psi.len();
        Self::from_fn(d, |i, j| psi[i] * psi[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Frobenius norm, the norm induced by the Hilbert-Schmidt product.
    pub fn fro_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from A = A^dag.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Hermitian part (A + A^dag) / 2.
    pub fn hermitize(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale_re(0.5)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    /// Largest entrywise deviation from U U^dag = I.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self * &self.adjoint();
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    /// Validates Hermitian, PSD and unit trace.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        let h = self.hermiticity_defect();
        if h > 1e-10 {
            return Err(Error::NotDensityMatrix(format!(
                "hermiticity defect {h:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.max(1e-9) {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        if !is_psd(self, tol) {
            let (vals, _) = eig_hermitian(&self.hermitize())?;
            return Err(Error::NotDensityMatrix(format!(
                "min eigenvalue {:.3e}",
                vals[0]
            )));
        }
        Ok(())
    }

    /// Matrix-vector product with a raw slice of length `dim`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for (o, row) in out.iter_mut().zip(self.entries.chunks(self.dim)) {
            *o = row.iter().zip(v).map(|(a, x)| a * x).sum();
        }
        out
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        OperatorMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = OperatorMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Length-d^2 vector on the doubled space, paired with the system dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledVector {
    dim: usize,
    entries: Vec<C64>,
}

impl DoubledVector {
    pub fn from_vec(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Scalar product <<a|b>>, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    /// Outer product |a>><<b| as a d^2 x d^2 matrix.
    pub fn outer(&self, other: &Self) -> OperatorMatrix {
        let n = self.entries.len();
        let mut out = OperatorMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.entries[i] * other.entries[j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Flattens A to |A>>, entry A[n][m] at index n*d + m.
pub fn vectorize(a: &OperatorMatrix) -> DoubledVector {
    DoubledVector {
        dim: a.dim,
        entries: a.entries.clone(),
    }
}

/// Inverse of [`vectorize`]; exact round-trip.
pub fn devectorize(v: &DoubledVector) -> OperatorMatrix {
    OperatorMatrix {
        dim: v.dim,
        entries: v.entries.clone(),
    }
}

/// Hilbert-Schmidt product Tr[A^dag B].
pub fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<C64> {
    a.check_same_dim(b)?;
    Ok(a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Applies A (x) B to |C>> without forming the Kronecker matrix: |A C B^T>>.
pub fn sandwich_vectorized(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    c: &OperatorMatrix,
) -> Result<DoubledVector> {
    a.check_same_dim(b)?;
    a.check_same_dim(c)?;
    let bt = b.transpose();
    Ok(vectorize(&(&(a * c) * &bt)))
}

/// Applies A (x) B^dag to |C>>: |A C B^*>>.
pub fn sandwich_vectorized_conj(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    c: &OperatorMatrix,
) -> Result<DoubledVector> {
    a.check_same_dim(b)?;
    a.check_same_dim(c)?;
    let bc = b.conj();
    Ok(vectorize(&(&(a * c) * &bc)))
}

/// Kronecker product, row-major blocks of `a` scaled by entries of `a`.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let da = a.dim;
    let db = b.dim;
    let mut out = OperatorMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are
/// the matching eigenvectors. Rejects inputs whose hermiticity defect exceeds
/// 1e-10; the decomposition runs on the Hermitian part.
pub fn eig_hermitian(a: &OperatorMatrix) -> Result<(Vec<f64>, OperatorMatrix)> {
    let defect = a.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NotHermitian(defect));
    }
    let sym = a.hermitize().to_nalgebra();
    let se = sym.symmetric_eigen();
    let d = a.dim;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = OperatorMatrix::from_fn(d, |i, j| se.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// True when the Hermitian part has min eigenvalue >= -tol.
pub fn is_psd(a: &OperatorMatrix, tol: f64) -> bool {
    match eig_hermitian(&a.hermitize()) {
        Ok((vals, _)) => vals[0] >= -tol,
        Err(_) => false,
    }
}

/// Inverse square root of a strictly positive Hermitian matrix.
///
/// Goes through the eigendecomposition; fails with [`Error::Singular`] when
/// the smallest eigenvalue does not clear `rank_tol`.
pub fn inv_sqrt_psd(a: &OperatorMatrix, rank_tol: f64) -> Result<OperatorMatrix> {
    let (vals, vecs) = eig_hermitian(a)?;
    if vals[0] <= rank_tol {
        return Err(Error::Singular {
            min_eig: vals[0],
            threshold: rank_tol,
        });
    }
    Ok(rebuild_with(&vals, &vecs, |x| 1.0 / x.sqrt()))
}

/// V diag(f(lambda)) V^dag for a spectral decomposition.
pub fn rebuild_with(
    vals: &[f64],
    vecs: &OperatorMatrix,
    f: impl Fn(f64) -> f64,
) -> OperatorMatrix {
    let d = vecs.dim();
    let mut scaled = OperatorMatrix::zeros(d);
    for j in 0..d {
        let fj = C64::new(f(vals[j]), 0.0);
        for i in 0..d {
            scaled[(i, j)] = vecs[(i, j)] * fj;
        }
    }
    &scaled * &vecs.adjoint()
}
