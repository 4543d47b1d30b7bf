//! Small dense complex linear algebra: vectors, matrices, tensor products,
//! Hermitian eigendecomposition (cyclic Jacobi), and the PSD inverse square
//! root on support. Everything here targets dimensions <= 16.

use num_complex::Complex64;

use crate::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;
const MAX_EIG_DIM: usize = 16;

/// Complex amplitude vector over a computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    amps: Vec<Complex64>,
}

impl CVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "empty vector");
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Complex64::ZERO; dim])
    }

    pub fn from_reals(amps: &[f64]) -> Self {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector |k>.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut v = Self::zeros(dim);
        v.amps[k] = Complex64::ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn set(&mut self, i: usize, v: Complex64) {
        self.amps[i] = v;
    }

    /// Inner product <self|other>, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.amps.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize zero vector");
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Multiply by a global phase so the first amplitude with magnitude
    /// above `tol` becomes real and positive.
    pub fn phase_normalized(&self, tol: f64) -> Self {
        for a in &self.amps {
            if a.norm() > tol {
                let phase = a / a.norm();
                return self.scale(phase.conj());
            }
        }
        self.clone()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.amps.iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }
}

/// Kronecker product; index i*dim(b)+j holds a_i * b_j.
pub fn tensor(a: &CVector, b: &CVector) -> CVector {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in a.amps() {
        for y in b.amps() {
            amps.push(x * y);
        }
    }
    CVector::new(amps)
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> CVector {
        CVector::new(self.data[i * self.dim..(i + 1) * self.dim].to_vec())
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::new((0..self.dim).map(|i| self.get(i, j)).collect())
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.get(j, i).conj());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..self.dim {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mulvec(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim());
        let mut out = CVector::zeros(self.dim);
        for i in 0..self.dim {
            let mut s = Complex64::ZERO;
            for j in 0..self.dim {
                s += self.get(i, j) * v.amp(j);
            }
            out.set(i, s);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Outer product |v><v|.
    pub fn outer(v: &CVector) -> Self {
        let mut m = Self::zeros(v.dim());
        for i in 0..v.dim() {
            for j in 0..v.dim() {
                m.set(i, j, v.amp(i) * v.amp(j).conj());
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M - M^dagger| entry-wise.
    pub fn hermitian_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|a| a.im.abs()).fold(0.0, f64::max)
    }
}

/// Tensor (Kronecker) product of square matrices.
pub fn tensor_matrix(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut m = CMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    m.set(i * db + k, j * db + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    m
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in descending order with matching orthonormal
/// eigenvectors, each phase-normalized so its first significant amplitude
/// is real and positive.
pub fn eig_hermitian(m: &CMatrix) -> Result<(Vec<f64>, Vec<CVector>)> {
    let residual = m.hermitian_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let d = m.dim();
    if d > MAX_EIG_DIM {
        return Err(Error::InvalidArgument(format!(
            "eig_hermitian supports dim <= {MAX_EIG_DIM}, got {d}"
        )));
    }

    let mut a = m.clone();
    // Symmetrize to kill the sub-tolerance non-Hermitian part.
    a = a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = CMatrix::identity(d);
    let scale = a.max_abs().max(1.0);
    let thresh = 1e-15 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= thresh {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                if apq.norm() <= thresh {
                    continue;
                }
                // Jacobi rotation from the exact eigenvectors of the (p,q)
                // block [[app, apq], [conj(apq), aqq]]. The eigenvalue branch
                // nearest app gives the small-angle rotation; its gap to app
                // is computed in the cancellation-free form
                // sign(hd) |apq|^2 / (disc + |hd|).
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let hd = 0.5 * (app - aqq);
                let disc = (hd * hd + apq.norm_sqr()).sqrt();
                let gap = hd.signum() * apq.norm_sqr() / (disc + hd.abs());
                // Eigenvector (apq, gap) for the eigenvalue app + gap.
                let u0 = apq;
                let u1 = Complex64::new(gap, 0.0);
                let n = (u0.norm_sqr() + u1.norm_sqr()).sqrt();
                let (c0, c1) = (u0 / n, u1 / n);
                // Orthogonal partner: (-conj(c1), conj(c0)).
                let (d0, d1) = (-c1.conj(), c0.conj());
                // Column update of A: A <- A R.
                for i in 0..d {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * c0 + aiq * c1);
                    a.set(i, q, aip * d0 + aiq * d1);
                }
                // Row update: A <- R^dag A.
                for j in 0..d {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c0.conj() * apj + c1.conj() * aqj);
                    a.set(q, j, d0.conj() * apj + d1.conj() * aqj);
                }
                a.set(p, q, Complex64::ZERO);
                a.set(q, p, Complex64::ZERO);
                for i in 0..d {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c0 + viq * c1);
                    v.set(i, q, vip * d0 + viq * d1);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, CVector)> = (0..d)
        .map(|k| (a.get(k, k).re, v.column(k).phase_normalized(1e-8)))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let (vals, vecs) = pairs.into_iter().unzip();
    Ok((vals, vecs))
}

/// Inverse square root of a PSD Hermitian matrix on its support;
/// eigenvalues below `tol` are treated as kernel (pseudo-inverse).
pub fn psd_inv_sqrt(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let (vals, vecs) = eig_hermitian(m)?;
    if let Some(&min) = vals.last() {
        if min < -tol {
            return Err(Error::NotPsd { min_eig: min });
        }
    }
    let mut out = CMatrix::zeros(m.dim());
    for (lam, vec) in vals.iter().zip(&vecs) {
        if *lam > tol {
            let w = Complex64::new(1.0 / lam.sqrt(), 0.0);
            out = out.add(&CMatrix::outer(vec).scale(w));
        }
    }
    Ok(out)
}

/// Extend a set of orthonormal columns to a full orthonormal basis of
/// dimension `dim` by Gram-Schmidt against the standard basis, taken in
/// index order (deterministic).
pub fn complete_orthonormal_basis(cols: &[CVector], dim: usize) -> Vec<CVector> {
    let mut basis: Vec<CVector> = cols.to_vec();
    let mut k = 0usize;
    while basis.len() < dim {
        assert!(k < dim, "failed to complete basis");
        let mut cand = CVector::basis(dim, k);
        k += 1;
        for b in &basis {
            let c = b.inner(&cand);
            cand = cand.sub(&b.scale(c));
        }
        let n = cand.norm();
        if n > 1e-8 {
            basis.push(cand.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
    basis.split_off(cols.len())
}
