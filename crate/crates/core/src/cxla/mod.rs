//! Dense complex linear algebra sized for the certificate matrices (n up to a
//! few hundred).
//!
//! All reductions run left to right in index order so that results are
//! reproducible bit for bit on a given platform.

mod eigen;

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, EigenDecomposition, MAX_SWEEPS};

/// Default relative threshold for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Default absolute residual bound accepted from the eigensolver.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Tolerance on `‖b‖ = 1` for inputs that must be unit vectors.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// A finite vector in ℂ^dim.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("vector must have positive dimension".into()));
        }
        if let Some(x) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!("vector entry {x} is not finite")));
        }
        Ok(Self(entries))
    }

    pub fn from_reals(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `index`-th canonical basis vector of ℂ^dim.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidInput(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dim];
        entries[index] = Complex64::new(1.0, 0.0);
        Self::new(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.iter().map(|&z| z * factor).collect())
    }

    /// Returns `self / ‖self‖`; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl TryFrom<Vec<Complex64>> for CVector {
    type Error = Error;

    fn try_from(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<CVector> for Vec<Complex64> {
    fn from(v: CVector) -> Self {
        v.0
    }
}

/// A square complex matrix that is Hermitian up to `hermiticity_tol`.
///
/// Entries are stored row-major.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    size: usize,
    entries: Vec<Complex64>,
    hermiticity_tol: f64,
}

impl HermitianMatrix {
    /// Validates hermiticity: `|M[j][k] − conj(M[k][j])| ≤ tol` everywhere,
    /// which also bounds the imaginary part of the diagonal.
    pub fn new(size: usize, entries: Vec<Complex64>, hermiticity_tol: f64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("matrix must have positive size".into()));
        }
        if entries.len() != size * size {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        if !(hermiticity_tol >= 0.0) {
            return Err(Error::InvalidInput("hermiticity tolerance must be non-negative".into()));
        }
        let m = Self { size, entries, hermiticity_tol };
        let defect = m.hermiticity_defect();
        if defect > hermiticity_tol {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian: defect {defect:e} exceeds {hermiticity_tol:e}"
            )));
        }
        Ok(m)
    }

    /// Builds a matrix from its upper triangle, mirroring conjugates below the
    /// diagonal so the result is exactly Hermitian.
    pub fn from_upper_fn(size: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); size * size];
        for j in 0..size {
            entries[j * size + j] = Complex64::new(f(j, j).re, 0.0);
            for k in (j + 1)..size {
                let z = f(j, k);
                entries[j * size + k] = z;
                entries[k * size + j] = z.conj();
            }
        }
        Self::new(size, entries, 0.0)
    }

    /// Real symmetric matrix from row-major reals.
    pub fn from_real(size: usize, entries: &[f64], hermiticity_tol: f64) -> Result<Self> {
        Self::new(size, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(), hermiticity_tol)
    }

    pub fn identity(size: usize) -> Result<Self> {
        Self::from_upper_fn(size, |j, k| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn zeros(size: usize) -> Result<Self> {
        Self::from_upper_fn(size, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_upper_fn(values.len(), |j, k| Complex64::new(if j == k { values[j] } else { 0.0 }, 0.0))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn hermiticity_tol(&self) -> f64 {
        self.hermiticity_tol
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size + col]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j..n {
                let d = (self.entries[j * n + k] - self.entries[k * n + j].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        (0..self.size).fold(0.0, |acc, j| acc + self.get(j, j).re)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_size(other)?;
        Ok(self.entries.iter().zip(&other.entries).fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            size: self.size,
            entries: self.entries.iter().map(|z| z * factor).collect(),
            hermiticity_tol: self.hermiticity_tol * factor.abs(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        Ok(Self {
            size: self.size,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            hermiticity_tol: self.hermiticity_tol + other.hermiticity_tol,
        })
    }

    /// `M²`, computed on the upper triangle and mirrored.
    pub fn square(&self) -> Self {
        let n = self.size;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in j..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..n {
                    acc += self.entries[j * n + x] * self.entries[x * n + k];
                }
                if j == k {
                    entries[j * n + j] = Complex64::new(acc.re, 0.0);
                } else {
                    entries[j * n + k] = acc;
                    entries[k * n + j] = acc.conj();
                }
            }
        }
        Self { size: n, entries, hermiticity_tol: self.hermiticity_tol }
    }

    pub fn matvec(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.size {
            return Err(Error::InvalidInput(format!(
                "matrix of size {} applied to vector of dimension {}",
                self.size,
                v.dim()
            )));
        }
        let n = self.size;
        let out = (0..n)
            .map(|j| (0..n).fold(Complex64::new(0.0, 0.0), |acc, k| acc + self.entries[j * n + k] * v[k]))
            .collect();
        CVector::new(out)
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::InvalidInput(format!("matrix size mismatch: {} vs {}", self.size, other.size)));
        }
        Ok(())
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex64]> = self.entries.chunks(self.size).collect();
        f.debug_struct("HermitianMatrix").field("size", &self.size).field("rows", &rows).finish()
    }
}

/// Eigenvalues sorted descending plus the largest `‖Mv − λv‖` over the
/// computed eigenpairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionMultiple {
    pub is_multiple: bool,
    pub scalar: f64,
}

/// `⟨u, v⟩ = Σ conj(u[x]) v[x]`, conjugate-linear in the first argument.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::InvalidInput(format!(
            "inner product of vectors with dimensions {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    Ok(inner_unchecked(u.entries(), v.entries()))
}

pub(crate) fn inner_unchecked(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

/// Gram matrix `G[j][k] = ⟨b_j, b_k⟩`.
pub fn gram(vs: &[CVector]) -> Result<HermitianMatrix> {
    let first = vs.first().ok_or_else(|| Error::InvalidInput("gram of an empty list".into()))?;
    if let Some(j) = vs.iter().position(|v| v.dim() != first.dim()) {
        return Err(Error::InvalidInput(format!("vector {j} has dimension {}, expected {}", vs[j].dim(), first.dim())));
    }
    HermitianMatrix::from_upper_fn(vs.len(), |j, k| inner_unchecked(vs[j].entries(), vs[k].entries()))
}

/// Hilbert–Schmidt inner product `tr(A* B)`.
pub fn hs_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Complex64> {
    a.check_same_size(b)?;
    let n = a.size;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += a.entries[k * n + j].conj() * b.entries[k * n + j];
        }
    }
    Ok(acc)
}

/// `|b⟩⟨b| − I/d` for a unit vector `b`.
pub fn projector_traceless(b: &CVector) -> Result<HermitianMatrix> {
    if !b.is_unit(UNIT_NORM_TOL) {
        return Err(Error::InvalidInput(format!("projector of a non-unit vector (norm {})", b.norm())));
    }
    let d = b.dim();
    let shift = 1.0 / d as f64;
    HermitianMatrix::from_upper_fn(d, |j, k| {
        let z = b[j] * b[k].conj();
        if j == k {
            z - shift
        } else {
            z
        }
    })
}

/// Counts eigenvalues with `|λ| > rel_tol · max(1, max|λ|)`.
pub fn numerical_rank(m: &HermitianMatrix, rel_tol: f64) -> Result<usize> {
    let spectrum = hermitian_eigenvalues(m, DEFAULT_EIGEN_TOL * m.max_abs().max(1.0))?;
    Ok(rank_of_spectrum(&spectrum.eigenvalues, rel_tol))
}

pub fn rank_of_spectrum(eigenvalues: &[f64], rel_tol: f64) -> usize {
    let cutoff = rel_tol * spectral_scale(eigenvalues);
    eigenvalues.iter().filter(|l| l.abs() > cutoff).count()
}

fn spectral_scale(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().fold(1.0f64, |acc, l| acc.max(l.abs()))
}

/// Whether `M = λP` for an orthogonal projection `P`: the eigenvalues must
/// fall into zero plus at most one nonzero cluster of width `tol`.
pub fn is_projection_multiple(m: &HermitianMatrix, tol: f64) -> Result<ProjectionMultiple> {
    let spectrum = hermitian_eigenvalues(m, DEFAULT_EIGEN_TOL * m.max_abs().max(1.0))?;
    Ok(projection_multiple_of_spectrum(&spectrum.eigenvalues, tol))
}

pub fn projection_multiple_of_spectrum(eigenvalues: &[f64], tol: f64) -> ProjectionMultiple {
    let cutoff = tol * spectral_scale(eigenvalues);
    let nonzero: Vec<f64> = eigenvalues.iter().copied().filter(|l| l.abs() > cutoff).collect();
    if nonzero.is_empty() {
        return ProjectionMultiple { is_multiple: true, scalar: 0.0 };
    }
    let lo = nonzero.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = nonzero.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scalar = nonzero.iter().sum::<f64>() / nonzero.len() as f64;
    ProjectionMultiple { is_multiple: hi - lo <= cutoff, scalar }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_conventions() {
        let e1 = CVector::basis(2, 0).unwrap();
        let e2 = CVector::basis(2, 1).unwrap();
        assert_eq!(inner(&e1, &e1).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&e1, &e2).unwrap(), c(0.0, 0.0));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = CVector::from_reals(&[h, h]).unwrap();
        let minus = CVector::from_reals(&[h, -h]).unwrap();
        assert!(inner(&plus, &minus).unwrap().norm() < 1e-15);
        assert!((inner(&e1, &plus).unwrap().norm_sqr() - 0.5).abs() < 1e-15);

        // conjugation on the first argument
        let u = CVector::new(vec![c(0.0, 1.0)]).unwrap();
        let v = CVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(inner(&u, &v).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let a = CVector::basis(2, 0).unwrap();
        let b = CVector::basis(3, 0).unwrap();
        assert!(matches!(inner(&a, &b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn vector_rejects_non_finite() {
        assert!(CVector::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CVector::new(vec![]).is_err());
    }

    #[test]
    fn gram_of_standard_basis_is_identity() {
        let basis: Vec<_> = (0..2).map(|j| CVector::basis(2, j).unwrap()).collect();
        let g = gram(&basis).unwrap();
        assert_eq!(g, HermitianMatrix::identity(2).unwrap());
        assert!(matches!(gram(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hs_inner_identities() {
        let id = HermitianMatrix::identity(3).unwrap();
        assert_eq!(hs_inner(&id, &id).unwrap(), c(3.0, 0.0));
        let x = projector_traceless(&CVector::basis(3, 0).unwrap()).unwrap();
        let y = projector_traceless(&CVector::basis(3, 1).unwrap()).unwrap();
        assert!((hs_inner(&x, &x).unwrap().re - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
        assert!((hs_inner(&x, &y).unwrap().re + 1.0 / 3.0).abs() < 1e-15);
        assert!(hs_inner(&id, &HermitianMatrix::identity(2).unwrap()).is_err());
    }

    #[test]
    fn traceless_projector_of_e1() {
        let x = projector_traceless(&CVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(x, HermitianMatrix::diagonal(&[0.5, -0.5]).unwrap());
        assert!(x.trace().abs() < 1e-12);
        let not_unit = CVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!(matches!(projector_traceless(&not_unit), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn hermitian_constructor_validates() {
        let bad = vec![c(1.0, 0.0), c(1.0, 1.0), c(1.0, 1.0), c(2.0, 0.0)];
        assert!(HermitianMatrix::new(2, bad, 1e-12).is_err());
        let good = vec![c(1.0, 0.0), c(1.0, 1.0), c(1.0, -1.0), c(2.0, 0.0)];
        assert!(HermitianMatrix::new(2, good, 0.0).is_ok());
        assert!(HermitianMatrix::new(2, vec![c(1.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&HermitianMatrix::zeros(4).unwrap(), DEFAULT_RANK_TOL).unwrap(), 0);
        let d = HermitianMatrix::diagonal(&[3.0, 0.0, 1e-12, 2.0]).unwrap();
        assert_eq!(numerical_rank(&d, DEFAULT_RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn projection_multiple_examples() {
        let id = HermitianMatrix::identity(3).unwrap();
        assert_eq!(is_projection_multiple(&id, 1e-9).unwrap(), ProjectionMultiple { is_multiple: true, scalar: 1.0 });
        let p = is_projection_multiple(&HermitianMatrix::diagonal(&[2.0, 2.0, 0.0]).unwrap(), 1e-9).unwrap();
        assert!(p.is_multiple);
        assert!((p.scalar - 2.0).abs() < 1e-12);
        let q = is_projection_multiple(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap(), 1e-9).unwrap();
        assert!(!q.is_multiple);
        let z = is_projection_multiple(&HermitianMatrix::zeros(2).unwrap(), 1e-9).unwrap();
        assert_eq!(z, ProjectionMultiple { is_multiple: true, scalar: 0.0 });
    }

    #[test]
    fn square_of_projector_is_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = CVector::new(vec![c(h, 0.0), c(0.0, h)]).unwrap();
        let q = projector_traceless(&b).unwrap().add(&HermitianMatrix::identity(2).unwrap().scaled(0.5)).unwrap();
        assert!(q.square().max_abs_diff(&q).unwrap() < 1e-15);
    }
}
