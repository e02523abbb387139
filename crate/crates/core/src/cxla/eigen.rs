//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq = g·e^{iφ}` with
//! `diag(1, e^{-iφ})` and then applies the classical real rotation that
//! annihilates the now-real pivot. Real symmetric input takes the same path
//! over `f64`, where the phase is just the sign of the pivot.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::{CVector, HermitianMatrix, SpectrumResult};
use crate::error::{Error, Result};

/// Sweep cap before reporting non-convergence.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖M‖_F`.
const OFF_DIAGONAL_REL_TOL: f64 = 1e-13;

/// Eigenvalues (descending) with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
    pub residual: f64,
    pub sweeps: usize,
}

trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    fn re(self) -> f64;
    fn norm(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn conj(self) -> Self;
    fn scale(self, f: f64) -> Self;
    fn real(x: f64) -> Self;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn re(self) -> f64 {
        self
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn conj(self) -> Self {
        self
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn real(x: f64) -> Self {
        x
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

struct Converged<T> {
    diagonal: Vec<f64>,
    /// Row-major; column `j` is the eigenvector for `diagonal[j]`.
    vectors: Vec<T>,
    sweeps: usize,
}

fn jacobi<T: Scalar>(n: usize, mut a: Vec<T>) -> Result<Converged<T>> {
    let mut v = vec![T::zero(); n * n];
    for j in 0..n {
        v[j * n + j] = T::one();
    }
    let frobenius = a.iter().fold(0.0, |acc, z| acc + z.norm_sqr()).sqrt();
    let threshold = OFF_DIAGONAL_REL_TOL * frobenius;

    let off_diagonal = |a: &[T]| {
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    acc += a[j * n + k].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericalFailure {
                context: format!("Jacobi eigensolver after {MAX_SWEEPS} sweeps"),
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(n, &mut a, &mut v, p, q);
            }
        }
    }

    Ok(Converged { diagonal: (0..n).map(|j| a[j * n + j].re()).collect(), vectors: v, sweeps })
}

fn rotate<T: Scalar>(n: usize, a: &mut [T], v: &mut [T], p: usize, q: usize) {
    let pivot = a[p * n + q];
    let g = pivot.norm();
    if g == 0.0 {
        return;
    }
    let app = a[p * n + p].re();
    let aqq = a[q * n + q].re();
    let theta = (aqq - app) / (2.0 * g);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // e^{-iφ}; the rotation is V = diag(1, e^{-iφ}) · [[c, s], [-s, c]].
    let unphase = pivot.conj().scale(1.0 / g);
    let vqp = unphase.scale(-s);
    let vqq = unphase.scale(c);
    let vpp = T::real(c);
    let vpq = T::real(s);

    // A ← A V
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * vpp + akq * vqp;
        a[k * n + q] = akp * vpq + akq * vqq;
    }
    // A ← V* A
    let (cpp, cpq, cqp, cqq) = (vpp.conj(), vqp.conj(), vpq.conj(), vqq.conj());
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = cpp * apk + cpq * aqk;
        a[q * n + k] = cqp * apk + cqq * aqk;
    }
    a[p * n + q] = T::zero();
    a[q * n + p] = T::zero();
    a[p * n + p] = T::real(app - t * g);
    a[q * n + q] = T::real(aqq + t * g);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * vpp + vkq * vqp;
        v[k * n + q] = vkp * vpq + vkq * vqq;
    }
}

/// Full eigen-decomposition. Fails with `NumericalFailure` if Jacobi does not
/// converge within [`MAX_SWEEPS`] or the worst residual `‖Mv − λv‖` exceeds `tol`.
pub fn hermitian_eigen(m: &HermitianMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = m.size();
    let (diagonal, vectors, sweeps) = if m.is_real() {
        let c = jacobi(n, m.entries().iter().map(|z| z.re).collect())?;
        (c.diagonal, c.vectors.into_iter().map(|x| x.to_complex()).collect::<Vec<_>>(), c.sweeps)
    } else {
        let c = jacobi(n, m.entries().to_vec())?;
        (c.diagonal, c.vectors, c.sweeps)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diagonal[y].total_cmp(&diagonal[x]).then(x.cmp(&y)));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residual = 0.0f64;
    for &col in &order {
        let lambda = diagonal[col];
        let vec = CVector::new((0..n).map(|row| vectors[row * n + col]).collect())?;
        let mv = m.matvec(&vec)?;
        let r =
            mv.entries().iter().zip(vec.entries()).fold(0.0, |acc, (x, y)| acc + (x - y * lambda).norm_sqr()).sqrt();
        residual = residual.max(r);
        eigenvalues.push(lambda);
        eigenvectors.push(vec);
    }

    if !(residual <= tol) {
        return Err(Error::NumericalFailure {
            context: format!("eigenpair residual above tolerance {tol:e}"),
            residual,
        });
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors, residual, sweeps })
}

pub fn hermitian_eigenvalues(m: &HermitianMatrix, tol: f64) -> Result<SpectrumResult> {
    let decomposition = hermitian_eigen(m, tol)?;
    Ok(SpectrumResult { eigenvalues: decomposition.eigenvalues, residual: decomposition.residual })
}
