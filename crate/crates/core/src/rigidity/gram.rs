//! Trace/rank inequality checks on the Gram matrix `K = (⟨b_j, b_k⟩)` and on
//! `K̃ = (⟨X_j, X_k⟩_HS)` with `X_j = |b_j⟩⟨b_j| − I/d`.

use serde::{Deserialize, Serialize};

use crate::constructions::UnitVectorSystem;
use crate::cxla::{
    gram, hermitian_eigenvalues, hs_inner, projection_multiple_of_spectrum, projector_traceless, rank_of_spectrum,
    HermitianMatrix, DEFAULT_EIGEN_TOL, DEFAULT_RANK_TOL,
};
use crate::error::{Error, Result};
use crate::graph::classify_pairs;

/// Relative slack allowed on `(tr A)² ≤ r·tr(A²)`.
pub const INEQUALITY_SLACK: f64 = 1e-8;

/// Bound on `|K̃_jk − (|K_jk|² − 1/d)|`; the two sides agree up to rounding.
pub const HS_IDENTITY_TOL: f64 = 1e-10;

/// Outcome of `(tr A)² ≤ r·tr(A²)` for a Hermitian `A` of numerical rank `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRkReport {
    /// `(tr A)²`
    pub lhs: f64,
    /// `r · tr(A²)`
    pub rhs: f64,
    pub rank_r: usize,
    pub inequality_holds: bool,
    pub equality_within_tol: bool,
    pub is_projection_multiple: bool,
    pub scalar: f64,
}

/// Evaluates both sides of the trace/rank inequality together with the
/// equality case (`A` a multiple of a projection). `tol` is used as the
/// relative threshold for the rank, for eigenvalue clustering and for
/// deciding equality.
pub fn lemma_rk_check(a: &HermitianMatrix, tol: f64) -> Result<LemmaRkReport> {
    let spectrum = hermitian_eigenvalues(a, DEFAULT_EIGEN_TOL * a.max_abs().max(1.0))?;
    Ok(lemma_rk_of_spectrum(a, &spectrum.eigenvalues, tol))
}

fn lemma_rk_of_spectrum(a: &HermitianMatrix, eigenvalues: &[f64], tol: f64) -> LemmaRkReport {
    let rank_r = rank_of_spectrum(eigenvalues, tol);
    let projection = projection_multiple_of_spectrum(eigenvalues, tol);
    let trace = a.trace();
    let trace_sq = a.entries().iter().fold(0.0, |acc, z| acc + z.norm_sqr());
    let lhs = trace * trace;
    let rhs = rank_r as f64 * trace_sq;
    let equality_within_tol = if rank_r == 0 { true } else { (rhs - lhs).abs() <= tol * rhs.abs() };
    LemmaRkReport {
        lhs,
        rhs,
        rank_r,
        inequality_holds: lhs <= rhs + INEQUALITY_SLACK * rhs.abs(),
        equality_within_tol,
        is_projection_multiple: projection.is_multiple,
        scalar: if rank_r == 0 { 0.0 } else { projection.scalar },
    }
}

/// Diagnostics of `K` and `K̃` for an orthogonal-or-unbiased system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub n: usize,
    pub d: usize,
    pub edge_count: usize,
    pub trace_k: f64,
    /// `Σ |K_jk|²` by direct summation
    pub trace_k2: f64,
    /// `n + n(n−1)/d − 2|E|/d`
    pub trace_k2_formula: f64,
    pub rank_k: usize,
    pub trace_kt: f64,
    /// `n(1 − 1/d)`
    pub trace_kt_expected: f64,
    pub trace_kt2: f64,
    /// `n(1 − 1/d)² + 2|E|/d²`
    pub trace_kt2_expected: f64,
    pub rank_kt: usize,
    /// `max |(K̃² − K̃)_jk|`
    pub kt_projection_residual: f64,
    /// `max |K̃_jk − (|K_jk|² − 1/d)|`, Hilbert–Schmidt route vs overlap route
    pub hs_identity_residual: f64,
    /// `|E| ≤ n(d−1)/2`, from the inequality on `K` with `rk K ≤ d`
    pub edge_upper_bound: i64,
    /// `|E| ≥ (d−1)n(n−d²+1) / (2(d+1))`, from the inequality on `K̃` with `rk K̃ ≤ d²−1`
    pub edge_lower_bound: i64,
    pub lemma_k: LemmaRkReport,
    pub lemma_kt: LemmaRkReport,
    /// `rank_k ≤ d` and `rank_kt ≤ d² − 1`
    pub rank_bounds_hold: bool,
}

/// Edge bound implied by `(tr K)² ≤ d·tr(K²)`.
pub fn edge_upper_bound(n: usize, d: usize) -> i64 {
    let (n, d) = (n as i128, d as i128);
    (n * (d - 1)).div_euclid(2) as i64
}

/// Edge bound implied by `(tr K̃)² ≤ (d²−1)·tr(K̃²)`, clamped at zero.
pub fn edge_lower_bound(n: usize, d: usize) -> i64 {
    let (n, d) = (n as i128, d as i128);
    let num = (d - 1) * n * (n - d * d + 1);
    let den = 2 * (d + 1);
    let ceil = -((-num).div_euclid(den));
    ceil.max(0) as i64
}

pub(crate) struct GramMatrices {
    pub k: HermitianMatrix,
    pub kt: HermitianMatrix,
}

pub(crate) fn gram_matrices(sys: &UnitVectorSystem) -> Result<GramMatrices> {
    let k = gram(sys.vectors())?;
    let xs = sys.vectors().iter().map(projector_traceless).collect::<Result<Vec<_>>>()?;
    let mut hs_err = None;
    // ⟨X_j, X_k⟩_HS is real for Hermitian X_j, X_k; only the real part is kept.
    let kt = HermitianMatrix::from_upper_fn(xs.len(), |j, l| match hs_inner(&xs[j], &xs[l]) {
        Ok(z) => num_complex::Complex64::new(z.re, 0.0),
        Err(e) => {
            hs_err.get_or_insert(e);
            num_complex::Complex64::new(0.0, 0.0)
        }
    })?;
    if let Some(e) = hs_err {
        return Err(e);
    }
    Ok(GramMatrices { k, kt })
}

/// Builds the [`GramReport`] for a system whose pairs are all orthogonal or
/// unbiased at `tol`.
pub fn check_gram_identities(sys: &UnitVectorSystem, tol: f64) -> Result<GramReport> {
    let pc = classify_pairs(sys, tol)?;
    let summary = pc.summary();
    if summary.violation > 0 {
        return Err(Error::NotApplicable(format!("{} pair(s) are neither orthogonal nor unbiased", summary.violation)));
    }
    let matrices = gram_matrices(sys)?;
    gram_report(sys, summary.orthogonal, &matrices)
}

pub(crate) fn gram_report(sys: &UnitVectorSystem, edge_count: usize, m: &GramMatrices) -> Result<GramReport> {
    let n = sys.n();
    let d = sys.d();
    let nf = n as f64;
    let df = d as f64;
    let ef = edge_count as f64;

    let k_spectrum = hermitian_eigenvalues(&m.k, DEFAULT_EIGEN_TOL * m.k.max_abs().max(1.0))?;
    let kt_spectrum = hermitian_eigenvalues(&m.kt, DEFAULT_EIGEN_TOL * m.kt.max_abs().max(1.0))?;
    let rank_k = rank_of_spectrum(&k_spectrum.eigenvalues, DEFAULT_RANK_TOL);
    let rank_kt = rank_of_spectrum(&kt_spectrum.eigenvalues, DEFAULT_RANK_TOL);

    let sum_sq = |a: &HermitianMatrix| a.entries().iter().fold(0.0, |acc, z| acc + z.norm_sqr());

    let mut hs_identity_residual = 0.0f64;
    for j in 0..n {
        for l in 0..n {
            let via_overlap = m.k.get(j, l).norm_sqr() - 1.0 / df;
            hs_identity_residual = hs_identity_residual.max((m.kt.get(j, l).re - via_overlap).abs());
        }
    }

    Ok(GramReport {
        n,
        d,
        edge_count,
        trace_k: m.k.trace(),
        trace_k2: sum_sq(&m.k),
        trace_k2_formula: nf + nf * (nf - 1.0) / df - 2.0 * ef / df,
        rank_k,
        trace_kt: m.kt.trace(),
        trace_kt_expected: nf * (1.0 - 1.0 / df),
        trace_kt2: sum_sq(&m.kt),
        trace_kt2_expected: nf * (1.0 - 1.0 / df).powi(2) + 2.0 * ef / (df * df),
        rank_kt,
        kt_projection_residual: m.kt.square().max_abs_diff(&m.kt)?,
        hs_identity_residual,
        edge_upper_bound: edge_upper_bound(n, d),
        edge_lower_bound: edge_lower_bound(n, d),
        lemma_k: lemma_rk_of_spectrum(&m.k, &k_spectrum.eigenvalues, DEFAULT_RANK_TOL),
        lemma_kt: lemma_rk_of_spectrum(&m.kt, &kt_spectrum.eigenvalues, DEFAULT_RANK_TOL),
        rank_bounds_hold: rank_k <= d && rank_kt < d * d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete_mub;
    use crate::cxla::{CVector, HermitianMatrix};
    use crate::graph::DEFAULT_CLASSIFICATION_TOL;

    #[test]
    fn scaled_projection_attains_equality() {
        // 3 · diag(1, 1, 0, 0)
        let a = HermitianMatrix::diagonal(&[3.0, 3.0, 0.0, 0.0]).unwrap();
        let r = lemma_rk_check(&a, 1e-9).unwrap();
        assert_eq!(r.rank_r, 2);
        assert_eq!(r.lhs, 36.0);
        assert_eq!(r.rhs, 36.0);
        assert!(r.inequality_holds && r.equality_within_tol && r.is_projection_multiple);
        assert!((r.scalar - 3.0).abs() < 1e-12);
    }

    #[test]
    fn strict_inequality_for_distinct_eigenvalues() {
        let r = lemma_rk_check(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap(), 1e-9).unwrap();
        assert_eq!((r.lhs, r.rhs), (9.0, 10.0));
        assert!(r.inequality_holds && !r.equality_within_tol && !r.is_projection_multiple);
    }

    #[test]
    fn zero_matrix_is_the_trivial_equality_case() {
        let r = lemma_rk_check(&HermitianMatrix::zeros(3).unwrap(), 1e-9).unwrap();
        assert_eq!(r.rank_r, 0);
        assert!(r.equality_within_tol && r.is_projection_multiple);
        assert_eq!(r.scalar, 0.0);
    }

    #[test]
    fn bounds_meet_for_complete_systems() {
        for d in 1..=30usize {
            let n = d * (d + 1);
            let target = (d * (d * d - 1) / 2) as i64;
            assert_eq!(edge_upper_bound(n, d), target, "d={d}");
            assert_eq!(edge_lower_bound(n, d), target, "d={d}");
        }
        // Fewer vectors leave a gap between the bounds.
        assert_eq!(edge_lower_bound(4, 3), 0);
        assert_eq!(edge_upper_bound(4, 3), 4);
    }

    #[test]
    fn d3_report() {
        let sys = complete_mub(3).unwrap().flatten();
        let r = check_gram_identities(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert!((r.trace_k - 12.0).abs() < 1e-12);
        assert_eq!(r.edge_upper_bound, 12);
        assert_eq!(r.edge_lower_bound, 12);
        assert_eq!(r.edge_count, 12);
        assert_eq!(r.rank_k, 3);
        assert_eq!(r.rank_kt, 8);
        assert!(r.hs_identity_residual < 1e-14);
        assert!(r.lemma_k.equality_within_tol && r.lemma_kt.equality_within_tol);
    }

    #[test]
    fn d2_kt_trace() {
        let sys = complete_mub(2).unwrap().flatten();
        let r = check_gram_identities(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert!((r.trace_kt - 3.0).abs() < 1e-12);
        assert!((r.trace_k2 - 18.0).abs() < 1e-12);
    }

    #[test]
    fn d5_kt_is_a_rank_24_projection() {
        let sys = complete_mub(5).unwrap().flatten();
        let r = check_gram_identities(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert_eq!(r.rank_kt, 24);
        assert!(r.kt_projection_residual <= 1e-8);
    }

    #[test]
    fn violations_are_not_applicable() {
        let mut vs = crate::constructions::standard_basis(2).unwrap();
        vs.push(CVector::from_reals(&[0.6, 0.8]).unwrap());
        let sys = UnitVectorSystem::new(2, vs).unwrap();
        assert!(matches!(check_gram_identities(&sys, 1e-9), Err(Error::NotApplicable(_))));
    }
}
