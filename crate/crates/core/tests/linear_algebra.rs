use mub_core::constructions::complete_mub;
use mub_core::cxla::{
    gram, hermitian_eigen, hermitian_eigenvalues, hs_inner, inner, is_projection_multiple, numerical_rank,
    projector_traceless, CVector, HermitianMatrix,
};
use mub_core::Error;
use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(size: usize, seed: u64) -> HermitianMatrix {
    let mut rng = SplitMix64::seed_from_u64(seed);
    HermitianMatrix::from_upper_fn(size, |j, k| {
        if j == k {
            c(rng.random_range(-1.0..1.0), 0.0)
        } else {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }
    })
    .unwrap()
}

fn random_unit(d: usize, seed: u64) -> CVector {
    let mut rng = SplitMix64::seed_from_u64(seed);
    CVector::new((0..d).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .unwrap()
        .normalized()
        .unwrap()
}

/// Eigenvalues from nalgebra's Hermitian solver, descending.
fn oracle_eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.size();
    let dm = DMatrix::from_fn(n, n, |j, k| {
        let z = m.get(j, k);
        Complex::new(z.re, z.im)
    });
    let mut vals: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

fn overlap(u: &CVector, v: &CVector) -> f64 {
    u.entries().iter().zip(v.entries()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
}

fn vector(d: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d)
        .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a * a + b * b > 1e-6))
        .prop_map(|v| CVector::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn traceless_projector_identity(d in 1usize..=16, s1: u64, s2: u64) {
        let (u, v) = (random_unit(d, s1), random_unit(d, s2));
        let (xu, xv) = (projector_traceless(&u).unwrap(), projector_traceless(&v).unwrap());
        prop_assert!(xu.trace().abs() <= 1e-12);
        let hs = hs_inner(&xu, &xv).unwrap();
        prop_assert!((hs.re - (overlap(&u, &v) - 1.0 / d as f64)).abs() <= 1e-12);
        prop_assert!(hs.im.abs() <= 1e-12);
    }
}

proptest! {
    #[test]
    fn inner_is_conjugate_symmetric((u, v) in (1usize..=16).prop_flat_map(|d| (vector(d), vector(d)))) {
        let uv = inner(&u, &v).unwrap();
        let vu = inner(&v, &u).unwrap();
        prop_assert!((uv - vu.conj()).norm() <= 1e-14);
    }

    #[test]
    fn gram_is_positive_semidefinite(d in 1usize..=6, n in 1usize..=12, seed: u64) {
        let vs: Vec<_> = (0..n).map(|i| random_unit(d, seed.wrapping_add(i as u64))).collect();
        let k = gram(&vs).unwrap();
        let spectrum = hermitian_eigenvalues(&k, 1e-8 * n as f64).unwrap();
        prop_assert!(spectrum.eigenvalues.iter().all(|&l| l >= -1e-10 * n as f64));
        prop_assert!((k.trace() - n as f64).abs() <= 1e-12 * n as f64);
        prop_assert!(spectrum.eigenvalues.iter().filter(|&&l| l > 1e-8 * n as f64).count() <= d);
    }

    #[test]
    fn eigen_decomposition_reconstructs(size in 1usize..=40, seed: u64) {
        check_reconstruction(size, seed)?;
    }

    #[test]
    fn eigenvalues_agree_with_reference_solver(size in 1usize..=30, seed: u64) {
        let m = random_hermitian(size, seed);
        let ours = hermitian_eigenvalues(&m, 1e-8 * size as f64).unwrap().eigenvalues;
        let reference = oracle_eigenvalues(&m);
        for (a, b) in ours.iter().zip(&reference) {
            prop_assert!((a - b).abs() <= 1e-10 * size as f64, "{} vs {}", a, b);
        }
    }

    #[test]
    fn eigenvalue_sum_is_trace(size in 1usize..=30, seed: u64) {
        let m = random_hermitian(size, seed);
        let s: f64 = hermitian_eigenvalues(&m, 1e-8 * size as f64).unwrap().eigenvalues.iter().sum();
        prop_assert!((s - m.trace()).abs() <= 1e-8 * size as f64 * m.max_abs());
    }

    #[test]
    fn projection_rank_is_trace(d in 1usize..=12, seed: u64) {
        let u = mub_core::rigidity::random_unitary(d, seed).unwrap();
        let k = (seed % (d as u64 + 1)) as usize;
        let p = HermitianMatrix::from_upper_fn(d, |j, l| {
            u[..k].iter().map(|col| col[j] * col[l].conj()).sum()
        }).unwrap();
        prop_assert_eq!(numerical_rank(&p, 1e-8).unwrap(), k);
        prop_assert!((p.trace() - k as f64).abs() <= 1e-12 * d as f64);
        prop_assert!(is_projection_multiple(&p, 1e-8).unwrap().is_multiple);
    }
}

fn check_reconstruction(size: usize, seed: u64) -> Result<(), TestCaseError> {
    let m = random_hermitian(size, seed);
    let e = hermitian_eigen(&m, 1e-8 * size as f64).unwrap();
    let bound = 1e-8 * size as f64 * m.max_abs().max(f64::MIN_POSITIVE);
    for j in 0..size {
        for k in 0..size {
            let r: Complex64 = e.eigenvalues.iter().zip(&e.eigenvectors).map(|(l, v)| v[j] * v[k].conj() * *l).sum();
            prop_assert!((r - m.get(j, k)).norm() <= bound);
            let o: Complex64 = (0..size).map(|x| e.eigenvectors[j][x].conj() * e.eigenvectors[k][x]).sum();
            let delta = if j == k { 1.0 } else { 0.0 };
            prop_assert!((o - delta).norm() <= 1e-10);
        }
    }
    Ok(())
}

#[test]
fn eigen_reconstruction_up_to_size_120() {
    for (i, size) in [60usize, 90, 120].into_iter().enumerate() {
        check_reconstruction(size, 1000 + i as u64).unwrap();
    }
}

#[test]
fn eigen_residual_tolerance_is_enforced() {
    let m = random_hermitian(8, 3);
    assert!(matches!(hermitian_eigen(&m, -1.0), Err(Error::NumericalFailure { .. })));
}

#[test]
fn complete_d2_gram() {
    let sys = complete_mub(2).unwrap().flatten();
    let k = gram(sys.vectors()).unwrap();
    assert!((k.trace() - 6.0).abs() < 1e-15);
    // 6 diagonal ones, 3 orthogonal pairs, 12 unbiased pairs at 1/2 (both orders).
    let direct: f64 = k.entries().iter().map(|z| z.norm_sqr()).sum();
    assert!((direct - (6.0 + 24.0 * 0.5)).abs() < 1e-12);
    assert!((k.square().trace() - direct).abs() < 1e-12);
    assert_eq!(numerical_rank(&k, 1e-8).unwrap(), 2);
}

#[test]
fn traceless_projector_inner_products() {
    let sys = complete_mub(3).unwrap().flatten();
    let xs: Vec<_> = sys.vectors().iter().map(|b| projector_traceless(b).unwrap()).collect();
    let diag = hs_inner(&xs[0], &xs[0]).unwrap();
    assert!((diag.re - 2.0 / 3.0).abs() < 1e-14);
    // Vectors 0 and 1 belong to the same basis.
    let orth = hs_inner(&xs[0], &xs[1]).unwrap();
    assert!((orth.re + 1.0 / 3.0).abs() < 1e-14);
    let kt = HermitianMatrix::from_upper_fn(12, |j, k| hs_inner(&xs[j], &xs[k]).unwrap()).unwrap();
    assert_eq!(numerical_rank(&kt, 1e-8).unwrap(), 8);
}

#[test]
fn projection_multiple_detection() {
    let p = HermitianMatrix::diagonal(&[2.5, 0.0, 2.5]).unwrap();
    let r = is_projection_multiple(&p, 1e-9).unwrap();
    assert!(r.is_multiple);
    assert!((r.scalar - 2.5).abs() < 1e-12);
    assert!(!is_projection_multiple(&HermitianMatrix::diagonal(&[1.0, 2.0]).unwrap(), 1e-9).unwrap().is_multiple);
    assert!(is_projection_multiple(&HermitianMatrix::zeros(2).unwrap(), 1e-9).unwrap().is_multiple);
}

#[test]
fn projector_requires_unit_vector() {
    let v = CVector::from_reals(&[1.0, 1.0]).unwrap();
    assert!(projector_traceless(&v).is_err());
}
