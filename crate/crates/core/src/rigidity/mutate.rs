//! Seeded transformations of vector systems. Equal seeds give equal outputs.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

use crate::constructions::UnitVectorSystem;
use crate::cxla::CVector;
use crate::error::{Error, Result};

fn gaussian(rng: &mut SplitMix64) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_unit_vector_with(rng: &mut SplitMix64, d: usize) -> Result<CVector> {
    loop {
        let v = CVector::new((0..d).map(|_| gaussian(rng)).collect())?;
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

/// Haar-random unit vector in ℂ^d.
pub fn random_unit_vector(d: usize, seed: u64) -> Result<CVector> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    random_unit_vector_with(&mut SplitMix64::seed_from_u64(seed), d)
}

/// Haar-random unitary as its list of columns: Gram–Schmidt on a complex
/// Gaussian matrix, i.e. the QR factor with positive diagonal in `R`.
pub fn random_unitary(d: usize, seed: u64) -> Result<Vec<CVector>> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| gaussian(&mut rng)).collect();
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    cols.into_iter().map(CVector::new).collect()
}

fn apply(cols: &[CVector], b: &CVector) -> Result<CVector> {
    let d = cols.len();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for (c, &bj) in cols.iter().zip(b.entries()) {
        for (o, u) in out.iter_mut().zip(c.entries()) {
            *o += u * bj;
        }
    }
    CVector::new(out)?.normalized()
}

fn rebuild(sys: &UnitVectorSystem, vectors: Vec<CVector>, labels: Option<Vec<String>>) -> Result<UnitVectorSystem> {
    let out = UnitVectorSystem::new(sys.d(), vectors)?;
    match labels {
        Some(l) => out.with_labels(l),
        None => Ok(out),
    }
}

fn check_index(sys: &UnitVectorSystem, index: usize) -> Result<()> {
    if index >= sys.n() {
        return Err(Error::InvalidInput(format!("index {index} out of range for {} vectors", sys.n())));
    }
    Ok(())
}

/// Uniform permutation of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut SplitMix64::seed_from_u64(seed));
    perm
}

/// Reorders the vectors: position `i` receives old vector
/// `random_permutation(n, seed)[i]`. Labels travel with their vectors.
pub fn mutate_permute(sys: &UnitVectorSystem, seed: u64) -> Result<UnitVectorSystem> {
    let perm = random_permutation(sys.n(), seed);
    let vectors = perm.iter().map(|&i| sys.vectors()[i].clone()).collect();
    let labels = sys.labels().map(|l| perm.iter().map(|&i| l[i].clone()).collect());
    rebuild(sys, vectors, labels)
}

/// Applies one Haar-random unitary to every vector.
pub fn mutate_unitary(sys: &UnitVectorSystem, seed: u64) -> Result<UnitVectorSystem> {
    let u = random_unitary(sys.d(), seed)?;
    let vectors = sys.vectors().iter().map(|b| apply(&u, b)).collect::<Result<_>>()?;
    rebuild(sys, vectors, sys.labels().map(<[String]>::to_vec))
}

/// Multiplies each vector by an independent uniform phase.
pub fn mutate_rephase(sys: &UnitVectorSystem, seed: u64) -> Result<UnitVectorSystem> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let vectors = sys
        .vectors()
        .iter()
        .map(|b| b.scale(Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))))
        .collect();
    rebuild(sys, vectors, sys.labels().map(<[String]>::to_vec))
}

/// Removes the vector at `index`.
pub fn mutate_drop(sys: &UnitVectorSystem, index: usize) -> Result<UnitVectorSystem> {
    check_index(sys, index)?;
    let mut vectors = sys.vectors().to_vec();
    vectors.remove(index);
    let labels = sys.labels().map(|l| {
        let mut l = l.to_vec();
        l.remove(index);
        l
    });
    rebuild(sys, vectors, labels)
}

/// Replaces the vector at `index` by a Haar-random unit vector.
pub fn mutate_replace(sys: &UnitVectorSystem, index: usize, seed: u64) -> Result<UnitVectorSystem> {
    check_index(sys, index)?;
    let mut vectors = sys.vectors().to_vec();
    vectors[index] = random_unit_vector(sys.d(), seed)?;
    let labels = sys.labels().map(|l| {
        let mut l = l.to_vec();
        l[index] = "random".into();
        l
    });
    rebuild(sys, vectors, labels)
}
