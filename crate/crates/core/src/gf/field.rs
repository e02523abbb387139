use serde::{Deserialize, Serialize};

use super::is_prime;
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Largest field that [`FieldSpec::elements`] will enumerate.
pub const ENUMERATION_CAP: u64 = 1 << 16;

/// GF(p^k) presented as F_p[t]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u32,
    k: usize,
    /// Monic, degree `k`, lowest degree first.
    modulus: Vec<u32>,
}

/// An element of GF(p^k) in the polynomial basis `1, t, …, t^{k−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// `modulus` is given lowest degree first and must be monic and
    /// irreducible over F_p.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
        }
        let modulus = poly::trim(modulus);
        let k = match poly::degree(&modulus) {
            Some(k) if k >= 1 => k,
            _ => return Err(Error::InvalidInput("modulus must have degree at least 1".into())),
        };
        if modulus[k] != 1 {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidInput(format!("modulus coefficient {c} not reduced mod {p}")));
        }
        if !poly::is_irreducible(p, &modulus) {
            return Err(Error::InvalidInput(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Self { p, k, modulus })
    }

    /// GF(p) as F_p[t]/(t).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// The field of order `q` with the pinned default modulus: `t` for primes,
    /// the listed moduli for 4, 8, 9, 25, 27, and otherwise the smallest monic
    /// irreducible of degree `k`.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        let modulus = match (p, k) {
            (_, 1) => vec![0, 1],
            (2, 2) => vec![1, 1, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (3, 2) => vec![1, 0, 1],
            (5, 2) => vec![2, 0, 1],
            (3, 3) => vec![1, 2, 0, 1],
            _ => smallest_irreducible(p, k),
        };
        Self::new(p, modulus)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `p^k`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.k as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = c % self.p;
        FieldElement { coeffs }
    }

    /// The class of `t`.
    pub fn generator(&self) -> FieldElement {
        self.reduce_poly(&[0, 1])
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement> {
        if coeffs.len() != self.k {
            return Err(Error::InvalidInput(format!("expected {} coefficients, got {}", self.k, coeffs.len())));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidInput(format!("coefficient {c} not reduced mod {}", self.p)));
        }
        Ok(FieldElement { coeffs })
    }

    pub fn is_valid(&self, x: &FieldElement) -> bool {
        x.coeffs.len() == self.k && x.coeffs.iter().all(|&c| c < self.p)
    }

    /// Element whose coefficients are the base-p digits of `index`
    /// (constant coefficient least significant).
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let mut coeffs = vec![0; self.k];
        for c in coeffs.iter_mut() {
            *c = (index % self.p as u64) as u32;
            index /= self.p as u64;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub(crate) fn reduce_poly(&self, a: &[u32]) -> FieldElement {
        let r = poly::rem(self.p, a, &self.modulus);
        let mut coeffs = vec![0; self.k];
        coeffs[..r.len()].copy_from_slice(&r);
        FieldElement { coeffs }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let coeffs =
            x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| ((a as u64 + b as u64) % self.p as u64) as u32).collect();
        FieldElement { coeffs }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        let coeffs = x.coeffs.iter().map(|&a| if a == 0 { 0 } else { self.p - a }).collect();
        FieldElement { coeffs }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.reduce_poly(&poly::mul(self.p, &x.coeffs, &y.coeffs))
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let u = poly::inverse_mod(self.p, &x.coeffs, &self.modulus).expect("nonzero element of a field is invertible");
        Ok(self.reduce_poly(&u))
    }

    pub fn pow(&self, x: &FieldElement, exp: u64) -> FieldElement {
        self.reduce_poly(&poly::pow_mod(self.p, &x.coeffs, exp, &self.modulus))
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.p as u64)
    }

    /// Absolute trace `Σ_{i<k} x^{p^i}`, an element of F_p.
    pub fn trace(&self, x: &FieldElement) -> u32 {
        let mut acc = self.zero();
        let mut conj = x.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &conj);
            conj = self.frobenius(&conj);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left F_p: {acc:?}");
        acc.coeffs[0]
    }

    /// All `p^k` elements ordered by [`FieldSpec::index_of`], zero first.
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        match self.order() {
            Some(q) if q <= ENUMERATION_CAP => Ok((0..q).map(|i| self.from_index(i)).collect()),
            _ => Err(Error::InvalidInput(format!(
                "GF({}^{}) exceeds the enumeration cap of {ENUMERATION_CAP} elements",
                self.p, self.k
            ))),
        }
    }
}

/// Smallest monic irreducible of degree `k` over F_p, comparing coefficient
/// vectors from the highest degree down.
pub fn smallest_irreducible(p: u32, k: usize) -> Poly {
    poly::monic_of_degree(p, k)
        .find(|f| poly::is_irreducible(p, f))
        .expect("irreducible polynomials exist in every degree")
}

/// `(p, k)` with `q = p^k`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let p32 = u32::try_from(p).ok()?;
    if !is_prime(p32) {
        return None;
    }
    let mut k = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p32, k))
}
