//! The Galois ring GR(4,k) = ℤ₄[x]/(h), with `h` monic and irreducible mod 2.
//!
//! Every element has a unique 2-adic expansion `a + 2b` with `a`, `b` in the
//! Teichmüller set `T = {y : y^{2^k} = y}`. The Frobenius lift acts as
//! `φ(a + 2b) = a² + 2b²`.

use serde::{Deserialize, Serialize};

use super::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisRingSpec {
    k: usize,
    /// Monic, degree `k`, coefficients in ℤ₄, lowest degree first.
    modulus: Vec<u8>,
    residue: FieldSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElement {
    coeffs: Vec<u8>,
}

impl RingElement {
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }
}

impl GaloisRingSpec {
    pub fn new(modulus: Vec<u8>) -> Result<Self> {
        if modulus.iter().any(|&c| c >= 4) {
            return Err(Error::InvalidInput("Galois ring modulus coefficients must lie in 0..4".into()));
        }
        let k = modulus
            .len()
            .checked_sub(1)
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::InvalidInput("Galois ring modulus must have degree at least 1".into()))?;
        if modulus[k] != 1 {
            return Err(Error::InvalidInput("Galois ring modulus must be monic".into()));
        }
        let reduced = modulus.iter().map(|&c| (c % 2) as u32).collect();
        let residue = FieldSpec::new(2, reduced)
            .map_err(|_| Error::InvalidInput(format!("modulus {modulus:?} is not irreducible mod 2")))?;
        Ok(Self { k, modulus, residue })
    }

    /// GR(4,k) with the Hensel lift of the default GF(2^k) modulus. For
    /// `k = 1` the lift of `t + 1` is used so that `x` itself is a unit.
    pub fn with_degree(k: usize) -> Result<Self> {
        let base = match k {
            0 => return Err(Error::InvalidInput("Galois ring degree must be positive".into())),
            1 => vec![1, 1],
            _ => FieldSpec::with_order(
                1u64.checked_shl(k as u32)
                    .filter(|_| k < 63)
                    .ok_or_else(|| Error::InvalidInput(format!("Galois ring degree {k} too large")))?,
            )?
            .modulus()
            .to_vec(),
        };
        Self::new(graeffe_lift(&base))
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// GF(2^k) = GR(4,k)/(2).
    pub fn residue_field(&self) -> &FieldSpec {
        &self.residue
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coeffs: vec![0; self.k] }
    }

    pub fn one(&self) -> RingElement {
        let mut coeffs = vec![0; self.k];
        coeffs[0] = 1;
        RingElement { coeffs }
    }

    pub fn element(&self, coeffs: Vec<u8>) -> Result<RingElement> {
        if coeffs.len() != self.k || coeffs.iter().any(|&c| c >= 4) {
            return Err(Error::InvalidInput(format!("expected {} coefficients in 0..4, got {coeffs:?}", self.k)));
        }
        Ok(RingElement { coeffs })
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        RingElement { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % 4).collect() }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        RingElement { coeffs: x.coeffs.iter().map(|a| (4 - a) % 4).collect() }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add(x, &self.neg(y))
    }

    /// `2x`
    pub fn double(&self, x: &RingElement) -> RingElement {
        self.add(x, x)
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let k = self.k;
        let mut prod = vec![0u8; 2 * k - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % 4;
            }
        }
        // x^k ≡ −(h − x^k)
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                let idx = top - k + j;
                prod[idx] = (prod[idx] + 4 * 4 - c * m) % 4;
            }
        }
        prod.truncate(k);
        RingElement { coeffs: prod }
    }

    pub fn pow(&self, x: &RingElement, mut exp: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = x.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn reduce(&self, x: &RingElement) -> FieldElement {
        self.residue
            .element(x.coeffs.iter().map(|&c| (c % 2) as u32).collect())
            .expect("reduction mod 2 is a valid residue")
    }

    /// Lift with coefficients in {0, 1}.
    pub fn naive_lift(&self, a: &FieldElement) -> RingElement {
        RingElement { coeffs: a.coeffs().iter().map(|&c| c as u8).collect() }
    }

    /// The Teichmüller representative of `a`: `y^{2^k}` for any lift `y`.
    /// Squaring mod 4 depends only on the residue mod 2, so this is
    /// independent of the lift and satisfies `τ^{2^k} = τ`.
    pub fn teichmuller(&self, a: &FieldElement) -> RingElement {
        let mut y = self.naive_lift(a);
        for _ in 0..self.k {
            y = self.mul(&y, &y);
        }
        y
    }

    /// `(a, b)` with `x = a + 2b`, both Teichmüller.
    pub fn two_adic(&self, x: &RingElement) -> (RingElement, RingElement) {
        let a = self.teichmuller(&self.reduce(x));
        let diff = self.sub(x, &a);
        debug_assert!(diff.coeffs.iter().all(|c| c % 2 == 0));
        let half = RingElement { coeffs: diff.coeffs.iter().map(|c| c / 2).collect() };
        let b = self.teichmuller(&self.reduce(&half));
        (a, b)
    }

    /// Frobenius lift `φ(a + 2b) = a² + 2b²`.
    pub fn frobenius(&self, x: &RingElement) -> RingElement {
        let (a, b) = self.two_adic(x);
        self.add(&self.mul(&a, &a), &self.double(&self.mul(&b, &b)))
    }

    /// `Σ_{i<k} φ^i(x)`, an element of ℤ₄.
    pub fn trace(&self, x: &RingElement) -> u8 {
        let mut acc = self.zero();
        let mut conj = x.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &conj);
            conj = self.frobenius(&conj);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace left ℤ₄: {acc:?}");
        acc.coeffs[0]
    }

    /// The 2^k Teichmüller representatives, in the enumeration order of the
    /// residue field (so `0` first).
    pub fn teichmuller_set(&self) -> Result<Vec<RingElement>> {
        Ok(self.residue.elements()?.iter().map(|a| self.teichmuller(a)).collect())
    }
}

/// Graeffe lift of a binary polynomial `f = e + o` (even and odd parts):
/// `h(x²) = ±(e(x)² − o(x)²)` over ℤ₄, signed to be monic.
fn graeffe_lift(f: &[u32]) -> Vec<u8> {
    let k = f.len() - 1;
    let even: Vec<i64> = f.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { 0 }).collect();
    let odd: Vec<i64> = f.iter().enumerate().map(|(i, &c)| if i % 2 == 1 { c as i64 } else { 0 }).collect();
    let square = |a: &[i64]| {
        let mut out = vec![0i64; 2 * a.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in a.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let e2 = square(&even);
    let o2 = square(&odd);
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    (0..=k).map(|i| (sign * (e2[2 * i] - o2[2 * i])).rem_euclid(4) as u8).collect()
}
