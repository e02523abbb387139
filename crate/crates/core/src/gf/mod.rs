//! Finite fields GF(p^k) and Galois rings GR(4,k).
//!
//! Elements are plain coefficient vectors; the field or ring is always passed
//! explicitly as context.

mod field;
mod poly;
mod ring;

pub use field::{prime_power, smallest_irreducible, FieldElement, FieldSpec, ENUMERATION_CAP};
pub use ring::{GaloisRingSpec, RingElement};

/// Trial-division primality for `p < 2^31`.
pub fn is_prime(p: u32) -> bool {
    if !(2..1 << 31).contains(&p) {
        return false;
    }
    let p = p as u64;
    (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
