//! Dense polynomials over F_p, coefficients stored low degree first.
//!
//! Every function returns trimmed polynomials (no trailing zero
//! coefficients); the zero polynomial is the empty vector.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

#[cfg(test)]
pub(crate) fn add(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) as u64;
            let y = b.get(i).copied().unwrap_or(0) as u64;
            ((x + y) % p as u64) as u32
        })
        .collect();
    trim(out)
}

pub(crate) fn sub(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) as u64;
            let y = b.get(i).copied().unwrap_or(0) as u64;
            ((x + p as u64 - y) % p as u64) as u32
        })
        .collect();
    trim(out)
}

pub(crate) fn mul(p: u32, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

pub(crate) fn scale(p: u32, a: &[u32], factor: u32) -> Poly {
    trim(a.iter().map(|&c| ((c as u64 * factor as u64) % p as u64) as u32).collect())
}

pub(crate) fn inv_mod_prime(p: u32, x: u32) -> u32 {
    debug_assert!(!x.is_multiple_of(p));
    pow_mod_prime(p, x, p as u64 - 2)
}

pub(crate) fn pow_mod_prime(p: u32, base: u32, mut exp: u64) -> u32 {
    let p = p as u64;
    let mut base = base as u64 % p;
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u32
}

/// Quotient and remainder of `a / b`; `b` must be nonzero.
pub(crate) fn div_rem(p: u32, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod_prime(p, b[db]) as u64;
    let mut rem: Vec<u64> = trim(a.to_vec()).into_iter().map(u64::from).collect();
    let pp = p as u64;
    if rem.len() <= db {
        return (Vec::new(), trim(rem.into_iter().map(|c| c as u32).collect()));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for i in (db..rem.len()).rev() {
        let coef = rem[i] % pp * lead_inv % pp;
        if coef == 0 {
            continue;
        }
        quot[i - db] = coef;
        for (j, &bj) in b[..=db].iter().enumerate() {
            let idx = i - db + j;
            rem[idx] = (rem[idx] + pp - coef * bj as u64 % pp) % pp;
        }
    }
    rem.truncate(db);
    (trim(quot.into_iter().map(|c| c as u32).collect()), trim(rem.into_iter().map(|c| c as u32).collect()))
}

pub(crate) fn rem(p: u32, a: &[u32], b: &[u32]) -> Poly {
    div_rem(p, a, b).1
}

pub(crate) fn monic(p: u32, a: &[u32]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(p, a, inv_mod_prime(p, a[d])),
    }
}

pub(crate) fn gcd(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(p, &x, &y);
        x = y;
        y = r;
    }
    monic(p, &x)
}

/// `u` with `u·a ≡ 1 (mod m)`, or `None` when `gcd(a, m) ≠ 1`.
pub(crate) fn inverse_mod(p: u32, a: &[u32], m: &[u32]) -> Option<Poly> {
    let (mut r0, mut r1) = (trim(m.to_vec()), rem(p, a, m));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = div_rem(p, &r0, &r1);
        let s = sub(p, &s0, &mul(p, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod_prime(p, r0[0]);
    Some(rem(p, &scale(p, &s0, c), m))
}

pub(crate) fn mul_mod(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Poly {
    rem(p, &mul(p, a, b), m)
}

pub(crate) fn pow_mod(p: u32, base: &[u32], mut exp: u64, m: &[u32]) -> Poly {
    let mut acc = rem(p, &[1], m);
    let mut base = rem(p, base, m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(p, &acc, &base, m);
        }
        base = mul_mod(p, &base, &base, m);
        exp >>= 1;
    }
    acc
}

/// Monic polynomials of the given degree, in increasing order of their
/// coefficient vector read from the highest degree down.
pub(crate) fn monic_of_degree(p: u32, deg: usize) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut idx| {
        let mut coeffs = vec![0u32; deg + 1];
        coeffs[deg] = 1;
        for c in coeffs.iter_mut().take(deg) {
            *c = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        coeffs
    })
}

/// Largest search space for exhaustive trial division before switching to
/// Rabin's test.
const TRIAL_DIVISION_CAP: u64 = 1 << 20;

/// Irreducibility over F_p: exhaustive trial division by every monic divisor
/// candidate for degree ≤ 4 (when that search is small), Rabin's test otherwise.
pub(crate) fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let Some(k) = degree(f) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let search = (p as u64).checked_pow((k / 2) as u32).unwrap_or(u64::MAX);
    if k <= 4 && search <= TRIAL_DIVISION_CAP {
        is_irreducible_trial(p, f, k)
    } else {
        is_irreducible_rabin(p, f, k)
    }
}

fn is_irreducible_trial(p: u32, f: &[u32], k: usize) -> bool {
    (1..=k / 2).all(|deg| monic_of_degree(p, deg).all(|g| !rem(p, f, &g).is_empty()))
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `x^{p^i} mod f` by `i` successive p-th powers.
fn frobenius_iterate(p: u32, f: &[u32], i: usize) -> Poly {
    let mut x = rem(p, &[0, 1], f);
    for _ in 0..i {
        x = pow_mod(p, &x, p as u64, f);
    }
    x
}

fn is_irreducible_rabin(p: u32, f: &[u32], k: usize) -> bool {
    let f = monic(p, f);
    let x = rem(p, &[0, 1], &f);
    if frobenius_iterate(p, &f, k) != x {
        return false;
    }
    prime_factors(k).into_iter().all(|r| {
        let h = sub(p, &frobenius_iterate(p, &f, k / r), &x);
        degree(&gcd(p, &h, &f)) == Some(0)
    })
}
