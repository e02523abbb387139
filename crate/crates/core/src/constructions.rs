//! Generators for complete MUB systems, Weyl–Heisenberg SIC orbits, and the
//! zero-padding embedding of a SIC in ℂ^m into pairwise unbiased vectors in
//! ℂ^{m+1}.
//!
//! Nothing produced here is trusted downstream: every generated system is
//! meant to be run through [`crate::rigidity::verify`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cxla::{inner_unchecked, CVector, UNIT_NORM_TOL};
use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldSpec, GaloisRingSpec};

/// Dimensions for which [`complete_mub`] has a construction.
pub const SUPPORTED_MUB_DIMENSIONS: [usize; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

/// Tolerance used when checking that an input really is a SIC.
pub const SIC_TOL: f64 = 1e-9;

/// `n` unit vectors in ℂ^d, optionally labelled with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVectorSystem {
    d: usize,
    vectors: Vec<CVector>,
    labels: Option<Vec<String>>,
}

impl UnitVectorSystem {
    pub fn new(d: usize, vectors: Vec<CVector>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.dim() != d {
                return Err(Error::InvalidInput(format!("vector {j} has dimension {}, expected {d}", v.dim())));
            }
            if !v.is_unit(UNIT_NORM_TOL) {
                return Err(Error::InvalidInput(format!("vector {j} has norm {}", v.norm())));
            }
        }
        Ok(Self { d, vectors, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::InvalidInput(format!("{} labels for {} vectors", labels.len(), self.vectors.len())));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn into_parts(self) -> (usize, Vec<CVector>, Option<Vec<String>>) {
        (self.d, self.vectors, self.labels)
    }

    /// Concatenation; labels survive only if both sides carry them.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::InvalidInput(format!("cannot join systems in dimensions {} and {}", self.d, other.d)));
        }
        let vectors = self.vectors.iter().chain(&other.vectors).cloned().collect();
        let out = Self::new(self.d, vectors)?;
        match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => out.with_labels(a.iter().chain(b).cloned().collect()),
            _ => Ok(out),
        }
    }
}

/// `d + 1` orthonormal bases of ℂ^d, pairwise unbiased.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSystem {
    d: usize,
    bases: Vec<Vec<CVector>>,
}

/// Worst deviations of a basis family from orthonormality and unbiasedness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MubDeviation {
    /// max |⟨e, f⟩ − δ_{ef}| within a basis
    pub orthonormality: f64,
    /// max ||⟨e, f⟩|² − 1/d| across bases
    pub unbiasedness: f64,
}

impl MubSystem {
    /// Validates the MUB invariants at `tol`.
    pub fn new(d: usize, bases: Vec<Vec<CVector>>, tol: f64) -> Result<Self> {
        if bases.len() != d + 1 || bases.iter().any(|b| b.len() != d) {
            return Err(Error::InvalidInput(format!("expected {} bases of {d} vectors", d + 1)));
        }
        if bases.iter().flatten().any(|v| v.dim() != d) {
            return Err(Error::InvalidInput(format!("all vectors must lie in C^{d}")));
        }
        let system = Self { d, bases };
        let dev = system.deviation();
        if dev.orthonormality > tol || dev.unbiasedness > tol {
            return Err(Error::InvalidInput(format!("not a complete MUB system: {dev:?}")));
        }
        Ok(system)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[Vec<CVector>] {
        &self.bases
    }

    pub fn deviation(&self) -> MubDeviation {
        let inv_d = 1.0 / self.d as f64;
        let mut dev = MubDeviation { orthonormality: 0.0, unbiasedness: 0.0 };
        for (i, bi) in self.bases.iter().enumerate() {
            for (j, bj) in self.bases.iter().enumerate().skip(i) {
                for (x, u) in bi.iter().enumerate() {
                    for (y, v) in bj.iter().enumerate() {
                        let z = inner_unchecked(u.entries(), v.entries());
                        if i == j {
                            let target = if x == y { 1.0 } else { 0.0 };
                            dev.orthonormality = dev.orthonormality.max((z - target).norm());
                        } else {
                            dev.unbiasedness = dev.unbiasedness.max((z.norm_sqr() - inv_d).abs());
                        }
                    }
                }
            }
        }
        dev
    }

    /// All `d(d+1)` vectors, basis by basis, labelled `B<basis>.<vector>`.
    pub fn flatten(&self) -> UnitVectorSystem {
        let mut vectors = Vec::with_capacity(self.d * (self.d + 1));
        let mut labels = Vec::with_capacity(vectors.capacity());
        for (i, basis) in self.bases.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                vectors.push(v.clone());
                labels.push(format!("B{i}.{j}"));
            }
        }
        UnitVectorSystem::new(self.d, vectors)
            .and_then(|s| s.with_labels(labels))
            .expect("validated MUB system flattens to a valid unit system")
    }
}

pub fn standard_basis(d: usize) -> Result<Vec<CVector>> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    (0..d).map(|j| CVector::basis(d, j)).collect()
}

/// A complete system of `d + 1` MUBs for `d` in [`SUPPORTED_MUB_DIMENSIONS`].
///
/// * `d = 2`: eigenbases of the three Pauli matrices.
/// * odd `q = p^k`: the standard basis plus, for each `a ∈ GF(q)`, the basis
///   `v_{a,b}[x] = q^{-1/2} ω_p^{tr(a x² + b x)}` with `b, x ∈ GF(q)`.
/// * `q = 2^k`: the standard basis plus, for each Teichmüller `a` of
///   GR(4,k), the basis `v_{a,b}[x] = q^{-1/2} i^{tr((a + 2b) x)}` with
///   `b, x` Teichmüller.
pub fn complete_mub(d: usize) -> Result<MubSystem> {
    if !SUPPORTED_MUB_DIMENSIONS.contains(&d) {
        return Err(Error::Unsupported(format!(
            "no complete MUB construction for d = {d}; supported: {SUPPORTED_MUB_DIMENSIONS:?}"
        )));
    }
    let (p, k) = prime_power(d as u64).expect("supported dimensions are prime powers");
    let mut bases = vec![standard_basis(d)?];
    if d == 2 {
        bases.extend(pauli_eigenbases());
    } else if p == 2 {
        bases.extend(galois_ring_bases(k)?);
    } else {
        bases.extend(odd_field_bases(d as u64)?);
    }
    MubSystem::new(d, bases, UNIT_NORM_TOL)
}

fn pauli_eigenbases() -> [Vec<CVector>; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: Complex64, b: Complex64| CVector::new(vec![a * h, b * h]).expect("finite");
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [vec![v(one, one), v(one, -one)], vec![v(one, i), v(one, -i)]]
}

fn odd_field_bases(q: u64) -> Result<Vec<Vec<CVector>>> {
    let field = FieldSpec::with_order(q)?;
    let p = field.characteristic() as usize;
    let roots: Vec<Complex64> = (0..p).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64)).collect();
    let elements = field.elements()?;
    let amp = 1.0 / (q as f64).sqrt();
    // tr(a x² + b x) = tr(a x²) + tr(b x)
    let traces = |f: &dyn Fn(&crate::gf::FieldElement) -> crate::gf::FieldElement| -> Vec<Vec<u32>> {
        elements.iter().map(|a| elements.iter().map(|x| field.trace(&field.mul(a, &f(x)))).collect()).collect()
    };
    let quadratic = traces(&|x| field.mul(x, x));
    let linear = traces(&|x| x.clone());
    let mut bases = Vec::with_capacity(elements.len());
    for a in 0..elements.len() {
        let mut basis = Vec::with_capacity(elements.len());
        for b in 0..elements.len() {
            let entries = (0..elements.len())
                .map(|x| roots[(quadratic[a][x] as usize + linear[b][x] as usize) % p] * amp)
                .collect();
            basis.push(CVector::new(entries)?);
        }
        bases.push(basis);
    }
    Ok(bases)
}

fn galois_ring_bases(k: usize) -> Result<Vec<Vec<CVector>>> {
    let ring = GaloisRingSpec::with_degree(k)?;
    let teich = ring.teichmuller_set()?;
    let q = teich.len();
    let amp = 1.0 / (q as f64).sqrt();
    let powers_of_i =
        [Complex64::new(amp, 0.0), Complex64::new(0.0, amp), Complex64::new(-amp, 0.0), Complex64::new(0.0, -amp)];
    let mut bases = Vec::with_capacity(q);
    for a in &teich {
        let mut basis = Vec::with_capacity(q);
        for b in &teich {
            let shift = ring.add(a, &ring.double(b));
            let entries = teich.iter().map(|x| powers_of_i[ring.trace(&ring.mul(&shift, x)) as usize]).collect();
            basis.push(CVector::new(entries)?);
        }
        bases.push(basis);
    }
    Ok(bases)
}

/// The `m²` vectors `X^a Z^b f` for `a, b ∈ 0..m` (a outer), where
/// `(Xv)[x] = v[x − 1 mod m]` and `(Zv)[x] = ω_m^x v[x]`.
pub fn weyl_heisenberg_orbit(fiducial: &CVector) -> Result<UnitVectorSystem> {
    let m = fiducial.dim();
    if m < 2 {
        return Err(Error::InvalidInput("fiducial dimension must be at least 2".into()));
    }
    if !fiducial.is_unit(UNIT_NORM_TOL) {
        return Err(Error::InvalidInput(format!("fiducial has norm {}", fiducial.norm())));
    }
    let roots: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)).collect();
    let mut vectors = Vec::with_capacity(m * m);
    let mut labels = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let entries = (0..m)
                .map(|x| {
                    let y = (x + m - a) % m;
                    roots[(b * y) % m] * fiducial[y]
                })
                .collect();
            vectors.push(CVector::new(entries)?);
            labels.push(format!("X^{a}Z^{b}"));
        }
    }
    UnitVectorSystem::new(m, vectors)?.with_labels(labels)
}

/// Known SIC fiducials for `m ∈ {2, 3}`.
pub fn sic_fiducial(m: usize) -> Result<CVector> {
    match m {
        2 => {
            let s3 = 3f64.sqrt();
            let a = ((3.0 + s3) / 6.0).sqrt();
            let b = ((3.0 - s3) / 6.0).sqrt();
            CVector::new(vec![Complex64::new(a, 0.0), Complex64::from_polar(b, PI / 4.0)])
        }
        3 => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            CVector::from_reals(&[0.0, h, -h])
        }
        _ => Err(Error::Unsupported(format!("no SIC fiducial available for m = {m}"))),
    }
}

/// Appends a zero coordinate to each vector of a SIC in ℂ^m; the resulting
/// `m²` vectors in ℂ^{m+1} are pairwise unbiased.
pub fn sic_embed(sic: &UnitVectorSystem) -> Result<UnitVectorSystem> {
    let m = sic.d();
    if sic.n() != m * m {
        return Err(Error::InvalidInput(format!("a SIC in C^{m} has {} vectors, got {}", m * m, sic.n())));
    }
    let target = 1.0 / (m as f64 + 1.0);
    let vs = sic.vectors();
    for j in 0..vs.len() {
        for k in (j + 1)..vs.len() {
            let overlap = inner_unchecked(vs[j].entries(), vs[k].entries()).norm_sqr();
            if (overlap - target).abs() > SIC_TOL {
                return Err(Error::InvalidInput(format!(
                    "pair ({j}, {k}) has overlap {overlap}, a SIC needs {target}"
                )));
            }
        }
    }
    let vectors = vs
        .iter()
        .map(|v| {
            let mut entries = v.entries().to_vec();
            entries.push(Complex64::new(0.0, 0.0));
            CVector::new(entries)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = UnitVectorSystem::new(m + 1, vectors)?;
    match sic.labels() {
        Some(labels) => out.with_labels(labels.to_vec()),
        None => Ok(out),
    }
}
