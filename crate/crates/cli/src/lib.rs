//! File formats and subcommand bodies for `mubcheck`.
//!
//! Vector systems are stored as `mvs-1` JSON and certificates as `cert-1`
//! JSON. Every real is written with 17 significant digits, which is enough
//! for the parse to reproduce the same `f64` bit pattern.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use mub_core::constructions::{complete_mub, sic_embed, sic_fiducial, weyl_heisenberg_orbit, UnitVectorSystem};
use mub_core::cxla::CVector;
use mub_core::rigidity::{self, RigidityCertificate, Verdict};
use mub_core::Error;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SYSTEM_FORMAT: &str = "mvs-1";
pub const CERTIFICATE_FORMAT: &str = "cert-1";
pub const DEFAULT_TOL: f64 = 1e-9;

/// Process exit codes.
pub mod exit {
    pub const COMPLETE: u8 = 0;
    pub const NOT_APPLICABLE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CONTRADICTION: u8 = 3;
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: exit::USAGE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotApplicable(_) | Error::StructureMismatch { .. } => exit::NOT_APPLICABLE,
            Error::InvalidInput(_) | Error::NumericalFailure { .. } | Error::Unsupported(_) => exit::USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSystemFile {
    pub format_version: String,
    pub d: usize,
    pub n: usize,
    /// `n` rows of `d` `[re, im]` pairs.
    pub vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl VectorSystemFile {
    pub fn from_system(sys: &UnitVectorSystem) -> Self {
        Self {
            format_version: SYSTEM_FORMAT.into(),
            d: sys.d(),
            n: sys.n(),
            vectors: sys.vectors().iter().map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect()).collect(),
            labels: sys.labels().map(<[String]>::to_vec),
        }
    }

    pub fn into_system(self) -> Result<UnitVectorSystem, CliError> {
        if self.format_version != SYSTEM_FORMAT {
            return Err(CliError::usage(format!(
                "unsupported format_version {:?}, expected {SYSTEM_FORMAT:?}",
                self.format_version
            )));
        }
        if self.n != self.vectors.len() {
            return Err(CliError::usage(format!("n = {} but {} vectors given", self.n, self.vectors.len())));
        }
        if let Some(i) = self.vectors.iter().position(|row| row.len() != self.d) {
            return Err(CliError::usage(format!("vector {i} has {} entries, d = {}", self.vectors[i].len(), self.d)));
        }
        let vectors = self
            .vectors
            .into_iter()
            .map(|row| CVector::new(row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let sys = UnitVectorSystem::new(self.d, vectors)?;
        Ok(match self.labels {
            Some(labels) => sys.with_labels(labels)?,
            None => sys,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub format_version: String,
    pub certificate: RigidityCertificate,
}

/// Compact JSON whose floats carry 17 significant digits.
struct RoundTripFormatter;

impl serde_json::ser::Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTripFormatter);
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn system_to_json(sys: &UnitVectorSystem) -> String {
    to_json(&VectorSystemFile::from_system(sys))
}

pub fn parse_system(text: &str) -> Result<UnitVectorSystem, CliError> {
    let file: VectorSystemFile =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("malformed vector system: {e}")))?;
    file.into_system()
}

pub fn certificate_to_json(cert: &RigidityCertificate) -> String {
    to_json(&CertificateFile { format_version: CERTIFICATE_FORMAT.into(), certificate: cert.clone() })
}

pub fn parse_certificate(text: &str) -> Result<RigidityCertificate, CliError> {
    let file: CertificateFile =
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("malformed certificate: {e}")))?;
    if file.format_version != CERTIFICATE_FORMAT {
        return Err(CliError::usage(format!("unsupported format_version {:?}", file.format_version)));
    }
    Ok(file.certificate)
}

pub fn read_system(path: &Path) -> Result<UnitVectorSystem, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_system(&text)
}

pub fn write_system(path: &Path, sys: &UnitVectorSystem) -> Result<(), CliError> {
    fs::write(path, system_to_json(sys)).map_err(|e| io_error(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Mub,
    SicEmbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Permute,
    Unitary,
    Rephase,
    Drop,
    Replace,
}

/// The system `generate` writes. `SicEmbed` with `dim = m + 1` embeds the
/// Weyl–Heisenberg SIC of ℂ^m.
pub fn generate(dim: usize, kind: Kind) -> Result<UnitVectorSystem, CliError> {
    match kind {
        Kind::Mub => Ok(complete_mub(dim)?.flatten()),
        Kind::SicEmbed => {
            let m = dim
                .checked_sub(1)
                .filter(|&m| m >= 2)
                .ok_or_else(|| CliError::usage(format!("sic-embed needs dimension at least 3, got {dim}")))?;
            Ok(sic_embed(&weyl_heisenberg_orbit(&sic_fiducial(m)?)?)?)
        }
    }
}

pub fn cmd_generate(dim: usize, out: &Path, kind: Kind) -> Result<String, CliError> {
    let sys = generate(dim, kind)?;
    write_system(out, &sys)?;
    Ok(format!("wrote d={} n={} to {}", sys.d(), sys.n(), out.display()))
}

/// One-line summary of a certificate.
pub fn summary_line(c: &RigidityCertificate) -> String {
    let passed = c.stages.iter().filter(|s| s.passed).count();
    let mut line = format!("verdict={} d={} n={} stages={passed}/{}", c.verdict, c.d, c.n, c.stages.len());
    if let Some(e) = c.edge_count {
        line.push_str(&format!(" edges={e}"));
    }
    if let Some(t) = c.ordered_triangles {
        line.push_str(&format!(" triangles={t}"));
    }
    if let Some(stage) = c.failure_stage {
        line.push_str(&format!(" stage={}", stage.failure_tag()));
        if let Some(record) = c.stages.iter().find(|s| s.stage == stage) {
            line.push_str(&format!(" detail={:?}", record.detail));
        }
    }
    line
}

pub fn exit_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::CompleteMub => exit::COMPLETE,
        Verdict::NotApplicable => exit::NOT_APPLICABLE,
        Verdict::Contradiction => exit::CONTRADICTION,
    }
}

pub struct VerifyOutcome {
    pub certificate: RigidityCertificate,
    pub line: String,
    pub code: u8,
}

pub fn cmd_verify(input: &Path, tol: f64, report: Option<&Path>) -> Result<VerifyOutcome, CliError> {
    let sys = read_system(input)?;
    let certificate = rigidity::verify(&sys, tol)?;
    if let Some(path) = report {
        fs::write(path, certificate_to_json(&certificate)).map_err(|e| io_error(path, e))?;
    }
    Ok(VerifyOutcome { line: summary_line(&certificate), code: exit_code(certificate.verdict), certificate })
}

pub fn perturb(sys: &UnitVectorSystem, op: Op, seed: u64, index: Option<usize>) -> Result<UnitVectorSystem, CliError> {
    let need_index = || index.ok_or_else(|| CliError::usage("--index is required for drop and replace"));
    Ok(match op {
        Op::Permute => rigidity::mutate_permute(sys, seed)?,
        Op::Unitary => rigidity::mutate_unitary(sys, seed)?,
        Op::Rephase => rigidity::mutate_rephase(sys, seed)?,
        Op::Drop => rigidity::mutate_drop(sys, need_index()?)?,
        Op::Replace => rigidity::mutate_replace(sys, need_index()?, seed)?,
    })
}

pub fn cmd_perturb(input: &Path, op: Op, seed: u64, index: Option<usize>, out: &Path) -> Result<String, CliError> {
    let sys = read_system(input)?;
    let mutated = perturb(&sys, op, seed, index)?;
    write_system(out, &mutated)?;
    Ok(format!("wrote d={} n={} to {}", mutated.d(), mutated.n(), out.display()))
}
