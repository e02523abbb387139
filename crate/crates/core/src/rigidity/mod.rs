//! Certificate that a system of `d(d+1)` pairwise orthogonal-or-unbiased unit
//! vectors in ℂ^d is a complete set of mutually unbiased bases.
//!
//! The first two stages test the hypothesis and end in
//! [`Verdict::NotApplicable`] on failure. Once the hypothesis holds every
//! later stage is evaluated and recorded; the first failing one is reported
//! as the [`RigidityCertificate::failure_stage`] of a
//! [`Verdict::Contradiction`].

mod gram;
mod mutate;

pub use gram::{
    check_gram_identities, edge_lower_bound, edge_upper_bound, lemma_rk_check, GramReport, LemmaRkReport,
    HS_IDENTITY_TOL, INEQUALITY_SLACK,
};
pub use mutate::{
    mutate_drop, mutate_permute, mutate_rephase, mutate_replace, mutate_unitary, random_permutation,
    random_unit_vector, random_unitary,
};

use serde::{Deserialize, Serialize};

use crate::constructions::{MubSystem, UnitVectorSystem};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, classify_pairs, cluster_spectrum, ClassificationSummary, SpectralCluster, SPECTRAL_CLUSTER_GAP,
};

/// Largest admissible `|λ − target|` for the adjacency spectrum.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Largest admissible `|Σλ³ − t|` for the ordered triangle count `t`.
pub const TRIANGLE_TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CompleteMub,
    NotApplicable,
    Contradiction,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CompleteMub => "CompleteMub",
            Verdict::NotApplicable => "NotApplicable",
            Verdict::Contradiction => "Contradiction",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Count,
    Classification,
    GramIdentities,
    EdgeCount,
    Regularity,
    Spectrum,
    Triangles,
    CliquePartition,
    Revalidation,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Count,
        Stage::Classification,
        Stage::GramIdentities,
        Stage::EdgeCount,
        Stage::Regularity,
        Stage::Spectrum,
        Stage::Triangles,
        Stage::CliquePartition,
        Stage::Revalidation,
    ];

    /// Tag reported when this stage fails.
    pub fn failure_tag(self) -> &'static str {
        match self {
            Stage::Count => "n-mismatch",
            Stage::Classification => "pair-violation",
            Stage::GramIdentities => "gram-identities",
            Stage::EdgeCount => "edge-count",
            Stage::Regularity => "regularity",
            Stage::Spectrum => "spectrum",
            Stage::Triangles => "triangles",
            Stage::CliquePartition => "clique-partition",
            Stage::Revalidation => "revalidation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Revalidation {
    /// max |⟨e, f⟩ − δ_{ef}| within each part
    pub orthonormality: f64,
    /// max ||⟨e, f⟩|² − 1/d| across parts
    pub unbiasedness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub d: usize,
    pub n: usize,
    pub tol: f64,
    pub verdict: Verdict,
    pub failure_stage: Option<Stage>,
    pub stages: Vec<StageRecord>,
    pub classification_summary: Option<ClassificationSummary>,
    pub gram: Option<GramReport>,
    pub edge_count: Option<usize>,
    pub expected_edge_count: usize,
    /// Common degree when the graph is regular
    pub regular_degree: Option<usize>,
    /// `⟨1, A1⟩`
    pub sum_a_entries: Option<usize>,
    pub expected_sum_a_entries: usize,
    pub spectrum: Option<Vec<SpectralCluster>>,
    pub spectrum_max_error: Option<f64>,
    pub ordered_triangles: Option<u64>,
    pub expected_ordered_triangles: u64,
    /// `Σ λ³` over the adjacency spectrum
    pub spectral_triangle_trace: Option<f64>,
    pub partition: Option<Vec<Vec<usize>>>,
    pub revalidation: Option<Revalidation>,
}

impl RigidityCertificate {
    pub fn failure_tag(&self) -> Option<&'static str> {
        self.failure_stage.map(Stage::failure_tag)
    }
}

/// `d(d²−1)/2`
pub fn expected_edge_count(d: usize) -> usize {
    d * (d * d).saturating_sub(1) / 2
}

/// `(d²−1)·d·(d−2)`, zero for `d < 2`.
pub fn expected_ordered_triangles(d: usize) -> u64 {
    let d = d as u64;
    if d < 2 {
        return 0;
    }
    (d * d - 1) * d * (d - 2)
}

/// Target adjacency spectrum `{d−1 (×(d+1)), −1 (×(d²−1))}`, descending.
pub fn expected_spectrum(d: usize) -> Vec<SpectralCluster> {
    let mut out = vec![SpectralCluster { value: d as f64 - 1.0, multiplicity: d + 1 }];
    if d >= 2 {
        out.push(SpectralCluster { value: -1.0, multiplicity: d * d - 1 });
    }
    out
}

struct Log {
    stages: Vec<StageRecord>,
}

impl Log {
    fn record(&mut self, stage: Stage, passed: bool, detail: String) -> bool {
        self.stages.push(StageRecord { stage, passed, detail });
        passed
    }

    fn first_failure(&self) -> Option<Stage> {
        self.stages.iter().find(|r| !r.passed).map(|r| r.stage)
    }
}

fn in_context<T>(stage: Stage, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::NumericalFailure { context, residual } => {
            Error::NumericalFailure { context: format!("stage {}: {context}", stage.failure_tag()), residual }
        }
        other => other,
    })
}

/// Runs the certificate pipeline at classification tolerance `tol`.
///
/// Errors are reserved for invalid arguments and eigen-solver failures;
/// every outcome about the system itself is a verdict.
pub fn verify(sys: &UnitVectorSystem, tol: f64) -> Result<RigidityCertificate> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance must be positive and finite, got {tol}")));
    }
    let d = sys.d();
    let n = sys.n();
    let mut cert = RigidityCertificate {
        d,
        n,
        tol,
        verdict: Verdict::NotApplicable,
        failure_stage: None,
        stages: Vec::new(),
        classification_summary: None,
        gram: None,
        edge_count: None,
        expected_edge_count: expected_edge_count(d),
        regular_degree: None,
        sum_a_entries: None,
        expected_sum_a_entries: 2 * expected_edge_count(d),
        spectrum: None,
        spectrum_max_error: None,
        ordered_triangles: None,
        expected_ordered_triangles: expected_ordered_triangles(d),
        spectral_triangle_trace: None,
        partition: None,
        revalidation: None,
    };
    let mut log = Log { stages: Vec::new() };

    // Stage 1: cardinality.
    let target_n = d * (d + 1);
    if !log.record(Stage::Count, n == target_n, format!("n = {n}, d(d+1) = {target_n}")) {
        return Ok(finish(cert, log, Verdict::NotApplicable));
    }

    // Stage 2: every pair orthogonal or unbiased.
    let pc = classify_pairs(sys, tol)?;
    let summary = pc.summary();
    cert.classification_summary = Some(summary);
    let detail = match pc.violations().first() {
        None => format!("{} orthogonal, {} unbiased", summary.orthogonal, summary.unbiased),
        Some(&(j, k)) => {
            format!("{} violating pair(s), first ({j}, {k}) with overlap {:.6e}", summary.violation, pc.overlap(j, k))
        }
    };
    if !log.record(Stage::Classification, summary.violation == 0, detail) {
        return Ok(finish(cert, log, Verdict::NotApplicable));
    }
    let graph = build_graph(&pc)?;
    let nf = n as f64;
    let identity_tol = tol * nf * nf;

    // Stage 3: trace identities and rank bounds for K and K̃.
    let matrices = in_context(Stage::GramIdentities, gram::gram_matrices(sys))?;
    let g = in_context(Stage::GramIdentities, gram::gram_report(sys, summary.orthogonal, &matrices))?;
    drop(matrices);
    let mut problems = Vec::new();
    if (g.trace_k - nf).abs() > identity_tol {
        problems.push(format!("tr K = {} != {n}", g.trace_k));
    }
    if (g.trace_k2 - g.trace_k2_formula).abs() > identity_tol {
        problems.push(format!("tr K^2 = {} != {}", g.trace_k2, g.trace_k2_formula));
    }
    if (g.trace_kt - g.trace_kt_expected).abs() > identity_tol {
        problems.push(format!("tr Kt = {} != {}", g.trace_kt, g.trace_kt_expected));
    }
    if (g.trace_kt2 - g.trace_kt2_expected).abs() > identity_tol {
        problems.push(format!("tr Kt^2 = {} != {}", g.trace_kt2, g.trace_kt2_expected));
    }
    if g.hs_identity_residual > HS_IDENTITY_TOL {
        problems.push(format!("HS/overlap residual {:e}", g.hs_identity_residual));
    }
    if !g.rank_bounds_hold {
        problems.push(format!("rank K = {}, rank Kt = {}", g.rank_k, g.rank_kt));
    }
    if !(g.lemma_k.inequality_holds && g.lemma_kt.inequality_holds) {
        problems.push("trace/rank inequality violated".into());
    }
    if g.rank_kt + 1 != d * d || g.kt_projection_residual > identity_tol {
        problems.push(format!(
            "Kt not a rank d^2-1 projection: rank {}, residual {:e}",
            g.rank_kt, g.kt_projection_residual
        ));
    }
    let detail = if problems.is_empty() {
        format!("rank K = {}, rank Kt = {}, Kt^2 - Kt residual {:e}", g.rank_k, g.rank_kt, g.kt_projection_residual)
    } else {
        problems.join("; ")
    };
    log.record(Stage::GramIdentities, problems.is_empty(), detail);

    // Stage 4: edge count squeezed between the two bounds.
    let e = graph.edge_count();
    let ok = e == cert.expected_edge_count
        && e as i64 >= g.edge_lower_bound
        && e as i64 <= g.edge_upper_bound
        && e == summary.orthogonal;
    log.record(
        Stage::EdgeCount,
        ok,
        format!(
            "|E| = {e}, bounds [{}, {}], expected {}",
            g.edge_lower_bound, g.edge_upper_bound, cert.expected_edge_count
        ),
    );
    cert.edge_count = Some(e);
    cert.gram = Some(g);

    // Stage 5: (d−1)-regularity via ⟨1, A1⟩ = 2|E| and the degree sequence.
    let h = graph.adjacency_sum();
    let degrees = graph.degree_sequence();
    let min_max = (degrees.iter().copied().min().unwrap_or(0), degrees.iter().copied().max().unwrap_or(0));
    let ok = h == cert.expected_sum_a_entries && h == 2 * e && graph.is_regular(d - 1);
    log.record(
        Stage::Regularity,
        ok,
        format!("<1,A1> = {h}, expected {}, degrees in [{}, {}]", cert.expected_sum_a_entries, min_max.0, min_max.1),
    );
    cert.sum_a_entries = Some(h);
    cert.regular_degree = graph.regular_degree();

    // Stage 6: adjacency spectrum.
    let spectrum = in_context(Stage::Spectrum, graph.adjacency_spectrum())?;
    let max_error = spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| (l - if i <= d { d as f64 - 1.0 } else { -1.0 }).abs())
        .fold(0.0f64, f64::max);
    let clusters = cluster_spectrum(&spectrum.eigenvalues, SPECTRAL_CLUSTER_GAP);
    let ok = max_error <= SPECTRUM_TOL;
    log.record(
        Stage::Spectrum,
        ok,
        format!(
            "clusters {}, max error {max_error:e}",
            clusters.iter().map(|c| format!("{:.6} x{}", c.value, c.multiplicity)).collect::<Vec<_>>().join(", ")
        ),
    );
    let cubes: f64 = spectrum.eigenvalues.iter().map(|l| l * l * l).sum();
    cert.spectrum = Some(clusters);
    cert.spectrum_max_error = Some(max_error);

    // Stage 7: ordered triangles, counted and via tr A³.
    let t = graph.ordered_triangle_count();
    let ok = t == cert.expected_ordered_triangles && (cubes - t as f64).abs() <= TRIANGLE_TRACE_TOL;
    log.record(
        Stage::Triangles,
        ok,
        format!("count {t}, tr A^3 = {cubes:.9}, expected {}", cert.expected_ordered_triangles),
    );
    cert.ordered_triangles = Some(t);
    cert.spectral_triangle_trace = Some(cubes);

    // Stage 8: d + 1 disjoint cliques of size d.
    let partition = match graph.clique_partition(d) {
        Ok(p) => {
            log.record(Stage::CliquePartition, true, format!("{} parts of size {d}", p.len()));
            Some(p)
        }
        Err(Error::StructureMismatch { components, .. }) => {
            let incomplete = components.iter().filter(|c| !c.complete).count();
            let sizes: Vec<usize> = components.iter().map(|c| c.vertices.len()).collect();
            log.record(
                Stage::CliquePartition,
                false,
                format!("{} components of sizes {sizes:?}, {incomplete} not complete", components.len()),
            );
            None
        }
        Err(other) => return Err(other),
    };

    // Stage 9: the parts, read back from the raw vectors, form a complete MUB.
    if let Some(parts) = &partition {
        let bases = parts.iter().map(|p| p.iter().map(|&i| sys.vectors()[i].clone()).collect()).collect();
        let dev = MubSystem::new(d, bases, f64::INFINITY)?.deviation();
        let ok = dev.orthonormality <= tol && dev.unbiasedness <= tol;
        log.record(
            Stage::Revalidation,
            ok,
            format!("orthonormality {:e}, unbiasedness {:e}", dev.orthonormality, dev.unbiasedness),
        );
        cert.revalidation = Some(Revalidation { orthonormality: dev.orthonormality, unbiasedness: dev.unbiasedness });
    } else {
        log.record(Stage::Revalidation, false, "no partition to revalidate".into());
    }
    cert.partition = partition;

    let verdict = if log.first_failure().is_none() { Verdict::CompleteMub } else { Verdict::Contradiction };
    Ok(finish(cert, log, verdict))
}

fn finish(mut cert: RigidityCertificate, log: Log, verdict: Verdict) -> RigidityCertificate {
    cert.failure_stage = log.first_failure();
    cert.stages = log.stages;
    cert.verdict = verdict;
    cert
}
