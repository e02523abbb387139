//! The orthogonality graph of a vector system and the combinatorial
//! quantities read off it: edges, degrees, spectrum, ordered triangles and
//! the decomposition into cliques.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::constructions::UnitVectorSystem;
use crate::cxla::{hermitian_eigenvalues, inner_unchecked, HermitianMatrix, SpectrumResult, DEFAULT_EIGEN_TOL};
use crate::error::{ComponentDiagnostic, Error, Result};

/// Default absolute tolerance on `|⟨b_j, b_k⟩|²` when classifying pairs.
pub const DEFAULT_CLASSIFICATION_TOL: f64 = 1e-9;

/// Eigenvalues closer than this are merged into one cluster.
pub const SPECTRAL_CLUSTER_GAP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairLabel {
    SelfPair,
    Orthogonal,
    Unbiased,
    Violation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSummary {
    pub orthogonal: usize,
    pub unbiased: usize,
    pub violation: usize,
}

/// Labels and measured squared overlaps for every ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairClassification {
    n: usize,
    d: usize,
    tol: f64,
    labels: Vec<PairLabel>,
    overlaps: Vec<f64>,
}

impl PairClassification {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn label(&self, j: usize, k: usize) -> PairLabel {
        self.labels[j * self.n + k]
    }

    pub fn overlap(&self, j: usize, k: usize) -> f64 {
        self.overlaps[j * self.n + k]
    }

    /// Counts over unordered pairs `j < k`.
    pub fn summary(&self) -> ClassificationSummary {
        let mut s = ClassificationSummary::default();
        for j in 0..self.n {
            for k in (j + 1)..self.n {
                match self.label(j, k) {
                    PairLabel::Orthogonal => s.orthogonal += 1,
                    PairLabel::Unbiased => s.unbiased += 1,
                    PairLabel::Violation => s.violation += 1,
                    PairLabel::SelfPair => unreachable!("off-diagonal pair labelled SelfPair"),
                }
            }
        }
        s
    }

    /// Unordered pairs `(j, k)`, `j < k`, that are neither orthogonal nor unbiased.
    pub fn violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for k in (j + 1)..self.n {
                if self.label(j, k) == PairLabel::Violation {
                    out.push((j, k));
                }
            }
        }
        out
    }
}

/// Classifies each pair as orthogonal (`|⟨·,·⟩|² ≤ tol`), unbiased
/// (`||⟨·,·⟩|² − 1/d| ≤ tol`) or a violation of that dichotomy.
pub fn classify_pairs(sys: &UnitVectorSystem, tol: f64) -> Result<PairClassification> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("classification tolerance must be positive, got {tol}")));
    }
    let n = sys.n();
    let d = sys.d();
    let inv_d = 1.0 / d as f64;
    let vs = sys.vectors();
    let mut labels = vec![PairLabel::SelfPair; n * n];
    let mut overlaps = vec![0.0; n * n];
    for j in 0..n {
        overlaps[j * n + j] = inner_unchecked(vs[j].entries(), vs[j].entries()).norm_sqr();
        for k in (j + 1)..n {
            let o = inner_unchecked(vs[j].entries(), vs[k].entries()).norm_sqr();
            let label = if o <= tol {
                PairLabel::Orthogonal
            } else if (o - inv_d).abs() <= tol {
                PairLabel::Unbiased
            } else {
                PairLabel::Violation
            };
            labels[j * n + k] = label;
            labels[k * n + j] = label;
            overlaps[j * n + k] = o;
            overlaps[k * n + j] = o;
        }
    }
    Ok(PairClassification { n, d, tol, labels, overlaps })
}

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalityGraph {
    n: usize,
    adjacency: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

/// A cluster of numerically equal eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCluster {
    pub value: f64,
    pub multiplicity: usize,
}

impl OrthogonalityGraph {
    /// Graph from an edge list; duplicate edges are merged, loops rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![false; n * n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
        }
        Ok(Self::from_valid_adjacency(n, adjacency))
    }

    fn from_valid_adjacency(n: usize, adjacency: Vec<bool>) -> Self {
        let neighbors: Vec<Vec<usize>> = (0..n).map(|u| (0..n).filter(|&v| adjacency[u * n + v]).collect()).collect();
        let edge_count = neighbors.iter().map(Vec::len).sum::<usize>() / 2;
        Self { n, adjacency, neighbors, edge_count }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v))).collect()
    }

    /// `h = ⟨1, A1⟩`, the sum of all adjacency entries.
    pub fn adjacency_sum(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn is_regular(&self, r: usize) -> bool {
        self.neighbors.iter().all(|nb| nb.len() == r)
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.neighbors.first().map(Vec::len)?;
        self.is_regular(first).then_some(first)
    }

    /// Number of ordered triples `(u, v, w)` of pairwise adjacent vertices,
    /// i.e. `tr(A³)`, by integer enumeration over neighbor pairs.
    pub fn ordered_triangle_count(&self) -> u64 {
        let mut count = 0u64;
        for nb in &self.neighbors {
            for &v in nb {
                for &w in nb {
                    if v != w && self.has_edge(v, w) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    pub fn adjacency_matrix(&self) -> HermitianMatrix {
        let entries: Vec<f64> = self.adjacency.iter().map(|&a| if a { 1.0 } else { 0.0 }).collect();
        HermitianMatrix::from_real(self.n, &entries, 0.0).expect("adjacency is symmetric")
    }

    pub fn adjacency_spectrum(&self) -> Result<SpectrumResult> {
        if self.n == 0 {
            return Ok(SpectrumResult { eigenvalues: Vec::new(), residual: 0.0 });
        }
        let scale = (self.n as f64).max(1.0);
        hermitian_eigenvalues(&self.adjacency_matrix(), DEFAULT_EIGEN_TOL * scale)
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.n);
        for (u, v) in self.edges() {
            uf.union(u, v);
        }
        let labels = uf.into_labeling();
        let mut index_of_root = vec![usize::MAX; self.n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for (v, &root) in labels.iter().enumerate() {
            if index_of_root[root] == usize::MAX {
                index_of_root[root] = components.len();
                components.push(Vec::new());
            }
            components[index_of_root[root]].push(v);
        }
        components
    }

    fn is_complete_on(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Whether every component is a complete graph on exactly `size` vertices.
    pub fn is_disjoint_union_of_cliques(&self, size: usize) -> bool {
        self.components().iter().all(|c| c.len() == size && self.is_complete_on(c))
    }

    /// Splits the graph on `n = d(d+1)` vertices into `d + 1` cliques of size
    /// `d`, using its connected components.
    pub fn clique_partition(&self, d: usize) -> Result<Vec<Vec<usize>>> {
        if self.n != d * (d + 1) {
            return Err(Error::InvalidInput(format!(
                "clique partition for d = {d} needs {} vertices, graph has {}",
                d * (d + 1),
                self.n
            )));
        }
        let components = self.components();
        let ok = components.len() == d + 1 && components.iter().all(|c| c.len() == d && self.is_complete_on(c));
        if ok {
            return Ok(components);
        }
        Err(Error::StructureMismatch {
            expected_parts: d + 1,
            expected_size: d,
            components: components
                .into_iter()
                .map(|c| {
                    let complete = self.is_complete_on(&c);
                    ComponentDiagnostic { vertices: c, complete }
                })
                .collect(),
        })
    }
}

/// Orthogonality graph of a classification; any violation means the
/// orthogonal-or-unbiased hypothesis fails.
pub fn build_graph(pc: &PairClassification) -> Result<OrthogonalityGraph> {
    let violations = pc.violations();
    if let Some(&(j, k)) = violations.first() {
        return Err(Error::NotApplicable(format!(
            "{} pair(s) neither orthogonal nor unbiased, first ({j}, {k}) with |<b_j,b_k>|^2 = {}",
            violations.len(),
            pc.overlap(j, k)
        )));
    }
    let adjacency = pc.labels.iter().map(|&l| l == PairLabel::Orthogonal).collect();
    Ok(OrthogonalityGraph::from_valid_adjacency(pc.n, adjacency))
}

/// Groups descending eigenvalues into clusters whose consecutive members
/// differ by less than `gap`; each cluster reports its mean.
pub fn cluster_spectrum(eigenvalues: &[f64], gap: f64) -> Vec<SpectralCluster> {
    let mut sorted = eigenvalues.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut prev = f64::NAN;
    for &l in &sorted {
        match clusters.last_mut() {
            Some((sum, count)) if prev - l < gap => {
                *sum += l;
                *count += 1;
            }
            _ => clusters.push((l, 1)),
        }
        prev = l;
    }
    clusters
        .into_iter()
        .map(|(sum, count)| SpectralCluster { value: sum / count as f64, multiplicity: count })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_mub, standard_basis};
    use crate::cxla::CVector;

    fn mub_graph(d: usize) -> OrthogonalityGraph {
        let sys = complete_mub(d).unwrap().flatten();
        build_graph(&classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap()).unwrap()
    }

    fn complete_graph(n: usize) -> OrthogonalityGraph {
        let edges: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect();
        OrthogonalityGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn standard_basis_pairs_are_orthogonal() {
        let sys = UnitVectorSystem::new(3, standard_basis(3).unwrap()).unwrap();
        let pc = classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert_eq!(pc.summary(), ClassificationSummary { orthogonal: 3, unbiased: 0, violation: 0 });
        assert_eq!(pc.label(1, 1), PairLabel::SelfPair);
    }

    #[test]
    fn classification_rejects_non_positive_tol() {
        let sys = UnitVectorSystem::new(3, standard_basis(3).unwrap()).unwrap();
        assert!(classify_pairs(&sys, 0.0).is_err());
        assert!(classify_pairs(&sys, f64::NAN).is_err());
    }

    #[test]
    fn d3_system_has_no_violations() {
        let sys = complete_mub(3).unwrap().flatten();
        let pc = classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert_eq!(pc.summary(), ClassificationSummary { orthogonal: 12, unbiased: 54, violation: 0 });
    }

    #[test]
    fn generic_vector_violates_the_dichotomy() {
        let v = CVector::from_reals(&[0.6, 0.8, 0.0]).unwrap();
        let mut vs = standard_basis(3).unwrap();
        vs.push(v);
        let sys = UnitVectorSystem::new(3, vs).unwrap();
        let pc = classify_pairs(&sys, DEFAULT_CLASSIFICATION_TOL).unwrap();
        assert_eq!(pc.violations(), vec![(0, 3), (1, 3)]);
        assert!(matches!(build_graph(&pc), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn edge_counts() {
        assert_eq!(mub_graph(2).edge_count(), 3);
        assert_eq!(mub_graph(3).edge_count(), 12);
        let basis = UnitVectorSystem::new(4, standard_basis(4).unwrap()).unwrap();
        let g = build_graph(&classify_pairs(&basis, DEFAULT_CLASSIFICATION_TOL).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn degrees() {
        let g = mub_graph(5);
        assert!(g.degree_sequence().iter().all(|&x| x == 4));
        assert_eq!(g.regular_degree(), Some(4));
        let empty = OrthogonalityGraph::from_edges(7, &[]).unwrap();
        assert_eq!(empty.degree_sequence(), vec![0; 7]);
        assert!(empty.is_regular(0));
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(mub_graph(2).ordered_triangle_count(), 0);
        assert_eq!(mub_graph(3).ordered_triangle_count(), 24);
        assert_eq!(mub_graph(5).ordered_triangle_count(), 360);
        assert_eq!(complete_graph(4).ordered_triangle_count(), 24);
    }

    #[test]
    fn spectra() {
        let d = 5;
        let clusters =
            cluster_spectrum(&complete_graph(d).adjacency_spectrum().unwrap().eigenvalues, SPECTRAL_CLUSTER_GAP);
        assert_eq!(clusters.len(), 2);
        assert!((clusters[0].value - 4.0).abs() < 1e-12 && clusters[0].multiplicity == 1);
        assert!((clusters[1].value + 1.0).abs() < 1e-12 && clusters[1].multiplicity == 4);

        let clusters = cluster_spectrum(&mub_graph(3).adjacency_spectrum().unwrap().eigenvalues, SPECTRAL_CLUSTER_GAP);
        assert_eq!(clusters.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![4, 8]);
        assert!((clusters[0].value - 2.0).abs() < 1e-10);
        assert!((clusters[1].value + 1.0).abs() < 1e-10);

        let empty = OrthogonalityGraph::from_edges(4, &[]).unwrap();
        assert_eq!(empty.adjacency_spectrum().unwrap().eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn partitions() {
        let parts = mub_graph(2).clique_partition(2).unwrap();
        assert_eq!(parts, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        let parts = mub_graph(3).clique_partition(3).unwrap();
        assert_eq!(parts.len(), 4);
        assert!(parts.iter().all(|p| p.len() == 3));

        let path = OrthogonalityGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        match path.clique_partition(2) {
            Err(Error::StructureMismatch { components, .. }) => {
                assert_eq!(components.len(), 1);
                assert_eq!(components[0].vertices.len(), 6);
                assert!(!components[0].complete);
            }
            other => panic!("expected StructureMismatch, got {other:?}"),
        }
        assert!(matches!(path.clique_partition(3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn incomplete_components_are_reported() {
        // 4-cycle plus two isolated vertices
        let g = OrthogonalityGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let Err(Error::StructureMismatch { components, .. }) = g.clique_partition(2) else {
            panic!("expected mismatch")
        };
        assert_eq!(components.len(), 3);
        assert!(!components[0].complete);
        assert!(components[1].complete && components[1].vertices == vec![4]);
    }

    #[test]
    fn from_edges_validation() {
        assert!(OrthogonalityGraph::from_edges(3, &[(0, 3)]).is_err());
        assert!(OrthogonalityGraph::from_edges(3, &[(1, 1)]).is_err());
        let g = OrthogonalityGraph::from_edges(3, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.adjacency_sum(), 2);
    }

    #[test]
    fn cluster_gap() {
        let c = cluster_spectrum(&[2.0, -1.0, 2.0 + 1e-12, -1.0 - 1e-12, 0.4], 0.5);
        assert_eq!(c.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![2, 1, 2]);
    }
}
