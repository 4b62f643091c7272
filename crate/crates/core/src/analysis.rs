//! Bundle statistics: 1-D density clustering of entropies, closed-form and
//! brute-force bundle counts, histograms, and theory-versus-observation
//! comparison.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::hypergraph::{EdgeSubset, Hypergraph};
use crate::subspace::{Bundle, Subsystem};

/// Default clustering radius.
pub const DEFAULT_RADIUS: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    /// Bipartition ids, ascending.
    pub members: Vec<u64>,
    /// Mean of the member values.
    pub representative: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterReport {
    pub radius: f64,
    /// Ordered by value.
    pub clusters: Vec<Cluster>,
}

impl ClusterReport {
    /// Index of the cluster holding `id`.
    pub fn cluster_of(&self) -> HashMap<u64, usize> {
        self.clusters.iter().enumerate().flat_map(|(k, c)| c.members.iter().map(move |&id| (id, k))).collect()
    }
}

/// Density clustering with min-points 1 in one dimension: sort the values
/// and cut wherever consecutive values are at least `radius` apart.
pub fn cluster_entropies(values: &[(u64, f64)], radius: f64) -> Result<ClusterReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::input(format!("radius must be positive, got {radius}")));
    }
    if let Some((id, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::input(format!("non-finite value {v} for id {id}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut clusters: Vec<Vec<(u64, f64)>> = Vec::new();
    for (k, &(id, v)) in sorted.iter().enumerate() {
        if k == 0 || v - sorted[k - 1].1 >= radius {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("pushed").push((id, v));
    }
    let clusters = clusters
        .into_iter()
        .map(|c| {
            let mut members: Vec<u64> = c.iter().map(|x| x.0).collect();
            members.sort_unstable();
            Cluster {
                members,
                representative: c.iter().map(|x| x.1).sum::<f64>() / c.len() as f64,
                min: c[0].1,
                max: c[c.len() - 1].1,
            }
        })
        .collect();
    Ok(ClusterReport { radius, clusters })
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Lower bound on the number of unordered bipartitions in the bundle of the
/// logical line `L_v` of a complete graph:
/// `Σ_{p=0}^{|V|-3} C(m, m-p)` with `m = |L_v(H)ᶜ|`.
pub fn line_bundle_lower_bound(h: &Hypergraph, v: u32) -> Result<u64> {
    if !h.is_complete_graph() {
        return Err(Error::input("line bundle bound is defined for complete graphs"));
    }
    let nv = h.num_vertices() as u64;
    if nv <= 3 {
        return Err(Error::input("line bundle bound needs more than three vertices"));
    }
    let m = h.logical_line(v)?.complement().len() as u64;
    Ok((0..=nv - 3).map(|p| binomial(m, m - p)).sum())
}

/// Unordered bipartitions `{A, Aᶜ}` of the edges where both `H|_A` and
/// `H|_{Aᶜ}` are connected and cover every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningPairs {
    /// Keyed by the size of the smaller side.
    pub by_size: BTreeMap<usize, u64>,
    pub total: u64,
}

/// Largest edge count accepted by [`count_spanning_pairs`].
pub const MAX_SPANNING_EDGES: usize = 24;

pub fn count_spanning_pairs(h: &Hypergraph) -> Result<SpanningPairs> {
    let ne = h.num_edges();
    if ne > MAX_SPANNING_EDGES {
        return Err(Error::Resource { what: "edge count", value: ne, limit: MAX_SPANNING_EDGES });
    }
    if ne == 0 {
        return Ok(SpanningPairs { by_size: BTreeMap::new(), total: 0 });
    }
    let half = 1u64 << (ne - 1);
    let sizes: Vec<usize> = (0..half)
        .into_par_iter()
        .filter_map(|id| {
            let a = EdgeSubset::from_bits(BitVector::from_u64(ne, id << 1 | 1));
            let c = a.complement();
            (h.spans_connected(&a) && h.spans_connected(&c)).then(|| a.len().min(c.len()))
        })
        .collect();
    let mut by_size = BTreeMap::new();
    for s in sizes {
        *by_size.entry(s).or_insert(0) += 1;
    }
    let total = by_size.values().sum();
    Ok(SpanningPairs { by_size, total })
}

/// Which bipartitions to count in a report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportScope {
    pub include_trivial: bool,
    /// Allowed sizes of the smaller side; `None` allows all.
    pub sizes: Option<Vec<usize>>,
}

impl ReportScope {
    pub fn admits(&self, a: &Subsystem) -> bool {
        (self.include_trivial || !a.is_trivial())
            && self.sizes.as_ref().is_none_or(|s| s.contains(&a.bipartition_size()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundleEntry {
    /// Position of the bundle in the classifier output.
    pub bundle: usize,
    /// Bipartition ids in scope, ascending.
    pub bipartitions: Vec<u64>,
    /// Number of bipartitions per smaller-side size.
    pub sizes: BTreeMap<usize, usize>,
    /// Largest observed entropy over the members, when traces are supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_entropy: Option<f64>,
}

impl BundleEntry {
    pub fn num_bipartitions(&self) -> usize {
        self.bipartitions.len()
    }

    /// Subsystems in the bundle; each bipartition contributes two.
    pub fn num_members(&self) -> usize {
        2 * self.bipartitions.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundleHistogram {
    pub entries: Vec<BundleEntry>,
    /// Number of bundles per bundle size (in bipartitions).
    pub counts: BTreeMap<usize, usize>,
    pub total_bipartitions: usize,
}

impl BundleHistogram {
    pub fn num_bundles(&self) -> usize {
        self.entries.len()
    }
}

/// Histogram of `bundles` restricted to `scope`. With `entropies` (indexed
/// by bipartition id), entries are sorted by ascending maximum entropy;
/// otherwise by smallest bipartition id.
pub fn bundle_report(bundles: &[Bundle], scope: &ReportScope, entropies: Option<&[f64]>) -> BundleHistogram {
    let mut entries: Vec<BundleEntry> = bundles
        .iter()
        .enumerate()
        .filter_map(|(k, b)| {
            let admitted: Vec<&Subsystem> = b.bipartitions.iter().filter(|a| scope.admits(a)).collect();
            if admitted.is_empty() {
                return None;
            }
            let mut sizes = BTreeMap::new();
            for a in &admitted {
                *sizes.entry(a.bipartition_size()).or_insert(0) += 1;
            }
            let mut ids: Vec<u64> = admitted.iter().map(|a| a.bipartition_id()).collect();
            ids.sort_unstable();
            let max_entropy = entropies
                .map(|e| ids.iter().filter_map(|&id| e.get(id as usize).copied()).fold(f64::NEG_INFINITY, f64::max));
            Some(BundleEntry { bundle: k, bipartitions: ids, sizes, max_entropy })
        })
        .collect();
    if entropies.is_some() {
        entries.sort_by(|a, b| {
            a.max_entropy
                .unwrap_or(f64::NEG_INFINITY)
                .total_cmp(&b.max_entropy.unwrap_or(f64::NEG_INFINITY))
                .then(a.bipartitions[0].cmp(&b.bipartitions[0]))
        });
    } else {
        entries.sort_by_key(|e| e.bipartitions[0]);
    }
    let mut counts = BTreeMap::new();
    for e in &entries {
        *counts.entry(e.num_bipartitions()).or_insert(0) += 1;
    }
    let total_bipartitions = entries.iter().map(BundleEntry::num_bipartitions).sum();
    BundleHistogram { entries, counts, total_bipartitions }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub bundles: usize,
    pub clusters: usize,
    /// Histogram entries whose members fall into more than one cluster.
    pub split_bundles: Vec<usize>,
    /// Clusters holding members of more than one bundle.
    pub merged_clusters: Vec<usize>,
    /// Bipartitions of the histogram absent from the clustering.
    pub missing: Vec<u64>,
    /// No splits, merges or missing ids: clusters equal bundles.
    pub exact_match: bool,
}

/// Checks whether the observed clusters reproduce the theoretical bundles.
pub fn compare_theory_observed(histogram: &BundleHistogram, clusters: &ClusterReport) -> Comparison {
    let cluster_of = clusters.cluster_of();
    let mut split_bundles = Vec::new();
    let mut missing = Vec::new();
    let mut bundles_in_cluster: Vec<Vec<usize>> = vec![Vec::new(); clusters.clusters.len()];
    for (k, e) in histogram.entries.iter().enumerate() {
        let mut seen: Vec<usize> = Vec::new();
        for id in &e.bipartitions {
            match cluster_of.get(id) {
                Some(&c) => {
                    if !seen.contains(&c) {
                        seen.push(c);
                    }
                    if !bundles_in_cluster[c].contains(&k) {
                        bundles_in_cluster[c].push(k);
                    }
                }
                None => missing.push(*id),
            }
        }
        if seen.len() > 1 {
            split_bundles.push(k);
        }
    }
    let merged_clusters: Vec<usize> =
        (0..bundles_in_cluster.len()).filter(|&c| bundles_in_cluster[c].len() > 1).collect();
    let exact_match = split_bundles.is_empty() && merged_clusters.is_empty() && missing.is_empty();
    Comparison {
        bundles: histogram.entries.len(),
        clusters: clusters.clusters.len(),
        split_bundles,
        merged_clusters,
        missing,
        exact_match,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::enumerate_bundles;

    #[test]
    fn clustering_basics() {
        let r = cluster_entropies(&[(0, 0.5), (1, 0.5), (2, 0.5)], 1e-4).unwrap();
        assert_eq!(r.clusters.len(), 1);
        assert_eq!(r.clusters[0].members, vec![0, 1, 2]);
        let r = cluster_entropies(&[(0, 0.0), (1, 1.0)], 1e-4).unwrap();
        assert_eq!(r.clusters.len(), 2);
        assert!(cluster_entropies(&[], 0.0).is_err());
        // Chains of small gaps stay connected.
        let r = cluster_entropies(&[(0, 0.0), (1, 0.6e-4), (2, 1.2e-4)], 1e-4).unwrap();
        assert_eq!(r.clusters.len(), 1);
    }

    #[test]
    fn clustering_is_order_independent() {
        let a = [(0, 0.3), (1, 0.1), (2, 0.30001), (3, 0.7)];
        let mut b = a;
        b.reverse();
        assert_eq!(cluster_entropies(&a, 1e-4).unwrap(), cluster_entropies(&b, 1e-4).unwrap());
    }

    #[test]
    fn line_bound_values() {
        assert_eq!(line_bundle_lower_bound(&Hypergraph::complete(5), 3).unwrap(), 22);
        assert_eq!(line_bundle_lower_bound(&Hypergraph::complete(4), 0).unwrap(), 4);
        assert!(line_bundle_lower_bound(&Hypergraph::complete(3), 0).is_err());
        let path = Hypergraph::new(vec![0, 1, 2, 3], vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert!(line_bundle_lower_bound(&path, 0).is_err());
    }

    #[test]
    fn trees_have_no_spanning_pairs() {
        let star = Hypergraph::new(vec![0, 1, 2, 3], vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        assert_eq!(count_spanning_pairs(&star).unwrap().total, 0);
    }

    #[test]
    fn worked_example_histogram() {
        let bundles = enumerate_bundles(&crate::instances::worked_example()).unwrap();
        let scope = ReportScope { include_trivial: true, sizes: None };
        let h = bundle_report(&bundles, &scope, None);
        let mut members: Vec<usize> = h.entries.iter().map(BundleEntry::num_members).collect();
        members.sort_unstable();
        assert_eq!(members, vec![2, 2, 4]);
        assert_eq!(h.total_bipartitions, 4);
        let h = bundle_report(&bundles, &ReportScope::default(), None);
        assert_eq!(h.total_bipartitions, 3);
        assert_eq!(bundle_report(&[], &scope, None).num_bundles(), 0);
    }

    #[test]
    fn comparison_flags_splits_and_merges() {
        let bundles = enumerate_bundles(&crate::instances::worked_example()).unwrap();
        let h = bundle_report(&bundles, &ReportScope::default(), None);
        // ids: {1}|{2,3} = 0, {1,2}|{3} = 1, {1,3}|{2} = 2.
        let good = cluster_entropies(&[(0, 0.2), (1, 0.5), (2, 0.5)], 1e-4).unwrap();
        assert!(compare_theory_observed(&h, &good).exact_match);
        let split = cluster_entropies(&[(0, 0.2), (1, 0.5), (2, 0.6)], 1e-4).unwrap();
        let c = compare_theory_observed(&h, &split);
        assert_eq!(c.split_bundles.len(), 1);
        assert!(!c.exact_match);
        let merged = cluster_entropies(&[(0, 0.5), (1, 0.5), (2, 0.5)], 1e-4).unwrap();
        assert_eq!(compare_theory_observed(&h, &merged).merged_clusters, vec![0]);
    }
}
