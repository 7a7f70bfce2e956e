//! Readout-rate characterization against device connectivity.
//!
//! Fitted generator rates are grouped by kind and by qubit distance (the
//! shortest-path edge count on the device coupling graph), summarized by
//! quartiles, and compared across models. Zero rates, which show up when
//! shot noise clips a fitted entry, are counted separately and excluded
//! from quartiles so downstream log-scale plots never see them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CtmpModel, GeneratorKind};

/// Undirected device-connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut adjacency = vec![Vec::new(); num_qubits];
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::QubitIndex { index: a.max(b), num_qubits });
            }
            if a == b {
                return Err(Error::InvalidData(format!("self-loop on qubit {a}")));
            }
            let edge = (a.min(b), a.max(b));
            if !seen.insert(edge) {
                return Err(Error::InvalidData(format!("duplicate edge {edge:?}")));
            }
            adjacency[edge.0].push(edge.1);
            adjacency[edge.1].push(edge.0);
            normalized.push(edge);
        }
        normalized.sort_unstable();
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
        }
        Ok(CouplingGraph { num_qubits, edges: normalized, adjacency })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            num_qubits: self.num_qubits,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json_str(json: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(json)?;
        CouplingGraph::new(file.num_qubits, file.edges.iter().map(|e| (e[0], e[1])).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
}

/// Shortest-path edge count between two distinct qubits; `None` when they
/// are disconnected.
pub fn qubit_distance(graph: &CouplingGraph, i: usize, j: usize) -> Result<Option<u32>> {
    let n = graph.num_qubits();
    if i >= n || j >= n {
        return Err(Error::QubitIndex { index: i.max(j), num_qubits: n });
    }
    if i == j {
        return Err(Error::InvalidArgument("distance requires distinct qubits".into()));
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    dist[i] = 0;
    queue.push_back(i);
    while let Some(v) = queue.pop_front() {
        if v == j {
            return Ok(Some(dist[v]));
        }
        for &w in &graph.adjacency[v] {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

/// Reporting category for a fitted rate. The two exchange directions are
/// merged for distance plots; the model file keeps them separate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    Excitation,
    Decay,
    Exchange,
    SingleExcite,
    SingleDecay,
}

impl RateKind {
    pub fn is_pair(self) -> bool {
        matches!(self, RateKind::Excitation | RateKind::Decay | RateKind::Exchange)
    }

    pub fn label(self) -> &'static str {
        match self {
            RateKind::Excitation => "excitation",
            RateKind::Decay => "decay",
            RateKind::Exchange => "exchange",
            RateKind::SingleExcite => "single_excite",
            RateKind::SingleDecay => "single_decay",
        }
    }

    fn from_generator(kind: GeneratorKind) -> Self {
        match kind {
            GeneratorKind::SingleExcite => RateKind::SingleExcite,
            GeneratorKind::SingleDecay => RateKind::SingleDecay,
            GeneratorKind::PairExcite => RateKind::Excitation,
            GeneratorKind::PairDecay => RateKind::Decay,
            GeneratorKind::Exchange01to10 | GeneratorKind::Exchange10to01 => RateKind::Exchange,
        }
    }
}

/// One model term mapped to its reporting kind and qubit distance.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRecord {
    pub kind: RateKind,
    pub qubits: Vec<usize>,
    /// Pair records only; `None` means the qubits are disconnected.
    pub distance: Option<u32>,
    pub rate: f64,
}

/// Map every model term to a rate record, sorted by kind, distance, and
/// qubit tuple. Output length always equals the model's term count.
pub fn group_rates(model: &CtmpModel, graph: &CouplingGraph) -> Result<Vec<RateRecord>> {
    if model.num_qubits() != graph.num_qubits() {
        return Err(Error::QubitMismatch {
            left: model.num_qubits(),
            right: graph.num_qubits(),
        });
    }
    let mut records = Vec::with_capacity(model.terms().len());
    for term in model.terms() {
        let kind = RateKind::from_generator(term.kind);
        let distance = if kind.is_pair() {
            qubit_distance(graph, term.qubits[0], term.qubits[1])?
        } else {
            None
        };
        records.push(RateRecord { kind, qubits: term.qubits.clone(), distance, rate: term.rate });
    }
    records.sort_by(|a, b| {
        (a.kind, distance_sort_key(a.distance), &a.qubits, a.rate.to_bits()).cmp(&(
            b.kind,
            distance_sort_key(b.distance),
            &b.qubits,
            b.rate.to_bits(),
        ))
    });
    Ok(records)
}

fn distance_sort_key(d: Option<u32>) -> u64 {
    match d {
        Some(v) => u64::from(v),
        None => u64::MAX,
    }
}

/// Quartile summary of the nonzero rates in one `(kind, distance)` bucket.
#[derive(Debug, Clone, PartialEq)]
pub struct QuartileSummary {
    pub kind: RateKind,
    pub distance: Option<u32>,
    /// `None` when the bucket holds no nonzero rates.
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
    /// Number of nonzero rates entering the quartiles.
    pub count: usize,
    /// Zero rates, elided from the quartiles.
    pub zeros: usize,
}

/// Linear-interpolation (inclusive) quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let position = q * (sorted.len() - 1) as f64;
    let lo = position.floor() as usize;
    let hi = position.ceil() as usize;
    let frac = position - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Summarize records per `(kind, distance)` key, elided zeros counted.
pub fn summarize_quartiles(records: &[RateRecord]) -> Vec<QuartileSummary> {
    let mut buckets: BTreeMap<(RateKind, u64), (Vec<f64>, usize)> = BTreeMap::new();
    for r in records {
        let key = (r.kind, distance_sort_key(r.distance));
        let bucket = buckets.entry(key).or_default();
        if r.rate == 0.0 {
            bucket.1 += 1;
        } else {
            bucket.0.push(r.rate);
        }
    }
    buckets
        .into_iter()
        .map(|((kind, dist_key), (mut rates, zeros))| {
            rates.sort_by(|a, b| a.total_cmp(b));
            let distance = if dist_key == u64::MAX { None } else { Some(dist_key as u32) };
            if rates.is_empty() {
                QuartileSummary { kind, distance, q1: None, median: None, q3: None, count: 0, zeros }
            } else {
                QuartileSummary {
                    kind,
                    distance,
                    q1: Some(quantile(&rates, 0.25)),
                    median: Some(quantile(&rates, 0.5)),
                    q3: Some(quantile(&rates, 0.75)),
                    count: rates.len(),
                    zeros,
                }
            }
        })
        .collect()
}

/// Per-model rate listing split by locality, with nonzero medians.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub name: String,
    /// Nonzero single-qubit rates, ascending.
    pub single_rates: Vec<f64>,
    /// Nonzero two-qubit rates, ascending.
    pub pair_rates: Vec<f64>,
    pub single_median: Option<f64>,
    pub pair_median: Option<f64>,
    pub single_zeros: usize,
    pub pair_zeros: usize,
}

/// Flatten each model into 1-qubit and 2-qubit rate distributions, ready
/// for plotting, with per-model medians over the nonzero rates.
pub fn compare_models(models: &[(String, CtmpModel)]) -> Vec<ModelComparison> {
    models
        .iter()
        .map(|(name, model)| {
            let mut singles = Vec::new();
            let mut pairs = Vec::new();
            let mut single_zeros = 0;
            let mut pair_zeros = 0;
            for term in model.terms() {
                let is_pair = term.kind.is_pair();
                if term.rate == 0.0 {
                    if is_pair {
                        pair_zeros += 1;
                    } else {
                        single_zeros += 1;
                    }
                } else if is_pair {
                    pairs.push(term.rate);
                } else {
                    singles.push(term.rate);
                }
            }
            singles.sort_by(|a, b| a.total_cmp(b));
            pairs.sort_by(|a, b| a.total_cmp(b));
            let median = |v: &[f64]| if v.is_empty() { None } else { Some(quantile(v, 0.5)) };
            ModelComparison {
                name: name.clone(),
                single_median: median(&singles),
                pair_median: median(&pairs),
                single_rates: singles,
                pair_rates: pairs,
                single_zeros,
                pair_zeros,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GeneratorTerm;
    use crate::rng::RngStream;
    use rand::Rng;

    fn chain(n: usize) -> CouplingGraph {
        CouplingGraph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect()).unwrap()
    }

    #[test]
    fn chain_distances() {
        let g = chain(3);
        assert_eq!(qubit_distance(&g, 0, 2).unwrap(), Some(2));
        assert_eq!(qubit_distance(&g, 0, 1).unwrap(), Some(1));
    }

    #[test]
    fn disconnected_pair_is_unreachable() {
        let g = CouplingGraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(qubit_distance(&g, 0, 3).unwrap(), None);
    }

    #[test]
    fn same_qubit_distance_is_error() {
        let g = chain(2);
        assert!(qubit_distance(&g, 1, 1).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(CouplingGraph::new(2, vec![(0, 0)]).is_err());
        assert!(CouplingGraph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(CouplingGraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn bfs_symmetry_on_random_graphs() {
        let mut rng = RngStream::from_seed(314).rng();
        for _ in 0..50 {
            let n = rng.gen_range(2..12usize);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.gen::<f64>() < 0.3 {
                        edges.push((a, b));
                    }
                }
            }
            let g = CouplingGraph::new(n, edges).unwrap();
            for i in 0..n {
                for j in (i + 1)..n {
                    assert_eq!(
                        qubit_distance(&g, i, j).unwrap(),
                        qubit_distance(&g, j, i).unwrap()
                    );
                }
            }
            // triangle inequality over finite distances
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        if let (Some(dik), Some(dij), Some(djk)) = (
                            qubit_distance(&g, i, k).unwrap(),
                            qubit_distance(&g, i, j).unwrap(),
                            qubit_distance(&g, j, k).unwrap(),
                        ) {
                            assert!(dik <= dij + djk);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_pair_term_maps_to_decay_distance_one() {
        let g = chain(3);
        let model = CtmpModel::new(
            3,
            vec![GeneratorTerm::pair(crate::model::GeneratorKind::PairDecay, 0, 1, 0.02)],
        )
        .unwrap();
        let records = group_rates(&model, &g).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].kind, RateKind::Decay);
        assert_eq!(records[0].distance, Some(1));
    }

    #[test]
    fn empty_model_groups_to_nothing() {
        let g = chain(3);
        let records = group_rates(&CtmpModel::empty(3), &g).unwrap();
        assert!(records.is_empty());
    }

    #[test]
    fn grouping_conserves_term_counts_and_merges_exchange() {
        let model = crate::testutil::random_model(5, 8, 0.05, 0.01);
        let g = chain(5);
        let records = group_rates(&model, &g).unwrap();
        assert_eq!(records.len(), model.terms().len());
        let exchange_records = records.iter().filter(|r| r.kind == RateKind::Exchange).count();
        let exchange_terms = model
            .terms()
            .iter()
            .filter(|t| {
                matches!(
                    t.kind,
                    crate::model::GeneratorKind::Exchange01to10
                        | crate::model::GeneratorKind::Exchange10to01
                )
            })
            .count();
        assert_eq!(exchange_records, exchange_terms);
    }

    #[test]
    fn quartiles_follow_linear_interpolation() {
        let records: Vec<RateRecord> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&r| RateRecord {
                kind: RateKind::Decay,
                qubits: vec![0, 1],
                distance: Some(1),
                rate: r,
            })
            .collect();
        let summary = summarize_quartiles(&records);
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].q1, Some(1.75));
        assert_eq!(summary[0].median, Some(2.5));
        assert_eq!(summary[0].q3, Some(3.25));
        assert_eq!(summary[0].count, 4);
        assert_eq!(summary[0].zeros, 0);
    }

    #[test]
    fn zeros_are_elided_but_counted() {
        let mut records: Vec<RateRecord> = [0.0, 0.0, 5.0]
            .iter()
            .map(|&r| RateRecord {
                kind: RateKind::Exchange,
                qubits: vec![0, 1],
                distance: Some(1),
                rate: r,
            })
            .collect();
        let summary = summarize_quartiles(&records);
        assert_eq!(summary[0].q1, Some(5.0));
        assert_eq!(summary[0].median, Some(5.0));
        assert_eq!(summary[0].q3, Some(5.0));
        assert_eq!(summary[0].count, 1);
        assert_eq!(summary[0].zeros, 2);

        // single-value bucket: all quartiles equal the value
        records.truncate(1);
        records[0].rate = 0.7;
        let summary = summarize_quartiles(&records);
        assert_eq!(summary[0].q1, Some(0.7));
        assert_eq!(summary[0].median, Some(0.7));
        assert_eq!(summary[0].q3, Some(0.7));
    }

    #[test]
    fn quartile_ordering_invariant() {
        let mut rng = RngStream::from_seed(11).rng();
        for _ in 0..100 {
            let records: Vec<RateRecord> = (0..rng.gen_range(1..20))
                .map(|_| RateRecord {
                    kind: RateKind::Excitation,
                    qubits: vec![0, 1],
                    distance: Some(rng.gen_range(1..4)),
                    rate: rng.gen_range(0.0..0.1),
                })
                .collect();
            for s in summarize_quartiles(&records) {
                if let (Some(q1), Some(median), Some(q3)) = (s.q1, s.median, s.q3) {
                    assert!(q1 <= median && median <= q3);
                }
            }
        }
    }

    #[test]
    fn comparison_of_zero_rate_model_is_empty() {
        let mut terms = Vec::new();
        for q in 0..3 {
            terms.push(GeneratorTerm::single(crate::model::GeneratorKind::SingleExcite, q, 0.0));
        }
        let model = CtmpModel::new(3, terms).unwrap();
        let cmp = compare_models(&[("dev".into(), model)]);
        assert!(cmp[0].single_rates.is_empty());
        assert_eq!(cmp[0].single_zeros, 3);
        assert_eq!(cmp[0].single_median, None);
    }

    #[test]
    fn singles_dominate_pairs_in_planted_comparison() {
        let mut terms = Vec::new();
        for q in 0..3 {
            terms.push(GeneratorTerm::single(crate::model::GeneratorKind::SingleExcite, q, 0.03));
            terms.push(GeneratorTerm::single(crate::model::GeneratorKind::SingleDecay, q, 0.05));
        }
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            terms.push(GeneratorTerm::pair(crate::model::GeneratorKind::PairDecay, i, j, 0.002));
        }
        let model = CtmpModel::new(3, terms).unwrap();
        let cmp = compare_models(&[("dev".into(), model.clone()), ("dev2".into(), model)]);
        assert!(cmp[0].single_median.unwrap() > cmp[0].pair_median.unwrap());
        assert_eq!(cmp[0].single_median, cmp[1].single_median);
        assert_eq!(cmp[0].pair_rates, cmp[1].pair_rates);
    }
}
