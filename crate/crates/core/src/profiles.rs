//! Synthetic device noise profiles.
//!
//! Stands in for hardware-calibrated rates: single-qubit rates land in the
//! few-percent range with decay above excitation, and two-qubit rates sit
//! an order of magnitude lower, falling off with qubit distance. The
//! resulting noise strength works out to roughly `gamma ~ 0.05 n`. The
//! repository ships files generated from this function; regenerating with
//! the same seed reproduces them byte for byte.

use rand::Rng;

use crate::characterization::{qubit_distance, CouplingGraph};
use crate::error::Result;
use crate::model::{CtmpModel, GeneratorKind, GeneratorTerm};
use crate::rng::RngStream;

/// Generate a device-like profile over `graph`'s qubits. Falls back to a
/// linear chain when no graph is given.
pub fn default_profile(
    num_qubits: usize,
    graph: Option<&CouplingGraph>,
    seed: u64,
) -> Result<CtmpModel> {
    let chain;
    let graph = match graph {
        Some(g) => g,
        None => {
            chain = CouplingGraph::new(
                num_qubits,
                (0..num_qubits.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            )?;
            &chain
        }
    };
    let stream = RngStream::from_seed(seed);
    let mut singles_rng = stream.derive("singles", 0).rng();
    let mut terms = Vec::new();
    for q in 0..num_qubits {
        terms.push(GeneratorTerm::single(
            GeneratorKind::SingleExcite,
            q,
            singles_rng.gen_range(0.012..0.028),
        ));
        terms.push(GeneratorTerm::single(
            GeneratorKind::SingleDecay,
            q,
            singles_rng.gen_range(0.02..0.05),
        ));
    }
    let mut pairs_rng = stream.derive("pairs", 0).rng();
    for i in 0..num_qubits {
        for j in (i + 1)..num_qubits {
            // distance falloff, with unreachable pairs treated as far apart
            let d = qubit_distance(graph, i, j)?.unwrap_or(8);
            let falloff = (-((d - 1) as f64) / 2.0).exp();
            for (kind, base) in [
                (GeneratorKind::PairExcite, 0.0012),
                (GeneratorKind::PairDecay, 0.0018),
                (GeneratorKind::Exchange01to10, 0.0009),
                (GeneratorKind::Exchange10to01, 0.0009),
            ] {
                let jitter = pairs_rng.gen_range(0.5..1.5);
                terms.push(GeneratorTerm::pair(kind, i, j, base * falloff * jitter));
            }
        }
    }
    CtmpModel::new(num_qubits, terms)
}

/// Seed behind the profile files shipped in `data/`.
pub const BUNDLED_PROFILE_SEED: u64 = 0xb0eb;

/// The 20-qubit planar coupling layout used by the bundled example graph:
/// four rows of five qubits with staggered vertical couplers. Corner-to-
/// corner pairs sit at distance 7.
pub fn boeblingen_like_graph() -> CouplingGraph {
    let edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (1, 6),
        (3, 8),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (5, 10),
        (7, 12),
        (9, 14),
        (10, 11),
        (11, 12),
        (12, 13),
        (13, 14),
        (11, 16),
        (13, 18),
        (15, 16),
        (16, 17),
        (17, 18),
        (18, 19),
    ];
    CouplingGraph::new(20, edges).expect("static edge list is valid")
}
