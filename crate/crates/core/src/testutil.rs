//! Shared helpers for unit tests.

use rand::Rng;

use crate::model::{CtmpModel, GeneratorKind, GeneratorTerm};
use crate::rng::RngStream;

/// A model with random single rates in `(0, single_hi)` on every qubit and
/// random pair rates in `(0, pair_hi)` on every pair, all four pair kinds.
pub fn random_model(n: usize, seed: u64, single_hi: f64, pair_hi: f64) -> CtmpModel {
    let mut rng = RngStream::from_seed(seed).rng();
    let mut terms = Vec::new();
    for q in 0..n {
        terms.push(GeneratorTerm::single(GeneratorKind::SingleExcite, q, rng.gen_range(0.0..single_hi)));
        terms.push(GeneratorTerm::single(GeneratorKind::SingleDecay, q, rng.gen_range(0.0..single_hi)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for kind in [
                GeneratorKind::PairExcite,
                GeneratorKind::PairDecay,
                GeneratorKind::Exchange01to10,
                GeneratorKind::Exchange10to01,
            ] {
                terms.push(GeneratorTerm::pair(kind, i, j, rng.gen_range(0.0..pair_hi)));
            }
        }
    }
    CtmpModel::new(n, terms).unwrap()
}
