//! Readout-noise channel: exact sampling from `A = exp(G)`.
//!
//! Each measured outcome is propagated through the continuous-time Markov
//! process over unit process time. Waiting times are exponential with the
//! current total outflow rate, and each event applies one generator chosen
//! proportionally to its rate, so the final string is an exact draw from
//! the corresponding column of `exp(G)`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::CtmpModel;
use crate::rng::RngStream;
use crate::statevector::CountsMap;

/// Sample the noisy readout of one ideal outcome.
pub fn apply_readout_noise<R: Rng>(ideal: u64, model: &CtmpModel, rng: &mut R) -> u64 {
    let mut x = ideal;
    let mut t = 0.0f64;
    loop {
        let outflow = model.total_outflow(x);
        if outflow <= 0.0 {
            return x;
        }
        let wait: f64 = Exp1.sample(rng);
        t += wait / outflow;
        if t > 1.0 {
            return x;
        }
        let mut u = rng.gen::<f64>() * outflow;
        for term in model.compiled() {
            if !term.matches(x) {
                continue;
            }
            if u < term.rate {
                x ^= term.flip;
                break;
            }
            u -= term.rate;
        }
    }
}

/// Pass every recorded shot through the noise channel.
///
/// Work is split into fixed-size chunks, each with its own derived
/// sub-stream, so the result does not depend on the worker count. Merging
/// is count-summation and therefore order-insensitive.
pub fn apply_noise_to_counts(
    counts: &CountsMap,
    model: &CtmpModel,
    stream: &RngStream,
) -> Result<CountsMap> {
    if counts.num_qubits() != model.num_qubits() {
        return Err(Error::QubitMismatch {
            left: counts.num_qubits(),
            right: model.num_qubits(),
        });
    }
    let mut shots: Vec<u64> = Vec::with_capacity(counts.total() as usize);
    for (outcome, count) in counts.iter() {
        shots.extend(std::iter::repeat(outcome).take(count as usize));
    }

    const CHUNK: usize = 1 << 14;
    let partials: Vec<CountsMap> = shots
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(chunk_idx, chunk)| {
            let mut rng = stream.derive("noise-chunk", chunk_idx as u64).rng();
            let mut partial = CountsMap::new(model.num_qubits());
            for &ideal in chunk {
                partial.record(apply_readout_noise(ideal, model, &mut rng), 1);
            }
            partial
        })
        .collect();

    let mut merged = CountsMap::new(model.num_qubits());
    for partial in &partials {
        merged.merge(partial)?;
    }
    Ok(merged)
}
