//! Signed Monte-Carlo estimation of error-mitigated expectation values.
//!
//! With `B = I + G/γ` (a stochastic matrix), the inverse assignment matrix
//! expands as
//!
//! `A^-1 = e^G^-1 = e^{2γ} Σ_k (-1)^k Pois_γ(k) B^k`,
//!
//! so an unbiased estimate of `Σ_x O(x) (A^-1 p)(x)` draws a noisy outcome
//! from the measured counts, a Poisson step count `k` with mean `γ`, walks
//! the outcome through `k` steps of the `B`-chain, and accumulates
//! `(-1)^k e^{2γ} O(final)`. The payoff is bias removal at the price of a
//! variance inflated by roughly `e^{4γ}`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grouping::expectation_and_error_from_counts;
use crate::model::CtmpModel;
use crate::rng::RngStream;
use crate::statevector::CountsMap;

/// Cap applied to the default sample-count rule.
pub const MAX_DEFAULT_SAMPLES: u64 = 100_000_000;

/// Default number of estimator samples: `ceil(e^{4γ}) * total_shots`,
/// capped. Matches the variance-inflation factor so the mitigated standard
/// error stays comparable to the unmitigated one.
pub fn default_num_samples(gamma: f64, total_shots: u64) -> u64 {
    let factor = (4.0 * gamma).exp().ceil();
    let samples = (factor * total_shots as f64).min(MAX_DEFAULT_SAMPLES as f64);
    (samples as u64).max(1)
}

/// Mitigated expectation value and standard error of the mean.
///
/// `diagonal_terms` are `(z_mask, weight)` pairs as produced by the
/// measurement grouping; `counts` are the noisy measured outcomes. The
/// model's cached gamma must be current. With `γ = 0` the estimator
/// degenerates to the raw empirical expectation and its binomial standard
/// error.
pub fn mitigate_expectation(
    counts: &CountsMap,
    model: &CtmpModel,
    diagonal_terms: &[(u64, f64)],
    num_samples: u64,
    stream: &RngStream,
) -> Result<(f64, f64)> {
    if counts.num_qubits() != model.num_qubits() {
        return Err(Error::QubitMismatch {
            left: counts.num_qubits(),
            right: model.num_qubits(),
        });
    }
    if num_samples == 0 {
        return Err(Error::InvalidArgument("num_samples must be >= 1".into()));
    }
    let gamma = model.current_gamma()?;
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidArgument("counts are empty".into()));
    }
    if gamma == 0.0 {
        return expectation_and_error_from_counts(counts, diagonal_terms);
    }

    // cumulative counts for inverse-CDF draws from the empirical distribution
    let outcomes: Vec<u64> = counts.iter().map(|(x, _)| x).collect();
    let cumulative: Vec<u64> = counts
        .iter()
        .scan(0u64, |acc, (_, c)| {
            *acc += c;
            Some(*acc)
        })
        .collect();

    let weight = (2.0 * gamma).exp();
    const CHUNK: u64 = 1 << 16;
    let num_chunks = num_samples.div_ceil(CHUNK);

    let partials: Vec<(f64, f64)> = (0..num_chunks)
        .into_par_iter()
        .map(|chunk_idx| {
            let mut rng = stream.derive("mitigation-chunk", chunk_idx).rng();
            let poisson = Poisson::new(gamma).expect("gamma > 0");
            let chunk_samples = CHUNK.min(num_samples - chunk_idx * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..chunk_samples {
                let draw = rng.gen_range(0..total);
                let idx = cumulative.partition_point(|&c| c <= draw);
                let mut x = outcomes[idx];

                let steps = poisson.sample(&mut rng) as u64;
                for _ in 0..steps {
                    // one B-chain step: stay with probability 1 - Γ(x)/γ,
                    // otherwise jump via a generator chosen by rate
                    let mut u = rng.gen::<f64>() * gamma;
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

                let mut observed = 0.0;
                for &(z_mask, w) in diagonal_terms {
                    let sign = if (x & z_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    observed += w * sign;
                }
                let value = if steps % 2 == 0 { weight * observed } else { -weight * observed };
                sum += value;
                sum_sq += value * value;
            }
            (sum, sum_sq)
        })
        .collect();

    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(a, b), &(s, q)| (a + s, b + q));
    let n = num_samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0).max(1.0)).max(0.0);
    Ok((mean, (variance / n).sqrt()))
}
