//! Qubit-wise-commuting measurement groups.
//!
//! Estimating ⟨O⟩ from computational-basis shots requires rotating every
//! non-diagonal factor into the Z basis first. Terms that act with the same
//! (or no) Pauli on every shared qubit can be measured from one circuit, so
//! the observable is split greedily into such groups. The identity term is
//! never measured; it comes back as a constant offset.

use crate::error::{Error, Result};
use crate::pauli::Observable;
use crate::statevector::{Circuit, CountsMap, Gate};

/// One simultaneously-measurable batch of diagonalized terms.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    /// Basis change to append after the state-preparation circuit:
    /// `H` for X factors, `Sdg` then `H` for Y factors.
    pub basis_circuit: Circuit,
    /// `(z_mask, weight)` terms valid after the basis change.
    pub diagonal_terms: Vec<(u64, f64)>,
}

/// An observable split into measurement groups plus its identity offset.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedObservable {
    pub num_qubits: usize,
    pub groups: Vec<MeasurementGroup>,
    pub offset: f64,
}

/// Greedy first-fit grouping of a Hermitian observable.
///
/// Every non-identity term lands in exactly one group; within a group all
/// terms are qubit-wise commuting, so one basis-change circuit diagonalizes
/// them all.
pub fn group_observable(obs: &Observable) -> Result<GroupedObservable> {
    if !obs.is_hermitian() {
        return Err(Error::NonHermitian(obs.imag_residual()));
    }

    struct OpenGroup {
        x_basis: u64,
        y_basis: u64,
        z_basis: u64,
        terms: Vec<(u64, u64, f64)>,
    }

    let mut offset = 0.0;
    let mut open: Vec<OpenGroup> = Vec::new();
    for term in obs.terms() {
        if term.is_identity() {
            offset += term.coefficient.re;
            continue;
        }
        let y = term.x_mask & term.z_mask;
        let x = term.x_mask & !y;
        let z = term.z_mask & !y;
        let placed = open.iter_mut().find(|g| {
            let clash_x = x & (g.y_basis | g.z_basis);
            let clash_y = y & (g.x_basis | g.z_basis);
            let clash_z = z & (g.x_basis | g.y_basis);
            (clash_x | clash_y | clash_z) == 0
        });
        let entry = (term.x_mask, term.z_mask, term.coefficient.re);
        match placed {
            Some(g) => {
                g.x_basis |= x;
                g.y_basis |= y;
                g.z_basis |= z;
                g.terms.push(entry);
            }
            None => open.push(OpenGroup { x_basis: x, y_basis: y, z_basis: z, terms: vec![entry] }),
        }
    }

    let n = obs.num_qubits();
    let groups = open
        .into_iter()
        .map(|g| {
            let mut basis_circuit = Circuit::new(n);
            for q in 0..n {
                if g.y_basis >> q & 1 == 1 {
                    basis_circuit.push(Gate::Sdg(q))?;
                    basis_circuit.push(Gate::H(q))?;
                } else if g.x_basis >> q & 1 == 1 {
                    basis_circuit.push(Gate::H(q))?;
                }
            }
            let diagonal_terms =
                g.terms.into_iter().map(|(x, z, w)| (x | z, w)).collect();
            Ok(MeasurementGroup { basis_circuit, diagonal_terms })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GroupedObservable { num_qubits: n, groups, offset })
}

/// Empirical expectation of diagonal terms over measured counts:
/// `Σ_t w_t (1/N) Σ_x count(x) (-1)^{popcount(x & z_mask)}`.
pub fn expectation_from_counts(counts: &CountsMap, diagonal_terms: &[(u64, f64)]) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidArgument("counts are empty".into()));
    }
    let mut acc = 0.0;
    for &(z_mask, weight) in diagonal_terms {
        let mut signed: i64 = 0;
        for (outcome, count) in counts.iter() {
            let sign = if (outcome & z_mask).count_ones() % 2 == 0 { 1 } else { -1 };
            signed += sign * count as i64;
        }
        acc += weight * signed as f64 / total as f64;
    }
    Ok(acc)
}

/// Mean and standard error of the per-shot observable value over counts.
///
/// The variance is the empirical variance of `O(x) = Σ_t w_t (-1)^{...}`
/// across recorded shots, so the returned error is the binomial-style
/// standard error of the mean.
pub fn expectation_and_error_from_counts(
    counts: &CountsMap,
    diagonal_terms: &[(u64, f64)],
) -> Result<(f64, f64)> {
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidArgument("counts are empty".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (outcome, count) in counts.iter() {
        let mut value = 0.0;
        for &(z_mask, weight) in diagonal_terms {
            let sign = if (outcome & z_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            value += weight * sign;
        }
        sum += value * count as f64;
        sum_sq += value * value * count as f64;
    }
    let n = total as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    let std_error = if total > 1 { (variance / (n - 1.0)).sqrt() } else { 0.0 };
    Ok((mean, std_error))
}
