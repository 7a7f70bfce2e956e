//! Fermion-to-qubit mappings.
//!
//! Raising and lowering operators on a register of fermionic modes are
//! expanded into two-term Pauli observables under either the Jordan-Wigner
//! or the Bravyi-Kitaev encoding. The Bravyi-Kitaev index sets come from
//! the Fenwick-tree partial-sum structure, built recursively so it works
//! for any mode count, not just powers of two.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Observable, PauliTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mapping {
    JordanWigner,
    BravyiKitaev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Raise,
    Lower,
}

/// Expand a single raising or lowering operator as a two-term observable.
pub fn map_fermion_op(
    mode: usize,
    num_modes: usize,
    kind: LadderKind,
    mapping: Mapping,
) -> Result<Observable> {
    if mode >= num_modes {
        return Err(Error::QubitIndex { index: mode, num_qubits: num_modes });
    }
    // Majorana halves: raise = (c - i d)/2, lower = (c + i d)/2.
    let (c_part, d_part) = match mapping {
        Mapping::JordanWigner => {
            let z_string = (1u64 << mode) - 1;
            (
                PauliTerm::new(1 << mode, z_string, Complex64::new(1.0, 0.0)),
                PauliTerm::new(1 << mode, z_string | (1 << mode), Complex64::new(1.0, 0.0)),
            )
        }
        Mapping::BravyiKitaev => {
            let tree = FenwickTree::new(num_modes);
            let update = tree.update_mask(mode);
            let parity = tree.parity_mask(mode);
            let remainder = tree.remainder_mask(mode);
            (
                PauliTerm::new(update | (1 << mode), parity, Complex64::new(1.0, 0.0)),
                PauliTerm::new(update | (1 << mode), remainder | (1 << mode), Complex64::new(1.0, 0.0)),
            )
        }
    };
    let d_coeff = match kind {
        LadderKind::Raise => Complex64::new(0.0, -0.5),
        LadderKind::Lower => Complex64::new(0.0, 0.5),
    };
    Observable::new(
        num_modes,
        [
            PauliTerm::new(c_part.x_mask, c_part.z_mask, Complex64::new(0.5, 0.0)),
            PauliTerm::new(d_part.x_mask, d_part.z_mask, d_coeff),
        ],
    )
}

/// The number operator `a†_m a_m` for one mode.
pub fn number_operator(mode: usize, num_modes: usize, mapping: Mapping) -> Result<Observable> {
    let raise = map_fermion_op(mode, num_modes, LadderKind::Raise, mapping)?;
    let lower = map_fermion_op(mode, num_modes, LadderKind::Lower, mapping)?;
    raise.multiply(&lower)
}

/// Fenwick tree over mode indices, with parent/child links.
///
/// Ancestors of a node carry partial occupation sums that must be updated
/// when the node flips; descendants-of-ancestors below a node carry the
/// parity of the modes preceding it.
struct FenwickTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl FenwickTree {
    fn new(n: usize) -> Self {
        let mut tree = FenwickTree { parent: vec![None; n], children: vec![Vec::new(); n] };
        if n > 0 {
            tree.build(0, n - 1, n - 1);
        }
        tree
    }

    fn build(&mut self, left: usize, right: usize, parent: usize) {
        if left >= right {
            return;
        }
        let pivot = (left + right) >> 1;
        self.parent[pivot] = Some(parent);
        self.children[parent].push(pivot);
        self.build(left, pivot, pivot);
        self.build(pivot + 1, right, parent);
    }

    /// Ancestors of `j` (all have indices greater than `j`).
    fn update_mask(&self, j: usize) -> u64 {
        let mut mask = 0u64;
        let mut node = self.parent[j];
        while let Some(p) = node {
            mask |= 1 << p;
            node = self.parent[p];
        }
        mask
    }

    /// Children of ancestors of `j` with indices below `j`.
    fn remainder_mask(&self, j: usize) -> u64 {
        let mut mask = 0u64;
        let mut node = self.parent[j];
        while let Some(p) = node {
            for &c in &self.children[p] {
                if c < j {
                    mask |= 1 << c;
                }
            }
            node = self.parent[p];
        }
        mask
    }

    /// Nodes whose stored values XOR to the parity of modes `0..j`.
    fn parity_mask(&self, j: usize) -> u64 {
        let mut mask = self.remainder_mask(j);
        for &c in &self.children[j] {
            if c < j {
                mask |= 1 << c;
            }
        }
        mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::observable_to_dense;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jordan_wigner_mode0_has_no_z_string() {
        let obs = map_fermion_op(0, 1, LadderKind::Raise, Mapping::JordanWigner).unwrap();
        let mut labels: Vec<(String, Complex64)> =
            obs.terms().iter().map(|t| (t.label(1), t.coefficient)).collect();
        labels.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(labels.len(), 2);
        assert_eq!(labels[0].0, "X");
        assert!((labels[0].1 - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(labels[1].0, "Y");
        assert!((labels[1].1 - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn jordan_wigner_mode2_of_4_carries_z_string() {
        let obs = map_fermion_op(2, 4, LadderKind::Raise, Mapping::JordanWigner).unwrap();
        let mut labels: Vec<(String, Complex64)> =
            obs.terms().iter().map(|t| (t.label(4), t.coefficient)).collect();
        labels.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(labels[0].0, "IXZZ");
        assert!((labels[0].1 - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(labels[1].0, "IYZZ");
        assert!((labels[1].1 - c(0.0, -0.5)).norm() < 1e-15);
    }

    /// Dense canonical-anticommutation check for both mappings.
    fn check_car(mapping: Mapping, num_modes: usize, tol: f64) {
        let dim = 1usize << num_modes;
        let raise: Vec<DMatrix<Complex64>> = (0..num_modes)
            .map(|m| {
                observable_to_dense(&map_fermion_op(m, num_modes, LadderKind::Raise, mapping).unwrap())
            })
            .collect();
        let lower: Vec<DMatrix<Complex64>> = (0..num_modes)
            .map(|m| {
                observable_to_dense(&map_fermion_op(m, num_modes, LadderKind::Lower, mapping).unwrap())
            })
            .collect();
        let eye = DMatrix::<Complex64>::identity(dim, dim);
        for i in 0..num_modes {
            // lower must be the adjoint of raise
            let adj = raise[i].adjoint();
            assert!((&lower[i] - &adj).iter().all(|v| v.norm() < tol));
            for j in 0..num_modes {
                let anti = &lower[i] * &raise[j] + &raise[j] * &lower[i];
                let expected = if i == j { eye.clone() } else { DMatrix::zeros(dim, dim) };
                let worst = (&anti - &expected).iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!(worst < tol, "{{a_{i}, a†_{j}}} residual {worst} for {mapping:?}");
                let anti2 = &lower[i] * &lower[j] + &lower[j] * &lower[i];
                let worst2 = anti2.iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!(worst2 < tol, "{{a_{i}, a_{j}}} residual {worst2} for {mapping:?}");
            }
        }
    }

    #[test]
    fn canonical_anticommutation_small_registers() {
        for n in 1..=4 {
            check_car(Mapping::JordanWigner, n, 1e-10);
            check_car(Mapping::BravyiKitaev, n, 1e-10);
        }
    }

    #[test]
    fn canonical_anticommutation_six_modes() {
        check_car(Mapping::JordanWigner, 6, 1e-10);
        check_car(Mapping::BravyiKitaev, 6, 1e-10);
    }

    #[test]
    fn number_operator_is_projector() {
        for mapping in [Mapping::JordanWigner, Mapping::BravyiKitaev] {
            let n_op = number_operator(1, 3, mapping).unwrap();
            let dense = observable_to_dense(&n_op);
            // projector: n^2 = n, eigenvalues 0/1
            let sq = &dense * &dense;
            let worst = (&sq - &dense).iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(worst < 1e-12);
        }
    }

    #[test]
    fn mode_out_of_range_is_error() {
        assert!(map_fermion_op(4, 4, LadderKind::Raise, Mapping::JordanWigner).is_err());
    }
}
