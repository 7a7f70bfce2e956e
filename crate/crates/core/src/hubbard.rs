//! Fermi-Hubbard Hamiltonians on a 1-D chain.
//!
//! `H = -t Σ_{<j,k>,σ} (a†_{jσ} a_{kσ} + a†_{kσ} a_{jσ}) + U Σ_k n_{k↑} n_{k↓}`
//!
//! Spin-orbital ordering: qubit `2k` holds site-k spin-up, qubit `2k+1`
//! holds site-k spin-down, so the on-site interaction stays local. Energies
//! are in units of the tunneling parameter when `t = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{map_fermion_op, number_operator, LadderKind, Mapping};
use crate::pauli::Observable;

/// Qubits needed for `num_sites` (one spin-orbital per site and spin).
pub fn hubbard_qubits(num_sites: usize) -> usize {
    2 * num_sites
}

/// Nearest-neighbor edges of the chain. The periodic wrap `(L-1, 0)` is
/// added only for `L >= 3`: at `L = 2` it would duplicate the single chain
/// edge and double the hopping, and `L = 1` has no neighbors at all.
pub fn chain_edges(num_sites: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..num_sites.saturating_sub(1)).map(|k| (k, k + 1)).collect();
    if periodic && num_sites >= 3 {
        edges.push((num_sites - 1, 0));
    }
    edges
}

/// Build the Hubbard Hamiltonian as a simplified Hermitian observable.
pub fn build_hubbard(
    num_sites: usize,
    t: f64,
    u: f64,
    periodic: bool,
    mapping: Mapping,
) -> Result<Observable> {
    if num_sites == 0 {
        return Err(Error::InvalidArgument("num_sites must be >= 1".into()));
    }
    let n = hubbard_qubits(num_sites);
    let mode = |site: usize, spin: usize| 2 * site + spin;

    let mut h = Observable::zero(n);
    for (j, k) in chain_edges(num_sites, periodic) {
        for spin in 0..2 {
            let raise_j = map_fermion_op(mode(j, spin), n, LadderKind::Raise, mapping)?;
            let lower_j = map_fermion_op(mode(j, spin), n, LadderKind::Lower, mapping)?;
            let raise_k = map_fermion_op(mode(k, spin), n, LadderKind::Raise, mapping)?;
            let lower_k = map_fermion_op(mode(k, spin), n, LadderKind::Lower, mapping)?;
            let hop = raise_j.multiply(&lower_k)?.add(&raise_k.multiply(&lower_j)?)?;
            h = h.add(&hop.scale(Complex64::new(-t, 0.0)))?;
        }
    }
    for k in 0..num_sites {
        let n_up = number_operator(mode(k, 0), n, mapping)?;
        let n_down = number_operator(mode(k, 1), n, mapping)?;
        h = h.add(&n_up.multiply(&n_down)?.scale(Complex64::new(u, 0.0)))?;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_spectrum;

    #[test]
    fn single_site_spectrum_is_interaction_only() {
        let h = build_hubbard(1, 1.0, 2.0, true, Mapping::JordanWigner).unwrap();
        let eigs = dense_spectrum(&h).unwrap();
        let expected = [0.0, 0.0, 0.0, 2.0];
        for (e, x) in eigs.iter().zip(expected.iter()) {
            assert!((e - x).abs() < 1e-12, "{eigs:?}");
        }
    }

    #[test]
    fn two_site_ground_energy_matches_frozen_oracle() {
        // half-filled singlet: U/2 - sqrt((U/2)^2 + 4 t^2) = 1 - sqrt(5)
        let frozen = 1.0 - 5f64.sqrt();
        let h = build_hubbard(2, 1.0, 2.0, true, Mapping::JordanWigner).unwrap();
        let eigs = dense_spectrum(&h).unwrap();
        assert!((eigs[0] - frozen).abs() < 1e-9, "ground {} vs {frozen}", eigs[0]);
    }

    #[test]
    fn mappings_share_spectra() {
        for sites in [1, 2, 3] {
            let jw = build_hubbard(sites, 1.0, 2.0, true, Mapping::JordanWigner).unwrap();
            let bk = build_hubbard(sites, 1.0, 2.0, true, Mapping::BravyiKitaev).unwrap();
            let ejw = dense_spectrum(&jw).unwrap();
            let ebk = dense_spectrum(&bk).unwrap();
            let worst = ejw
                .iter()
                .zip(ebk.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9, "spectra differ by {worst} at L={sites}");
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        for mapping in [Mapping::JordanWigner, Mapping::BravyiKitaev] {
            let h = build_hubbard(3, 1.0, 2.0, true, mapping).unwrap();
            assert!(h.imag_residual() < 1e-12);
        }
    }

    #[test]
    fn zero_sites_is_error() {
        assert!(build_hubbard(0, 1.0, 2.0, false, Mapping::JordanWigner).is_err());
    }

    #[test]
    fn periodic_wrap_rules() {
        assert_eq!(chain_edges(1, true), vec![]);
        assert_eq!(chain_edges(2, true), vec![(0, 1)]);
        assert_eq!(chain_edges(3, true), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(chain_edges(4, false), vec![(0, 1), (1, 2), (2, 3)]);
    }
}
