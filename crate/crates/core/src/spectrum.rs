//! Smallest eigenvalue of a Hermitian observable.
//!
//! Lanczos iteration on the Pauli-action matvec with full
//! reorthogonalization. The matrix is never materialized; each step costs
//! `O(terms * 2^n)`. Used as the noiseless reference energy for the VQE
//! experiments.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::Observable;
use crate::rng::RngStream;

/// Dimension cap for the ground-energy solver.
pub const MAX_GROUND_QUBITS: usize = 12;

/// Apply the observable to a dense vector: `out += O v`.
pub fn apply_observable(obs: &Observable, v: &[Complex64], out: &mut [Complex64]) {
    debug_assert_eq!(v.len(), out.len());
    for t in obs.terms() {
        let x = t.x_mask as usize;
        for (i, &amp) in v.iter().enumerate() {
            out[i ^ x] += t.coefficient * t.basis_phase(i as u64) * amp;
        }
    }
}

/// Smallest eigenvalue, accurate to 1e-8 for the supported sizes.
pub fn exact_ground_energy(obs: &Observable) -> Result<f64> {
    let n = obs.num_qubits();
    if n > MAX_GROUND_QUBITS {
        return Err(Error::QubitCount { got: n, max: MAX_GROUND_QUBITS });
    }
    if !obs.is_hermitian() {
        return Err(Error::NonHermitian(obs.imag_residual()));
    }
    if obs.terms().is_empty() {
        return Ok(0.0);
    }
    let dim = 1usize << n;
    let steps = dim.min(220);

    // Fixed internal seed: the result is deterministic and the start vector
    // overlaps the ground space with probability one.
    let mut rng = RngStream::from_seed(0x6c61_6e63_7a6f_7331).rng();
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(steps);
    let mut alphas: Vec<f64> = Vec::with_capacity(steps);
    let mut betas: Vec<f64> = Vec::with_capacity(steps);

    let mut v = random_unit(dim, &mut rng);
    loop {
        basis.push(v.clone());
        let j = basis.len() - 1;

        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        apply_observable(obs, &basis[j], &mut w);
        let alpha = dot(&basis[j], &w).re;
        alphas.push(alpha);

        if basis.len() == steps {
            break;
        }

        // w -= alpha v_j + beta_{j-1} v_{j-1}, then full reorthogonalization
        for (wi, vi) in w.iter_mut().zip(basis[j].iter()) {
            *wi -= alpha * vi;
        }
        if j > 0 && betas[j - 1] > 0.0 {
            let b = betas[j - 1];
            for (wi, vi) in w.iter_mut().zip(basis[j - 1].iter()) {
                *wi -= b * vi;
            }
        }
        for _ in 0..2 {
            for prev in &basis {
                let overlap = dot(prev, &w);
                for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                    *wi -= overlap * pi;
                }
            }
        }

        let beta = norm(&w);
        if beta > 1e-12 {
            betas.push(beta);
            for wi in w.iter_mut() {
                *wi /= beta;
            }
            v = w;
        } else {
            // Invariant subspace: deflate and continue in its complement.
            match random_orthogonal(dim, &basis, &mut rng) {
                Some(fresh) => {
                    betas.push(0.0);
                    v = fresh;
                }
                None => break,
            }
        }
    }

    let m = alphas.len();
    let tri = DMatrix::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i == j + 1 || j == i + 1 {
            betas[i.min(j)]
        } else {
            0.0
        }
    });
    let eigs = tri.symmetric_eigen().eigenvalues;
    Ok(eigs.iter().copied().fold(f64::INFINITY, f64::min))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn random_unit<R: Rng>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let nrm = norm(&v);
    for x in v.iter_mut() {
        *x /= nrm;
    }
    v
}

fn random_orthogonal<R: Rng>(
    dim: usize,
    basis: &[Vec<Complex64>],
    rng: &mut R,
) -> Option<Vec<Complex64>> {
    for _ in 0..8 {
        let mut v = random_unit(dim, rng);
        for prev in basis {
            let overlap = dot(prev, &v);
            for (vi, pi) in v.iter_mut().zip(prev.iter()) {
                *vi -= overlap * pi;
            }
        }
        let nrm = norm(&v);
        if nrm > 1e-8 {
            for x in v.iter_mut() {
                *x /= nrm;
            }
            return Some(v);
        }
    }
    None
}
