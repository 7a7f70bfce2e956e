//! Small dense linear-algebra helpers.
//!
//! The 4x4 principal matrix logarithm backs the calibration fitter. The
//! dense observable/spectrum routines exist for cross-checks against the
//! sparse Pauli-action paths and stay practical only at oracle scale.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::Observable;

/// Materialize an observable as a dense `2^n x 2^n` matrix.
pub fn observable_to_dense(obs: &Observable) -> DMatrix<Complex64> {
    let dim = 1usize << obs.num_qubits();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in obs.terms() {
        for col in 0..dim {
            let row = col ^ t.x_mask as usize;
            m[(row, col)] += t.coefficient * t.basis_phase(col as u64);
        }
    }
    m
}

/// All eigenvalues of a Hermitian observable, ascending.
pub fn dense_spectrum(obs: &Observable) -> Result<Vec<f64>> {
    if !obs.is_hermitian() {
        return Err(Error::NonHermitian(obs.imag_residual()));
    }
    let m = observable_to_dense(obs);
    let mut eigs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    Ok(eigs)
}

/// Principal logarithm of a real 4x4 matrix with spectrum in the open right
/// half-plane.
///
/// Inverse scaling-and-squaring: repeated Denman-Beavers square roots bring
/// the matrix near the identity, then a Gregory series evaluates the log.
/// Eigenvalues with modulus below `1e-8` or negative real part make the
/// principal log unreliable for this use and are reported as an error.
pub fn principal_log_4x4(a: &Matrix4<f64>) -> std::result::Result<Matrix4<f64>, String> {
    for eig in a.complex_eigenvalues().iter() {
        if eig.norm() < 1e-8 {
            return Err(format!("eigenvalue {eig} too close to zero"));
        }
        if eig.re < 0.0 {
            return Err(format!("eigenvalue {eig} has negative real part"));
        }
    }

    let mut y = *a;
    let mut squarings = 0u32;
    while one_norm(&(y - Matrix4::identity())) > 0.25 {
        y = denman_beavers_sqrt(&y)?;
        squarings += 1;
        if squarings > 40 {
            return Err("square-root scaling did not converge".into());
        }
    }

    // log(Y) = 2 * sum_{k odd} W^k / k with W = (Y - I)(Y + I)^-1.
    let num = y - Matrix4::identity();
    let den_inv = (y + Matrix4::identity())
        .try_inverse()
        .ok_or_else(|| "singular Y + I in log series".to_string())?;
    let w = num * den_inv;
    let w2 = w * w;
    let mut term = w;
    let mut log = Matrix4::zeros();
    for k in 0..24 {
        let contrib = term / (2.0 * k as f64 + 1.0);
        log += contrib;
        if one_norm(&contrib) < 1e-17 {
            break;
        }
        term *= w2;
    }
    log *= 2.0;
    Ok(log * 2f64.powi(squarings as i32))
}

fn denman_beavers_sqrt(a: &Matrix4<f64>) -> std::result::Result<Matrix4<f64>, String> {
    let mut y = *a;
    let mut z = Matrix4::<f64>::identity();
    for _ in 0..60 {
        let y_inv = y.try_inverse().ok_or_else(|| "singular iterate in matrix sqrt".to_string())?;
        let z_inv = z.try_inverse().ok_or_else(|| "singular iterate in matrix sqrt".to_string())?;
        let y_next = (y + z_inv) * 0.5;
        let z_next = (z + y_inv) * 0.5;
        let delta = one_norm(&(y_next - y));
        y = y_next;
        z = z_next;
        if delta < 1e-15 {
            return Ok(y);
        }
    }
    Ok(y)
}

fn one_norm(m: &Matrix4<f64>) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a / 2f64.powi(squarings);

    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        let t_norm = term.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if t_norm < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
