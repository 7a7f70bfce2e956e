//! Symplectic bit-mask Pauli strings and weighted sums of them.
//!
//! A term is stored as an `(x_mask, z_mask)` pair plus a complex
//! coefficient. The canonical operator for a mask pair is the Hermitian
//! product `i^|x & z| * X^x * Z^z`, so a qubit with both bits set carries a
//! `Y`. The identity is `x = z = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::Statevector;

/// Coefficients below this magnitude are dropped during simplification.
pub const COEFF_EPS: f64 = 1e-12;

/// Tolerance on residual imaginary weight for Hermiticity checks.
pub const HERMITICITY_EPS: f64 = 1e-10;

/// One Pauli string with a complex weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub x_mask: u64,
    pub z_mask: u64,
    pub coefficient: Complex64,
}

impl PauliTerm {
    pub fn new(x_mask: u64, z_mask: u64, coefficient: Complex64) -> Self {
        PauliTerm { x_mask, z_mask, coefficient }
    }

    /// The identity with a real weight.
    pub fn identity(weight: f64) -> Self {
        PauliTerm::new(0, 0, Complex64::new(weight, 0.0))
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Qubits on which the term acts nontrivially.
    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    /// Phase picked up by the canonical Pauli on basis state |b⟩:
    /// `P|b⟩ = phase(b) |b ^ x_mask⟩`.
    pub fn basis_phase(&self, b: u64) -> Complex64 {
        let quarter_turns = (self.x_mask & self.z_mask).count_ones();
        let sign = if (b & self.z_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        I_POWERS[(quarter_turns % 4) as usize] * sign
    }

    /// Symplectic product of two Pauli strings.
    ///
    /// Masks XOR; the coefficient picks up the standard power-of-i phase
    /// from reordering `Z^z1 X^x2` and from the canonical-Y bookkeeping.
    pub fn multiply(&self, other: &PauliTerm) -> PauliTerm {
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let p1 = (self.x_mask & self.z_mask).count_ones();
        let p2 = (other.x_mask & other.z_mask).count_ones();
        let p3 = (x & z).count_ones();
        let anti = (self.z_mask & other.x_mask).count_ones();
        // i^(p1 + p2 - p3 + 2*anti)
        let exponent = (p1 as i64 + p2 as i64 - p3 as i64 + 2 * anti as i64).rem_euclid(4);
        PauliTerm::new(x, z, self.coefficient * other.coefficient * I_POWERS[exponent as usize])
    }

    /// Render as a label with qubit 0 rightmost, e.g. `XIZ`.
    pub fn label(&self, num_qubits: usize) -> String {
        (0..num_qubits)
            .rev()
            .map(|q| {
                let x = self.x_mask >> q & 1 == 1;
                let z = self.z_mask >> q & 1 == 1;
                match (x, z) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (false, true) => 'Z',
                    (true, true) => 'Y',
                }
            })
            .collect()
    }

    /// Parse a label with qubit 0 rightmost.
    pub fn from_label(label: &str, coefficient: Complex64) -> Result<Self> {
        let n = label.len();
        let mut x = 0u64;
        let mut z = 0u64;
        for (i, ch) in label.chars().enumerate() {
            let q = n - 1 - i;
            match ch {
                'I' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                _ => {
                    return Err(Error::InvalidData(format!(
                        "Pauli label {label:?} has invalid character {ch:?}"
                    )))
                }
            }
        }
        Ok(PauliTerm::new(x, z, coefficient))
    }
}

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// A simplified sum of Pauli terms on a fixed number of qubits.
///
/// Terms are deduplicated by mask pair, stored in a fixed order, and terms
/// with negligible coefficients are removed, so structurally equal
/// observables compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    num_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl Observable {
    /// Build from raw terms, merging duplicates and dropping negligible
    /// coefficients.
    pub fn new(num_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let width_mask = if num_qubits >= 64 { u64::MAX } else { (1u64 << num_qubits) - 1 };
        let mut merged: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for t in terms {
            if t.x_mask & !width_mask != 0 || t.z_mask & !width_mask != 0 {
                return Err(Error::InvalidData(format!(
                    "Pauli masks ({:#x}, {:#x}) exceed {num_qubits} qubits",
                    t.x_mask, t.z_mask
                )));
            }
            *merged.entry((t.x_mask, t.z_mask)).or_insert(Complex64::new(0.0, 0.0)) +=
                t.coefficient;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_EPS)
            .map(|((x, z), c)| PauliTerm::new(x, z, c))
            .collect();
        Ok(Observable { num_qubits, terms })
    }

    /// The zero observable.
    pub fn zero(num_qubits: usize) -> Self {
        Observable { num_qubits, terms: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Largest residual imaginary coefficient magnitude.
    pub fn imag_residual(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.imag_residual() <= HERMITICITY_EPS
    }

    pub fn add(&self, other: &Observable) -> Result<Observable> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        Observable::new(self.num_qubits, self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn scale(&self, factor: Complex64) -> Observable {
        Observable::new(
            self.num_qubits,
            self.terms.iter().map(|t| PauliTerm::new(t.x_mask, t.z_mask, t.coefficient * factor)),
        )
        .expect("masks already validated")
    }

    /// Operator product, expanded term by term and simplified.
    pub fn multiply(&self, other: &Observable) -> Result<Observable> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(a.multiply(b));
            }
        }
        Observable::new(self.num_qubits, out)
    }

    /// ⟨ψ|O|ψ⟩ by direct Pauli action on the amplitudes.
    ///
    /// Requires a Hermitian observable; the result is real up to roundoff.
    pub fn exact_expectation(&self, state: &Statevector) -> Result<f64> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::QubitMismatch {
                left: self.num_qubits,
                right: state.num_qubits(),
            });
        }
        if !self.is_hermitian() {
            return Err(Error::NonHermitian(self.imag_residual()));
        }
        let amps = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut term_acc = Complex64::new(0.0, 0.0);
            for (j, amp) in amps.iter().enumerate() {
                let src = j as u64 ^ t.x_mask;
                term_acc += amp.conj() * t.basis_phase(src) * amps[src as usize];
            }
            acc += t.coefficient * term_acc;
        }
        debug_assert!(acc.im.abs() < 1e-8, "expectation has imaginary residue {}", acc.im);
        Ok(acc.re)
    }

    /// Serialize to the portable JSON list of labeled terms.
    pub fn to_json(&self) -> String {
        let entries: Vec<ObservableTermFile> = self
            .terms
            .iter()
            .map(|t| ObservableTermFile {
                pauli_label: t.label(self.num_qubits),
                coeff_re: t.coefficient.re,
                coeff_im: t.coefficient.im,
            })
            .collect();
        serde_json::to_string_pretty(&entries).expect("serializable")
    }

    /// Parse the JSON list of labeled terms. All labels must share one width.
    pub fn from_json(json: &str) -> Result<Observable> {
        let entries: Vec<ObservableTermFile> = serde_json::from_str(json)?;
        let num_qubits = entries
            .first()
            .map(|e| e.pauli_label.len())
            .ok_or_else(|| Error::InvalidData("empty observable file".into()))?;
        let mut terms = Vec::with_capacity(entries.len());
        for e in &entries {
            if e.pauli_label.len() != num_qubits {
                return Err(Error::InvalidData(format!(
                    "label {:?} has width {}, expected {num_qubits}",
                    e.pauli_label,
                    e.pauli_label.len()
                )));
            }
            terms.push(PauliTerm::from_label(
                &e.pauli_label,
                Complex64::new(e.coeff_re, e.coeff_im),
            )?);
        }
        Observable::new(num_qubits, terms)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)*{}", t.coefficient.re, t.coefficient.im, t.label(self.num_qubits))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ObservableTermFile {
    pauli_label: String,
    coeff_re: f64,
    coeff_im: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::statevector::Gate;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliTerm::from_label("X", c(1.0, 0.0)).unwrap();
        let z = PauliTerm::from_label("Z", c(1.0, 0.0)).unwrap();
        let prod = x.multiply(&z);
        assert_eq!(prod.label(1), "Y");
        assert!((prod.coefficient - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn pauli_squares_to_identity() {
        for label in ["X", "Y", "Z", "I"] {
            let p = PauliTerm::from_label(label, c(1.0, 0.0)).unwrap();
            let sq = p.multiply(&p);
            assert!(sq.is_identity());
            assert!((sq.coefficient - c(1.0, 0.0)).norm() < 1e-15, "{label}^2");
        }
    }

    #[test]
    fn z0_times_z0z1_is_z1() {
        let a = PauliTerm::from_label("IZ", c(1.0, 0.0)).unwrap();
        let b = PauliTerm::from_label("ZZ", c(1.0, 0.0)).unwrap();
        let prod = a.multiply(&b);
        assert_eq!(prod.label(2), "ZI");
        assert!((prod.coefficient - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn multiplication_is_associative_on_random_triples() {
        let mut rng = RngStream::from_seed(5150).rng();
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=8u32);
            let mask = (1u64 << n) - 1;
            let mk = |rng: &mut rand_chacha::ChaCha12Rng| {
                PauliTerm::new(rng.gen::<u64>() & mask, rng.gen::<u64>() & mask, c(1.0, 0.0))
            };
            let (p, q, r) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let left = p.multiply(&q).multiply(&r);
            let right = p.multiply(&q.multiply(&r));
            assert_eq!(left.x_mask, right.x_mask);
            assert_eq!(left.z_mask, right.z_mask);
            assert_eq!(left.coefficient, right.coefficient);
        }
    }

    #[test]
    fn observable_merges_and_drops_terms()  {
        let obs = Observable::new(
            2,
            [
                PauliTerm::from_label("XI", c(0.5, 0.0)).unwrap(),
                PauliTerm::from_label("XI", c(0.5, 0.0)).unwrap(),
                PauliTerm::from_label("ZZ", c(1e-14, 0.0)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(obs.terms().len(), 1);
        assert!((obs.terms()[0].coefficient - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn expectation_of_z_on_zero_state() {
        let sv = Statevector::new_zero_state(1).unwrap();
        let z = Observable::new(1, [PauliTerm::from_label("Z", c(1.0, 0.0)).unwrap()]).unwrap();
        assert!((z.exact_expectation(&sv).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_of_x_on_plus_state() {
        let mut sv = Statevector::new_zero_state(1).unwrap();
        sv.apply_gate(Gate::H(0)).unwrap();
        let x = Observable::new(1, [PauliTerm::from_label("X", c(1.0, 0.0)).unwrap()]).unwrap();
        assert!((x.exact_expectation(&sv).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let sv = Statevector::new_zero_state(1).unwrap();
        let bad = Observable::new(1, [PauliTerm::from_label("Z", c(0.0, 1.0)).unwrap()]).unwrap();
        assert!(matches!(bad.exact_expectation(&sv), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn json_round_trip_preserves_terms() {
        let obs = Observable::new(
            3,
            [
                PauliTerm::from_label("XYZ", c(0.25, 0.0)).unwrap(),
                PauliTerm::from_label("IIZ", c(-1.5, 0.0)).unwrap(),
                PauliTerm::from_label("III", c(0.75, 0.0)).unwrap(),
            ],
        )
        .unwrap();
        let back = Observable::from_json(&obs.to_json()).unwrap();
        assert_eq!(obs, back);
    }

    #[test]
    fn label_parsing_is_positional() {
        // Qubit 0 is the rightmost character.
        let t = PauliTerm::from_label("XIZ", c(1.0, 0.0)).unwrap();
        assert_eq!(t.x_mask, 0b100);
        assert_eq!(t.z_mask, 0b001);
        assert_eq!(t.label(3), "XIZ");
    }
}
