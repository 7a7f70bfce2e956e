//! Dense statevector simulation of small parameterized circuits.
//!
//! Qubit ordering convention used everywhere in this crate: bit `i` of an
//! outcome is qubit `i`, and the amplitude index is the integer with qubit 0
//! as its least-significant bit. Bitstring renderings therefore put qubit 0
//! rightmost.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Dense-statevector memory cap.
pub const MAX_QUBITS: usize = 24;

/// A gate from the minimal set needed for ansatz circuits, calibration-state
/// preparation, and Pauli basis changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    /// Y-rotation by an angle in radians.
    Ry(usize, f64),
    Cz(usize, usize),
    Sdg(usize),
}

impl Gate {
    /// Qubit indices the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Ry(q, _) | Gate::Sdg(q) => vec![q],
            Gate::Cz(a, b) => vec![a, b],
        }
    }
}

/// An ordered list of gates on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    /// Append a gate, checking its indices against the circuit width.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(Error::QubitIndex { index: q, num_qubits: self.num_qubits });
            }
        }
        if let Gate::Cz(a, b) = gate {
            if a == b {
                return Err(Error::InvalidArgument("CZ targets must be distinct".into()));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Append all gates of `other` (widths must agree).
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }
}

/// 2^n complex amplitudes of an n-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state.
    pub fn new_zero_state(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount { got: num_qubits, max: MAX_QUBITS });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amplitudes })
    }

    /// The computational basis state |basis⟩.
    pub fn basis_state(num_qubits: usize, basis: u64) -> Result<Self> {
        let mut sv = Self::new_zero_state(num_qubits)?;
        if basis >> num_qubits != 0 {
            return Err(Error::InvalidArgument(format!(
                "basis state {basis} does not fit in {num_qubits} qubits"
            )));
        }
        sv.amplitudes[0] = Complex64::new(0.0, 0.0);
        sv.amplitudes[basis as usize] = Complex64::new(1.0, 0.0);
        Ok(sv)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Apply a single gate in place.
    pub fn apply_gate(&mut self, gate: Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(Error::QubitIndex { index: q, num_qubits: self.num_qubits });
            }
        }
        match gate {
            Gate::H(q) => {
                let f = std::f64::consts::FRAC_1_SQRT_2;
                self.update_pairs(q, |a, b| (f * (a + b), f * (a - b)));
            }
            Gate::X(q) => {
                self.update_pairs(q, |a, b| (b, a));
            }
            Gate::Ry(q, theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                self.update_pairs(q, |a, b| (c * a - s * b, s * a + c * b));
            }
            Gate::Sdg(q) => {
                let step = 1usize << q;
                for amp in self
                    .amplitudes
                    .iter_mut()
                    .enumerate()
                    .filter_map(|(i, a)| (i & step != 0).then_some(a))
                {
                    *amp *= Complex64::new(0.0, -1.0);
                }
            }
            Gate::Cz(a, b) => {
                if a == b {
                    return Err(Error::InvalidArgument("CZ targets must be distinct".into()));
                }
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    fn update_pairs(&mut self, qubit: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let step = 1usize << qubit;
        for base in (0..self.amplitudes.len()).step_by(2 * step) {
            for offset in 0..step {
                let lo = base + offset;
                let hi = lo + step;
                let (a, b) = (self.amplitudes[lo], self.amplitudes[hi]);
                let (na, nb) = f(a, b);
                self.amplitudes[lo] = na;
                self.amplitudes[hi] = nb;
            }
        }
    }

    /// Apply every gate of `circuit` in order.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch {
                left: self.num_qubits,
                right: circuit.num_qubits,
            });
        }
        for &g in &circuit.gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Measurement probabilities |amplitude|^2 for every outcome.
    pub fn exact_probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Squared norm of the state; 1 up to roundoff after unitary gates.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Draw `shots` independent outcomes from the measurement distribution.
    ///
    /// Inverse-CDF sampling with one uniform draw per shot; deterministic
    /// given the generator state.
    pub fn sample_counts<R: Rng>(&self, shots: u64, rng: &mut R) -> Result<CountsMap> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        let mut cdf = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for a in &self.amplitudes {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut counts = CountsMap::new(self.num_qubits);
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            counts.record(idx as u64, 1);
        }
        Ok(counts)
    }
}

/// Measured-bitstring occurrence counts.
///
/// The interface between sampling, the readout-noise channel, and
/// mitigation. Outcomes are stored as integers under the crate's qubit
/// ordering; map iteration is in ascending outcome order, so merged and
/// serialized forms are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsMap {
    num_qubits: usize,
    entries: BTreeMap<u64, u64>,
}

impl CountsMap {
    pub fn new(num_qubits: usize) -> Self {
        CountsMap { num_qubits, entries: BTreeMap::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Add `count` occurrences of `outcome`.
    pub fn record(&mut self, outcome: u64, count: u64) {
        if count > 0 {
            *self.entries.entry(outcome).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn get(&self, outcome: u64) -> u64 {
        self.entries.get(&outcome).copied().unwrap_or(0)
    }

    /// Iterate `(outcome, count)` in ascending outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merge by count-summation (associative and commutative, so partial
    /// maps from parallel workers combine in any order).
    pub fn merge(&mut self, other: &CountsMap) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        for (outcome, count) in other.iter() {
            self.record(outcome, count);
        }
        Ok(())
    }
}

/// Render an outcome as an n-bit string with qubit 0 rightmost.
pub fn bitstring(outcome: u64, num_qubits: usize) -> String {
    (0..num_qubits)
        .rev()
        .map(|q| if outcome >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parse an n-bit string with qubit 0 rightmost.
pub fn parse_bitstring(s: &str, num_qubits: usize) -> Result<u64> {
    if s.len() != num_qubits {
        return Err(Error::InvalidData(format!(
            "bitstring {s:?} has length {}, expected {num_qubits}",
            s.len()
        )));
    }
    let mut v = 0u64;
    for (i, ch) in s.chars().enumerate() {
        let q = num_qubits - 1 - i;
        match ch {
            '1' => v |= 1 << q,
            '0' => {}
            _ => return Err(Error::InvalidData(format!("bitstring {s:?} has non-binary digit"))),
        }
    }
    Ok(v)
}
