//! Calibration circuits and generator-rate fitting.
//!
//! Calibration prepares computational basis states, measures them, and
//! estimates the generator rates from the per-pair assignment statistics.
//! The input set of all bitstrings with Hamming weight <= 2 is complete:
//! every one- and two-qubit transition pattern appears among the prepared
//! labels. An `(n + 2)`-state subset (all-zeros, all-ones, and the n
//! weight-1 states) is already complete and is what a shot-starved run
//! would execute.
//!
//! Fitting takes, for every qubit pair, the principal matrix logarithm of
//! the pooled 4x4 assignment matrix. Two-qubit rates are read directly
//! from the off-diagonal entries (source column to target row); the rate of
//! a single-qubit flip is the mean of the matching entries over all
//! partners and both partner bit values. Negative entries, which arise
//! from shot noise, are clipped to zero.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::principal_log_4x4;
use crate::model::{CtmpModel, GeneratorKind, GeneratorTerm};
use crate::statevector::{bitstring, parse_bitstring, CountsMap};

/// All n-bit labels of Hamming weight <= 2, ascending; there are
/// `(n^2 + n + 2) / 2` of them.
pub fn calibration_state_labels(num_qubits: usize) -> Vec<u64> {
    let mut labels = vec![0u64];
    for i in 0..num_qubits {
        labels.push(1 << i);
    }
    for i in 0..num_qubits {
        for j in (i + 1)..num_qubits {
            labels.push((1 << i) | (1 << j));
        }
    }
    labels.sort_unstable();
    labels
}

/// The complete `(n + 2)`-state subset: all-zeros, all-ones, and every
/// weight-1 state. For `n = 1` the all-ones state coincides with the
/// weight-1 state, leaving two labels.
pub fn minimal_calibration_subset(num_qubits: usize) -> Vec<u64> {
    let all_ones = if num_qubits >= 64 { u64::MAX } else { (1u64 << num_qubits) - 1 };
    let mut labels = vec![0u64, all_ones];
    for i in 0..num_qubits {
        labels.push(1 << i);
    }
    labels.sort_unstable();
    labels.dedup();
    labels
}

/// Measured counts for a set of prepared basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet {
    num_qubits: usize,
    shots: u64,
    records: Vec<(u64, CountsMap)>,
}

impl CalibrationSet {
    /// Validate label uniqueness and per-record totals (a record may carry
    /// fewer counts than `shots` to allow for discarded hardware shots).
    pub fn new(num_qubits: usize, shots: u64, records: Vec<(u64, CountsMap)>) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument("calibration shots must be >= 1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (label, counts) in &records {
            if label >> num_qubits != 0 {
                return Err(Error::InvalidData(format!(
                    "label {label:#b} does not fit in {num_qubits} qubits"
                )));
            }
            if !seen.insert(*label) {
                return Err(Error::InvalidData(format!(
                    "duplicate calibration label {}",
                    bitstring(*label, num_qubits)
                )));
            }
            if counts.num_qubits() != num_qubits {
                return Err(Error::QubitMismatch {
                    left: counts.num_qubits(),
                    right: num_qubits,
                });
            }
            let total = counts.total();
            if total == 0 || total > shots {
                return Err(Error::InvalidData(format!(
                    "record {} carries {total} counts, expected 1..={shots}",
                    bitstring(*label, num_qubits)
                )));
            }
        }
        Ok(CalibrationSet { num_qubits, shots, records })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn records(&self) -> &[(u64, CountsMap)] {
        &self.records
    }

    pub fn to_json_string(&self) -> String {
        let file = CalibrationFile {
            num_qubits: self.num_qubits,
            shots: self.shots,
            bit_order: BitOrder::Qubit0Rightmost,
            results: self
                .records
                .iter()
                .map(|(label, counts)| CalibrationRecordFile {
                    label: bitstring(*label, self.num_qubits),
                    counts: counts
                        .iter()
                        .map(|(outcome, count)| (bitstring(outcome, self.num_qubits), count))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Parse a calibration file. Files that declare the opposite bit order
    /// (for example real-device exports) are reindexed on load.
    pub fn from_json_str(json: &str) -> Result<Self> {
        let file: CalibrationFile = serde_json::from_str(json)?;
        let n = file.num_qubits;
        let reorder = |s: &str| -> Result<u64> {
            match file.bit_order {
                BitOrder::Qubit0Rightmost => parse_bitstring(s, n),
                BitOrder::Qubit0Leftmost => {
                    let reversed: String = s.chars().rev().collect();
                    parse_bitstring(&reversed, n)
                }
            }
        };
        let mut records = Vec::with_capacity(file.results.len());
        for rec in &file.results {
            let label = reorder(&rec.label)?;
            let mut counts = CountsMap::new(n);
            for (outcome, count) in &rec.counts {
                counts.record(reorder(outcome)?, *count);
            }
            records.push((label, counts));
        }
        CalibrationSet::new(n, file.shots, records)
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
enum BitOrder {
    #[serde(rename = "qubit0_rightmost")]
    Qubit0Rightmost,
    #[serde(rename = "qubit0_leftmost")]
    Qubit0Leftmost,
}

#[derive(Serialize, Deserialize)]
struct CalibrationFile {
    num_qubits: usize,
    shots: u64,
    bit_order: BitOrder,
    results: Vec<CalibrationRecordFile>,
}

#[derive(Serialize, Deserialize)]
struct CalibrationRecordFile {
    label: String,
    counts: std::collections::BTreeMap<String, u64>,
}

/// Pattern index for a pair `(i, j)`: `2 * bit_i + bit_j`.
#[inline]
fn pattern_index(x: u64, i: usize, j: usize) -> usize {
    (((x >> i) & 1) * 2 + ((x >> j) & 1)) as usize
}

const PATTERN_NAMES: [&str; 4] = ["00", "01", "10", "11"];

/// Empirical 4x4 assignment matrix for qubits `(i, j)`, pooled over every
/// prepared label. Entry `[out, in]` is the frequency of reading pattern
/// `out` among shots whose prepared label restricts to pattern `in`;
/// columns sum to one.
pub fn pair_assignment_matrix(cal: &CalibrationSet, i: usize, j: usize) -> Result<Matrix4<f64>> {
    let n = cal.num_qubits();
    if i >= n || j >= n {
        return Err(Error::QubitIndex { index: i.max(j), num_qubits: n });
    }
    if i == j {
        return Err(Error::InvalidArgument("pair qubits must be distinct".into()));
    }
    let mut tallies = [[0u64; 4]; 4]; // [in][out]
    for (label, counts) in cal.records() {
        let input = pattern_index(*label, i, j);
        for (outcome, count) in counts.iter() {
            tallies[input][pattern_index(outcome, i, j)] += count;
        }
    }
    let mut m = Matrix4::<f64>::zeros();
    for (input, row) in tallies.iter().enumerate() {
        let total: u64 = row.iter().sum();
        if total == 0 {
            return Err(Error::IncompleteCalibration {
                qubit_i: i,
                qubit_j: j,
                pattern: PATTERN_NAMES[input],
            });
        }
        for (output, &count) in row.iter().enumerate() {
            m[(output, input)] = count as f64 / total as f64;
        }
    }
    Ok(m)
}

/// Per-pair diagnostics recorded while fitting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFitDiagnostics {
    pub qubits: (usize, usize),
    /// Eigenvalues of the pooled 4x4 assignment matrix, `(re, im)`.
    pub eigenvalues: Vec<(f64, f64)>,
    pub min_eigenvalue_modulus: f64,
    pub min_eigenvalue_real: f64,
    /// Off-diagonal log entries clipped up to zero.
    pub clipped_entries: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FitReport {
    pub pairs: Vec<PairFitDiagnostics>,
}

/// Fit generator rates from a complete calibration set.
pub fn fit_ctmp(cal: &CalibrationSet) -> Result<CtmpModel> {
    fit_ctmp_with_report(cal).map(|(model, _)| model)
}

/// Fit generator rates, also returning per-pair log diagnostics.
pub fn fit_ctmp_with_report(cal: &CalibrationSet) -> Result<(CtmpModel, FitReport)> {
    let n = cal.num_qubits();
    let mut report = FitReport::default();
    let mut terms: Vec<GeneratorTerm> = Vec::new();
    // accumulated (sum, count) of log entries per qubit and direction
    let mut excite_acc = vec![(0.0f64, 0usize); n];
    let mut decay_acc = vec![(0.0f64, 0usize); n];

    for i in 0..n {
        for j in (i + 1)..n {
            let assignment = pair_assignment_matrix(cal, i, j)?;
            let eigenvalues = assignment.complex_eigenvalues();
            let log = principal_log_4x4(&assignment).map_err(|reason| Error::FitFailure {
                qubit_i: i,
                qubit_j: j,
                reason,
            })?;

            let mut clipped = 0usize;
            let mut entry = |row: usize, col: usize| -> f64 {
                let v = log[(row, col)];
                if v < 0.0 {
                    clipped += 1;
                    0.0
                } else {
                    v
                }
            };
            // pattern index: 2 * bit_i + bit_j; source column -> target row
            terms.push(GeneratorTerm::pair(GeneratorKind::PairExcite, i, j, entry(0b11, 0b00)));
            terms.push(GeneratorTerm::pair(GeneratorKind::PairDecay, i, j, entry(0b00, 0b11)));
            terms.push(GeneratorTerm::pair(GeneratorKind::Exchange01to10, i, j, entry(0b10, 0b01)));
            terms.push(GeneratorTerm::pair(GeneratorKind::Exchange10to01, i, j, entry(0b01, 0b10)));

            // single-qubit transitions with the partner bit held fixed
            for b in 0..2usize {
                // qubit i: (0b -> 1b) and (1b -> 0b)
                accumulate(&mut excite_acc[i], log[(0b10 + b, b)]);
                accumulate(&mut decay_acc[i], log[(b, 0b10 + b)]);
                // qubit j: (a0 -> a1) and (a1 -> a0)
                accumulate(&mut excite_acc[j], log[(2 * b + 1, 2 * b)]);
                accumulate(&mut decay_acc[j], log[(2 * b, 2 * b + 1)]);
            }

            report.pairs.push(PairFitDiagnostics {
                qubits: (i, j),
                eigenvalues: eigenvalues.iter().map(|e| (e.re, e.im)).collect(),
                min_eigenvalue_modulus: eigenvalues.iter().map(|e| e.norm()).fold(f64::INFINITY, f64::min),
                min_eigenvalue_real: eigenvalues.iter().map(|e| e.re).fold(f64::INFINITY, f64::min),
                clipped_entries: clipped,
            });
        }
    }

    for q in 0..n {
        let mean = |acc: (f64, usize)| if acc.1 == 0 { 0.0 } else { (acc.0 / acc.1 as f64).max(0.0) };
        terms.push(GeneratorTerm::single(GeneratorKind::SingleExcite, q, mean(excite_acc[q])));
        terms.push(GeneratorTerm::single(GeneratorKind::SingleDecay, q, mean(decay_acc[q])));
    }

    let model = CtmpModel::new(n, terms)?;
    Ok((model, report))
}

fn accumulate(acc: &mut (f64, usize), value: f64) {
    acc.0 += value;
    acc.1 += 1;
}
