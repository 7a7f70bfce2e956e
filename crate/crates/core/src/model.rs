//! The CTMP readout-error model.
//!
//! Noise is generated by `G = Σ_i r_i G_i` where each `G_i = |b⟩⟨a| - |a⟩⟨a|`
//! flips a source bit pattern `a` to `b` at rate `r_i >= 0`, and the
//! assignment matrix is `A = exp(G)`. Supported generators act on one qubit
//! (`0↔1`) or an ordered qubit pair (`00↔11`, `01↔10`).
//!
//! The model caches `gamma = max_x Γ(x)`, the largest total outflow rate
//! over bitstrings, which bounds the noise strength and sets the sampling
//! cost of mitigation. Mutating the term list invalidates the cache; it
//! must be recomputed before the model is used for mitigation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transition pattern of one generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// `0 -> 1` on one qubit.
    #[serde(rename = "single_excite")]
    SingleExcite,
    /// `1 -> 0` on one qubit.
    #[serde(rename = "single_decay")]
    SingleDecay,
    /// `00 -> 11` on a qubit pair.
    #[serde(rename = "pair_excite")]
    PairExcite,
    /// `11 -> 00` on a qubit pair.
    #[serde(rename = "pair_decay")]
    PairDecay,
    /// `01 -> 10` on a qubit pair (first listed qubit excites).
    #[serde(rename = "exchange_01_10")]
    Exchange01to10,
    /// `10 -> 01` on a qubit pair (first listed qubit decays).
    #[serde(rename = "exchange_10_01")]
    Exchange10to01,
}

impl GeneratorKind {
    pub fn is_pair(self) -> bool {
        !matches!(self, GeneratorKind::SingleExcite | GeneratorKind::SingleDecay)
    }

    /// Source bit pattern `(first, second)` for pair kinds.
    fn pair_source(self) -> (u8, u8) {
        match self {
            GeneratorKind::PairExcite => (0, 0),
            GeneratorKind::PairDecay => (1, 1),
            GeneratorKind::Exchange01to10 => (0, 1),
            GeneratorKind::Exchange10to01 => (1, 0),
            _ => unreachable!("not a pair kind"),
        }
    }

    /// Equivalent kind when the two qubits of a pair term are listed in the
    /// opposite order.
    fn swapped(self) -> Self {
        match self {
            GeneratorKind::Exchange01to10 => GeneratorKind::Exchange10to01,
            GeneratorKind::Exchange10to01 => GeneratorKind::Exchange01to10,
            other => other,
        }
    }
}

/// One generator with its rate (dimensionless, per unit process time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTerm {
    pub kind: GeneratorKind,
    pub qubits: Vec<usize>,
    pub rate: f64,
}

impl GeneratorTerm {
    pub fn single(kind: GeneratorKind, qubit: usize, rate: f64) -> Self {
        GeneratorTerm { kind, qubits: vec![qubit], rate }
    }

    pub fn pair(kind: GeneratorKind, first: usize, second: usize, rate: f64) -> Self {
        GeneratorTerm { kind, qubits: vec![first, second], rate }
    }
}

/// Precomputed bit masks for fast matching during sampling.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CompiledTerm {
    pub mask: u64,
    pub pattern: u64,
    pub flip: u64,
    pub rate: f64,
}

impl CompiledTerm {
    #[inline]
    pub fn matches(&self, x: u64) -> bool {
        x & self.mask == self.pattern
    }
}

/// Mode for the noise-strength bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMode {
    /// Enumerate all bitstrings; exact but limited to n <= 16.
    Exact,
    /// Sum of per-qubit and per-pair maxima; always >= the exact value.
    UpperBound,
}

/// Largest width for which the exact gamma enumeration is allowed.
pub const MAX_EXACT_GAMMA_QUBITS: usize = 16;

/// Largest width for which the dense generator matrix may be assembled.
pub const MAX_DENSE_QUBITS: usize = 10;

/// A validated set of generator terms with a cached noise-strength bound.
#[derive(Debug, Clone)]
pub struct CtmpModel {
    num_qubits: usize,
    terms: Vec<GeneratorTerm>,
    compiled: Vec<CompiledTerm>,
    gamma: Option<f64>,
}

impl CtmpModel {
    /// Validate, canonicalize, and compile a term list, then cache gamma
    /// (exact mode up to 16 qubits, upper bound beyond).
    pub fn new(num_qubits: usize, terms: Vec<GeneratorTerm>) -> Result<Self> {
        let mut model =
            CtmpModel { num_qubits, terms: Vec::new(), compiled: Vec::new(), gamma: None };
        for term in terms {
            model.push_term(term)?;
        }
        let mode = if num_qubits <= MAX_EXACT_GAMMA_QUBITS {
            GammaMode::Exact
        } else {
            GammaMode::UpperBound
        };
        model.recompute_gamma(mode)?;
        Ok(model)
    }

    /// A model with no generators (noiseless readout).
    pub fn empty(num_qubits: usize) -> Self {
        CtmpModel { num_qubits, terms: Vec::new(), compiled: Vec::new(), gamma: Some(0.0) }
    }

    /// Append a term. Pair terms are canonicalized to ascending qubit order
    /// (mirroring exchange direction), and a second term with the same kind
    /// and qubit tuple is rejected. Invalidates the cached gamma.
    pub fn push_term(&mut self, term: GeneratorTerm) -> Result<()> {
        let term = self.validate(term)?;
        self.compiled.push(compile(&term));
        self.terms.push(term);
        self.gamma = None;
        Ok(())
    }

    fn validate(&self, mut term: GeneratorTerm) -> Result<GeneratorTerm> {
        if term.rate < 0.0 || !term.rate.is_finite() {
            return Err(Error::InvalidModel(format!("rate {} must be finite and >= 0", term.rate)));
        }
        for &q in &term.qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitIndex { index: q, num_qubits: self.num_qubits });
            }
        }
        if term.kind.is_pair() {
            if term.qubits.len() != 2 || term.qubits[0] == term.qubits[1] {
                return Err(Error::InvalidModel(format!(
                    "pair generator needs two distinct qubits, got {:?}",
                    term.qubits
                )));
            }
            if term.qubits[0] > term.qubits[1] {
                term.qubits.swap(0, 1);
                term.kind = term.kind.swapped();
            }
        } else if term.qubits.len() != 1 {
            return Err(Error::InvalidModel(format!(
                "single-qubit generator needs one qubit, got {:?}",
                term.qubits
            )));
        }
        if self.terms.iter().any(|t| t.kind == term.kind && t.qubits == term.qubits) {
            return Err(Error::InvalidModel(format!(
                "duplicate generator {:?} on qubits {:?}",
                term.kind, term.qubits
            )));
        }
        Ok(term)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[GeneratorTerm] {
        &self.terms
    }

    pub(crate) fn compiled(&self) -> &[CompiledTerm] {
        &self.compiled
    }

    /// Cached noise-strength bound; `None` after a mutation until
    /// [`CtmpModel::recompute_gamma`] runs.
    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Cached gamma or a staleness error.
    pub fn current_gamma(&self) -> Result<f64> {
        self.gamma.ok_or(Error::StaleGamma)
    }

    /// Total outflow rate `Γ(x) = Σ` of rates whose source pattern matches.
    pub fn total_outflow(&self, x: u64) -> f64 {
        self.compiled.iter().filter(|t| t.matches(x)).map(|t| t.rate).sum()
    }

    /// Recompute and cache the noise-strength bound.
    pub fn recompute_gamma(&mut self, mode: GammaMode) -> Result<f64> {
        let gamma = compute_gamma(self, mode)?;
        self.gamma = Some(gamma);
        Ok(gamma)
    }

    /// Assemble the dense generator `G` (row = target, column = source).
    /// Every column sums to zero.
    pub fn dense_generator(&self) -> Result<DMatrix<f64>> {
        if self.num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::QubitCount { got: self.num_qubits, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << self.num_qubits;
        let mut g = DMatrix::<f64>::zeros(dim, dim);
        for t in &self.compiled {
            for x in 0..dim as u64 {
                if t.matches(x) {
                    let y = (x ^ t.flip) as usize;
                    g[(y, x as usize)] += t.rate;
                    g[(x as usize, x as usize)] -= t.rate;
                }
            }
        }
        Ok(g)
    }

    /// Serialize to the model file format. Gamma is never stored; it is
    /// recomputed on load.
    pub fn to_json_string(&self) -> String {
        let file = ModelFile { num_qubits: self.num_qubits, terms: self.terms.clone() };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Parse the model file format, validating and recomputing gamma.
    pub fn from_json_str(json: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(json)?;
        CtmpModel::new(file.num_qubits, file.terms)
    }
}

fn compile(term: &GeneratorTerm) -> CompiledTerm {
    match term.kind {
        GeneratorKind::SingleExcite => {
            let bit = 1u64 << term.qubits[0];
            CompiledTerm { mask: bit, pattern: 0, flip: bit, rate: term.rate }
        }
        GeneratorKind::SingleDecay => {
            let bit = 1u64 << term.qubits[0];
            CompiledTerm { mask: bit, pattern: bit, flip: bit, rate: term.rate }
        }
        kind => {
            let (a, b) = (1u64 << term.qubits[0], 1u64 << term.qubits[1]);
            let (sa, sb) = kind.pair_source();
            let pattern = if sa == 1 { a } else { 0 } | if sb == 1 { b } else { 0 };
            CompiledTerm { mask: a | b, pattern, flip: a | b, rate: term.rate }
        }
    }
}

/// Noise-strength bound `γ = max_x Γ(x)`.
pub fn compute_gamma(model: &CtmpModel, mode: GammaMode) -> Result<f64> {
    match mode {
        GammaMode::Exact => {
            let n = model.num_qubits();
            if n > MAX_EXACT_GAMMA_QUBITS {
                return Err(Error::InvalidArgument(format!(
                    "exact gamma enumeration is limited to {MAX_EXACT_GAMMA_QUBITS} qubits \
                     (got {n}); use the upper-bound mode"
                )));
            }
            let mut gamma: f64 = 0.0;
            for x in 0..(1u64 << n) {
                gamma = gamma.max(model.total_outflow(x));
            }
            Ok(gamma)
        }
        GammaMode::UpperBound => {
            let mut per_qubit = vec![(0.0f64, 0.0f64); model.num_qubits()];
            let mut per_pair = std::collections::BTreeMap::<(usize, usize), [f64; 4]>::new();
            for t in model.terms() {
                match t.kind {
                    GeneratorKind::SingleExcite => per_qubit[t.qubits[0]].0 += t.rate,
                    GeneratorKind::SingleDecay => per_qubit[t.qubits[0]].1 += t.rate,
                    kind => {
                        let slot = per_pair.entry((t.qubits[0], t.qubits[1])).or_default();
                        let (sa, sb) = kind.pair_source();
                        slot[(sa * 2 + sb) as usize] += t.rate;
                    }
                }
            }
            let singles: f64 = per_qubit.iter().map(|&(e, d)| e.max(d)).sum();
            let pairs: f64 =
                per_pair.values().map(|r| r.iter().copied().fold(0.0, f64::max)).sum();
            Ok(singles + pairs)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    num_qubits: usize,
    terms: Vec<GeneratorTerm>,
}
