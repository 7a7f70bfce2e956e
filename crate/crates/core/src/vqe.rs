//! VQE objective evaluation, optimization, sweeps, and sampling
//! experiments.
//!
//! The ansatz prepares `|+>^n` and applies repeated layers of
//! parameterized Y-rotations followed by a linear chain of CZ gates. The
//! objective `f(θ) = <ψ(θ)|H|ψ(θ)>` can be evaluated exactly, from sampled
//! shots, from shots passed through the readout-noise channel, or from
//! noisy shots with CTMP mitigation applied. Everything downstream of a
//! master seed is deterministic.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::Mapping;
use crate::grouping::{expectation_and_error_from_counts, group_observable};
use crate::hubbard::{build_hubbard, hubbard_qubits};
use crate::mitigation::{default_num_samples, mitigate_expectation};
use crate::model::CtmpModel;
use crate::noise::apply_noise_to_counts;
use crate::pauli::Observable;
use crate::rng::{derive_seed, RngStream};
use crate::statevector::{Circuit, Gate, Statevector};

/// Ansatz family: `|+>^n` then `reps` blocks of per-qubit RY rotations and
/// a CZ chain over neighboring qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub num_qubits: usize,
    pub reps: usize,
}

impl AnsatzSpec {
    /// The paper-default depth of six repetitions.
    pub fn new(num_qubits: usize) -> Self {
        AnsatzSpec { num_qubits, reps: 6 }
    }

    pub fn with_reps(num_qubits: usize, reps: usize) -> Self {
        AnsatzSpec { num_qubits, reps }
    }

    pub fn num_parameters(&self) -> usize {
        self.reps * self.num_qubits
    }

    /// Build the circuit for a parameter vector of length `reps * n`.
    pub fn build(&self, theta: &[f64]) -> Result<Circuit> {
        if theta.len() != self.num_parameters() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.num_parameters(),
                theta.len()
            )));
        }
        let n = self.num_qubits;
        let mut circuit = Circuit::new(n);
        for q in 0..n {
            circuit.push(Gate::H(q))?;
        }
        for rep in 0..self.reps {
            for q in 0..n {
                circuit.push(Gate::Ry(q, theta[rep * n + q]))?;
            }
            for q in 0..n.saturating_sub(1) {
                circuit.push(Gate::Cz(q, q + 1))?;
            }
        }
        Ok(circuit)
    }
}

/// How the objective is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Statevector expectation; no shots, no noise, zero standard error.
    NoiselessExact,
    /// Finite shots, ideal readout.
    NoiselessSampled,
    /// Finite shots through the readout-noise channel.
    Unmitigated,
    /// Noisy shots post-processed by the mitigation estimator.
    Mitigated,
}

impl EvalMode {
    pub fn label(self) -> &'static str {
        match self {
            EvalMode::NoiselessExact => "noiseless_exact",
            EvalMode::NoiselessSampled => "noiseless_sampled",
            EvalMode::Unmitigated => "unmitigated",
            EvalMode::Mitigated => "mitigated",
        }
    }
}

/// One way of evaluating the objective, with everything it needs.
#[derive(Debug, Clone)]
pub struct EvaluationConfig {
    pub mode: EvalMode,
    /// Shots per measurement group (ignored in the exact mode).
    pub shots: u64,
    pub noise: Option<CtmpModel>,
    pub mitigation: Option<CtmpModel>,
    /// Estimator samples per group; `None` applies the `e^{4γ}`-scaled
    /// default rule.
    pub mitigation_samples: Option<u64>,
    pub seed: u64,
}

impl EvaluationConfig {
    pub fn exact() -> Self {
        EvaluationConfig {
            mode: EvalMode::NoiselessExact,
            shots: 0,
            noise: None,
            mitigation: None,
            mitigation_samples: None,
            seed: 0,
        }
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        EvaluationConfig {
            mode: EvalMode::NoiselessSampled,
            shots,
            noise: None,
            mitigation: None,
            mitigation_samples: None,
            seed,
        }
    }

    pub fn unmitigated(shots: u64, noise: CtmpModel, seed: u64) -> Self {
        EvaluationConfig {
            mode: EvalMode::Unmitigated,
            shots,
            noise: Some(noise),
            mitigation: None,
            mitigation_samples: None,
            seed,
        }
    }

    pub fn mitigated(shots: u64, noise: CtmpModel, mitigation: CtmpModel, seed: u64) -> Self {
        EvaluationConfig {
            mode: EvalMode::Mitigated,
            shots,
            noise: Some(noise),
            mitigation: Some(mitigation),
            mitigation_samples: None,
            seed,
        }
    }

    /// A copy with a derived seed, for per-task sub-experiments.
    pub fn reseeded(&self, label: &str, index: u64) -> Self {
        let mut out = self.clone();
        out.seed = derive_seed(self.seed, label, index);
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            EvalMode::NoiselessExact => Ok(()),
            EvalMode::NoiselessSampled => self.require_shots(),
            EvalMode::Unmitigated => {
                self.require_shots()?;
                if self.noise.is_none() {
                    return Err(Error::InvalidArgument(
                        "unmitigated mode requires a noise model".into(),
                    ));
                }
                Ok(())
            }
            EvalMode::Mitigated => {
                self.require_shots()?;
                if self.noise.is_none() {
                    return Err(Error::InvalidArgument(
                        "mitigated mode requires a noise model".into(),
                    ));
                }
                if self.mitigation.is_none() {
                    return Err(Error::InvalidArgument(
                        "mitigated mode requires a mitigation model".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn require_shots(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidArgument("sampled modes require shots >= 1".into()));
        }
        Ok(())
    }
}

/// Evaluate the objective; returns `(value, standard_error)`.
pub fn evaluate_objective(
    theta: &[f64],
    observable: &Observable,
    spec: &AnsatzSpec,
    config: &EvaluationConfig,
) -> Result<(f64, f64)> {
    config.validate()?;
    if observable.num_qubits() != spec.num_qubits {
        return Err(Error::QubitMismatch {
            left: observable.num_qubits(),
            right: spec.num_qubits,
        });
    }
    let ansatz = spec.build(theta)?;

    if config.mode == EvalMode::NoiselessExact {
        let mut state = Statevector::new_zero_state(spec.num_qubits)?;
        state.apply_circuit(&ansatz)?;
        return Ok((observable.exact_expectation(&state)?, 0.0));
    }

    let grouped = group_observable(observable)?;
    let stream = RngStream::from_seed(config.seed);
    let mut value = grouped.offset;
    let mut variance = 0.0;
    for (g, group) in grouped.groups.iter().enumerate() {
        let mut circuit = ansatz.clone();
        circuit.extend(&group.basis_circuit)?;
        let mut state = Statevector::new_zero_state(spec.num_qubits)?;
        state.apply_circuit(&circuit)?;
        let counts =
            state.sample_counts(config.shots, &mut stream.derive("sample", g as u64).rng())?;

        let (group_value, group_se) = match config.mode {
            EvalMode::NoiselessSampled => {
                expectation_and_error_from_counts(&counts, &group.diagonal_terms)?
            }
            EvalMode::Unmitigated => {
                let noise = config.noise.as_ref().expect("validated");
                let noisy = apply_noise_to_counts(&counts, noise, &stream.derive("noise", g as u64))?;
                expectation_and_error_from_counts(&noisy, &group.diagonal_terms)?
            }
            EvalMode::Mitigated => {
                let noise = config.noise.as_ref().expect("validated");
                let mitigation = config.mitigation.as_ref().expect("validated");
                let noisy = apply_noise_to_counts(&counts, noise, &stream.derive("noise", g as u64))?;
                let samples = match config.mitigation_samples {
                    Some(s) => s,
                    None => default_num_samples(mitigation.current_gamma()?, config.shots),
                };
                mitigate_expectation(
                    &noisy,
                    mitigation,
                    &group.diagonal_terms,
                    samples,
                    &stream.derive("mitigate", g as u64),
                )?
            }
            EvalMode::NoiselessExact => unreachable!(),
        };
        value += group_value;
        variance += group_se * group_se;
    }
    Ok((value, variance.sqrt()))
}

/// Analytic gradient via the parameter-shift rule:
/// `∂f/∂θ_k = [f(θ + (π/2) e_k) - f(θ - (π/2) e_k)] / 2`.
pub fn gradient_parameter_shift(
    theta: &[f64],
    observable: &Observable,
    spec: &AnsatzSpec,
    config: &EvaluationConfig,
) -> Result<Vec<f64>> {
    let mut gradient = Vec::with_capacity(theta.len());
    let mut shifted = theta.to_vec();
    for k in 0..theta.len() {
        let original = shifted[k];
        shifted[k] = original + std::f64::consts::FRAC_PI_2;
        let (plus, _) = evaluate_objective(&shifted, observable, spec, config)?;
        shifted[k] = original - std::f64::consts::FRAC_PI_2;
        let (minus, _) = evaluate_objective(&shifted, observable, spec, config)?;
        shifted[k] = original;
        gradient.push((plus - minus) / 2.0);
    }
    Ok(gradient)
}

/// Gradient-descent settings used by [`find_minimum`].
const GRAD_TOL: f64 = 1e-5;
const MAX_ITERATIONS: usize = 2000;
const ARMIJO_C: f64 = 1e-4;

/// Best minimum of the exact objective over seeded random restarts.
///
/// Each restart runs gradient descent with parameter-shift gradients and a
/// backtracking line search, stopping when the gradient norm drops below
/// `1e-5` or after 2000 iterations. Returns the best `(theta, value)`
/// found; global optimality is not guaranteed, only the variational bound.
pub fn find_minimum(
    observable: &Observable,
    spec: &AnsatzSpec,
    restarts: usize,
    seed: u64,
) -> Result<(Vec<f64>, f64)> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be >= 1".into()));
    }
    let config = EvaluationConfig::exact();
    let stream = RngStream::from_seed(seed);
    let dim = spec.num_parameters();

    let mut best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..restarts {
        let mut rng = stream.derive("init", restart as u64).rng();
        let mut theta: Vec<f64> =
            (0..dim).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let (mut value, _) = evaluate_objective(&theta, observable, spec, &config)?;
        let mut step = 1.0f64;

        for _ in 0..MAX_ITERATIONS {
            let gradient = gradient_parameter_shift(&theta, observable, spec, &config)?;
            let grad_sq: f64 = gradient.iter().map(|g| g * g).sum();
            if grad_sq.sqrt() < GRAD_TOL {
                break;
            }
            // backtracking line search on the Armijo condition
            step = (step * 1.5).min(2.0);
            let mut accepted = false;
            while step > 1e-14 {
                let candidate: Vec<f64> =
                    theta.iter().zip(&gradient).map(|(t, g)| t - step * g).collect();
                let (candidate_value, _) =
                    evaluate_objective(&candidate, observable, spec, &config)?;
                if candidate_value <= value - ARMIJO_C * step * grad_sq {
                    theta = candidate;
                    value = candidate_value;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }

        if best.as_ref().map_or(true, |(_, b)| value < *b) {
            best = Some((theta, value));
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Objective values along `θ0 + s φ` for every requested mode.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub s_values: Vec<f64>,
    pub direction: Vec<f64>,
    pub curves: Vec<SweepCurve>,
}

#[derive(Debug, Clone)]
pub struct SweepCurve {
    pub mode: EvalMode,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
}

/// The default sweep grid: 41 points uniform in [-2, 2].
pub fn default_s_grid() -> Vec<f64> {
    uniform_grid(-2.0, 2.0, 41)
}

pub fn uniform_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    (0..points).map(|i| min + (max - min) * i as f64 / (points - 1) as f64).collect()
}

/// Sweep the objective through `theta0` along a random unit direction.
///
/// The direction has i.i.d. standard-normal entries normalized to unit
/// length, drawn once from `direction_seed`. Grid points are independent
/// sub-experiments with derived seeds, assembled in index order.
pub fn sweep_objective(
    theta0: &[f64],
    direction_seed: u64,
    s_grid: &[f64],
    observable: &Observable,
    spec: &AnsatzSpec,
    configs: &[EvaluationConfig],
) -> Result<SweepResult> {
    if s_grid.is_empty() {
        return Err(Error::InvalidArgument("s_grid must be nonempty".into()));
    }
    for config in configs {
        config.validate()?;
    }
    let mut rng = RngStream::from_seed(direction_seed).derive("direction", 0).rng();
    let mut direction: Vec<f64> =
        (0..theta0.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let norm: f64 = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    for d in direction.iter_mut() {
        *d /= norm;
    }

    let points: Vec<Vec<(f64, f64)>> = s_grid
        .par_iter()
        .enumerate()
        .map(|(idx, &s)| {
            let theta: Vec<f64> =
                theta0.iter().zip(&direction).map(|(t, d)| t + s * d).collect();
            configs
                .iter()
                .map(|config| {
                    let point_config = config.reseeded("sweep-point", idx as u64);
                    evaluate_objective(&theta, observable, spec, &point_config)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let curves = configs
        .iter()
        .enumerate()
        .map(|(c, config)| SweepCurve {
            mode: config.mode,
            values: points.iter().map(|p| p[c].0).collect(),
            std_errors: points.iter().map(|p| p[c].1).collect(),
        })
        .collect();
    Ok(SweepResult { s_values: s_grid.to_vec(), direction, curves })
}

/// One lattice size within a sampling experiment.
#[derive(Debug, Clone)]
pub struct SizeCase {
    pub sites: usize,
    pub noise: CtmpModel,
    pub mitigation: CtmpModel,
}

/// Random-parameter objective sampling across lattice sizes.
#[derive(Debug, Clone)]
pub struct SamplingExperiment {
    pub cases: Vec<SizeCase>,
    pub samples_per_size: usize,
    pub reps: usize,
    /// Shots per group scale with width: `shots = shots_per_qubit * n`.
    pub shots_per_qubit: u64,
    pub t: f64,
    pub u: f64,
    pub periodic: bool,
    pub mapping: Mapping,
    pub seed: u64,
    pub mitigation_samples: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SampleRecord {
    pub index: usize,
    pub exact: f64,
    pub unmitigated: f64,
    pub mitigated: f64,
    pub unmitigated_se: f64,
    pub mitigated_se: f64,
}

impl SampleRecord {
    pub fn unmitigated_error(&self) -> f64 {
        self.unmitigated - self.exact
    }

    pub fn mitigated_error(&self) -> f64 {
        self.mitigated - self.exact
    }
}

#[derive(Debug, Clone)]
pub struct SizeResult {
    pub sites: usize,
    pub num_qubits: usize,
    pub shots: u64,
    pub records: Vec<SampleRecord>,
    pub std_unmitigated: f64,
    pub std_mitigated: f64,
    /// `std_unmitigated / std_mitigated`.
    pub reduction_ratio: f64,
}

/// Draw random parameter points, evaluate the unmitigated and mitigated
/// objectives against the exact value, and summarize the error spreads.
///
/// The unmitigated and mitigated evaluations of one sample share a seed,
/// so they post-process the same noisy counts (a paired comparison).
pub fn random_sampling_experiment(experiment: &SamplingExperiment) -> Result<Vec<SizeResult>> {
    if experiment.samples_per_size < 2 {
        return Err(Error::InvalidArgument("samples_per_size must be >= 2".into()));
    }
    if experiment.cases.is_empty() {
        return Err(Error::InvalidArgument("at least one size case is required".into()));
    }
    let mut results = Vec::with_capacity(experiment.cases.len());
    for case in &experiment.cases {
        let n = hubbard_qubits(case.sites);
        if case.noise.num_qubits() != n || case.mitigation.num_qubits() != n {
            return Err(Error::QubitMismatch { left: case.noise.num_qubits(), right: n });
        }
        let observable = build_hubbard(
            case.sites,
            experiment.t,
            experiment.u,
            experiment.periodic,
            experiment.mapping,
        )?;
        let spec = AnsatzSpec::with_reps(n, experiment.reps);
        let shots = experiment.shots_per_qubit * n as u64;
        let dim = spec.num_parameters();

        let records: Vec<SampleRecord> = (0..experiment.samples_per_size)
            .into_par_iter()
            .map(|index| {
                let sample_stream = RngStream::from_seed(experiment.seed)
                    .derive("size", case.sites as u64)
                    .derive("sample", index as u64);
                let mut rng = sample_stream.derive("theta", 0).rng();
                let theta: Vec<f64> =
                    (0..dim).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();

                let (exact, _) =
                    evaluate_objective(&theta, &observable, &spec, &EvaluationConfig::exact())?;

                let eval_seed = derive_seed(
                    derive_seed(experiment.seed, "eval-size", case.sites as u64),
                    "eval-sample",
                    index as u64,
                );
                let mut unmit_config =
                    EvaluationConfig::unmitigated(shots, case.noise.clone(), eval_seed);
                unmit_config.mitigation_samples = experiment.mitigation_samples;
                let (unmitigated, unmitigated_se) =
                    evaluate_objective(&theta, &observable, &spec, &unmit_config)?;

                let mut mit_config = EvaluationConfig::mitigated(
                    shots,
                    case.noise.clone(),
                    case.mitigation.clone(),
                    eval_seed,
                );
                mit_config.mitigation_samples = experiment.mitigation_samples;
                let (mitigated, mitigated_se) =
                    evaluate_objective(&theta, &observable, &spec, &mit_config)?;

                Ok(SampleRecord {
                    index,
                    exact,
                    unmitigated,
                    mitigated,
                    unmitigated_se,
                    mitigated_se,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let std_unmitigated = sample_std(records.iter().map(|r| r.unmitigated_error()));
        let std_mitigated = sample_std(records.iter().map(|r| r.mitigated_error()));
        results.push(SizeResult {
            sites: case.sites,
            num_qubits: n,
            shots,
            records,
            std_unmitigated,
            std_mitigated,
            reduction_ratio: std_unmitigated / std_mitigated,
        });
    }
    Ok(results)
}

fn sample_std(values: impl Iterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
