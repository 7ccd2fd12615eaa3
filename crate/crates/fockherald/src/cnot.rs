//! Heralded linear-optical CNOT gate on dual-rail qubits.
//!
//! The gate conjugates a heralded controlled-sign core by balanced splitters
//! on the target rails. The core interferes the control-H rail with the
//! target-V rail and sends each arm through a two-beamsplitter block that,
//! conditioned on finding its single ancilla photon back in the ancilla mode
//! and nothing in its vacuum mode, multiplies n-photon amplitudes by f(n) with
//! f(0) = f(1) = -f(2). With block reflectivities (3-sqrt(2))/7 and
//! 5-3*sqrt(2) the heralded map is an exact CNOT and each block succeeds with
//! amplitude sqrt((3-sqrt(2))/7), so the gate heralds with probability
//! ((3-sqrt(2))/7)^2, roughly one run in twenty.
//!
//! The "1" detectors can be made number-resolving, bare click detectors, or
//! the single-stage conditioned-chain approximation of a one-photon detector;
//! the latter trades success probability for fidelity.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::DetectorSpec;
use crate::elements::{BeamSplitter, Circuit, Element};
use crate::error::{Error, Result};
use crate::fock::{Ensemble, OccupationVector, SparseState};

/// Ideal-detector calibration must reproduce the truth table this closely.
pub const CALIBRATION_TOLERANCE: f64 = 1e-9;

const GATE_CONFIG_JSON: &str = include_str!("../assets/cnot_gate.json");

/// A dual-rail qubit: logical |0⟩ holds its photon in the V mode, logical |1⟩
/// in the H mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualRailQubit {
    pub mode_h: usize,
    pub mode_v: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DetectorModel {
    /// Perfect photon-number-resolving conditioning.
    IdealNumberResolving,
    /// Click / no-click detectors of the given efficiency in place of the
    /// number-resolving ones.
    NonDiscriminating { eta_eff: f64 },
    /// Each "1" measurement becomes a low-reflectivity tap with a click
    /// detector on the reflected port and a no-click detector on the
    /// transmitted port.
    ChainDetector { eta_ref: f64, eta_eff: f64 },
}

/// Gate wiring and beamsplitter settings plus the measurement model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CnotConfig {
    pub mode_count: usize,
    pub control: DualRailQubit,
    pub target: DualRailQubit,
    /// Single-photon ancilla inputs; their outputs carry the "1" conditions.
    pub ancilla_modes: [usize; 2],
    /// Vacuum inputs; their outputs carry the "0" conditions.
    pub vacuum_modes: [usize; 2],
    pub beamsplitters: Vec<BeamSplitter>,
    pub detector_model: DetectorModel,
}

impl CnotConfig {
    /// The shipped gate: calibrated reflectivities with ideal detectors.
    pub fn standard() -> Self {
        serde_json::from_str(GATE_CONFIG_JSON).expect("embedded gate config parses")
    }

    /// The shipped gate with a different measurement model.
    pub fn standard_with_model(model: DetectorModel) -> Self {
        let mut cfg = Self::standard();
        cfg.detector_model = model;
        cfg
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CnotConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn wiring(&self) -> [usize; 8] {
        [
            self.control.mode_h,
            self.control.mode_v,
            self.target.mode_h,
            self.target.mode_v,
            self.ancilla_modes[0],
            self.ancilla_modes[1],
            self.vacuum_modes[0],
            self.vacuum_modes[1],
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let wiring = self.wiring();
        for &mode in &wiring {
            if mode >= self.mode_count {
                return Err(Error::ModeOutOfRange {
                    index: mode,
                    mode_count: self.mode_count,
                });
            }
        }
        let mut sorted = wiring;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("gate wiring reuses a mode".into()));
        }
        match self.detector_model {
            DetectorModel::IdealNumberResolving => {}
            DetectorModel::NonDiscriminating { eta_eff } => {
                if !(0.0..=1.0).contains(&eta_eff) {
                    return Err(Error::InvalidParameter(format!(
                        "efficiency {eta_eff} outside [0, 1]"
                    )));
                }
            }
            DetectorModel::ChainDetector { eta_ref, eta_eff } => {
                if !(0.0..=1.0).contains(&eta_ref) || !(0.0..=1.0).contains(&eta_eff) {
                    return Err(Error::InvalidParameter(
                        "chain detector parameters outside [0, 1]".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Builds the full circuit for the configured measurement model. Chain
/// sub-circuits are appended after the gate elements; the tapped modes never
/// re-interfere, so the placement is exact.
pub fn build_cnot(cfg: &CnotConfig) -> Result<Circuit> {
    cfg.validate()?;
    let mut circuit = Circuit::new(cfg.mode_count);
    for bs in &cfg.beamsplitters {
        circuit.elements.push(Element::BeamSplitter(*bs));
    }
    match cfg.detector_model {
        DetectorModel::IdealNumberResolving => {
            for &mode in &cfg.ancilla_modes {
                circuit.add_detector(DetectorSpec::exact_count(mode, 1.0, 1));
            }
            for &mode in &cfg.vacuum_modes {
                circuit.add_detector(DetectorSpec::exact_count(mode, 1.0, 0));
            }
        }
        DetectorModel::NonDiscriminating { eta_eff } => {
            for &mode in &cfg.ancilla_modes {
                circuit.add_detector(DetectorSpec::click(mode, eta_eff));
            }
            for &mode in &cfg.vacuum_modes {
                circuit.add_detector(DetectorSpec::no_click(mode, eta_eff));
            }
        }
        DetectorModel::ChainDetector { eta_ref, eta_eff } => {
            circuit.mode_count += 2;
            for (i, &mode) in cfg.ancilla_modes.iter().enumerate() {
                let tap = cfg.mode_count + i;
                circuit.push_beamsplitter(mode, tap, eta_ref);
                circuit.add_detector(DetectorSpec::click(mode, eta_eff));
                circuit.add_detector(DetectorSpec::no_click(tap, eta_eff));
            }
            for &mode in &cfg.vacuum_modes {
                circuit.add_detector(DetectorSpec::no_click(mode, eta_eff));
            }
        }
    }
    circuit.validate()?;
    Ok(circuit)
}

/// A two-qubit logical state, amplitudes ordered |00⟩, |01⟩, |10⟩, |11⟩ with
/// the control qubit first.
#[derive(Clone, Copy, Debug)]
pub struct TwoQubitState(pub [Complex64; 4]);

impl TwoQubitState {
    pub fn basis(index: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[index] = Complex64::new(1.0, 0.0);
        Self(amps)
    }

    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-150 {
            return Err(Error::ZeroNorm);
        }
        let mut out = amps;
        for a in &mut out {
            *a /= norm;
        }
        Ok(Self(out))
    }

    /// Builds a state from three polar angles and four phases. The magnitudes
    /// walk down the 3-sphere; the phases are redundant by one global phase,
    /// which no fidelity or probability can see.
    pub fn from_params(params: &[f64; 7]) -> Self {
        let (t1, t2, t3) = (params[0], params[1], params[2]);
        let magnitudes = [
            t1.cos(),
            t1.sin() * t2.cos(),
            t1.sin() * t2.sin() * t3.cos(),
            t1.sin() * t2.sin() * t3.sin(),
        ];
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        for i in 0..4 {
            amps[i] = Complex64::from_polar(magnitudes[i].abs(), params[3 + i])
                * if magnitudes[i] < 0.0 { -1.0 } else { 1.0 };
        }
        Self(amps)
    }

    /// Inverse of [`Self::from_params`] up to the parameterization's redundancy.
    pub fn params(&self) -> [f64; 7] {
        let m: Vec<f64> = self.0.iter().map(|a| a.norm()).collect();
        let clamp = |x: f64| x.clamp(-1.0, 1.0);
        let t1 = clamp(m[0]).acos();
        let s1 = t1.sin();
        let t2 = if s1 < 1e-12 {
            0.0
        } else {
            clamp(m[1] / s1).acos()
        };
        let s12 = s1 * t2.sin();
        let t3 = if s12 < 1e-12 {
            0.0
        } else {
            clamp(m[2] / s12).acos()
        };
        let phase = |a: &Complex64| {
            if a.norm() < 1e-12 {
                0.0
            } else {
                a.arg().rem_euclid(TAU)
            }
        };
        [
            t1,
            t2,
            t3,
            phase(&self.0[0]),
            phase(&self.0[1]),
            phase(&self.0[2]),
            phase(&self.0[3]),
        ]
    }
}

/// The CNOT truth table as a linear map: the control-on block swaps the
/// target amplitudes.
pub fn ideal_cnot_output(input: &TwoQubitState) -> TwoQubitState {
    let a = input.0;
    TwoQubitState([a[0], a[1], a[3], a[2]])
}

/// Success probability and conditional fidelity of a heralded ensemble
/// against an ideal pure output.
pub fn fidelity_and_probability(ensemble: &Ensemble, ideal: &SparseState) -> Result<(f64, f64)> {
    let probability = ensemble.total_weight();
    if probability <= 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    let mut overlap = 0.0;
    for (weight, state) in ensemble.branches() {
        overlap += weight * ideal.inner_product(state)?.norm_sqr();
    }
    Ok((overlap / probability, probability))
}

/// Reusable gate runner: the circuit is built once, then evaluated for many
/// input states.
pub struct GateEvaluator {
    config: CnotConfig,
    circuit: Circuit,
    /// Index of each rail (control H, control V, target H, target V) among
    /// the modes that survive measurement.
    rail_ranks: [usize; 4],
    remaining_modes: usize,
}

impl GateEvaluator {
    pub fn new(config: &CnotConfig) -> Result<Self> {
        let circuit = build_cnot(config)?;
        let measured: Vec<usize> = circuit.detectors.iter().map(|d| d.mode).collect();
        let rank = |mode: usize| mode - measured.iter().filter(|&&m| m < mode).count();
        let rail_ranks = [
            rank(config.control.mode_h),
            rank(config.control.mode_v),
            rank(config.target.mode_h),
            rank(config.target.mode_v),
        ];
        let remaining_modes = circuit.mode_count - measured.len();
        Ok(Self {
            config: config.clone(),
            circuit,
            rail_ranks,
            remaining_modes,
        })
    }

    pub fn config(&self) -> &CnotConfig {
        &self.config
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    fn input_state(&self, input: &TwoQubitState) -> Result<SparseState> {
        let mut entries = Vec::new();
        for control in 0..2u32 {
            for target in 0..2u32 {
                let amp = input.0[(2 * control + target) as usize];
                if amp.norm() <= 1e-15 {
                    continue;
                }
                let mut counts = vec![0u32; self.circuit.mode_count];
                counts[self.config.control.mode_h] = control;
                counts[self.config.control.mode_v] = 1 - control;
                counts[self.config.target.mode_h] = target;
                counts[self.config.target.mode_v] = 1 - target;
                counts[self.config.ancilla_modes[0]] = 1;
                counts[self.config.ancilla_modes[1]] = 1;
                entries.push((OccupationVector::new(counts), amp));
            }
        }
        SparseState::from_amplitudes(self.circuit.mode_count, entries)
    }

    /// The ideal CNOT output embedded on the unmeasured modes.
    pub fn ideal_output_state(&self, input: &TwoQubitState) -> Result<SparseState> {
        let out = ideal_cnot_output(input);
        let mut entries = Vec::new();
        for control in 0..2u32 {
            for target in 0..2u32 {
                let amp = out.0[(2 * control + target) as usize];
                if amp.norm() <= 1e-15 {
                    continue;
                }
                let mut counts = vec![0u32; self.remaining_modes];
                counts[self.rail_ranks[0]] = control;
                counts[self.rail_ranks[1]] = 1 - control;
                counts[self.rail_ranks[2]] = target;
                counts[self.rail_ranks[3]] = 1 - target;
                entries.push((OccupationVector::new(counts), amp));
            }
        }
        SparseState::from_amplitudes(self.remaining_modes, entries)
    }

    /// Runs the circuit and conditions on the herald, returning the
    /// sub-normalized ensemble on the output rails.
    pub fn run(&self, input: &TwoQubitState) -> Result<Ensemble> {
        self.circuit.run(&self.input_state(input)?)
    }

    /// Fidelity against the ideal CNOT output and heralding probability.
    pub fn evaluate(&self, input: &TwoQubitState) -> Result<(f64, f64)> {
        let heralded = self.run(input)?;
        fidelity_and_probability(&heralded, &self.ideal_output_state(input)?)
    }
}

/// Runs the gate for one input state. Returns the heralded ensemble on the
/// output rails and the heralding probability.
pub fn apply_gate(cfg: &CnotConfig, input: &TwoQubitState) -> Result<(Ensemble, f64)> {
    let evaluator = GateEvaluator::new(cfg)?;
    let heralded = evaluator.run(input)?;
    let probability = heralded.total_weight();
    Ok((heralded, probability))
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationEntry {
    pub label: String,
    pub fidelity: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub herald_probability: f64,
    pub herald_spread: f64,
    pub worst_fidelity: f64,
    pub entries: Vec<CalibrationEntry>,
}

/// Checks that the configured reflectivities implement an exact CNOT under
/// ideal detectors: unit truth-table fidelity on the four basis inputs plus a
/// control superposition, with an input-independent heralding probability.
pub fn calibrate(cfg: &CnotConfig) -> Result<CalibrationReport> {
    let ideal = CnotConfig {
        detector_model: DetectorModel::IdealNumberResolving,
        ..cfg.clone()
    };
    let evaluator = GateEvaluator::new(&ideal)?;
    let inv = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let inputs: Vec<(String, TwoQubitState)> = vec![
        ("|00>".into(), TwoQubitState::basis(0)),
        ("|01>".into(), TwoQubitState::basis(1)),
        ("|10>".into(), TwoQubitState::basis(2)),
        ("|11>".into(), TwoQubitState::basis(3)),
        (
            "(|00>+|10>)/sqrt2".into(),
            TwoQubitState([inv, zero, inv, zero]),
        ),
    ];
    let mut entries = Vec::new();
    for (label, state) in inputs {
        let (fidelity, probability) = evaluator.evaluate(&state)?;
        entries.push(CalibrationEntry {
            label,
            fidelity,
            probability,
        });
    }
    let worst_fidelity = entries
        .iter()
        .map(|e| e.fidelity)
        .fold(f64::INFINITY, f64::min);
    let p_max = entries
        .iter()
        .map(|e| e.probability)
        .fold(f64::NEG_INFINITY, f64::max);
    let p_min = entries
        .iter()
        .map(|e| e.probability)
        .fold(f64::INFINITY, f64::min);
    let herald_spread = p_max - p_min;
    let herald_probability =
        entries.iter().map(|e| e.probability).sum::<f64>() / entries.len() as f64;
    let report = CalibrationReport {
        herald_probability,
        herald_spread,
        worst_fidelity,
        entries,
    };
    if worst_fidelity < 1.0 - CALIBRATION_TOLERANCE || herald_spread > CALIBRATION_TOLERANCE {
        let mut detail = String::new();
        for e in &report.entries {
            detail.push_str(&format!(
                "{}: fidelity {:.12}, probability {:.12}; ",
                e.label, e.fidelity, e.probability
            ));
        }
        return Err(Error::Calibration(format!(
            "worst fidelity {worst_fidelity:.12}, herald spread {herald_spread:.3e}: {detail}"
        )));
    }
    Ok(report)
}

/// The fixed probe inputs: the four basis states and the twelve balanced
/// two-term superpositions.
pub fn probe_states() -> Vec<TwoQubitState> {
    let mut probes = Vec::with_capacity(16);
    for i in 0..4 {
        probes.push(TwoQubitState::basis(i));
    }
    let inv = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            for sign in [1.0, -1.0] {
                let mut amps = [Complex64::new(0.0, 0.0); 4];
                amps[i] = inv;
                amps[j] = inv * sign;
                probes.push(TwoQubitState(amps));
            }
        }
    }
    probes
}

#[derive(Clone, Copy, Debug)]
pub struct SearchSettings {
    pub seed: u64,
    /// Random refinement starts on top of the worst probe.
    pub restarts: usize,
    /// Stop a descent once a full round over the coordinates improves the
    /// objective by less than this.
    pub tolerance: f64,
    pub max_rounds: usize,
    /// Golden-section steps per coordinate line search.
    pub line_iterations: usize,
    /// Evaluate only the fixed probes; skip refinement.
    pub probes_only: bool,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            seed: 42,
            restarts: 8,
            tolerance: 1e-6,
            max_rounds: 8,
            line_iterations: 22,
            probes_only: false,
        }
    }
}

/// Worst-case metrics over the two-qubit input space.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GateMetrics {
    pub fidelity_min: f64,
    /// Heralding probability at the fidelity minimizer.
    pub probability_at_fidelity_min: f64,
    /// Global minimum of the heralding probability over the same space.
    pub probability_min: f64,
    pub argmin_params: [f64; 7],
    pub argmin_amplitudes: [(f64, f64); 4],
}

const PARAM_BOUNDS: [(f64, f64); 7] = [
    (0.0, FRAC_PI_2),
    (0.0, FRAC_PI_2),
    (0.0, FRAC_PI_2),
    (0.0, TAU),
    (0.0, TAU),
    (0.0, TAU),
    (0.0, TAU),
];

fn golden_section_min<F: Fn(f64) -> f64>(
    objective: F,
    lo: f64,
    hi: f64,
    iterations: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iterations {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = objective(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = objective(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

fn coordinate_descent<F>(
    objective: &F,
    start: [f64; 7],
    settings: &SearchSettings,
) -> ([f64; 7], f64)
where
    F: Fn(&[f64; 7]) -> f64 + Sync,
{
    let mut x = start;
    let mut fx = objective(&x);
    for _ in 0..settings.max_rounds {
        let before = fx;
        for coord in 0..7 {
            let (lo, hi) = PARAM_BOUNDS[coord];
            let line = |v: f64| {
                let mut y = x;
                y[coord] = v;
                objective(&y)
            };
            let (v, fv) = golden_section_min(line, lo, hi, settings.line_iterations);
            if fv < fx {
                x[coord] = v;
                fx = fv;
            }
        }
        if before - fx < settings.tolerance {
            break;
        }
    }
    (x, fx)
}

fn minimize_objective<F>(
    objective: &F,
    worst_probe: [f64; 7],
    settings: &SearchSettings,
) -> ([f64; 7], f64)
where
    F: Fn(&[f64; 7]) -> f64 + Sync,
{
    let mut starts = vec![worst_probe];
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    for _ in 0..settings.restarts {
        let mut params = [0.0; 7];
        for (i, p) in params.iter_mut().enumerate() {
            let (lo, hi) = PARAM_BOUNDS[i];
            *p = rng.gen_range(lo..hi);
        }
        starts.push(params);
    }
    let results: Vec<(usize, ([f64; 7], f64))> = starts
        .par_iter()
        .enumerate()
        .map(|(i, start)| (i, coordinate_descent(objective, *start, settings)))
        .collect();
    results
        .into_iter()
        .min_by(|(ia, (_, fa)), (ib, (_, fb))| {
            fa.partial_cmp(fb)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        })
        .map(|(_, res)| res)
        .expect("at least one start")
}

/// Minimizes the gate fidelity (and, independently, the heralding
/// probability) over all normalized two-qubit pure inputs. The sixteen fixed
/// probes are always evaluated; unless `probes_only` is set, coordinate-wise
/// golden-section descents refine from the worst probe and from seeded random
/// starts, so the result can never be better than the probes suggest.
pub fn worst_case_search(cfg: &CnotConfig, settings: &SearchSettings) -> Result<GateMetrics> {
    let evaluator = GateEvaluator::new(cfg)?;
    let probes = probe_states();
    let mut probe_results = Vec::with_capacity(probes.len());
    for probe in &probes {
        probe_results.push(evaluator.evaluate(probe)?);
    }

    let worst_f_idx = (0..probes.len())
        .min_by(|&a, &b| probe_results[a].0.partial_cmp(&probe_results[b].0).unwrap())
        .unwrap();
    let worst_p_idx = (0..probes.len())
        .min_by(|&a, &b| probe_results[a].1.partial_cmp(&probe_results[b].1).unwrap())
        .unwrap();

    let eval_params = |params: &[f64; 7]| -> (f64, f64) {
        let state = TwoQubitState::from_params(params);
        match evaluator.evaluate(&state) {
            Ok((f, p)) => (f, p),
            Err(_) => (f64::INFINITY, f64::INFINITY),
        }
    };

    if settings.probes_only {
        let params = probes[worst_f_idx].params();
        let amps = probes[worst_f_idx].0;
        return Ok(GateMetrics {
            fidelity_min: probe_results[worst_f_idx].0,
            probability_at_fidelity_min: probe_results[worst_f_idx].1,
            probability_min: probe_results[worst_p_idx].1,
            argmin_params: params,
            argmin_amplitudes: [
                (amps[0].re, amps[0].im),
                (amps[1].re, amps[1].im),
                (amps[2].re, amps[2].im),
                (amps[3].re, amps[3].im),
            ],
        });
    }

    let f_objective = |params: &[f64; 7]| eval_params(params).0;
    let (f_argmin, fidelity_min) =
        minimize_objective(&f_objective, probes[worst_f_idx].params(), settings);
    let (_, probability_at_fidelity_min) = eval_params(&f_argmin);

    let p_objective = |params: &[f64; 7]| eval_params(params).1;
    let (_, refined_p) = minimize_objective(&p_objective, probes[worst_p_idx].params(), settings);
    let probability_min = refined_p.min(probe_results[worst_p_idx].1);

    let amps = TwoQubitState::from_params(&f_argmin).0;
    Ok(GateMetrics {
        fidelity_min: fidelity_min.min(probe_results[worst_f_idx].0),
        probability_at_fidelity_min,
        probability_min,
        argmin_params: f_argmin,
        argmin_amplitudes: [
            (amps[0].re, amps[0].im),
            (amps[1].re, amps[1].im),
            (amps[2].re, amps[2].im),
            (amps[3].re, amps[3].im),
        ],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub eta_eff: f64,
    pub eta_ref: f64,
    pub metrics: GateMetrics,
}

/// Worst-case metrics over a grid of chain-detector parameters. Cells are
/// independent and evaluated in parallel; the output order is the row-major
/// grid order regardless of scheduling.
pub fn sweep_metrics(
    cfg: &CnotConfig,
    eta_effs: &[f64],
    eta_refs: &[f64],
    settings: &SearchSettings,
) -> Result<Vec<SweepCell>> {
    if eta_effs.is_empty() || eta_refs.is_empty() {
        return Err(Error::InvalidParameter(
            "parameter ranges must be non-empty".into(),
        ));
    }
    let mut cells = Vec::new();
    for &eta_eff in eta_effs {
        for &eta_ref in eta_refs {
            cells.push((eta_eff, eta_ref));
        }
    }
    let results: Result<Vec<SweepCell>> = cells
        .par_iter()
        .map(|&(eta_eff, eta_ref)| {
            let cell_cfg = CnotConfig {
                detector_model: DetectorModel::ChainDetector { eta_ref, eta_eff },
                ..cfg.clone()
            };
            let metrics = worst_case_search(&cell_cfg, settings)?;
            Ok(SweepCell {
                eta_eff,
                eta_ref,
                metrics,
            })
        })
        .collect();
    results
}
