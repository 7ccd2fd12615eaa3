//! C ABI for the photon-detection toolkit: plain functions for the detection
//! probabilities and exact simulations, plus an opaque handle for the
//! heralded CNOT evaluator. Every function reports an [`FhStatus`]; outputs
//! are written through caller-supplied pointers.

use std::os::raw::c_char;

use fockherald::analytic;
use fockherald::cnot::{
    calibrate, worst_case_search, CnotConfig, DetectorModel, GateEvaluator, SearchSettings,
    TwoQubitState,
};
use fockherald::elements::chain_reflectivities;
use fockherald::error::Error;
use fockherald::schemes::{
    simulate_cascade, simulate_chain, simulate_tdm, CascadeConfig, ChainConfig, TdmConfig,
};
use fockherald::Complex64;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InfeasibleUniformity = 3,
    PhotonsExceedOutputs = 4,
    EnumerationBound = 5,
    BufferTooSmall = 6,
    CalibrationFailed = 7,
    UndefinedFidelity = 8,
    InternalError = 9,
}

fn status_of(error: &Error) -> FhStatus {
    match error {
        Error::InvalidParameter(_)
        | Error::ModeOutOfRange { .. }
        | Error::ModeCountMismatch { .. }
        | Error::NotPowerOfTwo(_)
        | Error::ZeroNorm => FhStatus::InvalidArgument,
        Error::InfeasibleUniformity { .. } => FhStatus::InfeasibleUniformity,
        Error::PhotonsExceedOutputs { .. } => FhStatus::PhotonsExceedOutputs,
        Error::EnumerationBound { .. } => FhStatus::EnumerationBound,
        Error::Calibration(_) => FhStatus::CalibrationFailed,
        Error::UndefinedFidelity => FhStatus::UndefinedFidelity,
        _ => FhStatus::InternalError,
    }
}

/// Library version as a NUL-terminated static string.
#[no_mangle]
pub extern "C" fn fh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Probability that a uniform cascade over `outputs` detectors of efficiency
/// `eta_eff` reports exactly `photons` clicks for `photons` incident photons.
///
/// # Safety
///
/// `out` must be a writable double.
#[no_mangle]
pub unsafe extern "C" fn fh_cascade_prob_correct(
    photons: u32,
    outputs: u32,
    eta_eff: f64,
    out: *mut f64,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    match analytic::cascade_prob_correct(photons, outputs, eta_eff) {
        Ok(value) => {
            unsafe { *out = value };
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Probability that a single-stage conditioned chain perceives one photon.
///
/// # Safety
///
/// `out` must be a writable double.
#[no_mangle]
pub unsafe extern "C" fn fh_chain_prob_m1(
    photons: u32,
    eta_ref: f64,
    eta_eff: f64,
    out: *mut f64,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    if !(0.0..=1.0).contains(&eta_ref) || !(0.0..=1.0).contains(&eta_eff) {
        return FhStatus::InvalidArgument;
    }
    unsafe { *out = analytic::chain_prob_m1(photons, eta_ref, eta_eff) };
    FhStatus::Ok
}

/// Probability that a `k`-stage conditioned chain perceives exactly `k`
/// photons.
///
/// # Safety
///
/// `out` must be a writable double.
#[no_mangle]
pub unsafe extern "C" fn fh_chain_prob_mk(
    photons: u32,
    k: u32,
    eta_ref: f64,
    eta_eff: f64,
    out: *mut f64,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    if !(0.0..=1.0).contains(&eta_ref) || !(0.0..=1.0).contains(&eta_eff) {
        return FhStatus::InvalidArgument;
    }
    match analytic::chain_prob_mk(photons, k, eta_ref, eta_eff) {
        Ok(value) => {
            unsafe { *out = value };
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Writes the `stages` chain reflectivities that make single-photon arrival
/// statistics uniform, starting from `eta_first`.
///
/// # Safety
///
/// `out` must point to at least `out_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fh_chain_reflectivities(
    eta_first: f64,
    stages: u32,
    out: *mut f64,
    out_len: usize,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    if out_len < stages as usize {
        return FhStatus::BufferTooSmall;
    }
    match chain_reflectivities(eta_first, stages) {
        Ok(values) => {
            for (i, value) in values.iter().enumerate() {
                unsafe { *out.add(i) = *value };
            }
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Writes the exact perceived-count distribution `P(m = 0..=photons)` of the
/// cascade into `out`.
///
/// # Safety
///
/// `out` must point to at least `out_len` writable doubles, with
/// `out_len >= photons + 1`.
#[no_mangle]
pub unsafe extern "C" fn fh_simulate_cascade(
    photons: u32,
    outputs: u32,
    eta_eff: f64,
    out: *mut f64,
    out_len: usize,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    if out_len < photons as usize + 1 {
        return FhStatus::BufferTooSmall;
    }
    match simulate_cascade(photons, &CascadeConfig { outputs, eta_eff }) {
        Ok(distribution) => {
            for m in 0..=photons {
                unsafe { *out.add(m as usize) = distribution.get(&m).copied().unwrap_or(0.0) };
            }
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Acceptance probability of the `k`-stage chain detector for an
/// `photons`-photon input, from the exact quantum simulation.
///
/// # Safety
///
/// `out` must be a writable double.
#[no_mangle]
pub unsafe extern "C" fn fh_simulate_chain(
    photons: u32,
    k: u32,
    eta_ref: f64,
    eta_eff: f64,
    out: *mut f64,
) -> FhStatus {
    if out.is_null() {
        return FhStatus::NullPointer;
    }
    match simulate_chain(
        photons,
        &ChainConfig {
            k,
            eta_ref,
            eta_eff,
        },
    ) {
        Ok(value) => {
            unsafe { *out = value };
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Writes the exact click-count distribution `P(m = 0..=photons)` of
/// time-multiplexed counting through a lossy fiber loop, plus the probability
/// that at least one photon was still circulating unmeasured when counting
/// stopped.
///
/// # Safety
///
/// `out_probs` must point to at least `out_len` writable doubles with
/// `out_len >= photons + 1`; `out_unmeasured` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fh_simulate_tdm(
    photons: u32,
    coupling: f64,
    loop_transmission: f64,
    round_trips: u32,
    eta_eff: f64,
    out_probs: *mut f64,
    out_len: usize,
    out_unmeasured: *mut f64,
) -> FhStatus {
    if out_probs.is_null() || out_unmeasured.is_null() {
        return FhStatus::NullPointer;
    }
    if out_len < photons as usize + 1 {
        return FhStatus::BufferTooSmall;
    }
    let cfg = TdmConfig {
        coupling,
        loop_transmission,
        round_trips,
        eta_eff,
    };
    match simulate_tdm(photons, &cfg) {
        Ok(distribution) => {
            for m in 0..=photons {
                unsafe {
                    *out_probs.add(m as usize) = distribution.clicks.get(&m).copied().unwrap_or(0.0)
                };
            }
            unsafe { *out_unmeasured = distribution.unmeasured_remainder };
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Detector model selector for [`fh_gate_new`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FhDetectorModel {
    IdealNumberResolving = 0,
    NonDiscriminating = 1,
    ChainDetector = 2,
}

/// Opaque heralded-CNOT evaluator; create with [`fh_gate_new`], release with
/// [`fh_gate_free`].
pub struct FhGate {
    evaluator: GateEvaluator,
}

/// Worst-case metrics of the gate over all two-qubit pure inputs.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FhGateMetrics {
    pub fidelity_min: f64,
    pub probability_at_fidelity_min: f64,
    pub probability_min: f64,
}

/// Creates a gate evaluator for the shipped calibrated layout with the chosen
/// measurement model. `eta_ref` is ignored unless the model is
/// `CHAIN_DETECTOR`; `eta_eff` is ignored for `IDEAL_NUMBER_RESOLVING`.
/// Returns null on invalid parameters.
#[no_mangle]
pub extern "C" fn fh_gate_new(model: FhDetectorModel, eta_ref: f64, eta_eff: f64) -> *mut FhGate {
    let detector_model = match model {
        FhDetectorModel::IdealNumberResolving => DetectorModel::IdealNumberResolving,
        FhDetectorModel::NonDiscriminating => DetectorModel::NonDiscriminating { eta_eff },
        FhDetectorModel::ChainDetector => DetectorModel::ChainDetector { eta_ref, eta_eff },
    };
    let config = CnotConfig::standard_with_model(detector_model);
    match GateEvaluator::new(&config) {
        Ok(evaluator) => Box::into_raw(Box::new(FhGate { evaluator })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Releases a gate created by [`fh_gate_new`].
///
/// # Safety
///
/// `gate` must be a pointer previously returned by [`fh_gate_new`] that has
/// not been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fh_gate_free(gate: *mut FhGate) {
    if !gate.is_null() {
        drop(unsafe { Box::from_raw(gate) });
    }
}

/// Ideal-detector calibration of the gate layout: writes the heralding
/// probability and fails unless the heralded gate is an exact CNOT.
///
/// # Safety
///
/// `gate` must be a live pointer from [`fh_gate_new`]; `out_herald` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fh_gate_calibrate(gate: *const FhGate, out_herald: *mut f64) -> FhStatus {
    if gate.is_null() || out_herald.is_null() {
        return FhStatus::NullPointer;
    }
    let gate = unsafe { &*gate };
    match calibrate(gate.evaluator.config()) {
        Ok(report) => {
            unsafe { *out_herald = report.herald_probability };
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Evaluates the gate for one two-qubit input given as four complex
/// amplitudes (|00>, |01>, |10>, |11>; control first). The input is
/// normalized internally. Writes the fidelity against the ideal CNOT output
/// and the heralding probability.
///
/// # Safety
///
/// `amplitudes_re` and `amplitudes_im` must point to four readable doubles;
/// `out_fidelity` and `out_probability` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fh_gate_evaluate(
    gate: *const FhGate,
    amplitudes_re: *const f64,
    amplitudes_im: *const f64,
    out_fidelity: *mut f64,
    out_probability: *mut f64,
) -> FhStatus {
    if gate.is_null()
        || amplitudes_re.is_null()
        || amplitudes_im.is_null()
        || out_fidelity.is_null()
        || out_probability.is_null()
    {
        return FhStatus::NullPointer;
    }
    let gate = unsafe { &*gate };
    let mut amplitudes = [Complex64::new(0.0, 0.0); 4];
    for (i, amp) in amplitudes.iter_mut().enumerate() {
        *amp = Complex64::new(unsafe { *amplitudes_re.add(i) }, unsafe {
            *amplitudes_im.add(i)
        });
    }
    let input = match TwoQubitState::normalized(amplitudes) {
        Ok(state) => state,
        Err(error) => return status_of(&error),
    };
    match gate.evaluator.evaluate(&input) {
        Ok((fidelity, probability)) => {
            unsafe {
                *out_fidelity = fidelity;
                *out_probability = probability;
            }
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}

/// Worst-case fidelity and success probability over all two-qubit pure
/// inputs. `probes_only` nonzero skips the refinement descents.
///
/// # Safety
///
/// `gate` must be a live pointer from [`fh_gate_new`]; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fh_gate_worst_case(
    gate: *const FhGate,
    seed: u64,
    probes_only: u32,
    out: *mut FhGateMetrics,
) -> FhStatus {
    if gate.is_null() || out.is_null() {
        return FhStatus::NullPointer;
    }
    let gate = unsafe { &*gate };
    let settings = SearchSettings {
        seed,
        probes_only: probes_only != 0,
        ..Default::default()
    };
    match worst_case_search(gate.evaluator.config(), &settings) {
        Ok(metrics) => {
            unsafe {
                *out = FhGateMetrics {
                    fidelity_min: metrics.fidelity_min,
                    probability_at_fidelity_min: metrics.probability_at_fidelity_min,
                    probability_min: metrics.probability_min,
                };
            }
            FhStatus::Ok
        }
        Err(error) => status_of(&error),
    }
}
