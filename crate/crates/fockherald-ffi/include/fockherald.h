#ifndef FOCKHERALD_H
#define FOCKHERALD_H

/* Generated by cbindgen from the fockherald-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Detector model selector for [`fh_gate_new`].
 */
typedef enum FhDetectorModel {
  FH_DETECTOR_MODEL_IDEAL_NUMBER_RESOLVING = 0,
  FH_DETECTOR_MODEL_NON_DISCRIMINATING = 1,
  FH_DETECTOR_MODEL_CHAIN_DETECTOR = 2,
} FhDetectorModel;

/**
 * Status codes returned by every entry point.
 */
typedef enum FhStatus {
  FH_STATUS_OK = 0,
  FH_STATUS_NULL_POINTER = 1,
  FH_STATUS_INVALID_ARGUMENT = 2,
  FH_STATUS_INFEASIBLE_UNIFORMITY = 3,
  FH_STATUS_PHOTONS_EXCEED_OUTPUTS = 4,
  FH_STATUS_ENUMERATION_BOUND = 5,
  FH_STATUS_BUFFER_TOO_SMALL = 6,
  FH_STATUS_CALIBRATION_FAILED = 7,
  FH_STATUS_UNDEFINED_FIDELITY = 8,
  FH_STATUS_INTERNAL_ERROR = 9,
} FhStatus;

/**
 * Opaque heralded-CNOT evaluator; create with [`fh_gate_new`], release with
 * [`fh_gate_free`].
 */
typedef struct FhGate FhGate;

/**
 * Worst-case metrics of the gate over all two-qubit pure inputs.
 */
typedef struct FhGateMetrics {
  double fidelity_min;
  double probability_at_fidelity_min;
  double probability_min;
} FhGateMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a NUL-terminated static string.
 */
const char *fh_version(void);

/**
 * Probability that a uniform cascade over `outputs` detectors of efficiency
 * `eta_eff` reports exactly `photons` clicks for `photons` incident photons.
 *
 * # Safety
 *
 * `out` must be a writable double.
 */
enum FhStatus fh_cascade_prob_correct(uint32_t photons,
                                      uint32_t outputs,
                                      double eta_eff,
                                      double *out);

/**
 * Probability that a single-stage conditioned chain perceives one photon.
 *
 * # Safety
 *
 * `out` must be a writable double.
 */
enum FhStatus fh_chain_prob_m1(uint32_t photons, double eta_ref, double eta_eff, double *out);

/**
 * Probability that a `k`-stage conditioned chain perceives exactly `k`
 * photons.
 *
 * # Safety
 *
 * `out` must be a writable double.
 */
enum FhStatus fh_chain_prob_mk(uint32_t photons,
                               uint32_t k,
                               double eta_ref,
                               double eta_eff,
                               double *out);

/**
 * Writes the `stages` chain reflectivities that make single-photon arrival
 * statistics uniform, starting from `eta_first`.
 *
 * # Safety
 *
 * `out` must point to at least `out_len` writable doubles.
 */
enum FhStatus fh_chain_reflectivities(double eta_first,
                                      uint32_t stages,
                                      double *out,
                                      uintptr_t out_len);

/**
 * Writes the exact perceived-count distribution `P(m = 0..=photons)` of the
 * cascade into `out`.
 *
 * # Safety
 *
 * `out` must point to at least `out_len` writable doubles, with
 * `out_len >= photons + 1`.
 */
enum FhStatus fh_simulate_cascade(uint32_t photons,
                                  uint32_t outputs,
                                  double eta_eff,
                                  double *out,
                                  uintptr_t out_len);

/**
 * Acceptance probability of the `k`-stage chain detector for an
 * `photons`-photon input, from the exact quantum simulation.
 *
 * # Safety
 *
 * `out` must be a writable double.
 */
enum FhStatus fh_simulate_chain(uint32_t photons,
                                uint32_t k,
                                double eta_ref,
                                double eta_eff,
                                double *out);

/**
 * Writes the exact click-count distribution `P(m = 0..=photons)` of
 * time-multiplexed counting through a lossy fiber loop, plus the probability
 * that at least one photon was still circulating unmeasured when counting
 * stopped.
 *
 * # Safety
 *
 * `out_probs` must point to at least `out_len` writable doubles with
 * `out_len >= photons + 1`; `out_unmeasured` must be writable.
 */
enum FhStatus fh_simulate_tdm(uint32_t photons,
                              double coupling,
                              double loop_transmission,
                              uint32_t round_trips,
                              double eta_eff,
                              double *out_probs,
                              uintptr_t out_len,
                              double *out_unmeasured);

/**
 * Creates a gate evaluator for the shipped calibrated layout with the chosen
 * measurement model. `eta_ref` is ignored unless the model is
 * `CHAIN_DETECTOR`; `eta_eff` is ignored for `IDEAL_NUMBER_RESOLVING`.
 * Returns null on invalid parameters.
 */
struct FhGate *fh_gate_new(enum FhDetectorModel model, double eta_ref, double eta_eff);

/**
 * Releases a gate created by [`fh_gate_new`].
 *
 * # Safety
 *
 * `gate` must be a pointer previously returned by [`fh_gate_new`] that has
 * not been freed; null is ignored.
 */
void fh_gate_free(struct FhGate *gate);

/**
 * Ideal-detector calibration of the gate layout: writes the heralding
 * probability and fails unless the heralded gate is an exact CNOT.
 *
 * # Safety
 *
 * `gate` must be a live pointer from [`fh_gate_new`]; `out_herald` must be
 * writable.
 */
enum FhStatus fh_gate_calibrate(const struct FhGate *gate, double *out_herald);

/**
 * Evaluates the gate for one two-qubit input given as four complex
 * amplitudes (|00>, |01>, |10>, |11>; control first). The input is
 * normalized internally. Writes the fidelity against the ideal CNOT output
 * and the heralding probability.
 *
 * # Safety
 *
 * `amplitudes_re` and `amplitudes_im` must point to four readable doubles;
 * `out_fidelity` and `out_probability` must be writable.
 */
enum FhStatus fh_gate_evaluate(const struct FhGate *gate,
                               const double *amplitudes_re,
                               const double *amplitudes_im,
                               double *out_fidelity,
                               double *out_probability);

/**
 * Worst-case fidelity and success probability over all two-qubit pure
 * inputs. `probes_only` nonzero skips the refinement descents.
 *
 * # Safety
 *
 * `gate` must be a live pointer from [`fh_gate_new`]; `out` must be
 * writable.
 */
enum FhStatus fh_gate_worst_case(const struct FhGate *gate,
                                 uint64_t seed,
                                 uint32_t probes_only,
                                 struct FhGateMetrics *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FOCKHERALD_H */
