//! Terminal detector models and measurement conditioning.
//!
//! A detector of efficiency η behaves like a beamsplitter of reflectivity η
//! feeding a perfect detector, with the loss port traced out. Conditioning on
//! an outcome therefore weights each photon-number component of the measured
//! mode separately and discards coherence between components: the classical
//! record plus the lost photons distinguish them. The measured mode is removed
//! from the surviving states.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Ensemble, OccupationVector, SparseState};
use crate::math::binomial;

/// Conditioned branches lighter than this are dropped.
pub const WEIGHT_CUTOFF: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorCondition {
    /// No photon registered.
    NoClick,
    /// At least one photon registered.
    Click,
    /// Exactly this many photons registered (number-resolving detector).
    ExactCount(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub mode: usize,
    pub efficiency: f64,
    pub condition: DetectorCondition,
}

impl DetectorSpec {
    pub fn new(mode: usize, efficiency: f64, condition: DetectorCondition) -> Self {
        Self {
            mode,
            efficiency,
            condition,
        }
    }

    pub fn click(mode: usize, efficiency: f64) -> Self {
        Self::new(mode, efficiency, DetectorCondition::Click)
    }

    pub fn no_click(mode: usize, efficiency: f64) -> Self {
        Self::new(mode, efficiency, DetectorCondition::NoClick)
    }

    pub fn exact_count(mode: usize, efficiency: f64, photons: u32) -> Self {
        Self::new(mode, efficiency, DetectorCondition::ExactCount(photons))
    }

    pub(crate) fn validate(&self, mode_count: usize) -> Result<()> {
        if self.mode >= mode_count {
            return Err(Error::ModeOutOfRange {
                index: self.mode,
                mode_count,
            });
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::InvalidParameter(format!(
                "detector efficiency {} outside [0, 1]",
                self.efficiency
            )));
        }
        Ok(())
    }
}

/// Probability that a detector of the given efficiency reports the condition
/// when `photons` photons arrive at it.
pub fn condition_probability(condition: DetectorCondition, efficiency: f64, photons: u32) -> f64 {
    let miss = 1.0 - efficiency;
    match condition {
        DetectorCondition::NoClick => miss.powi(photons as i32),
        DetectorCondition::Click => 1.0 - miss.powi(photons as i32),
        DetectorCondition::ExactCount(m) => {
            if photons < m {
                0.0
            } else {
                binomial(photons, m) * efficiency.powi(m as i32) * miss.powi((photons - m) as i32)
            }
        }
    }
}

/// Splits a state by the photon count in `mode`, removing the mode from the
/// returned (unnormalized) components.
fn split_by_count(state: &SparseState, mode: usize) -> Vec<(u32, SparseState, f64)> {
    let mut groups: BTreeMap<u32, BTreeMap<OccupationVector, Complex64>> = BTreeMap::new();
    for (occ, &amp) in state.amplitudes() {
        groups
            .entry(occ.count(mode))
            .or_default()
            .insert(occ.without_mode(mode), amp);
    }
    groups
        .into_iter()
        .map(|(n, map)| {
            let sub = SparseState::from_map_pruned(state.mode_count() - 1, map);
            let nsq = sub.norm_sqr();
            (n, sub, nsq)
        })
        .collect()
}

/// Conditions the ensemble on one detector outcome. Surviving branches have
/// the measured mode removed and carry the joint outcome probability in their
/// weights.
pub fn measure(ensemble: &Ensemble, detector: &DetectorSpec) -> Result<Ensemble> {
    let mut branches = Vec::new();
    for (weight, state) in ensemble.branches() {
        detector.validate(state.mode_count())?;
        for (photons, sub, nsq) in split_by_count(state, detector.mode) {
            if nsq <= 1e-300 {
                continue;
            }
            let factor = condition_probability(detector.condition, detector.efficiency, photons);
            let new_weight = weight * nsq * factor;
            if new_weight < WEIGHT_CUTOFF {
                continue;
            }
            branches.push((
                new_weight,
                sub.scaled(Complex64::new(1.0 / nsq.sqrt(), 0.0)),
            ));
        }
    }
    Ok(Ensemble::from_branches_unchecked(branches))
}

/// Joint probability of every condition applied so far.
pub fn heralding_probability(ensemble: &Ensemble) -> f64 {
    ensemble.total_weight()
}

/// Applies a set of detectors on distinct modes. Modes are processed from the
/// highest index down so that removals never shift a mode still to be
/// measured; the outcome is order-independent anyway.
pub fn apply_detectors(ensemble: &Ensemble, detectors: &[DetectorSpec]) -> Result<Ensemble> {
    let mut seen: BTreeMap<usize, ()> = BTreeMap::new();
    for det in detectors {
        if seen.insert(det.mode, ()).is_some() {
            return Err(Error::InvalidParameter(format!(
                "two detectors share mode {}",
                det.mode
            )));
        }
    }
    let mut order: Vec<&DetectorSpec> = detectors.iter().collect();
    order.sort_by_key(|det| std::cmp::Reverse(det.mode));
    let mut current = ensemble.clone();
    for det in order {
        current = measure(&current, det)?;
    }
    Ok(current)
}

/// Exact joint distribution over click outcomes of the listed `(mode,
/// efficiency)` detectors, in the given order. Both outcomes of every detector
/// are tracked, so the probabilities sum to the input weight.
pub fn joint_click_distribution(
    ensemble: &Ensemble,
    detectors: &[(usize, f64)],
) -> Result<BTreeMap<Vec<bool>, f64>> {
    if detectors.len() > 64 {
        return Err(Error::InvalidParameter(
            "joint click tracking supports at most 64 detectors".into(),
        ));
    }
    let mut seen: BTreeMap<usize, ()> = BTreeMap::new();
    for &(mode, eff) in detectors {
        if seen.insert(mode, ()).is_some() {
            return Err(Error::InvalidParameter(format!(
                "two detectors share mode {mode}"
            )));
        }
        if !(0.0..=1.0).contains(&eff) {
            return Err(Error::InvalidParameter(format!(
                "efficiency {eff} outside [0, 1]"
            )));
        }
    }

    struct Branch {
        pattern: u64,
        weight: f64,
        state: SparseState,
    }
    let mut branches: Vec<Branch> = ensemble
        .branches()
        .iter()
        .map(|(w, s)| Branch {
            pattern: 0,
            weight: *w,
            state: s.clone(),
        })
        .collect();

    let mut order: Vec<(usize, usize, f64)> = detectors
        .iter()
        .enumerate()
        .map(|(idx, &(mode, eff))| (idx, mode, eff))
        .collect();
    order.sort_by_key(|&(_, mode, _)| std::cmp::Reverse(mode));

    for (idx, mode, eff) in order {
        if let Some(branch) = branches.first() {
            if mode >= branch.state.mode_count() {
                return Err(Error::ModeOutOfRange {
                    index: mode,
                    mode_count: branch.state.mode_count(),
                });
            }
        }
        let mut next = Vec::with_capacity(branches.len() * 2);
        for branch in &branches {
            for (photons, sub, nsq) in split_by_count(&branch.state, mode) {
                if nsq <= 1e-300 {
                    continue;
                }
                let normalized = sub.scaled(Complex64::new(1.0 / nsq.sqrt(), 0.0));
                let base = branch.weight * nsq;
                let p_silent = (1.0 - eff).powi(photons as i32);
                if base * p_silent > 0.0 {
                    next.push(Branch {
                        pattern: branch.pattern,
                        weight: base * p_silent,
                        state: normalized.clone(),
                    });
                }
                let p_click = 1.0 - p_silent;
                if photons > 0 && base * p_click > 0.0 {
                    next.push(Branch {
                        pattern: branch.pattern | (1u64 << idx),
                        weight: base * p_click,
                        state: normalized,
                    });
                }
            }
        }
        branches = next;
    }

    let mut out: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
    for branch in branches {
        let key: Vec<bool> = (0..detectors.len())
            .map(|i| branch.pattern & (1u64 << i) != 0)
            .collect();
        *out.entry(key).or_insert(0.0) += branch.weight;
    }
    Ok(out)
}

/// Distribution over the number of detectors that clicked.
pub fn click_count_distribution(
    ensemble: &Ensemble,
    detectors: &[(usize, f64)],
) -> Result<BTreeMap<u32, f64>> {
    let joint = joint_click_distribution(ensemble, detectors)?;
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    for (pattern, prob) in joint {
        let clicks = pattern.iter().filter(|&&b| b).count() as u32;
        *out.entry(clicks).or_insert(0.0) += prob;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn meas_state(counts: Vec<u32>) -> Ensemble {
        Ensemble::pure(SparseState::basis(OccupationVector::new(counts)))
    }

    #[test]
    fn perfect_click_on_single_photon() {
        // |1⟩_meas ⊗ |2⟩: perfect detector, Click keeps everything.
        let e = meas_state(vec![1, 2]);
        let out = measure(&e, &DetectorSpec::click(0, 1.0)).unwrap();
        assert_eq!(out.branches().len(), 1);
        let (w, s) = &out.branches()[0];
        assert!((w - 1.0).abs() < 1e-12);
        assert_eq!(s.mode_count(), 1);
        assert!((s.amplitude(&OccupationVector::new(vec![2])) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn lossy_no_click_on_two_photons() {
        let e = meas_state(vec![2, 1]);
        let out = measure(&e, &DetectorSpec::no_click(0, 0.8)).unwrap();
        assert_eq!(out.branches().len(), 1);
        let (w, _) = &out.branches()[0];
        assert!((w - 0.04).abs() < 1e-12);
    }

    #[test]
    fn vacuum_cannot_click() {
        let e = meas_state(vec![0, 1]);
        for eff in [0.3, 1.0] {
            let out = measure(&e, &DetectorSpec::click(0, eff)).unwrap();
            assert!(out.is_empty());
            assert_eq!(heralding_probability(&out), 0.0);
        }
    }

    #[test]
    fn heralding_probability_sums_weights() {
        assert_eq!(heralding_probability(&Ensemble::empty()), 0.0);
        let s = SparseState::vacuum(1);
        let e = Ensemble::from_branches(vec![(0.05, s)]).unwrap();
        assert!((heralding_probability(&e) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn click_and_no_click_are_complementary() {
        let inv = 1.0 / 3.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![0, 1]), c(inv)),
                (OccupationVector::new(vec![1, 0]), c(inv)),
                (OccupationVector::new(vec![3, 2]), c(inv)),
            ],
        )
        .unwrap();
        let e = Ensemble::pure(state);
        for eff in [0.0, 0.4, 0.9, 1.0] {
            let clicked = measure(&e, &DetectorSpec::click(0, eff)).unwrap();
            let silent = measure(&e, &DetectorSpec::no_click(0, eff)).unwrap();
            assert!(
                (clicked.total_weight() + silent.total_weight() - 1.0).abs() < 1e-12,
                "eff={eff}"
            );
            // Click matches the sum over ExactCount(m >= 1).
            let mut exact_sum = 0.0;
            for m in 1..=4 {
                exact_sum += measure(&e, &DetectorSpec::exact_count(0, eff, m))
                    .unwrap()
                    .total_weight();
            }
            assert!(
                (clicked.total_weight() - exact_sum).abs() < 1e-12,
                "eff={eff}"
            );
        }
    }

    #[test]
    fn unit_efficiency_projects() {
        let inv = 1.0 / 2.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![0, 1]), c(inv)),
                (OccupationVector::new(vec![2, 0]), c(inv)),
            ],
        )
        .unwrap();
        let e = Ensemble::pure(state);
        let silent = measure(&e, &DetectorSpec::no_click(0, 1.0)).unwrap();
        assert_eq!(silent.branches().len(), 1);
        assert!((silent.total_weight() - 0.5).abs() < 1e-12);
        let (_, s) = &silent.branches()[0];
        assert!((s.amplitude(&OccupationVector::new(vec![1])) - c(1.0)).norm() < 1e-12);

        let two = measure(&e, &DetectorSpec::exact_count(0, 1.0, 2)).unwrap();
        assert!((two.total_weight() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn measurement_order_is_irrelevant() {
        let half = 0.5;
        let state = SparseState::from_amplitudes(
            3,
            vec![
                (OccupationVector::new(vec![1, 0, 1]), c(half)),
                (OccupationVector::new(vec![0, 1, 1]), c(half)),
                (OccupationVector::new(vec![2, 1, 0]), c(half)),
                (OccupationVector::new(vec![0, 0, 2]), c(half)),
            ],
        )
        .unwrap();
        let e = Ensemble::pure(state);
        let d0 = DetectorSpec::click(0, 0.7);
        let d2 = DetectorSpec::click(2, 0.9);

        // Measure mode 2 then mode 0 (indices unaffected), vs mode 0 then
        // mode 2 (which becomes mode 1 after the removal).
        let a = measure(&measure(&e, &d2).unwrap(), &d0).unwrap();
        let b = measure(&measure(&e, &d0).unwrap(), &DetectorSpec::click(1, 0.9)).unwrap();
        assert!((a.total_weight() - b.total_weight()).abs() < 1e-12);

        let fingerprint = |e: &Ensemble| {
            let mut items: Vec<(String, f64)> = e
                .branches()
                .iter()
                .map(|(w, s)| (format!("{s:?}"), *w))
                .collect();
            items.sort_by(|x, y| x.0.cmp(&y.0));
            items
        };
        let fa = fingerprint(&a);
        let fb = fingerprint(&b);
        assert_eq!(fa.len(), fb.len());
        for ((ka, wa), (kb, wb)) in fa.iter().zip(fb.iter()) {
            assert_eq!(ka, kb);
            assert!((wa - wb).abs() < 1e-12);
        }
    }

    #[test]
    fn efficiency_equals_explicit_loss_then_perfect_detector() {
        use crate::elements::{apply_loss, LossChannel};
        let inv = 1.0 / 3.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![0, 2]), c(inv)),
                (OccupationVector::new(vec![1, 1]), c(inv)),
                (OccupationVector::new(vec![3, 0]), c(inv)),
            ],
        )
        .unwrap();
        let e = Ensemble::pure(state);
        let eff = 0.65;
        for condition in [
            DetectorCondition::NoClick,
            DetectorCondition::Click,
            DetectorCondition::ExactCount(0),
            DetectorCondition::ExactCount(1),
            DetectorCondition::ExactCount(2),
            DetectorCondition::ExactCount(3),
        ] {
            let direct = measure(&e, &DetectorSpec::new(0, eff, condition)).unwrap();
            let lossy = apply_loss(&e, &LossChannel::new(0, eff)).unwrap();
            let then_perfect = measure(&lossy, &DetectorSpec::new(0, 1.0, condition)).unwrap();
            assert!(
                (direct.total_weight() - then_perfect.total_weight()).abs() < 1e-12,
                "{condition:?}"
            );
        }
    }

    #[test]
    fn measuring_a_missing_mode_fails() {
        let e = meas_state(vec![1]);
        let once = measure(&e, &DetectorSpec::click(0, 1.0)).unwrap();
        // The only mode is gone; asking for mode 0 again is a usage error.
        assert!(matches!(
            measure(&once, &DetectorSpec::click(0, 1.0)),
            Err(Error::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn joint_clicks_partition_probability() {
        let inv = 1.0 / 2.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![2, 0]), c(inv)),
                (OccupationVector::new(vec![0, 2]), c(-inv)),
            ],
        )
        .unwrap();
        let joint =
            joint_click_distribution(&Ensemble::pure(state), &[(0, 1.0), (1, 1.0)]).unwrap();
        assert!((joint.values().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((joint[&vec![true, false]] - 0.5).abs() < 1e-12);
        assert!((joint[&vec![false, true]] - 0.5).abs() < 1e-12);
        assert!(!joint.contains_key(&vec![true, true]));
    }
}
