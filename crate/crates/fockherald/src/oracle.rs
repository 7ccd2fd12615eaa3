//! Brute-force classical enumeration of detection outcomes.
//!
//! In a beamsplitter network that never recombines occupied modes there is no
//! interference, so photons arrive at the detectors independently with fixed
//! per-detector probabilities. That makes an exact multinomial enumeration
//! possible, and it is kept deliberately independent of the quantum simulation
//! and the closed forms: this module never calls into `analytic` or `schemes`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::detection;
use crate::elements::{Circuit, Element};
use crate::error::{Error, Result};
use crate::fock::{OccupationVector, SparseState};
use crate::math::factorial;

/// Exact enumeration bound; keeps the worst case comfortably small.
pub const MAX_ORACLE_PHOTONS: u32 = 12;

/// Classical arrival statistics: one probability per detector port, with the
/// remainder reaching an undetected terminal port. Detection succeeds with
/// probability `eta_eff` wherever a photon arrives.
#[derive(Clone, Debug)]
pub struct ArrivalModel {
    arrival_probs: Vec<f64>,
    eta_eff: f64,
}

impl ArrivalModel {
    pub fn new(arrival_probs: Vec<f64>, eta_eff: f64) -> Result<Self> {
        let mut sum = 0.0;
        for &p in &arrival_probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "arrival probability {p} outside [0, 1]"
                )));
            }
            sum += p;
        }
        if sum > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "arrival probabilities sum to {sum} > 1"
            )));
        }
        if !(0.0..=1.0).contains(&eta_eff) {
            return Err(Error::InvalidParameter(format!(
                "efficiency {eta_eff} outside [0, 1]"
            )));
        }
        Ok(Self {
            arrival_probs,
            eta_eff,
        })
    }

    pub fn detector_count(&self) -> usize {
        self.arrival_probs.len()
    }

    pub fn arrival_probs(&self) -> &[f64] {
        &self.arrival_probs
    }

    pub fn eta_eff(&self) -> f64 {
        self.eta_eff
    }

    /// Probability that a photon reaches the undetected terminal port.
    pub fn terminal_prob(&self) -> f64 {
        (1.0 - self.arrival_probs.iter().sum::<f64>()).max(0.0)
    }
}

/// Exact joint distribution over detected photon counts: one entry per
/// detector port plus a final entry for photons detected at the terminal port.
/// Photons missed everywhere are marginalized out (they affect no count).
#[derive(Clone, Debug)]
pub struct ClickDistribution {
    detector_count: usize,
    outcomes: BTreeMap<Vec<u32>, f64>,
}

impl ClickDistribution {
    pub fn detector_count(&self) -> usize {
        self.detector_count
    }

    /// Iterates `(counts, probability)` where `counts` has one detected count
    /// per detector port followed by the terminal-port count.
    pub fn outcomes(&self) -> impl Iterator<Item = (&Vec<u32>, &f64)> {
        self.outcomes.iter()
    }

    pub fn total(&self) -> f64 {
        self.outcomes.values().sum()
    }

    /// Sums the probability of all outcomes satisfying a predicate on the
    /// count vector.
    pub fn probability<F>(&self, predicate: F) -> f64
    where
        F: Fn(&[u32]) -> bool,
    {
        self.outcomes
            .iter()
            .filter(|(counts, _)| predicate(counts))
            .map(|(_, p)| p)
            .sum()
    }

    /// Marginal click pattern over the detector ports (terminal excluded).
    pub fn click_pattern_distribution(&self) -> BTreeMap<Vec<bool>, f64> {
        let mut out: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
        for (counts, prob) in &self.outcomes {
            let pattern: Vec<bool> = counts[..self.detector_count]
                .iter()
                .map(|&c| c > 0)
                .collect();
            *out.entry(pattern).or_insert(0.0) += prob;
        }
        out
    }

    /// Distribution of the perceived photon number: how many detector ports
    /// saw at least one photon.
    pub fn perceived_count_distribution(&self) -> BTreeMap<u32, f64> {
        let mut out: BTreeMap<u32, f64> = BTreeMap::new();
        for (counts, prob) in &self.outcomes {
            let clicks = counts[..self.detector_count]
                .iter()
                .filter(|&&c| c > 0)
                .count() as u32;
            *out.entry(clicks).or_insert(0.0) += prob;
        }
        out
    }
}

/// Enumerates every assignment of `photons` independent photons to
/// (port, detected-or-missed) outcomes with multinomial weights.
pub fn enumerate_click_patterns(photons: u32, model: &ArrivalModel) -> Result<ClickDistribution> {
    if photons > MAX_ORACLE_PHOTONS {
        return Err(Error::EnumerationBound {
            photons,
            bound: MAX_ORACLE_PHOTONS,
        });
    }
    let detector_count = model.detector_count();
    // Cells: detected at each port, detected at the terminal port, missed
    // anywhere. Missed photons touch no count, so one cell covers them all.
    let mut cell_probs: Vec<f64> = model
        .arrival_probs
        .iter()
        .map(|p| p * model.eta_eff)
        .collect();
    cell_probs.push(model.terminal_prob() * model.eta_eff);
    cell_probs.push(1.0 - model.eta_eff);
    let cells = cell_probs.len();

    let mut outcomes: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    let mut counts = vec![0u32; cells];

    fn recurse(
        cell: usize,
        remaining: u32,
        weight: f64,
        counts: &mut Vec<u32>,
        cell_probs: &[f64],
        detector_count: usize,
        outcomes: &mut BTreeMap<Vec<u32>, f64>,
    ) {
        if cell + 1 == cell_probs.len() {
            let p = cell_probs[cell];
            if remaining > 0 && p == 0.0 {
                return;
            }
            counts[cell] = remaining;
            let total = weight / factorial(remaining) * p.powi(remaining as i32);
            let key: Vec<u32> = counts[..=detector_count].to_vec();
            *outcomes.entry(key).or_insert(0.0) += total;
            counts[cell] = 0;
            return;
        }
        let p = cell_probs[cell];
        let max_here = if p == 0.0 { 0 } else { remaining };
        for c in 0..=max_here {
            counts[cell] = c;
            recurse(
                cell + 1,
                remaining - c,
                weight / factorial(c) * p.powi(c as i32),
                counts,
                cell_probs,
                detector_count,
                outcomes,
            );
        }
        counts[cell] = 0;
    }

    recurse(
        0,
        photons,
        factorial(photons),
        &mut counts,
        &cell_probs,
        detector_count,
        &mut outcomes,
    );
    Ok(ClickDistribution {
        detector_count,
        outcomes,
    })
}

/// Comparison between the classical enumeration and the full Fock simulation
/// of a circuit, over the joint click pattern of its declared detectors.
#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub max_abs_diff: f64,
    pub pattern_count: usize,
    pub photons: u32,
    pub detector_count: usize,
    pub mode_count: usize,
}

/// Feeds `photons` photons into mode 0 of the circuit and compares the
/// classical multinomial enumeration against the exact quantum simulation.
/// Refuses circuits that recombine occupied modes, where the classical model
/// would be wrong, and circuits whose detectors have unequal efficiencies.
pub fn oracle_vs_quantum(circuit: &Circuit, photons: u32) -> Result<DiscrepancyReport> {
    circuit.validate()?;
    if photons > MAX_ORACLE_PHOTONS {
        return Err(Error::EnumerationBound {
            photons,
            bound: MAX_ORACLE_PHOTONS,
        });
    }
    if circuit.mode_count == 0 {
        return Err(Error::InvalidParameter("circuit has no modes".into()));
    }

    // A beamsplitter with both inputs occupied can interfere; refuse.
    let mut occupied = vec![false; circuit.mode_count];
    occupied[0] = true;
    for element in &circuit.elements {
        if let Element::BeamSplitter(bs) = element {
            if occupied[bs.mode_a] && occupied[bs.mode_b] {
                return Err(Error::RecombiningCircuit);
            }
            if occupied[bs.mode_a] || occupied[bs.mode_b] {
                occupied[bs.mode_a] = true;
                occupied[bs.mode_b] = true;
            }
        }
    }

    let eta_eff = match circuit.detectors.first() {
        Some(first) => first.efficiency,
        None => 1.0,
    };
    if circuit
        .detectors
        .iter()
        .any(|d| (d.efficiency - eta_eff).abs() > 0.0)
    {
        return Err(Error::InvalidParameter(
            "classical comparison requires a shared detector efficiency".into(),
        ));
    }

    // Classical probability flow for a single photon starting in mode 0.
    let mut flow = vec![0.0f64; circuit.mode_count];
    flow[0] = 1.0;
    for element in &circuit.elements {
        match element {
            Element::BeamSplitter(bs) => {
                let pa = flow[bs.mode_a];
                let pb = flow[bs.mode_b];
                let eta = bs.reflectivity;
                flow[bs.mode_a] = eta * pa + (1.0 - eta) * pb;
                flow[bs.mode_b] = (1.0 - eta) * pa + eta * pb;
            }
            Element::Loss(ch) => {
                flow[ch.mode] *= ch.transmission;
            }
        }
    }
    let arrivals: Vec<f64> = circuit.detectors.iter().map(|d| flow[d.mode]).collect();
    let oracle = enumerate_click_patterns(photons, &ArrivalModel::new(arrivals, eta_eff)?)?;
    let oracle_patterns = oracle.click_pattern_distribution();

    let input = SparseState::basis(OccupationVector::fock(circuit.mode_count, 0, photons));
    let after = circuit.run_elements(&input)?;
    let detector_ports: Vec<(usize, f64)> = circuit
        .detectors
        .iter()
        .map(|d| (d.mode, d.efficiency))
        .collect();
    let quantum_patterns = detection::joint_click_distribution(&after, &detector_ports)?;

    let mut max_abs_diff = 0.0f64;
    let mut pattern_count = 0usize;
    let mut keys: std::collections::BTreeSet<Vec<bool>> = std::collections::BTreeSet::new();
    keys.extend(oracle_patterns.keys().cloned());
    keys.extend(quantum_patterns.keys().cloned());
    for key in keys {
        let a = oracle_patterns.get(&key).copied().unwrap_or(0.0);
        let b = quantum_patterns.get(&key).copied().unwrap_or(0.0);
        if a > 1e-15 || b > 1e-15 {
            pattern_count += 1;
        }
        max_abs_diff = max_abs_diff.max((a - b).abs());
    }

    Ok(DiscrepancyReport {
        max_abs_diff,
        pattern_count,
        photons,
        detector_count: circuit.detectors.len(),
        mode_count: circuit.mode_count,
    })
}

/// Convenience: the classical distribution of the measured photon number
/// (clicked-detector count) with the given uniform arrival probabilities.
pub fn perceived_count_via_oracle(
    photons: u32,
    arrival_probs: Vec<f64>,
    eta_eff: f64,
) -> Result<BTreeMap<u32, f64>> {
    let model = ArrivalModel::new(arrival_probs, eta_eff)?;
    Ok(enumerate_click_patterns(photons, &model)?.perceived_count_distribution())
}

/// Probability that every detector port saw at least one photon while the
/// terminal port stayed completely silent: the chain acceptance event,
/// computed classically.
pub fn chain_acceptance_via_oracle(
    photons: u32,
    arrival_probs: Vec<f64>,
    eta_eff: f64,
) -> Result<f64> {
    let detector_count = arrival_probs.len();
    let model = ArrivalModel::new(arrival_probs, eta_eff)?;
    let distribution = enumerate_click_patterns(photons, &model)?;
    Ok(distribution.probability(|counts| {
        counts[..detector_count].iter().all(|&c| c > 0) && counts[detector_count] == 0
    }))
}
