//! Builders and exact simulators for the three detection schemes: the cascade
//! N-port, the time-multiplexed fiber loop, and the conditioned beamsplitter
//! chain.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analytic::chain_prob_m1;
use crate::detection::{self, DetectorSpec};
use crate::elements::{chain_reflectivities, Circuit};
use crate::error::{Error, Result};
use crate::fock::{OccupationVector, SparseState};

#[derive(Clone, Copy, Debug)]
pub struct CascadeConfig {
    /// Number of output ports; a power of two for the tree builder.
    pub outputs: u32,
    pub eta_eff: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct TdmConfig {
    /// Out-coupling probability per round trip.
    pub coupling: f64,
    /// Survival probability of a photon that stays in the loop for another
    /// round trip.
    pub loop_transmission: f64,
    pub round_trips: u32,
    pub eta_eff: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ChainConfig {
    /// Target photon number: the number of conditioned reflected ports.
    pub k: u32,
    /// Reflectivity of the first beamsplitter; also the uniform per-detector
    /// arrival probability.
    pub eta_ref: f64,
    pub eta_eff: f64,
}

/// Balanced splitter tree fanning mode 0 out to `outputs` modes with uniform
/// single-photon arrival statistics. Uses `outputs - 1` beamsplitters.
pub fn build_tree_nport(outputs: u32) -> Result<Circuit> {
    if outputs < 2 || !outputs.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(outputs));
    }
    let mut circuit = Circuit::new(outputs as usize);
    fn split(circuit: &mut Circuit, lo: usize, width: usize) {
        if width == 1 {
            return;
        }
        let mid = lo + width / 2;
        circuit.push_beamsplitter(lo, mid, 0.5);
        split(circuit, lo, width / 2);
        split(circuit, mid, width / 2);
    }
    split(&mut circuit, 0, outputs as usize);
    Ok(circuit)
}

/// Tree plus a click detector on every output, as used by the cascade scheme.
pub fn cascade_circuit(cfg: &CascadeConfig) -> Result<Circuit> {
    let mut circuit = build_tree_nport(cfg.outputs)?;
    for mode in 0..cfg.outputs as usize {
        circuit.add_detector(DetectorSpec::click(mode, cfg.eta_eff));
    }
    Ok(circuit)
}

/// Exact distribution of the perceived photon number (clicked detectors) when
/// `photons` photons enter the cascade.
pub fn simulate_cascade(photons: u32, cfg: &CascadeConfig) -> Result<BTreeMap<u32, f64>> {
    let circuit = build_tree_nport(cfg.outputs)?;
    let input = SparseState::basis(OccupationVector::fock(circuit.mode_count, 0, photons));
    let after = circuit.run_elements(&input)?;
    let detectors: Vec<(usize, f64)> = (0..cfg.outputs as usize)
        .map(|m| (m, cfg.eta_eff))
        .collect();
    detection::click_count_distribution(&after, &detectors)
}

/// Output of a time-multiplexed run: the click-count distribution plus the
/// probability that at least one photon was still circulating, and therefore
/// unmeasured, when counting stopped.
#[derive(Clone, Debug)]
pub struct TdmDistribution {
    pub clicks: BTreeMap<u32, f64>,
    pub unmeasured_remainder: f64,
}

/// Unrolls the fiber loop into a beamsplitter chain: round trip `r` couples
/// the loop mode out into time-bin `r`, and the photons that stay behind
/// suffer the loop loss before the next pass. Photons still in the loop after
/// the last pass are discarded as unmeasured.
pub fn simulate_tdm(photons: u32, cfg: &TdmConfig) -> Result<TdmDistribution> {
    if cfg.round_trips == 0 {
        return Err(Error::InvalidParameter(
            "need at least one round trip".into(),
        ));
    }
    let couplings = vec![cfg.coupling; cfg.round_trips as usize];
    simulate_tdm_schedule(photons, &couplings, cfg.loop_transmission, cfg.eta_eff)
}

/// Generalization with one out-coupling probability per round trip. The
/// schedule `[1/R, 1/(R-1), ..., 1]` makes the time-bin arrival statistics
/// uniform, reproducing the cascade over R spatial bins.
pub fn simulate_tdm_schedule(
    photons: u32,
    couplings: &[f64],
    loop_transmission: f64,
    eta_eff: f64,
) -> Result<TdmDistribution> {
    if couplings.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one round trip".into(),
        ));
    }
    for &c in couplings {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "coupling {c} outside [0, 1]"
            )));
        }
    }
    if !(0.0..=1.0).contains(&loop_transmission) {
        return Err(Error::InvalidParameter(format!(
            "loop transmission {loop_transmission} outside [0, 1]"
        )));
    }
    let trips = couplings.len();
    // Mode 0 is the loop; modes 1..=trips are the time bins.
    let mut circuit = Circuit::new(trips + 1);
    for (r, &coupling) in couplings.iter().enumerate() {
        circuit.push_beamsplitter(0, r + 1, 1.0 - coupling);
        if r + 1 < trips {
            circuit.push_loss(0, loop_transmission);
        }
    }
    let input = SparseState::basis(OccupationVector::fock(trips + 1, 0, photons));
    let after = circuit.run_elements(&input)?;

    // Track the bins with the detector efficiency and the loop with a perfect
    // detector, so the remainder is visible in the same joint distribution.
    let mut detectors: Vec<(usize, f64)> = (1..=trips).map(|m| (m, eta_eff)).collect();
    detectors.push((0, 1.0));
    let joint = detection::joint_click_distribution(&after, &detectors)?;

    let mut clicks: BTreeMap<u32, f64> = BTreeMap::new();
    let mut unmeasured_remainder = 0.0;
    for (pattern, prob) in joint {
        let bin_clicks = pattern[..trips].iter().filter(|&&b| b).count() as u32;
        *clicks.entry(bin_clicks).or_insert(0.0) += prob;
        if pattern[trips] {
            unmeasured_remainder += prob;
        }
    }
    Ok(TdmDistribution {
        clicks,
        unmeasured_remainder,
    })
}

/// Beamsplitter chain with `k` conditioned reflected ports (click detectors)
/// and one terminal transmitted port (no-click detector). Reflectivities come
/// from the uniform-arrival recursion, so every reflected port sees a single
/// photon with probability `eta_ref`.
pub fn build_chain_detector(cfg: &ChainConfig) -> Result<Circuit> {
    if cfg.k == 0 {
        return Err(Error::InvalidParameter(
            "chain needs at least one stage".into(),
        ));
    }
    let reflectivities = chain_reflectivities(cfg.eta_ref, cfg.k)?;
    let k = cfg.k as usize;
    // Stage i reflects into mode i-1 and hands the transmitted photons to
    // mode i; the chain terminates in mode k.
    let mut circuit = Circuit::new(k + 1);
    for (i, &eta) in reflectivities.iter().enumerate() {
        circuit.push_beamsplitter(i, i + 1, eta);
    }
    for mode in 0..k {
        circuit.add_detector(DetectorSpec::click(mode, cfg.eta_eff));
    }
    circuit.add_detector(DetectorSpec::no_click(k, cfg.eta_eff));
    Ok(circuit)
}

/// Probability that every reflected-port detector clicks while the terminal
/// detector stays silent for an `photons`-photon input.
pub fn simulate_chain(photons: u32, cfg: &ChainConfig) -> Result<f64> {
    let circuit = build_chain_detector(cfg)?;
    let input = SparseState::basis(OccupationVector::fock(circuit.mode_count, 0, photons));
    let heralded = circuit.run(&input)?;
    Ok(detection::heralding_probability(&heralded))
}

/// Single-photon arrival probabilities at the reflected ports and the
/// terminal port of a chain, from the exact simulation.
pub fn chain_arrival_probabilities(cfg: &ChainConfig) -> Result<Vec<f64>> {
    let circuit = build_chain_detector(cfg)?;
    let input = SparseState::basis(OccupationVector::fock(circuit.mode_count, 0, 1));
    let after = circuit.run_elements(&input)?;
    let mut probs = vec![0.0; circuit.mode_count];
    for (weight, state) in after.branches() {
        for (occ, amp) in state.amplitudes() {
            for (mode, p) in probs.iter_mut().enumerate() {
                if occ.count(mode) == 1 {
                    *p += weight * amp.norm_sqr();
                }
            }
        }
    }
    Ok(probs)
}

/// One row of the misidentification table: the probability of perceiving one
/// photon for each incident photon number at a grid of detector efficiencies
/// and first-stage reflectivities.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuppressionCell {
    pub eta_eff: f64,
    pub eta_ref: f64,
    pub photons: u32,
    pub p_m1: f64,
}

pub fn suppression_grid(
    eta_effs: &[f64],
    eta_refs: &[f64],
    max_photons: u32,
) -> Result<Vec<SuppressionCell>> {
    if eta_effs.is_empty() || eta_refs.is_empty() {
        return Err(Error::InvalidParameter(
            "parameter lists must be non-empty".into(),
        ));
    }
    let mut cells = Vec::new();
    for &eta_eff in eta_effs {
        for &eta_ref in eta_refs {
            for photons in 0..=max_photons {
                cells.push(SuppressionCell {
                    eta_eff,
                    eta_ref,
                    photons,
                    p_m1: chain_prob_m1(photons, eta_ref, eta_eff),
                });
            }
        }
    }
    Ok(cells)
}
