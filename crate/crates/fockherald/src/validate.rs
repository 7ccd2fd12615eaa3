//! Agreement suites: every closed form is checked against the brute-force
//! oracle and the exact quantum simulation on small instances, and the gate
//! reflectivities are checked by calibration. The command-line `validate`
//! subcommand runs all of them.

use serde::Serialize;

use crate::analytic::{
    cascade_prob_correct, chain_prob_m1_closed, chain_prob_m1_sum, chain_prob_mk,
};
use crate::cnot::{calibrate, CnotConfig};
use crate::error::Result;
use crate::oracle::{self, chain_acceptance_via_oracle, perceived_count_via_oracle};
use crate::schemes::{
    build_chain_detector, cascade_circuit, chain_arrival_probabilities, simulate_cascade,
    simulate_chain, simulate_tdm_schedule, CascadeConfig, ChainConfig,
};

pub const AGREEMENT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub max_discrepancy: f64,
    pub cases: usize,
    pub detail: String,
}

impl SuiteResult {
    fn from_max(name: &str, max_discrepancy: f64, cases: usize, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: max_discrepancy < AGREEMENT_TOLERANCE,
            max_discrepancy,
            cases,
            detail,
        }
    }
}

/// Closed form vs oracle vs quantum simulation for the cascade counter.
pub fn cascade_suite() -> Result<SuiteResult> {
    let mut max_diff = 0.0f64;
    let mut cases = 0usize;
    for outputs in [2u32, 4, 8, 16] {
        for eta_eff in [0.8, 0.9, 1.0] {
            for photons in 0..=4u32 {
                let cfg = CascadeConfig { outputs, eta_eff };
                let simulated = simulate_cascade(photons, &cfg)?;
                let counts = perceived_count_via_oracle(
                    photons,
                    vec![1.0 / f64::from(outputs); outputs as usize],
                    eta_eff,
                )?;
                for m in 0..=photons {
                    let a = simulated.get(&m).copied().unwrap_or(0.0);
                    let b = counts.get(&m).copied().unwrap_or(0.0);
                    max_diff = max_diff.max((a - b).abs());
                }
                if photons <= outputs {
                    let closed = cascade_prob_correct(photons, outputs, eta_eff)?;
                    let sim_correct = simulated.get(&photons).copied().unwrap_or(0.0);
                    let oracle_correct = counts.get(&photons).copied().unwrap_or(0.0);
                    max_diff = max_diff.max((closed - sim_correct).abs());
                    max_diff = max_diff.max((closed - oracle_correct).abs());
                }
                cases += 1;
            }
        }
    }
    Ok(SuiteResult::from_max(
        "cascade-agreement",
        max_diff,
        cases,
        "closed form vs oracle vs quantum, N in {2,4,8,16}, n <= 4".into(),
    ))
}

/// Closed form vs binomial sum vs oracle vs quantum simulation for the
/// single-stage chain detector.
pub fn chain_single_suite() -> Result<SuiteResult> {
    let mut max_diff = 0.0f64;
    let mut cases = 0usize;
    for eta_ref in [0.011, 0.1, 0.5] {
        for eta_eff in [0.9, 0.99, 1.0] {
            for photons in 0..=6u32 {
                let sum = chain_prob_m1_sum(photons, eta_ref, eta_eff);
                if eta_eff < 1.0 {
                    let closed = chain_prob_m1_closed(photons, eta_ref, eta_eff);
                    max_diff = max_diff.max((sum - closed).abs());
                }
                let via_oracle = chain_acceptance_via_oracle(photons, vec![eta_ref], eta_eff)?;
                max_diff = max_diff.max((sum - via_oracle).abs());
                let simulated = simulate_chain(
                    photons,
                    &ChainConfig {
                        k: 1,
                        eta_ref,
                        eta_eff,
                    },
                )?;
                max_diff = max_diff.max((sum - simulated).abs());
                cases += 1;
            }
        }
    }
    Ok(SuiteResult::from_max(
        "chain-single-photon",
        max_diff,
        cases,
        "binomial sum vs closed form vs oracle vs quantum, n <= 6".into(),
    ))
}

/// Uniform arrival statistics plus the multinomial closed form vs oracle vs
/// quantum simulation for multi-stage chains.
pub fn chain_multi_suite() -> Result<SuiteResult> {
    let mut max_diff = 0.0f64;
    let mut cases = 0usize;
    for k in 1..=3u32 {
        for eta_ref in [0.02, 0.1, 1.0 / f64::from(k)] {
            // Uniformity of single-photon arrivals.
            let cfg = ChainConfig {
                k,
                eta_ref,
                eta_eff: 1.0,
            };
            let arrivals = chain_arrival_probabilities(&cfg)?;
            let mut spread = 0.0f64;
            for arrival in arrivals.iter().take(k as usize) {
                spread = spread.max((arrival - eta_ref).abs());
            }
            let terminal_expected = 1.0 - f64::from(k) * eta_ref;
            spread = spread.max((arrivals[k as usize] - terminal_expected).abs());
            max_diff = max_diff.max(spread);

            for eta_eff in [0.8, 0.95, 1.0] {
                for photons in 0..=6u32 {
                    let closed = chain_prob_mk(photons, k, eta_ref, eta_eff)?;
                    let via_oracle =
                        chain_acceptance_via_oracle(photons, vec![eta_ref; k as usize], eta_eff)?;
                    let simulated = simulate_chain(
                        photons,
                        &ChainConfig {
                            k,
                            eta_ref,
                            eta_eff,
                        },
                    )?;
                    max_diff = max_diff.max((closed - via_oracle).abs());
                    max_diff = max_diff.max((closed - simulated).abs());
                    cases += 1;
                }
            }
        }
    }
    Ok(SuiteResult::from_max(
        "chain-multi-photon",
        max_diff,
        cases,
        "uniform arrivals and multinomial form vs oracle vs quantum, k <= 3, n <= 6".into(),
    ))
}

/// Time-multiplexed counting vs the oracle, plus the correspondence with the
/// spatial cascade under a uniform out-coupling schedule.
pub fn tdm_suite() -> Result<SuiteResult> {
    let mut max_diff = 0.0f64;
    let mut cases = 0usize;

    // Fixed coupling, lossy loop, vs per-bin arrival oracle.
    for (coupling, loop_transmission, trips, eta_eff) in [
        (0.5, 1.0, 3usize, 1.0),
        (0.3, 0.9, 3, 0.95),
        (0.25, 0.8, 4, 0.9),
    ] {
        let mut arrivals = Vec::new();
        let mut survive = 1.0;
        for r in 0..trips {
            arrivals.push(survive * coupling);
            if r + 1 < trips {
                survive *= (1.0 - coupling) * loop_transmission;
            }
        }
        for photons in 0..=3u32 {
            let tdm =
                simulate_tdm_schedule(photons, &vec![coupling; trips], loop_transmission, eta_eff)?;
            let counts = perceived_count_via_oracle(photons, arrivals.clone(), eta_eff)?;
            for (m, p) in &counts {
                let got = tdm.clicks.get(m).copied().unwrap_or(0.0);
                max_diff = max_diff.max((got - p).abs());
            }
            cases += 1;
        }
    }

    // Uniform schedule reproduces the cascade over the same number of bins.
    for trips in [2u32, 4] {
        let couplings: Vec<f64> = (0..trips).map(|r| 1.0 / f64::from(trips - r)).collect();
        for eta_eff in [0.9, 1.0] {
            for photons in 0..=3u32 {
                let tdm = simulate_tdm_schedule(photons, &couplings, 1.0, eta_eff)?;
                let cascade = simulate_cascade(
                    photons,
                    &CascadeConfig {
                        outputs: trips,
                        eta_eff,
                    },
                )?;
                for (m, p) in &cascade {
                    let got = tdm.clicks.get(m).copied().unwrap_or(0.0);
                    max_diff = max_diff.max((got - p).abs());
                }
                cases += 1;
            }
        }
    }
    Ok(SuiteResult::from_max(
        "tdm-correspondence",
        max_diff,
        cases,
        "time bins vs arrival oracle; uniform schedule vs spatial cascade".into(),
    ))
}

/// Classical enumeration vs quantum simulation on representative circuits.
pub fn oracle_circuit_suite() -> Result<SuiteResult> {
    let mut max_diff = 0.0f64;
    let mut cases = 0usize;
    for photons in [1u32, 2, 3] {
        let tree = cascade_circuit(&CascadeConfig {
            outputs: 4,
            eta_eff: 0.9,
        })?;
        let report = oracle::oracle_vs_quantum(&tree, photons)?;
        max_diff = max_diff.max(report.max_abs_diff);
        cases += 1;

        let chain = build_chain_detector(&ChainConfig {
            k: 2,
            eta_ref: 0.1,
            eta_eff: 0.9,
        })?;
        let report = oracle::oracle_vs_quantum(&chain, photons)?;
        max_diff = max_diff.max(report.max_abs_diff);
        cases += 1;
    }
    Ok(SuiteResult::from_max(
        "oracle-vs-quantum",
        max_diff,
        cases,
        "joint click patterns of splitter tree and chain circuits".into(),
    ))
}

/// Gate reflectivity calibration under ideal detectors.
pub fn cnot_calibration_suite(cfg: &CnotConfig) -> SuiteResult {
    match calibrate(cfg) {
        Ok(report) => SuiteResult {
            name: "cnot-calibration".into(),
            passed: true,
            max_discrepancy: (1.0 - report.worst_fidelity).max(report.herald_spread),
            cases: report.entries.len(),
            detail: format!(
                "herald probability {:.6}, worst fidelity {:.12}",
                report.herald_probability, report.worst_fidelity
            ),
        },
        Err(err) => SuiteResult {
            name: "cnot-calibration".into(),
            passed: false,
            max_discrepancy: f64::NAN,
            cases: 0,
            detail: err.to_string(),
        },
    }
}

/// Runs every suite against the given gate configuration.
pub fn run_all(cfg: &CnotConfig) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        cascade_suite()?,
        chain_single_suite()?,
        chain_multi_suite()?,
        tdm_suite()?,
        oracle_circuit_suite()?,
        cnot_calibration_suite(cfg),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_the_shipped_configuration() {
        let results = run_all(&CnotConfig::standard()).unwrap();
        for result in &results {
            assert!(
                result.passed,
                "{} failed: max discrepancy {:.3e} ({})",
                result.name, result.max_discrepancy, result.detail
            );
        }
    }

    #[test]
    fn corrupted_gate_fails_only_calibration() {
        let mut cfg = CnotConfig::standard();
        cfg.beamsplitters[0].reflectivity = 0.25;
        let results = run_all(&cfg).unwrap();
        let calibration = results
            .iter()
            .find(|r| r.name == "cnot-calibration")
            .unwrap();
        assert!(!calibration.passed);
        for result in results.iter().filter(|r| r.name != "cnot-calibration") {
            assert!(result.passed, "{} unexpectedly failed", result.name);
        }
    }
}
