//! Closed-form detection probabilities, evaluated directly so the exact
//! simulations and the brute-force oracle can be cross-checked against them.

use crate::error::{Error, Result};
use crate::math::{binomial, factorial};

/// Below this distance from unit efficiency the closed form for the
/// single-click probability divides by ~0, so the binomial sum is used.
const CLOSED_FORM_EFFICIENCY_GUARD: f64 = 1e-9;

/// Probability that a cascade over `outputs` uniformly-fed detectors of
/// efficiency `eta_eff` reports exactly the incident photon number `photons`:
/// all photons must be detected and land on distinct outputs.
pub fn cascade_prob_correct(photons: u32, outputs: u32, eta_eff: f64) -> Result<f64> {
    if outputs == 0 {
        return Err(Error::InvalidParameter(
            "cascade needs at least one output".into(),
        ));
    }
    if !(0.0..=1.0).contains(&eta_eff) {
        return Err(Error::InvalidParameter(format!(
            "efficiency {eta_eff} outside [0, 1]"
        )));
    }
    if photons > outputs {
        return Err(Error::PhotonsExceedOutputs { photons, outputs });
    }
    // eta^n * N!/(N^n (N-n)!) as a running product of (N-i)/N factors, which
    // stays exact for huge N where the factorials would overflow.
    let n_f = f64::from(outputs);
    let mut prob = eta_eff.powi(photons as i32);
    for i in 0..photons {
        prob *= (n_f - f64::from(i)) / n_f;
    }
    Ok(prob)
}

/// Binomial-sum route for the probability that a single-stage chain detector
/// perceives exactly one photon from an `photons`-photon input: at least one
/// photon triggers the reflected-port detector and none is seen elsewhere.
pub fn chain_prob_m1_sum(photons: u32, eta_ref: f64, eta_eff: f64) -> f64 {
    let p_trig = eta_ref * eta_eff;
    let p_loss = 1.0 - eta_eff;
    let mut total = 0.0;
    for i in 1..=photons {
        total += binomial(photons, i) * p_trig.powi(i as i32) * p_loss.powi((photons - i) as i32);
    }
    total
}

/// Closed-form route for the same probability. Divides by `1 - eta_eff`, so
/// callers must keep the efficiency strictly below one.
pub fn chain_prob_m1_closed(photons: u32, eta_ref: f64, eta_eff: f64) -> f64 {
    if photons == 0 {
        return 0.0;
    }
    let p_loss = 1.0 - eta_eff;
    p_loss.powi(photons as i32) * ((1.0 + eta_eff * eta_ref / p_loss).powi(photons as i32) - 1.0)
}

/// Probability of perceiving one photon. Uses the closed form away from unit
/// efficiency and the binomial sum at the boundary where the closed form is
/// singular.
pub fn chain_prob_m1(photons: u32, eta_ref: f64, eta_eff: f64) -> f64 {
    if 1.0 - eta_eff < CLOSED_FORM_EFFICIENCY_GUARD {
        chain_prob_m1_sum(photons, eta_ref, eta_eff)
    } else {
        chain_prob_m1_closed(photons, eta_ref, eta_eff)
    }
}

/// Probability that a `k`-stage chain with uniform arrival probability
/// `eta_ref` perceives exactly `k` photons: every reflected-port detector
/// triggers at least once, the terminal port stays silent, and undetected
/// photons are lost to inefficiency. Multinomial sum over the detector
/// occupations.
pub fn chain_prob_mk(photons: u32, k: u32, eta_ref: f64, eta_eff: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "chain needs at least one stage".into(),
        ));
    }
    if f64::from(k) * eta_ref > 1.0 + 1e-12 {
        return Err(Error::InfeasibleUniformity {
            eta_first: eta_ref,
            stages: k,
        });
    }
    if photons < k {
        return Ok(0.0);
    }
    let p_trig = eta_ref * eta_eff;
    let p_loss = 1.0 - eta_eff;

    // Recursively choose n_i >= 1 for each detector, tracking the running
    // multinomial coefficient n!/(n_1!...n_i!) over assigned photons.
    fn recurse(
        remaining: u32,
        detectors_left: u32,
        coeff: f64,
        trig: u32,
        p_trig: f64,
        p_loss: f64,
    ) -> f64 {
        if detectors_left == 0 {
            let n_loss = remaining;
            return coeff / factorial(n_loss)
                * p_trig.powi(trig as i32)
                * p_loss.powi(n_loss as i32);
        }
        let mut total = 0.0;
        // Reserve at least one photon for every remaining detector.
        let max_here = remaining.saturating_sub(detectors_left - 1);
        for n_i in 1..=max_here {
            total += recurse(
                remaining - n_i,
                detectors_left - 1,
                coeff / factorial(n_i),
                trig + n_i,
                p_trig,
                p_loss,
            );
        }
        total
    }

    Ok(recurse(photons, k, factorial(photons), 0, p_trig, p_loss))
}
