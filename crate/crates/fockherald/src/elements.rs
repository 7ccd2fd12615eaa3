//! Linear-optical circuit elements and their exact Fock-basis action.
//!
//! The beamsplitter convention is the real orthogonal mode map
//! `a† → √η a† + √(1−η) b†`, `b† → √(1−η) a† − √η b†`, so a photon incident in
//! either mode stays in it (the reflected port) with probability η. The matrix
//! is an involution: applying the same element twice is the identity.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detection::DetectorSpec;
use crate::error::{Error, Result};
use crate::fock::{Ensemble, SparseState};
use crate::math::{binomial, factorial};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitter {
    pub mode_a: usize,
    pub mode_b: usize,
    pub reflectivity: f64,
}

impl BeamSplitter {
    pub fn new(mode_a: usize, mode_b: usize, reflectivity: f64) -> Self {
        Self {
            mode_a,
            mode_b,
            reflectivity,
        }
    }

    fn validate(&self, mode_count: usize) -> Result<()> {
        for index in [self.mode_a, self.mode_b] {
            if index >= mode_count {
                return Err(Error::ModeOutOfRange { index, mode_count });
            }
        }
        if self.mode_a == self.mode_b {
            return Err(Error::InvalidParameter(format!(
                "beamsplitter acts twice on mode {}",
                self.mode_a
            )));
        }
        if !(0.0..=1.0).contains(&self.reflectivity) {
            return Err(Error::InvalidParameter(format!(
                "reflectivity {} outside [0, 1]",
                self.reflectivity
            )));
        }
        Ok(())
    }
}

/// A photon in `mode` survives with probability `transmission`; lost photons
/// enter an unobserved environment that is traced out.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossChannel {
    pub mode: usize,
    pub transmission: f64,
}

impl LossChannel {
    pub fn new(mode: usize, transmission: f64) -> Self {
        Self { mode, transmission }
    }

    fn validate(&self, mode_count: usize) -> Result<()> {
        if self.mode >= mode_count {
            return Err(Error::ModeOutOfRange {
                index: self.mode,
                mode_count,
            });
        }
        if !(0.0..=1.0).contains(&self.transmission) {
            return Err(Error::InvalidParameter(format!(
                "transmission {} outside [0, 1]",
                self.transmission
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Element {
    BeamSplitter(BeamSplitter),
    Loss(LossChannel),
}

/// An ordered list of elements followed by terminal detectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Circuit {
    pub mode_count: usize,
    pub elements: Vec<Element>,
    pub detectors: Vec<DetectorSpec>,
}

impl Circuit {
    pub fn new(mode_count: usize) -> Self {
        Self {
            mode_count,
            elements: Vec::new(),
            detectors: Vec::new(),
        }
    }

    pub fn push_beamsplitter(&mut self, mode_a: usize, mode_b: usize, reflectivity: f64) {
        self.elements.push(Element::BeamSplitter(BeamSplitter::new(
            mode_a,
            mode_b,
            reflectivity,
        )));
    }

    pub fn push_loss(&mut self, mode: usize, transmission: f64) {
        self.elements
            .push(Element::Loss(LossChannel::new(mode, transmission)));
    }

    pub fn add_detector(&mut self, spec: DetectorSpec) {
        self.detectors.push(spec);
    }

    pub fn validate(&self) -> Result<()> {
        for element in &self.elements {
            match element {
                Element::BeamSplitter(bs) => bs.validate(self.mode_count)?,
                Element::Loss(ch) => ch.validate(self.mode_count)?,
            }
        }
        let mut seen = vec![false; self.mode_count];
        for det in &self.detectors {
            det.validate(self.mode_count)?;
            if seen[det.mode] {
                return Err(Error::InvalidParameter(format!(
                    "two detectors share mode {}",
                    det.mode
                )));
            }
            seen[det.mode] = true;
        }
        Ok(())
    }

    /// Runs the element list only; detectors are left unapplied.
    pub fn run_elements(&self, input: &SparseState) -> Result<Ensemble> {
        if input.mode_count() != self.mode_count {
            return Err(Error::ModeCountMismatch {
                left: input.mode_count(),
                right: self.mode_count,
            });
        }
        self.validate()?;
        let mut ensemble = Ensemble::pure(input.normalized()?);
        for element in &self.elements {
            ensemble = match element {
                Element::BeamSplitter(bs) => {
                    ensemble.map_pure(|state| apply_beamsplitter(state, bs))?
                }
                Element::Loss(ch) => apply_loss(&ensemble, ch)?,
            };
        }
        Ok(ensemble)
    }

    /// Runs the elements, then conditions on every declared detector. The
    /// result lives on the unmeasured modes and carries the heralding weight.
    pub fn run(&self, input: &SparseState) -> Result<Ensemble> {
        let ensemble = self.run_elements(input)?;
        crate::detection::apply_detectors(&ensemble, &self.detectors)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let circuit: Circuit = serde_json::from_str(text)?;
        circuit.validate()?;
        Ok(circuit)
    }
}

/// Applies the beamsplitter mode map exactly on the Fock basis.
pub fn apply_beamsplitter(state: &SparseState, bs: &BeamSplitter) -> Result<SparseState> {
    bs.validate(state.mode_count())?;
    let r = bs.reflectivity.sqrt();
    let t = (1.0 - bs.reflectivity).sqrt();
    let mut acc: BTreeMap<crate::fock::OccupationVector, Complex64> = BTreeMap::new();
    for (occ, &amp) in state.amplitudes() {
        let n = occ.count(bs.mode_a);
        let m = occ.count(bs.mode_b);
        if n + m == 0 {
            *acc.entry(occ.clone()).or_insert(Complex64::new(0.0, 0.0)) += amp;
            continue;
        }
        let input_norm = (factorial(n) * factorial(m)).sqrt();
        for j in 0..=n {
            for l in 0..=m {
                let p = j + l;
                let q = n + m - p;
                let sign = if (m - l) % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = binomial(n, j)
                    * binomial(m, l)
                    * r.powi(j as i32)
                    * t.powi((n - j) as i32)
                    * t.powi(l as i32)
                    * r.powi((m - l) as i32)
                    * sign;
                if coeff == 0.0 {
                    continue;
                }
                let weight = coeff * (factorial(p) * factorial(q)).sqrt() / input_norm;
                let key = occ.with_count(bs.mode_a, p).with_count(bs.mode_b, q);
                *acc.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp * weight;
            }
        }
    }
    Ok(SparseState::from_map_pruned(state.mode_count(), acc))
}

/// Applies a loss channel to every branch. Each branch splits by the number of
/// photons lost; total weight is preserved. Components that lose the same
/// number of photons stay coherent, because the environment cannot tell them
/// apart.
pub fn apply_loss(ensemble: &Ensemble, channel: &LossChannel) -> Result<Ensemble> {
    let t = channel.transmission;
    let mut branches = Vec::new();
    for (weight, state) in ensemble.branches() {
        channel.validate(state.mode_count())?;
        let max_photons = state
            .amplitudes()
            .map(|(occ, _)| occ.count(channel.mode))
            .max()
            .unwrap_or(0);
        for lost in 0..=max_photons {
            let mut acc: BTreeMap<crate::fock::OccupationVector, Complex64> = BTreeMap::new();
            for (occ, &amp) in state.amplitudes() {
                let k = occ.count(channel.mode);
                if k < lost {
                    continue;
                }
                let factor =
                    (binomial(k, lost) * (1.0 - t).powi(lost as i32) * t.powi((k - lost) as i32))
                        .sqrt();
                if factor == 0.0 {
                    continue;
                }
                *acc.entry(occ.with_count(channel.mode, k - lost))
                    .or_insert(Complex64::new(0.0, 0.0)) += amp * factor;
            }
            let sub = SparseState::from_map_pruned(state.mode_count(), acc);
            let nsq = sub.norm_sqr();
            if nsq <= 1e-300 {
                continue;
            }
            branches.push((
                weight * nsq,
                sub.scaled(Complex64::new(1.0 / nsq.sqrt(), 0.0)),
            ));
        }
    }
    Ok(Ensemble::from_branches_unchecked(branches))
}

/// Reflectivities for a beamsplitter chain with uniform single-photon arrival
/// probability `eta_first` at every reflected output: each stage compensates
/// for the amplitude already peeled off by its predecessors.
pub fn chain_reflectivities(eta_first: f64, stages: u32) -> Result<Vec<f64>> {
    if stages == 0 {
        return Err(Error::InvalidParameter(
            "chain needs at least one stage".into(),
        ));
    }
    if !(eta_first > 0.0 && eta_first <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "first reflectivity {eta_first} outside (0, 1]"
        )));
    }
    if eta_first * f64::from(stages) > 1.0 + 1e-12 {
        return Err(Error::InfeasibleUniformity { eta_first, stages });
    }
    let mut out = Vec::with_capacity(stages as usize);
    let mut current = eta_first;
    out.push(current);
    for _ in 1..stages {
        current = (current / (1.0 - current)).min(1.0);
        out.push(current);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    /// Independent oracle: expand the transformed creation-operator polynomial
    /// one factor at a time. Coefficients are exponent maps (j, l) ↦ c for
    /// (a†)^j (b†)^l; multiplying in a linear factor is a convolution.
    fn polynomial_oracle(n: u32, m: u32, eta: f64) -> BTreeMap<(u32, u32), f64> {
        let r = eta.sqrt();
        let t = (1.0 - eta).sqrt();
        let mut poly: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        poly.insert((0, 0), 1.0);
        let multiply = |poly: &BTreeMap<(u32, u32), f64>, ca: f64, cb: f64| {
            let mut next: BTreeMap<(u32, u32), f64> = BTreeMap::new();
            for (&(j, l), &coeff) in poly {
                *next.entry((j + 1, l)).or_insert(0.0) += coeff * ca;
                *next.entry((j, l + 1)).or_insert(0.0) += coeff * cb;
            }
            next
        };
        for _ in 0..n {
            poly = multiply(&poly, r, t);
        }
        for _ in 0..m {
            poly = multiply(&poly, t, -r);
        }
        // amplitude of |p,q⟩ = coeff(p,q) · √(p! q!) / √(n! m!)
        let norm = (factorial(n) * factorial(m)).sqrt();
        poly.into_iter()
            .map(|((p, q), coeff)| ((p, q), coeff * (factorial(p) * factorial(q)).sqrt() / norm))
            .collect()
    }

    #[test]
    fn single_photon_splits_by_reflectivity() {
        for eta in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let state = SparseState::basis(OccupationVector::new(vec![1, 0]));
            let out = apply_beamsplitter(&state, &BeamSplitter::new(0, 1, eta)).unwrap();
            assert!(close(
                out.amplitude(&OccupationVector::new(vec![1, 0])),
                c(eta.sqrt())
            ));
            assert!(close(
                out.amplitude(&OccupationVector::new(vec![0, 1])),
                c((1.0 - eta).sqrt())
            ));
        }
    }

    #[test]
    fn two_photons_interfere_on_balanced_splitter() {
        let state = SparseState::basis(OccupationVector::new(vec![1, 1]));
        let out = apply_beamsplitter(&state, &BeamSplitter::new(0, 1, 0.5)).unwrap();
        let inv = 1.0 / 2.0f64.sqrt();
        assert!(close(
            out.amplitude(&OccupationVector::new(vec![2, 0])),
            c(inv)
        ));
        assert!(close(
            out.amplitude(&OccupationVector::new(vec![0, 2])),
            c(-inv)
        ));
        assert!(close(
            out.amplitude(&OccupationVector::new(vec![1, 1])),
            c(0.0)
        ));
    }

    #[test]
    fn matches_polynomial_oracle_on_small_inputs() {
        for eta in [0.1, 0.3, 0.5, 0.75, 1.0] {
            for n in 0..=3u32 {
                for m in 0..=3u32 {
                    let state = SparseState::basis(OccupationVector::new(vec![n, m]));
                    let out = apply_beamsplitter(&state, &BeamSplitter::new(0, 1, eta)).unwrap();
                    let oracle = polynomial_oracle(n, m, eta);
                    for ((p, q), expected) in oracle {
                        let got = out.amplitude(&OccupationVector::new(vec![p, q]));
                        assert!(
                            (got - c(expected)).norm() < 1e-12,
                            "n={n} m={m} eta={eta} p={p} q={q}: {got} vs {expected}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn full_reflectivity_flips_second_mode_phase() {
        for (n, m) in [(0u32, 1u32), (2, 1), (1, 2), (3, 3)] {
            let state = SparseState::basis(OccupationVector::new(vec![n, m]));
            let out = apply_beamsplitter(&state, &BeamSplitter::new(0, 1, 1.0)).unwrap();
            let expected = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(
                out.amplitude(&OccupationVector::new(vec![n, m])),
                c(expected)
            ));
            assert_eq!(out.term_count(), 1);
        }
    }

    #[test]
    fn beamsplitter_is_involutory() {
        let bs = BeamSplitter::new(0, 1, 0.3);
        let inv = 1.0 / 3.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![2, 0]), c(inv)),
                (OccupationVector::new(vec![1, 1]), c(inv)),
                (OccupationVector::new(vec![0, 1]), c(inv)),
            ],
        )
        .unwrap();
        let twice = apply_beamsplitter(&apply_beamsplitter(&state, &bs).unwrap(), &bs).unwrap();
        for (occ, amp) in state.amplitudes() {
            assert!((twice.amplitude(occ) - amp).norm() < 1e-12);
        }
        assert!(twice.is_normalized(1e-12));
    }

    #[test]
    fn beamsplitter_rejects_bad_modes() {
        let state = SparseState::vacuum(2);
        assert!(matches!(
            apply_beamsplitter(&state, &BeamSplitter::new(0, 2, 0.5)),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(apply_beamsplitter(&state, &BeamSplitter::new(1, 1, 0.5)).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn composition_matches_mode_matrix_product() {
        // On a single photon the Fock action is the 2x2 mode map itself.
        let b = |eta: f64| {
            let r = eta.sqrt();
            let t = (1.0 - eta).sqrt();
            [[r, t], [t, -r]]
        };
        let matmul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
            let mut out = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            out
        };
        for (eta1, eta2) in [(0.2, 0.7), (0.5, 0.5), (0.9, 0.1)] {
            let product = matmul(b(eta2), b(eta1));
            for input in 0..2usize {
                let occ = if input == 0 { vec![1, 0] } else { vec![0, 1] };
                let state = SparseState::basis(OccupationVector::new(occ));
                let out = apply_beamsplitter(
                    &apply_beamsplitter(&state, &BeamSplitter::new(0, 1, eta1)).unwrap(),
                    &BeamSplitter::new(0, 1, eta2),
                )
                .unwrap();
                let got_a = out.amplitude(&OccupationVector::new(vec![1, 0])).re;
                let got_b = out.amplitude(&OccupationVector::new(vec![0, 1])).re;
                assert!((got_a - product[0][input]).abs() < 1e-12);
                assert!((got_b - product[1][input]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn loss_splits_two_photons_binomially() {
        let e = Ensemble::pure(SparseState::basis(OccupationVector::new(vec![2])));
        let out = apply_loss(&e, &LossChannel::new(0, 0.8)).unwrap();
        let mut weights: BTreeMap<u32, f64> = BTreeMap::new();
        for (w, state) in out.branches() {
            let (occ, _) = state.amplitudes().next().unwrap();
            *weights.entry(occ.count(0)).or_insert(0.0) += w;
        }
        assert!((weights[&2] - 0.64).abs() < 1e-12);
        assert!((weights[&1] - 0.32).abs() < 1e-12);
        assert!((weights[&0] - 0.04).abs() < 1e-12);
        assert!((out.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossless_channel_is_identity() {
        let inv = 1.0 / 2.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            1,
            vec![
                (OccupationVector::new(vec![0]), c(inv)),
                (OccupationVector::new(vec![2]), c(inv)),
            ],
        )
        .unwrap();
        let out = apply_loss(&Ensemble::pure(state.clone()), &LossChannel::new(0, 1.0)).unwrap();
        assert_eq!(out.branches().len(), 1);
        let (w, s) = &out.branches()[0];
        assert!((w - 1.0).abs() < 1e-12);
        for (occ, amp) in state.amplitudes() {
            assert!((s.amplitude(occ) - amp).norm() < 1e-12);
        }
    }

    #[test]
    fn total_loss_empties_the_mode() {
        let e = Ensemble::pure(SparseState::basis(OccupationVector::new(vec![1])));
        let out = apply_loss(&e, &LossChannel::new(0, 0.0)).unwrap();
        assert_eq!(out.branches().len(), 1);
        let (w, s) = &out.branches()[0];
        assert!((w - 1.0).abs() < 1e-12);
        assert!(close(s.amplitude(&OccupationVector::new(vec![0])), c(1.0)));
    }

    #[test]
    fn loss_preserves_total_weight_on_superpositions() {
        let inv = 1.0 / 3.0f64.sqrt();
        let state = SparseState::from_amplitudes(
            2,
            vec![
                (OccupationVector::new(vec![0, 1]), c(inv)),
                (OccupationVector::new(vec![2, 0]), c(inv)),
                (OccupationVector::new(vec![3, 1]), c(inv)),
            ],
        )
        .unwrap();
        for t in [0.0, 0.35, 0.8, 1.0] {
            let out = apply_loss(&Ensemble::pure(state.clone()), &LossChannel::new(0, t)).unwrap();
            assert!((out.total_weight() - 1.0).abs() < 1e-12, "t={t}");
            for (_, s) in out.branches() {
                assert!(s.is_normalized(1e-12));
            }
        }
    }

    #[test]
    fn chain_reflectivities_examples() {
        let third = chain_reflectivities(1.0 / 3.0, 3).unwrap();
        assert!((third[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((third[1] - 0.5).abs() < 1e-15);
        assert!((third[2] - 1.0).abs() < 1e-15);

        let tenth = chain_reflectivities(0.1, 3).unwrap();
        assert!((tenth[0] - 0.1).abs() < 1e-15);
        assert!((tenth[1] - 1.0 / 9.0).abs() < 1e-12);
        assert!((tenth[2] - 0.125).abs() < 1e-12);

        assert_eq!(chain_reflectivities(0.42, 1).unwrap(), vec![0.42]);
    }

    #[test]
    fn chain_reflectivities_infeasible() {
        assert!(matches!(
            chain_reflectivities(0.4, 3),
            Err(Error::InfeasibleUniformity { .. })
        ));
        assert!(chain_reflectivities(0.0, 2).is_err());
        assert!(chain_reflectivities(0.5, 0).is_err());
    }

    #[test]
    fn circuit_json_round_trip() {
        let mut circuit = Circuit::new(3);
        circuit.push_beamsplitter(0, 1, 0.5);
        circuit.push_loss(1, 0.9);
        circuit.add_detector(DetectorSpec::click(1, 0.8));
        circuit.add_detector(DetectorSpec::no_click(2, 0.8));
        let json = circuit.to_json().unwrap();
        let back = Circuit::from_json(&json).unwrap();
        assert_eq!(back.mode_count, 3);
        assert_eq!(back.elements, circuit.elements);
        assert_eq!(back.detectors, circuit.detectors);
    }
}
