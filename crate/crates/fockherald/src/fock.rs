//! Sparse multimode Fock states and weighted pure-state ensembles.
//!
//! States are exact up to floating point: amplitudes live in a map keyed by
//! occupation vectors, ordered lexicographically so that iteration (and
//! therefore every accumulation in the crate) is deterministic. All values are
//! immutable after construction; operations return new values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes with magnitude at or below this threshold are dropped when a
/// state is assembled. Small enough not to disturb 1e-12 tolerances anywhere.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Photon counts per optical mode; the Fock basis label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector {
    counts: Vec<u32>,
}

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    /// All modes empty.
    pub fn vacuum(mode_count: usize) -> Self {
        Self {
            counts: vec![0; mode_count],
        }
    }

    /// `photons` photons in `mode`, vacuum elsewhere.
    pub fn fock(mode_count: usize, mode: usize, photons: u32) -> Self {
        assert!(mode < mode_count, "mode index out of range");
        let mut counts = vec![0; mode_count];
        counts[mode] = photons;
        Self { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn mode_count(&self) -> usize {
        self.counts.len()
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn count(&self, mode: usize) -> u32 {
        self.counts[mode]
    }

    pub(crate) fn with_count(&self, mode: usize, photons: u32) -> Self {
        let mut counts = self.counts.clone();
        counts[mode] = photons;
        Self { counts }
    }

    pub(crate) fn without_mode(&self, mode: usize) -> Self {
        let mut counts = self.counts.clone();
        counts.remove(mode);
        Self { counts }
    }

    pub(crate) fn concat(&self, other: &Self) -> Self {
        let mut counts = self.counts.clone();
        counts.extend_from_slice(&other.counts);
        Self { counts }
    }
}

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "⟩")
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A pure state as a sparse map from occupation vectors to complex amplitudes.
#[derive(Clone)]
pub struct SparseState {
    mode_count: usize,
    amplitudes: BTreeMap<OccupationVector, Complex64>,
}

impl SparseState {
    /// The vacuum state on `mode_count` modes.
    pub fn vacuum(mode_count: usize) -> Self {
        Self::basis(OccupationVector::vacuum(mode_count))
    }

    /// A single basis state with unit amplitude.
    pub fn basis(occ: OccupationVector) -> Self {
        let mode_count = occ.mode_count();
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(occ, Complex64::new(1.0, 0.0));
        Self {
            mode_count,
            amplitudes,
        }
    }

    /// Builds a state from explicit amplitudes, pruning entries at or below
    /// [`PRUNE_THRESHOLD`]. Keys must all have `mode_count` modes.
    pub fn from_amplitudes<I>(mode_count: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut amplitudes: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
        for (occ, amp) in entries {
            if occ.mode_count() != mode_count {
                return Err(Error::ModeCountMismatch {
                    left: mode_count,
                    right: occ.mode_count(),
                });
            }
            *amplitudes.entry(occ).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        amplitudes.retain(|_, a| a.norm() > PRUNE_THRESHOLD);
        Ok(Self {
            mode_count,
            amplitudes,
        })
    }

    pub(crate) fn from_map_pruned(
        mode_count: usize,
        mut amplitudes: BTreeMap<OccupationVector, Complex64>,
    ) -> Self {
        amplitudes.retain(|_, a| a.norm() > PRUNE_THRESHOLD);
        Self {
            mode_count,
            amplitudes,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Number of stored basis components.
    pub fn term_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Iterates components in lexicographic basis order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Amplitude of a basis state, zero when absent.
    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.amplitudes
            .get(occ)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    /// Returns the state scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < 1e-150 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(occ, amp)| (occ.clone(), amp * factor))
            .collect();
        Self::from_map_pruned(self.mode_count, amplitudes)
    }

    /// Tensor product. Mode count is the sum of the operands'; amplitudes are
    /// products. Normalized operands give a normalized result.
    pub fn tensor(&self, other: &Self) -> Self {
        let mode_count = self.mode_count + other.mode_count;
        let mut amplitudes = BTreeMap::new();
        for (occ_a, amp_a) in &self.amplitudes {
            for (occ_b, amp_b) in &other.amplitudes {
                amplitudes.insert(occ_a.concat(occ_b), amp_a * amp_b);
            }
        }
        Self::from_map_pruned(mode_count, amplitudes)
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeCountMismatch {
                left: self.mode_count,
                right: other.mode_count,
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (occ, amp) in &self.amplitudes {
            if let Some(other_amp) = other.amplitudes.get(occ) {
                acc += amp.conj() * other_amp;
            }
        }
        Ok(acc)
    }

    /// The set of total photon numbers present with nonzero amplitude.
    pub fn total_photon_numbers(&self) -> BTreeSet<u32> {
        self.amplitudes
            .keys()
            .map(OccupationVector::total)
            .collect()
    }
}

impl fmt::Debug for SparseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (occ, amp) in &self.amplitudes {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", amp.re, amp.im, occ)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A weighted list of normalized pure states: the (possibly sub-normalized)
/// mixed state left behind by lossy, conditioned measurements. The total
/// weight is the joint probability of every condition applied so far.
#[derive(Clone, Debug)]
pub struct Ensemble {
    branches: Vec<(f64, SparseState)>,
}

impl Ensemble {
    /// A single branch of weight one. The state must be normalized.
    pub fn pure(state: SparseState) -> Self {
        debug_assert!(state.is_normalized(1e-9), "ensemble branch not normalized");
        Self {
            branches: vec![(1.0, state)],
        }
    }

    pub fn empty() -> Self {
        Self {
            branches: Vec::new(),
        }
    }

    /// Builds an ensemble from explicit branches, checking the weight and
    /// normalization invariants.
    pub fn from_branches(branches: Vec<(f64, SparseState)>) -> Result<Self> {
        let mut total = 0.0;
        for (w, state) in &branches {
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative branch weight {w}"
                )));
            }
            if !state.is_normalized(1e-9) {
                return Err(Error::InvalidParameter(
                    "ensemble branch state is not normalized".into(),
                ));
            }
            total += w;
        }
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "ensemble weights sum to {total} > 1"
            )));
        }
        Ok(Self { branches })
    }

    pub(crate) fn from_branches_unchecked(branches: Vec<(f64, SparseState)>) -> Self {
        Self { branches }
    }

    pub fn branches(&self) -> &[(f64, SparseState)] {
        &self.branches
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Sum of branch weights; the joint probability of all conditions applied.
    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|(w, _)| w).sum()
    }

    /// Applies a norm-preserving pure-state map to every branch.
    pub fn map_pure<F>(&self, f: F) -> Result<Ensemble>
    where
        F: Fn(&SparseState) -> Result<SparseState>,
    {
        let branches = self
            .branches
            .iter()
            .map(|(w, state)| Ok((*w, f(state)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { branches })
    }
}
