//! Occupation-number bases and state vectors for a handful of boson or
//! fermion modes.
//!
//! Basis indices are mixed-radix encodings of the per-mode occupations with
//! mode 0 as the least significant digit. For fermions the radix is 2, so the
//! index is the occupation bitmask. A fermion basis ket is
//! `c†_0^{n_0} c†_1^{n_1} ... |0⟩` with the lowest mode leftmost, which makes
//! the sign of `c_k` the parity of the occupied modes below `k`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_DIMENSION_CEILING: usize = 1 << 24;
pub const MAX_FERMION_MODES: usize = 24;
/// States with at most this many basis entries are stored densely.
pub const DENSE_DIMENSION_LIMIT: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Boson => write!(f, "boson"),
            Statistics::Fermion => write!(f, "fermion"),
        }
    }
}

/// A finite set of occupation-number states over `num_modes` modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSet {
    num_modes: usize,
    statistics: Statistics,
    radix: usize,
    dim: usize,
}

/// Occupations of every mode, in mode-index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisState {
    pub occupations: Vec<u32>,
}

impl BasisState {
    pub fn new(occupations: Vec<u32>) -> Self {
        BasisState { occupations }
    }

    pub fn vacuum(num_modes: usize) -> Self {
        BasisState { occupations: vec![0; num_modes] }
    }

    pub fn total(&self) -> u32 {
        self.occupations.iter().sum()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for n in &self.occupations {
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

pub fn enumerate_basis(
    num_modes: usize,
    statistics: Statistics,
    boson_cutoff: usize,
) -> Result<BasisSet> {
    BasisSet::with_ceiling(num_modes, statistics, boson_cutoff, DEFAULT_DIMENSION_CEILING)
}

impl BasisSet {
    pub fn fermion(num_modes: usize) -> Result<Self> {
        enumerate_basis(num_modes, Statistics::Fermion, 2)
    }

    pub fn boson(num_modes: usize, cutoff: usize) -> Result<Self> {
        enumerate_basis(num_modes, Statistics::Boson, cutoff)
    }

    /// `boson_cutoff` is ignored for fermions.
    pub fn with_ceiling(
        num_modes: usize,
        statistics: Statistics,
        boson_cutoff: usize,
        ceiling: usize,
    ) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::NoModes);
        }
        let radix = match statistics {
            Statistics::Fermion => {
                if num_modes > MAX_FERMION_MODES {
                    return Err(Error::TooManyFermionModes {
                        requested: num_modes,
                        max: MAX_FERMION_MODES,
                    });
                }
                2
            }
            Statistics::Boson => {
                if boson_cutoff < 2 {
                    return Err(Error::InvalidCutoff(boson_cutoff));
                }
                boson_cutoff
            }
        };
        let mut dimension: u128 = 1;
        for _ in 0..num_modes {
            dimension *= radix as u128;
            if dimension > ceiling as u128 {
                return Err(Error::DimensionOverflow { dimension, ceiling });
            }
        }
        Ok(BasisSet { num_modes, statistics, radix, dim: dimension as usize })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Per-mode occupation bound (exclusive); 2 for fermions.
    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn boson_cutoff(&self) -> Option<usize> {
        match self.statistics {
            Statistics::Boson => Some(self.radix),
            Statistics::Fermion => None,
        }
    }

    pub fn is_fermion(&self) -> bool {
        self.statistics == Statistics::Fermion
    }

    #[inline]
    pub fn stride(&self, mode: usize) -> usize {
        self.radix.pow(mode as u32)
    }

    #[inline]
    pub fn occupation(&self, index: usize, mode: usize) -> u32 {
        match self.statistics {
            Statistics::Fermion => ((index >> mode) & 1) as u32,
            Statistics::Boson => ((index / self.stride(mode)) % self.radix) as u32,
        }
    }

    pub fn particle_number(&self, index: usize) -> usize {
        match self.statistics {
            Statistics::Fermion => index.count_ones() as usize,
            Statistics::Boson => {
                let mut rest = index;
                let mut total = 0;
                while rest > 0 {
                    total += rest % self.radix;
                    rest /= self.radix;
                }
                total
            }
        }
    }

    pub fn encode(&self, state: &BasisState) -> Result<usize> {
        if state.occupations.len() != self.num_modes {
            return Err(Error::LengthMismatch {
                expected: self.num_modes,
                got: state.occupations.len(),
            });
        }
        let mut index = 0;
        for (mode, &n) in state.occupations.iter().enumerate() {
            if n as usize >= self.radix {
                return Err(Error::InvalidOccupation { mode, occupation: n });
            }
            index += n as usize * self.stride(mode);
        }
        Ok(index)
    }

    pub fn decode(&self, index: usize) -> BasisState {
        debug_assert!(index < self.dim);
        BasisState {
            occupations: (0..self.num_modes).map(|m| self.occupation(index, m)).collect(),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.dim).map(move |i| self.decode(i))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.num_modes {
            Err(Error::ModeOutOfRange { mode, num_modes: self.num_modes })
        } else {
            Ok(())
        }
    }

    /// Where a single ladder operator sends basis index `index`.
    #[inline]
    pub(crate) fn ladder_image(&self, index: usize, op: Ladder) -> Image {
        match (self.statistics, op) {
            (Statistics::Fermion, Ladder::Annihilate(k)) => {
                let bit = 1usize << k;
                if index & bit == 0 {
                    Image::Zero
                } else {
                    Image::Mapped(index ^ bit, jordan_wigner_sign(index, k))
                }
            }
            (Statistics::Fermion, Ladder::Create(k)) => {
                let bit = 1usize << k;
                if index & bit != 0 {
                    Image::Zero
                } else {
                    Image::Mapped(index | bit, jordan_wigner_sign(index, k))
                }
            }
            (Statistics::Boson, Ladder::Annihilate(k)) => {
                let n = self.occupation(index, k);
                if n == 0 {
                    Image::Zero
                } else {
                    Image::Mapped(index - self.stride(k), (n as f64).sqrt())
                }
            }
            (Statistics::Boson, Ladder::Create(k)) => {
                let n = self.occupation(index, k) as usize;
                let factor = ((n + 1) as f64).sqrt();
                if n + 1 >= self.radix {
                    Image::Clipped(factor)
                } else {
                    Image::Mapped(index + self.stride(k), factor)
                }
            }
        }
    }
}

#[inline]
fn jordan_wigner_sign(index: usize, mode: usize) -> f64 {
    let below = index & ((1usize << mode) - 1);
    if below.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// A single creation or annihilation operator on one mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    pub fn mode(&self) -> usize {
        match *self {
            Ladder::Create(k) | Ladder::Annihilate(k) => k,
        }
    }

    pub fn adjoint(&self) -> Ladder {
        match *self {
            Ladder::Create(k) => Ladder::Annihilate(k),
            Ladder::Annihilate(k) => Ladder::Create(k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Image {
    Mapped(usize, f64),
    Zero,
    /// Boson creation past the cutoff; the factor is the amplitude that was lost.
    Clipped(f64),
}

#[derive(Clone, Debug, PartialEq)]
enum Amplitudes {
    Dense(Vec<C64>),
    Sparse(BTreeMap<usize, C64>),
}

/// Complex amplitudes over a [`BasisSet`].
///
/// `truncation` accumulates the norm of every amplitude that a boson creation
/// operator pushed past the cutoff while producing this vector. It stays at
/// zero for fermions.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: BasisSet,
    amps: Amplitudes,
    truncation: f64,
}

struct Accumulator {
    amps: Amplitudes,
    clipped_sqr: f64,
}

impl Accumulator {
    fn like(basis: &BasisSet, dense: bool) -> Self {
        let amps = if dense {
            Amplitudes::Dense(vec![C64::new(0.0, 0.0); basis.dim()])
        } else {
            Amplitudes::Sparse(BTreeMap::new())
        };
        Accumulator { amps, clipped_sqr: 0.0 }
    }

    #[inline]
    fn add(&mut self, index: usize, value: C64) {
        match &mut self.amps {
            Amplitudes::Dense(v) => v[index] += value,
            Amplitudes::Sparse(m) => *m.entry(index).or_insert(C64::new(0.0, 0.0)) += value,
        }
    }
}

impl StateVector {
    fn prefers_dense(basis: &BasisSet) -> bool {
        basis.dim() <= DENSE_DIMENSION_LIMIT
    }

    pub fn zero(basis: BasisSet) -> Self {
        let amps = if Self::prefers_dense(&basis) {
            Amplitudes::Dense(vec![C64::new(0.0, 0.0); basis.dim()])
        } else {
            Amplitudes::Sparse(BTreeMap::new())
        };
        StateVector { basis, amps, truncation: 0.0 }
    }

    pub fn vacuum(basis: BasisSet) -> Self {
        let mut v = Self::zero(basis);
        v.set(0, C64::new(1.0, 0.0));
        v
    }

    pub fn number_state(basis: BasisSet, state: &BasisState) -> Result<Self> {
        let index = basis.encode(state)?;
        let mut v = Self::zero(basis);
        v.set(index, C64::new(1.0, 0.0));
        Ok(v)
    }

    /// Single basis vector in sparse storage, whatever the dimension.
    pub fn sparse_number_state(basis: BasisSet, state: &BasisState) -> Result<Self> {
        let index = basis.encode(state)?;
        let mut map = BTreeMap::new();
        map.insert(index, C64::new(1.0, 0.0));
        Ok(StateVector { basis, amps: Amplitudes::Sparse(map), truncation: 0.0 })
    }

    pub fn from_dense(basis: BasisSet, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::LengthMismatch { expected: basis.dim(), got: amplitudes.len() });
        }
        Ok(StateVector { basis, amps: Amplitudes::Dense(amplitudes), truncation: 0.0 })
    }

    pub fn from_entries<I>(basis: BasisSet, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisState, C64)>,
    {
        let mut v = Self::zero(basis);
        for (state, amp) in entries {
            let index = basis.encode(&state)?;
            let current = v.amplitude(index);
            v.set(index, current + amp);
        }
        Ok(v)
    }

    fn set(&mut self, index: usize, value: C64) {
        match &mut self.amps {
            Amplitudes::Dense(v) => v[index] = value,
            Amplitudes::Sparse(m) => {
                m.insert(index, value);
            }
        }
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn statistics(&self) -> Statistics {
        self.basis.statistics()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.amps, Amplitudes::Dense(_))
    }

    /// Accumulated norm of amplitude lost to the boson cutoff.
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn is_truncated(&self, tol: f64) -> bool {
        self.truncation > tol
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        match &self.amps {
            Amplitudes::Dense(v) => v[index],
            Amplitudes::Sparse(m) => m.get(&index).copied().unwrap_or_default(),
        }
    }

    pub fn amplitude_of(&self, state: &BasisState) -> Result<C64> {
        Ok(self.amplitude(self.basis.encode(state)?))
    }

    /// Nonzero entries in ascending basis-index order.
    pub fn entries(&self) -> Box<dyn Iterator<Item = (usize, C64)> + '_> {
        let zero = C64::new(0.0, 0.0);
        match &self.amps {
            Amplitudes::Dense(v) => {
                Box::new(v.iter().copied().enumerate().filter(move |&(_, a)| a != zero))
            }
            Amplitudes::Sparse(m) => {
                Box::new(m.iter().map(|(&i, &a)| (i, a)).filter(move |&(_, a)| a != zero))
            }
        }
    }

    pub fn to_dense(&self) -> Vec<C64> {
        match &self.amps {
            Amplitudes::Dense(v) => v.clone(),
            Amplitudes::Sparse(m) => {
                let mut v = vec![C64::new(0.0, 0.0); self.basis.dim()];
                for (&i, &a) in m {
                    v[i] = a;
                }
                v
            }
        }
    }

    pub fn into_sparse(self) -> Self {
        let amps = match self.amps {
            Amplitudes::Sparse(m) => Amplitudes::Sparse(m),
            Amplitudes::Dense(v) => Amplitudes::Sparse(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, a)| *a != C64::new(0.0, 0.0))
                    .collect(),
            ),
        };
        StateVector { amps, ..self }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the zero vector unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(C64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let amps = match &self.amps {
            Amplitudes::Dense(v) => Amplitudes::Dense(v.iter().map(|a| a * factor).collect()),
            Amplitudes::Sparse(m) => {
                Amplitudes::Sparse(m.iter().map(|(&i, &a)| (i, a * factor)).collect())
            }
        };
        StateVector { basis: self.basis, amps, truncation: self.truncation * factor.norm() }
    }

    /// `self += coef * other`.
    pub fn add_scaled(&mut self, coef: C64, other: &StateVector) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        if let (Amplitudes::Dense(a), Amplitudes::Dense(b)) = (&mut self.amps, &other.amps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += coef * y;
            }
        } else {
            if !self.is_dense() && other.is_dense() && Self::prefers_dense(&self.basis) {
                self.amps = Amplitudes::Dense(self.to_dense());
            }
            let updates: Vec<(usize, C64)> = other.entries().collect();
            for (i, b) in updates {
                let current = self.amplitude(i);
                self.set(i, current + coef * b);
            }
        }
        self.truncation += coef.norm() * other.truncation;
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        inner_product(self, other)
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        let mut d = self.clone();
        d.add_scaled(C64::new(-1.0, 0.0), other)?;
        Ok(d.norm())
    }

    fn map_indices<F>(&self, image: F) -> StateVector
    where
        F: Fn(usize) -> Option<(Image, C64)>,
    {
        let mut acc = Accumulator::like(&self.basis, self.is_dense());
        for (i, a) in self.entries() {
            if let Some((img, coef)) = image(i) {
                match img {
                    Image::Mapped(j, f) => acc.add(j, a * coef * f),
                    Image::Zero => {}
                    Image::Clipped(f) => acc.clipped_sqr += (a * coef * f).norm_sqr(),
                }
            }
        }
        StateVector {
            basis: self.basis,
            amps: acc.amps,
            truncation: self.truncation + acc.clipped_sqr.sqrt(),
        }
    }

    pub fn apply_annihilation(&self, mode: usize) -> Result<StateVector> {
        self.apply_ladder(Ladder::Annihilate(mode))
    }

    pub fn apply_creation(&self, mode: usize) -> Result<StateVector> {
        self.apply_ladder(Ladder::Create(mode))
    }

    pub fn apply_ladder(&self, op: Ladder) -> Result<StateVector> {
        self.basis.check_mode(op.mode())?;
        let one = C64::new(1.0, 0.0);
        Ok(self.map_indices(|i| Some((self.basis.ladder_image(i, op), one))))
    }

    /// Applies an operator product written left to right, so the rightmost
    /// operator acts first.
    pub fn apply_word(&self, word: &[Ladder]) -> Result<StateVector> {
        for op in word {
            self.basis.check_mode(op.mode())?;
        }
        let one = C64::new(1.0, 0.0);
        Ok(self.map_indices(|i| {
            let mut index = i;
            let mut factor = 1.0;
            for op in word.iter().rev() {
                match self.basis.ladder_image(index, *op) {
                    Image::Mapped(j, f) => {
                        index = j;
                        factor *= f;
                    }
                    Image::Zero => return None,
                    Image::Clipped(f) => return Some((Image::Clipped(factor * f), one)),
                }
            }
            Some((Image::Mapped(index, factor), one))
        }))
    }

    /// `Σ_k coeffs[k] · a_k |self⟩` in a single pass.
    pub fn apply_annihilation_combination(&self, coeffs: &[C64]) -> Result<StateVector> {
        if coeffs.len() != self.basis.num_modes() {
            return Err(Error::LengthMismatch {
                expected: self.basis.num_modes(),
                got: coeffs.len(),
            });
        }
        let mut acc = Accumulator::like(&self.basis, self.is_dense());
        for (i, a) in self.entries() {
            for (k, &c) in coeffs.iter().enumerate() {
                if let Image::Mapped(j, f) = self.basis.ladder_image(i, Ladder::Annihilate(k)) {
                    acc.add(j, a * c * f);
                }
            }
        }
        Ok(StateVector { basis: self.basis, amps: acc.amps, truncation: self.truncation })
    }

    /// Probability of each total particle number, normalized by the state norm.
    pub fn number_sector_weights(&self) -> Vec<f64> {
        let max_n = match self.basis.statistics() {
            Statistics::Fermion => self.basis.num_modes(),
            Statistics::Boson => self.basis.num_modes() * (self.basis.radix() - 1),
        };
        let mut weights = vec![0.0; max_n + 1];
        for (i, a) in self.entries() {
            weights[self.basis.particle_number(i)] += a.norm_sqr();
        }
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            for w in &mut weights {
                *w /= total;
            }
        }
        weights
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch);
    }
    let sum = match (&a.amps, &b.amps) {
        (Amplitudes::Dense(x), Amplitudes::Dense(y)) => {
            x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
        }
        (Amplitudes::Sparse(x), _) => x.iter().map(|(&i, p)| p.conj() * b.amplitude(i)).sum(),
        (_, Amplitudes::Sparse(y)) => y.iter().map(|(&i, q)| a.amplitude(i).conj() * q).sum(),
    };
    Ok(sum)
}

/// Places the modes of `a` before those of `b`. No fermion sign arises since
/// every ket of `a` is written to the left of every ket of `b`.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let (sa, sb) = (a.statistics(), b.statistics());
    if sa != sb {
        return Err(Error::StatisticsMismatch { left: sa, right: sb });
    }
    if a.basis.radix() != b.basis.radix() {
        return Err(Error::BasisMismatch);
    }
    let basis = enumerate_basis(
        a.basis.num_modes() + b.basis.num_modes(),
        sa,
        a.basis.radix(),
    )?;
    let shift = a.basis.dim();
    let mut out = StateVector::zero(basis);
    for (j, bj) in b.entries() {
        for (i, ai) in a.entries() {
            out.set(i + j * shift, ai * bj);
        }
    }
    out.truncation = a.truncation * b.norm() + b.truncation * a.norm();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn enumerates_small_bases() {
        let f = BasisSet::fermion(2).unwrap();
        assert_eq!(f.dim(), 4);
        let states: Vec<_> = f.states().map(|s| s.occupations).collect();
        assert_eq!(states, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b = BasisSet::boson(1, 3).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(BasisSet::fermion(10).unwrap().dim(), 1024);
    }

    #[test]
    fn basis_guards() {
        assert_eq!(BasisSet::fermion(0), Err(Error::NoModes));
        assert!(matches!(BasisSet::fermion(25), Err(Error::TooManyFermionModes { .. })));
        assert_eq!(BasisSet::boson(2, 1), Err(Error::InvalidCutoff(1)));
        assert!(matches!(BasisSet::boson(8, 10), Err(Error::DimensionOverflow { .. })));
        assert!(matches!(
            BasisSet::with_ceiling(5, Statistics::Fermion, 0, 16),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn encode_decode_round_trip() {
        for basis in [BasisSet::fermion(5).unwrap(), BasisSet::boson(3, 4).unwrap()] {
            for i in 0..basis.dim() {
                assert_eq!(basis.encode(&basis.decode(i)).unwrap(), i);
            }
        }
        let f = BasisSet::fermion(2).unwrap();
        assert!(matches!(
            f.encode(&BasisState::new(vec![2, 0])),
            Err(Error::InvalidOccupation { mode: 0, occupation: 2 })
        ));
    }

    #[test]
    fn fermion_annihilation_sign() {
        let f = BasisSet::fermion(2).unwrap();
        let both = StateVector::number_state(f, &BasisState::new(vec![1, 1])).unwrap();
        let out = both.apply_annihilation(1).unwrap();
        assert_eq!(out.amplitude_of(&BasisState::new(vec![1, 0])).unwrap(), c(-1.0));
        let out0 = both.apply_annihilation(0).unwrap();
        assert_eq!(out0.amplitude_of(&BasisState::new(vec![0, 1])).unwrap(), c(1.0));
    }

    #[test]
    fn ladder_on_vacuum_and_pauli() {
        let f = BasisSet::fermion(1).unwrap();
        let vac = StateVector::vacuum(f);
        assert_eq!(vac.apply_annihilation(0).unwrap().norm(), 0.0);
        let one = vac.apply_creation(0).unwrap();
        assert_eq!(one.amplitude(1), c(1.0));
        assert_eq!(one.apply_creation(0).unwrap().norm(), 0.0);
        assert!(matches!(vac.apply_creation(1), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn boson_sqrt_factors_and_truncation_flag() {
        let b = BasisSet::boson(1, 5).unwrap();
        let three = StateVector::number_state(b, &BasisState::new(vec![3])).unwrap();
        let down = three.apply_annihilation(0).unwrap();
        assert!((down.amplitude(2) - c(3f64.sqrt())).norm() < 1e-15);
        let up = StateVector::vacuum(b).apply_creation(0).unwrap();
        assert_eq!(up.amplitude(1), c(1.0));
        assert_eq!(up.truncation(), 0.0);
        let top = StateVector::number_state(b, &BasisState::new(vec![4])).unwrap();
        let clipped = top.apply_creation(0).unwrap();
        assert_eq!(clipped.norm(), 0.0);
        assert!((clipped.truncation() - 5f64.sqrt()).abs() < 1e-15);
        assert!(clipped.is_truncated(1e-12));
    }

    #[test]
    fn creation_order_gives_sign_flip() {
        let f = BasisSet::fermion(2).unwrap();
        let vac = StateVector::vacuum(f);
        // c†_1 c†_0 |0⟩ versus c†_0 c†_1 |0⟩
        let a = vac.apply_word(&[Ladder::Create(1), Ladder::Create(0)]).unwrap();
        let b = vac.apply_word(&[Ladder::Create(0), Ladder::Create(1)]).unwrap();
        assert_eq!(b.amplitude(3), c(1.0));
        assert_eq!(a.amplitude(3), c(-1.0));
        assert_eq!(inner_product(&b, &a).unwrap(), c(-1.0));
    }

    #[test]
    fn inner_product_basics() {
        let f = BasisSet::fermion(1).unwrap();
        let vac = StateVector::vacuum(f);
        assert_eq!(inner_product(&vac, &vac).unwrap(), c(1.0));
        let other = StateVector::vacuum(BasisSet::fermion(2).unwrap());
        assert_eq!(inner_product(&vac, &other), Err(Error::BasisMismatch));
        let v = StateVector::from_dense(f, vec![C64::new(0.0, 1.0), c(0.0)]).unwrap();
        assert_eq!(inner_product(&v, &vac).unwrap(), C64::new(0.0, -1.0));
    }

    #[test]
    fn tensor_products() {
        let f1 = BasisSet::fermion(1).unwrap();
        let one = StateVector::number_state(f1, &BasisState::new(vec![1])).unwrap();
        let vac = StateVector::vacuum(f1);
        let t = tensor_product(&one, &vac).unwrap();
        assert_eq!(t.amplitude_of(&BasisState::new(vec![1, 0])).unwrap(), c(1.0));
        let tt = tensor_product(&one, &one).unwrap();
        assert_eq!(tt.amplitude_of(&BasisState::new(vec![1, 1])).unwrap(), c(1.0));
        let sup = StateVector::from_dense(f1, vec![c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let s = tensor_product(&sup, &vac).unwrap();
        assert_eq!(s.amplitude_of(&BasisState::new(vec![0, 0])).unwrap(), c(0.6));
        assert_eq!(s.amplitude_of(&BasisState::new(vec![1, 0])).unwrap(), C64::new(0.0, 0.8));
        let boson = StateVector::vacuum(BasisSet::boson(1, 3).unwrap());
        assert!(matches!(tensor_product(&vac, &boson), Err(Error::StatisticsMismatch { .. })));
    }

    #[test]
    fn sector_weights() {
        let f = BasisSet::fermion(2).unwrap();
        assert_eq!(StateVector::vacuum(f).number_sector_weights(), vec![1.0, 0.0, 0.0]);
        let both = StateVector::number_state(f, &BasisState::new(vec![1, 1])).unwrap();
        assert_eq!(both.number_sector_weights(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn sparse_and_dense_agree() {
        let f = BasisSet::fermion(3).unwrap();
        let s = BasisState::new(vec![1, 0, 1]);
        let dense = StateVector::number_state(f, &s).unwrap();
        let sparse = StateVector::sparse_number_state(f, &s).unwrap();
        assert!(!sparse.is_dense());
        let word = [Ladder::Create(1), Ladder::Annihilate(2)];
        let a = dense.apply_word(&word).unwrap();
        let b = sparse.apply_word(&word).unwrap();
        assert_eq!(a.to_dense(), b.to_dense());
        assert_eq!(inner_product(&a, &b).unwrap(), c(1.0));
    }
}
