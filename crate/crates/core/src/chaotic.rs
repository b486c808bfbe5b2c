//! Chaotic (thermal) product states of boson or fermion modes and their
//! correlators through the permanent/determinant expansion.

use serde::{Deserialize, Serialize};

use crate::correlators::{CorrelatorResult, Method};
use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, BasisSet, BasisState, Statistics, C64};
use crate::modes::{ModeBasis, PointTuple};

pub const MIXTURE_TAIL_LIMIT: f64 = 1e-10;
pub const MAX_PERMANENT_SIZE: usize = 12;
pub const MAX_WICK_ORDER: usize = 8;

/// Mean occupations `M_i` of independent thermal modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaoticModeSpec {
    pub mean_occupations: Vec<f64>,
}

impl ChaoticModeSpec {
    pub fn new(mean_occupations: Vec<f64>) -> Self {
        ChaoticModeSpec { mean_occupations }
    }

    pub fn uniform(num_modes: usize, mean: f64) -> Self {
        ChaoticModeSpec { mean_occupations: vec![mean; num_modes] }
    }

    pub fn num_modes(&self) -> usize {
        self.mean_occupations.len()
    }

    /// Boltzmann factor `e^{−ξ}`: `M/(1+M)` for bosons, `M/(1−M)` for fermions.
    pub fn boltzmann_factor(&self, mode: usize, statistics: Statistics) -> f64 {
        let m = self.mean_occupations[mode];
        match statistics {
            Statistics::Boson => m / (1.0 + m),
            Statistics::Fermion => m / (1.0 - m),
        }
    }

    pub fn validate(&self, statistics: Statistics) -> Result<()> {
        if self.mean_occupations.is_empty() {
            return Err(Error::NoModes);
        }
        for (k, &m) in self.mean_occupations.iter().enumerate() {
            let ok = m.is_finite()
                && m >= 0.0
                && (statistics == Statistics::Boson || m < 1.0);
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "mean occupation {m} of mode {k} invalid for {statistics}"
                )));
            }
        }
        Ok(())
    }

    /// Same occupations listed in a new mode order: slot `p` gets mode `order[p]`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        ChaoticModeSpec { mean_occupations: order.iter().map(|&m| self.mean_occupations[m]).collect() }
    }
}

/// Probability-weighted Fock basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedMixture {
    basis: BasisSet,
    components: Vec<(f64, BasisState)>,
}

impl WeightedMixture {
    pub fn new(basis: BasisSet, components: Vec<(f64, BasisState)>) -> Result<Self> {
        let mut total = 0.0;
        for (p, s) in &components {
            if p.is_nan() || *p < 0.0 {
                return Err(Error::InvalidArgument(format!("negative probability {p}")));
            }
            basis.encode(s)?;
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(WeightedMixture { basis, components })
    }

    pub fn basis(&self) -> &BasisSet {
        &self.basis
    }

    pub fn components(&self) -> &[(f64, BasisState)] {
        &self.components
    }

    pub fn total_probability(&self) -> f64 {
        self.components.iter().map(|(p, _)| p).sum()
    }

    pub fn probability_of(&self, state: &BasisState) -> f64 {
        self.components.iter().filter(|(_, s)| s == state).map(|(p, _)| p).sum()
    }

    /// Relabels modes: slot `p` of the result holds mode `order[p]`.
    /// Components are re-sorted by basis index.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        crate::permutation::PermutationSpec::explicit(order.to_vec())?;
        if order.len() != self.basis.num_modes() {
            return Err(Error::LengthMismatch { expected: self.basis.num_modes(), got: order.len() });
        }
        let mut components: Vec<(usize, f64, BasisState)> = self
            .components
            .iter()
            .map(|(p, s)| {
                let occ = BasisState::new(order.iter().map(|&m| s.occupations[m]).collect());
                (self.basis.encode(&occ).expect("same radix"), *p, occ)
            })
            .collect();
        components.sort_by_key(|c| c.0);
        Ok(WeightedMixture {
            basis: self.basis,
            components: components.into_iter().map(|(_, p, s)| (p, s)).collect(),
        })
    }
}

/// Per-mode occupation distribution, renormalized over the retained levels.
fn mode_distribution(mean: f64, statistics: Statistics, cutoff: usize) -> Result<Vec<f64>> {
    match statistics {
        Statistics::Fermion => Ok(vec![1.0 - mean, mean]),
        Statistics::Boson => {
            let q = mean / (1.0 + mean);
            let tail = q.powi(cutoff as i32);
            if tail >= MIXTURE_TAIL_LIMIT {
                return Err(Error::CutoffTooSmall { cutoff, tail, limit: MIXTURE_TAIL_LIMIT });
            }
            let norm = (1.0 - q) / (1.0 - tail);
            Ok((0..cutoff).map(|n| norm * q.powi(n as i32)).collect())
        }
    }
}

/// Tensor product of single-mode thermal distributions, geometric for
/// bosons (renormalized below the cutoff) and two-point for fermions.
/// Zero-probability configurations are omitted.
pub fn chaotic_mixture(
    spec: &ChaoticModeSpec,
    statistics: Statistics,
    boson_cutoff: usize,
) -> Result<WeightedMixture> {
    spec.validate(statistics)?;
    let basis = enumerate_basis(spec.num_modes(), statistics, boson_cutoff)?;
    let per_mode: Vec<Vec<f64>> = spec
        .mean_occupations
        .iter()
        .map(|&m| mode_distribution(m, statistics, basis.radix()))
        .collect::<Result<_>>()?;
    let mut components = Vec::new();
    for index in 0..basis.dim() {
        let state = basis.decode(index);
        let p: f64 = state
            .occupations
            .iter()
            .zip(&per_mode)
            .map(|(&n, dist)| dist[n as usize])
            .product();
        if p > 0.0 {
            components.push((p, state));
        }
    }
    Ok(WeightedMixture { basis, components })
}

/// `G^{(1)}(x,y) = Σ_i M_i φ_i*(x) φ_i(y)`, the same for both statistics.
pub fn chaotic_first_order(spec: &ChaoticModeSpec, modes: &ModeBasis, x: f64, y: f64) -> Result<C64> {
    if spec.num_modes() != modes.num_modes() {
        return Err(Error::LengthMismatch { expected: spec.num_modes(), got: modes.num_modes() });
    }
    Ok(spec
        .mean_occupations
        .iter()
        .enumerate()
        .map(|(i, &m)| modes.value(i, x).conj() * modes.value(i, y) * m)
        .sum())
}

/// `Σ_P χ^{par P} Π_m G^{(1)}(x_m, y_{P(m)})`: the permanent (bosons) or
/// determinant (fermions) of `[G^{(1)}(x_i, y_j)]`.
pub fn chaotic_nth_order(
    spec: &ChaoticModeSpec,
    modes: &ModeBasis,
    pts: &PointTuple,
    statistics: Statistics,
) -> Result<CorrelatorResult> {
    let n = pts.order();
    if n > MAX_WICK_ORDER {
        return Err(Error::SizeGuard { what: "Wick expansion order", size: n, limit: MAX_WICK_ORDER });
    }
    let mut matrix = Vec::with_capacity(n * n);
    for &x in &pts.xs {
        for &y in &pts.ys {
            matrix.push(chaotic_first_order(spec, modes, x, y)?);
        }
    }
    let value = match statistics {
        Statistics::Boson => permanent(&matrix, n)?,
        Statistics::Fermion => determinant(&matrix, n)?,
    };
    Ok(CorrelatorResult { value, order: n, method: Method::Wick })
}

fn check_square(matrix: &[C64], n: usize) -> Result<()> {
    if matrix.len() != n * n {
        return Err(Error::LengthMismatch { expected: n * n, got: matrix.len() });
    }
    Ok(())
}

/// Ryser's formula `perm A = (−1)ⁿ Σ_S (−1)^{|S|} Π_i Σ_{j∈S} a_ij`, visiting
/// column subsets in Gray-code order so each step updates the row sums by
/// one column. `matrix` is row-major `n × n`.
pub fn permanent(matrix: &[C64], n: usize) -> Result<C64> {
    check_square(matrix, n)?;
    if n > MAX_PERMANENT_SIZE {
        return Err(Error::SizeGuard { what: "permanent", size: n, limit: MAX_PERMANENT_SIZE });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray = 0usize;
    for k in 1usize..(1 << n) {
        let flip = k.trailing_zeros() as usize;
        let adding = gray & (1 << flip) == 0;
        gray ^= 1 << flip;
        for (i, sum) in row_sums.iter_mut().enumerate() {
            let a = matrix[i * n + flip];
            if adding {
                *sum += a;
            } else {
                *sum -= a;
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones().is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(if n.is_multiple_of(2) { total } else { -total })
}

/// Gaussian elimination with partial pivoting.
pub fn determinant(matrix: &[C64], n: usize) -> Result<C64> {
    check_square(matrix, n)?;
    let mut a = matrix.to_vec();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
            .expect("non-empty range");
        if a[pivot * n + col] == C64::new(0.0, 0.0) {
            return Ok(C64::new(0.0, 0.0));
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[r * n + j] -= factor * v;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn single_fermion_mode_weights() {
        let m = chaotic_mixture(&ChaoticModeSpec::new(vec![0.3]), Statistics::Fermion, 2).unwrap();
        assert_eq!(m.components().len(), 2);
        assert!((m.probability_of(&BasisState::new(vec![0])) - 0.7).abs() < 1e-15);
        assert!((m.probability_of(&BasisState::new(vec![1])) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn boson_geometric_weights() {
        let m = chaotic_mixture(&ChaoticModeSpec::new(vec![1.0]), Statistics::Boson, 40).unwrap();
        for n in 0..40u32 {
            let expected = 0.5 * 0.5f64.powi(n as i32);
            let got = m.probability_of(&BasisState::new(vec![n]));
            assert!((got - expected).abs() < 1e-11, "n = {n}");
        }
        assert!((m.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_filled_fermions_are_uniform() {
        let m = chaotic_mixture(&ChaoticModeSpec::uniform(2, 0.5), Statistics::Fermion, 2).unwrap();
        assert_eq!(m.components().len(), 4);
        assert!(m.components().iter().all(|(p, _)| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn mixture_guards() {
        assert!(matches!(
            chaotic_mixture(&ChaoticModeSpec::new(vec![1.0]), Statistics::Boson, 10),
            Err(Error::CutoffTooSmall { .. })
        ));
        assert!(chaotic_mixture(&ChaoticModeSpec::new(vec![1.0]), Statistics::Fermion, 2).is_err());
        assert!(chaotic_mixture(&ChaoticModeSpec::new(vec![-0.1]), Statistics::Boson, 10).is_err());
    }

    #[test]
    fn boltzmann_factors() {
        let spec = ChaoticModeSpec::new(vec![0.25]);
        assert!((spec.boltzmann_factor(0, Statistics::Boson) - 0.2).abs() < 1e-15);
        assert!((spec.boltzmann_factor(0, Statistics::Fermion) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn permanent_small_cases() {
        let id3: Vec<C64> = (0..9).map(|k| if k % 4 == 0 { c(1.0) } else { c(0.0) }).collect();
        assert_eq!(permanent(&id3, 3).unwrap(), c(1.0));
        let mut fact = 1.0;
        for n in 1..=7usize {
            fact *= n as f64;
            let ones = vec![c(1.0); n * n];
            assert!((permanent(&ones, n).unwrap() - c(fact)).norm() < 1e-9 * fact);
        }
        assert!(matches!(permanent(&vec![c(1.0); 169], 13), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![c(1.0), c(2.0), c(3.0), c(4.0)];
        assert!((determinant(&m, 2).unwrap() - c(-2.0)).norm() < 1e-15);
        let swapped = vec![c(0.0), c(1.0), c(1.0), c(0.0)];
        assert!((determinant(&swapped, 2).unwrap() - c(-1.0)).norm() < 1e-15);
        assert!(determinant(&[c(1.0), c(2.0), c(2.0), c(4.0)], 2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn wick_second_order_shapes() {
        let spec = ChaoticModeSpec::new(vec![0.4]);
        let modes = ModeBasis::unit_comb(1);
        let pts = PointTuple::diagonal(vec![0.2, 0.7]);
        let boson = chaotic_nth_order(&spec, &modes, &pts, Statistics::Boson).unwrap();
        assert!((boson.value - c(2.0 * 0.16)).norm() < 1e-15);
        let fermion = chaotic_nth_order(&spec, &modes, &pts, Statistics::Fermion).unwrap();
        assert!(fermion.value.norm() < 1e-15);
        assert_eq!(fermion.method, Method::Wick);
    }

    #[test]
    fn reordered_mixture_permutes_occupations() {
        let spec = ChaoticModeSpec::new(vec![0.1, 0.2, 0.3]);
        let m = chaotic_mixture(&spec, Statistics::Fermion, 2).unwrap();
        let r = m.reordered(&[2, 0, 1]).unwrap();
        let direct = chaotic_mixture(&spec.reordered(&[2, 0, 1]), Statistics::Fermion, 2).unwrap();
        for ((p, s), (q, t)) in r.components().iter().zip(direct.components()) {
            assert_eq!(s, t);
            assert!((p - q).abs() < 1e-15);
        }
    }
}
