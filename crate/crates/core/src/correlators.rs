//! Normally ordered field correlators `Γ^{(n)}`, the complex degree of
//! coherence, and the closed-form first-order correlator of ordered
//! multimode fermion states.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaotic::WeightedMixture;
use crate::error::{Error, Result};
use crate::fock::{StateVector, C64};
use crate::modes::{ModeBasis, PointTuple};
use crate::permutation::PermutationSpec;

/// Diagonal intensities at or below this are treated as zero.
pub const ZERO_INTENSITY: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    ClosedForm,
    Wick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorResult {
    pub value: C64,
    pub order: usize,
    pub method: Method,
}

/// Anything whose correlators are a weighted sum of pure-state correlators.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    Pure(&'a StateVector),
    /// Fock-diagonal mixture.
    Mixture(&'a WeightedMixture),
    /// Mixture of pure states with probabilities.
    Ensemble(&'a [(f64, StateVector)]),
}

impl<'a> From<&'a StateVector> for Source<'a> {
    fn from(s: &'a StateVector) -> Self {
        Source::Pure(s)
    }
}

impl<'a> From<&'a WeightedMixture> for Source<'a> {
    fn from(m: &'a WeightedMixture) -> Self {
        Source::Mixture(m)
    }
}

impl<'a> Source<'a> {
    pub fn num_modes(&self) -> usize {
        match self {
            Source::Pure(s) => s.basis().num_modes(),
            Source::Mixture(m) => m.basis().num_modes(),
            Source::Ensemble(e) => e.first().map_or(0, |(_, s)| s.basis().num_modes()),
        }
    }

    pub fn is_fermion(&self) -> bool {
        match self {
            Source::Pure(s) => s.basis().is_fermion(),
            Source::Mixture(m) => m.basis().is_fermion(),
            Source::Ensemble(e) => e.first().is_some_and(|(_, s)| s.basis().is_fermion()),
        }
    }

    /// Sums `f` over pure components weighted by probability. Components are
    /// evaluated in parallel but summed in their stored order.
    fn weighted_sum<T, F>(&self, f: F) -> Result<T>
    where
        T: Send + std::ops::AddAssign + std::ops::Mul<f64, Output = T> + Default,
        F: Fn(&StateVector) -> Result<T> + Sync,
    {
        let parts: Vec<Result<T>> = match self {
            Source::Pure(s) => vec![f(s)],
            Source::Mixture(m) => {
                let basis = *m.basis();
                m.components()
                    .par_iter()
                    .map(|(p, state)| {
                        let v = StateVector::sparse_number_state(basis, state)?;
                        Ok(f(&v)? * *p)
                    })
                    .collect()
            }
            Source::Ensemble(e) => e.par_iter().map(|(p, v)| Ok(f(v)? * *p)).collect(),
        };
        let mut total = T::default();
        for part in parts {
            total += part?;
        }
        Ok(total)
    }
}

fn check_modes(source: &Source<'_>, modes: &ModeBasis) -> Result<()> {
    if source.num_modes() != modes.num_modes() {
        return Err(Error::LengthMismatch { expected: source.num_modes(), got: modes.num_modes() });
    }
    Ok(())
}

/// `ψ̂(x)|state⟩ = Σ_k φ_k(x) a_k|state⟩`, not renormalized.
pub fn field_annihilate(state: &StateVector, modes: &ModeBasis, x: f64) -> Result<StateVector> {
    if state.basis().num_modes() != modes.num_modes() {
        return Err(Error::LengthMismatch {
            expected: state.basis().num_modes(),
            got: modes.num_modes(),
        });
    }
    state.apply_annihilation_combination(&modes.values(x))
}

/// `ψ̂(p_n)⋯ψ̂(p_1)|state⟩`
pub fn field_annihilate_all(
    state: &StateVector,
    modes: &ModeBasis,
    points: &[f64],
) -> Result<StateVector> {
    let mut v = state.clone();
    for &p in points {
        v = field_annihilate(&v, modes, p)?;
    }
    Ok(v)
}

fn pure_correlator(state: &StateVector, modes: &ModeBasis, pts: &PointTuple) -> Result<C64> {
    let b = field_annihilate_all(state, modes, &pts.ys)?;
    if pts.xs == pts.ys {
        return Ok(C64::new(b.norm_sqr(), 0.0));
    }
    let a = field_annihilate_all(state, modes, &pts.xs)?;
    a.inner(&b)
}

/// `Γ^{(n)}(x₁,…,x_n, y_n,…,y₁) = ⟨A|B⟩` with `|A⟩ = ψ̂(x_n)⋯ψ̂(x₁)|ψ⟩` and
/// `|B⟩ = ψ̂(y_n)⋯ψ̂(y₁)|ψ⟩`, weight-summed over mixture components.
pub fn correlator(
    source: Source<'_>,
    modes: &ModeBasis,
    pts: &PointTuple,
) -> Result<CorrelatorResult> {
    check_modes(&source, modes)?;
    let value = source.weighted_sum(|s| pure_correlator(s, modes, pts))?;
    Ok(CorrelatorResult { value, order: pts.order(), method: Method::BruteForce })
}

pub fn first_order(source: Source<'_>, modes: &ModeBasis, x: f64, y: f64) -> Result<C64> {
    Ok(correlator(source, modes, &PointTuple::first(x, y))?.value)
}

/// `γ(x,y) = Γ(x,y)/√(Γ(x,x)Γ(y,y))`
pub fn degree_of_coherence(source: Source<'_>, modes: &ModeBasis, x: f64, y: f64) -> Result<C64> {
    let gxx = first_order(source, modes, x, x)?.re;
    if gxx <= ZERO_INTENSITY {
        return Err(Error::ZeroIntensity { x, intensity: gxx });
    }
    let gyy = first_order(source, modes, y, y)?.re;
    if gyy <= ZERO_INTENSITY {
        return Err(Error::ZeroIntensity { x: y, intensity: gyy });
    }
    let gxy = first_order(source, modes, x, y)?;
    Ok(gxy / (gxx * gyy).sqrt())
}

/// Square matrix over a sample grid, row index for `x`, column for `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    pub points: Vec<f64>,
    pub values: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, a: usize, b: usize) -> T {
        self.values[a * self.points.len() + b]
    }

    pub fn map<U, F: Fn(T) -> U>(&self, f: F) -> Grid<U> {
        Grid { points: self.points.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

impl Grid<f64> {
    pub fn max_abs_diff(&self, other: &Grid<f64>) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size()).map(|a| self.get(a, a)).collect()
    }
}

/// Gram matrix of lowered vectors: `Γ^{(n)}` for every pair of `n`-tuples
/// drawn from `points`. Tuple `(t₁,…,t_n)` has index `t₁ + t₂·g + …`.
pub fn correlator_tensor(
    source: Source<'_>,
    modes: &ModeBasis,
    order: usize,
    points: &[f64],
) -> Result<Vec<C64>> {
    check_modes(&source, modes)?;
    if order == 0 {
        return Err(Error::InvalidArgument("correlator order must be at least 1".into()));
    }
    let g = points.len();
    let tuples = g.pow(order as u32);
    let gram = source.weighted_sum(|state| {
        let mut level = vec![state.clone()];
        for _ in 0..order {
            // New index = old + point·stride, so loop points outermost.
            let mut next = Vec::with_capacity(level.len() * g);
            for &p in points {
                for v in &level {
                    next.push(field_annihilate(v, modes, p)?);
                }
            }
            level = next;
        }
        let rows: Vec<Result<Vec<C64>>> = (0..tuples)
            .into_par_iter()
            .map(|r| (0..tuples).map(|c| level[r].inner(&level[c])).collect())
            .collect();
        let mut flat = Vec::with_capacity(tuples * tuples);
        for row in rows {
            flat.extend(row?);
        }
        Ok(Matrix(flat))
    })?;
    Ok(gram.0)
}

#[derive(Default)]
struct Matrix(Vec<C64>);

impl std::ops::AddAssign for Matrix {
    fn add_assign(&mut self, rhs: Self) {
        if self.0.is_empty() {
            self.0 = rhs.0;
        } else {
            for (a, b) in self.0.iter_mut().zip(rhs.0) {
                *a += b;
            }
        }
    }
}

impl std::ops::Mul<f64> for Matrix {
    type Output = Matrix;
    fn mul(self, p: f64) -> Matrix {
        Matrix(self.0.into_iter().map(|v| v * p).collect())
    }
}

/// `Γ^{(1)}(x_a, x_b)` over the grid by brute force.
pub fn first_order_grid(source: Source<'_>, modes: &ModeBasis, points: &[f64]) -> Result<Grid<C64>> {
    let values = correlator_tensor(source, modes, 1, points)?;
    Ok(Grid { points: points.to_vec(), values })
}

/// `Γ^{(2)}(x,y,y,x)` over the grid by brute force.
pub fn second_order_diagonal_grid(
    source: Source<'_>,
    modes: &ModeBasis,
    points: &[f64],
) -> Result<Grid<f64>> {
    check_modes(&source, modes)?;
    let g = points.len();
    let values = source.weighted_sum(|state| {
        let lowered: Vec<StateVector> = points
            .iter()
            .map(|&x| field_annihilate(state, modes, x))
            .collect::<Result<_>>()?;
        let cells: Vec<Result<f64>> = (0..g * g)
            .into_par_iter()
            .map(|cell| {
                let (a, b) = (cell / g, cell % g);
                Ok(field_annihilate(&lowered[a], modes, points[b])?.norm_sqr())
            })
            .collect();
        Ok(RealVec(cells.into_iter().collect::<Result<Vec<f64>>>()?))
    })?;
    Ok(Grid { points: points.to_vec(), values: values.0 })
}

#[derive(Default)]
struct RealVec(Vec<f64>);

impl std::ops::AddAssign for RealVec {
    fn add_assign(&mut self, rhs: Self) {
        if self.0.is_empty() {
            self.0 = rhs.0;
        } else {
            for (a, b) in self.0.iter_mut().zip(rhs.0) {
                *a += b;
            }
        }
    }
}

impl std::ops::Mul<f64> for RealVec {
    type Output = RealVec;
    fn mul(self, p: f64) -> RealVec {
        RealVec(self.0.into_iter().map(|v| v * p).collect())
    }
}

/// One-body density matrix `⟨c†_i c_j⟩` of an ordered product state, with
/// `U_ij` the product of `cos 2|α_k|` over modes strictly between `i` and `j`
/// in the applied ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderKernel {
    num_modes: usize,
    density: Vec<C64>,
}

impl FirstOrderKernel {
    pub fn new(alphas: &[C64], perm: &PermutationSpec) -> Result<Self> {
        let n = alphas.len();
        if perm.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: perm.len() });
        }
        let pos = perm.positions();
        let polar: Vec<(f64, f64)> = alphas.iter().map(|a| a.to_polar()).collect();
        // Prefix products of cos 2|α| along the ordering give U in O(1);
        // a running product avoids dividing by a vanishing cosine.
        let cos2: Vec<f64> = perm.order().iter().map(|&m| (2.0 * polar[m].0).cos()).collect();
        let mut between = vec![vec![1.0; n]; n];
        for p in 0..n {
            let mut running = 1.0;
            for q in p + 1..n {
                between[p][q] = running;
                between[q][p] = running;
                running *= cos2[q];
            }
        }
        let mut density = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let (ri, phi_i) = polar[i];
            for j in 0..n {
                let (rj, phi_j) = polar[j];
                let u = if i == j { 1.0 } else { between[pos[i]][pos[j]] };
                let mut v = C64::from_polar(
                    0.25 * (2.0 * ri).sin() * (2.0 * rj).sin() * u,
                    phi_j - phi_i,
                );
                if i == j {
                    v += ri.sin().powi(4);
                }
                density[i * n + j] = v;
            }
        }
        Ok(FirstOrderKernel { num_modes: n, density })
    }

    pub fn density(&self, i: usize, j: usize) -> C64 {
        self.density[i * self.num_modes + j]
    }

    fn apply(&self, phi_y: &[C64]) -> Vec<C64> {
        let n = self.num_modes;
        (0..n)
            .map(|i| (0..n).map(|j| self.density[i * n + j] * phi_y[j]).sum())
            .collect()
    }

    pub fn value(&self, modes: &ModeBasis, x: f64, y: f64) -> Result<C64> {
        if modes.num_modes() != self.num_modes {
            return Err(Error::LengthMismatch { expected: self.num_modes, got: modes.num_modes() });
        }
        let px = modes.values(x);
        let ay = self.apply(&modes.values(y));
        Ok(px.iter().zip(&ay).map(|(p, a)| p.conj() * a).sum())
    }

    pub fn grid(&self, modes: &ModeBasis, points: &[f64]) -> Result<Grid<C64>> {
        if modes.num_modes() != self.num_modes {
            return Err(Error::LengthMismatch { expected: self.num_modes, got: modes.num_modes() });
        }
        let phis: Vec<Vec<C64>> = points.iter().map(|&p| modes.values(p)).collect();
        let applied: Vec<Vec<C64>> = phis.par_iter().map(|p| self.apply(p)).collect();
        let g = points.len();
        let values = (0..g * g)
            .into_par_iter()
            .map(|cell| {
                let (a, b) = (cell / g, cell % g);
                phis[a].iter().zip(&applied[b]).map(|(p, q)| p.conj() * q).sum()
            })
            .collect();
        Ok(Grid { points: points.to_vec(), values })
    }
}

/// `Γ^{(1)}(x,y)` of the ordered product state in `O(N²)`.
pub fn first_order_closed_form(
    alphas: &[C64],
    perm: &PermutationSpec,
    modes: &ModeBasis,
    x: f64,
    y: f64,
) -> Result<CorrelatorResult> {
    let value = FirstOrderKernel::new(alphas, perm)?.value(modes, x, y)?;
    Ok(CorrelatorResult { value, order: 1, method: Method::ClosedForm })
}

#[derive(Clone, Copy, Debug)]
pub enum GridSource<'a> {
    PermutationOrdered { alphas: &'a [C64], perm: &'a PermutationSpec },
    BruteForce(Source<'a>),
}

fn normalize_first_order(gamma: Grid<C64>) -> Result<Grid<f64>> {
    let g = gamma.size();
    let diag: Vec<f64> = (0..g).map(|a| gamma.get(a, a).re).collect();
    for (a, &d) in diag.iter().enumerate() {
        if d <= ZERO_INTENSITY {
            return Err(Error::ZeroIntensity { x: gamma.points[a], intensity: d });
        }
    }
    let values = (0..g * g)
        .map(|cell| {
            let (a, b) = (cell / g, cell % g);
            gamma.values[cell].norm_sqr() / (diag[a] * diag[b])
        })
        .collect();
    Ok(Grid { points: gamma.points, values })
}

/// `|γ(x,y)|²` on a `grid_size²` grid over `[0, L)²`.
pub fn coherence_grid(source: GridSource<'_>, modes: &ModeBasis, grid_size: usize) -> Result<Grid<f64>> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} below 2")));
    }
    let points = modes.grid(grid_size);
    let gamma = match source {
        GridSource::PermutationOrdered { alphas, perm } => {
            FirstOrderKernel::new(alphas, perm)?.grid(modes, &points)?
        }
        GridSource::BruteForce(s) => first_order_grid(s, modes, &points)?,
    };
    normalize_first_order(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{fermion_displaced, permutation_ordered_state};
    use crate::fock::{BasisSet, BasisState};

    #[test]
    fn vacuum_and_single_particle_fields() {
        let basis = BasisSet::fermion(2).unwrap();
        let modes = ModeBasis::unit_comb(2);
        let vac = StateVector::vacuum(basis);
        assert_eq!(field_annihilate(&vac, &modes, 0.3).unwrap().norm(), 0.0);
        let one = StateVector::number_state(basis, &BasisState::new(vec![0, 1])).unwrap();
        let out = field_annihilate(&one, &modes, 0.3).unwrap();
        assert!((out.amplitude(0) - modes.value(1, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn repeated_field_at_same_point_vanishes() {
        let alphas = vec![C64::new(0.4, 0.1); 4];
        let s = permutation_ordered_state(&alphas, &PermutationSpec::identity(4)).unwrap();
        let modes = ModeBasis::unit_comb(4);
        let twice = field_annihilate_all(&s, &modes, &[0.37, 0.37]).unwrap();
        assert!(twice.norm() < 1e-15);
    }

    #[test]
    fn displaced_intensity() {
        let s = fermion_displaced(C64::new(0.166, 0.0));
        let modes = ModeBasis::comb(1, 2.0, 1.0, 1.0).unwrap();
        let g = first_order(Source::Pure(&s), &modes, 0.4, 0.4).unwrap();
        assert!((g.re - 0.166f64.sin().powi(2) / 2.0).abs() < 1e-15);
        assert!((g.re - 0.0273 / 2.0).abs() < 1e-4);
    }

    #[test]
    fn coherence_on_diagonal_is_one() {
        let alphas = vec![C64::new(0.3, 0.0); 3];
        let s = permutation_ordered_state(&alphas, &PermutationSpec::identity(3)).unwrap();
        let modes = ModeBasis::unit_comb(3);
        let g = degree_of_coherence(Source::Pure(&s), &modes, 0.21, 0.21).unwrap();
        assert!((g - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_intensity_error() {
        let vac = StateVector::vacuum(BasisSet::fermion(2).unwrap());
        let modes = ModeBasis::unit_comb(2);
        assert!(matches!(
            degree_of_coherence(Source::Pure(&vac), &modes, 0.1, 0.2),
            Err(Error::ZeroIntensity { .. })
        ));
    }

    #[test]
    fn closed_form_single_mode() {
        let alpha = C64::new(0.3, 0.7);
        let modes = ModeBasis::unit_comb(1);
        let r = first_order_closed_form(&[alpha], &PermutationSpec::identity(1), &modes, 0.1, 0.6)
            .unwrap();
        let expected = alpha.norm().sin().powi(2) * modes.value(0, 0.1).conj() * modes.value(0, 0.6);
        assert!((r.value - expected).norm() < 1e-15);
        assert_eq!(r.method, Method::ClosedForm);
    }

    #[test]
    fn u_factor_for_equal_alphas() {
        let a = 0.166f64;
        let alphas = vec![C64::new(a, 0.0); 6];
        let k = FirstOrderKernel::new(&alphas, &PermutationSpec::identity(6)).unwrap();
        let pair = 0.25 * (2.0 * a).sin().powi(2);
        for d in 1..6 {
            let expected = pair * (2.0 * a).cos().powi(d as i32 - 1);
            assert!((k.density(0, d) - C64::new(expected, 0.0)).norm() < 1e-15);
            assert!((k.density(d, 0) - C64::new(expected, 0.0)).norm() < 1e-15);
        }
        assert!((k.density(2, 2).re - a.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn grid_guard() {
        let s = fermion_displaced(C64::new(0.3, 0.0));
        let modes = ModeBasis::unit_comb(1);
        assert!(coherence_grid(GridSource::BruteForce(Source::Pure(&s)), &modes, 1).is_err());
        let g = coherence_grid(GridSource::BruteForce(Source::Pure(&s)), &modes, 4).unwrap();
        assert!(g.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }
}
