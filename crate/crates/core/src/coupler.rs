//! Two-mode linear coupler (beam splitter), Schmidt analysis of bipartitions
//! and linear loss through an environment mode.
//!
//! Convention: the coupler maps `a†_i ↦ t a†_i + r a†_j` (and
//! `a†_j ↦ −r* a†_i + t* a†_j` up to the phase of `t`). It is realized as
//! `exp(iτ n̂_i) · exp(θ(e^{iχ} a†_i a_j − e^{−iχ} a†_j a_i))` with
//! `θ = arccos|t|`, `τ = arg t` and `e^{−iχ} = −r/|r|`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{enumerate_basis, tensor_product, StateVector, C64};
use crate::generator::{apply_generator_exponential, GeneratorSpec, TermKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplerSpec {
    pub t: C64,
    pub r: C64,
    pub modes: (usize, usize),
}

impl CouplerSpec {
    pub fn new(t: C64, r: C64, modes: (usize, usize)) -> Result<Self> {
        let spec = CouplerSpec { t, r, modes };
        spec.validate()?;
        Ok(spec)
    }

    /// Balanced real splitter `t = r = 1/√2`.
    pub fn balanced(modes: (usize, usize)) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CouplerSpec { t: C64::new(h, 0.0), r: C64::new(h, 0.0), modes }
    }

    pub fn validate(&self) -> Result<()> {
        let total = self.t.norm_sqr() + self.r.norm_sqr();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidCoupler(format!("|t|² + |r|² = {total}")));
        }
        if self.modes.0 == self.modes.1 {
            return Err(Error::InvalidCoupler("coupler needs two distinct modes".into()));
        }
        Ok(())
    }

    /// `(θ, χ, τ)` of the generator realization.
    pub fn generator_angles(&self) -> (f64, f64, f64) {
        let theta = self.t.norm().min(1.0).acos();
        let chi = if self.r.norm() > 0.0 { -(-self.r).arg() } else { 0.0 };
        (theta, chi, self.t.arg())
    }
}

pub fn couple(state: &StateVector, spec: &CouplerSpec, tol: f64) -> Result<StateVector> {
    spec.validate()?;
    let (i, j) = spec.modes;
    let n = state.basis().num_modes();
    for m in [i, j] {
        if m >= n {
            return Err(Error::ModeOutOfRange { mode: m, num_modes: n });
        }
    }
    let (theta, chi, tau) = spec.generator_angles();
    let mix = GeneratorSpec::anti_hermitian(&[(
        C64::from_polar(theta, chi),
        TermKind::CreateAnnihilate(i, j),
    )]);
    let mixed = apply_generator_exponential(state, &mix, tol)?;
    if tau == 0.0 {
        return Ok(mixed);
    }
    let mut phase = GeneratorSpec::new(vec![crate::generator::GeneratorTerm {
        coefficient: C64::new(0.0, tau),
        kind: TermKind::CreateAnnihilate(i, i),
    }]);
    phase.anti_hermitian = true;
    apply_generator_exponential(&mixed, &phase, tol)
}

/// Schmidt coefficients of a pure state across a mode bipartition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtReport {
    pub singular_values: Vec<f64>,
    /// `1 − σ₁²` for the normalized state; zero iff it is a product.
    pub product_residual: f64,
}

/// Rows index the occupations of `partition`, columns the rest. For fermions
/// the amplitude picks up the sign of moving the `partition` operators to the
/// left of the others.
pub fn product_state_residual(state: &StateVector, partition: &[usize]) -> Result<SchmidtReport> {
    let basis = *state.basis();
    let n = basis.num_modes();
    let mut in_a = vec![false; n];
    for &m in partition {
        if m >= n {
            return Err(Error::ModeOutOfRange { mode: m, num_modes: n });
        }
        in_a[m] = true;
    }
    let a_modes: Vec<usize> = (0..n).filter(|&m| in_a[m]).collect();
    let b_modes: Vec<usize> = (0..n).filter(|&m| !in_a[m]).collect();
    let radix = basis.radix();
    let rows = radix.pow(a_modes.len() as u32);
    let cols = radix.pow(b_modes.len() as u32);
    let mut matrix = DMatrix::<C64>::zeros(rows, cols);
    for (index, amp) in state.entries() {
        let digit = |m: usize| basis.occupation(index, m) as usize;
        let row = a_modes.iter().rev().fold(0, |acc, &m| acc * radix + digit(m));
        let col = b_modes.iter().rev().fold(0, |acc, &m| acc * radix + digit(m));
        let mut sign = 1.0;
        if basis.is_fermion() {
            // count (b before a) pairs that must be swapped
            let mut swaps = 0;
            for &a in &a_modes {
                if digit(a) == 1 {
                    swaps += b_modes.iter().filter(|&&b| b < a && digit(b) == 1).count();
                }
            }
            if swaps % 2 == 1 {
                sign = -1.0;
            }
        }
        matrix[(row, col)] = amp * sign;
    }
    let norm_sqr = state.norm_sqr();
    let mut singular_values: Vec<f64> = matrix.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let residual = if norm_sqr > 0.0 {
        // the complement sum avoids cancellation in 1 − σ₁²
        let rest: f64 = singular_values.iter().skip(1).map(|s| s * s).sum();
        (rest / norm_sqr).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(SchmidtReport { singular_values, product_residual: residual })
}

/// Couples `mode` to a fresh vacuum environment mode with transmissivity `t`
/// and traces the environment out. Returns normalized conditional states
/// with their probabilities, ordered by environment occupation.
pub fn apply_loss(
    state: &StateVector,
    mode: usize,
    t: f64,
    tol: f64,
) -> Result<Vec<(f64, StateVector)>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidCoupler(format!("transmissivity {t} outside [0, 1]")));
    }
    let basis = *state.basis();
    let env_basis = enumerate_basis(1, basis.statistics(), basis.radix())?;
    let joint = tensor_product(state, &StateVector::vacuum(env_basis))?;
    let env = basis.num_modes();
    let spec = CouplerSpec::new(
        C64::new(t, 0.0),
        C64::new((1.0 - t * t).max(0.0).sqrt(), 0.0),
        (mode, env),
    )?;
    let out = couple(&joint, &spec, tol)?;
    let mut branches: Vec<Vec<(usize, C64)>> = vec![Vec::new(); basis.radix()];
    let stride = basis.dim();
    for (index, amp) in out.entries() {
        branches[index / stride].push((index % stride, amp));
    }
    let mut result = Vec::new();
    for branch in branches {
        let mut amps = vec![C64::new(0.0, 0.0); stride];
        for (i, a) in branch {
            amps[i] = a;
        }
        let v = StateVector::from_dense(basis, amps)?;
        let p = v.norm_sqr();
        if p > 0.0 {
            result.push((p, v.normalized()));
        }
    }
    Ok(result)
}
