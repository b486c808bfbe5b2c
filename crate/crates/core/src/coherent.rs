//! Boson coherent states, single-mode fermion displaced states and the
//! ordered multimode fermion products built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{BasisSet, StateVector, C64};
use crate::generator::{apply_generator_exponential, GeneratorSpec};
use crate::permutation::{all_permutations, PermutationSpec};

/// Largest tail weight `Σ_{n≥cutoff} P(n)` accepted for a truncated coherent state.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;
pub const MAX_EXPLICIT_MODES: usize = 20;
pub const MAX_AVERAGED_MODES: usize = 8;

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Poisson tail `Σ_{n≥cutoff} e^{−|α|²}|α|^{2n}/n!`, summed directly so tiny
/// tails keep their relative accuracy.
pub fn poisson_tail(alpha_abs: f64, cutoff: usize) -> f64 {
    let mean = alpha_abs * alpha_abs;
    if mean == 0.0 {
        return if cutoff == 0 { 1.0 } else { 0.0 };
    }
    let mut n = cutoff;
    let mut term = (-mean + n as f64 * mean.ln() - ln_factorial(n)).exp();
    let mut sum = 0.0;
    let horizon = cutoff + 64 + (20.0 * mean) as usize;
    while n < horizon {
        sum += term;
        n += 1;
        term *= mean / n as f64;
        if n as f64 > mean && term < sum * 1e-18 {
            break;
        }
    }
    sum.min(1.0)
}

/// Number-state expansion `e^{−|α|²/2} Σ_{n<cutoff} αⁿ/√n! |n⟩`, not
/// renormalized: the missing norm² is exactly the Poisson tail.
pub fn boson_coherent(alpha: C64, cutoff: usize) -> Result<StateVector> {
    let tail = poisson_tail(alpha.norm(), cutoff);
    if tail >= COHERENT_TAIL_LIMIT {
        return Err(Error::CutoffTooSmall { cutoff, tail, limit: COHERENT_TAIL_LIMIT });
    }
    let basis = BasisSet::boson(1, cutoff)?;
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let mut amps = Vec::with_capacity(cutoff);
    let mut power = C64::new(1.0, 0.0);
    let mut sqrt_fact = 1.0;
    for n in 0..cutoff {
        if n > 0 {
            power *= alpha;
            sqrt_fact *= (n as f64).sqrt();
        }
        amps.push(power * (prefactor / sqrt_fact));
    }
    StateVector::from_dense(basis, amps)
}

/// Bound on `‖a|α⟩ − α|α⟩‖` for the truncated expansion. Only the top
/// retained level contributes, giving `|α|·|c_{cutoff−1}|`; a roundoff floor
/// of 1e−14 is added.
pub fn boson_eigen_residual_bound(alpha: C64, cutoff: usize) -> f64 {
    alpha.norm() * poisson_tail(alpha.norm(), cutoff - 1).sqrt() + 1e-14
}

/// `cos|α| |0⟩ + sin|α| e^{i arg α} |1⟩` on a single fermion mode.
pub fn fermion_displaced(alpha: C64) -> StateVector {
    let basis = BasisSet::fermion(1).expect("one fermion mode");
    let (r, phase) = alpha.to_polar();
    StateVector::from_dense(basis, vec![C64::new(r.cos(), 0.0), C64::from_polar(r.sin(), phase)])
        .expect("dimension 2")
}

/// Result of minimizing `‖c_k|u⟩ − β|u⟩‖` over complex `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub beta_min: C64,
    pub residual: f64,
    /// Smallest ε for which the state satisfies the ε-coherence bound.
    pub epsilon_threshold: f64,
    pub occupation: f64,
}

impl EpsilonReport {
    pub fn qualifies(&self, epsilon: f64) -> bool {
        self.residual <= epsilon
    }
}

/// The minimizer is the projection `β = ⟨u|c_k|u⟩/⟨u|u⟩`.
pub fn epsilon_residual(state: &StateVector, mode: usize) -> Result<EpsilonReport> {
    let lowered = state.apply_annihilation(mode)?;
    let norm_sqr = state.norm_sqr();
    let beta = state.inner(&lowered)? / norm_sqr;
    let mut diff = lowered.clone();
    diff.add_scaled(-beta, state)?;
    let residual = diff.norm() / norm_sqr.sqrt();
    Ok(EpsilonReport {
        beta_min: beta,
        residual,
        epsilon_threshold: residual,
        occupation: lowered.norm_sqr() / norm_sqr,
    })
}

/// Grid search for `argmin_β ‖c_k|u⟩ − β|u⟩‖`, zooming in until the grid
/// spacing drops below `resolution`. Independent check of the projection.
pub fn scan_beta_minimum(state: &StateVector, mode: usize, resolution: f64) -> Result<(C64, f64)> {
    let lowered = state.apply_annihilation(mode)?;
    let eval = |beta: C64| -> Result<f64> {
        let mut d = lowered.clone();
        d.add_scaled(-beta, state)?;
        Ok(d.norm() / state.norm())
    };
    let mut center = C64::new(0.0, 0.0);
    let mut half_width = 1.0;
    let steps = 20;
    loop {
        let spacing = 2.0 * half_width / steps as f64;
        let mut best = (center, eval(center)?);
        for a in 0..=steps {
            for b in 0..=steps {
                let beta = center
                    + C64::new(-half_width + a as f64 * spacing, -half_width + b as f64 * spacing);
                let value = eval(beta)?;
                if value < best.1 {
                    best = (beta, value);
                }
            }
        }
        center = best.0;
        if spacing < resolution {
            return Ok(best);
        }
        half_width = 2.0 * spacing;
    }
}

/// Inversions of the occupied modes between canonical order and the
/// permutation order, as a bitmask table: `table[a]` holds the modes `b > a`
/// that act before `a` in the permutation.
fn inversion_masks(perm: &PermutationSpec) -> Vec<u64> {
    let pos = perm.positions();
    let n = perm.len();
    (0..n)
        .map(|a| {
            (a + 1..n).filter(|&b| pos[b] < pos[a]).fold(0u64, |m, b| m | (1u64 << b))
        })
        .collect()
}

fn check_lengths(alphas: &[C64], perm: &PermutationSpec) -> Result<()> {
    if alphas.len() != perm.len() {
        return Err(Error::LengthMismatch { expected: alphas.len(), got: perm.len() });
    }
    if alphas.is_empty() {
        return Err(Error::NoModes);
    }
    Ok(())
}

/// Closed-form amplitude of the ordered product state on the basis state
/// whose occupied modes are `occupied`. Works for any mode count.
pub fn permutation_ordered_amplitude(
    alphas: &[C64],
    perm: &PermutationSpec,
    occupied: &[usize],
) -> Result<C64> {
    check_lengths(alphas, perm)?;
    let mut is_occupied = vec![false; alphas.len()];
    for &m in occupied {
        if m >= alphas.len() {
            return Err(Error::ModeOutOfRange { mode: m, num_modes: alphas.len() });
        }
        if is_occupied[m] {
            return Err(Error::InvalidOccupation { mode: m, occupation: 2 });
        }
        is_occupied[m] = true;
    }
    let in_order: Vec<usize> =
        perm.order().iter().copied().filter(|&m| is_occupied[m]).collect();
    let sign = if crate::permutation::sort_parity(&in_order) == 0 { 1.0 } else { -1.0 };
    let mut amp = C64::new(sign, 0.0);
    for (k, alpha) in alphas.iter().enumerate() {
        let (r, phase) = alpha.to_polar();
        amp *= if is_occupied[k] { C64::from_polar(r.sin(), phase) } else { C64::new(r.cos(), 0.0) };
    }
    Ok(amp)
}

/// `D_{P_1} D_{P_2} ⋯ D_{P_N} |0⟩` with `D_k = exp(α_k c†_k − α_k* c_k)`,
/// built from the closed-form subset amplitudes.
pub fn permutation_ordered_state(alphas: &[C64], perm: &PermutationSpec) -> Result<StateVector> {
    check_lengths(alphas, perm)?;
    let n = alphas.len();
    if n > MAX_EXPLICIT_MODES {
        return Err(Error::SizeGuard {
            what: "explicit permutation-ordered state",
            size: n,
            limit: MAX_EXPLICIT_MODES,
        });
    }
    let basis = BasisSet::fermion(n)?;
    let masks = inversion_masks(perm);
    let factors: Vec<(C64, C64)> = alphas
        .iter()
        .map(|a| {
            let (r, phase) = a.to_polar();
            (C64::new(r.cos(), 0.0), C64::from_polar(r.sin(), phase))
        })
        .collect();
    let amps = (0..basis.dim())
        .map(|index| {
            let mut inversions = 0u32;
            let mut amp = C64::new(1.0, 0.0);
            for (k, (empty, full)) in factors.iter().enumerate() {
                if index >> k & 1 == 1 {
                    inversions += (index as u64 & masks[k]).count_ones();
                    amp *= full;
                } else {
                    amp *= empty;
                }
            }
            if inversions % 2 == 1 {
                -amp
            } else {
                amp
            }
        })
        .collect();
    StateVector::from_dense(basis, amps)
}

/// The same state from successive displacement exponentials, rightmost
/// factor first. Used as an oracle for [`permutation_ordered_state`].
pub fn permutation_ordered_state_sequential(
    alphas: &[C64],
    perm: &PermutationSpec,
    tol: f64,
) -> Result<StateVector> {
    check_lengths(alphas, perm)?;
    let basis = BasisSet::fermion(alphas.len())?;
    let mut state = StateVector::vacuum(basis);
    for &mode in perm.order().iter().rev() {
        state = apply_generator_exponential(
            &state,
            &GeneratorSpec::displacement(mode, alphas[mode]),
            tol,
        )?;
    }
    Ok(state)
}

/// Normalized `Σ_P |α⃗⟩_P` over all `N!` orderings.
pub fn permutation_averaged_state(alphas: &[C64]) -> Result<StateVector> {
    let n = alphas.len();
    if n == 0 {
        return Err(Error::NoModes);
    }
    if n > MAX_AVERAGED_MODES {
        return Err(Error::SizeGuard {
            what: "permutation average",
            size: n,
            limit: MAX_AVERAGED_MODES,
        });
    }
    let basis = BasisSet::fermion(n)?;
    let mut sum = StateVector::zero(basis);
    for order in all_permutations(n) {
        let perm = PermutationSpec::explicit(order)?;
        sum.add_scaled(C64::new(1.0, 0.0), &permutation_ordered_state(alphas, &perm)?)?;
    }
    Ok(sum.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::BasisState;

    fn real(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn coherent_vacuum_and_amplitudes() {
        let vac = boson_coherent(real(0.0), 5).unwrap();
        assert_eq!(vac.amplitude(0), real(1.0));
        assert_eq!(vac.norm(), 1.0);
        let one = boson_coherent(real(1.0), 25).unwrap();
        let expected = (-0.5f64).exp() / 2f64.sqrt();
        assert!((one.amplitude(2) - real(expected)).norm() < 1e-15);
    }

    #[test]
    fn coherent_mean_number() {
        let s = boson_coherent(real(0.5), 20).unwrap();
        let mean: f64 = s.entries().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        assert!((mean - 0.25).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_cutoff_guard() {
        match boson_coherent(real(2.0), 8) {
            Err(Error::CutoffTooSmall { tail, .. }) => assert!(tail > 1e-10),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn poisson_tail_matches_complement() {
        let direct = poisson_tail(1.0, 3);
        let head: f64 = (0..3).map(|n| (-1f64).exp() / ln_factorial(n).exp()).sum();
        assert!((direct - (1.0 - head)).abs() < 1e-14);
    }

    #[test]
    fn displaced_states() {
        assert_eq!(fermion_displaced(real(0.0)).amplitude(0), real(1.0));
        let s = fermion_displaced(real(0.166));
        assert!((s.amplitude(1).norm_sqr() - 0.166f64.sin().powi(2)).abs() < 1e-15);
        let full = fermion_displaced(C64::new(0.0, std::f64::consts::FRAC_PI_2));
        assert!((full.amplitude(1).norm_sqr() - 1.0).abs() < 1e-15);
        assert!(full.amplitude(0).norm() < 1e-15);
    }

    #[test]
    fn vacuum_epsilon_report() {
        let vac = StateVector::vacuum(BasisSet::fermion(1).unwrap());
        let rep = epsilon_residual(&vac, 0).unwrap();
        assert_eq!(rep.beta_min, real(0.0));
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn two_mode_orders_differ_in_sign() {
        let a = 0.4;
        let alphas = [real(a), real(a)];
        let id = permutation_ordered_state(&alphas, &PermutationSpec::identity(2)).unwrap();
        let swap =
            permutation_ordered_state(&alphas, &PermutationSpec::explicit(vec![1, 0]).unwrap())
                .unwrap();
        let both = BasisState::new(vec![1, 1]);
        let s2 = a.sin() * a.sin();
        assert!((id.amplitude_of(&both).unwrap() - real(s2)).norm() < 1e-15);
        assert!((swap.amplitude_of(&both).unwrap() - real(-s2)).norm() < 1e-15);
        let single = BasisState::new(vec![1, 0]);
        assert!((id.amplitude_of(&single).unwrap() - real(a.sin() * a.cos())).norm() < 1e-15);
    }

    #[test]
    fn amplitude_callback_matches_vector() {
        let alphas = [C64::new(0.2, 0.1), C64::new(-0.3, 0.2), C64::new(0.5, -0.4)];
        let perm = PermutationSpec::explicit(vec![2, 0, 1]).unwrap();
        let state = permutation_ordered_state(&alphas, &perm).unwrap();
        for index in 0..8usize {
            let occupied: Vec<usize> = (0..3).filter(|k| index >> k & 1 == 1).collect();
            let amp = permutation_ordered_amplitude(&alphas, &perm, &occupied).unwrap();
            assert!((amp - state.amplitude(index)).norm() < 1e-15);
        }
    }

    #[test]
    fn guards() {
        let alphas = vec![real(0.1); 3];
        assert!(matches!(
            permutation_ordered_state(&alphas, &PermutationSpec::identity(2)),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            permutation_averaged_state(&[real(0.1); 9]),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            permutation_ordered_state(&vec![real(0.1); 21], &PermutationSpec::identity(21)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn averaged_single_mode_is_displaced() {
        let alpha = C64::new(0.3, 0.2);
        let avg = permutation_averaged_state(&[alpha]).unwrap();
        assert!(avg.distance(&fermion_displaced(alpha)).unwrap() < 1e-15);
    }
}
