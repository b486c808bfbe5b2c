//! Library results against independent constructions and frozen reference
//! values computed with dense Jordan–Wigner matrices and a Padé exponential.

use coherlab::chaotic::{
    chaotic_mixture, chaotic_nth_order, determinant, permanent, ChaoticModeSpec,
};
use coherlab::coherent::{
    boson_coherent, epsilon_residual, fermion_displaced, permutation_ordered_state,
    permutation_ordered_state_sequential, scan_beta_minimum,
};
use coherlab::correlators::{correlator, first_order_closed_form, Source};
use coherlab::coupler::{couple, CouplerSpec};
use coherlab::fock::{tensor_product, BasisSet, BasisState, Statistics, StateVector, C64};
use coherlab::modes::{ModeBasis, PointTuple};
use coherlab::permutation::{all_permutations, sort_parity, PermutationSpec};
use nalgebra::DMatrix;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn reference_state() -> (Vec<C64>, PermutationSpec) {
    let alphas = vec![
        c(0.3, 0.0),
        C64::from_polar(0.2, 0.5),
        C64::from_polar(0.4, -1.0),
    ];
    (alphas, PermutationSpec::explicit(vec![2, 0, 1]).unwrap())
}

#[test]
fn ordered_state_matches_frozen_amplitudes() {
    let expected = [
        c(0.8623832961411673, 0.0),
        c(0.2667664145542938, 0.0),
        c(0.1534134973350076, 0.08381017556975837),
        c(0.04745635590510718, 0.025925525389873125),
        c(0.1969995208482485, -0.30680857552237667),
        c(-0.06093909295408999, 0.09490701410016286),
        c(-0.06486218633614628, 0.035434373892148596),
        c(0.02006422546270404, -0.010961136327062398),
    ];
    let (alphas, perm) = reference_state();
    let closed = permutation_ordered_state(&alphas, &perm).unwrap();
    let seq = permutation_ordered_state_sequential(&alphas, &perm, 1e-15).unwrap();
    for (i, e) in expected.iter().enumerate() {
        assert!(close(closed.amplitude(i), *e, 1e-14), "{i}: {}", closed.amplitude(i));
        assert!(close(seq.amplitude(i), *e, 1e-14), "{i}: {}", seq.amplitude(i));
    }
}

#[test]
fn ordered_state_correlators_match_frozen_values() {
    let (alphas, perm) = reference_state();
    let s = permutation_ordered_state(&alphas, &perm).unwrap();
    let modes = ModeBasis::unit_comb(3);
    let g1 = correlator(Source::Pure(&s), &modes, &PointTuple::first(0.1, 0.7)).unwrap().value;
    assert!(close(g1, c(0.28906812564979045, 0.05686542559762499), 1e-13), "{g1}");
    let closed = first_order_closed_form(&alphas, &perm, &modes, 0.1, 0.7).unwrap().value;
    assert!(close(closed, g1, 1e-13));
    let g2 = correlator(Source::Pure(&s), &modes, &PointTuple::diagonal(vec![0.1, 0.45]))
        .unwrap()
        .value;
    assert!(close(g2, c(0.020644705661811757, 0.0), 1e-13), "{g2}");
}

#[test]
fn chaotic_correlators_match_frozen_values() {
    let spec = ChaoticModeSpec::new(vec![0.1, 0.3, 0.5]);
    let modes = ModeBasis::unit_comb(3);
    let mix = chaotic_mixture(&spec, Statistics::Fermion, 2).unwrap();
    let cases = [
        (PointTuple::diagonal(vec![0.2, 0.5]), c(0.6521478174124758, 0.0)),
        (
            PointTuple::new(vec![0.2, 0.5, 0.8], vec![0.3, 0.5, 0.9]).unwrap(),
            c(0.09817627457812106, 0.30215550401028046),
        ),
    ];
    for (pts, expected) in cases {
        let brute = correlator(Source::Mixture(&mix), &modes, &pts).unwrap().value;
        let wick = chaotic_nth_order(&spec, &modes, &pts, Statistics::Fermion).unwrap().value;
        assert!(close(brute, expected, 1e-13), "{brute}");
        assert!(close(wick, expected, 1e-13), "{wick}");
    }
}

#[test]
fn permanent_and_determinant_match_definitions() {
    let m = [
        c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0),
        c(0.3, -0.1), c(2.0, 0.0), c(1.0, 0.0),
        c(0.0, 0.0), c(0.0, 1.0), c(-0.5, 0.5),
    ];
    assert!(close(permanent(&m, 3).unwrap(), c(-4.75, 0.0), 1e-13));
    assert!(close(determinant(&m, 3).unwrap(), c(-0.65, -2.2), 1e-13));

    // n! sums on pseudo-random matrices up to 6×6
    let mut seed = 0x2545_F491_4F6C_DD1Du64;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    for n in 1..=6 {
        let a: Vec<C64> = (0..n * n).map(|_| c(next(), next())).collect();
        let mut perm_sum = c(0.0, 0.0);
        let mut det_sum = c(0.0, 0.0);
        for p in all_permutations(n) {
            let prod: C64 = (0..n).map(|i| a[i * n + p[i]]).product();
            perm_sum += prod;
            det_sum += if sort_parity(&p) == 0 { prod } else { -prod };
        }
        assert!(close(permanent(&a, n).unwrap(), perm_sum, 1e-12), "perm n={n}");
        assert!(close(determinant(&a, n).unwrap(), det_sum, 1e-12), "det n={n}");
    }
}

#[test]
fn epsilon_projection_agrees_with_grid_scan() {
    for &(m, ph) in &[(0.166, 0.0), (0.5, 1.3), (0.7, -2.0)] {
        let s = fermion_displaced(C64::from_polar(m, ph));
        let rep = epsilon_residual(&s, 0).unwrap();
        let (beta, residual) = scan_beta_minimum(&s, 0, 1e-9).unwrap();
        assert!((beta - rep.beta_min).norm() < 1e-8);
        assert!((residual - rep.residual).abs() < 1e-12);
        assert!((rep.residual - m.sin().powi(2)).abs() < 1e-14);
    }
}

fn boson_annihilator(cutoff: usize) -> DMatrix<C64> {
    DMatrix::from_fn(cutoff, cutoff, |r, col| {
        if col == r + 1 { c((col as f64).sqrt(), 0.0) } else { c(0.0, 0.0) }
    })
}

#[test]
fn boson_coherent_matches_displacement_matrix() {
    let cutoff = 40;
    let alpha = C64::from_polar(0.9, 0.6);
    let a = boson_annihilator(cutoff);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    let d = gen.exp();
    let state = boson_coherent(alpha, cutoff).unwrap();
    // columns beyond the first few are distorted by the cutoff
    for n in 0..20 {
        assert!(close(state.amplitude(n), d[(n, 0)], 1e-12), "{n}");
    }
}

#[test]
fn coupler_matches_two_mode_matrix_exponential() {
    let cutoff = 5;
    let a = boson_annihilator(cutoff);
    let id = DMatrix::<C64>::identity(cutoff, cutoff);
    // index = n0 + cutoff·n1, so mode 0 is the fast (right) Kronecker factor
    let a0 = id.kronecker(&a);
    let a1 = a.kronecker(&id);
    let t = C64::from_polar(0.8, 0.3);
    let r = C64::from_polar(0.6, -0.7);
    let spec = CouplerSpec::new(t, r, (0, 1)).unwrap();
    let (theta, chi, tau) = spec.generator_angles();
    let e = C64::from_polar(theta, chi);
    let gen = (a0.adjoint() * &a1) * e - (a1.adjoint() * &a0) * e.conj();
    let u = (a0.adjoint() * &a0 * c(0.0, tau)).exp() * gen.exp();
    let basis = BasisSet::boson(2, cutoff).unwrap();
    let input =
        StateVector::number_state(basis, &BasisState::new(vec![1, 1])).unwrap();
    let out = couple(&input, &spec, 1e-15).unwrap();
    let col = 1 + cutoff;
    for i in 0..basis.dim() {
        assert!(close(out.amplitude(i), u[(i, col)], 1e-12), "{i}");
    }
}

#[test]
fn balanced_coupler_bunches_boson_pairs() {
    let basis = BasisSet::boson(2, 4).unwrap();
    let input = StateVector::number_state(basis, &BasisState::new(vec![1, 1])).unwrap();
    let out = couple(&input, &CouplerSpec::balanced((0, 1)), 1e-15).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!(out.amplitude_of(&BasisState::new(vec![1, 1])).unwrap().norm() < 1e-14);
    assert!(close(out.amplitude_of(&BasisState::new(vec![2, 0])).unwrap(), c(-h, 0.0), 1e-13));
    assert!(close(out.amplitude_of(&BasisState::new(vec![0, 2])).unwrap(), c(h, 0.0), 1e-13));
}

#[test]
fn fermion_pair_through_coupler_is_unchanged_up_to_phase() {
    let basis = BasisSet::fermion(2).unwrap();
    let input = StateVector::number_state(basis, &BasisState::new(vec![1, 1])).unwrap();
    let t = C64::from_polar(0.6, 0.2);
    let r = C64::from_polar(0.8, 1.1);
    let out = couple(&input, &CouplerSpec::new(t, r, (0, 1)).unwrap(), 1e-15).unwrap();
    assert!((out.amplitude(3).norm() - 1.0).abs() < 1e-13);
}

#[test]
fn coherent_product_splits_into_attenuated_coherent_states() {
    let alpha = c(0.8, 0.0);
    let cutoff = 30;
    let single = boson_coherent(alpha, cutoff).unwrap();
    let input = tensor_product(&single, &StateVector::vacuum(*single.basis())).unwrap();
    let spec = CouplerSpec::balanced((0, 1));
    let out = couple(&input, &spec, 1e-15).unwrap();
    let expected = tensor_product(
        &boson_coherent(spec.t * alpha, cutoff).unwrap(),
        &boson_coherent(spec.r * alpha, cutoff).unwrap(),
    )
    .unwrap();
    assert!(expected.inner(&out).unwrap().norm() >= 1.0 - 1e-8);
}
