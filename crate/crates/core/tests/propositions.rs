use coherlab::chaotic::ChaoticModeSpec;
use coherlab::coherent::{boson_coherent, fermion_displaced, permutation_averaged_state};
use coherlab::correlators::Source;
use coherlab::coupler::CouplerSpec;
use coherlab::fock::{tensor_product, BasisSet, BasisState, StateVector, C64};
use coherlab::modes::ModeBasis;
use coherlab::propositions::*;

fn two_fermions() -> StateVector {
    let b = BasisSet::fermion(3).unwrap();
    StateVector::from_entries(
        b,
        [
            (BasisState::new(vec![1, 1, 0]), C64::new(0.6, 0.0)),
            (BasisState::new(vec![1, 0, 1]), C64::new(0.0, 0.48)),
            (BasisState::new(vec![0, 1, 1]), C64::new(0.64, 0.0)),
        ],
    )
    .unwrap()
}

#[test]
fn two_fermion_state_vanishes_at_coincidence() {
    let s = two_fermions();
    let r = check_coincidence_vanishing(Source::Pure(&s), &ModeBasis::unit_comb(3), 2, 10).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.notes);
    assert!(r.witnesses["value_at_coincidence"].abs() <= 1e-12);
    assert_eq!(r.witnesses["leading_exponent"], 2.0);
    assert!(r.sampled_certification);
}

#[test]
fn boson_coherent_does_not_vanish_at_coincidence() {
    let s = boson_coherent(C64::new(0.7, 0.2), 25).unwrap();
    let r = check_coincidence_vanishing(Source::Pure(&s), &ModeBasis::unit_comb(1), 2, 8).unwrap();
    assert_eq!(r.status, CheckStatus::Fail);
    assert!(r.witnesses["value_at_coincidence"] > 0.1);
}

#[test]
fn coincidence_rejects_first_order() {
    let s = fermion_displaced(C64::new(0.3, 0.0));
    assert!(check_coincidence_vanishing(Source::Pure(&s), &ModeBasis::unit_comb(1), 1, 8).is_err());
}

#[test]
fn single_particle_state_has_zero_second_order() {
    let b = BasisSet::fermion(3).unwrap();
    let s = StateVector::from_entries(
        b,
        [
            (BasisState::new(vec![1, 0, 0]), C64::new(0.6, 0.0)),
            (BasisState::new(vec![0, 0, 1]), C64::new(0.0, 0.8)),
        ],
    )
    .unwrap();
    let r = check_factorization_impossibility(Source::Pure(&s), &ModeBasis::unit_comb(3), 2, 4)
        .unwrap();
    assert_eq!(r.status, CheckStatus::Pass);
    assert!(r.witnesses["max_abs_entry"] <= 1e-12);
}

#[test]
fn two_fermion_state_does_not_factorize() {
    let s = two_fermions();
    let r = check_factorization_impossibility(Source::Pure(&s), &ModeBasis::unit_comb(3), 2, 4)
        .unwrap();
    assert_eq!(r.status, CheckStatus::Pass);
    assert!(r.witnesses["rank_one_misfit"] > 0.01);
}

#[test]
fn boson_product_factorizes() {
    let a = boson_coherent(C64::new(0.5, 0.1), 20).unwrap();
    let b = boson_coherent(C64::new(-0.2, 0.4), 20).unwrap();
    let s = tensor_product(&a, &b).unwrap();
    let r = check_factorization_impossibility(Source::Pure(&s), &ModeBasis::unit_comb(2), 2, 4)
        .unwrap();
    assert_eq!(r.status, CheckStatus::Fail);
    assert!(r.witnesses["rank_one_misfit"] < FACTORIZATION_PASS);
}

#[test]
fn single_occupied_mode_satisfies_pair_annihilation() {
    let b = BasisSet::fermion(3).unwrap();
    let s = StateVector::number_state(b, &BasisState::new(vec![0, 1, 0])).unwrap();
    let r = check_pair_annihilation(&s, &ModeBasis::unit_comb(3), 0.13, 0.77).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.notes);
    assert!(r.witnesses["abs_gamma"] > 1.0 - 1e-12);
}

#[test]
fn permutation_averaged_state_is_supported_on_one_particle() {
    let alphas = [C64::new(0.4, 0.1), C64::new(0.2, -0.3), C64::new(0.5, 0.0)];
    let s = permutation_averaged_state(&alphas).unwrap();
    let modes = ModeBasis::unit_comb(3);
    let r = check_single_particle_support(Source::Pure(&s), &modes, 6).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.notes);
    assert!(r.witnesses["multi_particle_weight"] <= 1e-12);
}

#[test]
fn state_with_pair_component_fails_premise() {
    let b = BasisSet::fermion(2).unwrap();
    let s = StateVector::from_dense(
        b,
        vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
    )
    .unwrap();
    let r = check_single_particle_support(Source::Pure(&s), &ModeBasis::unit_comb(2), 6).unwrap();
    assert_eq!(r.status, CheckStatus::NotApplicable);
    assert!(r.witnesses["min_abs_gamma"] < 1.0);
}

#[test]
fn boson_equivalences_hold_at_zero_and_larger_alpha() {
    let bs = CouplerSpec::balanced((0, 1));
    let zero = check_boson_equivalences(C64::new(0.0, 0.0), 10, &bs).unwrap();
    assert_eq!(zero.status, CheckStatus::Pass, "{:?}", zero.notes);
    let r = check_boson_equivalences(C64::from_polar(0.8, 0.4), 30, &bs).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.notes);
    assert!(r.witnesses["coupler_fidelity"] >= 1.0 - 1e-8);
    let one = check_boson_equivalences(C64::new(1.0, 0.0), 30, &bs).unwrap();
    assert!(one.witnesses["misfit_order_2"] < 1e-6);
    assert!(check_boson_equivalences(C64::new(2.5, 0.0), 40, &bs).is_err());
}

#[test]
fn chaotic_three_modes_are_order_invariant() {
    let spec = ChaoticModeSpec::new(vec![0.1, 0.35, 0.6]);
    let r = check_mixture_order_invariance(&spec).unwrap();
    assert_eq!(r.status, CheckStatus::Pass, "{:?}", r.notes);
    assert!(r.witnesses["superposition_grid_difference"] > 1e-3);
    assert!(check_mixture_order_invariance(&ChaoticModeSpec::uniform(7, 0.1)).is_err());
}

#[test]
fn reports_are_deterministic() {
    let s = two_fermions();
    let modes = ModeBasis::unit_comb(3);
    let a = check_factorization_impossibility(Source::Pure(&s), &modes, 2, 4).unwrap();
    let b = check_factorization_impossibility(Source::Pure(&s), &modes, 2, 4).unwrap();
    assert_eq!(a, b);
}
