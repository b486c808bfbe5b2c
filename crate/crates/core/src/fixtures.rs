//! Fixture sets for the structural checks, read from TOML.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaotic::{chaotic_mixture, ChaoticModeSpec, WeightedMixture};
use crate::coherent::{boson_coherent, fermion_displaced, permutation_ordered_state};
use crate::correlators::Source;
use crate::coupler::{couple, CouplerSpec};
use crate::error::{Error, Result};
use crate::fock::{tensor_product, BasisSet, Statistics, StateVector, C64};
use crate::generator::DEFAULT_TOLERANCE;
use crate::modes::ModeBasis;
use crate::permutation::{PermutationSpec, SplitMix64};
use crate::propositions::{
    check_boson_equivalences, check_coincidence_vanishing, check_factorization_impossibility,
    check_mixture_order_invariance, check_pair_annihilation, check_single_particle_support,
    CheckReport, CheckStatus,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const STANDARD_FIXTURES: &str = include_str!("../fixtures/standard.toml");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Coincidence,
    Factorization,
    PairAnnihilation,
    SingleParticleSupport,
    BosonEquivalences,
    MixtureOrderInvariance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    /// One fermion mode, `cos|α| + sin|α| e^{iφ} c†`.
    Displaced { alpha: f64, phase: f64 },
    /// Random normalized fermion state on every basis vector.
    Generic { modes: usize, seed: u64 },
    PermutationOrdered { modes: usize, alpha: f64, phase: f64, perm: String },
    /// Fermion chaotic mixture with uniform mean occupation.
    Chaotic { modes: usize, mean: f64 },
    /// `|α⟩|0⟩` through a balanced coupler.
    BosonCoherent { alpha: f64, phase: f64, cutoff: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub coincidence_order: usize,
    pub coincidence_samples: usize,
    pub factorization_order: usize,
    pub factorization_grid: usize,
    pub support_grid: usize,
    pub pair_points: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    pub state: StateSpec,
    pub expect: BTreeMap<CheckKind, CheckStatus>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSet {
    pub schema_version: u32,
    pub settings: Settings,
    #[serde(rename = "fixture")]
    pub fixtures: Vec<Fixture>,
}

impl FixtureSet {
    pub fn parse(text: &str) -> Result<Self> {
        let set: FixtureSet = toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        if set.schema_version != SCHEMA_VERSION {
            return Err(Error::Fixture(format!(
                "schema version {} unsupported (expected {SCHEMA_VERSION})",
                set.schema_version
            )));
        }
        Ok(set)
    }

    pub fn standard() -> Self {
        Self::parse(STANDARD_FIXTURES).expect("bundled fixtures parse")
    }
}

/// A fixture's state, pure or mixed, with its mode functions.
pub enum BuiltState {
    Pure(StateVector),
    Mixture(WeightedMixture, ChaoticModeSpec),
}

pub struct Built {
    pub state: BuiltState,
    pub modes: ModeBasis,
}

impl Built {
    pub fn source(&self) -> Source<'_> {
        match &self.state {
            BuiltState::Pure(s) => Source::Pure(s),
            BuiltState::Mixture(m, _) => Source::Mixture(m),
        }
    }
}

fn generic_state(modes: usize, seed: u64) -> Result<StateVector> {
    let basis = BasisSet::fermion(modes)?;
    let mut rng = SplitMix64::new(seed);
    let amps: Vec<C64> = (0..basis.dim())
        .map(|_| C64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    Ok(StateVector::from_dense(basis, amps)?.normalized())
}

pub fn build_state(spec: &StateSpec) -> Result<Built> {
    Ok(match *spec {
        StateSpec::Displaced { alpha, phase } => Built {
            state: BuiltState::Pure(fermion_displaced(C64::from_polar(alpha, phase))),
            modes: ModeBasis::unit_comb(1),
        },
        StateSpec::Generic { modes, seed } => Built {
            state: BuiltState::Pure(generic_state(modes, seed)?),
            modes: ModeBasis::unit_comb(modes),
        },
        StateSpec::PermutationOrdered { modes, alpha, phase, ref perm } => {
            let perm = PermutationSpec::parse(perm, modes)?;
            let alphas = vec![C64::from_polar(alpha, phase); modes];
            Built {
                state: BuiltState::Pure(permutation_ordered_state(&alphas, &perm)?),
                modes: ModeBasis::unit_comb(modes),
            }
        }
        StateSpec::Chaotic { modes, mean } => {
            let spec = ChaoticModeSpec::uniform(modes, mean);
            Built {
                state: BuiltState::Mixture(chaotic_mixture(&spec, Statistics::Fermion, 2)?, spec),
                modes: ModeBasis::unit_comb(modes),
            }
        }
        StateSpec::BosonCoherent { alpha, phase, cutoff } => {
            let single = boson_coherent(C64::from_polar(alpha, phase), cutoff)?;
            let input = tensor_product(&single, &StateVector::vacuum(*single.basis()))?;
            Built {
                state: BuiltState::Pure(couple(&input, &CouplerSpec::balanced((0, 1)), DEFAULT_TOLERANCE)?),
                modes: ModeBasis::unit_comb(2),
            }
        }
    })
}

pub fn run_check(kind: CheckKind, fixture: &Fixture, settings: &Settings) -> Result<CheckReport> {
    let built = build_state(&fixture.state)?;
    let source = built.source();
    let modes = &built.modes;
    match kind {
        CheckKind::Coincidence => check_coincidence_vanishing(
            source,
            modes,
            settings.coincidence_order,
            settings.coincidence_samples,
        ),
        CheckKind::Factorization => check_factorization_impossibility(
            source,
            modes,
            settings.factorization_order,
            settings.factorization_grid,
        ),
        CheckKind::PairAnnihilation => match &built.state {
            BuiltState::Pure(s) => {
                let [x, y] = settings.pair_points.map(|p| p * modes.length());
                check_pair_annihilation(s, modes, x, y)
            }
            BuiltState::Mixture(..) => Err(Error::InvalidArgument(
                "pair-annihilation check needs a pure state".into(),
            )),
        },
        CheckKind::SingleParticleSupport => {
            check_single_particle_support(source, modes, settings.support_grid)
        }
        CheckKind::BosonEquivalences => match fixture.state {
            StateSpec::BosonCoherent { alpha, phase, cutoff } => check_boson_equivalences(
                C64::from_polar(alpha, phase),
                cutoff,
                &CouplerSpec::balanced((0, 1)),
            ),
            _ => Err(Error::InvalidArgument("boson equivalences need a boson fixture".into())),
        },
        CheckKind::MixtureOrderInvariance => match &built.state {
            BuiltState::Mixture(_, spec) => check_mixture_order_invariance(spec),
            BuiltState::Pure(_) => Err(Error::InvalidArgument(
                "ordering invariance check needs a chaotic fixture".into(),
            )),
        },
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Outcome {
    pub fixture: String,
    pub check: CheckKind,
    pub expected: CheckStatus,
    pub report: CheckReport,
}

impl Outcome {
    pub fn as_expected(&self) -> bool {
        self.report.status == self.expected
    }
}

/// Runs every expected check of every fixture, in parallel. Outcomes come
/// back in fixture order, then check order.
pub fn run_suite(set: &FixtureSet) -> Result<Vec<Outcome>> {
    let jobs: Vec<(&Fixture, CheckKind, CheckStatus)> = set
        .fixtures
        .iter()
        .flat_map(|f| f.expect.iter().map(move |(&k, &s)| (f, k, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(fixture, check, expected)| {
            Ok(Outcome {
                fixture: fixture.name.clone(),
                check,
                expected,
                report: run_check(check, fixture, &set.settings)?,
            })
        })
        .collect()
}
