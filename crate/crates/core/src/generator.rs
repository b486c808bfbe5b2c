//! Exponentials of linear and quadratic ladder-operator generators applied
//! directly to state vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Ladder, Statistics, StateVector, C64};

pub const DEFAULT_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermKind {
    Create(usize),
    Annihilate(usize),
    /// `a†_i a†_j`
    CreateCreate(usize, usize),
    /// `a†_i a_j`
    CreateAnnihilate(usize, usize),
    /// `a_i a_j`
    AnnihilateAnnihilate(usize, usize),
}

impl TermKind {
    pub fn word(&self) -> Vec<Ladder> {
        use Ladder::*;
        match *self {
            TermKind::Create(k) => vec![Create(k)],
            TermKind::Annihilate(k) => vec![Annihilate(k)],
            TermKind::CreateCreate(i, j) => vec![Create(i), Create(j)],
            TermKind::CreateAnnihilate(i, j) => vec![Create(i), Annihilate(j)],
            TermKind::AnnihilateAnnihilate(i, j) => vec![Annihilate(i), Annihilate(j)],
        }
    }

    /// Operator adjoint of the term. For fermions `(c_i c_j)† = c†_j c†_i`,
    /// which is the same ordering rule as for bosons.
    pub fn adjoint(&self) -> TermKind {
        match *self {
            TermKind::Create(k) => TermKind::Annihilate(k),
            TermKind::Annihilate(k) => TermKind::Create(k),
            TermKind::CreateCreate(i, j) => TermKind::AnnihilateAnnihilate(j, i),
            TermKind::CreateAnnihilate(i, j) => TermKind::CreateAnnihilate(j, i),
            TermKind::AnnihilateAnnihilate(i, j) => TermKind::CreateCreate(j, i),
        }
    }

    fn modes(&self) -> Vec<usize> {
        self.word().iter().map(|l| l.mode()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorTerm {
    pub coefficient: C64,
    pub kind: TermKind,
}

/// A sum of ladder monomials `G = Σ c_t · term_t`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub terms: Vec<GeneratorTerm>,
    pub anti_hermitian: bool,
}

impl GeneratorSpec {
    pub fn new(terms: Vec<GeneratorTerm>) -> Self {
        GeneratorSpec { terms, anti_hermitian: false }
    }

    /// Builds `Σ (c·T − c*·T†)` from `(c, T)` pairs, which is anti-Hermitian.
    pub fn anti_hermitian(pairs: &[(C64, TermKind)]) -> Self {
        let mut terms = Vec::with_capacity(2 * pairs.len());
        for &(c, kind) in pairs {
            terms.push(GeneratorTerm { coefficient: c, kind });
            terms.push(GeneratorTerm { coefficient: -c.conj(), kind: kind.adjoint() });
        }
        GeneratorSpec { terms, anti_hermitian: true }
    }

    /// `α a†_k − α* a_k`
    pub fn displacement(mode: usize, alpha: C64) -> Self {
        Self::anti_hermitian(&[(alpha, TermKind::Create(mode))])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient == C64::new(0.0, 0.0))
    }

    /// Whether every term has a partner `-c*·T†`.
    pub fn has_conjugate_pairs(&self) -> bool {
        self.terms.iter().all(|t| {
            self.terms.iter().any(|u| {
                u.kind == t.kind.adjoint() && (u.coefficient + t.coefficient.conj()).norm() < 1e-15
            })
        })
    }

    fn max_mode(&self) -> Option<usize> {
        self.terms.iter().flat_map(|t| t.kind.modes()).max()
    }

    /// Upper bound on the operator norm of `G` on the given space.
    fn norm_bound(&self, state: &StateVector) -> f64 {
        let per_ladder = match state.statistics() {
            Statistics::Fermion => 1.0,
            Statistics::Boson => ((state.basis().radix() - 1) as f64).sqrt(),
        };
        self.terms
            .iter()
            .map(|t| t.coefficient.norm() * per_ladder.powi(t.kind.word().len() as i32))
            .sum()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero(*state.basis());
        if !state.is_dense() {
            out = out.into_sparse();
        }
        for term in &self.terms {
            if term.coefficient == C64::new(0.0, 0.0) {
                continue;
            }
            let image = state.apply_word(&term.kind.word())?;
            out.add_scaled(term.coefficient, &image)?;
        }
        Ok(out)
    }
}

pub fn apply_generator_exponential(
    state: &StateVector,
    generator: &GeneratorSpec,
    tol: f64,
) -> Result<StateVector> {
    apply_generator_exponential_with(state, generator, tol, DEFAULT_MAX_TERMS)
}

/// `exp(G)|state⟩` by a Taylor series split into `s` steps of `exp(G/s)`,
/// with `s` chosen so that `‖G/s‖ ≤ 1`. Each step stops once a term's norm
/// falls below `tol` times the input norm.
pub fn apply_generator_exponential_with(
    state: &StateVector,
    generator: &GeneratorSpec,
    tol: f64,
    max_terms: usize,
) -> Result<StateVector> {
    if let Some(m) = generator.max_mode() {
        if m >= state.basis().num_modes() {
            return Err(Error::ModeOutOfRange { mode: m, num_modes: state.basis().num_modes() });
        }
    }
    if generator.is_zero() {
        return Ok(state.clone());
    }
    let bound = generator.norm_bound(state);
    let steps = bound.ceil().max(1.0) as usize;
    let scale = C64::new(1.0 / steps as f64, 0.0);
    let scaled = GeneratorSpec {
        terms: generator
            .terms
            .iter()
            .map(|t| GeneratorTerm { coefficient: t.coefficient * scale, kind: t.kind })
            .collect(),
        anti_hermitian: generator.anti_hermitian,
    };

    let mut current = state.clone();
    for _ in 0..steps {
        let reference = current.norm().max(f64::MIN_POSITIVE);
        let mut sum = current.clone();
        let mut term = current;
        let mut converged = false;
        let mut last = f64::INFINITY;
        for k in 1..=max_terms {
            term = scaled.apply(&term)?.scaled(C64::new(1.0 / k as f64, 0.0));
            sum.add_scaled(C64::new(1.0, 0.0), &term)?;
            last = term.norm();
            if last <= tol * reference {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { terms: max_terms, residual: last });
        }
        current = sum;
    }
    Ok(current)
}
