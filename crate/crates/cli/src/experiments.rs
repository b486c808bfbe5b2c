use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use anyhow::{Context, Result};
use coherlab::chaotic::{chaotic_first_order, chaotic_nth_order, ChaoticModeSpec};
use coherlab::coherent::{epsilon_residual, fermion_displaced, permutation_ordered_state};
use coherlab::correlators::{
    coherence_grid, second_order_diagonal_grid, GridSource, Source, ZERO_INTENSITY,
};
use coherlab::fixtures::{run_suite, FixtureSet};
use coherlab::modes::{ModeBasis, PointTuple};
use coherlab::permutation::PermutationSpec;
use coherlab::propositions::{EXACT_ZERO, FACTORIZATION_FAIL_FLOOR, FACTORIZATION_PASS, FULL_COHERENCE};
use coherlab::{Statistics, C64};
use serde_json::{json, Value};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{suffixed, Artifact, GridData, Payload, Table};

pub struct Run {
    pub artifacts: Vec<Artifact>,
    pub tolerances: BTreeMap<String, f64>,
    pub summary: BTreeMap<String, Value>,
    /// False when a structural check did not come out as expected.
    pub passed: bool,
}

impl Run {
    fn new() -> Self {
        Run { artifacts: Vec::new(), tolerances: BTreeMap::new(), summary: BTreeMap::new(), passed: true }
    }
}

fn mode_basis(config: &ExperimentConfig) -> Result<ModeBasis> {
    Ok(ModeBasis::comb(config.modes, config.length, config.offset, config.spacing)?)
}

fn alphas(config: &ExperimentConfig) -> Vec<C64> {
    vec![C64::from_polar(config.alpha, config.phase); config.modes]
}

fn diagonal_stats(values: &[f64], g: usize) -> (f64, f64) {
    let mut max_diag = 0.0f64;
    let mut min_off = f64::INFINITY;
    for a in 0..g {
        for b in 0..g {
            let v = values[a * g + b];
            if a == b {
                max_diag = max_diag.max(v);
            } else {
                min_off = min_off.min(v);
            }
        }
    }
    (max_diag, min_off)
}

pub fn run(config: &ExperimentConfig) -> Result<Run> {
    match config.experiment {
        Experiment::Fig1 => fig1(config),
        Experiment::Fig2 => fig2(config),
        Experiment::ChaoticG2 => chaotic_g2(config),
        Experiment::Props => props(config),
        Experiment::EpsScan => eps_scan(config),
    }
}

fn fig1(config: &ExperimentConfig) -> Result<Run> {
    let modes = mode_basis(config)?;
    let alphas = alphas(config);
    let perm = config.permutation()?;
    let grid = coherence_grid(GridSource::PermutationOrdered { alphas: &alphas, perm: &perm }, &modes, config.grid)?;
    let g = grid.size();
    let mut run = Run::new();
    let diag_dev = (0..g).map(|a| (grid.get(a, a) - 1.0).abs()).fold(0.0, f64::max);
    let (_, min_off) = diagonal_stats(&grid.values, g);
    run.summary.insert("max_diagonal_deviation".into(), json!(diag_dev));
    run.summary.insert("min_off_diagonal".into(), json!(min_off));
    run.summary.insert("permutation_order".into(), json!(perm.order()));
    if !perm.is_identity() {
        let identity = PermutationSpec::identity(config.modes);
        let reference = coherence_grid(
            GridSource::PermutationOrdered { alphas: &alphas, perm: &identity },
            &modes,
            config.grid,
        )?;
        run.summary.insert("max_abs_diff_vs_identity".into(), json!(grid.max_abs_diff(&reference)));
    }
    run.tolerances.insert("zero_intensity".into(), ZERO_INTENSITY);
    run.artifacts.push(Artifact {
        path: config.out.clone(),
        quantity: "|gamma(x,y)|^2, squared first-order degree of coherence of the permutation-ordered fermion state (closed form)".into(),
        payload: Payload::Grid(GridData { points: grid.points, values: grid.values }),
    });
    Ok(run)
}

fn fig2(config: &ExperimentConfig) -> Result<Run> {
    let modes = mode_basis(config)?;
    let state = permutation_ordered_state(&alphas(config), &config.permutation()?)?;
    let points = modes.grid(config.grid);
    let gamma2 = second_order_diagonal_grid(Source::Pure(&state), &modes, &points)?;
    let values: Vec<f64> = gamma2.values.iter().map(|v| v * v).collect();
    let (max_diag, _) = diagonal_stats(&values, points.len());
    let mut run = Run::new();
    run.summary.insert("max_diagonal".into(), json!(max_diag));
    run.summary.insert("max_value".into(), json!(values.iter().cloned().fold(0.0, f64::max)));
    run.tolerances.insert("exact_zero".into(), EXACT_ZERO);
    run.artifacts.push(Artifact {
        path: config.out.clone(),
        quantity: "|Gamma2(x,y,y,x)|^2, squared second-order intensity correlator of the permutation-ordered fermion state (brute force)".into(),
        payload: Payload::Grid(GridData { points, values }),
    });
    Ok(run)
}

/// Normalized `g⁽²⁾(x,y) = Γ⁽²⁾(x,y,y,x)/(Γ(x,x)Γ(y,y))` of chaotic states
/// with mean occupation `sin²|α|` per mode.
fn chaotic_g2(config: &ExperimentConfig) -> Result<Run> {
    let modes = mode_basis(config)?;
    let mean = config.alpha.sin().powi(2);
    let spec = ChaoticModeSpec::uniform(config.modes, mean);
    let points = modes.grid(config.grid);
    let g = points.len();
    let intensity: Vec<f64> = points
        .iter()
        .map(|&x| Ok(chaotic_first_order(&spec, &modes, x, x)?.re))
        .collect::<Result<_>>()?;
    if let Some(&i) = intensity.iter().find(|&&i| i <= ZERO_INTENSITY) {
        anyhow::bail!("zero intensity {i:e}; choose a nonzero alpha");
    }
    let mut run = Run::new();
    run.summary.insert("mean_occupation".into(), json!(mean));
    for (stats, label) in [(Statistics::Boson, "boson"), (Statistics::Fermion, "fermion")] {
        let mut values = Vec::with_capacity(g * g);
        for a in 0..g {
            for b in 0..g {
                let pts = PointTuple::diagonal(vec![points[a], points[b]]);
                let v = chaotic_nth_order(&spec, &modes, &pts, stats)?.value.re;
                values.push(v / (intensity[a] * intensity[b]));
            }
        }
        let (max_diag, _) = diagonal_stats(&values, g);
        let min_diag = (0..g).map(|a| values[a * g + a]).fold(f64::INFINITY, f64::min);
        run.summary.insert(format!("{label}_diagonal_max"), json!(max_diag));
        run.summary.insert(format!("{label}_diagonal_min"), json!(min_diag));
        run.artifacts.push(Artifact {
            path: suffixed(&config.out, label),
            quantity: format!("g2(x,y), normalized second-order correlator of the {label} chaotic state (Wick expansion)"),
            payload: Payload::Grid(GridData { points: points.clone(), values }),
        });
    }
    run.summary.insert("cutoff_used".into(), json!(false));
    run.tolerances.insert("zero_intensity".into(), ZERO_INTENSITY);
    Ok(run)
}

fn props(config: &ExperimentConfig) -> Result<Run> {
    let set = match &config.fixtures {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            FixtureSet::parse(&text)?
        }
        None => FixtureSet::standard(),
    };
    let outcomes = run_suite(&set)?;
    let mut run = Run::new();
    let unexpected: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.as_expected())
        .map(|o| format!("{}:{}", o.fixture, serde_json::to_value(o.check).unwrap().as_str().unwrap_or("")))
        .collect();
    run.passed = unexpected.is_empty();
    run.summary.insert("checks".into(), json!(outcomes.len()));
    run.summary.insert("unexpected".into(), json!(unexpected));
    for (k, v) in [
        ("exact_zero", EXACT_ZERO),
        ("factorization_pass", FACTORIZATION_PASS),
        ("factorization_fail_floor", FACTORIZATION_FAIL_FLOOR),
        ("full_coherence", FULL_COHERENCE),
    ] {
        run.tolerances.insert(k.into(), v);
    }
    run.artifacts.push(Artifact {
        path: config.out.clone(),
        quantity: "structural check outcomes on the fixture set".into(),
        payload: Payload::Report(json!({ "passed": run.passed, "outcomes": outcomes })),
    });
    Ok(run)
}

fn eps_scan(config: &ExperimentConfig) -> Result<Run> {
    let mut rows = Vec::with_capacity(config.grid);
    for k in 1..=config.grid {
        let m = FRAC_PI_4 * k as f64 / config.grid as f64;
        let report = epsilon_residual(&fermion_displaced(C64::from_polar(m, config.phase)), 0)?;
        rows.push(vec![m, report.beta_min.norm(), report.residual]);
    }
    let mut run = Run::new();
    let at = epsilon_residual(&fermion_displaced(C64::from_polar(config.alpha, config.phase)), 0)?;
    run.summary.insert("alpha".into(), json!(config.alpha));
    run.summary.insert("residual_at_alpha".into(), json!(at.residual));
    run.summary.insert("beta_min_at_alpha".into(), json!([at.beta_min.re, at.beta_min.im]));
    run.artifacts.push(Artifact {
        path: config.out.clone(),
        quantity: "minimal annihilation residual of the displaced single-mode fermion state against |alpha|".into(),
        payload: Payload::Table(Table {
            columns: vec!["alpha_modulus".into(), "beta_min_modulus".into(), "residual".into()],
            rows,
        }),
    });
    Ok(run)
}
