use std::path::{Path, PathBuf};

use eqm_core::conceptual::EVariableSystem;
use eqm_core::fixtures;
use eqm_core::inference::{infer, PosteriorDistribution};
use eqm_core::measure::{likelihood_effect, outcome_probabilities, sample_data, DensityOperator, StatisticalModel};
use eqm_core::operator::{gram_residual, CVector, Ket};
use eqm_core::reconstruction::{reconstruct, Tolerances};
use eqm_core::scenario::{run_scenario, ScenarioKind};
use eqm_core::serial::SCHEMA_VERSION;
use eqm_core::spin::{component_operator, question_answer_basis, Direction};
use serde::Serialize;

use crate::config::{self, InferConfig, MeasureConfig, PriorConfig, ScenarioConfig, SpinConfig, SpinValue};
use crate::error::CliError;
use crate::output::{emit, json_bytes, read_outcomes, samples_csv, write_atomic};

#[derive(Serialize)]
struct EigenPairReport {
    answer: String,
    value: f64,
    ket: Ket,
    /// `‖J^a|a;k⟩ − k|a;k⟩‖`.
    residual: f64,
}

#[derive(Serialize)]
struct SpinReport {
    schema_version: u32,
    j: String,
    direction: Direction,
    eigenpairs: Vec<EigenPairReport>,
    gram_residual: f64,
}

pub fn spin(cfg: &SpinConfig, out: Option<&Path>) -> Result<(), CliError> {
    let system = cfg.j.system()?;
    let a = cfg.direction()?;
    let op = component_operator(&system, &a);
    let basis = question_answer_basis(&system, &a)?;
    let eigenpairs = basis
        .iter()
        .map(|(k, ket)| {
            let r: CVector = op.apply(ket) - ket.amplitudes().scale(k.value());
            EigenPairReport {
                answer: k.to_string(),
                value: k.value(),
                ket: ket.clone(),
                residual: r.norm(),
            }
        })
        .collect();
    let vectors: Vec<CVector> = basis.iter().map(|(_, k)| k.amplitudes().clone()).collect();
    let report = SpinReport {
        schema_version: SCHEMA_VERSION,
        j: cfg.j.half_int()?.to_string().trim_start_matches('+').to_string(),
        direction: a,
        eigenpairs,
        gram_residual: gram_residual(&vectors),
    };
    emit(out, &json_bytes(&report)?)
}

#[derive(Serialize)]
struct DatumProbability {
    datum: String,
    probability: f64,
}

#[derive(Serialize)]
struct MeasureReport {
    schema_version: u32,
    j: String,
    question: Direction,
    answers: Vec<String>,
    /// `tr(ρ Γ_j)` per answer.
    answer_probabilities: Vec<f64>,
    model: StatisticalModel,
    state: DensityOperator,
    /// `tr(ρ L(x))` per datum.
    probabilities: Vec<DatumProbability>,
    n: usize,
    seed: u64,
}

/// Path of the probabilities JSON written next to the samples CSV.
pub fn probabilities_path(samples: &Path) -> PathBuf {
    samples.with_extension("probabilities.json")
}

pub fn measure(cfg: &MeasureConfig, seed: Option<u64>, out: Option<&Path>) -> Result<(), CliError> {
    let out = out.ok_or_else(|| CliError::Validation("measure needs --out <samples.csv>".into()))?;
    let seed = seed.or(cfg.seed).unwrap_or(0);
    let (system, question) = config::spin_question(&cfg.j, cfg.question)?;
    let res = &question.resolution;
    let rho = cfg.state.build(&system, &question)?;
    let model = cfg.model.build(res.labels())?;
    let effect = likelihood_effect(&model, res)?;
    let probs = outcome_probabilities(&rho, &effect)?;
    let answer_probabilities = res
        .projectors()
        .iter()
        .map(|p| rho.expectation(p.entries()).re.clamp(0.0, 1.0))
        .collect();
    let data = sample_data(&rho, &model, res, cfg.n, seed)?;

    let report = MeasureReport {
        schema_version: SCHEMA_VERSION,
        j: system.j().to_string(),
        question: question_direction(cfg.question)?,
        answers: res.labels().to_vec(),
        answer_probabilities,
        probabilities: model
            .alphabet()
            .iter()
            .zip(probs)
            .map(|(x, p)| DatumProbability {
                datum: x.clone(),
                probability: p,
            })
            .collect(),
        model,
        state: rho,
        n: cfg.n,
        seed,
    };
    let json = json_bytes(&report)?;
    let csv = samples_csv(&data)?;
    write_atomic(&probabilities_path(out), &json)?;
    write_atomic(out, &csv)
}

fn question_direction(v: [f64; 3]) -> Result<Direction, CliError> {
    Ok(Direction::new(v[0], v[1], v[2])?)
}

pub fn infer_cmd(cfg: &InferConfig, config_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let question = match (&cfg.j, cfg.question) {
        (Some(j), Some(q)) => Some(config::spin_question(j, q)?),
        (None, None) => None,
        _ => return Err(CliError::Validation("`j` and `question` must be given together".into())),
    };
    let answers: Vec<String> = match (&cfg.answers, &question) {
        (Some(a), Some((_, q))) if a.as_slice() != q.resolution.labels() => {
            return Err(CliError::Validation(format!(
                "answers {a:?} do not match the question's answers {:?}",
                q.resolution.labels()
            )))
        }
        (_, Some((_, q))) => q.resolution.labels().to_vec(),
        (Some(a), None) => a.clone(),
        (None, None) => return Err(CliError::Validation("give `answers` or `j` and `question`".into())),
    };
    let model = cfg.model.build(&answers)?;
    let prior = match &cfg.prior {
        PriorConfig::Uniform => PosteriorDistribution::uniform(answers.clone())?,
        PriorConfig::Explicit { weights } => PosteriorDistribution::new(answers.clone(), weights.clone())?,
        PriorConfig::State { state } => {
            let (system, q) = question
                .as_ref()
                .ok_or_else(|| CliError::Validation("a state prior needs `j` and `question`".into()))?;
            PosteriorDistribution::from_state(&state.build(system, q)?, &q.resolution)?
        }
    };
    let data = read_outcomes(&config::relative_to(config_path, &cfg.data))?;
    if let Some(x) = data.iter().find(|x| !model.alphabet().contains(x)) {
        return Err(CliError::Validation(format!(
            "datum {x:?} is not in the alphabet {:?}",
            model.alphabet()
        )));
    }
    let report = infer(&prior, &model, &data, cfg.level)?;
    emit(out, &json_bytes(&report)?)
}

pub enum SystemSource<'a> {
    File(&'a Path),
    Fixture(&'a str),
}

pub fn reconstruct_cmd(source: SystemSource, out: Option<&Path>) -> Result<(), CliError> {
    let system: EVariableSystem = match source {
        SystemSource::File(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", p.display())))?;
            EVariableSystem::from_json(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
        }
        SystemSource::Fixture(name) => fixtures::load(name).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown fixture {name:?}; shipped: {}",
                fixtures::names().collect::<Vec<_>>().join(", ")
            ))
        })??,
    };
    let report = reconstruct(&system, Tolerances::default())?;
    emit(out, &json_bytes(&report)?)?;
    if report.all_checks_pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!("system {:?} fails at least one check", report.system)))
    }
}

pub fn scenario(cfg: &ScenarioConfig, seed: Option<u64>, out: Option<&Path>) -> Result<(), CliError> {
    let kind: ScenarioKind = cfg.name.parse()?;
    let report = run_scenario(kind, cfg.outcome.as_deref(), seed.or(cfg.seed).unwrap_or(0))?;
    emit(out, &json_bytes(&report)?)
}

/// `j` given on the command line, as text.
pub fn spin_value(s: &str) -> SpinValue {
    SpinValue::Text(s.to_string())
}
