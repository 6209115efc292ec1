//! Observer-dependent qubit states for three thought experiments.
//!
//! An observer who has no information about a question holds the uniform
//! mixture over its answer projectors; an observer who knows the answer holds
//! the corresponding question-answer state. Communication conditions the
//! ignorant observer's state on the reported answer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{
    density_from_distribution, lueders_update, resolution_from_evariable, sample_data, DensityOperator,
    ProjectiveResolution, StatisticalModel,
};
use crate::serial::SCHEMA_VERSION;
use crate::spin::{question_answer_state, Direction, HalfInt, SpinSystem};

/// States are said to agree when every entry differs by at most this.
pub const AGREEMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Cat,
    Wigner,
    TwoSlit,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::Cat, ScenarioKind::Wigner, ScenarioKind::TwoSlit];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Cat => "cat",
            ScenarioKind::Wigner => "wigner",
            ScenarioKind::TwoSlit => "two-slit",
        }
    }

    /// Answer labels for the `+1/2` and `-1/2` outcomes of the question.
    pub fn answer_labels(self) -> [&'static str; 2] {
        match self {
            ScenarioKind::Cat => ["alive", "dead"],
            ScenarioKind::Wigner => ["+1/2", "-1/2"],
            ScenarioKind::TwoSlit => ["upper", "lower"],
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ObserverState {
    pub observer: String,
    pub state: DensityOperator,
    /// `|ρ_{01}|` in the basis of the question's answers.
    pub coherence: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub name: String,
    pub after_communication: bool,
    pub observers: Vec<ObserverState>,
    /// Every pair of observer states equal within [`AGREEMENT_TOL`].
    pub agreement: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: ScenarioKind,
    pub question: Direction,
    pub answers: Vec<String>,
    pub outcome: String,
    pub seed: u64,
    pub stages: Vec<Stage>,
    /// Agreement in the last stage before communication.
    pub agreement_before: bool,
    /// Agreement in the last stage.
    pub agreement_after: bool,
}

fn observer(name: &str, state: DensityOperator) -> ObserverState {
    ObserverState {
        observer: name.to_string(),
        coherence: state.entries()[(0, 1)].norm(),
        state,
    }
}

fn stage(name: &str, after_communication: bool, observers: Vec<ObserverState>) -> Stage {
    let agreement = observers
        .windows(2)
        .all(|w| w[0].state.approx_eq(&w[1].state, AGREEMENT_TOL));
    Stage {
        name: name.to_string(),
        after_communication,
        observers,
        agreement,
    }
}

/// Runs one scenario. The answer found by the informed observer is `outcome`
/// when given, otherwise drawn with `seed` from the uninformed observer's
/// Born probabilities.
pub fn run_scenario(kind: ScenarioKind, outcome: Option<&str>, seed: u64) -> Result<ScenarioReport> {
    let qubit = SpinSystem::new(1)?;
    let z = Direction::z_axis();
    let labels: Vec<String> = kind.answer_labels().iter().map(|s| s.to_string()).collect();
    let res: ProjectiveResolution = resolution_from_evariable(&qubit, &z)?.resolution.relabel(labels.clone())?;
    let ignorant = density_from_distribution(&res, &[0.5, 0.5])?;

    let outcome = match outcome {
        Some(o) => {
            res.index_of(o)
                .ok_or_else(|| Error::UnknownLabel(format!("outcome {o:?} not in {labels:?}")))?;
            o.to_string()
        }
        None => {
            let model = StatisticalModel::noiseless(labels.clone())?;
            sample_data(&ignorant, &model, &res, 1, seed)?.remove(0)
        }
    };
    let index = res.index_of(&outcome).expect("validated above");
    let answer = HalfInt::from_doubled(if index == 0 { 1 } else { -1 });
    let known = DensityOperator::pure(&question_answer_state(&qubit, &z, answer)?);
    let gamma = &res.projectors()[index];

    let stages = match kind {
        ScenarioKind::Cat => vec![
            stage(
                "box_closed",
                false,
                vec![observer("outside", ignorant.clone()), observer("inside", known.clone())],
            ),
            stage(
                "box_opened",
                true,
                vec![observer("outside", lueders_update(&ignorant, gamma)?), observer("inside", known)],
            ),
        ],
        ScenarioKind::Wigner => vec![
            stage(
                "friend_measured",
                false,
                vec![observer("wigner", ignorant.clone()), observer("friend", known.clone())],
            ),
            stage(
                "friend_reported",
                true,
                vec![observer("wigner", lueders_update(&ignorant, gamma)?), observer("friend", known)],
            ),
        ],
        ScenarioKind::TwoSlit => {
            // Not knowing the slit is knowing the complementary x question.
            let plus_x = DensityOperator::pure(&question_answer_state(&qubit, &Direction::x_axis(), HalfInt::from_doubled(1))?);
            vec![
                stage(
                    "slit_unknown",
                    false,
                    vec![observer("experimenter", plus_x.clone()), observer("colleague", plus_x)],
                ),
                stage(
                    "slit_known",
                    true,
                    vec![observer("experimenter", known.clone()), observer("colleague", known)],
                ),
            ]
        }
    };

    let agreement_before = stages.iter().rev().find(|s| !s.after_communication).is_some_and(|s| s.agreement);
    let agreement_after = stages.last().is_some_and(|s| s.agreement);
    Ok(ScenarioReport {
        schema_version: SCHEMA_VERSION,
        scenario: kind,
        question: z,
        answers: labels,
        outcome,
        seed,
        stages,
        agreement_before,
        agreement_after,
    })
}
