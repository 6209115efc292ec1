//! JSON job configurations.

use std::path::{Path, PathBuf};

use eqm_core::measure::{
    density_from_distribution, resolution_from_evariable, DensityOperator, SpectralResolution, StatisticalModel,
};
use eqm_core::operator::Ket;
use eqm_core::serial;
use eqm_core::spin::{question_answer_state, Direction, HalfInt, SpinSystem};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

/// Reads and parses a config, reporting the line and column of parse errors.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Resolves `p` against the directory holding the config file.
pub fn relative_to(config: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        config.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// `"1/2"`, `"3/2"`, `1`, `0.5`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpinValue {
    Text(String),
    Number(f64),
}

impl SpinValue {
    pub fn half_int(&self) -> Result<HalfInt, CliError> {
        let h: HalfInt = match self {
            SpinValue::Text(s) => s.parse()?,
            SpinValue::Number(x) => x.to_string().parse()?,
        };
        Ok(h)
    }

    pub fn system(&self) -> Result<SpinSystem, CliError> {
        Ok(SpinSystem::from_j(self.half_int()?)?)
    }
}

fn direction(v: [f64; 3], normalize: bool) -> Result<Direction, CliError> {
    let d = if normalize {
        Direction::normalized(v[0], v[1], v[2])
    } else {
        Direction::new(v[0], v[1], v[2])
    };
    Ok(d?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinConfig {
    pub j: SpinValue,
    pub direction: [f64; 3],
    /// Rescale `direction` to unit length instead of rejecting it.
    #[serde(default)]
    pub normalize: bool,
}

impl SpinConfig {
    pub fn direction(&self) -> Result<Direction, CliError> {
        direction(self.direction, self.normalize)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// |a;k⟩ for the given direction and answer.
    QuestionAnswer { direction: [f64; 3], answer: SpinValue },
    /// Amplitudes as `[re, im]` pairs in the `m = j..−j` basis.
    Ket { amplitudes: Vec<[f64; 2]> },
    Density { entries: Vec<Vec<[f64; 2]>> },
    /// Distribution over the answers of the measured question.
    Distribution { p: Vec<f64> },
    MaximallyMixed,
}

impl StateConfig {
    pub fn build(&self, system: &SpinSystem, question: &SpectralResolution) -> Result<DensityOperator, CliError> {
        let rho = match self {
            StateConfig::QuestionAnswer { direction: d, answer } => {
                DensityOperator::pure(&question_answer_state(system, &direction(*d, false)?, answer.half_int()?)?)
            }
            StateConfig::Ket { amplitudes } => {
                let v = serial::vector_from_pairs(amplitudes);
                if v.len() != system.dim() {
                    return Err(CliError::Validation(format!(
                        "ket has {} amplitudes, expected {}",
                        v.len(),
                        system.dim()
                    )));
                }
                DensityOperator::pure(&Ket::new(v)?)
            }
            StateConfig::Density { entries } => {
                let m = serial::matrix_from_rows(entries)
                    .ok_or_else(|| CliError::Validation("density rows have unequal lengths".into()))?;
                if m.nrows() != system.dim() {
                    return Err(CliError::Validation(format!(
                        "density is {}×{}, expected dimension {}",
                        m.nrows(),
                        m.ncols(),
                        system.dim()
                    )));
                }
                DensityOperator::new(m)?
            }
            StateConfig::Distribution { p } => density_from_distribution(&question.resolution, p)?,
            StateConfig::MaximallyMixed => DensityOperator::maximally_mixed(system.dim()),
        };
        Ok(rho)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Noiseless,
    SymmetricNoise { epsilon: f64 },
    Table { alphabet: Vec<String>, table: Vec<Vec<f64>> },
}

impl ModelConfig {
    pub fn build(&self, answers: &[String]) -> Result<StatisticalModel, CliError> {
        let answers = answers.to_vec();
        let m = match self {
            ModelConfig::Noiseless => StatisticalModel::noiseless(answers)?,
            ModelConfig::SymmetricNoise { epsilon } => StatisticalModel::symmetric_noise(answers, *epsilon)?,
            ModelConfig::Table { alphabet, table } => StatisticalModel::new(answers, alphabet.clone(), table.clone())?,
        };
        Ok(m)
    }
}

fn default_noiseless() -> ModelConfig {
    ModelConfig::Noiseless
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub j: SpinValue,
    pub question: [f64; 3],
    pub state: StateConfig,
    #[serde(default = "default_noiseless")]
    pub model: ModelConfig,
    pub n: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Spin system plus the resolution of one question, shared by measure and
/// infer.
pub fn spin_question(j: &SpinValue, question: [f64; 3]) -> Result<(SpinSystem, SpectralResolution), CliError> {
    let system = j.system()?;
    let res = resolution_from_evariable(&system, &direction(question, false)?)?;
    Ok((system, res))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorConfig {
    Uniform,
    /// One weight per answer, in answer order.
    Explicit { weights: Vec<f64> },
    /// `tr(ρ Γ_j)` for a spin state and the measured question.
    State { state: StateConfig },
}

fn default_uniform() -> PriorConfig {
    PriorConfig::Uniform
}

fn default_level() -> f64 {
    0.95
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InferConfig {
    /// Answer labels. Taken from the spin question when `j` and `question`
    /// are given instead.
    #[serde(default)]
    pub answers: Option<Vec<String>>,
    #[serde(default)]
    pub j: Option<SpinValue>,
    #[serde(default)]
    pub question: Option<[f64; 3]>,
    pub model: ModelConfig,
    #[serde(default = "default_uniform")]
    pub prior: PriorConfig,
    /// CSV with an `outcome` column, relative to the config file.
    pub data: PathBuf,
    #[serde(default = "default_level")]
    pub level: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub outcome: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}
