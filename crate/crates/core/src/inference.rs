//! Inference over the answer to a measured question.
//!
//! Label order means lexicographic order of the label strings everywhere
//! (tie-breaks, report layout), so two inputs that differ only in the
//! internal ordering of answers produce identical reports.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{DensityOperator, LikelihoodEffect, ProjectiveResolution, StatisticalModel, ZERO_PROBABILITY};
use crate::operator::{max_abs, trace, CMatrix};
use crate::serial::SCHEMA_VERSION;

pub const POSTERIOR_TOL: f64 = 1e-12;
/// Mass shortfall tolerated when a credibility set reaches its level.
pub const LEVEL_SLACK: f64 = 1e-12;
/// Relative gap below which two log-likelihoods count as tied.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorDistribution {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl PosteriorDistribution {
    pub fn new(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.is_empty() || labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidDistribution("weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > POSTERIOR_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(Self { labels, weights })
    }

    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let w = 1.0 / labels.len() as f64;
        let n = labels.len();
        Self::new(labels, vec![w; n])
    }

    /// Normalizes non-negative weights.
    fn from_unnormalized(labels: Vec<String>, raw: Vec<f64>) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InconsistentData);
        }
        Self::new(labels, raw.into_iter().map(|w| w / total).collect())
    }

    /// The prior `tr(ρΓ_j)` a preparation assigns to each answer.
    pub fn from_state(rho: &DensityOperator, res: &ProjectiveResolution) -> Result<Self> {
        let raw = res
            .projectors()
            .iter()
            .map(|p| rho.expectation(p.entries()).re.max(0.0))
            .collect();
        Self::from_unnormalized(res.labels().to_vec(), raw)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.weights[i])
    }

    /// Entries sorted by label.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        Self {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            weights: order.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

/// `q(x|v_j)` read back from an effect: `tr(Γ_j L(x)) / rank Γ_j`, after
/// checking that `L(x)` is diagonal in the resolution.
fn model_column(effect_x: &CMatrix, res: &ProjectiveResolution) -> Result<Vec<f64>> {
    let q: Vec<f64> = res
        .projectors()
        .iter()
        .map(|p| trace(&(p.entries() * effect_x)).re / p.rank() as f64)
        .collect();
    let rebuilt: CMatrix = res
        .projectors()
        .iter()
        .zip(&q)
        .map(|(p, &qj)| p.entries().scale(qj))
        .sum();
    let gap = max_abs(&(effect_x - rebuilt));
    if gap > 1e-10 {
        return Err(Error::LabelMismatch(format!(
            "effect is not built on this resolution (residual {gap:e})"
        )));
    }
    Ok(q)
}

/// `w(v_j) = q(x|v_j) tr(ρΓ_j) / tr(ρL(x))`.
pub fn posterior_single_shot(
    rho: &DensityOperator,
    effect: &LikelihoodEffect,
    res: &ProjectiveResolution,
    x: &str,
) -> Result<PosteriorDistribution> {
    if effect.dim() != res.dim() || rho.dim() != res.dim() {
        return Err(Error::ShapeMismatch("state, effect and resolution dimensions differ".into()));
    }
    let lx = effect.get(x)?;
    let evidence = rho.expectation(lx).re;
    if evidence <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(evidence));
    }
    let q = model_column(lx, res)?;
    let raw = res
        .projectors()
        .iter()
        .zip(&q)
        .map(|(p, &qj)| (qj * rho.expectation(p.entries()).re / evidence).max(0.0))
        .collect();
    PosteriorDistribution::from_unnormalized(res.labels().to_vec(), raw)
}

fn counts<S: AsRef<str>>(model: &StatisticalModel, data: &[S]) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; model.alphabet().len()];
    for x in data {
        counts[model.datum_index(x.as_ref())?] += 1;
    }
    Ok(counts)
}

/// `Σ_i ln q(x_i|v_j)` for each answer, accumulated per distinct datum.
fn log_likelihoods(model: &StatisticalModel, counts: &[usize]) -> Vec<f64> {
    (0..model.answers().len())
        .map(|j| {
            counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(x, &c)| c as f64 * model.q(j, x).ln())
                .sum()
        })
        .collect()
}

/// `w(v_j) ∝ prior_j Π_i q(x_i|v_j)`, computed in log space.
pub fn posterior_repeated<S: AsRef<str>>(
    prior: &PosteriorDistribution,
    model: &StatisticalModel,
    data: &[S],
) -> Result<PosteriorDistribution> {
    if prior.labels() != model.answers() {
        return Err(Error::LabelMismatch(format!(
            "prior labels {:?} do not match model answers {:?}",
            prior.labels(),
            model.answers()
        )));
    }
    if data.is_empty() {
        return Ok(prior.clone());
    }
    let ll = log_likelihoods(model, &counts(model, data)?);
    let log_w: Vec<f64> = prior.weights().iter().zip(&ll).map(|(p, l)| p.ln() + l).collect();
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::InconsistentData);
    }
    let raw = log_w.iter().map(|l| (l - top).exp()).collect();
    PosteriorDistribution::from_unnormalized(prior.labels().to_vec(), raw)
}

fn tied(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Answer maximizing `Π_i q(x_i|v_j)`; ties go to the smallest label.
pub fn mle<S: AsRef<str>>(model: &StatisticalModel, data: &[S]) -> Result<String> {
    if data.is_empty() {
        return Err(Error::EmptyData);
    }
    let ll = log_likelihoods(model, &counts(model, data)?);
    let mut best: Option<usize> = None;
    for j in 0..ll.len() {
        if ll[j] == f64::NEG_INFINITY {
            continue;
        }
        best = Some(match best {
            None => j,
            Some(b) if tied(ll[j], ll[b]) => {
                if model.answers()[j] < model.answers()[b] {
                    j
                } else {
                    b
                }
            }
            Some(b) if ll[j] > ll[b] => j,
            Some(b) => b,
        });
    }
    best.map(|j| model.answers()[j].clone()).ok_or(Error::InconsistentData)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredibleSet {
    /// In the order they were added (descending weight).
    pub labels: Vec<String>,
    pub requested_level: f64,
    pub achieved_mass: f64,
}

/// Smallest greedy set reaching `level`: descending weight, ties by label.
pub fn credibility_set(posterior: &PosteriorDistribution, level: f64) -> Result<CredibleSet> {
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::InvalidDistribution(format!("credibility level {level} outside (0, 1]")));
    }
    let mut order: Vec<usize> = (0..posterior.labels.len()).collect();
    order.sort_by(|&a, &b| match posterior.weights[b].total_cmp(&posterior.weights[a]) {
        Ordering::Equal => posterior.labels[a].cmp(&posterior.labels[b]),
        other => other,
    });
    let mut labels = Vec::new();
    let mut mass = 0.0;
    for i in order {
        if mass >= level - LEVEL_SLACK {
            break;
        }
        labels.push(posterior.labels[i].clone());
        mass += posterior.weights[i];
    }
    Ok(CredibleSet {
        labels,
        requested_level: level,
        achieved_mass: mass,
    })
}

/// Whether `L1(x) = L2(x)` entrywise within `tol` for every datum.
pub fn effects_equal(e1: &LikelihoodEffect, e2: &LikelihoodEffect, tol: f64) -> Result<bool> {
    if e1.dim() != e2.dim() || e1.alphabet() != e2.alphabet() {
        return Err(Error::ShapeMismatch("effects differ in dimension or alphabet".into()));
    }
    Ok(e1
        .operators()
        .iter()
        .zip(e2.operators())
        .all(|(a, b)| max_abs(&(a - b)) <= tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceReport {
    pub schema_version: u32,
    /// Sorted by label.
    pub posterior: PosteriorDistribution,
    /// Absent when there are no observations.
    pub mle: Option<String>,
    pub credibility_set: CredibleSet,
    pub n_observations: usize,
}

/// Posterior, MLE and credibility set for i.i.d. data under `model`.
pub fn infer<S: AsRef<str>>(
    prior: &PosteriorDistribution,
    model: &StatisticalModel,
    data: &[S],
    level: f64,
) -> Result<InferenceReport> {
    let posterior = posterior_repeated(prior, model, data)?.canonical();
    let mle = if data.is_empty() { None } else { Some(mle(model, data)?) };
    let credibility_set = credibility_set(&posterior, level)?;
    Ok(InferenceReport {
        schema_version: SCHEMA_VERSION,
        posterior,
        mle,
        credibility_set,
        n_observations: data.len(),
    })
}
