//! Preparations and measurements.
//!
//! A preparation is a probability vector over the answers of one question,
//! turned into `ρ = Σ_k p_k Γ_k`. A measurement asks another question through
//! a [`ProjectiveResolution`]; a noisy apparatus is a [`StatisticalModel`]
//! `q(x|v_j)` over a finite data alphabet, and the two combine into the
//! likelihood effect `L(x) = Σ_j q(x|v_j) Γ_j`. Data probabilities follow
//! `P(x ∈ C | ρ) = tr(ρ M(C))` with `M(C) = Σ_{x∈C} L(x)`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{
    eigensystem, hermitian_deviation, max_abs, trace, CMatrix, HermitianOperator, Ket, DEGENERACY_TOL,
};
use crate::serial;
use crate::spin::{question_answer_basis, Direction, SpinSystem};

pub const PROJECTOR_TOL: f64 = 1e-10;
pub const RANK_TOL: f64 = 1e-9;
pub const RESOLUTION_TOL: f64 = 1e-10;
pub const DENSITY_TOL: f64 = 1e-10;
pub const MODEL_TOL: f64 = 1e-12;
pub const PROBABILITY_SLACK: f64 = 1e-10;
pub const ZERO_PROBABILITY: f64 = 1e-12;

fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()).scale(0.5)
}

/// An orthogonal projector Γ onto a subspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProjectorRepr", into = "ProjectorRepr")]
pub struct Projector {
    entries: CMatrix,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct ProjectorRepr {
    #[serde(with = "serial::cmat")]
    entries: CMatrix,
}

impl TryFrom<ProjectorRepr> for Projector {
    type Error = Error;
    fn try_from(r: ProjectorRepr) -> Result<Self> {
        Projector::new(r.entries)
    }
}

impl From<Projector> for ProjectorRepr {
    fn from(p: Projector) -> Self {
        ProjectorRepr { entries: p.entries }
    }
}

impl Projector {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidProjector("not a nonempty square matrix".into()));
        }
        let dev = hermitian_deviation(&entries);
        if dev > PROJECTOR_TOL {
            return Err(Error::InvalidProjector(format!("not Hermitian (deviation {dev:e})")));
        }
        let idem = max_abs(&(&entries * &entries - &entries));
        if idem > PROJECTOR_TOL {
            return Err(Error::InvalidProjector(format!("not idempotent (residual {idem:e})")));
        }
        let tr = trace(&entries).re;
        let rank = tr.round();
        if (tr - rank).abs() > RANK_TOL || rank < 1.0 {
            return Err(Error::InvalidProjector(format!("trace {tr} is not a positive integer")));
        }
        Ok(Self {
            entries,
            rank: rank as usize,
        })
    }

    /// Γ onto the span of orthonormal `kets`.
    pub fn onto(kets: &[&Ket]) -> Result<Self> {
        let dim = kets.first().map(|k| k.dim()).ok_or_else(|| Error::InvalidProjector("no vectors".into()))?;
        let mut m = CMatrix::zeros(dim, dim);
        for k in kets {
            if k.dim() != dim {
                return Err(Error::ShapeMismatch("kets of different dimension".into()));
            }
            m += k.projector();
        }
        Self::new(m)
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Pairwise orthogonal projectors summing to the identity, one per answer label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ResolutionRepr", into = "ResolutionRepr")]
pub struct ProjectiveResolution {
    labels: Vec<String>,
    projectors: Vec<Projector>,
}

#[derive(Serialize, Deserialize)]
struct ResolutionRepr {
    labels: Vec<String>,
    projectors: Vec<Projector>,
}

impl TryFrom<ResolutionRepr> for ProjectiveResolution {
    type Error = Error;
    fn try_from(r: ResolutionRepr) -> Result<Self> {
        ProjectiveResolution::new(r.labels, r.projectors)
    }
}

impl From<ProjectiveResolution> for ResolutionRepr {
    fn from(r: ProjectiveResolution) -> Self {
        ResolutionRepr {
            labels: r.labels,
            projectors: r.projectors,
        }
    }
}

fn check_distinct(labels: &[String], what: &str) -> Result<()> {
    let set: BTreeSet<&String> = labels.iter().collect();
    if set.len() != labels.len() {
        return Err(Error::DuplicateValues(format!("{what} labels must be distinct")));
    }
    Ok(())
}

impl ProjectiveResolution {
    pub fn new(labels: Vec<String>, projectors: Vec<Projector>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidResolution("no projectors".into()));
        }
        if labels.len() != projectors.len() {
            return Err(Error::LengthMismatch {
                expected: projectors.len(),
                got: labels.len(),
            });
        }
        check_distinct(&labels, "answer")?;
        let dim = projectors[0].dim();
        if projectors.iter().any(|p| p.dim() != dim) {
            return Err(Error::InvalidResolution("projectors of different dimension".into()));
        }
        let res = Self { labels, projectors };
        let (orth, comp) = res.residuals();
        if orth > RESOLUTION_TOL {
            return Err(Error::InvalidResolution(format!("projectors not orthogonal (residual {orth:e})")));
        }
        if comp > RESOLUTION_TOL {
            return Err(Error::InvalidResolution(format!("projectors do not sum to I (residual {comp:e})")));
        }
        Ok(res)
    }

    /// Rank-one resolution from an orthonormal basis.
    pub fn from_kets(labels: Vec<String>, kets: &[Ket]) -> Result<Self> {
        let projectors = kets.iter().map(|k| Projector::onto(&[k])).collect::<Result<Vec<_>>>()?;
        Self::new(labels, projectors)
    }

    /// The standard-basis resolution with the given labels.
    pub fn standard(labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        let kets: Vec<Ket> = (0..dim).map(|i| Ket::basis(dim, i)).collect();
        Self::from_kets(labels, &kets)
    }

    /// `(max ‖Γ_iΓ_j‖, ‖ΣΓ_j − I‖)`, entrywise maxima.
    pub fn residuals(&self) -> (f64, f64) {
        let mut orth: f64 = 0.0;
        for (i, a) in self.projectors.iter().enumerate() {
            for b in &self.projectors[i + 1..] {
                orth = orth.max(max_abs(&(a.entries() * b.entries())));
            }
        }
        let sum: CMatrix = self.projectors.iter().map(Projector::entries).sum();
        (orth, max_abs(&(sum - identity(self.dim()))))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn projector(&self, label: &str) -> Option<&Projector> {
        self.index_of(label).map(|i| &self.projectors[i])
    }

    /// Same projectors under new answer labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        Self::new(labels, self.projectors.clone())
    }
}

/// A resolution obtained from an operator's spectrum, with the numeric value
/// attached to each projector.
#[derive(Debug, Clone)]
pub struct SpectralResolution {
    pub resolution: ProjectiveResolution,
    pub values: Vec<f64>,
    /// Whether any eigenvalues were merged into a higher-rank projector.
    pub merged: bool,
}

/// How to treat eigenvalues closer than [`DEGENERACY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyPolicy {
    Reject,
    Merge,
}

fn value_label(v: f64) -> String {
    let twice = 2.0 * v;
    if (twice - twice.round()).abs() < 1e-9 {
        crate::spin::HalfInt::from_doubled(twice.round() as i32).to_string()
    } else {
        format!("{v}")
    }
}

/// Eigenspace projectors of `op`, ordered by descending eigenvalue.
pub fn resolution_from_operator(op: &HermitianOperator, policy: DegeneracyPolicy) -> Result<SpectralResolution> {
    let es = eigensystem(op);
    if policy == DegeneracyPolicy::Reject {
        if let Some((a, b)) = es.degenerate {
            return Err(Error::Degenerate(a, b));
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, pair) in es.pairs.iter().enumerate().rev() {
        match groups.last_mut() {
            Some(g) if (es.pairs[g[0]].value - pair.value).abs() < DEGENERACY_TOL => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let merged = groups.iter().any(|g| g.len() > 1);
    let mut projectors = Vec::with_capacity(groups.len());
    let mut values = Vec::with_capacity(groups.len());
    for g in &groups {
        let kets: Vec<&Ket> = g.iter().map(|&i| &es.pairs[i].vector).collect();
        projectors.push(Projector::onto(&kets)?);
        values.push(g.iter().map(|&i| es.pairs[i].value).sum::<f64>() / g.len() as f64);
    }
    let labels = values.iter().map(|&v| value_label(v)).collect();
    Ok(SpectralResolution {
        resolution: ProjectiveResolution::new(labels, projectors)?,
        values,
        merged,
    })
}

/// Resolution for the spin component θ^b = b·φ, answers `+j..−j` labelled
/// as half-integers (`"+1/2"`, `"-1"`, ...).
pub fn resolution_from_evariable(system: &SpinSystem, b: &Direction) -> Result<SpectralResolution> {
    let basis = question_answer_basis(system, b)?;
    let labels = basis.iter().map(|(k, _)| k.to_string()).collect();
    let values = basis.iter().map(|(k, _)| k.value()).collect();
    let kets: Vec<Ket> = basis.into_iter().map(|(_, v)| v).collect();
    Ok(SpectralResolution {
        resolution: ProjectiveResolution::from_kets(labels, &kets)?,
        values,
        merged: false,
    })
}

/// `A = Σ_j v_j Γ_j`.
pub fn observable_operator(res: &ProjectiveResolution, values: &[f64]) -> Result<HermitianOperator> {
    if values.len() != res.len() {
        return Err(Error::LengthMismatch {
            expected: res.len(),
            got: values.len(),
        });
    }
    for (i, v) in values.iter().enumerate() {
        if values[..i].contains(v) {
            return Err(Error::DuplicateValues(format!("observable value {v} repeated")));
        }
    }
    let mut m = CMatrix::zeros(res.dim(), res.dim());
    for (p, &v) in res.projectors().iter().zip(values) {
        m += p.entries().scale(v);
    }
    HermitianOperator::new(hermitize(m))
}

/// Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityOperator {
    entries: CMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct DensityRepr {
    #[serde(with = "serial::cmat")]
    entries: CMatrix,
}

impl TryFrom<DensityRepr> for DensityOperator {
    type Error = Error;
    fn try_from(r: DensityRepr) -> Result<Self> {
        DensityOperator::new(r.entries)
    }
}

impl From<DensityOperator> for DensityRepr {
    fn from(d: DensityOperator) -> Self {
        DensityRepr { entries: d.entries }
    }
}

impl DensityOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::InvalidDensity("not a nonempty square matrix".into()));
        }
        let dev = hermitian_deviation(&entries);
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = trace(&entries);
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
        }
        let entries = hermitize(entries);
        let op = HermitianOperator::new(entries.clone()).expect("hermitized");
        let min = eigensystem(&op).pairs[0].value;
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { entries })
    }

    pub fn pure(ket: &Ket) -> Self {
        Self::new(ket.projector()).expect("pure state is a density operator")
    }

    /// `I/d`, the "don't know" state.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(identity(dim).unscale(dim as f64)).expect("I/d is a density operator")
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `tr(ρ M)`, unclamped.
    pub fn expectation(&self, m: &CMatrix) -> Complex64 {
        trace(&(&self.entries * m))
    }

    pub fn approx_eq(&self, other: &DensityOperator, tol: f64) -> bool {
        self.dim() == other.dim() && max_abs(&(&self.entries - &other.entries)) <= tol
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is negative or not finite")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DENSITY_TOL {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// `ρ = Σ_k p_k Γ_k`, rescaled to unit trace when some Γ_k has rank > 1.
pub fn density_from_distribution(res: &ProjectiveResolution, p: &[f64]) -> Result<DensityOperator> {
    if p.len() != res.len() {
        return Err(Error::LengthMismatch {
            expected: res.len(),
            got: p.len(),
        });
    }
    check_distribution(p)?;
    let mut m = CMatrix::zeros(res.dim(), res.dim());
    let mut weight = 0.0;
    for (proj, &pk) in res.projectors().iter().zip(p) {
        m += proj.entries().scale(pk);
        weight += pk * proj.rank() as f64;
    }
    DensityOperator::new(m.unscale(weight))
}

/// Point probabilities `q(x | v_j)`: one row per answer, one column per datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct StatisticalModel {
    answers: Vec<String>,
    alphabet: Vec<String>,
    table: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    answers: Vec<String>,
    alphabet: Vec<String>,
    table: Vec<Vec<f64>>,
}

impl TryFrom<ModelRepr> for StatisticalModel {
    type Error = Error;
    fn try_from(r: ModelRepr) -> Result<Self> {
        StatisticalModel::new(r.answers, r.alphabet, r.table)
    }
}

impl From<StatisticalModel> for ModelRepr {
    fn from(m: StatisticalModel) -> Self {
        ModelRepr {
            answers: m.answers,
            alphabet: m.alphabet,
            table: m.table,
        }
    }
}

impl StatisticalModel {
    pub fn new(answers: Vec<String>, alphabet: Vec<String>, table: Vec<Vec<f64>>) -> Result<Self> {
        if answers.is_empty() || alphabet.is_empty() {
            return Err(Error::InvalidModel("answers and alphabet must be nonempty".into()));
        }
        check_distinct(&answers, "answer")?;
        check_distinct(&alphabet, "data")?;
        if table.len() != answers.len() || table.iter().any(|r| r.len() != alphabet.len()) {
            return Err(Error::InvalidModel(format!(
                "table must be {}x{}",
                answers.len(),
                alphabet.len()
            )));
        }
        for (row, answer) in table.iter().zip(&answers) {
            if row.iter().any(|q| !(*q >= 0.0) || !q.is_finite()) {
                return Err(Error::InvalidModel(format!("negative entry in row {answer:?}")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > MODEL_TOL {
                return Err(Error::InvalidModel(format!("row {answer:?} sums to {total}")));
            }
        }
        Ok(Self {
            answers,
            alphabet,
            table,
        })
    }

    /// `q(x|v_j) = δ_{x,j}` with the data alphabet equal to the answers.
    pub fn noiseless(answers: Vec<String>) -> Result<Self> {
        let m = answers.len();
        let table = (0..m)
            .map(|j| (0..m).map(|x| if x == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(answers.clone(), answers, table)
    }

    /// Reports the true answer with probability `1 − ε`, otherwise one of the
    /// others uniformly.
    pub fn symmetric_noise(answers: Vec<String>, epsilon: f64) -> Result<Self> {
        let m = answers.len();
        if !(0.0..=1.0).contains(&epsilon) || (m == 1 && epsilon != 0.0) {
            return Err(Error::InvalidModel(format!("noise level {epsilon} out of range")));
        }
        let off = if m > 1 { epsilon / (m - 1) as f64 } else { 0.0 };
        let table = (0..m)
            .map(|j| (0..m).map(|x| if x == j { 1.0 - epsilon } else { off }).collect())
            .collect();
        Self::new(answers.clone(), answers, table)
    }

    /// Data carry no information: `q(x|v_j) = 1/|alphabet|`.
    pub fn uniform(answers: Vec<String>, alphabet: Vec<String>) -> Result<Self> {
        let q = 1.0 / alphabet.len() as f64;
        let table = vec![vec![q; alphabet.len()]; answers.len()];
        Self::new(answers, alphabet, table)
    }

    pub fn answers(&self) -> &[String] {
        &self.answers
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// `q(x | v_j)` by indices.
    pub fn q(&self, answer: usize, datum: usize) -> f64 {
        self.table[answer][datum]
    }

    pub fn datum_index(&self, x: &str) -> Result<usize> {
        self.alphabet
            .iter()
            .position(|a| a == x)
            .ok_or_else(|| Error::UnknownLabel(x.to_string()))
    }
}

/// `L(x)` for every datum `x`, in alphabet order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodEffect {
    alphabet: Vec<String>,
    #[serde(with = "operators_serde")]
    operators: Vec<CMatrix>,
}

mod operators_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ops: &[CMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        ops.iter().map(serial::matrix_rows).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<CMatrix>, D::Error> {
        let raw = Vec::<Vec<Vec<[f64; 2]>>>::deserialize(d)?;
        raw.iter()
            .map(|rows| serial::matrix_from_rows(rows).ok_or_else(|| serde::de::Error::custom("ragged matrix")))
            .collect()
    }
}

impl LikelihoodEffect {
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn get(&self, x: &str) -> Result<&CMatrix> {
        self.alphabet
            .iter()
            .position(|a| a == x)
            .map(|i| &self.operators[i])
            .ok_or_else(|| Error::UnknownLabel(x.to_string()))
    }

    /// `‖Σ_x L(x) − I‖`, entrywise maximum.
    pub fn completeness_residual(&self) -> f64 {
        let sum: CMatrix = self.operators.iter().sum();
        max_abs(&(sum - identity(self.dim())))
    }

    /// Sorted eigenvalues of each `L(x)`: a basis-independent fingerprint.
    pub fn spectral_form(&self) -> Vec<Vec<f64>> {
        self.operators
            .iter()
            .map(|m| {
                let op = HermitianOperator::new(hermitize(m.clone())).expect("hermitized");
                eigensystem(&op).values()
            })
            .collect()
    }
}

/// `L(x) = Σ_j q(x|v_j) Γ_j`. The model's answers must match the resolution
/// labels in order.
pub fn likelihood_effect(model: &StatisticalModel, res: &ProjectiveResolution) -> Result<LikelihoodEffect> {
    if model.answers() != res.labels() {
        return Err(Error::LabelMismatch(format!(
            "model answers {:?} do not match resolution labels {:?}",
            model.answers(),
            res.labels()
        )));
    }
    let dim = res.dim();
    let operators: Vec<CMatrix> = (0..model.alphabet().len())
        .map(|x| {
            let mut m = CMatrix::zeros(dim, dim);
            for (j, p) in res.projectors().iter().enumerate() {
                m += p.entries().scale(model.q(j, x));
            }
            m
        })
        .collect();
    let effect = LikelihoodEffect {
        alphabet: model.alphabet().to_vec(),
        operators,
    };
    let residual = effect.completeness_residual();
    if residual > RESOLUTION_TOL {
        return Err(Error::InvalidModel(format!("Σ L(x) deviates from I by {residual:e}")));
    }
    Ok(effect)
}

/// `M(C) = Σ_{x∈C} L(x)`; repeated labels in `subset` count once.
pub fn povm_element<S: AsRef<str>>(effect: &LikelihoodEffect, subset: &[S]) -> Result<CMatrix> {
    let mut chosen = BTreeSet::new();
    for x in subset {
        let i = effect
            .alphabet
            .iter()
            .position(|a| a == x.as_ref())
            .ok_or_else(|| Error::UnknownLabel(x.as_ref().to_string()))?;
        chosen.insert(i);
    }
    let dim = effect.dim();
    Ok(chosen
        .into_iter()
        .fold(CMatrix::zeros(dim, dim), |acc, i| acc + &effect.operators[i]))
}

/// `tr(ρ M)`, clamped into `[0, 1]` only within [`PROBABILITY_SLACK`].
pub fn born_probability(rho: &DensityOperator, m: &CMatrix) -> Result<f64> {
    if m.nrows() != rho.dim() || m.ncols() != rho.dim() {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, state has dimension {}",
            m.nrows(),
            m.ncols(),
            rho.dim()
        )));
    }
    let p = rho.expectation(m).re;
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Probability of each datum, in alphabet order.
pub fn outcome_probabilities(rho: &DensityOperator, effect: &LikelihoodEffect) -> Result<Vec<f64>> {
    effect.operators.iter().map(|l| born_probability(rho, l)).collect()
}

/// `n` i.i.d. data drawn from `P(x) = tr(ρ L(x))` with a ChaCha8 stream seeded
/// by `seed`.
pub fn sample_data(
    rho: &DensityOperator,
    model: &StatisticalModel,
    res: &ProjectiveResolution,
    n: usize,
    seed: u64,
) -> Result<Vec<String>> {
    if n == 0 {
        return Err(Error::EmptyData);
    }
    let effect = likelihood_effect(model, res)?;
    let probs = outcome_probabilities(rho, &effect)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| effect.alphabet[dist.sample(&mut rng)].clone()).collect())
}

/// `ΓρΓ / tr(ρΓ)`.
pub fn lueders_update(rho: &DensityOperator, gamma: &Projector) -> Result<DensityOperator> {
    let p = rho.expectation(gamma.entries()).re;
    if p <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(p));
    }
    let g = gamma.entries();
    DensityOperator::new(hermitize(g * rho.entries() * g).unscale(p))
}
