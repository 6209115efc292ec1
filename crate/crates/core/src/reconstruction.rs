//! Hilbert-space reconstruction on a finite e-variable system.
//!
//! H is the space of functions on Φ that factor through θ⁰, spanned by the
//! normalized level-set indicators `e_k`. K acts on functions by the
//! permutation representation `(U(k)f)(φ) = f(k⁻¹φ)`. A candidate for the
//! state |a;k⟩ is the normalized projection onto H of the indicator of
//! `θ^a = u_k`, obtained by transporting `e_k` with the connector `k_{0a}`.
//! Whether these candidates behave as question-answer states is reported,
//! not assumed.

use num_complex::Complex64;
use serde::Serialize;

use crate::conceptual::{
    check_generating_assumption, check_permissible, induced_group, is_transitive, orbits, EVariableMap,
    EVariableSystem, FiniteGroupAction, GeneratingCheck, Permissibility,
};
use crate::error::{Error, Result};
use crate::measure::{ProjectiveResolution, SpectralResolution};
use crate::operator::{gram_residual, max_abs, trace, CMatrix, CVector, HermitianOperator, Ket};
use crate::serial::{self, SCHEMA_VERSION};

pub const BASIS_TOL: f64 = 1e-10;
pub const VANISHING_TOL: f64 = 1e-9;
pub const COINCIDENCE_TOL: f64 = 1e-9;
pub const SCHUR_TOL: f64 = 1e-8;
pub const INVARIANCE_TOL: f64 = 1e-12;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Orthonormal basis of the functions of θ⁰, one vector per value.
#[derive(Debug, Clone)]
pub struct FunctionSpaceBasis {
    ambient: usize,
    level_sets: Vec<Vec<usize>>,
    vectors: Vec<CVector>,
}

impl FunctionSpaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn level_sets(&self) -> &[Vec<usize>] {
        &self.level_sets
    }

    /// `|Φ| × d`, basis vectors as columns.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors)
    }

    /// Orthogonal projector onto H in the ambient space.
    pub fn projector(&self) -> CMatrix {
        let b = self.matrix();
        &b * b.adjoint()
    }

    /// Coordinates of an ambient vector along the basis.
    pub fn coordinates(&self, v: &CVector) -> CVector {
        self.matrix().adjoint() * v
    }

    pub fn orthonormality_residual(&self) -> f64 {
        gram_residual(&self.vectors)
    }

    /// Every basis vector is constant on each level set of `theta`.
    pub fn factors_through(&self, theta: &EVariableMap) -> bool {
        self.vectors.iter().all(|v| {
            (0..theta.n_values()).all(|k| {
                let set = theta.level_set(k);
                set.iter().all(|&p| (v[p] - v[set[0]]).norm() <= BASIS_TOL)
            })
        })
    }
}

/// Normalized indicators of the level sets of θ⁰, in value order.
pub fn build_hilbert_space(theta0: &EVariableMap) -> FunctionSpaceBasis {
    let n = theta0.domain().len();
    let level_sets: Vec<Vec<usize>> = (0..theta0.n_values()).map(|k| theta0.level_set(k)).collect();
    let vectors = level_sets
        .iter()
        .map(|set| {
            let w = real(1.0 / (set.len() as f64).sqrt());
            let mut v = CVector::zeros(n);
            for &p in set {
                v[p] = w;
            }
            v
        })
        .collect();
    FunctionSpaceBasis {
        ambient: n,
        level_sets,
        vectors,
    }
}

/// Permutation matrices `U(k)` with `U(k)[kφ, φ] = 1`.
#[derive(Debug, Clone)]
pub struct RegularRepresentation {
    matrices: Vec<CMatrix>,
}

pub fn regular_representation(action: &FiniteGroupAction) -> RegularRepresentation {
    let n = action.n_points();
    let matrices = (0..action.order())
        .map(|k| {
            let mut m = CMatrix::zeros(n, n);
            for phi in 0..n {
                m[(action.act(k, phi), phi)] = real(1.0);
            }
            m
        })
        .collect();
    RegularRepresentation { matrices }
}

impl RegularRepresentation {
    pub fn get(&self, k: usize) -> &CMatrix {
        &self.matrices[k]
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// `U(k1)U(k2) = U(k1·k2)` for all pairs, compared exactly.
    pub fn is_homomorphism(&self, action: &FiniteGroupAction) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| &self.matrices[a] * &self.matrices[b] == self.matrices[action.compose(a, b)])
        })
    }

    /// `U_H(k) = B† U(k) B` for each k; fails when H is not invariant.
    pub fn restrict(&self, h: &FunctionSpaceBasis) -> Result<Vec<CMatrix>> {
        let b = h.matrix();
        self.matrices
            .iter()
            .enumerate()
            .map(|(k, u)| {
                let ub = u * &b;
                let restricted = b.adjoint() * &ub;
                let defect = max_abs(&(ub - &b * &restricted));
                if defect > INVARIANCE_TOL {
                    return Err(Error::InvalidSystem(format!(
                        "H is not invariant under element {k} (defect {defect:e})"
                    )));
                }
                Ok(restricted)
            })
            .collect()
    }
}

fn transport_element(system: &EVariableSystem, a: &str) -> Result<usize> {
    let theta0 = system.theta0_name();
    if a == theta0 {
        return Ok(system.action().identity());
    }
    if system.variable(a).is_none() {
        return Err(Error::InvalidSystem(format!("unknown variable {a:?}")));
    }
    system.connector(theta0, a).ok_or_else(|| Error::MissingConnector {
        from: theta0.to_string(),
        to: a.to_string(),
    })
}

/// Candidate |a;k⟩ in ambient coordinates:
/// `normalize(P_H U(k_{0a}⁻¹) e_k)`.
pub fn construct_state(
    system: &EVariableSystem,
    h: &FunctionSpaceBasis,
    rep: &RegularRepresentation,
    a: &str,
    k: usize,
) -> Result<Ket> {
    if k >= h.dim() {
        return Err(Error::InvalidSystem(format!("answer index {k} out of range")));
    }
    let connector = transport_element(system, a)?;
    let moved = rep.get(system.action().inverse(connector)) * &h.vectors()[k];
    let projected = h.projector() * moved;
    if projected.norm() < VANISHING_TOL {
        return Err(Error::VanishingProjection {
            variable: a.to_string(),
            answer: k,
        });
    }
    Ket::normalize(projected)
}

/// `I(θ^a(φ) = u_k) = (U(k_{0a}⁻¹) 1_{θ⁰=u_k})(φ)` for every connected
/// variable, answer and point.
pub fn indicator_identity_holds(system: &EVariableSystem, rep: &RegularRepresentation) -> Result<bool> {
    let theta0 = system.theta0();
    for name in system.ordered_names() {
        let Ok(connector) = transport_element(system, name) else {
            continue;
        };
        let theta_a = &system.variables()[name];
        let u = rep.get(system.action().inverse(connector));
        for k in 0..theta0.n_values() {
            let indicator0 = CVector::from_fn(theta0.domain().len(), |p, _| {
                real(if theta0.index_at(p) == k { 1.0 } else { 0.0 })
            });
            let moved = u * indicator0;
            let u_k = theta0.values()[k];
            for p in 0..theta_a.domain().len() {
                let expected = if theta_a.value_at(p) == u_k { 1.0 } else { 0.0 };
                if moved[p] != real(expected) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bound on the Gram residual of each question's states.
    pub orthonormality: f64,
    /// Distinct states must have overlap modulus below `1 − distinctness`.
    pub distinctness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orthonormality: 1e-9,
            distinctness: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableStates {
    pub variable: String,
    pub values: Vec<f64>,
    /// Ambient-space candidates, one per value.
    pub states: Vec<Ket>,
    pub gram_residual: f64,
    pub orthonormal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateLabel {
    pub variable: String,
    pub answer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistinctnessWitness {
    pub first: StateLabel,
    pub second: StateLabel,
    pub overlap_modulus: f64,
}

/// Outcome of checking that each question's candidates form an orthonormal
/// basis of H and that no two distinct (question, answer) pairs give the same
/// state up to phase.
#[derive(Debug, Clone, Serialize)]
pub struct QuestionStateReport {
    pub tolerances: Tolerances,
    pub variables: Vec<VariableStates>,
    /// Row/column labels of `overlap_moduli`.
    pub index: Vec<StateLabel>,
    pub overlap_moduli: Vec<Vec<f64>>,
    pub orthonormal: bool,
    pub distinct: bool,
    pub passed: bool,
    /// Largest overlap among distinct pairs when it reaches `1 − tol`.
    pub witness: Option<DistinctnessWitness>,
}

pub fn verify_question_states(system: &EVariableSystem, tol: Tolerances) -> Result<QuestionStateReport> {
    let h = build_hilbert_space(system.theta0());
    let rep = regular_representation(system.action());

    let mut variables = Vec::new();
    let mut index = Vec::new();
    let mut all = Vec::new();
    for name in system.ordered_names() {
        let theta = &system.variables()[name];
        let states = (0..h.dim())
            .map(|k| construct_state(system, &h, &rep, name, k))
            .collect::<Result<Vec<_>>>()?;
        let raw: Vec<CVector> = states.iter().map(|s| s.amplitudes().clone()).collect();
        let residual = gram_residual(&raw);
        for (k, s) in states.iter().enumerate() {
            index.push(StateLabel {
                variable: name.to_string(),
                answer: k,
            });
            all.push(s.clone());
        }
        variables.push(VariableStates {
            variable: name.to_string(),
            values: theta.values().to_vec(),
            states,
            gram_residual: residual,
            orthonormal: residual <= tol.orthonormality,
        });
    }

    let overlap_moduli: Vec<Vec<f64>> = all
        .iter()
        .map(|a| all.iter().map(|b| a.overlap(b).norm()).collect())
        .collect();
    let mut witness: Option<DistinctnessWitness> = None;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let m = overlap_moduli[i][j];
            if m >= 1.0 - tol.distinctness && witness.as_ref().is_none_or(|w| m > w.overlap_modulus) {
                witness = Some(DistinctnessWitness {
                    first: index[i].clone(),
                    second: index[j].clone(),
                    overlap_modulus: m,
                });
            }
        }
    }
    let orthonormal = variables.iter().all(|v| v.orthonormal);
    let distinct = witness.is_none();
    Ok(QuestionStateReport {
        tolerances: tol,
        variables,
        index,
        overlap_moduli,
        orthonormal,
        distinct,
        passed: orthonormal && distinct,
        witness,
    })
}

/// `A = Σ_k u_k |k⟩⟨k|` for orthonormal states.
pub fn operator_from_states(values: &[f64], states: &[Ket]) -> Result<HermitianOperator> {
    if values.len() != states.len() || states.is_empty() {
        return Err(Error::LengthMismatch {
            expected: states.len(),
            got: values.len(),
        });
    }
    let dim = states[0].dim();
    if states.iter().any(|s| s.dim() != dim) {
        return Err(Error::ShapeMismatch("states of different dimension".into()));
    }
    let raw: Vec<CVector> = states.iter().map(|s| s.amplitudes().clone()).collect();
    let residual = gram_residual(&raw);
    if residual > 1e-9 {
        return Err(Error::NotOrthonormal(residual));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (u, s) in values.iter().zip(states) {
        m += s.projector().scale(*u);
    }
    HermitianOperator::new((&m + m.adjoint()).scale(0.5))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coincidence {
    pub holds: bool,
    /// Ascending.
    pub spectrum: Vec<f64>,
    /// Ascending.
    pub declared: Vec<f64>,
    pub max_gap: f64,
}

/// Whether the sorted spectrum of `a` equals the sorted declared values.
pub fn eigenvalue_value_coincidence(a: &HermitianOperator, declared: &[f64]) -> Coincidence {
    let spectrum = a.eigensystem().values();
    let mut sorted = declared.to_vec();
    sorted.sort_by(f64::total_cmp);
    let max_gap = if spectrum.len() == sorted.len() {
        spectrum.iter().zip(&sorted).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Coincidence {
        holds: max_gap <= COINCIDENCE_TOL,
        spectrum,
        declared: sorted,
        max_gap,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurAverage {
    /// `tr(S) / d`.
    pub lambda: f64,
    /// `max |S − λI|`.
    pub residual: f64,
    pub proportional_to_identity: bool,
}

/// `S = Σ_k U_H(k)|f⟩⟨f|U_H(k)†`, tested for `S = λI`.
pub fn group_average_identity(restricted: &[CMatrix], fiducial: &Ket) -> SchurAverage {
    let d = fiducial.dim();
    let f = fiducial.projector();
    let mut s = CMatrix::zeros(d, d);
    for u in restricted {
        s += u * &f * u.adjoint();
    }
    let lambda = trace(&s).re / d as f64;
    let residual = max_abs(&(s - CMatrix::identity(d, d).scale(lambda)));
    SchurAverage {
        lambda,
        residual,
        proportional_to_identity: residual < SCHUR_TOL,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitAverage {
    /// Value indices of θ⁰ in this orbit of the induced group.
    pub orbit: Vec<usize>,
    pub expected_lambda: f64,
    pub average: SchurAverage,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchurReport {
    pub fiducial_index: usize,
    pub values_transitive: bool,
    /// Average over all of H with fiducial `e_0`.
    pub full: SchurAverage,
    pub full_expected_lambda: f64,
    /// One average per orbit of the induced group on the values of θ⁰.
    pub reduced: Vec<OrbitAverage>,
    pub irreducible_on_h: bool,
}

fn schur_report(system: &EVariableSystem, h: &FunctionSpaceBasis, rep: &RegularRepresentation) -> Result<SchurReport> {
    let restricted = rep.restrict(h)?;
    let induced = induced_group(system.theta0(), system.action())?;
    let order = system.action().order() as f64;
    let full = group_average_identity(&restricted, &Ket::basis(h.dim(), 0));

    let reduced = induced
        .value_orbits()
        .into_iter()
        .map(|orbit| {
            let sub: Vec<CMatrix> = restricted
                .iter()
                .map(|u| CMatrix::from_fn(orbit.len(), orbit.len(), |r, c| u[(orbit[r], orbit[c])]))
                .collect();
            OrbitAverage {
                expected_lambda: order / orbit.len() as f64,
                average: group_average_identity(&sub, &Ket::basis(orbit.len(), 0)),
                orbit,
            }
        })
        .collect();

    Ok(SchurReport {
        fiducial_index: 0,
        values_transitive: induced.is_transitive(),
        full_expected_lambda: order / h.dim() as f64,
        irreducible_on_h: full.proportional_to_identity,
        full,
        reduced,
    })
}

/// Resolution of identity on H from the candidates of one question.
pub fn resolution_for_variable(system: &EVariableSystem, a: &str) -> Result<SpectralResolution> {
    let h = build_hilbert_space(system.theta0());
    let rep = regular_representation(system.action());
    let theta = system
        .variable(a)
        .ok_or_else(|| Error::InvalidSystem(format!("unknown variable {a:?}")))?;
    let kets = (0..h.dim())
        .map(|k| Ket::new(h.coordinates(construct_state(system, &h, &rep, a, k)?.amplitudes())))
        .collect::<Result<Vec<_>>>()?;
    let labels = theta.values().iter().map(|v| v.to_string()).collect();
    Ok(SpectralResolution {
        resolution: ProjectiveResolution::from_kets(labels, &kets)?,
        values: theta.values().to_vec(),
        merged: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableCheck {
    pub variable: String,
    pub permissibility: Permissibility,
    pub induced_group_order: Option<usize>,
    pub values_transitive: Option<bool>,
    pub component_group_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorCheck {
    pub variable: String,
    /// `A = Σ u_k |a;k⟩⟨a;k|` in H coordinates.
    #[serde(serialize_with = "ser_op")]
    pub operator: HermitianOperator,
    pub coincidence: Coincidence,
}

fn ser_op<S: serde::Serializer>(op: &HermitianOperator, s: S) -> std::result::Result<S::Ok, S::Error> {
    serial::cmat::serialize(op.entries(), s)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub schema_version: u32,
    pub system: String,
    pub description: String,
    pub space_size: usize,
    pub group_order: usize,
    pub orbits: Vec<Vec<usize>>,
    pub transitive: bool,
    pub hilbert_dimension: usize,
    pub theta0_values: usize,
    pub basis_residual: f64,
    pub basis_factors_through_theta0: bool,
    pub representation_exact: bool,
    pub indicator_identity: bool,
    pub variables: Vec<VariableCheck>,
    pub generating: GeneratingCheck,
    pub question_states: QuestionStateReport,
    /// Only for questions whose candidates are orthonormal.
    pub operators: Vec<OperatorCheck>,
    /// Absent when θ⁰ is not permissible (H is then not invariant).
    pub schur: Option<SchurReport>,
    pub all_checks_pass: bool,
}

/// Every check on one system.
pub fn reconstruct(system: &EVariableSystem, tol: Tolerances) -> Result<ReconstructionReport> {
    let action = system.action();
    let theta0 = system.theta0();
    let h = build_hilbert_space(theta0);
    let rep = regular_representation(action);

    let mut variables = Vec::new();
    for name in system.ordered_names() {
        let theta = &system.variables()[name];
        let permissibility = check_permissible(theta, action)?;
        let induced = permissibility
            .is_permissible()
            .then(|| induced_group(theta, action))
            .transpose()?;
        variables.push(VariableCheck {
            variable: name.to_string(),
            permissibility,
            induced_group_order: induced.as_ref().map(|g| g.order()),
            values_transitive: induced.as_ref().map(|g| g.is_transitive()),
            component_group_order: system.component_groups()[name].len(),
        });
    }

    let question_states = verify_question_states(system, tol)?;
    let mut operators = Vec::new();
    for vs in question_states.variables.iter().filter(|v| v.orthonormal) {
        let coords = vs
            .states
            .iter()
            .map(|s| Ket::new(h.coordinates(s.amplitudes())))
            .collect::<Result<Vec<_>>>()?;
        let operator = operator_from_states(&vs.values, &coords)?;
        let coincidence = eigenvalue_value_coincidence(&operator, &vs.values);
        operators.push(OperatorCheck {
            variable: vs.variable.clone(),
            operator,
            coincidence,
        });
    }

    let theta0_permissible = variables[0].permissibility.is_permissible();
    let schur = if theta0_permissible {
        Some(schur_report(system, &h, &rep)?)
    } else {
        None
    };

    let representation_exact = rep.is_homomorphism(action);
    let indicator_identity = indicator_identity_holds(system, &rep)?;
    let generating = check_generating_assumption(system);
    let basis_residual = h.orthonormality_residual();
    let all_checks_pass = representation_exact
        && indicator_identity
        && h.dim() == theta0.n_values()
        && basis_residual <= BASIS_TOL
        && theta0_permissible
        && generating.holds
        && question_states.passed
        && operators.iter().all(|o| o.coincidence.holds)
        && schur.as_ref().is_some_and(|s| s.irreducible_on_h);

    Ok(ReconstructionReport {
        schema_version: SCHEMA_VERSION,
        system: system.name().to_string(),
        description: system.description().to_string(),
        space_size: action.n_points(),
        group_order: action.order(),
        orbits: orbits(action),
        transitive: is_transitive(action),
        hilbert_dimension: h.dim(),
        theta0_values: theta0.n_values(),
        basis_residual,
        basis_factors_through_theta0: h.factors_through(theta0),
        representation_exact,
        indicator_identity,
        variables,
        generating,
        question_states,
        operators,
        schur,
        all_checks_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conceptual::FiniteSpace;
    use crate::fixtures;
    use crate::spin::{question_answer_state, spin_operators, Direction, HalfInt, SpinSystem};
    use std::collections::BTreeMap;

    fn fixture(name: &str) -> EVariableSystem {
        fixtures::load(name).unwrap().unwrap()
    }

    #[test]
    fn parity_space_has_two_half_indicators() {
        let sys = fixture("z4_parity");
        let h = build_hilbert_space(sys.theta0());
        assert_eq!(h.dim(), 2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (z, want) in h.vectors()[0].iter().zip([s, 0.0, s, 0.0]) {
            assert!((z - real(want)).norm() < 1e-15);
        }
        assert!(h.factors_through(sys.theta0()));
        assert!(h.orthonormality_residual() < 1e-15);
    }

    #[test]
    fn injective_and_constant_theta0() {
        let space = FiniteSpace::indexed(5).unwrap();
        let h = build_hilbert_space(&EVariableMap::identity(space.clone()));
        assert_eq!(h.dim(), 5);
        assert!(max_abs(&(h.projector() - CMatrix::identity(5, 5))) < 1e-15);

        let constant = EVariableMap::new(space, vec![7.0], vec![0; 5]).unwrap();
        let h = build_hilbert_space(&constant);
        assert_eq!(h.dim(), 1);
        let w = 1.0 / 5f64.sqrt();
        assert!(h.vectors()[0].iter().all(|z| (z.re - w).abs() < 1e-15));
    }

    #[test]
    fn regular_representation_examples() {
        let sys = fixture("z4_injective");
        let rep = regular_representation(sys.action());
        assert_eq!(rep.get(0), &CMatrix::identity(4, 4));
        // r sends φ to φ+1: column φ has its 1 in row φ+1.
        let r = rep.get(1);
        for phi in 0..4 {
            assert_eq!(r[((phi + 1) % 4, phi)], real(1.0));
        }
        for k in 0..4 {
            let inv = sys.action().inverse(k);
            assert_eq!(rep.get(k) * rep.get(inv), CMatrix::identity(4, 4));
        }
        assert!(rep.is_homomorphism(sys.action()));
    }

    #[test]
    fn theta0_states_are_basis_vectors() {
        let sys = fixture("z4_parity");
        let h = build_hilbert_space(sys.theta0());
        let rep = regular_representation(sys.action());
        for k in 0..2 {
            let s = construct_state(&sys, &h, &rep, "0", k).unwrap();
            assert_eq!(s.amplitudes(), &h.vectors()[k]);
        }
    }

    #[test]
    fn full_space_candidate_is_transported_indicator() {
        let base = fixture("z4_injective");
        let k = base.action().clone();
        let theta0 = EVariableMap::identity(k.space().clone());
        // θ¹(φ) = θ⁰(r²φ) = φ + 2 mod 4.
        let half_turn = (0..4).find(|&g| k.act(g, 0) == 2).unwrap();
        let theta1 = EVariableMap::new(k.space().clone(), vec![0.0, 1.0, 2.0, 3.0], vec![2, 3, 0, 1]).unwrap();
        let sys = EVariableSystem::new(
            k,
            BTreeMap::from([("0".into(), theta0), ("1".into(), theta1.clone())]),
            BTreeMap::new(),
            BTreeMap::from([(("0".into(), "1".into()), half_turn)]),
            "0",
        )
        .unwrap();
        let h = build_hilbert_space(sys.theta0());
        let rep = regular_representation(sys.action());
        for u in 0..4 {
            let s = construct_state(&sys, &h, &rep, "1", u).unwrap();
            for p in 0..4 {
                let expected = if theta1.index_at(p) == u { 1.0 } else { 0.0 };
                assert_eq!(s.amplitudes()[p], real(expected));
            }
        }
        assert!(indicator_identity_holds(&sys, &rep).unwrap());
    }

    #[test]
    fn two_question_candidates_have_uniform_overlaps() {
        // Each y-level set meets both x-level sets in one point, so both
        // candidates project to (e_0 + e_1)/√2.
        let sys = fixture("z2z2_two_questions");
        let h = build_hilbert_space(sys.theta0());
        let rep = regular_representation(sys.action());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for k in 0..2 {
            let cand = construct_state(&sys, &h, &rep, "1", k).unwrap();
            let coords = h.coordinates(cand.amplitudes());
            assert!((coords[0] - real(s)).norm() < 1e-15);
            assert!((coords[1] - real(s)).norm() < 1e-15);
        }
    }

    #[test]
    fn missing_connector_reported() {
        let k = fixture("z4_parity").action().clone();
        let p = EVariableMap::new(k.space().clone(), vec![0.0, 1.0], vec![0, 1, 0, 1]).unwrap();
        let sys = EVariableSystem::new(
            k,
            BTreeMap::from([("0".into(), p.clone()), ("1".into(), p)]),
            BTreeMap::new(),
            BTreeMap::new(),
            "0",
        )
        .unwrap();
        assert!(matches!(
            verify_question_states(&sys, Tolerances::default()),
            Err(Error::MissingConnector { .. })
        ));
    }

    #[test]
    fn single_variable_passes_and_relabeling_fails() {
        let report = verify_question_states(&fixture("z4_parity"), Tolerances::default()).unwrap();
        assert!(report.passed);

        let report = verify_question_states(&fixture("z4_relabeled"), Tolerances::default()).unwrap();
        assert!(report.orthonormal);
        assert!(!report.distinct);
        let w = report.witness.unwrap();
        assert_eq!((w.first.variable.as_str(), w.first.answer), ("0", 0));
        assert_eq!((w.second.variable.as_str(), w.second.answer), ("1", 1));
        assert!((w.overlap_modulus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_assembly_examples() {
        let a = operator_from_states(&[1.0, 2.0], &[Ket::basis(2, 0), Ket::basis(2, 1)]).unwrap();
        assert_eq!(a.entries()[(0, 0)], real(1.0));
        assert_eq!(a.entries()[(1, 1)], real(2.0));
        assert!(eigenvalue_value_coincidence(&a, &[2.0, 1.0]).holds);

        let q = SpinSystem::new(1).unwrap();
        let x = Direction::x_axis();
        let states = [
            question_answer_state(&q, &x, HalfInt::from_doubled(1)).unwrap(),
            question_answer_state(&q, &x, HalfInt::from_doubled(-1)).unwrap(),
        ];
        let jx = operator_from_states(&[0.5, -0.5], &states).unwrap();
        assert!(max_abs(&(jx.entries() - spin_operators(&q).jx.entries())) < 1e-12);

        let rep = operator_from_states(&[3.0, 3.0, 1.0], &[Ket::basis(3, 0), Ket::basis(3, 1), Ket::basis(3, 2)])
            .unwrap();
        let es = rep.eigensystem();
        assert_eq!(es.values(), vec![1.0, 3.0, 3.0]);
        assert!(es.is_degenerate());

        let bad = operator_from_states(&[0.0, 1.0], &[Ket::basis(2, 0), Ket::from_real(&[1.0, 1.0]).unwrap()]);
        assert!(matches!(bad, Err(Error::NotOrthonormal(_))));
    }

    #[test]
    fn perturbed_operator_fails_coincidence() {
        let mut m = CMatrix::from_diagonal(&CVector::from_vec(vec![real(1.0), real(2.0)]));
        m[(0, 0)] += real(1e-3);
        let a = HermitianOperator::new(m).unwrap();
        let c = eigenvalue_value_coincidence(&a, &[1.0, 2.0]);
        assert!(!c.holds);
        assert!((c.max_gap - 1e-3).abs() < 1e-12);
        assert!(!eigenvalue_value_coincidence(&a, &[1.0]).holds);
    }

    #[test]
    fn schur_average_examples() {
        let sys = fixture("z4_injective");
        let h = build_hilbert_space(sys.theta0());
        let restricted = regular_representation(sys.action()).restrict(&h).unwrap();
        let avg = group_average_identity(&restricted, &Ket::basis(4, 2));
        assert!(avg.proportional_to_identity);
        assert!((avg.lambda - 1.0).abs() < 1e-15);

        let trivial = vec![CMatrix::identity(2, 2)];
        let avg = group_average_identity(&trivial, &Ket::basis(2, 0));
        assert!(!avg.proportional_to_identity);
        assert!((avg.residual - 0.5).abs() < 1e-15);
    }

    #[test]
    fn restriction_rejects_non_invariant_subspace() {
        let sys = fixture("z4_injective");
        let half = EVariableMap::new(sys.space().clone(), vec![0.0, 1.0], vec![0, 0, 1, 1]).unwrap();
        let h = build_hilbert_space(&half);
        assert!(regular_representation(sys.action()).restrict(&h).is_err());
    }

    #[test]
    fn variable_resolution_from_theta0() {
        let sr = resolution_for_variable(&fixture("z4_parity"), "0").unwrap();
        assert_eq!(sr.resolution.len(), 2);
        assert_eq!(sr.values, vec![0.0, 1.0]);
        assert!(resolution_for_variable(&fixture("z2z2_two_questions"), "1").is_err());
    }
}
