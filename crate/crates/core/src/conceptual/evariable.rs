use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::group::{FiniteGroupAction, FiniteSpace};
use crate::error::{Error, Result};

/// θ: Φ → {u_1..u_d}, total and onto its declared values.
#[derive(Debug, Clone, PartialEq)]
pub struct EVariableMap {
    domain: FiniteSpace,
    values: Vec<f64>,
    assign: Vec<usize>,
}

impl EVariableMap {
    pub fn new(domain: FiniteSpace, values: Vec<f64>, assign: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidVariable("no values declared".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVariable("values must be finite".into()));
        }
        for (i, a) in values.iter().enumerate() {
            if values[..i].contains(a) {
                return Err(Error::DuplicateValues(format!("value {a} declared twice")));
            }
        }
        if assign.len() != domain.len() {
            return Err(Error::InvalidVariable(format!(
                "assign has {} entries for {} points",
                assign.len(),
                domain.len()
            )));
        }
        if let Some(&bad) = assign.iter().find(|&&k| k >= values.len()) {
            return Err(Error::InvalidVariable(format!("value index {bad} out of range")));
        }
        let hit: BTreeSet<usize> = assign.iter().copied().collect();
        if hit.len() != values.len() {
            return Err(Error::InvalidVariable("some declared value is never attained".into()));
        }
        Ok(Self { domain, values, assign })
    }

    /// θ(φ) = φ with values `0..n`.
    pub fn identity(domain: FiniteSpace) -> Self {
        let n = domain.len();
        Self::new(domain, (0..n).map(|i| i as f64).collect(), (0..n).collect())
            .expect("identity map is valid")
    }

    pub fn domain(&self) -> &FiniteSpace {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    /// Number of distinct values `d`.
    pub fn n_values(&self) -> usize {
        self.values.len()
    }

    /// Value index at `point`.
    pub fn index_at(&self, point: usize) -> usize {
        self.assign[point]
    }

    pub fn value_at(&self, point: usize) -> f64 {
        self.values[self.assign[point]]
    }

    /// `{φ : θ(φ) = u_k}`, ascending.
    pub fn level_set(&self, k: usize) -> Vec<usize> {
        (0..self.assign.len()).filter(|&p| self.assign[p] == k).collect()
    }

    /// Same level sets, new value labels.
    pub fn relabel(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        Self::new(self.domain.clone(), values, self.assign.clone())
    }

    /// Whether every element of `elements` maps each level set onto a level set.
    pub fn preserved_by(&self, action: &FiniteGroupAction, elements: impl IntoIterator<Item = usize>) -> bool {
        elements.into_iter().all(|g| {
            (0..self.n_values()).all(|k| {
                let image: BTreeSet<usize> = self.level_set(k).into_iter().map(|p| action.act(g, p)).collect();
                let target = self.index_at(*image.iter().next().expect("level sets are nonempty"));
                image == self.level_set(target).into_iter().collect()
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Permissibility {
    Permissible,
    /// θ(φ1) = θ(φ2) but θ(kφ1) ≠ θ(kφ2).
    Violated { element: usize, first: usize, second: usize },
}

impl Permissibility {
    pub fn is_permissible(&self) -> bool {
        matches!(self, Permissibility::Permissible)
    }
}

fn first_violation(
    theta: &EVariableMap,
    action: &FiniteGroupAction,
    elements: impl IntoIterator<Item = usize>,
) -> Option<(usize, usize, usize)> {
    let p = theta.domain.len();
    for k in elements {
        for a in 0..p {
            for b in (a + 1)..p {
                if theta.assign[a] == theta.assign[b]
                    && theta.assign[action.act(k, a)] != theta.assign[action.act(k, b)]
                {
                    return Some((k, a, b));
                }
            }
        }
    }
    None
}

fn check_domain(theta: &EVariableMap, action: &FiniteGroupAction) -> Result<()> {
    if theta.domain != *action.space() {
        return Err(Error::DomainMismatch {
            variable: theta.domain.len(),
            action: action.n_points(),
        });
    }
    Ok(())
}

/// Exhaustive check that equal θ-values stay equal under every group element.
pub fn check_permissible(theta: &EVariableMap, action: &FiniteGroupAction) -> Result<Permissibility> {
    check_domain(theta, action)?;
    Ok(match first_violation(theta, action, 0..action.order()) {
        None => Permissibility::Permissible,
        Some((element, first, second)) => Permissibility::Violated { element, first, second },
    })
}

/// The group G on the values of a permissible θ, defined by `(gθ)(φ) = θ(kφ)`,
/// together with the homomorphism `K → G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedGroup {
    /// Distinct permutations of value indices, `perm[v] = g(v)`, in order of
    /// first appearance along the elements of K.
    pub permutations: Vec<Vec<usize>>,
    /// `homomorphism[k]` is the index into `permutations` of the image of `k`.
    pub homomorphism: Vec<usize>,
}

impl InducedGroup {
    pub fn order(&self) -> usize {
        self.permutations.len()
    }

    /// Index of `g∘h` (apply `h` first).
    pub fn compose(&self, g: usize, h: usize) -> usize {
        let prod: Vec<usize> = self.permutations[h].iter().map(|&v| self.permutations[g][v]).collect();
        self.permutations
            .iter()
            .position(|p| *p == prod)
            .expect("image of a homomorphism is closed")
    }

    /// Orbits of G on the value indices, each sorted, ordered by least member.
    pub fn value_orbits(&self) -> Vec<Vec<usize>> {
        let d = self.permutations.first().map_or(0, Vec::len);
        let mut seen = vec![false; d];
        let mut parts = Vec::new();
        for v in 0..d {
            if seen[v] {
                continue;
            }
            let part: BTreeSet<usize> = self.permutations.iter().map(|p| p[v]).collect();
            for &x in &part {
                seen[x] = true;
            }
            parts.push(part.into_iter().collect());
        }
        parts
    }

    pub fn is_transitive(&self) -> bool {
        self.value_orbits().len() == 1
    }
}

pub fn induced_group(theta: &EVariableMap, action: &FiniteGroupAction) -> Result<InducedGroup> {
    if let Permissibility::Violated { element, first, second } = check_permissible(theta, action)? {
        return Err(Error::NotPermissible { element, first, second });
    }
    let representative: Vec<usize> = (0..theta.n_values())
        .map(|k| theta.level_set(k)[0])
        .collect();

    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut permutations = Vec::new();
    let mut homomorphism = Vec::with_capacity(action.order());
    for k in 0..action.order() {
        let perm: Vec<usize> = representative
            .iter()
            .map(|&phi| theta.index_at(action.act(k, phi)))
            .collect();
        let id = *index.entry(perm.clone()).or_insert_with(|| {
            permutations.push(perm);
            permutations.len() - 1
        });
        homomorphism.push(id);
    }
    let group = InducedGroup { permutations, homomorphism };

    for a in 0..action.order() {
        for b in 0..action.order() {
            let lhs = group.homomorphism[action.compose(a, b)];
            let rhs = group.compose(group.homomorphism[a], group.homomorphism[b]);
            if lhs != rhs {
                return Err(Error::InvalidGroup(format!(
                    "induced map is not a homomorphism at ({a}, {b})"
                )));
            }
        }
    }
    Ok(group)
}
