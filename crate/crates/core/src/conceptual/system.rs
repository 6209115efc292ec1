use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::evariable::EVariableMap;
use super::group::{FiniteGroupAction, FiniteSpace};
use crate::error::{Error, Result};
use crate::serial::SCHEMA_VERSION;

/// A family of e-variables θ^a on a common space, the group K, the component
/// groups K^a and the connectors k_ab with θ^b(φ) = θ^a(k_ab φ).
#[derive(Debug, Clone)]
pub struct EVariableSystem {
    name: String,
    description: String,
    action: FiniteGroupAction,
    variables: BTreeMap<String, EVariableMap>,
    component_groups: BTreeMap<String, BTreeSet<usize>>,
    connectors: BTreeMap<(String, String), usize>,
    theta0: String,
}

impl EVariableSystem {
    /// Variables without an entry in `component_groups` get the largest
    /// subgroup of K mapping their level sets onto level sets.
    pub fn new(
        action: FiniteGroupAction,
        variables: BTreeMap<String, EVariableMap>,
        component_groups: BTreeMap<String, Vec<usize>>,
        connectors: BTreeMap<(String, String), usize>,
        theta0: impl Into<String>,
    ) -> Result<Self> {
        let theta0 = theta0.into();
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if !variables.contains_key(&theta0) {
            return bad(format!("designated variable {theta0:?} is not defined"));
        }
        for (name, theta) in &variables {
            if theta.domain() != action.space() {
                return bad(format!("variable {name:?} is defined on a different space"));
            }
        }
        if let Some(name) = component_groups.keys().find(|k| !variables.contains_key(*k)) {
            return bad(format!("component group for unknown variable {name:?}"));
        }

        let mut groups = BTreeMap::new();
        for (name, theta) in &variables {
            let set: BTreeSet<usize> = match component_groups.get(name) {
                Some(elems) => {
                    if let Some(&g) = elems.iter().find(|&&g| g >= action.order()) {
                        return bad(format!("component group {name:?} names element {g} outside K"));
                    }
                    let set: BTreeSet<usize> = elems.iter().copied().collect();
                    if !action.is_subgroup(&set) {
                        return bad(format!("component group {name:?} is not a subgroup of K"));
                    }
                    if !theta.preserved_by(&action, set.iter().copied()) {
                        return bad(format!(
                            "component group {name:?} does not act on the values of its variable"
                        ));
                    }
                    set
                }
                None => (0..action.order())
                    .filter(|&g| theta.preserved_by(&action, [g]))
                    .collect(),
            };
            groups.insert(name.clone(), set);
        }

        for ((from, to), &k) in &connectors {
            let (Some(a), Some(b)) = (variables.get(from), variables.get(to)) else {
                return bad(format!("connector {from}->{to} names an unknown variable"));
            };
            if k >= action.order() {
                return bad(format!("connector {from}->{to} names element {k} outside K"));
            }
            if from == to {
                return bad(format!("connector {from}->{to} joins a variable to itself"));
            }
            if let Some(phi) = (0..action.n_points()).find(|&phi| b.value_at(phi) != a.value_at(action.act(k, phi))) {
                return bad(format!(
                    "connector {from}->{to}: θ^{to}(φ) ≠ θ^{from}(kφ) at point {phi}"
                ));
            }
        }

        Ok(Self {
            name: String::new(),
            description: String::new(),
            action,
            variables,
            component_groups: groups,
            connectors,
            theta0,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>, description: impl Into<String>) -> Self {
        self.name = name.into();
        self.description = description.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn action(&self) -> &FiniteGroupAction {
        &self.action
    }

    pub fn space(&self) -> &FiniteSpace {
        self.action.space()
    }

    pub fn variables(&self) -> &BTreeMap<String, EVariableMap> {
        &self.variables
    }

    pub fn variable(&self, name: &str) -> Option<&EVariableMap> {
        self.variables.get(name)
    }

    pub fn theta0_name(&self) -> &str {
        &self.theta0
    }

    pub fn theta0(&self) -> &EVariableMap {
        &self.variables[&self.theta0]
    }

    /// Variable names with θ⁰ first, then the rest in key order.
    pub fn ordered_names(&self) -> Vec<&str> {
        std::iter::once(self.theta0.as_str())
            .chain(self.variables.keys().map(String::as_str).filter(|n| *n != self.theta0))
            .collect()
    }

    pub fn component_groups(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.component_groups
    }

    pub fn connectors(&self) -> &BTreeMap<(String, String), usize> {
        &self.connectors
    }

    pub fn connector(&self, from: &str, to: &str) -> Option<usize> {
        self.connectors.get(&(from.to_string(), to.to_string())).copied()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec = serde_json::from_str(text)?;
        spec.build()
    }

    pub fn to_spec(&self) -> SystemSpec {
        SystemSpec {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            description: self.description.clone(),
            points: self.space().labels().to_vec(),
            elements: self.action.element_labels().to_vec(),
            compose: self.action.compose_table().to_vec(),
            act: self.action.act_table().to_vec(),
            variables: self
                .variables
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        VariableSpec {
                            values: v.values().to_vec(),
                            assign: v.assignment().to_vec(),
                        },
                    )
                })
                .collect(),
            component_groups: self
                .component_groups
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().copied().collect()))
                .collect(),
            connectors: self
                .connectors
                .iter()
                .map(|((a, b), &k)| (format!("{a}->{b}"), k))
                .collect(),
            theta0: self.theta0.clone(),
        }
    }
}

/// On-disk form of an [`EVariableSystem`]. Indices are 0-based; tables are
/// row-major (`compose[g][h]`, `act[g][φ]`); connector keys read `"a->b"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub points: Vec<String>,
    pub elements: Vec<String>,
    pub compose: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub variables: BTreeMap<String, VariableSpec>,
    #[serde(default)]
    pub component_groups: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub connectors: BTreeMap<String, usize>,
    pub theta0: String,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub values: Vec<f64>,
    pub assign: Vec<usize>,
}

impl SystemSpec {
    pub fn build(self) -> Result<EVariableSystem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidSystem(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let space = FiniteSpace::new(self.points)?;
        let action = FiniteGroupAction::new(space.clone(), self.elements, self.compose, self.act)?;
        let variables = self
            .variables
            .into_iter()
            .map(|(name, v)| Ok((name, EVariableMap::new(space.clone(), v.values, v.assign)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let connectors = self
            .connectors
            .into_iter()
            .map(|(key, k)| {
                let (a, b) = key
                    .split_once("->")
                    .ok_or_else(|| Error::InvalidSystem(format!("connector key {key:?} is not of the form a->b")))?;
                Ok(((a.trim().to_string(), b.trim().to_string()), k))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(
            EVariableSystem::new(action, variables, self.component_groups, connectors, self.theta0)?
                .with_name(self.name, self.description),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratingCheck {
    pub holds: bool,
    pub generated_order: usize,
    pub group_order: usize,
}

/// Whether the component groups K^a alone generate K. Connectors are not
/// included among the generators: a system whose K needs the k_ab to be
/// complete fails the check.
pub fn check_generating_assumption(system: &EVariableSystem) -> GeneratingCheck {
    let generators = system.component_groups.values().flatten().copied();
    let closure = system.action.closure(generators);
    GeneratingCheck {
        holds: closure.len() == system.action.order(),
        generated_order: closure.len(),
        group_order: system.action.order(),
    }
}
