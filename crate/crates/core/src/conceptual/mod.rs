//! Finite conceptual-variable structures: the space Φ, a group K acting on
//! it, e-variables θ^a: Φ → {u_k}, and the exhaustive checks built on them
//! (permissibility, induced value groups, orbits, generation of K).
//!
//! Everything here is finite and decided by enumeration; counting measure
//! plays the role of the invariant measure on Φ.

mod evariable;
mod group;
mod system;

pub use evariable::{check_permissible, induced_group, EVariableMap, InducedGroup, Permissibility};
pub use group::{is_transitive, orbits, FiniteGroupAction, FiniteSpace};
pub use system::{check_generating_assumption, EVariableSystem, GeneratingCheck, SystemSpec, VariableSpec};
