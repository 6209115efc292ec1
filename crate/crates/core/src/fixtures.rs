//! E-variable systems shipped with the crate, embedded from `fixtures/*.json`.

use crate::conceptual::EVariableSystem;
use crate::error::Result;

/// `(name, json)` for every shipped system.
pub const ALL: &[(&str, &str)] = &[
    ("z4_injective", include_str!("../fixtures/z4_injective.json")),
    ("z4_parity", include_str!("../fixtures/z4_parity.json")),
    ("z2z2_two_questions", include_str!("../fixtures/z2z2_two_questions.json")),
    ("spekkens", include_str!("../fixtures/spekkens.json")),
    ("z4_relabeled", include_str!("../fixtures/z4_relabeled.json")),
    ("block", include_str!("../fixtures/block.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ALL.iter().map(|(n, _)| *n)
}

/// Parses a shipped system by name; `None` for unknown names.
pub fn load(name: &str) -> Option<Result<EVariableSystem>> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| EVariableSystem::from_json(text))
}

pub fn load_all() -> Result<Vec<EVariableSystem>> {
    ALL.iter().map(|(_, text)| EVariableSystem::from_json(text)).collect()
}
