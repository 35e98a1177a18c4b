use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CheckMode, SystemSpec, SystemType, TheoryInstance};
use crate::error::{Error, Result};
use crate::exact::{RMatrix, RVector};

/// On-disk form of a [`TheoryInstance`]. Per-system maps are keyed by system
/// label; composite dimensions by `"A*B"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub mode: CheckMode,
    pub systems: Vec<SystemType>,
    pub pure_states: BTreeMap<String, Vec<RVector>>,
    pub unit_effect: BTreeMap<String, RVector>,
    pub effect_generators: BTreeMap<String, Vec<RVector>>,
    pub measurements: BTreeMap<String, Vec<Vec<RVector>>>,
    pub reversible_group: BTreeMap<String, Vec<RMatrix>>,
    pub composite_dims: BTreeMap<String, usize>,
}

impl TheoryDoc {
    pub fn from_theory(theory: &TheoryInstance) -> Self {
        let mut doc = TheoryDoc {
            name: Some(theory.name().to_string()),
            mode: theory.mode(),
            systems: Vec::new(),
            pure_states: BTreeMap::new(),
            unit_effect: BTreeMap::new(),
            effect_generators: BTreeMap::new(),
            measurements: BTreeMap::new(),
            reversible_group: BTreeMap::new(),
            composite_dims: theory.composite_dims().clone(),
        };
        for spec in theory.systems() {
            let label = spec.system.label.clone();
            doc.systems.push(spec.system.clone());
            doc.pure_states.insert(
                label.clone(),
                spec.pure_states.iter().map(|s| s.vec.clone()).collect(),
            );
            doc.unit_effect
                .insert(label.clone(), spec.unit_effect.vec.clone());
            doc.effect_generators.insert(
                label.clone(),
                spec.effect_generators.iter().map(|e| e.vec.clone()).collect(),
            );
            doc.measurements.insert(
                label.clone(),
                spec.measurements
                    .iter()
                    .map(|m| m.effects.iter().map(|e| e.vec.clone()).collect())
                    .collect(),
            );
            doc.reversible_group.insert(
                label,
                spec.reversible_group.iter().map(|t| t.matrix.clone()).collect(),
            );
        }
        doc
    }

    /// Builds and validates the theory. Missing per-system entries are schema
    /// errors ([`Error::Parse`]); everything else is reported by the
    /// construction checks.
    pub fn into_theory(mut self) -> Result<TheoryInstance> {
        let mut specs = Vec::with_capacity(self.systems.len());
        for system in &self.systems {
            let label = &system.label;
            let spec = SystemSpec::from_vectors(
                system.clone(),
                take(&mut self.pure_states, label, "pure_states")?,
                take(&mut self.unit_effect, label, "unit_effect")?,
                take(&mut self.effect_generators, label, "effect_generators")?,
                take(&mut self.measurements, label, "measurements")?,
                take(&mut self.reversible_group, label, "reversible_group")?,
            )?;
            specs.push(spec);
        }
        TheoryInstance::new(
            self.name.unwrap_or_else(|| "custom".to_string()),
            self.mode,
            specs,
            self.composite_dims,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("theory documents always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn take<T>(map: &mut BTreeMap<String, T>, label: &str, field: &str) -> Result<T> {
    map.remove(label)
        .ok_or_else(|| Error::Parse(format!("`{field}` has no entry for system `{label}`")))
}

impl TheoryInstance {
    pub fn to_json(&self) -> String {
        TheoryDoc::from_theory(self).to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        TheoryDoc::from_json(text)?.into_theory()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = r#"{
        "systems": [{"label": "A", "dim": 2}],
        "pure_states": {"A": [["1", "0"], ["0", "1"]]},
        "unit_effect": {"A": ["1", "1"]},
        "effect_generators": {"A": [["1", "0"], ["0", "1"]]},
        "measurements": {"A": [[["1", "0"], ["0", "1"]]]},
        "reversible_group": {"A": [[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "0"]]]},
        "composite_dims": {"A*A": 4}
    }"#;

    #[test]
    fn parses_minimal_document() {
        let t = TheoryInstance::from_json(CLASSICAL).unwrap();
        assert_eq!(t.systems().len(), 1);
        assert_eq!(t.primary().reversible_group.len(), 2);
        let sys = &t.primary().system;
        assert_eq!(t.composite_dim(sys, sys), Some(4));
    }

    #[test]
    fn round_trip() {
        let t = TheoryInstance::from_json(CLASSICAL).unwrap();
        let again = TheoryInstance::from_json(&t.to_json()).unwrap();
        assert_eq!(again.systems(), t.systems());
    }

    #[test]
    fn missing_entry_is_schema_error() {
        let text = CLASSICAL.replace(r#""unit_effect": {"A": ["1", "1"]},"#, r#""unit_effect": {},"#);
        assert!(matches!(TheoryInstance::from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_rational_is_schema_error() {
        let text = CLASSICAL.replace(r#"["1", "1"]"#, r#"["one", "1"]"#);
        assert!(matches!(TheoryInstance::from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn unclosed_group_is_invariant_error() {
        let text = CLASSICAL.replace(
            r#"[[["1", "0"], ["0", "1"]], [["0", "1"], ["1", "0"]]]"#,
            r#"[[["0", "1"], ["1", "0"]]]"#,
        );
        assert!(matches!(
            TheoryInstance::from_json(&text),
            Err(Error::GroupNotClosed { .. })
        ));
    }

    #[test]
    fn unnormalised_state_is_invariant_error() {
        let text = CLASSICAL.replace(r#"[["1", "0"], ["0", "1"]]}"#, r#"[["1", "1"], ["0", "1"]]}"#);
        assert!(matches!(
            TheoryInstance::from_json(&text),
            Err(Error::InvalidTheory(_))
        ));
    }
}
