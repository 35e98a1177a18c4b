//! Finitely generated operational theories.
//!
//! A [`TheoryInstance`] lists, per system type, its pure states (the extreme
//! points of the state set), a unit effect, generators of the effect cone, the
//! allowed complete measurements and a finite group of reversible
//! transformations. With everything listed, the structural questions asked
//! about a theory reduce to exact rank, LP and enumeration problems.

mod json;
mod ops;
mod principles;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{RMatrix, RVector, Rational};

pub use json::TheoryDoc;
pub use ops::{
    coarse_grain, compose, compose_effects, is_completely_mixed, is_pure, pairing,
    perfectly_distinguishable,
};
pub use principles::{
    check_bit_symmetry, check_causality, check_tomographic_locality, Certificate, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemType {
    pub label: String,
    pub dim: usize,
}

impl SystemType {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
        }
    }

    /// The system carrying the tensor product of two state spaces.
    pub fn product(&self, other: &SystemType) -> SystemType {
        SystemType::new(
            composite_key(&self.label, &other.label),
            self.dim * other.dim,
        )
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.label, self.dim)
    }
}

pub(crate) fn composite_key(a: &str, b: &str) -> String {
    format!("{a}*{b}")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub system: SystemType,
    pub vec: RVector,
}

impl State {
    pub fn new(system: &SystemType, vec: RVector) -> Result<Self> {
        check_len(system, &vec)?;
        Ok(Self {
            system: system.clone(),
            vec,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Effect {
    pub system: SystemType,
    pub vec: RVector,
}

impl Effect {
    pub fn new(system: &SystemType, vec: RVector) -> Result<Self> {
        check_len(system, &vec)?;
        Ok(Self {
            system: system.clone(),
            vec,
        })
    }
}

fn check_len(system: &SystemType, vec: &RVector) -> Result<()> {
    if vec.dim() != system.dim {
        return Err(Error::DimensionMismatch {
            expected: system.dim,
            got: vec.dim(),
        });
    }
    Ok(())
}

/// A complete measurement: one effect per pointer outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub effects: Vec<Effect>,
}

impl Measurement {
    pub fn new(effects: Vec<Effect>) -> Result<Self> {
        if let Some(first) = effects.first() {
            if let Some(other) = effects.iter().find(|e| e.system != first.system) {
                return Err(Error::SystemMismatch {
                    left: first.system.label.clone(),
                    right: other.system.label.clone(),
                });
            }
        }
        Ok(Self { effects })
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    /// Coordinate-wise sum of all effects.
    pub fn total(&self) -> Option<RVector> {
        let first = self.effects.first()?;
        RVector::sum(self.effects.iter().map(|e| &e.vec), first.system.dim).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformation {
    pub system_in: SystemType,
    pub system_out: SystemType,
    pub matrix: RMatrix,
    pub reversible: bool,
}

impl Transformation {
    pub fn apply(&self, s: &State) -> Result<State> {
        if s.system != self.system_in {
            return Err(Error::SystemMismatch {
                left: self.system_in.label.clone(),
                right: s.system.label.clone(),
            });
        }
        State::new(&self.system_out, self.matrix.mul_vec(&s.vec)?)
    }
}

/// Whether a passed check is a theorem about the theory or only evidence at
/// the sampling resolution the instance was built with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    #[default]
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "sampled-evidence")]
    SampledEvidence,
}

impl CheckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Exact => "exact",
            CheckMode::SampledEvidence => "sampled-evidence",
        }
    }
}

/// Everything a theory lists about one system type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub system: SystemType,
    pub pure_states: Vec<State>,
    pub unit_effect: Effect,
    pub effect_generators: Vec<Effect>,
    pub measurements: Vec<Measurement>,
    pub reversible_group: Vec<Transformation>,
}

impl SystemSpec {
    /// Assembles a system from raw coordinate lists.
    pub fn from_vectors(
        system: SystemType,
        pure_states: Vec<RVector>,
        unit_effect: RVector,
        effect_generators: Vec<RVector>,
        measurements: Vec<Vec<RVector>>,
        reversible_group: Vec<RMatrix>,
    ) -> Result<Self> {
        let sys = &system;
        Ok(Self {
            pure_states: pure_states
                .into_iter()
                .map(|v| State::new(sys, v))
                .collect::<Result<_>>()?,
            unit_effect: Effect::new(sys, unit_effect)?,
            effect_generators: effect_generators
                .into_iter()
                .map(|v| Effect::new(sys, v))
                .collect::<Result<_>>()?,
            measurements: measurements
                .into_iter()
                .map(|m| {
                    Measurement::new(
                        m.into_iter()
                            .map(|v| Effect::new(sys, v))
                            .collect::<Result<_>>()?,
                    )
                })
                .collect::<Result<_>>()?,
            reversible_group: reversible_group
                .into_iter()
                .map(|matrix| {
                    if matrix.rows() != sys.dim || matrix.cols() != sys.dim {
                        return Err(Error::DimensionMismatch {
                            expected: sys.dim,
                            got: matrix.rows().max(matrix.cols()),
                        });
                    }
                    Ok(Transformation {
                        system_in: sys.clone(),
                        system_out: sys.clone(),
                        matrix,
                        reversible: true,
                    })
                })
                .collect::<Result<_>>()?,
            system,
        })
    }

    /// Image of each pure state under each group element, as indices into
    /// `pure_states`. Validated at construction, so every image exists.
    pub fn group_action(&self) -> Vec<Vec<usize>> {
        let index: HashMap<&RVector, usize> = self
            .pure_states
            .iter()
            .enumerate()
            .map(|(i, s)| (&s.vec, i))
            .collect();
        self.reversible_group
            .iter()
            .map(|t| {
                self.pure_states
                    .iter()
                    .map(|s| {
                        let image = t.matrix.mul_vec(&s.vec).expect("validated dimensions");
                        index[&image]
                    })
                    .collect()
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let label = &self.system.label;
        if self.system.dim == 0 {
            return Err(Error::InvalidTheory(format!("system `{label}` has dimension 0")));
        }
        if self.pure_states.is_empty() {
            return Err(Error::InvalidTheory(format!("system `{label}` lists no pure states")));
        }
        let mut seen = HashSet::new();
        for (i, s) in self.pure_states.iter().enumerate() {
            let norm = self.unit_effect.vec.dot(&s.vec)?;
            if !norm.is_one() {
                return Err(Error::InvalidTheory(format!(
                    "pure state {i} of `{label}` has normalisation {norm}"
                )));
            }
            if !seen.insert(&s.vec) {
                return Err(Error::InvalidTheory(format!(
                    "pure state {i} of `{label}` is listed twice"
                )));
            }
        }
        let listed = self
            .effect_generators
            .iter()
            .chain(self.measurements.iter().flat_map(|m| &m.effects));
        for e in listed {
            for s in &self.pure_states {
                let p = e.vec.dot(&s.vec)?;
                if p.is_negative() || p > Rational::one() {
                    return Err(Error::InvalidTheory(format!(
                        "effect {} on state {} of `{label}` gives probability {p}",
                        e.vec, s.vec
                    )));
                }
            }
        }
        for m in &self.measurements {
            if m.effects.is_empty() {
                return Err(Error::InvalidTheory(format!(
                    "`{label}` lists a measurement with no outcomes"
                )));
            }
        }
        self.validate_group()
    }

    fn validate_group(&self) -> Result<()> {
        let label = &self.system.label;
        let not_closed = |reason: String| Error::GroupNotClosed {
            system: label.clone(),
            reason,
        };
        if self.reversible_group.is_empty() {
            return Err(not_closed("group is empty".into()));
        }
        let elements: HashSet<&RMatrix> =
            self.reversible_group.iter().map(|t| &t.matrix).collect();
        if !elements.contains(&RMatrix::identity(self.system.dim)) {
            return Err(not_closed("identity missing".into()));
        }
        for (i, g) in self.reversible_group.iter().enumerate() {
            for (j, h) in self.reversible_group.iter().enumerate() {
                let gh = g.matrix.mul(&h.matrix)?;
                if !elements.contains(&gh) {
                    return Err(not_closed(format!("product of elements {i} and {j} missing")));
                }
            }
        }
        let pure: HashSet<&RVector> = self.pure_states.iter().map(|s| &s.vec).collect();
        for (i, g) in self.reversible_group.iter().enumerate() {
            for s in &self.pure_states {
                if !pure.contains(&g.matrix.mul_vec(&s.vec)?) {
                    return Err(Error::InvalidTheory(format!(
                        "group element {i} of `{label}` maps pure state {} outside the pure states",
                        s.vec
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A finitely generated theory. Immutable once built; construction checks
/// dimensions, normalisation, effect validity and group closure.
///
/// Whether listed measurements all sum to the unit effect is deliberately not
/// a construction check: that is what [`check_causality`] decides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryInstance {
    name: String,
    mode: CheckMode,
    systems: Vec<SystemSpec>,
    composite_dims: BTreeMap<String, usize>,
}

impl TheoryInstance {
    pub fn new(
        name: impl Into<String>,
        mode: CheckMode,
        systems: Vec<SystemSpec>,
        composite_dims: BTreeMap<String, usize>,
    ) -> Result<Self> {
        let mut labels = HashSet::new();
        for s in &systems {
            if !labels.insert(s.system.label.as_str()) {
                return Err(Error::InvalidTheory(format!(
                    "system `{}` declared twice",
                    s.system.label
                )));
            }
            s.validate()?;
        }
        for key in composite_dims.keys() {
            let ok = key
                .split_once('*')
                .is_some_and(|(a, b)| labels.contains(a) && labels.contains(b));
            if !ok {
                return Err(Error::InvalidTheory(format!(
                    "composite `{key}` does not name two declared systems"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            mode,
            systems,
            composite_dims,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> CheckMode {
        self.mode
    }

    pub fn systems(&self) -> &[SystemSpec] {
        &self.systems
    }

    pub fn system(&self, label: &str) -> Result<&SystemSpec> {
        self.systems
            .iter()
            .find(|s| s.system.label == label)
            .ok_or_else(|| Error::UnknownSystem(label.to_string()))
    }

    /// The single system of a one-system theory (or the first declared).
    pub fn primary(&self) -> &SystemSpec {
        &self.systems[0]
    }

    pub fn composite_dims(&self) -> &BTreeMap<String, usize> {
        &self.composite_dims
    }

    pub fn composite_dim(&self, a: &SystemType, b: &SystemType) -> Option<usize> {
        self.composite_dims
            .get(&composite_key(&a.label, &b.label))
            .or_else(|| self.composite_dims.get(&composite_key(&b.label, &a.label)))
            .copied()
    }

    pub(crate) fn spec_for(&self, system: &SystemType) -> Result<&SystemSpec> {
        let spec = self.system(&system.label)?;
        if spec.system != *system {
            return Err(Error::SystemMismatch {
                left: spec.system.to_string(),
                right: system.to_string(),
            });
        }
        Ok(spec)
    }
}

/// Closes a set of generator matrices under multiplication. Used by the
/// constructors of the shipped theories; the result includes the identity.
pub fn generate_group(dim: usize, generators: &[RMatrix]) -> Result<Vec<RMatrix>> {
    let mut elements = vec![RMatrix::identity(dim)];
    let mut seen: HashSet<RMatrix> = elements.iter().cloned().collect();
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for g in generators {
            let next = g.mul(&current)?;
            if seen.insert(next.clone()) {
                elements.push(next);
            }
        }
    }
    Ok(elements)
}
