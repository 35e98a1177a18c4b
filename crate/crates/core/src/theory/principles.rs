//! Causality, tomographic locality and bit-symmetry checks.
//!
//! All enumerations run in listed order and stop at the first witness, so
//! certificates are deterministic.

use std::collections::HashSet;
use std::fmt;

use super::ops::perfectly_distinguishable;
use super::{SystemType, TheoryInstance};
use crate::error::{Error, Result};
use crate::exact::{RMatrix, RVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A listed measurement whose effects do not sum to the unit effect.
    UnitMismatch {
        system: String,
        measurement: usize,
        sum: RVector,
        unit: RVector,
    },
    /// Rank of the product pure states against the declared joint dimension.
    ProductSpan {
        composite: String,
        product_rank: usize,
        composite_dim: usize,
    },
    /// Fewer than two ordered pairs of pure, perfectly distinguishable states.
    NoDistinguishablePairs { system: String, pairs: usize },
    /// No listed group element maps the `from` pair onto the `to` pair
    /// (indices into the pure-state list).
    UnmappablePair {
        system: String,
        from: (usize, usize),
        to: (usize, usize),
        group_order: usize,
    },
    /// Every distinguishable pair lies in one orbit of the listed group.
    Transitive {
        system: String,
        pairs: usize,
        group_order: usize,
    },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::UnitMismatch {
                system,
                measurement,
                sum,
                unit,
            } => write!(
                f,
                "{system}: measurement {measurement} sums to {sum}, unit effect is {unit}"
            ),
            Certificate::ProductSpan {
                composite,
                product_rank,
                composite_dim,
            } => write!(
                f,
                "{composite}: product states span {product_rank} of {composite_dim} dimensions"
            ),
            Certificate::NoDistinguishablePairs { system, pairs } => write!(
                f,
                "{system}: {pairs} ordered distinguishable pure pairs, holds vacuously"
            ),
            Certificate::UnmappablePair {
                system,
                from,
                to,
                group_order,
            } => write!(
                f,
                "{system}: no element of the listed group (order {group_order}) maps pair {from:?} to {to:?}"
            ),
            Certificate::Transitive {
                system,
                pairs,
                group_order,
            } => write!(
                f,
                "{system}: listed group (order {group_order}) is transitive on {pairs} ordered distinguishable pure pairs"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    fn pass(certificate: Option<Certificate>) -> Self {
        Self {
            holds: true,
            certificate,
        }
    }

    fn fail(certificate: Certificate) -> Self {
        Self {
            holds: false,
            certificate: Some(certificate),
        }
    }
}

/// Every listed measurement of every system must sum to that system's unit
/// effect. For a finitely generated theory this is what makes the marginal
/// of a preparation independent of the measurement that follows it.
pub fn check_causality(theory: &TheoryInstance) -> Verdict {
    for spec in theory.systems() {
        let unit = &spec.unit_effect.vec;
        for (i, m) in spec.measurements.iter().enumerate() {
            let sum = m.total().unwrap_or_else(|| RVector::zeros(spec.system.dim));
            if &sum != unit {
                return Verdict::fail(Certificate::UnitMismatch {
                    system: spec.system.label.clone(),
                    measurement: i,
                    sum,
                    unit: unit.clone(),
                });
            }
        }
    }
    Verdict::pass(None)
}

/// Product pure states of `a` and `b` must span the declared joint state
/// space, otherwise local statistics cannot determine every joint state.
pub fn check_tomographic_locality(
    theory: &TheoryInstance,
    a: &SystemType,
    b: &SystemType,
) -> Result<Verdict> {
    let sa = theory.spec_for(a)?;
    let sb = theory.spec_for(b)?;
    let composite_dim = theory.composite_dim(a, b).ok_or_else(|| {
        Error::InvalidTheory(format!(
            "no composite dimension declared for {}*{}",
            a.label, b.label
        ))
    })?;
    let rows: Vec<RVector> = sa
        .pure_states
        .iter()
        .flat_map(|x| sb.pure_states.iter().map(move |y| x.vec.tensor(&y.vec)))
        .collect();
    let product_rank = RMatrix::from_rows(&rows)?.rank();
    let certificate = Certificate::ProductSpan {
        composite: super::composite_key(&a.label, &b.label),
        product_rank,
        composite_dim,
    };
    Ok(if product_rank == composite_dim {
        Verdict::pass(Some(certificate))
    } else {
        Verdict::fail(certificate)
    })
}

/// Every ordered pair of pure, perfectly distinguishable states must be
/// mapped onto every other such pair by some listed reversible transformation.
///
/// The group is closed (checked at construction), so it suffices that every
/// pair lies in the orbit of the first pair found.
pub fn check_bit_symmetry(theory: &TheoryInstance, system: &SystemType) -> Result<Verdict> {
    let spec = theory.spec_for(system)?;
    let label = spec.system.label.clone();
    let pure = &spec.pure_states;

    let mut pairs = Vec::new();
    for i in 0..pure.len() {
        for j in 0..pure.len() {
            if i == j {
                continue;
            }
            let candidates = [pure[i].clone(), pure[j].clone()];
            if perfectly_distinguishable(&candidates, theory)?.is_some() {
                pairs.push((i, j));
            }
        }
    }
    if pairs.len() < 2 {
        return Ok(Verdict::pass(Some(Certificate::NoDistinguishablePairs {
            system: label,
            pairs: pairs.len(),
        })));
    }

    let action = spec.group_action();
    let reference = pairs[0];
    let orbit: HashSet<(usize, usize)> = action
        .iter()
        .map(|perm| (perm[reference.0], perm[reference.1]))
        .collect();
    if let Some(&to) = pairs.iter().find(|p| !orbit.contains(p)) {
        return Ok(Verdict::fail(Certificate::UnmappablePair {
            system: label,
            from: reference,
            to,
            group_order: action.len(),
        }));
    }
    Ok(Verdict::pass(Some(Certificate::Transitive {
        system: label,
        pairs: pairs.len(),
        group_order: action.len(),
    })))
}
