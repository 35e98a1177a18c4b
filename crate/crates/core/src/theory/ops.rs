use std::collections::HashSet;

use num_traits::{One, Zero};

use super::{Effect, Measurement, State, TheoryInstance};
use crate::error::{Error, Result};
use crate::exact::{cone_feasible, RVector, Rational};

/// Probability of the effect firing on the state: the coordinate inner product.
pub fn pairing(e: &Effect, s: &State) -> Result<Rational> {
    if e.system != s.system {
        return Err(Error::SystemMismatch {
            left: e.system.to_string(),
            right: s.system.to_string(),
        });
    }
    e.vec.dot(&s.vec)
}

/// Parallel composition of two states.
pub fn compose(s1: &State, s2: &State) -> State {
    State {
        system: s1.system.product(&s2.system),
        vec: s1.vec.tensor(&s2.vec),
    }
}

/// Parallel composition of two effects.
pub fn compose_effects(e1: &Effect, e2: &Effect) -> Effect {
    Effect {
        system: e1.system.product(&e2.system),
        vec: e1.vec.tensor(&e2.vec),
    }
}

/// Merges outcomes: effect `j` of the result is the sum of the effects whose
/// indices make up block `j` of `partition`.
pub fn coarse_grain(m: &Measurement, partition: &[Vec<usize>]) -> Result<Measurement> {
    let mut seen = HashSet::new();
    for &i in partition.iter().flatten() {
        if i >= m.outcomes() {
            return Err(Error::InvalidPartition(format!(
                "outcome {i} out of range for {} outcomes",
                m.outcomes()
            )));
        }
        if !seen.insert(i) {
            return Err(Error::InvalidPartition(format!("outcome {i} appears twice")));
        }
    }
    if seen.len() != m.outcomes() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} of {} outcomes",
            seen.len(),
            m.outcomes()
        )));
    }
    if partition.iter().any(Vec::is_empty) {
        return Err(Error::InvalidPartition("empty block".into()));
    }
    let system = &m.effects[0].system;
    let effects = partition
        .iter()
        .map(|block| {
            let vec = RVector::sum(block.iter().map(|&i| &m.effects[i].vec), system.dim)?;
            Effect::new(system, vec)
        })
        .collect::<Result<_>>()?;
    Measurement::new(effects)
}

/// Coordinate equalities pinning a vector to `target`.
fn equals(target: &RVector) -> Vec<(RVector, Rational)> {
    (0..target.dim())
        .map(|k| (RVector::basis(target.dim(), k), target[k].clone()))
        .collect()
}

/// Whether `s` is an extreme point of the theory's state set.
///
/// Extreme points of a polytope are among its listed vertices, so `s` is pure
/// exactly when it is listed and is not a convex mixture of the other listed
/// pure states.
pub fn is_pure(s: &State, theory: &TheoryInstance) -> Result<bool> {
    let spec = theory.spec_for(&s.system)?;
    if !spec.pure_states.iter().any(|p| p.vec == s.vec) {
        return Ok(false);
    }
    let others: Vec<RVector> = spec
        .pure_states
        .iter()
        .filter(|p| p.vec != s.vec)
        .map(|p| p.vec.clone())
        .collect();
    Ok(cone_feasible(&others, &equals(&s.vec))?.is_none())
}

/// Whether every pure state refines `s`: for each pure `ρ` some `p > 0` leaves
/// `s - p·ρ` inside the state cone.
///
/// Solved as `λ·s - Σ c·g = ρ` with `λ, c >= 0`; `λ = 0` is impossible since
/// the unit effect would assign `-Σc = 1`, so feasibility gives `p = 1/λ`.
pub fn is_completely_mixed(s: &State, theory: &TheoryInstance) -> Result<bool> {
    let spec = theory.spec_for(&s.system)?;
    let mut generators = vec![s.vec.clone()];
    generators.extend(spec.pure_states.iter().map(|p| -&p.vec));
    for rho in &spec.pure_states {
        if cone_feasible(&generators, &equals(&rho.vec))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches the theory's effect cone for a measurement with
/// `(e_i|σ_j) = δ_ij` whose effects sum to the unit effect.
///
/// All effects are solved for in one LP over block-stacked copies of the
/// effect generators.
pub fn perfectly_distinguishable(
    states: &[State],
    theory: &TheoryInstance,
) -> Result<Option<Measurement>> {
    let Some(first) = states.first() else {
        return Ok(None);
    };
    let spec = theory.spec_for(&first.system)?;
    for s in states {
        if s.system != first.system {
            return Err(Error::SystemMismatch {
                left: first.system.to_string(),
                right: s.system.to_string(),
            });
        }
    }
    let n = states.len();
    let d = spec.system.dim;
    let stacked = n * d;
    let embed = |block: usize, v: &RVector| -> RVector {
        let mut out = vec![Rational::zero(); stacked];
        out[block * d..(block + 1) * d].clone_from_slice(v.coords());
        out.into()
    };

    let gens = &spec.effect_generators;
    if gens.is_empty() {
        return Ok(None);
    }
    let generators: Vec<RVector> = (0..n)
        .flat_map(|i| gens.iter().map(move |g| (i, g)))
        .map(|(i, g)| embed(i, &g.vec))
        .collect();

    let mut constraints = Vec::with_capacity(n * n + d);
    for i in 0..n {
        for (j, sigma) in states.iter().enumerate() {
            let target = if i == j { Rational::one() } else { Rational::zero() };
            constraints.push((embed(i, &sigma.vec), target));
        }
    }
    for k in 0..d {
        let mut row = vec![Rational::zero(); stacked];
        for i in 0..n {
            row[i * d + k] = Rational::one();
        }
        constraints.push((row.into(), spec.unit_effect.vec[k].clone()));
    }

    let Some(coeffs) = cone_feasible(&generators, &constraints)? else {
        return Ok(None);
    };
    let effects = coeffs
        .chunks(gens.len())
        .map(|weights| {
            let vec = weights
                .iter()
                .zip(gens)
                .filter(|(w, _)| !w.is_zero())
                .fold(RVector::zeros(d), |acc, (w, g)| &acc + &g.vec.scale(w));
            Effect::new(&spec.system, vec)
        })
        .collect::<Result<_>>()?;
    Ok(Some(Measurement::new(effects)?))
}
