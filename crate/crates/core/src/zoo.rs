//! Concrete theories: the classical bit, the rebit and a rational sample of
//! the qubit.
//!
//! Rebit and qubit states are written in Bloch form `(1, r)` with unit effect
//! `(1, 0, ..)`; the effect for direction `n` is `(1, n)/2`, so pairings are
//! `(1 + n·r)/2`. Only rational points on the circle and sphere are used,
//! obtained from the Pythagorean parametrisation
//! `t ↦ ((1-t²)/(1+t²), 2t/(1+t²))`, and every reversible group is a finite
//! group of signed permutation matrices. Those are the only finite rotation
//! groups with rational entries, which is why the sampled state sets are
//! single group orbits of size 4 or 8 (rebit) and 6 or 24 (qubit).

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{int, one, rat, RMatrix, RVector, Rational};
use crate::theory::{generate_group, CheckMode, SystemSpec, SystemType, TheoryInstance};

pub const BIT: &str = "bit";
pub const REBIT: &str = "rebit";
pub const QUBIT: &str = "qubit";

/// Classical bit: the 1-simplex with point masses as pure states, read-out
/// measurement and the swap group.
pub fn classical_bit_theory() -> TheoryInstance {
    let system = SystemType::new(BIT, 2);
    let e0 = RVector::from_i64(&[1, 0]);
    let e1 = RVector::from_i64(&[0, 1]);
    let swap = RMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
    let spec = SystemSpec::from_vectors(
        system,
        vec![e0.clone(), e1.clone()],
        RVector::from_i64(&[1, 1]),
        vec![e0.clone(), e1.clone()],
        vec![vec![e0, e1]],
        vec![RMatrix::identity(2), swap],
    )
    .expect("classical bit spec is well formed");
    let composite = BTreeMap::from([(format!("{BIT}*{BIT}"), 4)]);
    TheoryInstance::new("classical", CheckMode::Exact, vec![spec], composite)
        .expect("classical bit satisfies its construction invariants")
}

/// A rational point on the unit circle from the Pythagorean parametrisation.
pub fn pythagorean_point(t: &Rational) -> (Rational, Rational) {
    let t2 = t * t;
    let den = one() + &t2;
    ((one() - &t2) / &den, (t * int(2)) / den)
}

/// Rebit: real-amplitude qubit, Bloch disc in coordinates `(1, x, z)`.
///
/// `k < 8` gives the four axis states; `k >= 8` the eight-point orbit of
/// `(3/5, 4/5)`. The reversible group is the dihedral group of the square
/// (order 8). Joint rebit states are real symmetric 4×4 matrices of unit
/// trace, so the declared composite dimension is 10.
pub fn rebit_theory(k: usize) -> Result<TheoryInstance> {
    if k < 4 {
        return Err(Error::InvalidTheory(format!("rebit resolution {k} is below 4")));
    }
    let rot = RMatrix::from_i64(&[&[0, -1], &[1, 0]]).unwrap();
    let refl = RMatrix::from_i64(&[&[1, 0], &[0, -1]]).unwrap();
    let planar = generate_group(2, &[rot, refl])?;
    let seed_point: RVector = if k < 8 {
        RVector::from_i64(&[1, 0])
    } else {
        let (a, b) = pythagorean_point(&rat(1, 2));
        vec![a, b].into()
    };
    bloch_theory(REBIT, &planar, &seed_point, 10, CheckMode::Exact)
}

/// Qubit sampled at rational Bloch-sphere points, coordinates `(1, x, y, z)`.
///
/// `k < 24` gives the six axis states; `k >= 24` the 24-point orbit of a
/// seeded Pythagorean point `(a, b, 0)` under the rotation group of the cube.
/// A failed check is definitive; a passed one is evidence at this resolution.
pub fn qubit_sampled_theory(k: usize, seed: u64) -> Result<TheoryInstance> {
    if k < 6 {
        return Err(Error::InvalidTheory(format!("qubit sample count {k} is below 6")));
    }
    let rz = RMatrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
    let rx = RMatrix::from_i64(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, 0]]).unwrap();
    let rotations = generate_group(3, &[rz, rx])?;
    let seed_point: RVector = if k < 24 {
        RVector::from_i64(&[1, 0, 0])
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q: i64 = rng.random_range(2..=12);
        let p: i64 = rng.random_range(1..q);
        let (a, b) = pythagorean_point(&rat(p, q));
        vec![a, b, Rational::from_integer(0.into())].into()
    };
    bloch_theory(QUBIT, &rotations, &seed_point, 16, CheckMode::SampledEvidence)
}

/// Builds a Bloch-ball theory whose pure states are the orbit of `point`
/// under `rotations`, with the matching projective effects and antipodal
/// measurements.
fn bloch_theory(
    label: &str,
    rotations: &[RMatrix],
    point: &RVector,
    composite_dim: usize,
    mode: CheckMode,
) -> Result<TheoryInstance> {
    let d = point.dim();
    let mut seen = HashSet::new();
    let mut directions = Vec::new();
    for g in rotations {
        let image = g.mul_vec(point)?;
        if seen.insert(image.clone()) {
            directions.push(image);
        }
    }

    let half = rat(1, 2);
    let lift = |n: &RVector, scale: &Rational| -> RVector {
        std::iter::once(scale.clone())
            .chain(n.iter().map(|c| c * scale))
            .collect()
    };
    let pure: Vec<RVector> = directions.iter().map(|n| lift(n, &one())).collect();
    let effects: Vec<RVector> = directions.iter().map(|n| lift(n, &half)).collect();

    let mut measurements = Vec::new();
    let mut used = HashSet::new();
    for n in &directions {
        let antipode = -n;
        if used.contains(n) || !seen.contains(&antipode) {
            continue;
        }
        used.insert(n.clone());
        used.insert(antipode.clone());
        measurements.push(vec![lift(n, &half), lift(&antipode, &half)]);
    }

    let group = rotations
        .iter()
        .map(|g| block_diag_one(g))
        .collect::<Vec<_>>();
    let system = SystemType::new(label, d + 1);
    let spec = SystemSpec::from_vectors(
        system,
        pure,
        RVector::basis(d + 1, 0),
        effects,
        measurements,
        group,
    )?;
    let composite = BTreeMap::from([(format!("{label}*{label}"), composite_dim)]);
    TheoryInstance::new(label, mode, vec![spec], composite)
}

/// `diag(1, m)`: the rotation acting on the Bloch vector, leaving the
/// normalisation coordinate fixed.
fn block_diag_one(m: &RMatrix) -> RMatrix {
    let d = m.rows();
    let rows: Vec<RVector> = (0..=d)
        .map(|r| {
            (0..=d)
                .map(|c| match (r, c) {
                    (0, 0) => one(),
                    (0, _) | (_, 0) => int(0),
                    _ => m.get(r - 1, c - 1).clone(),
                })
                .collect()
        })
        .collect();
    RMatrix::from_rows(&rows).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{
        check_bit_symmetry, check_causality, check_tomographic_locality, is_completely_mixed,
        pairing, perfectly_distinguishable, Certificate, State,
    };

    #[test]
    fn pythagorean_points_lie_on_the_circle() {
        for (p, q) in [(1, 2), (1, 3), (2, 7), (5, 11)] {
            let (a, b) = pythagorean_point(&rat(p, q));
            assert_eq!(&a * &a + &b * &b, one());
        }
    }

    #[test]
    fn classical_bit_principles() {
        let t = classical_bit_theory();
        let sys = t.primary().system.clone();
        assert!(check_causality(&t).holds);
        assert!(check_tomographic_locality(&t, &sys, &sys).unwrap().holds);
        assert!(check_bit_symmetry(&t, &sys).unwrap().holds);
    }

    #[test]
    fn classical_uniform_is_completely_mixed() {
        let t = classical_bit_theory();
        let sys = t.primary().system.clone();
        let u = State::new(&sys, vec![rat(1, 2), rat(1, 2)].into()).unwrap();
        assert!(is_completely_mixed(&u, &t).unwrap());
        let readout = perfectly_distinguishable(&t.primary().pure_states, &t)
            .unwrap()
            .unwrap();
        assert_eq!(readout, t.primary().measurements[0]);
    }

    #[test]
    fn rebit_sizes() {
        let small = rebit_theory(4).unwrap();
        assert_eq!(small.primary().pure_states.len(), 4);
        assert_eq!(small.primary().reversible_group.len(), 8);
        let big = rebit_theory(8).unwrap();
        assert_eq!(big.primary().pure_states.len(), 8);
        assert_eq!(big.primary().measurements.len(), 4);
        assert!(rebit_theory(3).is_err());
    }

    #[test]
    fn rebit_principles() {
        for k in [4, 8] {
            let t = rebit_theory(k).unwrap();
            let sys = t.primary().system.clone();
            assert!(check_causality(&t).holds);
            let tl = check_tomographic_locality(&t, &sys, &sys).unwrap();
            assert!(!tl.holds);
            assert_eq!(
                tl.certificate,
                Some(Certificate::ProductSpan {
                    composite: "rebit*rebit".into(),
                    product_rank: 9,
                    composite_dim: 10
                })
            );
            let bs = check_bit_symmetry(&t, &sys).unwrap();
            assert!(bs.holds, "k={k}: {:?}", bs.certificate);
        }
    }

    #[test]
    fn qubit_sizes_and_group() {
        let axes = qubit_sampled_theory(6, 0).unwrap();
        assert_eq!(axes.primary().pure_states.len(), 6);
        assert_eq!(axes.primary().reversible_group.len(), 24);
        let orbit = qubit_sampled_theory(24, 3).unwrap();
        assert_eq!(orbit.primary().pure_states.len(), 24);
        assert_eq!(orbit.primary().measurements.len(), 12);
        assert_eq!(orbit.mode(), CheckMode::SampledEvidence);
    }

    #[test]
    fn qubit_antipodes_are_distinguished_by_projectors() {
        let t = qubit_sampled_theory(6, 0).unwrap();
        let m = &t.primary().measurements[0];
        let states: Vec<_> = t
            .primary()
            .pure_states
            .iter()
            .filter(|s| m.effects.iter().any(|e| pairing(e, s).unwrap() == one()))
            .cloned()
            .collect();
        assert_eq!(states.len(), 2);
        for (i, e) in m.effects.iter().enumerate() {
            for (j, s) in states.iter().enumerate() {
                let p = pairing(e, s).unwrap();
                assert_eq!(p, if i == j { one() } else { int(0) });
            }
        }
    }

    #[test]
    fn qubit_principles() {
        for (k, seed) in [(6, 0), (24, 1), (24, 9)] {
            let t = qubit_sampled_theory(k, seed).unwrap();
            let sys = t.primary().system.clone();
            assert!(check_causality(&t).holds);
            assert!(check_tomographic_locality(&t, &sys, &sys).unwrap().holds);
            assert!(check_bit_symmetry(&t, &sys).unwrap().holds, "k={k} seed={seed}");
        }
    }
}
