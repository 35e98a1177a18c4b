//! Boxworld: the gbit, n-party no-signalling behaviors and f-boxes.
//!
//! Multipartite Boxworld is modelled through its behavior tables, measured
//! with local fiducial measurements and classical post-processing. The full
//! multipartite effect cone is not represented.

mod behavior;
mod embedding;
mod truth_table;

use std::collections::BTreeMap;

pub use behavior::{
    is_no_signalling, make_f_box, sample_local_measurement, Behavior, BehaviorDoc,
    SignallingWitness, MAX_PARTIES,
};
pub use embedding::{behavior_to_vector, gbits_system, vector_to_behavior};
pub use truth_table::{bits_to_index, index_to_bits, parity, TruthTable, MAX_TABLE_INPUTS};

use crate::exact::{RMatrix, RVector};
use crate::theory::{generate_group, CheckMode, Effect, State, SystemSpec, SystemType, TheoryInstance};

pub const GBIT: &str = "gbit";

pub fn gbit_system() -> SystemType {
    SystemType::new(GBIT, 3)
}

/// The effect `(x_a|`: setting `x`, outcome `a`.
pub fn gbit_effect(x: bool, a: bool) -> Effect {
    let v = match (x, a) {
        (false, false) => [1, 0, 0],
        (false, true) => [-1, 0, 1],
        (true, false) => [0, 1, 0],
        (true, true) => [0, -1, 1],
    };
    Effect {
        system: gbit_system(),
        vec: RVector::from_i64(&v),
    }
}

/// The pure state answering `a0` to setting 0 and `a1` to setting 1.
pub fn gbit_vertex(a0: bool, a1: bool) -> State {
    State {
        system: gbit_system(),
        vec: RVector::from_i64(&[i64::from(!a0), i64::from(!a1), 1]),
    }
}

/// The maximally mixed gbit, the centre of the square.
pub fn gbit_mixed() -> State {
    State {
        system: gbit_system(),
        vec: vec![crate::exact::rat(1, 2), crate::exact::rat(1, 2), crate::exact::one()].into(),
    }
}

/// Single-system Boxworld in fiducial coordinates
/// `(P(0|x=0), P(0|x=1), 1)`.
///
/// The state space is a square: four deterministic vertices, effect cone
/// generated by the four fiducial effects, two binary measurements and the
/// eight symmetries of the square as reversible group.
pub fn gbit_theory() -> TheoryInstance {
    let system = gbit_system();
    let pure = [(false, false), (false, true), (true, false), (true, true)]
        .map(|(a0, a1)| gbit_vertex(a0, a1).vec)
        .to_vec();
    let effects = [(false, false), (false, true), (true, false), (true, true)]
        .map(|(x, a)| gbit_effect(x, a).vec)
        .to_vec();
    let measurements = vec![
        vec![effects[0].clone(), effects[1].clone()],
        vec![effects[2].clone(), effects[3].clone()],
    ];
    let swap_settings = RMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).unwrap();
    let flip_first = RMatrix::from_i64(&[&[-1, 0, 1], &[0, 1, 0], &[0, 0, 1]]).unwrap();
    let group = generate_group(3, &[swap_settings, flip_first]).unwrap();

    let spec = SystemSpec::from_vectors(
        system,
        pure,
        RVector::from_i64(&[0, 0, 1]),
        effects,
        measurements,
        group,
    )
    .expect("gbit spec is well formed");
    let composite = BTreeMap::from([(format!("{GBIT}*{GBIT}"), 9)]);
    TheoryInstance::new("boxworld", CheckMode::Exact, vec![spec], composite)
        .expect("gbit theory satisfies its construction invariants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{one, rat};
    use crate::theory::{
        check_bit_symmetry, check_causality, check_tomographic_locality, is_completely_mixed,
        is_pure, pairing, perfectly_distinguishable, Certificate,
    };

    #[test]
    fn square_structure() {
        let t = gbit_theory();
        let g = t.primary();
        assert_eq!(g.pure_states.len(), 4);
        assert_eq!(g.reversible_group.len(), 8);
        let sums: Vec<_> = g.measurements.iter().map(|m| m.total().unwrap()).collect();
        assert_eq!(sums[0], sums[1]);
        assert_eq!(sums[0], g.unit_effect.vec);
    }

    #[test]
    fn fiducial_pairings() {
        let certain = gbit_vertex(false, true);
        assert_eq!(pairing(&gbit_effect(false, false), &certain).unwrap(), one());
        assert_eq!(pairing(&gbit_effect(false, false), &gbit_mixed()).unwrap(), rat(1, 2));
        assert_eq!(pairing(&gbit_effect(true, true), &certain).unwrap(), one());
    }

    #[test]
    fn purity_and_mixedness() {
        let t = gbit_theory();
        assert!(is_pure(&gbit_vertex(true, false), &t).unwrap());
        assert!(!is_pure(&gbit_mixed(), &t).unwrap());
        let edge_mid = State {
            system: gbit_system(),
            vec: vec![rat(1, 2), one(), one()].into(),
        };
        assert!(!is_pure(&edge_mid, &t).unwrap());
        assert!(is_completely_mixed(&gbit_mixed(), &t).unwrap());
        assert!(!is_completely_mixed(&gbit_vertex(false, false), &t).unwrap());
        assert!(!is_completely_mixed(&edge_mid, &t).unwrap());
    }

    #[test]
    fn distinguishing_vertices_that_differ_on_setting_zero() {
        let t = gbit_theory();
        let states = [gbit_vertex(false, false), gbit_vertex(true, false)];
        let m = perfectly_distinguishable(&states, &t).unwrap().unwrap();
        for (i, e) in m.effects.iter().enumerate() {
            for (j, s) in states.iter().enumerate() {
                let expected = if i == j { one() } else { rat(0, 1) };
                assert_eq!(pairing(e, s).unwrap(), expected);
            }
        }
        // only the setting-0 measurement separates these two
        assert_eq!(m.effects[0], gbit_effect(false, false));
        assert_eq!(m.effects[1], gbit_effect(false, true));
    }

    #[test]
    fn vertex_and_centre_not_distinguishable() {
        let t = gbit_theory();
        let states = [gbit_vertex(false, false), gbit_mixed()];
        assert_eq!(perfectly_distinguishable(&states, &t).unwrap(), None);
    }

    #[test]
    fn principles() {
        let t = gbit_theory();
        let sys = gbit_system();
        assert!(check_causality(&t).holds);
        let tl = check_tomographic_locality(&t, &sys, &sys).unwrap();
        assert!(tl.holds);
        assert_eq!(
            tl.certificate,
            Some(Certificate::ProductSpan {
                composite: "gbit*gbit".into(),
                product_rank: 9,
                composite_dim: 9
            })
        );
        let bs = check_bit_symmetry(&t, &sys).unwrap();
        assert!(!bs.holds);
        assert!(matches!(
            bs.certificate,
            Some(Certificate::UnmappablePair { group_order: 8, .. })
        ));
    }
}
