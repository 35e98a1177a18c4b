//! Independent reference implementations used to cross-check the library.
#![allow(dead_code)]

use gptlab::boxworld::Behavior;
use gptlab::exact::{one, zero, Rational};
use gptlab::theory::{pairing, State, TheoryInstance};
use rand::Rng;

/// Whether some listed measurement, after assigning each of its outcomes to
/// one of the states, reports every state's own label with certainty.
pub fn listed_measurement_distinguishes(states: &[State], theory: &TheoryInstance) -> bool {
    let spec = theory.system(&states[0].system.label).unwrap();
    let k = states.len();
    spec.measurements.iter().any(|m| {
        let outcomes = m.outcomes();
        let assignments = k.pow(outcomes as u32);
        (0..assignments).any(|code| {
            let label: Vec<usize> = (0..outcomes).map(|o| code / k.pow(o as u32) % k).collect();
            states.iter().enumerate().all(|(j, s)| {
                (0..k).all(|i| {
                    let mut p = zero();
                    for (o, e) in m.effects.iter().enumerate() {
                        if label[o] == i {
                            p += pairing(e, s).unwrap();
                        }
                    }
                    p == if i == j { one() } else { zero() }
                })
            })
        })
    })
}

/// Deterministic communication cost by iterative deepening over explicit
/// protocol trees. A leaf is allowed once Bob can name the answer from his
/// input alone.
pub fn brute_force_det_cc(n: usize, f: impl Fn(usize, usize) -> bool) -> u32 {
    let rows: Vec<usize> = (0..1 << n).collect();
    let cols = rows.clone();
    (0..)
        .find(|&depth| solvable(&f, &rows, &cols, depth))
        .unwrap()
}

fn solvable(f: &impl Fn(usize, usize) -> bool, rows: &[usize], cols: &[usize], depth: u32) -> bool {
    if cols.iter().all(|&y| rows.iter().all(|&x| f(x, y) == f(rows[0], y))) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let split_works = |set: &[usize], alice: bool| {
        (1..(1usize << set.len()) - 1).any(|mask| {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, &v) in set.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(v);
                } else {
                    right.push(v);
                }
            }
            if alice {
                solvable(f, &left, cols, depth - 1) && solvable(f, &right, cols, depth - 1)
            } else {
                solvable(f, rows, &left, depth - 1) && solvable(f, rows, &right, depth - 1)
            }
        })
    };
    split_works(rows, true) || split_works(cols, false)
}

/// One-way cost from a direct enumeration of Alice's distinct rows.
pub fn row_enumeration_one_way(n: usize, f: impl Fn(usize, usize) -> bool) -> u32 {
    let mut rows: Vec<u64> = (0..1usize << n)
        .map(|x| (0..1usize << n).fold(0u64, |acc, y| acc << 1 | u64::from(f(x, y))))
        .collect();
    rows.sort_unstable();
    rows.dedup();
    let mut bits = 0;
    while (1usize << bits) < rows.len() {
        bits += 1;
    }
    bits
}

/// No-signalling checked over every subset of parties: the marginal on `S`
/// must not depend on the settings outside `S`.
pub fn all_subset_no_signalling(b: &Behavior) -> bool {
    let n = b.n();
    let full = (1usize << n) - 1;
    (1..full).all(|subset| {
        let marginal = |x: usize, a_s: usize| -> Rational {
            (0..1usize << n)
                .filter(|a| a & subset == a_s)
                .map(|a| b.prob(x, a))
                .sum()
        };
        (0..1usize << n).all(|x| {
            (0..1usize << n).filter(|x2| x2 & subset == x & subset).all(|x2| {
                (0..1usize << n)
                    .filter(|a_s| a_s & !subset == 0)
                    .all(|a_s| marginal(x, a_s) == marginal(x2, a_s))
            })
        })
    })
}

/// A random local behavior: a dyadic mixture of deterministic boxes.
pub fn random_local_behavior<R: Rng>(n: usize, rng: &mut R) -> Behavior {
    let mut b = random_deterministic(n, rng);
    for _ in 0..rng.random_range(0..4) {
        let p = Rational::new(rng.random_range(1..8).into(), 8.into());
        b = b.mix(&random_deterministic(n, rng), &p).unwrap();
    }
    b
}

fn random_deterministic<R: Rng>(n: usize, rng: &mut R) -> Behavior {
    let responses: Vec<[bool; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    Behavior::local_deterministic(&responses).unwrap()
}
