//! Linear bijection between no-signalling tables and the tensor fiducial
//! representation of n gbits.
//!
//! A gbit state is `(P(0|x=0), P(0|x=1), 1)`. For n parties coordinate
//! `c ∈ {0,1,2}^n` (base-3, party 1 most significant) is the probability that
//! every party with `c_j ∈ {0,1}` measures `x_j = c_j` and sees outcome 0,
//! with parties where `c_j = 2` marginalised.

use num_traits::{One, Signed, Zero};

use super::behavior::{Behavior, MAX_PARTIES};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::theory::{State, SystemType};

/// The system type of `n` gbits in the tensor fiducial representation.
pub fn gbits_system(n: usize) -> SystemType {
    SystemType::new(format!("gbit^{n}"), 3usize.pow(n as u32))
}

fn digits(mut c: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for j in (0..n).rev() {
        d[j] = c % 3;
        c /= 3;
    }
    d
}

fn from_digits(d: &[usize]) -> usize {
    d.iter().fold(0, |acc, &v| acc * 3 + v)
}

/// Maps a behavior to its fiducial coordinates. Requires no-signalling for
/// the marginals to be well defined; settings of marginalised parties are
/// taken as 0.
pub fn behavior_to_vector(b: &Behavior) -> State {
    let n = b.n();
    let mut coords = Vec::with_capacity(3usize.pow(n as u32));
    for c in 0..3usize.pow(n as u32) {
        let d = digits(c, n);
        let mut x = 0usize;
        let mut free = 0usize;
        for (j, &dj) in d.iter().enumerate() {
            let bit = 1 << (n - 1 - j);
            match dj {
                1 => x |= bit,
                2 => free |= bit,
                _ => {}
            }
        }
        // Sum over outcomes with a_j = 0 on measured parties, anything on free ones.
        let column = b.column(x);
        let mut total: u128 = 0;
        let mut a = free;
        loop {
            total += u128::from(column[a]);
            if a == 0 {
                break;
            }
            a = (a - 1) & free;
        }
        coords.push(Rational::new(total.into(), b.denominator().into()));
    }
    State {
        system: gbits_system(n),
        vec: coords.into(),
    }
}

/// Inverse of [`behavior_to_vector`], by inclusion-exclusion on the outcome-1
/// parties. Fails if the vector is not the image of a valid behavior.
pub fn vector_to_behavior(s: &State) -> Result<Behavior> {
    let dim = s.vec.dim();
    let n = (1..=MAX_PARTIES)
        .find(|&n| 3usize.pow(n as u32) == dim)
        .ok_or_else(|| Error::NotInEmbedding(format!("dimension {dim} is not 3^n")))?;
    let v = &s.vec;
    if !v[dim - 1].is_one() {
        return Err(Error::NotInEmbedding(format!(
            "normalisation coordinate is {}",
            v[dim - 1]
        )));
    }
    let width = 1usize << n;
    let mut probs = Vec::with_capacity(width * width);
    for x in 0..width {
        for a in 0..width {
            let ones: Vec<usize> = (0..n).filter(|j| a >> (n - 1 - j) & 1 == 1).collect();
            let base: Vec<usize> = (0..n).map(|j| x >> (n - 1 - j) & 1).collect();
            let mut p = Rational::zero();
            for subset in 0..1usize << ones.len() {
                // parties in `subset` keep their fiducial effect (sign -),
                // the rest of the outcome-1 parties take the unit effect.
                let mut d = base.clone();
                let mut negative = false;
                for (k, &j) in ones.iter().enumerate() {
                    if subset >> k & 1 == 1 {
                        negative = !negative;
                    } else {
                        d[j] = 2;
                    }
                }
                let term = &v[from_digits(&d)];
                if negative {
                    p -= term;
                } else {
                    p += term;
                }
            }
            if p.is_negative() {
                return Err(Error::NotInEmbedding(format!(
                    "reconstructed P({a:b}|{x:b}) = {p} is negative"
                )));
            }
            probs.push(p);
        }
    }
    Behavior::from_probabilities(n, &probs).map_err(|e| Error::NotInEmbedding(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RVector;
    use crate::boxworld::{gbit_vertex, make_f_box, TruthTable};
    use crate::exact::rat;

    #[test]
    fn pr_box_round_trip() {
        let pr = make_f_box(&"0001".parse::<TruthTable>().unwrap()).unwrap();
        let v = behavior_to_vector(&pr);
        assert_eq!(v.vec.dim(), 9);
        assert_eq!(vector_to_behavior(&v).unwrap(), pr);
    }

    #[test]
    fn product_vertex_is_tensor_of_vertices() {
        // party 1 answers (x=0 -> 1, x=1 -> 0), party 2 always 0
        let b = Behavior::local_deterministic(&[[true, false], [false, false]]).unwrap();
        let v = behavior_to_vector(&b);
        let expected = gbit_vertex(true, false).vec.tensor(&gbit_vertex(false, false).vec);
        assert_eq!(v.vec, expected);
    }

    #[test]
    fn single_gbit_coordinates() {
        let mixed = Behavior::uniform_noise(1).unwrap();
        let v = behavior_to_vector(&mixed);
        assert_eq!(v.vec, vec![rat(1, 2), rat(1, 2), rat(1, 1)].into());
    }

    #[test]
    fn rejects_vectors_outside_image() {
        let sys = gbits_system(1);
        let bad_dim = State::new(&SystemType::new("x", 4), RVector::from_i64(&[0, 0, 0, 1])).unwrap();
        assert!(vector_to_behavior(&bad_dim).is_err());
        let unnormalised = State::new(&sys, RVector::from_i64(&[0, 0, 2])).unwrap();
        assert!(vector_to_behavior(&unnormalised).is_err());
        let negative = State::new(&sys, RVector::from_i64(&[2, 0, 1])).unwrap();
        assert!(matches!(vector_to_behavior(&negative), Err(Error::NotInEmbedding(_))));
    }
}
