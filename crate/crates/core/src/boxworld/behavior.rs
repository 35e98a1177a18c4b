//! n-party conditional probability tables `P(a|x)` with binary settings and
//! outcomes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::truth_table::{bits_to_index, index_to_bits, parity, TruthTable};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};

/// Largest party count whose `4^n` table is materialised.
pub const MAX_PARTIES: usize = 12;

/// A behavior `P(a|x)` over `n` parties.
///
/// Entries are stored as integer weights over one shared denominator, which
/// keeps `4^n`-entry tables compact and every column sum exact. Row `x`
/// occupies indices `x·2^n .. (x+1)·2^n`, outcomes in big-endian order.
///
/// Construction enforces non-negativity and normalisation of every column.
/// No-signalling is checked separately by [`is_no_signalling`], so signalling
/// tables can still be built and rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    n: usize,
    denom: u64,
    weights: Vec<u64>,
}

impl Behavior {
    /// Builds a behavior from integer weights over `denom`.
    pub fn from_weights(n: usize, denom: u64, weights: Vec<u64>) -> Result<Self> {
        check_parties(n)?;
        let cells = 1usize << (2 * n);
        if weights.len() != cells {
            return Err(Error::LengthMismatch {
                expected: cells,
                got: weights.len(),
            });
        }
        if denom == 0 {
            return Err(Error::InvalidBehavior("zero denominator".into()));
        }
        let b = Self { n, denom, weights };
        for x in 0..b.settings() {
            let total: u128 = b.column(x).iter().map(|&w| u128::from(w)).sum();
            if total != u128::from(denom) {
                return Err(Error::InvalidBehavior(format!(
                    "column x={} sums to {total}/{denom}",
                    b.bits_string(x)
                )));
            }
        }
        Ok(b.reduced())
    }

    /// Builds a behavior from exact probabilities, indexed like the table.
    pub fn from_probabilities(n: usize, probs: &[Rational]) -> Result<Self> {
        check_parties(n)?;
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::InvalidBehavior(format!(
                "negative probability {}",
                format_rational(p)
            )));
        }
        let lcm = probs
            .iter()
            .filter(|p| !p.is_zero())
            .fold(BigInt::from(1), |acc, p| acc.lcm(p.denom()));
        let denom = lcm.to_u64().ok_or_else(|| {
            Error::InvalidBehavior(format!("common denominator {lcm} exceeds 64 bits"))
        })?;
        let weights = probs
            .iter()
            .map(|p| {
                (p.numer() * (&lcm / p.denom()))
                    .to_u64()
                    .ok_or_else(|| Error::InvalidBehavior("probability exceeds 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_weights(n, denom, weights)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        check_parties(n)?;
        let probs: Vec<Rational> = (0..1usize << (2 * n))
            .map(|i| f(i >> n, i & ((1 << n) - 1)))
            .collect();
        Self::from_probabilities(n, &probs)
    }

    /// Local deterministic box: party `j` answers `responses[j][x_j]`.
    pub fn local_deterministic(responses: &[[bool; 2]]) -> Result<Self> {
        let n = responses.len();
        check_parties(n)?;
        let mut weights = vec![0u64; 1 << (2 * n)];
        for x in 0..1usize << n {
            let xs = index_to_bits(x, n);
            let a: Vec<bool> = xs
                .iter()
                .zip(responses)
                .map(|(&xj, r)| r[usize::from(xj)])
                .collect();
            weights[(x << n) | bits_to_index(&a)] = 1;
        }
        Self::from_weights(n, 1, weights)
    }

    /// Independent fair coins, whatever the settings.
    pub fn uniform_noise(n: usize) -> Result<Self> {
        check_parties(n)?;
        let denom = 1u64 << n;
        Self::from_weights(n, denom, vec![1; 1 << (2 * n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    /// Number of setting strings, `2^n`.
    pub fn settings(&self) -> usize {
        1 << self.n
    }

    pub fn weight(&self, x: usize, a: usize) -> u64 {
        self.weights[(x << self.n) | a]
    }

    pub fn prob(&self, x: usize, a: usize) -> Rational {
        Rational::new(self.weight(x, a).into(), self.denom.into())
    }

    /// Weights of `P(·|x)`, indexed by outcome string.
    pub fn column(&self, x: usize) -> &[u64] {
        let width = 1usize << self.n;
        &self.weights[x * width..(x + 1) * width]
    }

    /// All probabilities in table order.
    pub fn probabilities(&self) -> Vec<Rational> {
        (0..self.weights.len())
            .map(|i| Rational::new(self.weights[i].into(), self.denom.into()))
            .collect()
    }

    /// `p·self + (1-p)·other`.
    pub fn mix(&self, other: &Behavior, p: &Rational) -> Result<Behavior> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let q = Rational::from_integer(1.into()) - p;
        let probs: Vec<Rational> = self
            .probabilities()
            .into_iter()
            .zip(other.probabilities())
            .map(|(a, b)| p * a + &q * b)
            .collect();
        Self::from_probabilities(self.n, &probs)
    }

    /// Parties of `self` followed by parties of `other`, independent.
    pub fn product(&self, other: &Behavior) -> Result<Behavior> {
        let n = self.n + other.n;
        check_parties(n)?;
        let denom = self
            .denom
            .checked_mul(other.denom)
            .ok_or_else(|| Error::InvalidBehavior("product denominator exceeds 64 bits".into()))?;
        let mut weights = vec![0u64; 1 << (2 * n)];
        for x1 in 0..self.settings() {
            for x2 in 0..other.settings() {
                let x = (x1 << other.n) | x2;
                for (a1, &w1) in self.column(x1).iter().enumerate() {
                    if w1 == 0 {
                        continue;
                    }
                    for (a2, &w2) in other.column(x2).iter().enumerate() {
                        let a = (a1 << other.n) | a2;
                        weights[(x << n) | a] = w1 * w2;
                    }
                }
            }
        }
        Self::from_weights(n, denom, weights)
    }

    /// Draws an outcome string for settings `x` from `P(·|x)` exactly: a
    /// uniform integer below the denominator selects the outcome by
    /// cumulative weight.
    pub fn sample<R: Rng + ?Sized>(&self, x: usize, rng: &mut R) -> usize {
        let mut r = rng.random_range(0..self.denom);
        for (a, &w) in self.column(x).iter().enumerate() {
            if r < w {
                return a;
            }
            r -= w;
        }
        unreachable!("columns sum to the denominator")
    }

    fn reduced(mut self) -> Self {
        let g = self.weights.iter().fold(self.denom, |acc, &w| acc.gcd(&w));
        if g > 1 {
            self.denom /= g;
            for w in &mut self.weights {
                *w /= g;
            }
        }
        self
    }

    fn bits_string(&self, x: usize) -> String {
        bits_string(x, self.n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BehaviorDoc::from(self)).expect("behavior documents always serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BehaviorDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.try_into()
    }
}

fn check_parties(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidBehavior("a behavior needs at least one party".into()));
    }
    if n > MAX_PARTIES {
        return Err(Error::SizeCap {
            what: "parties",
            value: n,
            max: MAX_PARTIES,
        });
    }
    Ok(())
}

pub(crate) fn bits_string(index: usize, n: usize) -> String {
    index_to_bits(index, n)
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect()
}

/// The f-box: `P(a|x) = 1/2^(n-1)` when the outcome parity equals `f(x)`,
/// zero otherwise.
pub fn make_f_box(f: &TruthTable) -> Result<Behavior> {
    let n = f.n();
    check_parties(n)?;
    let width = 1usize << n;
    let mut weights = vec![0u64; width * width];
    for x in 0..width {
        let target = f.eval(x);
        for a in 0..width {
            if parity(a) == target {
                weights[x * width + a] = 1;
            }
        }
    }
    Behavior::from_weights(n, 1 << (n - 1), weights)
}

/// A setting change of `party` that moves the joint marginal of the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignallingWitness {
    /// Zero-based party whose setting is varied.
    pub party: usize,
    pub x: usize,
    pub x_flipped: usize,
    /// Outcomes of the remaining parties (the varied party's bit is zero).
    pub others: usize,
    pub n: usize,
}

impl fmt::Display for SignallingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "marginal of the parties other than {} differs between x={} and x={} at outcomes {} (party {} summed out)",
            self.party + 1,
            bits_string(self.x, self.n),
            bits_string(self.x_flipped, self.n),
            bits_string(self.others, self.n),
            self.party + 1,
        )
    }
}

/// Checks that no party's setting influences the marginal of the others.
///
/// Summing out one party at a time, the marginal of the remaining `n-1`
/// parties must not depend on that party's setting. Any subset marginal is
/// obtained by summing out further parties, so these `n` conditions imply
/// setting-independence of every subset marginal.
pub fn is_no_signalling(b: &Behavior) -> std::result::Result<(), SignallingWitness> {
    let n = b.n();
    for party in 0..n {
        let bit = 1usize << (n - 1 - party);
        for x in (0..b.settings()).filter(|x| x & bit == 0) {
            let x_flipped = x | bit;
            let here = b.column(x);
            let there = b.column(x_flipped);
            for a in (0..b.settings()).filter(|a| a & bit == 0) {
                if here[a] + here[a | bit] != there[a] + there[a | bit] {
                    return Err(SignallingWitness {
                        party,
                        x,
                        x_flipped,
                        others: a,
                        n,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Samples outcomes for settings `x` with a ChaCha8 generator seeded from
/// `seed`. The same seed always reproduces the same outcome.
pub fn sample_local_measurement(b: &Behavior, x: &[bool], seed: u64) -> Result<Vec<bool>> {
    if x.len() != b.n() {
        return Err(Error::LengthMismatch {
            expected: b.n(),
            got: x.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(index_to_bits(b.sample(bits_to_index(x), &mut rng), b.n()))
}

/// `{"n": int, "table": {"x-bits|a-bits": "p/q"}}`, zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorDoc {
    pub n: usize,
    pub table: BTreeMap<String, String>,
}

impl From<&Behavior> for BehaviorDoc {
    fn from(b: &Behavior) -> Self {
        let mut table = BTreeMap::new();
        for x in 0..b.settings() {
            for a in 0..b.settings() {
                if b.weight(x, a) != 0 {
                    table.insert(
                        format!("{}|{}", bits_string(x, b.n), bits_string(a, b.n)),
                        format_rational(&b.prob(x, a)),
                    );
                }
            }
        }
        BehaviorDoc { n: b.n, table }
    }
}

impl TryFrom<BehaviorDoc> for Behavior {
    type Error = Error;

    fn try_from(doc: BehaviorDoc) -> Result<Self> {
        check_parties(doc.n)?;
        let n = doc.n;
        let mut probs = vec![Rational::zero(); 1 << (2 * n)];
        for (key, value) in &doc.table {
            let (x, a) = key
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("table key `{key}` is not `x|a`")))?;
            let x = parse_bits(x, n)?;
            let a = parse_bits(a, n)?;
            probs[(x << n) | a] = parse_rational(value)?;
        }
        Behavior::from_probabilities(n, &probs)
    }
}

fn parse_bits(s: &str, n: usize) -> Result<usize> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("`{s}` is not a {n}-bit string")));
    }
    Ok(usize::from_str_radix(s, 2).expect("validated bits"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{inv_pow2, rat};

    fn and() -> TruthTable {
        "0001".parse().unwrap()
    }

    #[test]
    fn pr_box_entries() {
        let pr = make_f_box(&and()).unwrap();
        for x in 0..4 {
            for a in 0..4 {
                let (x1, x2) = (x >> 1, x & 1);
                let (a1, a2) = (a >> 1, a & 1);
                let expected = if a1 ^ a2 == x1 & x2 { rat(1, 2) } else { rat(0, 1) };
                assert_eq!(pr.prob(x, a), expected, "x={x} a={a}");
            }
        }
    }

    #[test]
    fn one_party_box_is_deterministic() {
        let id: TruthTable = "01".parse().unwrap();
        let b = make_f_box(&id).unwrap();
        assert_eq!(b.prob(0, 0), rat(1, 1));
        assert_eq!(b.prob(1, 1), rat(1, 1));
        assert_eq!(b.prob(1, 0), rat(0, 1));
    }

    #[test]
    fn three_party_box_weights() {
        // Four of the eight outcome strings have the required parity.
        let f: TruthTable = "01101001".parse().unwrap();
        let b = make_f_box(&f).unwrap();
        for x in 0..8 {
            let nonzero: Vec<_> = (0..8).filter(|&a| b.weight(x, a) != 0).collect();
            assert_eq!(nonzero.len(), 4);
            for a in nonzero {
                assert_eq!(b.prob(x, a), inv_pow2(2));
            }
        }
    }

    #[test]
    fn f_boxes_are_no_signalling() {
        assert_eq!(is_no_signalling(&make_f_box(&and()).unwrap()), Ok(()));
    }

    #[test]
    fn product_of_deterministic_boxes_is_no_signalling() {
        let b = Behavior::local_deterministic(&[[false, true], [true, true], [true, false]]).unwrap();
        assert_eq!(is_no_signalling(&b), Ok(()));
    }

    #[test]
    fn copying_the_other_setting_signals() {
        // a1 = x2, a2 = 0
        let b = Behavior::from_fn(2, |x, a| {
            let x2 = x & 1;
            let (a1, a2) = (a >> 1, a & 1);
            if a1 == x2 && a2 == 0 {
                rat(1, 1)
            } else {
                rat(0, 1)
            }
        })
        .unwrap();
        let w = is_no_signalling(&b).unwrap_err();
        assert_eq!(w.party, 1);
        assert!(w.to_string().contains("other than 2"));
    }

    #[test]
    fn unnormalised_rejected() {
        assert!(Behavior::from_weights(1, 2, vec![1, 0, 1, 1]).is_err());
        assert!(Behavior::from_fn(1, |_, _| rat(-1, 2)).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let pr = make_f_box(&and()).unwrap();
        for seed in 0..50 {
            let a = sample_local_measurement(&pr, &[true, true], seed).unwrap();
            assert_eq!(a, sample_local_measurement(&pr, &[true, true], seed).unwrap());
            assert!(a[0] ^ a[1]);
        }
        assert!(sample_local_measurement(&pr, &[true], 0).is_err());
    }

    #[test]
    fn deterministic_sample() {
        let id: TruthTable = "01".parse().unwrap();
        let b = make_f_box(&id).unwrap();
        for seed in 0..10 {
            assert_eq!(sample_local_measurement(&b, &[true], seed).unwrap(), vec![true]);
        }
    }

    #[test]
    fn json_round_trip_and_format() {
        let pr = make_f_box(&and()).unwrap();
        let text = pr.to_json();
        assert!(text.starts_with(r#"{"n":2,"table":{"00|00":"1/2""#));
        assert_eq!(text.matches("1/2").count(), 8);
        assert_eq!(Behavior::from_json(&text).unwrap(), pr);
    }

    #[test]
    fn json_rejects_bad_keys() {
        assert!(Behavior::from_json(r#"{"n":1,"table":{"0-0":"1"}}"#).is_err());
        assert!(Behavior::from_json(r#"{"n":1,"table":{"0|0":"1"}}"#).is_err());
    }

    #[test]
    fn caps() {
        assert!(matches!(
            make_f_box(&TruthTable::constant(13, false).unwrap()),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn mixing_and_product() {
        let pr = make_f_box(&and()).unwrap();
        let noise = Behavior::uniform_noise(2).unwrap();
        let m = pr.mix(&noise, &rat(1, 3)).unwrap();
        assert_eq!(m.prob(3, 1), rat(1, 3) * rat(1, 2) + rat(2, 3) * rat(1, 4));
        let p = Behavior::uniform_noise(1).unwrap().product(&Behavior::uniform_noise(1).unwrap()).unwrap();
        assert_eq!(p, noise);
    }
}
