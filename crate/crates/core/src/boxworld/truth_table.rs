use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A Boolean function `f: {0,1}^n -> {0,1}` stored as `2^n` bits.
///
/// Bit `i` is `f(x)` where `x` read as a big-endian integer equals `i`, so the
/// first input bit is the most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Vec<bool>,
}

/// Largest input length whose table is still held in memory.
pub const MAX_TABLE_INPUTS: usize = 24;

impl TruthTable {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<Self> {
        if n > MAX_TABLE_INPUTS {
            return Err(Error::SizeCap {
                what: "truth-table inputs",
                value: n,
                max: MAX_TABLE_INPUTS,
            });
        }
        if bits.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: bits.len(),
            });
        }
        Ok(Self { n, bits })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> bool) -> Result<Self> {
        if n > MAX_TABLE_INPUTS {
            return Err(Error::SizeCap {
                what: "truth-table inputs",
                value: n,
                max: MAX_TABLE_INPUTS,
            });
        }
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::from_fn(n, |_| rng.random::<bool>())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `f(x)` for `x` given as a big-endian index.
    pub fn eval(&self, x: usize) -> bool {
        self.bits[x]
    }

    /// `f(x)` for `x` given bit by bit.
    pub fn eval_bits(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.bits[bits_to_index(x)])
    }

    pub fn is_constant(&self) -> bool {
        self.bits.iter().all(|&b| b == self.bits[0])
    }
}

/// Parses a line of `'0'`/`'1'` characters whose length is a power of two.
impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in truth table"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if !bits.len().is_power_of_two() {
            return Err(Error::Parse(format!(
                "truth table length {} is not a power of two",
                bits.len()
            )));
        }
        Self::new(bits.len().trailing_zeros() as usize, bits)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Big-endian: the first bit is the most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect()
}

pub fn parity(index: usize) -> bool {
    index.count_ones() % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let t: TruthTable = "0110".parse().unwrap();
        assert_eq!(t.n(), 2);
        assert!(t.eval_bits(&[false, true]).unwrap());
        assert!(!t.eval_bits(&[true, true]).unwrap());
        assert_eq!(t.to_string(), "0110");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!("011".parse::<TruthTable>().is_err());
        assert!("01x0".parse::<TruthTable>().is_err());
        assert!("".parse::<TruthTable>().is_err());
    }

    #[test]
    fn single_entry_table_has_zero_inputs() {
        let t: TruthTable = "1".parse().unwrap();
        assert_eq!(t.n(), 0);
    }

    #[test]
    fn big_endian_indexing() {
        assert_eq!(bits_to_index(&[true, false, false]), 4);
        assert_eq!(index_to_bits(4, 3), vec![true, false, false]);
        assert_eq!(index_to_bits(bits_to_index(&[false, true, true]), 3), vec![false, true, true]);
    }

    #[test]
    fn length_checked() {
        assert!(TruthTable::new(2, vec![true; 3]).is_err());
        let t = TruthTable::constant(2, false).unwrap();
        assert!(t.eval_bits(&[true]).is_err());
    }
}
