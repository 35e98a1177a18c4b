use std::fmt;
use std::str::FromStr;

use crate::boxworld::TruthTable;
use crate::error::{Error, Result};

/// A two-party function `f(x, y)` with `x, y ∈ {0,1}^n`, stored as a truth
/// table on `2n` bits: the first `n` bits are Alice's input, the last `n`
/// Bob's. Row-major: index `x·2^n + y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommTask {
    n: usize,
    f: TruthTable,
}

impl CommTask {
    pub fn new(n: usize, f: TruthTable) -> Result<Self> {
        if f.n() != 2 * n {
            return Err(Error::LengthMismatch {
                expected: 1 << (2 * n),
                got: f.len(),
            });
        }
        Ok(Self { n, f })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mask = (1usize << n) - 1;
        let table = TruthTable::from_fn(2 * n, |i| f(i >> n, i & mask))?;
        Self::new(n, table)
    }

    /// Inner product modulo two.
    pub fn inner_product(n: usize) -> Result<Self> {
        Self::from_fn(n, |x, y| (x & y).count_ones() % 2 == 1)
    }

    pub fn equality(n: usize) -> Result<Self> {
        Self::from_fn(n, |x, y| x == y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &TruthTable {
        &self.f
    }

    pub fn value(&self, x: usize, y: usize) -> bool {
        self.f.eval((x << self.n) | y)
    }

    /// Alice's row `f(x, ·)`.
    pub fn row(&self, x: usize) -> &[bool] {
        let width = 1usize << self.n;
        &self.f.bits()[x * width..(x + 1) * width]
    }
}

/// File format: `n` on the first line, the `2^(2n)`-character table on the
/// second.
impl FromStr for CommTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing input length line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("input length: {e}")))?;
        let table: TruthTable = lines
            .next()
            .ok_or_else(|| Error::Parse("missing truth table line".into()))?
            .parse()?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after truth table".into()));
        }
        Self::new(n, table)
    }
}

impl fmt::Display for CommTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        writeln!(f, "{}", self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_rows() {
        let ip = CommTask::inner_product(2).unwrap();
        let rows: Vec<String> = (0..4)
            .map(|x| ip.row(x).iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        assert_eq!(rows, ["0000", "0101", "0011", "0110"]);
    }

    #[test]
    fn file_round_trip() {
        let eq = CommTask::equality(1).unwrap();
        let text = eq.to_string();
        assert_eq!(text, "1\n1001\n");
        assert_eq!(text.parse::<CommTask>().unwrap(), eq);
    }

    #[test]
    fn malformed_files() {
        assert!("2\n1001\n".parse::<CommTask>().is_err());
        assert!("x\n1001\n".parse::<CommTask>().is_err());
        assert!("1\n".parse::<CommTask>().is_err());
        assert!("1\n1001\n0\n".parse::<CommTask>().is_err());
    }
}
