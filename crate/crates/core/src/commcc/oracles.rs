//! Exact deterministic communication complexity at desk scale.
//!
//! Cost convention: every transmitted bit costs one; the answer itself is not
//! charged, but Bob must know `f(x, y)` when communication stops.

use std::collections::HashSet;

use super::task::CommTask;
use crate::error::{Error, Result};

/// Largest per-party input length for the two-way recursion.
pub const MAX_DET_CC_INPUTS: usize = 3;

/// `⌈log₂ r⌉` for `r` distinct rows: Alice sends the index of her row class.
pub fn one_way_cc(task: &CommTask) -> u32 {
    let rows: HashSet<&[bool]> = (0..1usize << task.n()).map(|x| task.row(x)).collect();
    ceil_log2(rows.len())
}

fn ceil_log2(r: usize) -> u32 {
    if r <= 1 {
        0
    } else {
        usize::BITS - (r - 1).leading_zeros()
    }
}

/// Memoised two-way protocol-tree recursion over rectangles.
///
/// A rectangle `R × C` costs nothing once every column is constant on `R`
/// (Bob can read off the answer); otherwise one party splits its live inputs
/// in two and the cost is one plus the worse half.
pub struct DetCcOracle<'a> {
    task: &'a CommTask,
    width: usize,
    memo: Vec<u8>,
}

const UNKNOWN: u8 = u8::MAX;

impl<'a> DetCcOracle<'a> {
    pub fn new(task: &'a CommTask) -> Result<Self> {
        if task.n() > MAX_DET_CC_INPUTS {
            return Err(Error::SizeCap {
                what: "det_cc input length",
                value: task.n(),
                max: MAX_DET_CC_INPUTS,
            });
        }
        let width = 1usize << task.n();
        Ok(Self {
            task,
            width,
            memo: vec![UNKNOWN; 1 << (2 * width)],
        })
    }

    /// Full input set of one party as a bitmask.
    pub fn full(&self) -> u32 {
        ((1u64 << self.width) - 1) as u32
    }

    /// Cost of the sub-rectangle with Alice's inputs `rows` and Bob's `cols`
    /// (bitmasks over input indices).
    pub fn cost(&mut self, rows: u32, cols: u32) -> u32 {
        let key = ((rows as usize) << self.width) | cols as usize;
        if self.memo[key] != UNKNOWN {
            return u32::from(self.memo[key]);
        }
        let value = if self.bob_knows(rows, cols) {
            0
        } else {
            let mut best = u32::MAX;
            for (a, b) in splits(rows) {
                best = best.min(1 + self.cost(a, cols).max(self.cost(b, cols)));
                if best == 1 {
                    break;
                }
            }
            if best > 1 {
                for (a, b) in splits(cols) {
                    best = best.min(1 + self.cost(rows, a).max(self.cost(rows, b)));
                    if best == 1 {
                        break;
                    }
                }
            }
            best
        };
        self.memo[key] = value as u8;
        value
    }

    fn bob_knows(&self, rows: u32, cols: u32) -> bool {
        ones(cols).all(|y| {
            let mut values = ones(rows).map(|x| self.task.value(x, y));
            let first = values.next();
            values.all(|v| Some(v) == first)
        })
    }
}

fn ones(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Unordered splits of `mask` into two non-empty parts; the lowest set bit
/// always goes to the first part.
fn splits(mask: u32) -> impl Iterator<Item = (u32, u32)> {
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut sub = rest;
    let mut done = mask.count_ones() < 2;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let part = sub | low;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & rest;
        }
        if part != mask {
            return Some((part, mask & !part));
        }
    })
}

/// Exact deterministic two-way communication complexity.
pub fn det_cc(task: &CommTask) -> Result<u32> {
    let mut oracle = DetCcOracle::new(task)?;
    let full = oracle.full();
    Ok(oracle.cost(full, full))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_enumeration() {
        let all: Vec<_> = splits(0b1011).collect();
        assert_eq!(all.len(), 3);
        for (a, b) in &all {
            assert_eq!(a | b, 0b1011);
            assert_eq!(a & b, 0);
            assert!(a & 1 == 1 && *b != 0);
        }
        assert_eq!(splits(0b100).count(), 0);
        assert_eq!(splits(0).count(), 0);
    }

    #[test]
    fn constant_costs_nothing() {
        let t = CommTask::from_fn(2, |_, _| true).unwrap();
        assert_eq!(det_cc(&t).unwrap(), 0);
        assert_eq!(one_way_cc(&t), 0);
    }

    #[test]
    fn alice_bit_costs_one() {
        let t = CommTask::from_fn(1, |x, _| x == 1).unwrap();
        assert_eq!(det_cc(&t).unwrap(), 1);
        assert_eq!(one_way_cc(&t), 1);
    }

    #[test]
    fn bob_bit_is_free() {
        let t = CommTask::from_fn(1, |_, y| y == 1).unwrap();
        assert_eq!(det_cc(&t).unwrap(), 0);
        assert_eq!(one_way_cc(&t), 0);
    }

    #[test]
    fn equality_one_bit() {
        let eq = CommTask::equality(1).unwrap();
        assert_eq!(det_cc(&eq).unwrap(), 1);
    }

    #[test]
    fn inner_product_one_way() {
        assert_eq!(one_way_cc(&CommTask::inner_product(2).unwrap()), 2);
        assert_eq!(one_way_cc(&CommTask::inner_product(3).unwrap()), 3);
    }

    #[test]
    fn size_cap() {
        let t = CommTask::inner_product(4).unwrap();
        assert!(matches!(det_cc(&t), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u32> = (1..=9).map(ceil_log2).collect();
        assert_eq!(got, [0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }
}
