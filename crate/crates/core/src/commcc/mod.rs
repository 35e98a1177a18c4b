//! Communication complexity with a shared f-box versus classical protocols.
//!
//! [`VanDam`] runs the one-bit protocol: Alice and Bob share the `2n`-party
//! f-box of `f(x, y)`, measure their halves with their inputs as settings,
//! Alice sends the parity of her outcomes and Bob adds the parity of his.
//! [`one_way_cc`] and [`det_cc`] give the exact classical costs for contrast.

mod oracles;
mod task;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use oracles::{det_cc, one_way_cc, DetCcOracle, MAX_DET_CC_INPUTS};
pub use task::CommTask;

use crate::boxworld::{bits_to_index, index_to_bits, make_f_box, parity, Behavior, MAX_PARTIES};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub sender: Party,
    pub bit: bool,
}

/// Everything that happened in one protocol run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolTranscript {
    pub alice_settings: Vec<bool>,
    pub bob_settings: Vec<bool>,
    pub alice_outcomes: Vec<bool>,
    pub bob_outcomes: Vec<bool>,
    pub messages: Vec<Message>,
    pub output: bool,
    pub seed: u64,
}

/// The one-bit protocol over a prepared f-box for a fixed task.
pub struct VanDam<'a> {
    task: &'a CommTask,
    shared: Behavior,
}

impl<'a> VanDam<'a> {
    /// Prepares the shared `2n`-party box. Alice holds systems `1..=n`, Bob
    /// holds `n+1..=2n`.
    pub fn new(task: &'a CommTask) -> Result<Self> {
        let parties = 2 * task.n();
        if parties > MAX_PARTIES {
            return Err(Error::SizeCap {
                what: "f-box parties (2n)",
                value: parties,
                max: MAX_PARTIES,
            });
        }
        Ok(Self {
            task,
            shared: make_f_box(task.table())?,
        })
    }

    pub fn shared_state(&self) -> &Behavior {
        &self.shared
    }

    pub fn run(&self, x: &[bool], y: &[bool], seed: u64) -> Result<ProtocolTranscript> {
        let n = self.task.n();
        for input in [x, y] {
            if input.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: input.len(),
                });
            }
        }
        let settings = (bits_to_index(x) << n) | bits_to_index(y);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outcomes = self.shared.sample(settings, &mut rng);
        let alice = outcomes >> n;
        let bob = outcomes & ((1 << n) - 1);

        let message = Message {
            sender: Party::Alice,
            bit: parity(alice),
        };
        Ok(ProtocolTranscript {
            alice_settings: x.to_vec(),
            bob_settings: y.to_vec(),
            alice_outcomes: index_to_bits(alice, n),
            bob_outcomes: index_to_bits(bob, n),
            output: message.bit ^ parity(bob),
            messages: vec![message],
            seed,
        })
    }
}

/// Prepares the box for `task` and runs the protocol once.
pub fn van_dam_run(task: &CommTask, x: &[bool], y: &[bool], seed: u64) -> Result<ProtocolTranscript> {
    VanDam::new(task)?.run(x, y, seed)
}

/// Outcome of running the protocol on every input pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanDamReport {
    pub correct: usize,
    pub total: usize,
    pub max_messages: usize,
    pub one_way_cc: u32,
    pub det_cc: Option<u32>,
}

/// Runs [`VanDam`] on all `(x, y)`. Per-run seeds are drawn in order from a
/// ChaCha8 stream seeded with `seed`. `det_cc` is filled in only where the
/// exact recursion is within its cap.
pub fn verify_van_dam_all(task: &CommTask, seed: u64) -> Result<VanDamReport> {
    let protocol = VanDam::new(task)?;
    let n = task.n();
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut correct = 0;
    let mut max_messages = 0;
    let width = 1usize << n;
    for x in 0..width {
        let xb = index_to_bits(x, n);
        for y in 0..width {
            let t = protocol.run(&xb, &index_to_bits(y, n), seeds.next_u64())?;
            max_messages = max_messages.max(t.messages.len());
            if t.output == task.value(x, y) {
                correct += 1;
            }
        }
    }
    let det = (n <= MAX_DET_CC_INPUTS).then(|| det_cc(task)).transpose()?;
    Ok(VanDamReport {
        correct,
        total: width * width,
        max_messages,
        one_way_cc: one_way_cc(task),
        det_cc: det,
    })
}
