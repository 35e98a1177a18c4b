//! Circuits that take an advice state through an auxiliary register.
//!
//! The circuit for instance `x` measures advice system `j` with setting
//! `x_j` and accepts iff the parity of all outcomes matches a fixed bit. With
//! the f-box of a language slice as advice, the outcome parity equals the
//! membership bit on every run, so every slice is decided with certainty
//! using `n` advice systems.
//!
//! Post-processing is restricted to this parity comparison. The classical
//! machine that generates the circuit family is represented by the
//! [`CircuitFamily`] record rather than executed.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::boxworld::{bits_to_index, index_to_bits, make_f_box, parity, Behavior, TruthTable};
use crate::error::{Error, Result};
use crate::exact::rational::serde_str as serde_str_rational;
use crate::exact::{format_rational, rat, RVector, Rational};
use crate::theory::TheoryInstance;

/// A language restricted to inputs of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSlice {
    membership: TruthTable,
}

impl LanguageSlice {
    pub fn new(membership: TruthTable) -> Self {
        Self { membership }
    }

    pub fn n(&self) -> usize {
        self.membership.n()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.membership.eval(x)
    }

    pub fn membership(&self) -> &TruthTable {
        &self.membership
    }
}

/// What is plugged into the auxiliary register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdvicePayload {
    /// A Boxworld state given by its behavior table, one party per port.
    Boxworld(Behavior),
    /// A joint state of `ports` copies of the theory's primary system, in
    /// tensor order. Settings index the system's listed measurements, which
    /// must be binary.
    Theory {
        theory: Box<TheoryInstance>,
        state: RVector,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdviceState {
    ports: usize,
    payload: AdvicePayload,
}

/// Largest register for theory payloads, whose outcome enumeration builds
/// `dim^ports`-sized effect vectors.
pub const MAX_THEORY_PORTS: usize = 8;

impl AdviceState {
    pub fn boxworld(behavior: Behavior) -> Self {
        Self {
            ports: behavior.n(),
            payload: AdvicePayload::Boxworld(behavior),
        }
    }

    pub fn theory(theory: TheoryInstance, ports: usize, state: RVector) -> Result<Self> {
        if ports == 0 || ports > MAX_THEORY_PORTS {
            return Err(Error::SizeCap {
                what: "advice ports",
                value: ports,
                max: MAX_THEORY_PORTS,
            });
        }
        let d = theory.primary().system.dim;
        let expected = d.pow(ports as u32);
        if state.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: state.dim(),
            });
        }
        if let Some(m) = theory.primary().measurements.iter().find(|m| m.outcomes() != 2) {
            return Err(Error::InvalidTheory(format!(
                "advice measurements must be binary, found {} outcomes",
                m.outcomes()
            )));
        }
        Ok(Self {
            ports,
            payload: AdvicePayload::Theory {
                theory: Box::new(theory),
                state,
            },
        })
    }

    /// Number of auxiliary-register systems consumed.
    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn payload(&self) -> &AdvicePayload {
        &self.payload
    }

    /// Probability that the outcome parity is odd under `settings`.
    fn odd_parity_probability(&self, settings: &[usize]) -> Result<Rational> {
        match &self.payload {
            AdvicePayload::Boxworld(b) => {
                if let Some(&s) = settings.iter().find(|&&s| s > 1) {
                    return Err(Error::InvalidBehavior(format!("gbit setting {s} out of range")));
                }
                let bits: Vec<bool> = settings.iter().map(|&s| s == 1).collect();
                let column = b.column(bits_to_index(&bits));
                let odd: u64 = column
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| parity(*a))
                    .map(|(_, &w)| w)
                    .sum();
                Ok(Rational::new(odd.into(), b.denominator().into()))
            }
            AdvicePayload::Theory { theory, state } => {
                let spec = theory.primary();
                let measurements = settings
                    .iter()
                    .map(|&s| {
                        spec.measurements.get(s).ok_or_else(|| {
                            Error::InvalidTheory(format!("measurement {s} is not listed"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut odd = Rational::zero();
                for outcomes in 0..1usize << self.ports {
                    if !parity(outcomes) {
                        continue;
                    }
                    let bits = index_to_bits(outcomes, self.ports);
                    let effect = measurements
                        .iter()
                        .zip(&bits)
                        .map(|(m, &o)| &m.effects[usize::from(o)].vec)
                        .fold(RVector::from(vec![Rational::one()]), |acc, e| acc.tensor(e));
                    odd += effect.dot(state)?;
                }
                Ok(odd)
            }
        }
    }
}

/// The circuit `C_x`: one measurement setting per advice port, accept iff
/// the outcome parity equals `accept_parity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdviceCircuit {
    pub instance: Vec<bool>,
    pub settings: Vec<usize>,
    pub accept_parity: bool,
}

/// Description of a uniform family `{C_x}`: the setting of port `j` is bit
/// `j` of the instance and the acceptance test is an outcome-parity
/// comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitFamily {
    pub n: usize,
    pub advice_ports: usize,
    pub accept_parity: bool,
}

impl CircuitFamily {
    pub fn measure_and_parity(n: usize) -> Self {
        Self {
            n,
            advice_ports: n,
            accept_parity: true,
        }
    }

    pub fn circuit(&self, x: usize) -> AdviceCircuit {
        let instance = index_to_bits(x, self.n);
        AdviceCircuit {
            settings: instance.iter().map(|&b| usize::from(b)).collect(),
            instance,
            accept_parity: self.accept_parity,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "measure advice port j with setting x_j (j = 1..{}), accept iff outcome parity is {}",
            self.advice_ports,
            u8::from(self.accept_parity)
        )
    }
}

/// Exact acceptance probability of `c` on `adv`: the total probability of
/// outcome strings whose parity matches the circuit's acceptance bit.
pub fn acceptance_probability(c: &AdviceCircuit, adv: &AdviceState) -> Result<Rational> {
    if c.settings.len() != adv.ports() {
        return Err(Error::RegisterMismatch {
            circuit: c.settings.len(),
            advice: adv.ports(),
        });
    }
    let odd = adv.odd_parity_probability(&c.settings)?;
    Ok(if c.accept_parity { odd } else { Rational::one() - odd })
}

/// Advice and circuit family deciding `slice`: the f-box of its membership
/// function on `n` ports.
pub fn build_boxworld_advice(slice: &LanguageSlice) -> Result<(AdviceState, CircuitFamily)> {
    let advice = AdviceState::boxworld(make_f_box(slice.membership())?);
    Ok((advice, CircuitFamily::measure_and_parity(slice.n())))
}

/// Acceptance cut-offs; probabilities strictly between them are invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub accept: Rational,
    pub reject: Rational,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            accept: rat(2, 3),
            reject: rat(1, 3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Accept,
    Reject,
    Invalid,
}

impl Thresholds {
    pub fn classify(&self, p: &Rational) -> Classification {
        if *p >= self.accept {
            Classification::Accept
        } else if *p <= self.reject {
            Classification::Reject
        } else {
            Classification::Invalid
        }
    }
}

/// Per-slice result. Serialises to
/// `{"n","agreement","total","gap","advice_ports"}`; the per-instance detail
/// stays in memory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub n: usize,
    pub agreement: usize,
    pub total: usize,
    /// Lowest acceptance probability on members minus the highest on
    /// non-members (an empty side contributes 1 or 0 respectively).
    #[serde(with = "serde_str_rational")]
    pub gap: Rational,
    pub advice_ports: usize,
    #[serde(skip)]
    pub probabilities: Vec<Rational>,
    #[serde(skip)]
    pub classifications: Vec<Classification>,
}

impl SliceReport {
    pub fn invalid(&self) -> usize {
        self.classifications
            .iter()
            .filter(|c| **c == Classification::Invalid)
            .count()
    }

    pub fn gap_string(&self) -> String {
        format_rational(&self.gap)
    }
}

/// Evaluates `family` with `advice` on every instance of the slice.
pub fn evaluate_family(
    slice: &LanguageSlice,
    advice: &AdviceState,
    family: &CircuitFamily,
    thresholds: &Thresholds,
) -> Result<SliceReport> {
    if family.n != slice.n() {
        return Err(Error::LengthMismatch {
            expected: slice.n(),
            got: family.n,
        });
    }
    let total = 1usize << slice.n();
    let mut probabilities = Vec::with_capacity(total);
    let mut classifications = Vec::with_capacity(total);
    let mut agreement = 0;
    let mut min_member = Rational::one();
    let mut max_other = Rational::zero();
    for x in 0..total {
        let p = acceptance_probability(&family.circuit(x), advice)?;
        let class = thresholds.classify(&p);
        let member = slice.contains(x);
        if member {
            if p < min_member {
                min_member = p.clone();
            }
        } else if p > max_other {
            max_other = p.clone();
        }
        let expected = if member {
            Classification::Accept
        } else {
            Classification::Reject
        };
        if class == expected {
            agreement += 1;
        }
        probabilities.push(p);
        classifications.push(class);
    }
    Ok(SliceReport {
        n: slice.n(),
        agreement,
        total,
        gap: min_member - max_other,
        advice_ports: advice.ports(),
        probabilities,
        classifications,
    })
}

/// Builds f-box advice for the slice and evaluates every instance with the
/// default (2/3, 1/3) thresholds.
pub fn decide_slice(slice: &LanguageSlice) -> Result<SliceReport> {
    let (advice, family) = build_boxworld_advice(slice)?;
    evaluate_family(slice, &advice, &family, &Thresholds::default())
}
