//! Converse bounds on detecting codes: the density bound over the integers,
//! the line-packing bound on finite alphabets, and the torus bound on cyclic
//! alphabets. Each report says whether the bound applies to the given
//! channel and why.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::params::{ChannelParams, Mode};

/// Which converse bound a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    /// Density of integer-alphabet codes is at most `1/(t+1)`.
    #[serde(rename = "density_Z")]
    DensityZ,
    /// Finite alphabet, inactive amplitude: at most `q^(n-1) * ceil(q/(t+1))`
    /// codewords.
    #[serde(rename = "line_q")]
    LineQ,
    /// Cyclic alphabet: at most `q^n / (t+1)` codewords.
    #[serde(rename = "cyclic_q")]
    CyclicQ,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::DensityZ => "density_Z",
            BoundKind::LineQ => "line_q",
            BoundKind::CyclicQ => "cyclic_q",
        }
    }
}

/// The numeric content of a bound, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundValue {
    /// An upper bound on code density (fraction of space).
    Density {
        #[serde(with = "crate::ser::ratio_str")]
        limit: BigRational,
    },
    /// An integer cardinality cap.
    Cardinality {
        #[serde(with = "crate::ser::biguint_dec")]
        words: BigUint,
    },
    /// A rational cardinality cap and its integer floor.
    CardinalityRational {
        #[serde(with = "crate::ser::ratio_str")]
        exact: BigRational,
        #[serde(with = "crate::ser::biguint_dec")]
        floor: BigUint,
    },
}

/// One converse bound evaluated against a channel. `value` is present
/// exactly when the bound is applicable; `reason` explains either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub applicable: bool,
    pub reason: String,
    pub value: Option<BoundValue>,
}

fn qn(q: u64, n: usize) -> BigUint {
    BigUint::from(q).pow(n as u32)
}

/// `q^(n-1) * ceil(q / (t+1))`.
fn line_bound(q: u64, n: usize, t: u64) -> BigUint {
    let m = t as u128 + 1;
    let per_line = (q as u128 + m - 1) / m;
    qn(q, n - 1) * BigUint::from(per_line)
}

/// `q^n / (t+1)` as an exact ratio.
fn torus_bound(q: u64, n: usize, t: u64) -> BigRational {
    BigRational::new(BigInt::from(qn(q, n)), BigInt::from(t as u128 + 1))
}

fn divisibility_note(q: u64, t: u64) -> &'static str {
    if q % (t + 1) == 0 {
        "; tight: t+1 divides q, congruence classes attain it"
    } else {
        ""
    }
}

fn density_report(p: &ChannelParams) -> BoundReport {
    let m = p.total_budget() + 1;
    match p.mode() {
        Mode::Integer => BoundReport {
            kind: BoundKind::DensityZ,
            applicable: true,
            reason: format!(
                "any detecting code meets each chain of {m} staircase translates at most once, \
                 so its density is at most 1/{m}; congruence codes attain it"
            ),
            value: Some(BoundValue::Density {
                limit: BigRational::new(BigInt::one(), BigInt::from(m)),
            }),
        },
        mode => BoundReport {
            kind: BoundKind::DensityZ,
            applicable: false,
            reason: format!(
                "density bounds measure codes over the integer alphabet; this channel is {mode}"
            ),
            value: None,
        },
    }
}

fn line_report(p: &ChannelParams) -> BoundReport {
    let t = p.total_budget();
    match p.mode() {
        Mode::Integer => BoundReport {
            kind: BoundKind::LineQ,
            applicable: false,
            reason: "line packing needs a bounded alphabet".into(),
            value: None,
        },
        Mode::Cyclic => BoundReport {
            kind: BoundKind::LineQ,
            applicable: false,
            reason: "lines wrap around on the cyclic alphabet; see cyclic_q".into(),
            value: None,
        },
        Mode::Finite if !p.amplitude_inactive() => {
            let q = p.q().unwrap();
            BoundReport {
                kind: BoundKind::LineQ,
                applicable: false,
                reason: format!(
                    "valid only when the amplitude limit is inactive (a = min(t, q-1)); \
                     here a={} < {}",
                    p.amplitude(),
                    t.min(q - 1)
                ),
                value: None,
            }
        }
        Mode::Finite => {
            let q = p.q().unwrap();
            let words = line_bound(q, p.n(), t);
            BoundReport {
                kind: BoundKind::LineQ,
                applicable: true,
                reason: format!(
                    "each of the q^(n-1) first-coordinate lines holds at most \
                     ceil(q/(t+1)) = {} codewords{}",
                    (q as u128 + t as u128) / (t as u128 + 1),
                    divisibility_note(q, t)
                ),
                value: Some(BoundValue::Cardinality { words }),
            }
        }
    }
}

fn torus_report(p: &ChannelParams) -> BoundReport {
    let t = p.total_budget();
    match p.mode() {
        Mode::Cyclic => {
            let q = p.q().unwrap();
            let exact = torus_bound(q, p.n(), t);
            let floor = qn(q, p.n()) / BigUint::from(t + 1);
            BoundReport {
                kind: BoundKind::CyclicQ,
                applicable: true,
                reason: format!(
                    "the t+1 staircase translates of any detecting code are pairwise \
                     disjoint on the torus, so |C| <= q^n/(t+1){}",
                    divisibility_note(q, t)
                ),
                value: Some(BoundValue::CardinalityRational { exact, floor }),
            }
        }
        mode => BoundReport {
            kind: BoundKind::CyclicQ,
            applicable: false,
            reason: format!("torus packing needs the cyclic alphabet; this channel is {mode}"),
            value: None,
        },
    }
}

/// Evaluate all three converse bounds against `p`, in a fixed order.
pub fn all_bounds(p: &ChannelParams) -> Vec<BoundReport> {
    vec![density_report(p), line_report(p), torus_report(p)]
}

/// The sharpest applicable cardinality cap for `p`, if any bound applies:
/// the line bound on finite alphabets (inactive amplitude only) and the
/// floored torus bound on cyclic ones.
pub fn cardinality_upper(p: &ChannelParams) -> Option<BigUint> {
    let t = p.total_budget();
    match p.mode() {
        Mode::Finite if p.amplitude_inactive() => Some(line_bound(p.q().unwrap(), p.n(), t)),
        Mode::Cyclic => Some(qn(p.q().unwrap(), p.n()) / BigUint::from(t + 1)),
        _ => None,
    }
}
