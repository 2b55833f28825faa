//! Channel parameters: alphabet mode, block length, and the noise limits
//! (amplitude `a`, Hamming-weight budget `h`, total-weight budget `t`).
//!
//! Raw tuples may leave `a`, `h`, `t` (and `q` in integer mode)
//! unconstrained; [`RawParams::normalize`] resolves the wildcards and clamps
//! redundant slack so every downstream computation sees a canonical tuple
//! satisfying `1 <= a <= t <= a*h`, `h <= n`, and `a <= q-1` on bounded
//! alphabets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alphabet flavor of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Unbounded integer coordinates; noise adds without saturation.
    Integer,
    /// Coordinates in `{0, .., q-1}`; only outputs inside the alphabet are
    /// reachable (noise never pushes a coordinate past `q-1`).
    Finite,
    /// Coordinates in `{0, .., q-1}` with addition modulo `q`.
    Cyclic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Integer => "integer",
            Mode::Finite => "finite",
            Mode::Cyclic => "cyclic",
        }
    }

    /// True for the bounded alphabets (finite and cyclic).
    pub fn is_bounded(self) -> bool {
        !matches!(self, Mode::Integer)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer" => Ok(Mode::Integer),
            "finite" => Ok(Mode::Finite),
            "cyclic" => Ok(Mode::Cyclic),
            other => Err(Error::Parse(format!(
                "unknown mode {other:?} (expected integer, finite, or cyclic)"
            ))),
        }
    }
}

/// Unnormalized parameter tuple `q,n,a,h,t`, with `None` marking an
/// unconstrained entry (spelled `.` in the text form).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawParams {
    pub q: Option<u64>,
    pub n: u64,
    pub a: Option<u64>,
    pub h: Option<u64>,
    pub t: Option<u64>,
}

impl RawParams {
    /// Resolve wildcards and clamp slack into a canonical [`ChannelParams`].
    ///
    /// Wildcards resolve in the order `h`, `a`, `t`:
    /// * missing `h` becomes `n` (no sparsity constraint);
    /// * missing `a` becomes `min(t, q-1)` when `t` is given, else `q-1`
    ///   (rejecting the integer alphabet when `t` is also missing, since the
    ///   noise would be unbounded);
    /// * missing `t` becomes `a*h`.
    ///
    /// Then redundant slack is removed: `a` drops to `min(a, t, q-1)` and `t`
    /// to `min(t, a*h)`. Normalizing twice yields the same tuple.
    pub fn normalize(&self, mode: Mode) -> Result<ChannelParams> {
        let q = match (mode, self.q) {
            (Mode::Integer, None) => None,
            (Mode::Integer, Some(q)) => {
                return Err(Error::InvalidParams(format!(
                    "integer mode takes no alphabet size (got q={q}); write '.'"
                )))
            }
            (_, None) => {
                return Err(Error::InvalidParams(format!(
                    "{mode} mode requires an alphabet size q"
                )))
            }
            (_, Some(q)) if q < 2 => {
                return Err(Error::InvalidParams(format!(
                    "alphabet size must be at least 2, got q={q}"
                )))
            }
            (_, Some(q)) => Some(q),
        };

        if self.n == 0 {
            return Err(Error::InvalidParams("block length n must be positive".into()));
        }
        let n = usize::try_from(self.n)
            .map_err(|_| Error::InvalidParams(format!("block length n={} too large", self.n)))?;

        for (name, v) in [("a", self.a), ("h", self.h), ("t", self.t)] {
            if v == Some(0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be at least 1 (use '.' for no constraint)"
                )));
            }
        }
        if let Some(h) = self.h {
            if h > self.n {
                return Err(Error::InvalidParams(format!(
                    "Hamming-weight bound h={h} exceeds block length n={}",
                    self.n
                )));
            }
        }
        let h = self.h.unwrap_or(self.n);

        let amp_max = q.map(|q| q - 1);
        let a0 = match (self.a, self.t) {
            (Some(a), _) => a,
            (None, Some(t)) => amp_max.map_or(t, |m| t.min(m)),
            (None, None) => amp_max.ok_or_else(|| {
                Error::InvalidParams(
                    "amplitude and total weight cannot both be unconstrained \
                     over the integer alphabet (noise would be unbounded)"
                        .into(),
                )
            })?,
        };
        let t0 = self.t.unwrap_or_else(|| a0.saturating_mul(h));

        let mut a = a0.min(t0);
        if let Some(m) = amp_max {
            a = a.min(m);
        }
        let t = t0.min(a.saturating_mul(h));

        debug_assert!(1 <= a && a <= t && t <= a.saturating_mul(h) && h <= self.n);
        Ok(ChannelParams { mode, q, n, a, h, t })
    }
}

impl FromStr for RawParams {
    type Err = Error;

    /// Parse the `q,n,a,h,t` text form; `.` means unconstrained.
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "expected 5 comma-separated fields q,n,a,h,t, got {} in {s:?}",
                fields.len()
            )));
        }
        let entry = |name: &str, field: &str| -> Result<Option<u64>> {
            if field == "." {
                return Ok(None);
            }
            field.parse::<u64>().map(Some).map_err(|_| {
                Error::Parse(format!("field {name} must be a nonnegative integer or '.', got {field:?}"))
            })
        };
        let q = entry("q", fields[0])?;
        let n = entry("n", fields[1])?
            .ok_or_else(|| Error::Parse("block length n cannot be '.'".into()))?;
        Ok(RawParams {
            q,
            n,
            a: entry("a", fields[2])?,
            h: entry("h", fields[3])?,
            t: entry("t", fields[4])?,
        })
    }
}

impl fmt::Display for RawParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dot = |v: Option<u64>| v.map_or(".".to_string(), |v| v.to_string());
        write!(
            f,
            "{},{},{},{},{}",
            dot(self.q),
            self.n,
            dot(self.a),
            dot(self.h),
            dot(self.t)
        )
    }
}

/// Normalized channel parameters; the only way to build one is
/// [`RawParams::normalize`] (or the [`ChannelParams::new`] shorthand), so the
/// invariants hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChannelParams {
    mode: Mode,
    q: Option<u64>,
    n: usize,
    a: u64,
    h: u64,
    t: u64,
}

impl ChannelParams {
    /// Normalize an explicit tuple (every entry optional except `n`).
    pub fn new(
        mode: Mode,
        q: Option<u64>,
        n: u64,
        a: Option<u64>,
        h: Option<u64>,
        t: Option<u64>,
    ) -> Result<Self> {
        RawParams { q, n, a, h, t }.normalize(mode)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Alphabet size; `None` on the integer alphabet.
    pub fn q(&self) -> Option<u64> {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self) -> u64 {
        self.a
    }

    pub fn hamming_budget(&self) -> u64 {
        self.h
    }

    pub fn total_budget(&self) -> u64 {
        self.t
    }

    /// Modulus `t + 1` used by the congruence constructions.
    pub fn modulus(&self) -> u64 {
        self.t + 1
    }

    /// True when the amplitude limit is implied by the other constraints
    /// (`a = min(t, q-1)`, or `a = t` on the integer alphabet), i.e. dropping
    /// it would leave the admissible noise set unchanged.
    pub fn amplitude_inactive(&self) -> bool {
        let implied = match self.q {
            Some(q) => self.t.min(q - 1),
            None => self.t,
        };
        self.a == implied
    }

    /// The tuple in `q,n,a,h,t` text form (integer mode shows `.` for `q`).
    pub fn tuple_string(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.q.map_or(".".to_string(), |q| q.to_string()),
            self.n,
            self.a,
            self.h,
            self.t
        )
    }
}

impl fmt::Display for ChannelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.tuple_string(), self.mode)
    }
}
