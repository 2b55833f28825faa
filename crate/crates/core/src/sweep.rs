//! Parameter sweeps: run the exact search over a grid of channels and
//! compare each optimum against the congruence-construction baseline and
//! the converse bounds.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::bounds::cardinality_upper;
use crate::congruence::CongruenceCode;
use crate::error::{Error, Result};
use crate::params::{ChannelParams, Mode, RawParams};
use crate::search::{build_conflict_graph, exact_optimum, Budget};
use crate::word::word_rank;

/// Which `(a, h, t)` triples a grid covers.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TripleSpec {
    /// Either the keyword `"all-admissible"` (every normalized triple for
    /// each `q`, `n`) or unexpected text, rejected at validation.
    Keyword(String),
    /// Explicit `"a,h,t"` entries; `.` wildcards allowed.
    List(Vec<String>),
}

impl Default for TripleSpec {
    fn default() -> Self {
        TripleSpec::Keyword("all-admissible".into())
    }
}

/// A sweep grid: channels are the cross product of `q`, `n`, `modes`, and
/// the triples, in the order given.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub q: Vec<u64>,
    pub n: Vec<u64>,
    pub modes: Vec<Mode>,
    #[serde(default)]
    pub triples: TripleSpec,
    /// Instances with more than this many words are skipped (an explicit
    /// opt-out; without it an oversized instance aborts the sweep).
    #[serde(default)]
    pub max_vertices: Option<u64>,
}

impl GridSpec {
    /// Expand, normalize, and deduplicate the grid into concrete channels,
    /// applying the `max_vertices` filter.
    pub fn instances(&self) -> Result<Vec<ChannelParams>> {
        if self.q.is_empty() || self.n.is_empty() || self.modes.is_empty() {
            return Err(Error::InvalidParams(
                "sweep grid needs at least one q, one n, and one mode".into(),
            ));
        }
        if self.modes.contains(&Mode::Integer) {
            return Err(Error::InvalidParams(
                "sweeps search finite word spaces; the integer alphabet has none".into(),
            ));
        }
        if let TripleSpec::Keyword(word) = &self.triples {
            if word != "all-admissible" {
                return Err(Error::InvalidParams(format!(
                    "unknown triples keyword {word:?} (expected \"all-admissible\" or a list)"
                )));
            }
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for &q in &self.q {
            for &n in &self.n {
                if let Some(cap) = self.max_vertices {
                    if exceeds(q, n, cap) {
                        continue;
                    }
                }
                for &mode in &self.modes {
                    for p in self.triples_for(q, n, mode)? {
                        if seen.insert(p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn triples_for(&self, q: u64, n: u64, mode: Mode) -> Result<Vec<ChannelParams>> {
        match &self.triples {
            TripleSpec::Keyword(_) => {
                let mut out = Vec::new();
                for a in 1..q {
                    for h in 1..=n {
                        for t in a..=a.saturating_mul(h) {
                            let p = RawParams { q: Some(q), n, a: Some(a), h: Some(h), t: Some(t) }
                                .normalize(mode)?;
                            debug_assert_eq!(
                                (p.amplitude(), p.hamming_budget(), p.total_budget()),
                                (a, h, t),
                                "generated triples must already be normalized"
                            );
                            out.push(p);
                        }
                    }
                }
                Ok(out)
            }
            TripleSpec::List(items) => items
                .iter()
                .map(|item| {
                    let fields: Vec<&str> = item.split(',').map(str::trim).collect();
                    if fields.len() != 3 {
                        return Err(Error::Parse(format!(
                            "triple {item:?} must have 3 comma-separated fields a,h,t"
                        )));
                    }
                    format!("{q},{n},{}", fields.join(","))
                        .parse::<RawParams>()?
                        .normalize(mode)
                })
                .collect(),
        }
    }
}

fn exceeds(q: u64, n: u64, cap: u64) -> bool {
    let mut words: u128 = 1;
    for _ in 0..n {
        words = words.saturating_mul(q as u128);
        if words > cap as u128 {
            return true;
        }
    }
    false
}

/// How a sweep row's optimum relates to theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFlag {
    /// Optimum meets the applicable converse bound.
    Tight,
    /// Exact optimum strictly below the bound (or no bound applies).
    Gap,
    /// Search strictly beat the best detecting congruence class.
    Counterexample,
    /// Budget ran out; only the interval is known.
    Truncated,
}

impl SweepFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFlag::Tight => "tight",
            SweepFlag::Gap => "gap",
            SweepFlag::Counterexample => "counterexample",
            SweepFlag::Truncated => "truncated",
        }
    }
}

impl fmt::Display for SweepFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sweep instance: the search interval, the congruence baseline (the
/// largest class that actually detects on this channel), and the flag.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub params: ChannelParams,
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub congruence_size: BigUint,
    pub flag: SweepFlag,
}

/// Size of the largest congruence class that is a detecting code for `p`,
/// checked against the conflict graph.
fn detecting_class_size(g: &crate::search::ConflictGraph, p: &ChannelParams) -> Result<BigUint> {
    let q = p.q().expect("sweep channels are bounded");
    let mut best = BigUint::ZERO;
    for j in 0..=p.total_budget() {
        let words = CongruenceCode::from_params(p, j)?.words()?;
        let ranks: Vec<usize> = words.iter().map(|w| word_rank(w, q)).collect();
        if g.is_independent(&ranks) {
            best = best.max(BigUint::from(words.len()));
        }
    }
    Ok(best)
}

/// Run the exact search across the grid. Every instance must fit under
/// `vertex_cap` (after the grid's own `max_vertices` filter).
pub fn run_sweep(grid: &GridSpec, budget: &Budget, vertex_cap: usize) -> Result<Vec<SweepRow>> {
    let instances = grid.instances()?;
    let mut rows = Vec::with_capacity(instances.len());
    for p in instances {
        let g = build_conflict_graph(&p, vertex_cap)?;
        let result = exact_optimum(&g, budget);
        let congruence_size = detecting_class_size(&g, &p)?;
        let bound = cardinality_upper(&p);
        let flag = if !result.exact() {
            SweepFlag::Truncated
        } else if BigUint::from(result.lower) > congruence_size {
            SweepFlag::Counterexample
        } else if bound.is_some_and(|b| b == BigUint::from(result.lower)) {
            SweepFlag::Tight
        } else {
            SweepFlag::Gap
        };
        rows.push(SweepRow {
            params: p,
            lower: result.lower,
            upper: result.upper,
            exact: result.exact(),
            congruence_size,
            flag,
        });
    }
    Ok(rows)
}

/// Header of the CSV rendering.
pub fn csv_header() -> &'static str {
    "q,n,a,h,t,mode,lower,upper,exact,congruence_size,flag"
}

impl SweepRow {
    /// One CSV line matching [`csv_header`].
    pub fn csv_line(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            p.q().expect("sweep channels are bounded"),
            p.n(),
            p.amplitude(),
            p.hamming_budget(),
            p.total_budget(),
            p.mode(),
            self.lower,
            self.upper,
            self.exact,
            self.congruence_size,
            self.flag
        )
    }
}

/// Render rows as a CSV document (header + one line per instance).
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(csv_header());
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}
