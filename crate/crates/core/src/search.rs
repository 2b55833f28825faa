//! Exact optima for small channels: the conflict graph over all `q^n` words
//! (edges join confusable pairs) and a deterministic branch-and-bound
//! maximum-independent-set search seeded with greedy and congruence-class
//! incumbents and cut with converse bounds plus greedy clique covers.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::bounds::cardinality_upper;
use crate::congruence::CongruenceCode;
use crate::error::{Error, Result};
use crate::noise::{enumerate_out, region_size_bound};
use crate::params::ChannelParams;
use crate::word::{word_from_rank, word_rank, ExplicitCode, Word};

/// Default cap on conflict-graph vertices (`q^n`).
pub const DEFAULT_VERTEX_CAP: usize = 1 << 20;

/// Hard cap on the dense adjacency bitset.
const MAX_ADJACENCY_BYTES: u128 = 2 << 30;

/// Edge building stops making sense beyond this many region probes.
const BUILD_PROBE_CAP: u128 = 2_000_000_000;

/// Clique-cover bounds are computed only on subproblems up to this size;
/// larger ones rely on the cheap popcount bound.
const COVER_THRESHOLD: u64 = 96;

/// Dense undirected graph on all words of a bounded alphabet, with an edge
/// wherever one word can be received for the other. Vertex `i` is the word
/// of lexicographic rank `i`; independent sets are exactly the detecting
/// codes.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    params: ChannelParams,
    vertices: usize,
    blocks: usize,
    adj: Vec<u64>,
}

impl ConflictGraph {
    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn word(&self, v: usize) -> Word {
        word_from_rank(v, self.params.q().unwrap(), self.params.n())
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.blocks..(v + 1) * self.blocks]
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|b| b.count_ones() as usize).sum::<usize>() / 2
    }

    /// Are the given vertices pairwise non-adjacent (i.e. a detecting code)?
    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        let mut mask = vec![0u64; self.blocks];
        for &v in vertices {
            bit_set(&mut mask, v);
        }
        vertices.iter().all(|&v| and_popcount(self.row(v), &mask) == 0)
    }

    fn full_mask(&self) -> Vec<u64> {
        let mut mask = vec![!0u64; self.blocks];
        let spare = self.blocks * 64 - self.vertices;
        if spare > 0 {
            mask[self.blocks - 1] = !0u64 >> spare;
        }
        mask
    }
}

/// Build the conflict graph of `p` over all `q^n` words, refusing channels
/// whose word count exceeds `vertex_cap`.
pub fn build_conflict_graph(p: &ChannelParams, vertex_cap: usize) -> Result<ConflictGraph> {
    let Some(q) = p.q() else {
        return Err(Error::InfiniteAlphabet("the conflict graph"));
    };
    let mut vertices: u128 = 1;
    for _ in 0..p.n() {
        vertices = vertices.saturating_mul(q as u128);
        if vertices > vertex_cap as u128 {
            return Err(Error::Capacity(format!(
                "q^n exceeds the vertex cap of {vertex_cap} words"
            )));
        }
    }
    let vertices = vertices as usize;
    let blocks = vertices.div_ceil(64);
    let bytes = vertices as u128 * blocks as u128 * 8;
    if bytes > MAX_ADJACENCY_BYTES {
        return Err(Error::Capacity(format!(
            "adjacency bitset would need {bytes} bytes (limit {MAX_ADJACENCY_BYTES})"
        )));
    }
    let probes = vertices as u128
        * region_size_bound(p)?
            .to_u128()
            .unwrap_or(u128::MAX);
    if probes > BUILD_PROBE_CAP {
        return Err(Error::Capacity(format!(
            "building the graph needs ~{probes} region probes (cap {BUILD_PROBE_CAP})"
        )));
    }

    let neighbor_lists: Vec<Vec<usize>> = (0..vertices)
        .into_par_iter()
        .map(|v| {
            let x = word_from_rank(v, q, p.n());
            let region = enumerate_out(&x, p).expect("region size checked above");
            region
                .members()
                .iter()
                .map(|y| word_rank(y, q))
                .filter(|&u| u != v)
                .collect()
        })
        .collect();

    let mut adj = vec![0u64; vertices * blocks];
    for (v, neighbors) in neighbor_lists.iter().enumerate() {
        for &u in neighbors {
            adj[v * blocks + u / 64] |= 1 << (u % 64);
            adj[u * blocks + v / 64] |= 1 << (v % 64);
        }
    }
    Ok(ConflictGraph { params: *p, vertices, blocks, adj })
}

fn popcount(mask: &[u64]) -> u64 {
    mask.iter().map(|b| b.count_ones() as u64).sum()
}

fn and_popcount(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum()
}

fn bit_set(mask: &mut [u64], i: usize) {
    mask[i / 64] |= 1 << (i % 64);
}

fn bit_clear(mask: &mut [u64], i: usize) {
    mask[i / 64] &= !(1 << (i % 64));
}

fn is_subset(sub: &[u64], sup: &[u64]) -> bool {
    sub.iter().zip(sup).all(|(s, p)| s & !p == 0)
}

fn ones(mask: &[u64]) -> impl Iterator<Item = usize> + '_ {
    mask.iter().enumerate().flat_map(|(block, &bits)| {
        let mut bits = bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(block * 64 + i)
        })
    })
}

/// Vertex orders for the greedy baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// Fewest conflicts first (ties by rank); the default.
    #[default]
    MinDegreeFirst,
    /// Plain lexicographic rank order.
    RankAscending,
}

fn greedy_mask(g: &ConflictGraph, order: VertexOrder) -> Vec<u64> {
    let mut vertices: Vec<usize> = (0..g.vertex_count()).collect();
    if order == VertexOrder::MinDegreeFirst {
        vertices.sort_by_key(|&v| (g.degree(v), v));
    }
    let mut chosen = vec![0u64; g.blocks];
    for v in vertices {
        if and_popcount(g.row(v), &chosen) == 0 {
            bit_set(&mut chosen, v);
        }
    }
    chosen
}

/// Greedy maximal independent set — a quick valid detecting code, and the
/// search's fallback incumbent.
pub fn greedy_lower_bound(g: &ConflictGraph, order: VertexOrder) -> ExplicitCode {
    let mask = greedy_mask(g, order);
    mask_to_code(g, &mask)
}

fn mask_to_code(g: &ConflictGraph, mask: &[u64]) -> ExplicitCode {
    let words: Vec<Word> = ones(mask).map(|v| g.word(v)).collect();
    ExplicitCode::new(words, g.params().q().unwrap()).expect("vertices are valid distinct words")
}

/// The largest congruence class that is independent in `g`, as a bitmask.
/// On non-wrapping alphabets every class qualifies; on cyclic ones the
/// independence check matters.
fn best_congruence_seed(g: &ConflictGraph) -> Option<Vec<u64>> {
    let p = g.params();
    let q = p.q()?;
    let mut best: Option<(u64, Vec<u64>)> = None;
    for j in 0..=p.total_budget() {
        let code = CongruenceCode::from_params(p, j).ok()?;
        let words = code.words().ok()?;
        let mut mask = vec![0u64; g.blocks];
        for w in &words {
            bit_set(&mut mask, word_rank(w, q));
        }
        if ones(&mask).any(|v| and_popcount(g.row(v), &mask) != 0) {
            continue;
        }
        let size = popcount(&mask);
        if best.as_ref().is_none_or(|(b, _)| size > *b) {
            best = Some((size, mask));
        }
    }
    best.map(|(_, mask)| mask)
}

/// Greedy clique cover of the vertices in `p_mask`: its size bounds the
/// independence number of the subproblem from above.
fn cover_bound(g: &ConflictGraph, p_mask: &[u64]) -> u64 {
    let mut cliques: Vec<Vec<u64>> = Vec::new();
    for v in ones(p_mask) {
        let row = g.row(v);
        match cliques.iter_mut().find(|c| is_subset(c, row)) {
            Some(clique) => bit_set(clique, v),
            None => {
                let mut clique = vec![0u64; g.blocks];
                bit_set(&mut clique, v);
                cliques.push(clique);
            }
        }
    }
    cliques.len() as u64
}

/// Node and time budget for the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_time: None }
    }
}

/// Deterministic counters from one search run. Wall time is informational
/// only and never serialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub wall: Duration,
}

/// Outcome of the exact search: an interval `[lower, upper]` on the optimum
/// together with a witness code attaining `lower`. `lower == upper` means
/// the search finished (or the bounds met) inside the budget.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub lower: u64,
    pub upper: u64,
    pub witness: ExplicitCode,
    pub truncated: bool,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn optimum(&self) -> Option<u64> {
        self.exact().then_some(self.lower)
    }
}

struct Searcher<'g> {
    g: &'g ConflictGraph,
    max_nodes: u64,
    deadline: Option<Instant>,
    best: u64,
    best_mask: Vec<u64>,
    nodes: u64,
    prunes: u64,
    truncated: bool,
}

impl Searcher<'_> {
    fn branch(&mut self, mut p_mask: Vec<u64>, mut chosen: Vec<u64>, mut size: u64) {
        if self.truncated {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes
            || self
                .deadline
                .is_some_and(|d| self.nodes % 1024 == 0 && Instant::now() > d)
        {
            self.truncated = true;
            return;
        }

        // Vertices with no conflicts inside the subproblem are always taken.
        let isolated: Vec<usize> = ones(&p_mask)
            .filter(|&v| and_popcount(self.g.row(v), &p_mask) == 0)
            .collect();
        for v in isolated {
            bit_set(&mut chosen, v);
            bit_clear(&mut p_mask, v);
            size += 1;
        }

        let remaining = popcount(&p_mask);
        if remaining == 0 {
            if size > self.best {
                self.best = size;
                self.best_mask = chosen;
            }
            return;
        }
        if size + remaining <= self.best {
            self.prunes += 1;
            return;
        }
        if remaining <= COVER_THRESHOLD && size + cover_bound(self.g, &p_mask) <= self.best {
            self.prunes += 1;
            return;
        }

        // Branch on the most conflicted vertex: include it, then exclude it.
        let pivot = ones(&p_mask)
            .max_by_key(|&v| (and_popcount(self.g.row(v), &p_mask), std::cmp::Reverse(v)))
            .expect("nonempty subproblem");

        let mut include_p = p_mask.clone();
        for (block, row) in include_p.iter_mut().zip(self.g.row(pivot)) {
            *block &= !row;
        }
        bit_clear(&mut include_p, pivot);
        let mut include_chosen = chosen.clone();
        bit_set(&mut include_chosen, pivot);
        self.branch(include_p, include_chosen, size + 1);

        bit_clear(&mut p_mask, pivot);
        self.branch(p_mask, chosen, size);
    }
}

/// Run the exact search on `g` under `budget`. The incumbent starts from
/// the better of the greedy code and the largest independent congruence
/// class; when that already meets the sharpest converse bound the proof is
/// immediate and no nodes are expanded.
pub fn exact_optimum(g: &ConflictGraph, budget: &Budget) -> SearchResult {
    let start = Instant::now();
    let mut incumbent = greedy_mask(g, VertexOrder::MinDegreeFirst);
    if let Some(seed) = best_congruence_seed(g) {
        if popcount(&seed) > popcount(&incumbent) {
            incumbent = seed;
        }
    }
    let lower = popcount(&incumbent);

    let full = g.full_mask();
    let mut upper = g.vertex_count() as u64;
    if let Some(bound) = cardinality_upper(g.params()).and_then(|b| b.to_u64()) {
        upper = upper.min(bound);
    }
    upper = upper.min(cover_bound(g, &full));
    debug_assert!(lower <= upper);

    if lower == upper {
        return SearchResult {
            lower,
            upper,
            witness: mask_to_code(g, &incumbent),
            truncated: false,
            stats: SearchStats { nodes: 0, prunes: 0, wall: start.elapsed() },
        };
    }

    let mut searcher = Searcher {
        g,
        max_nodes: budget.max_nodes,
        deadline: budget.max_time.map(|d| start + d),
        best: lower,
        best_mask: incumbent,
        nodes: 0,
        prunes: 0,
        truncated: false,
    };
    // Take/skip chains can recurse once per vertex; give the search its own
    // generous stack instead of gambling on the caller's.
    let chosen = vec![0u64; g.blocks];
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(scope, || searcher.branch(full, chosen, 0))
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    });

    let lower = searcher.best;
    let upper = if searcher.truncated { upper.max(lower) } else { lower };
    SearchResult {
        lower,
        upper,
        witness: mask_to_code(g, &searcher.best_mask),
        truncated: searcher.truncated,
        stats: SearchStats {
            nodes: searcher.nodes,
            prunes: searcher.prunes,
            wall: start.elapsed(),
        },
    }
}
