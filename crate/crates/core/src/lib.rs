//! Error detection on asymmetric channels whose additive noise is
//! nonnegative and limited in amplitude (`a` per coordinate), spread
//! (Hamming weight at most `h`), and magnitude (total weight at most `t`),
//! over integer, finite, or cyclic alphabets.
//!
//! The crate provides:
//!
//! * the noise model itself: admissibility checks, output-region
//!   enumeration, and uniform error sampling ([`noise`]);
//! * congruence codes `{x : sum(x) ≡ j (mod t+1)}` with exact counting,
//!   enumeration, lattice generator matrices, and window densities
//!   ([`congruence`]);
//! * exact verification that a code detects every admissible error, packing
//!   certificates, and minimum Hamming distance ([`detect`]);
//! * converse bounds with applicability reports ([`bounds`]);
//! * an exact branch-and-bound search for optimal code sizes on small
//!   channels, plus parameter sweeps ([`search`], [`sweep`]);
//! * a deterministic Monte Carlo simulator ([`sim`]).
//!
//! All counts and densities are exact (`BigUint` / `BigRational`); nothing
//! is estimated with floating point.
//!
//! ```
//! use aed_core::{ChannelParams, CongruenceCode, Mode, is_aed};
//!
//! // Channel: q = 6, n = 2, noise amplitude/weight/total all 2.
//! let p = ChannelParams::new(Mode::Finite, Some(6), 2, None, None, Some(2)).unwrap();
//! let code = CongruenceCode::from_params(&p, 2).unwrap();
//! let words = code.words().unwrap();
//! assert_eq!(words.len(), 12);
//! assert!(is_aed(&words, &p).unwrap().holds);
//! ```

pub mod bounds;
pub mod congruence;
pub mod detect;
mod error;
pub mod noise;
pub mod params;
pub mod search;
pub mod ser;
pub mod sim;
pub mod sweep;
pub mod word;

pub use bounds::{all_bounds, cardinality_upper, BoundKind, BoundReport, BoundValue};
pub use congruence::{
    best_index, class_counts, generator_matrix, max_index, Alphabet, CongruenceCode,
    DensityReport, GeneratorMatrix, DEFAULT_ENUM_CAP,
};
pub use detect::{
    is_aed, is_aed_capped, min_hamming_distance, packing_set, verify_packing, AedVerdict,
    PackingSet, DEFAULT_PROBE_CAP,
};
pub use error::{Error, Result};
pub use noise::{
    count_admissible_errors, enumerate_out, enumerate_out_capped, is_admissible, sample_error,
    ErrorSampler, OutRegion, DEFAULT_REGION_CAP,
};
pub use params::{ChannelParams, Mode, RawParams};
pub use search::{
    build_conflict_graph, exact_optimum, greedy_lower_bound, Budget, ConflictGraph, SearchResult,
    SearchStats, VertexOrder, DEFAULT_VERTEX_CAP,
};
pub use sim::{simulate, Adversary, SimCode, SimReport};
pub use sweep::{csv_header, rows_to_csv, run_sweep, GridSpec, SweepFlag, SweepRow, TripleSpec};
pub use word::{format_word, parse_code, parse_words, Coord, ExplicitCode, Word};
