//! Exact verification that a code detects every admissible error, packing
//! certificates, and the Hamming-distance characterization used on cyclic
//! alphabets.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::noise::{enumerate_out, region_size_bound};
use crate::params::ChannelParams;
use crate::word::{validate_word, Coord, Word};

/// Default budget on membership probes (codewords times region size).
pub const DEFAULT_PROBE_CAP: u128 = 1_000_000_000;

/// Outcome of exact verification: either the code detects everything, or a
/// lexicographically-least confusable pair is produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AedVerdict {
    pub holds: bool,
    /// A pair `(x, y)` of distinct codewords with `y` reachable from `x`;
    /// present exactly when `holds` is false. Least `x` first, then least
    /// `y` within that region.
    pub witness: Option<(Word, Word)>,
}

/// Does the code detect every admissible error? A code fails exactly when
/// some distinct codeword pair `(x, y)` has `y` in the output region of `x`.
/// Duplicates in `words` are collapsed; every word must fit the alphabet.
pub fn is_aed(words: &[Word], p: &ChannelParams) -> Result<AedVerdict> {
    is_aed_capped(words, p, DEFAULT_PROBE_CAP)
}

/// [`is_aed`] with an explicit probe budget.
pub fn is_aed_capped(words: &[Word], p: &ChannelParams, probe_cap: u128) -> Result<AedVerdict> {
    if words.is_empty() {
        return Err(Error::EmptyCode);
    }
    for w in words {
        validate_word(w, p)?;
    }
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();

    let region_bound = region_size_bound(p)?;
    let probes = BigUint::from(sorted.len()) * &region_bound;
    if probes > BigUint::from(probe_cap) {
        return Err(Error::Capacity(format!(
            "verification needs up to {probes} membership probes (cap {probe_cap}); \
             shrink the code or the noise budgets"
        )));
    }

    let index: HashSet<&[Coord]> = sorted.iter().map(|w| w.as_slice()).collect();
    // Regions are scanned in code order and each region lexicographically,
    // so the first hit reported is the canonical least witness.
    let witness = sorted.par_iter().find_map_first(|&x| {
        let region = enumerate_out(x, p).expect("region size checked against the probe cap");
        region
            .members()
            .iter()
            .find(|y| y.as_slice() != x.as_slice() && index.contains(y.as_slice()))
            .map(|y| (x.clone(), y.clone()))
    });
    Ok(AedVerdict { holds: witness.is_none(), witness })
}

/// The canonical staircase packing: starting from the origin, raise the
/// current coordinate by one until the amplitude is reached, then move to
/// the next coordinate, until total weight `t`. Its `t + 1` vectors are
/// pairwise confusable chain points used to certify converse bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSet {
    vectors: Vec<Word>,
}

impl PackingSet {
    pub fn vectors(&self) -> &[Word] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Build the staircase packing for `p` (always `t + 1` vectors; fits in
/// `n` coordinates because `t <= a * h` and `h <= n`).
pub fn packing_set(p: &ChannelParams) -> PackingSet {
    let n = p.n();
    let a = p.amplitude() as Coord;
    let t = p.total_budget();
    let mut current = vec![0 as Coord; n];
    let mut vectors = Vec::with_capacity(t as usize + 1);
    vectors.push(current.clone());
    let mut idx = 0;
    for _ in 0..t {
        if current[idx] == a {
            idx += 1;
        }
        current[idx] += 1;
        vectors.push(current.clone());
    }
    debug_assert_eq!(vectors.len(), t as usize + 1);
    PackingSet { vectors }
}

/// Check that the translates `x + s` over `s` in the packing are pairwise
/// distinct across all `x` in `words` — i.e. the packing tiles the word list
/// without collisions. Words must share the packing's length.
pub fn verify_packing(words: &[Word], packing: &PackingSet) -> Result<bool> {
    let Some(first) = packing.vectors().first() else {
        return Err(Error::EmptyCode);
    };
    let n = first.len();
    let mut seen: HashSet<Word> = HashSet::with_capacity(words.len() * packing.len());
    for x in words {
        if x.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: x.len() });
        }
        for s in packing.vectors() {
            let y: Word = x.iter().zip(s).map(|(&xv, &sv)| xv + sv).collect();
            if !seen.insert(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum pairwise Hamming distance of a code (needs two or more distinct
/// words). On cyclic alphabets, detecting all weight-`h` noise is the same
/// as having minimum distance above `h`.
pub fn min_hamming_distance(words: &[Word]) -> Result<u64> {
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Err(Error::InvalidParams(
            "minimum distance needs at least two distinct words".into(),
        ));
    }
    let n = sorted[0].len();
    for w in &sorted {
        if w.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: w.len() });
        }
    }
    let min = sorted
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            sorted[i + 1..]
                .iter()
                .map(|y| x.iter().zip(y.iter()).filter(|(a, b)| a != b).count() as u64)
                .min()
                .unwrap_or(u64::MAX)
        })
        .min()
        .expect("at least two words");
    Ok(min)
}

/// Convenience: the probe budget needed by [`is_aed`] for a given code size
/// under `p`, if it is finitely computable.
pub fn probe_cost(code_size: usize, p: &ChannelParams) -> Result<BigUint> {
    Ok(BigUint::from(code_size) * region_size_bound(p)?)
}

/// True when the probe cost fits the default cap.
pub fn probe_cost_fits(code_size: usize, p: &ChannelParams) -> bool {
    probe_cost(code_size, p)
        .map(|c| c.to_u128().map_or(false, |c| c <= DEFAULT_PROBE_CAP))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::CongruenceCode;
    use crate::params::{Mode, RawParams};

    fn params(mode: Mode, s: &str) -> ChannelParams {
        s.parse::<RawParams>().unwrap().normalize(mode).unwrap()
    }

    /// Oracle: quadratic scan over all pairs using region membership.
    fn brute_verdict(words: &[Word], p: &ChannelParams) -> AedVerdict {
        let mut sorted: Vec<Word> = words.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for x in &sorted {
            let region = enumerate_out(x, p).unwrap();
            for y in region.members() {
                if y != x && sorted.binary_search(y).is_ok() {
                    return AedVerdict { holds: false, witness: Some((x.clone(), y.clone())) };
                }
            }
        }
        AedVerdict { holds: true, witness: None }
    }

    #[test]
    fn congruence_codes_detect_on_finite_alphabets() {
        for q in 2..=5u64 {
            for n in 1..=3u64 {
                for t in 1..=4u64 {
                    let raw = RawParams { q: Some(q), n, a: None, h: None, t: Some(t) };
                    let Ok(p) = raw.normalize(Mode::Finite) else { continue };
                    for j in 0..p.modulus() {
                        let code = CongruenceCode::from_params(&p, j).unwrap();
                        let words = code.words().unwrap();
                        if words.is_empty() {
                            continue;
                        }
                        let verdict = is_aed(&words, &p).unwrap();
                        assert!(verdict.holds, "q={q} n={n} t={t} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_are_canonical_and_real() {
        // The full word cube cannot detect anything: the least witness is
        // the origin and its first nonzero neighbor.
        let p = params(Mode::Finite, "3,2,1,2,2");
        let all: Vec<Word> = (0..9).map(|r| crate::word::word_from_rank(r, 3, 2)).collect();
        let verdict = is_aed(&all, &p).unwrap();
        assert!(!verdict.holds);
        assert_eq!(verdict.witness, Some((vec![0, 0], vec![0, 1])));

        // Witness agrees with the quadratic oracle on random subsets.
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..60 {
            let mut subset = all.clone();
            subset.shuffle(&mut rng);
            let size = 2 + (trial % 6);
            subset.truncate(size);
            let fast = is_aed(&subset, &p).unwrap();
            let slow = brute_verdict(&subset, &p);
            assert_eq!(fast, slow, "subset {subset:?}");
        }
    }

    #[test]
    fn detection_depends_on_the_mode() {
        // Parity code over q=2, n=2 with single unit errors detects in both
        // modes: a weight-1 error flips the parity whether or not it wraps.
        let parity = vec![vec![0, 0], vec![1, 1]];
        assert!(is_aed(&parity, &params(Mode::Finite, "2,2,1,1,1")).unwrap().holds);
        assert!(is_aed(&parity, &params(Mode::Cyclic, "2,2,1,1,1")).unwrap().holds);

        // A saturated coordinate blocks further increase on the clipped
        // alphabet but wraps around on the cyclic one.
        let pair = vec![vec![2, 2], vec![0, 2]];
        assert!(is_aed(&pair, &params(Mode::Finite, "3,2,1,1,1")).unwrap().holds);
        let verdict = is_aed(&pair, &params(Mode::Cyclic, "3,2,1,1,1")).unwrap();
        assert!(!verdict.holds); // (2,2) + (1,0) wraps to (0,2)
        assert_eq!(verdict.witness, Some((vec![2, 2], vec![0, 2])));
    }

    #[test]
    fn probe_cap_is_enforced() {
        let p = params(Mode::Finite, "3,2,1,2,2");
        let words = vec![vec![0, 0], vec![1, 2]];
        assert!(matches!(is_aed_capped(&words, &p, 5), Err(Error::Capacity(_))));
        assert!(is_aed_capped(&words, &p, 100).is_ok());
    }

    #[test]
    fn packing_set_is_the_staircase() {
        let p = params(Mode::Integer, ".,4,2,2,4");
        let s = packing_set(&p);
        assert_eq!(
            s.vectors(),
            &[
                vec![0, 0, 0, 0],
                vec![1, 0, 0, 0],
                vec![2, 0, 0, 0],
                vec![2, 1, 0, 0],
                vec![2, 2, 0, 0],
            ]
        );

        let p = params(Mode::Integer, ".,3,1,3,3");
        let s = packing_set(&p);
        assert_eq!(
            s.vectors(),
            &[vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]
        );
    }

    #[test]
    fn packing_vectors_are_pairwise_confusable() {
        // Differences of consecutive prefix sums are admissible errors, so
        // each later vector is reachable from each earlier one.
        for (a, h, t) in [(1u64, 3u64, 3u64), (2, 2, 4), (3, 2, 5), (2, 3, 5)] {
            let raw = RawParams { q: None, n: 4, a: Some(a), h: Some(h), t: Some(t) };
            let Ok(p) = raw.normalize(Mode::Integer) else { continue };
            let s = packing_set(&p);
            for i in 0..s.len() {
                for k in i + 1..s.len() {
                    let diff: Word = s.vectors()[k]
                        .iter()
                        .zip(&s.vectors()[i])
                        .map(|(&b, &a)| b - a)
                        .collect();
                    assert!(
                        crate::noise::is_admissible(&diff, &p).unwrap(),
                        "a={a} h={h} t={t}: {:?} -> {:?}",
                        s.vectors()[i],
                        s.vectors()[k]
                    );
                }
            }
        }
    }

    #[test]
    fn packing_certificate_accepts_codes_and_rejects_overlaps() {
        let p = params(Mode::Integer, ".,2,2,2,2");
        let s = packing_set(&p);
        let code = CongruenceCode::integer(2, 2).unwrap();
        assert!(verify_packing(&code.window_words(4).unwrap(), &s).unwrap());

        // Neighboring base words collide: (0,0) + (1,0) = (1,0) + (0,0).
        let clashing = vec![vec![0, 0], vec![1, 0]];
        assert!(!verify_packing(&clashing, &s).unwrap());
    }

    #[test]
    fn hamming_distance_basics() {
        let words = vec![vec![0, 0, 0], vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(min_hamming_distance(&words).unwrap(), 2);
        assert!(min_hamming_distance(&[vec![1, 2]]).is_err());
        assert!(min_hamming_distance(&[vec![1], vec![1]]).is_err()); // dup only
        assert!(min_hamming_distance(&[vec![1], vec![1, 2]]).is_err()); // ragged
    }

    #[test]
    fn cyclic_detection_equals_distance_above_h() {
        // Exhaustive over small cyclic channels: a = q-1 and t = a*h make
        // the output region the full Hamming ball of radius h.
        for q in 2..=3u64 {
            for n in 2..=3usize {
                for h in 1..=2u64 {
                    let raw = RawParams {
                        q: Some(q),
                        n: n as u64,
                        a: None,
                        h: Some(h),
                        t: None,
                    };
                    let p = raw.normalize(Mode::Cyclic).unwrap();
                    let total = (q as usize).pow(n as u32);
                    // all 2-word codes, plus a few 3-word ones
                    for i in 0..total {
                        for k in i + 1..total {
                            let words = vec![
                                crate::word::word_from_rank(i, q, n),
                                crate::word::word_from_rank(k, q, n),
                            ];
                            let aed = is_aed(&words, &p).unwrap().holds;
                            let dist = min_hamming_distance(&words).unwrap();
                            assert_eq!(aed, dist > h, "q={q} n={n} h={h} {words:?}");
                        }
                    }
                }
            }
        }
    }
}
