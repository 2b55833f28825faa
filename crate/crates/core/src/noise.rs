//! The asymmetric noise model: additive error vectors `f >= 0` limited in
//! per-coordinate amplitude (`a`), Hamming weight (`h`), and total weight
//! (`t`), plus the reachable output region of a transmitted word.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::params::{ChannelParams, Mode};
use crate::word::{validate_word, Coord, Word};

/// Default cap on enumerated output-region members.
pub const DEFAULT_REGION_CAP: usize = 10_000_000;

/// Exact enumeration is used below this admissible-set size; above it the
/// sampler falls back to rejection from the amplitude box.
pub const SAMPLE_ENUM_THRESHOLD: u64 = 100_000;

const REJECTION_ATTEMPTS: u64 = 10_000_000;

/// Work limit for the exact error-count dynamic program.
const COUNT_OPS_LIMIT: u128 = 50_000_000;

/// Does `f` satisfy the noise limits of `p`? Nonnegativity and the three
/// budgets are checked; `f` must have `n` coordinates.
pub fn is_admissible(f: &[Coord], p: &ChannelParams) -> Result<bool> {
    if f.len() != p.n() {
        return Err(Error::LengthMismatch { expected: p.n(), got: f.len() });
    }
    Ok(admissible(f, p.amplitude(), p.hamming_budget(), p.total_budget()))
}

fn admissible(f: &[Coord], a: u64, h: u64, t: u64) -> bool {
    let mut weight = 0u64;
    let mut total = 0u128;
    for &v in f {
        if v < 0 || v as u128 > a as u128 {
            return false;
        }
        if v > 0 {
            weight += 1;
            total += v as u128;
        }
    }
    weight <= h && total <= t as u128
}

/// Per-coordinate maximum addable value at input `x` under `p`.
fn coordinate_caps(x: &[Coord], p: &ChannelParams) -> Vec<Coord> {
    let a = p.amplitude() as Coord;
    match p.mode() {
        Mode::Integer | Mode::Cyclic => vec![a; x.len()],
        // Outputs never leave the alphabet, so a coordinate already at the
        // top of the range admits no increase.
        Mode::Finite => {
            let top = (p.q().unwrap() - 1) as Coord;
            x.iter().map(|&v| a.min(top - v)).collect()
        }
    }
}

/// Visit every error vector with `f_i <= caps[i]`, Hamming weight `<= h`,
/// and total weight `<= t`, in lexicographic order.
fn for_each_admissible<F>(caps: &[Coord], h: u64, t: u64, visit: &mut F) -> Result<()>
where
    F: FnMut(&[Coord]) -> Result<()>,
{
    fn rec<F>(
        caps: &[Coord],
        f: &mut Word,
        idx: usize,
        weight_left: u64,
        total_left: u64,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[Coord]) -> Result<()>,
    {
        if idx == caps.len() {
            return visit(f);
        }
        // v = 0 first keeps the visit order lexicographic.
        f[idx] = 0;
        rec(caps, f, idx + 1, weight_left, total_left, visit)?;
        if weight_left > 0 {
            let top = caps[idx].min(total_left.min(i64::MAX as u64) as Coord);
            for v in 1..=top {
                f[idx] = v;
                rec(caps, f, idx + 1, weight_left - 1, total_left - v as u64, visit)?;
            }
        }
        f[idx] = 0;
        Ok(())
    }
    let mut f = vec![0; caps.len()];
    rec(caps, &mut f, 0, h, t, visit)
}

/// Exact count of error vectors with `f_i <= caps[i]`, weight `<= h`, total
/// `<= t` (the zero vector included), by dynamic programming over
/// (weight used, total used).
fn count_with_caps(caps: &[Coord], h: u64, t: u64) -> Result<BigUint> {
    let n = caps.len() as u128;
    let h_dim = h.min(caps.len() as u64) as usize + 1;
    let t_dim = (t as u128).min(caps.iter().map(|&c| c as u128).sum())
        .to_usize()
        .ok_or_else(|| Error::Capacity("total-weight budget too large for exact counting".into()))?
        + 1;
    let amax = caps.iter().copied().max().unwrap_or(0) as u128;
    let ops = n * h_dim as u128 * t_dim as u128 * amax.min(t_dim as u128);
    if ops > COUNT_OPS_LIMIT {
        return Err(Error::Capacity(format!(
            "exact error counting needs ~{ops} operations (limit {COUNT_OPS_LIMIT})"
        )));
    }

    let mut dp = vec![vec![BigUint::zero(); t_dim]; h_dim];
    dp[0][0] = BigUint::one();
    for &cap in caps {
        let mut next = dp.clone(); // v = 0 keeps every state
        for w in 1..h_dim {
            for s in 1..t_dim {
                for v in 1..=(cap as usize).min(s) {
                    let add = dp[w - 1][s - v].clone();
                    next[w][s] += add;
                }
            }
        }
        dp = next;
    }
    Ok(dp.into_iter().flatten().sum())
}

/// Exact size of the admissible error set of `p` (zero vector included).
pub fn count_admissible_errors(p: &ChannelParams) -> Result<BigUint> {
    count_with_caps(&vec![p.amplitude() as Coord; p.n()], p.hamming_budget(), p.total_budget())
}

/// Upper bound on any output region size under `p` (coordinate caps only
/// shrink regions).
pub(crate) fn region_size_bound(p: &ChannelParams) -> Result<BigUint> {
    count_admissible_errors(p)
}

/// The set of channel outputs reachable from a transmitted word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutRegion {
    base: Word,
    params: ChannelParams,
    members: Vec<Word>,
}

impl OutRegion {
    pub fn base(&self) -> &Word {
        &self.base
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    /// Members in lexicographic order; always includes the base word.
    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, y: &[Coord]) -> bool {
        self.members.binary_search_by(|m| m.as_slice().cmp(y)).is_ok()
    }
}

/// Enumerate the output region of `x` under `p` with the default member cap.
pub fn enumerate_out(x: &[Coord], p: &ChannelParams) -> Result<OutRegion> {
    enumerate_out_capped(x, p, DEFAULT_REGION_CAP)
}

/// Enumerate the output region of `x`, failing once more than `cap` members
/// would be produced.
pub fn enumerate_out_capped(x: &[Coord], p: &ChannelParams, cap: usize) -> Result<OutRegion> {
    validate_word(x, p)?;
    let caps = coordinate_caps(x, p);
    let mut members: Vec<Word> = Vec::new();
    let q = p.q().map(|q| q as i128);
    for_each_admissible(&caps, p.hamming_budget(), p.total_budget(), &mut |f| {
        if members.len() == cap {
            return Err(Error::Capacity(format!("output region exceeds {cap} members")));
        }
        let y: Word = match p.mode() {
            Mode::Cyclic => {
                let q = q.unwrap();
                x.iter()
                    .zip(f)
                    .map(|(&xv, &fv)| ((xv as i128 + fv as i128).rem_euclid(q)) as Coord)
                    .collect()
            }
            _ => x.iter().zip(f).map(|(&xv, &fv)| xv + fv).collect(),
        };
        members.push(y);
        Ok(())
    })?;
    if p.mode() == Mode::Cyclic {
        // Wraparound scrambles the enumeration order.
        members.sort_unstable();
    }
    debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
    Ok(OutRegion { base: x.to_vec(), params: *p, members })
}

/// Uniform sampler over the admissible error set (optionally excluding the
/// zero vector), either by exact table lookup or bounded rejection from the
/// amplitude box.
#[derive(Debug, Clone)]
pub struct ErrorSampler {
    caps: Vec<Coord>,
    h: u64,
    t: u64,
    nonzero: bool,
    table: Option<Vec<Word>>,
}

impl ErrorSampler {
    /// Sampler for the admissible set of `p` itself (amplitude box `[0,a]^n`).
    pub fn new(p: &ChannelParams, nonzero_only: bool) -> Result<Self> {
        Self::build(
            vec![p.amplitude() as Coord; p.n()],
            p.hamming_budget(),
            p.total_budget(),
            nonzero_only,
            SAMPLE_ENUM_THRESHOLD,
        )
    }

    /// Sampler over errors applicable at input `x`: in finite mode the
    /// per-coordinate caps shrink so outputs stay inside the alphabet.
    pub fn for_input(x: &[Coord], p: &ChannelParams, nonzero_only: bool) -> Result<Self> {
        validate_word(x, p)?;
        Self::build(
            coordinate_caps(x, p),
            p.hamming_budget(),
            p.total_budget(),
            nonzero_only,
            4096,
        )
    }

    fn build(caps: Vec<Coord>, h: u64, t: u64, nonzero: bool, threshold: u64) -> Result<Self> {
        let table = match count_with_caps(&caps, h, t) {
            Ok(count) if count <= BigUint::from(threshold) => {
                let mut table = Vec::with_capacity(count.to_usize().unwrap_or(0));
                for_each_admissible(&caps, h, t, &mut |f| {
                    table.push(f.to_vec());
                    Ok(())
                })?;
                Some(table)
            }
            // Too many to tabulate (or even to count): rejection will do.
            _ => None,
        };
        Ok(ErrorSampler { caps, h, t, nonzero, table })
    }

    /// True when there is nothing to sample (nonzero-only with every
    /// coordinate capped at zero).
    pub fn is_exhausted(&self) -> bool {
        self.nonzero && (self.caps.iter().all(|&c| c == 0) || self.h == 0 || self.t == 0)
    }

    /// Draw one error vector uniformly. `Ok(None)` means the target set is
    /// empty; an error means rejection sampling hit its attempt cap.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<Word>> {
        if self.is_exhausted() {
            return Ok(None);
        }
        if let Some(table) = &self.table {
            let start = usize::from(self.nonzero); // index 0 is the zero vector
            if table.len() <= start {
                return Ok(None);
            }
            return Ok(Some(table[rng.gen_range(start..table.len())].clone()));
        }
        for _ in 0..REJECTION_ATTEMPTS {
            let f: Word = self.caps.iter().map(|&c| rng.gen_range(0..=c)).collect();
            if self.nonzero && f.iter().all(|&v| v == 0) {
                continue;
            }
            let a = self.caps.iter().copied().max().unwrap_or(0) as u64;
            if admissible(&f, a, self.h, self.t) {
                return Ok(Some(f));
            }
        }
        Err(Error::Capacity(
            "rejection sampling exhausted its attempt budget; admissible set is too sparse a \
             fraction of the amplitude box"
                .into(),
        ))
    }
}

/// Draw one admissible error vector for `p`, uniformly, from a fresh
/// deterministic generator seeded with `seed`.
pub fn sample_error(p: &ChannelParams, seed: u64, nonzero_only: bool) -> Result<Word> {
    let sampler = ErrorSampler::new(p, nonzero_only)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sampler.sample(&mut rng)?.ok_or_else(|| {
        Error::InvalidParams("no nonzero admissible error exists for these parameters".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{Mode, RawParams};

    fn params(mode: Mode, s: &str) -> ChannelParams {
        s.parse::<RawParams>().unwrap().normalize(mode).unwrap()
    }

    /// Oracle: brute-force region by scanning the full box `[0, a]^n`.
    fn brute_out(x: &[Coord], p: &ChannelParams) -> Vec<Word> {
        let n = p.n();
        let a = p.amplitude() as Coord;
        let mut out = Vec::new();
        let mut f = vec![0 as Coord; n];
        loop {
            if admissible(&f, p.amplitude(), p.hamming_budget(), p.total_budget()) {
                let ok = match p.mode() {
                    Mode::Finite => {
                        let top = (p.q().unwrap() - 1) as Coord;
                        x.iter().zip(&f).all(|(&xv, &fv)| xv + fv <= top)
                    }
                    _ => true,
                };
                if ok {
                    let y: Word = match p.mode() {
                        Mode::Cyclic => {
                            let q = p.q().unwrap() as i128;
                            x.iter()
                                .zip(&f)
                                .map(|(&xv, &fv)| ((xv as i128 + fv as i128).rem_euclid(q)) as Coord)
                                .collect()
                        }
                        _ => x.iter().zip(&f).map(|(&xv, &fv)| xv + fv).collect(),
                    };
                    out.push(y);
                }
            }
            // odometer over the box
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort_unstable();
                    out.dedup();
                    return out;
                }
                i -= 1;
                if f[i] < a {
                    f[i] += 1;
                    for slot in f.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn admissibility_checks_all_three_budgets() {
        let p = params(Mode::Integer, ".,3,2,2,3");
        assert!(is_admissible(&[0, 0, 0], &p).unwrap());
        assert!(is_admissible(&[2, 1, 0], &p).unwrap());
        assert!(!is_admissible(&[3, 0, 0], &p).unwrap()); // amplitude
        assert!(!is_admissible(&[1, 1, 1], &p).unwrap()); // Hamming weight
        assert!(!is_admissible(&[2, 2, 0], &p).unwrap()); // total weight
        assert!(!is_admissible(&[-1, 0, 0], &p).unwrap()); // negative
        assert!(is_admissible(&[0, 0], &p).is_err()); // wrong length
    }

    #[test]
    fn region_of_origin_matches_known_shapes() {
        // Amplitude 2 with single-coordinate noise: two axis segments.
        let p = params(Mode::Integer, ".,2,2,1,.");
        let region = enumerate_out(&[0, 0], &p).unwrap();
        assert_eq!(
            region.members(),
            &[vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]
        );

        // Unit amplitude, weight up to 2: the unit square.
        let p = params(Mode::Integer, ".,2,1,2,.");
        let region = enumerate_out(&[0, 0], &p).unwrap();
        assert_eq!(region.members(), &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);

        // Amplitude 2, weight 2, total 3: box minus the far corner.
        let p = params(Mode::Integer, ".,2,2,2,3");
        let region = enumerate_out(&[0, 0], &p).unwrap();
        assert_eq!(region.len(), 8);
        assert!(!region.contains(&[2, 2]));
    }

    #[test]
    fn finite_mode_clips_at_the_alphabet_top() {
        let p = params(Mode::Finite, "3,2,2,2,2");
        let region = enumerate_out(&[2, 2], &p).unwrap();
        assert_eq!(region.members(), &[vec![2, 2]]);
        let region = enumerate_out(&[1, 2], &p).unwrap();
        assert_eq!(region.members(), &[vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn cyclic_mode_wraps_and_sorts() {
        let p = params(Mode::Cyclic, "3,1,2,1,2");
        let region = enumerate_out(&[2], &p).unwrap();
        assert_eq!(region.members(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn regions_match_brute_force_on_a_grid() {
        for mode in [Mode::Integer, Mode::Finite, Mode::Cyclic] {
            for q in 2..=4u64 {
                if mode == Mode::Integer && q > 2 {
                    continue; // q is ignored; run once
                }
                for n in 1..=3u64 {
                    for a in 1..=3u64 {
                        for h in 1..=n {
                            for t in 1..=4u64 {
                                let raw = RawParams {
                                    q: (mode != Mode::Integer).then_some(q),
                                    n,
                                    a: Some(a),
                                    h: Some(h),
                                    t: Some(t),
                                };
                                let Ok(p) = raw.normalize(mode) else { continue };
                                let xs: Vec<Word> = match p.q() {
                                    Some(q) => (0..(q as usize).pow(n as u32))
                                        .map(|r| crate::word::word_from_rank(r, q, n as usize))
                                        .collect(),
                                    None => vec![vec![0; n as usize], vec![3; n as usize]],
                                };
                                for x in xs {
                                    let fast = enumerate_out(&x, &p).unwrap();
                                    assert_eq!(
                                        fast.members(),
                                        brute_out(&x, &p).as_slice(),
                                        "mismatch at {p} x={x:?}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counting_matches_enumeration() {
        for n in 1..=4u64 {
            for a in 1..=3u64 {
                for h in 1..=n {
                    for t in 1..=6u64 {
                        let raw = RawParams { q: None, n, a: Some(a), h: Some(h), t: Some(t) };
                        let Ok(p) = raw.normalize(Mode::Integer) else { continue };
                        let count = count_admissible_errors(&p).unwrap();
                        let region = enumerate_out(&vec![0; n as usize], &p).unwrap();
                        assert_eq!(count, BigUint::from(region.len()), "at {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn region_cap_is_enforced() {
        let p = params(Mode::Integer, ".,2,2,2,3");
        assert!(matches!(
            enumerate_out_capped(&[0, 0], &p, 7),
            Err(Error::Capacity(_))
        ));
        assert!(enumerate_out_capped(&[0, 0], &p, 8).is_ok());
    }

    #[test]
    fn sampling_is_uniform_and_deterministic() {
        let p = params(Mode::Integer, ".,2,2,2,3");
        assert_eq!(sample_error(&p, 7, true).unwrap(), sample_error(&p, 7, true).unwrap());

        // Every admissible vector shows up; zero only when allowed.
        let sampler = ErrorSampler::new(&p, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2000 {
            seen.insert(sampler.sample(&mut rng).unwrap().unwrap());
        }
        assert_eq!(seen.len(), 8);

        let sampler = ErrorSampler::new(&p, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            assert_ne!(sampler.sample(&mut rng).unwrap().unwrap(), vec![0, 0]);
        }
    }

    #[test]
    fn rejection_path_agrees_with_table_path() {
        // Force the rejection path by rebuilding with a zero threshold; it
        // must cover the same support as the table path.
        let caps = vec![2, 2];
        let table = ErrorSampler::build(caps.clone(), 2, 3, true, 4096).unwrap();
        let reject = ErrorSampler::build(caps, 2, 3, true, 0).unwrap();
        assert!(table.table.is_some());
        assert!(reject.table.is_none());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..3000 {
            seen.insert(reject.sample(&mut rng).unwrap().unwrap());
        }
        assert_eq!(seen.len(), 7); // 8 admissible minus the zero vector
    }

    #[test]
    fn exhausted_sampler_reports_none() {
        // Finite mode at the top word: no room to add anything.
        let p = params(Mode::Finite, "3,2,2,2,2");
        let sampler = ErrorSampler::for_input(&[2, 2], &p, true).unwrap();
        assert!(sampler.is_exhausted());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(sampler.sample(&mut rng).unwrap(), None);
    }
}
