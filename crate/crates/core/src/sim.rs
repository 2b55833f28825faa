//! Monte Carlo simulation of a code on a bounded channel: transmit uniform
//! codewords, hit them with in-model noise (or an out-of-model adversary),
//! and tally what the receiver would detect.
//!
//! Runs are deterministic for a given seed: trials are processed in fixed
//! chunks, each chunk on its own counter-mode RNG stream, so the tally does
//! not depend on thread scheduling.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::CongruenceCode;
use crate::error::{Error, Result};
use crate::noise::ErrorSampler;
use crate::params::{ChannelParams, Mode};
use crate::word::{Coord, ExplicitCode, Word};

const CHUNK: u64 = 4096;

/// Cap on adversarial composition lists per trial.
const COMPOSITION_CAP: usize = 100_000;

/// The code under simulation.
#[derive(Debug, Clone)]
pub enum SimCode {
    Congruence(CongruenceCode),
    Explicit(ExplicitCode),
}

/// Out-of-model noise injected instead of the channel's own: both ignore
/// the amplitude/weight budgets on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adversary {
    /// Add `weight` to one uniformly chosen coordinate with room for it.
    Concentrated { weight: u64 },
    /// A uniformly chosen nonnegative error vector of total weight exactly
    /// `weight` that keeps the output in the alphabet.
    UniformWeight { weight: u64 },
}

/// Tally of one simulation run. A trial is `detected` when the output is
/// not a codeword, a miss when it is a different codeword (split by noise
/// source), and `silent` when no effective error could be applied (the
/// output equals the input). The detection rate is `detected` over the
/// non-silent trials (exactly 1 when every trial was silent).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub detected: u64,
    pub silent: u64,
    pub in_model_misses: u64,
    pub out_of_model_misses: u64,
    #[serde(with = "crate::ser::ratio_str")]
    pub detection_rate: BigRational,
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    detected: u64,
    silent: u64,
    in_miss: u64,
    out_miss: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            detected: self.detected + other.detected,
            silent: self.silent + other.silent,
            in_miss: self.in_miss + other.in_miss,
            out_miss: self.out_miss + other.out_miss,
        }
    }
}

/// Uniform codeword sampling for a congruence class without materializing
/// it: residue-suffix counts guide a digit-by-digit draw.
struct ClassSampler {
    q: u64,
    m: u64,
    j: u64,
    /// `suffix[i][r]` = words over the last `n - i` coordinates with sum
    /// congruent to `r`.
    suffix: Vec<Vec<u128>>,
}

impl ClassSampler {
    fn new(code: &CongruenceCode) -> Result<Self> {
        let q = code.alphabet().q().expect("simulation codes are bounded");
        let n = code.n();
        let m = code.modulus();
        if m > 1_000_000 || q > 1_000_000 {
            return Err(Error::Capacity(
                "simulation supports moduli and alphabets up to 10^6".into(),
            ));
        }
        let hist: Vec<u128> =
            (0..m).map(|r| if r < q { (q - 1 - r) as u128 / m as u128 + 1 } else { 0 }).collect();
        let mut suffix = vec![vec![0u128; m as usize]; n + 1];
        suffix[n][0] = 1;
        for i in (0..n).rev() {
            for r in 0..m as usize {
                let mut acc: u128 = 0;
                for (shift, &count) in hist.iter().enumerate() {
                    if count == 0 {
                        continue;
                    }
                    let prev = suffix[i + 1][(r + m as usize - shift) % m as usize];
                    acc = count
                        .checked_mul(prev)
                        .and_then(|p| acc.checked_add(p))
                        .ok_or_else(|| {
                            Error::Capacity("code too large to sample (counts exceed 2^128)".into())
                        })?;
                }
                suffix[i][r] = acc;
            }
        }
        if suffix[0][code.class() as usize] == 0 {
            return Err(Error::EmptyCode);
        }
        Ok(ClassSampler { q, m, j: code.class(), suffix })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        let n = self.suffix.len() - 1;
        let mut rem = self.j as usize;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut z = rng.gen_range(0..self.suffix[i][rem]);
            let mut chosen = None;
            for v in 0..self.q {
                let idx = (rem + self.m as usize - (v % self.m) as usize) % self.m as usize;
                let ways = self.suffix[i + 1][idx];
                if z < ways {
                    chosen = Some((v, idx));
                    break;
                }
                z -= ways;
            }
            let (v, idx) = chosen.expect("suffix counts cover every draw");
            out.push(v as Coord);
            rem = idx;
        }
        out
    }
}

enum CodewordSource<'c> {
    Class(ClassSampler),
    List(&'c ExplicitCode),
}

impl CodewordSource<'_> {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        match self {
            CodewordSource::Class(s) => s.sample(rng),
            CodewordSource::List(code) => {
                code.words()[rng.gen_range(0..code.len())].clone()
            }
        }
    }
}

fn code_contains(code: &SimCode, y: &[Coord]) -> bool {
    match code {
        SimCode::Congruence(c) => c.contains(y).expect("outputs stay in the alphabet"),
        SimCode::Explicit(c) => c.contains(y),
    }
}

fn apply_noise(x: &[Coord], f: &[Coord], q: u64, mode: Mode) -> Word {
    match mode {
        Mode::Cyclic => x
            .iter()
            .zip(f)
            .map(|(&xv, &fv)| ((xv as i128 + fv as i128).rem_euclid(q as i128)) as Coord)
            .collect(),
        _ => x.iter().zip(f).map(|(&xv, &fv)| xv + fv).collect(),
    }
}

/// Room left above `x` per coordinate for adversarial noise.
fn rooms(x: &[Coord], q: u64, mode: Mode) -> Vec<Coord> {
    match mode {
        Mode::Cyclic => vec![(q - 1) as Coord; x.len()],
        _ => x.iter().map(|&v| (q - 1) as Coord - v).collect(),
    }
}

/// All nonnegative vectors with `f_i <= rooms[i]` and total exactly `w`.
fn compositions(rooms: &[Coord], w: u64) -> Result<Vec<Word>> {
    fn rec(rooms: &[Coord], idx: usize, left: u64, f: &mut Word, out: &mut Vec<Word>) -> Result<()> {
        if idx == rooms.len() {
            if left == 0 {
                if out.len() == COMPOSITION_CAP {
                    return Err(Error::Capacity(format!(
                        "adversarial weight admits more than {COMPOSITION_CAP} error vectors"
                    )));
                }
                out.push(f.clone());
            }
            return Ok(());
        }
        let top = (rooms[idx] as u64).min(left);
        for v in 0..=top {
            f[idx] = v as Coord;
            rec(rooms, idx + 1, left - v, f, out)?;
        }
        f[idx] = 0;
        Ok(())
    }
    let mut out = Vec::new();
    rec(rooms, 0, w, &mut vec![0; rooms.len()], &mut out)?;
    Ok(out)
}

struct TrialContext<'c> {
    code: &'c SimCode,
    source: CodewordSource<'c>,
    p: ChannelParams,
    q: u64,
    adversary: Option<Adversary>,
    /// Shared in-model sampler when the caps do not depend on `x`
    /// (cyclic mode); finite mode builds one per transmitted word.
    shared_noise: Option<ErrorSampler>,
}

impl TrialContext<'_> {
    fn run_one<R: Rng + ?Sized>(&self, rng: &mut R, tally: &mut Tally) -> Result<()> {
        let x = self.source.sample(rng);
        let (y, adversarial) = match self.adversary {
            None => {
                let f = match &self.shared_noise {
                    Some(sampler) => sampler.sample(rng)?,
                    None => ErrorSampler::for_input(&x, &self.p, true)?.sample(rng)?,
                };
                let Some(f) = f else {
                    tally.silent += 1;
                    return Ok(());
                };
                (apply_noise(&x, &f, self.q, self.p.mode()), false)
            }
            Some(Adversary::Concentrated { weight }) => {
                let rooms = rooms(&x, self.q, self.p.mode());
                let valid: Vec<usize> = (0..x.len())
                    .filter(|&i| weight as i128 <= rooms[i] as i128 || self.p.mode() == Mode::Cyclic)
                    .collect();
                if valid.is_empty() {
                    tally.silent += 1;
                    return Ok(());
                }
                let i = valid[rng.gen_range(0..valid.len())];
                let mut y = x.clone();
                match self.p.mode() {
                    Mode::Cyclic => {
                        y[i] = ((y[i] as i128 + weight as i128).rem_euclid(self.q as i128)) as Coord
                    }
                    _ => y[i] += weight as Coord,
                }
                (y, true)
            }
            Some(Adversary::UniformWeight { weight }) => {
                let rooms = rooms(&x, self.q, self.p.mode());
                let choices = compositions(&rooms, weight)?;
                if choices.is_empty() {
                    tally.silent += 1;
                    return Ok(());
                }
                let f = &choices[rng.gen_range(0..choices.len())];
                (apply_noise(&x, f, self.q, self.p.mode()), true)
            }
        };
        if y == x {
            tally.silent += 1;
        } else if code_contains(self.code, &y) {
            if adversarial {
                tally.out_miss += 1;
            } else {
                tally.in_miss += 1;
            }
        } else {
            tally.detected += 1;
        }
        Ok(())
    }
}

fn validate(code: &SimCode, p: &ChannelParams) -> Result<u64> {
    let q = p.q().ok_or(Error::InfiniteAlphabet("simulation"))?;
    let (code_q, code_n) = match code {
        SimCode::Congruence(c) => (
            c.alphabet().q().ok_or(Error::InfiniteAlphabet("simulating an integer-alphabet code"))?,
            c.n(),
        ),
        SimCode::Explicit(c) => (c.q(), c.n()),
    };
    if code_n != p.n() {
        return Err(Error::LengthMismatch { expected: p.n(), got: code_n });
    }
    if code_q != q {
        return Err(Error::InvalidParams(format!(
            "code alphabet size {code_q} does not match the channel's {q}"
        )));
    }
    if let SimCode::Congruence(c) = code {
        if c.count()?.is_zero() {
            return Err(Error::EmptyCode);
        }
    }
    Ok(q)
}

/// Simulate `trials` transmissions of uniform codewords over the channel
/// `p`, with in-model noise (uniform over the valid nonzero error vectors
/// for each transmitted word) or, when `adversary` is given, out-of-model
/// noise. Fully deterministic in `seed`.
pub fn simulate(
    code: &SimCode,
    p: &ChannelParams,
    trials: u64,
    seed: u64,
    adversary: Option<Adversary>,
) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trial count must be positive".into()));
    }
    if let Some(Adversary::Concentrated { weight } | Adversary::UniformWeight { weight }) =
        adversary
    {
        if weight == 0 {
            return Err(Error::InvalidParams("adversary weight must be positive".into()));
        }
    }
    let q = validate(code, p)?;

    let source = match code {
        SimCode::Congruence(c) => CodewordSource::Class(ClassSampler::new(c)?),
        SimCode::Explicit(c) => CodewordSource::List(c),
    };
    let shared_noise = match p.mode() {
        // Cyclic caps don't depend on the transmitted word.
        Mode::Cyclic => Some(ErrorSampler::new(p, true)?),
        _ => None,
    };
    let ctx = TrialContext { code, source, p: *p, q, adversary, shared_noise };

    let chunks = trials.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<Tally> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let mut tally = Tally::default();
            let in_chunk = CHUNK.min(trials - chunk * CHUNK);
            for _ in 0..in_chunk {
                ctx.run_one(&mut rng, &mut tally)?;
            }
            Ok(tally)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)));
    let tally = tally?;

    let effective = trials - tally.silent;
    let detection_rate = if effective == 0 {
        BigRational::one()
    } else {
        BigRational::new(BigUint::from(tally.detected).into(), BigUint::from(effective).into())
    };
    Ok(SimReport {
        trials,
        detected: tally.detected,
        silent: tally.silent,
        in_model_misses: tally.in_miss,
        out_of_model_misses: tally.out_miss,
        detection_rate,
    })
}
