//! Words, explicit codes, and the plain-text codeword file format.

use crate::error::{Error, Result};
use crate::params::ChannelParams;

/// A single coordinate of a word or error vector.
pub type Coord = i64;

/// A channel word (or error vector): `n` coordinates.
pub type Word = Vec<Coord>;

/// Check that `x` has the right length and lies in the alphabet of `p`.
pub(crate) fn validate_word(x: &[Coord], p: &ChannelParams) -> Result<()> {
    if x.len() != p.n() {
        return Err(Error::LengthMismatch { expected: p.n(), got: x.len() });
    }
    if let Some(q) = p.q() {
        for (i, &v) in x.iter().enumerate() {
            if v < 0 || v as u128 >= q as u128 {
                return Err(Error::AlphabetViolation(format!(
                    "coordinate {i} of {x:?} is {v}, outside 0..{}",
                    q - 1
                )));
            }
        }
    }
    Ok(())
}

/// Rank of `x` in the lexicographic order of `{0,..,q-1}^n`
/// (big-endian base-`q` value). Caller guarantees `q^n` fits in `usize`.
pub(crate) fn word_rank(x: &[Coord], q: u64) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * q as usize + v as usize)
}

/// Inverse of [`word_rank`].
pub(crate) fn word_from_rank(mut rank: usize, q: u64, n: usize) -> Word {
    let mut w = vec![0; n];
    for slot in w.iter_mut().rev() {
        *slot = (rank % q as usize) as Coord;
        rank /= q as usize;
    }
    w
}

/// A finite code given by an explicit list of words over `{0,..,q-1}^n`,
/// kept sorted lexicographically with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitCode {
    words: Vec<Word>,
    q: u64,
    n: usize,
}

impl ExplicitCode {
    /// Build from a word list. Words are sorted; duplicates, ragged lengths,
    /// and coordinates outside `{0,..,q-1}` are rejected.
    pub fn new(mut words: Vec<Word>, q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("alphabet size must be at least 2, got q={q}")));
        }
        let n = words.first().ok_or(Error::EmptyCode)?.len();
        if n == 0 {
            return Err(Error::InvalidParams("words must have at least one coordinate".into()));
        }
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: w.len() });
            }
            for (i, &v) in w.iter().enumerate() {
                if v < 0 || v as u128 >= q as u128 {
                    return Err(Error::AlphabetViolation(format!(
                        "coordinate {i} of {w:?} is {v}, outside 0..{}",
                        q - 1
                    )));
                }
            }
        }
        words.sort_unstable();
        if words.windows(2).any(|pair| pair[0] == pair[1]) {
            return Err(Error::Parse("duplicate codeword".into()));
        }
        Ok(ExplicitCode { words, q, n })
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, x: &[Coord]) -> bool {
        self.words.binary_search_by(|w| w.as_slice().cmp(x)).is_ok()
    }

    /// Render as the text file format: one word per line, coordinates
    /// separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(&format_word(w));
            out.push('\n');
        }
        out
    }
}

/// Format one word for the text file format.
pub fn format_word(w: &[Coord]) -> String {
    w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parse the codeword file format: one word per line, whitespace-separated
/// decimal coordinates, `#` starts a comment, blank lines ignored. All words
/// must have the same length.
pub fn parse_words(text: &str) -> Result<Vec<Word>> {
    let mut words: Vec<Word> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut w = Vec::new();
        for tok in line.split_whitespace() {
            let v: Coord = tok.parse().map_err(|_| {
                Error::Parse(format!("line {}: {tok:?} is not an integer", lineno + 1))
            })?;
            w.push(v);
        }
        if let Some(first) = words.first() {
            if w.len() != first.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} coordinates, got {}",
                    lineno + 1,
                    first.len(),
                    w.len()
                )));
            }
        }
        words.push(w);
    }
    if words.is_empty() {
        return Err(Error::EmptyCode);
    }
    Ok(words)
}

/// Parse a codeword file into an [`ExplicitCode`] over `{0,..,q-1}`.
pub fn parse_code(text: &str, q: u64) -> Result<ExplicitCode> {
    ExplicitCode::new(parse_words(text)?, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trips() {
        for q in 2..=5u64 {
            for n in 1..=3usize {
                let total = (q as usize).pow(n as u32);
                let mut last: Option<Word> = None;
                for r in 0..total {
                    let w = word_from_rank(r, q, n);
                    assert_eq!(word_rank(&w, q), r);
                    if let Some(prev) = &last {
                        assert!(prev < &w, "rank order must be lex order");
                    }
                    last = Some(w);
                }
            }
        }
    }

    #[test]
    fn parse_handles_comments_and_blanks() {
        let text = "# header\n0 0\n\n1 2   # trailing\n  2 1\n";
        let words = parse_words(text).unwrap();
        assert_eq!(words, vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(parse_words(""), Err(Error::EmptyCode)));
        assert!(parse_words("0 0\n1").is_err()); // ragged
        assert!(parse_words("0 z").is_err()); // junk token
    }

    #[test]
    fn explicit_code_sorts_and_validates() {
        let code = ExplicitCode::new(vec![vec![2, 1], vec![0, 0], vec![1, 2]], 3).unwrap();
        assert_eq!(code.words(), &[vec![0, 0], vec![1, 2], vec![2, 1]]);
        assert!(code.contains(&[1, 2]));
        assert!(!code.contains(&[1, 1]));
        assert_eq!(code.to_text(), "0 0\n1 2\n2 1\n");

        assert!(ExplicitCode::new(vec![vec![0], vec![0]], 3).is_err()); // duplicate
        assert!(ExplicitCode::new(vec![vec![3]], 3).is_err()); // out of range
        assert!(ExplicitCode::new(vec![vec![-1]], 3).is_err()); // negative
        assert!(ExplicitCode::new(vec![], 3).is_err()); // empty
    }
}
