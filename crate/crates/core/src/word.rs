//! Freely reduced words over a ranked alphabet and tuples of them.
//!
//! Generators are numbered from 1. In the text format the i-th lowercase
//! Latin letter is generator i and the matching uppercase letter its inverse,
//! so the text format covers ranks up to 26. The in-memory representation has
//! no such cap.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest rank expressible in the one-letter-per-generator text format.
pub const TEXT_ALPHABET: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid character {ch:?} at position {pos}")]
    InvalidChar { ch: char, pos: usize },
    #[error("letter {ch:?} at position {pos} exceeds rank {rank}")]
    LetterBeyondRank { ch: char, pos: usize, rank: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank {0} cannot be written in the text format (max 26)")]
    RankTooLarge(usize),
    #[error("a tuple needs at least 2 entries, got {0}")]
    TupleTooSmall(usize),
    #[error("malformed tuple: {0}")]
    MalformedTuple(String),
}

/// A generator or its inverse. Stored as a nonzero signed index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    /// Generator `index` (1-based), inverted if `inverse` is set.
    pub const fn new(index: usize, inverse: bool) -> Letter {
        assert!(index >= 1, "generator indices start at 1");
        let v = index as i32;
        Letter(if inverse { -v } else { v })
    }

    pub fn gen(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn from_char(ch: char) -> Option<Letter> {
        if ch.is_ascii_lowercase() {
            Some(Letter::new((ch as u8 - b'a') as usize + 1, false))
        } else if ch.is_ascii_uppercase() {
            Some(Letter::new((ch as u8 - b'A') as usize + 1, true))
        } else {
            None
        }
    }

    /// The text-format character, if the index fits the alphabet.
    pub fn to_char(self) -> Option<char> {
        let i = self.index();
        if i > TEXT_ALPHABET {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + (i - 1) as u8) as char)
    }
}

// Ordered by generator index, a generator before its inverse.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index(), self.is_inverse()).cmp(&(other.index(), other.is_inverse()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None if self.is_inverse() => write!(f, "g{}^-1", self.index()),
            None => write!(f, "g{}", self.index()),
        }
    }
}

/// An element of the free group of a given rank, always freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I>(letters: I, rank: usize) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index() > rank {
                return Err(WordError::IndexOutOfRange { index: l.index(), rank });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    /// Single generator (or inverse) as a word.
    pub fn letter(l: Letter, rank: usize) -> Result<Word, WordError> {
        Word::reduce([l], rank)
    }

    /// Builds a word from letters already known to be reduced and in range.
    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>, rank: usize) -> Word {
        debug_assert!(is_reduced(&letters));
        debug_assert!(letters.iter().all(|l| l.index() <= rank));
        Word { rank, letters }
    }

    /// Parses the text format and reduces. `"1"` is not accepted here; see
    /// [`Word::parse_file_entry`].
    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for (pos, ch) in text.chars().enumerate() {
            let l = Letter::from_char(ch).ok_or(WordError::InvalidChar { ch, pos })?;
            if l.index() > rank {
                return Err(WordError::LetterBeyondRank { ch, pos, rank });
            }
            letters.push(l);
        }
        Word::reduce(letters, rank)
    }

    /// Like [`Word::parse`] but accepts `"1"` for the identity, as files do.
    pub fn parse_file_entry(text: &str, rank: usize) -> Result<Word, WordError> {
        let t = text.trim();
        if t == "1" {
            Ok(Word::identity(rank))
        } else {
            Word::parse(t, rank)
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(self.mul_same_rank(other))
    }

    pub(crate) fn mul_same_rank(&self, other: &Word) -> Word {
        debug_assert_eq!(self.rank, other.rank);
        // Cancel the overlap first, then copy the survivors once.
        let mut cut = 0;
        let (a, b) = (&self.letters, &other.letters);
        while cut < a.len() && cut < b.len() && a[a.len() - 1 - cut] == b[cut].inverse() {
            cut += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * cut);
        letters.extend_from_slice(&a[..a.len() - cut]);
        letters.extend_from_slice(&b[cut..]);
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `w⁻¹ · self · w`.
    pub fn conjugate(&self, w: &Word) -> Result<Word, WordError> {
        if self.rank != w.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: w.rank,
            });
        }
        Ok(w.invert().mul_same_rank(self).mul_same_rank(w))
    }

    /// Conjugation by a single letter `c`, i.e. `c⁻¹ · self · c`.
    pub(crate) fn conjugate_by_letter(&self, c: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        push_reduced(&mut letters, c.inverse());
        for &l in &self.letters {
            push_reduced(&mut letters, l);
        }
        push_reduced(&mut letters, c);
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.invert() } else { self.clone() };
        let mut acc = Word::identity(self.rank);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul_same_rank(&base);
        }
        acc
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits the word as `conjugator⁻¹ · core · conjugator` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut t = 0;
        while 2 * t + 1 < n && self.letters[t] == self.letters[n - 1 - t].inverse() {
            t += 1;
        }
        let core = Word {
            rank: self.rank,
            letters: self.letters[t..n - t].to_vec(),
        };
        let conjugator = Word {
            rank: self.rank,
            letters: self.letters[n - t..].to_vec(),
        };
        (core, conjugator)
    }

    /// Exponent sum of each generator; the image in the abelianization.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank];
        for l in &self.letters {
            sums[l.index() - 1] += l.sign() as i64;
        }
        sums
    }

    /// Maps every generator through `image` (indexed by generator - 1) and
    /// reduces in the target rank.
    pub fn substitute(&self, image: &[Word], target_rank: usize) -> Word {
        debug_assert_eq!(image.len(), self.rank);
        let mut inverses: Vec<Option<Word>> = vec![None; image.len()];
        let mut out: Vec<Letter> = Vec::new();
        for l in &self.letters {
            let i = l.index() - 1;
            let piece: &Word = if l.is_inverse() {
                inverses[i].get_or_insert_with(|| image[i].invert())
            } else {
                &image[i]
            };
            for &p in &piece.letters {
                push_reduced(&mut out, p);
            }
        }
        Word {
            rank: target_rank,
            letters: out,
        }
    }

    /// Same letters viewed in a larger (or equal) rank.
    pub fn widen(&self, rank: usize) -> Word {
        assert!(rank >= self.rank);
        Word {
            rank,
            letters: self.letters.clone(),
        }
    }

    /// Text form; fails when a letter has no character.
    pub fn to_text(&self) -> Result<String, WordError> {
        self.letters
            .iter()
            .map(|l| l.to_char().ok_or(WordError::RankTooLarge(self.rank)))
            .collect()
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

// Shortlex.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An ordered k-tuple of words of a common rank, k ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    rank: usize,
    entries: Vec<Word>,
}

impl Tuple {
    pub fn new(entries: Vec<Word>) -> Result<Tuple, WordError> {
        if entries.len() < 2 {
            return Err(WordError::TupleTooSmall(entries.len()));
        }
        let rank = entries[0].rank;
        if let Some(w) = entries.iter().find(|w| w.rank != rank) {
            return Err(WordError::RankMismatch {
                left: rank,
                right: w.rank,
            });
        }
        Ok(Tuple { rank, entries })
    }

    pub(crate) fn from_parts(rank: usize, entries: Vec<Word>) -> Tuple {
        debug_assert!(entries.len() >= 2 && entries.iter().all(|w| w.rank == rank));
        Tuple { rank, entries }
    }

    /// Parses one word per entry with the text format.
    pub fn parse(words: &[&str], rank: usize) -> Result<Tuple, WordError> {
        let entries = words
            .iter()
            .map(|w| Word::parse_file_entry(w, rank))
            .collect::<Result<Vec<_>, _>>()?;
        Tuple::new(entries)
    }

    /// The generator tuple `(x_1, …, x_k)` of rank k.
    pub fn generators(k: usize) -> Tuple {
        let entries = (1..=k)
            .map(|i| Word::from_reduced_unchecked(vec![Letter::gen(i)], k))
            .collect();
        Tuple { rank: k, entries }
    }

    /// `(1, …, 1)`.
    pub fn trivial(rank: usize, k: usize) -> Tuple {
        Tuple {
            rank,
            entries: vec![Word::identity(rank); k],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Word] {
        &self.entries
    }

    /// 1-based access.
    pub fn entry(&self, i: usize) -> &Word {
        &self.entries[i - 1]
    }

    pub fn total_length(&self) -> usize {
        self.entries.iter().map(Word::len).sum()
    }

    pub(crate) fn with_entry(&self, i: usize, w: Word) -> Tuple {
        let mut entries = self.entries.clone();
        entries[i - 1] = w;
        Tuple {
            rank: self.rank,
            entries,
        }
    }

    pub fn into_entries(self) -> Vec<Word> {
        self.entries
    }

    /// Single-line form `(u, v, …)`; empty entries print as nothing.
    pub fn to_inline(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|w| w.to_string()).collect();
        format!("({})", parts.join(", "))
    }

    /// Inverse of [`Tuple::to_inline`].
    pub fn parse_inline(text: &str, rank: usize) -> Result<Tuple, WordError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| WordError::MalformedTuple(t.to_string()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        Tuple::parse(&parts, rank)
    }

    /// File format: a `rank k` header, then k lines with one word each.
    /// Lines starting with `#` are comments; `1` is accepted for the identity.
    pub fn parse_file(text: &str) -> Result<Tuple, WordError> {
        let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
        let header = lines
            .by_ref()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| WordError::MalformedTuple("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| WordError::MalformedTuple(format!("bad header {header:?}")))?;
        let [rank, k] = nums[..] else {
            return Err(WordError::MalformedTuple(format!("bad header {header:?}")));
        };
        let mut entries = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| WordError::MalformedTuple(format!("expected {k} entries")))?;
            entries.push(Word::parse_file_entry(line, rank)?);
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(WordError::MalformedTuple(format!("trailing line {extra:?}")));
        }
        let t = Tuple::new(entries)?;
        if t.rank != rank {
            return Err(WordError::RankMismatch {
                left: rank,
                right: t.rank,
            });
        }
        Ok(t)
    }

    pub fn to_file(&self) -> String {
        let mut s = format!("{} {}\n", self.rank, self.size());
        for w in &self.entries {
            s.push_str(&w.to_string());
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_inline())
    }
}
