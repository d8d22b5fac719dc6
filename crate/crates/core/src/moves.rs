//! Elementary Andrews-Curtis moves on tuples of free-group words.
//!
//! Conjugation moves carry a single letter. A conjugation by an arbitrary
//! word is the product of the conjugations by its letters, so nothing is lost
//! and the move alphabet for a fixed tuple size stays finite.

use std::fmt;

use thiserror::Error;

use crate::word::{Letter, Tuple, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move {mv} is invalid for tuples of size {k}")]
    IndexOutOfBounds { mv: String, k: usize },
    #[error("move {0} uses the same index twice")]
    SameIndex(String),
    #[error("conjugator {letter} exceeds rank {rank}")]
    ConjugatorBeyondRank { letter: Letter, rank: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One elementary transformation. Indices are 1-based tuple positions.
///
/// The derived order (R before L before I before C, then by fields) is the
/// order in which searches try moves, and so decides ties between paths of
/// equal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// `u_i ← u_i · u_j^±1`
    R { i: usize, j: usize, sign: Sign },
    /// `u_i ← u_j^±1 · u_i`
    L { i: usize, j: usize, sign: Sign },
    /// `u_i ← u_i⁻¹`
    I { i: usize },
    /// `u_i ← c⁻¹ · u_i · c`
    C { i: usize, by: Letter },
}

impl Move {
    pub fn validate(&self, k: usize) -> Result<(), MoveError> {
        let (i, j) = match *self {
            Move::R { i, j, .. } | Move::L { i, j, .. } => (i, Some(j)),
            Move::I { i } | Move::C { i, .. } => (i, None),
        };
        let in_range = |x: usize| (1..=k).contains(&x);
        if !in_range(i) || j.is_some_and(|j| !in_range(j)) {
            return Err(MoveError::IndexOutOfBounds {
                mv: self.to_string(),
                k,
            });
        }
        if j == Some(i) {
            return Err(MoveError::SameIndex(self.to_string()));
        }
        Ok(())
    }

    pub fn inverse(self) -> Move {
        match self {
            Move::R { i, j, sign } => Move::R {
                i,
                j,
                sign: sign.flip(),
            },
            Move::L { i, j, sign } => Move::L {
                i,
                j,
                sign: sign.flip(),
            },
            Move::I { i } => Move::I { i },
            Move::C { i, by } => Move::C { i, by: by.inverse() },
        }
    }

    /// Checks bounds against the tuple, then applies.
    pub fn apply(&self, t: &Tuple) -> Result<Tuple, MoveError> {
        self.validate(t.size())?;
        if let Move::C { by, .. } = self {
            if by.index() > t.rank() {
                return Err(MoveError::ConjugatorBeyondRank {
                    letter: *by,
                    rank: t.rank(),
                });
            }
        }
        Ok(self.apply_unchecked(t))
    }

    pub(crate) fn apply_unchecked(&self, t: &Tuple) -> Tuple {
        let e = |x: usize| t.entry(x);
        let signed = |x: usize, s: Sign| match s {
            Sign::Plus => e(x).clone(),
            Sign::Minus => e(x).invert(),
        };
        match *self {
            Move::R { i, j, sign } => t.with_entry(i, e(i).mul_same_rank(&signed(j, sign))),
            Move::L { i, j, sign } => t.with_entry(i, signed(j, sign).mul_same_rank(e(i))),
            Move::I { i } => t.with_entry(i, e(i).invert()),
            Move::C { i, by } => t.with_entry(i, e(i).conjugate_by_letter(by)),
        }
    }

    /// All generators for tuples of size `k` whose conjugators range over the
    /// letters of the given rank, in search order.
    pub fn alphabet(k: usize, rank: usize) -> Vec<Move> {
        let mut out = Vec::new();
        let pairs = || (1..=k).flat_map(|i| (1..=k).filter(move |&j| j != i).map(move |j| (i, j)));
        for sign in [Sign::Plus, Sign::Minus] {
            out.extend(pairs().map(|(i, j)| Move::R { i, j, sign }));
            out.extend(pairs().map(|(i, j)| Move::L { i, j, sign }));
        }
        out.extend((1..=k).map(|i| Move::I { i }));
        for i in 1..=k {
            for g in 1..=rank {
                out.push(Move::C {
                    i,
                    by: Letter::new(g, false),
                });
                out.push(Move::C {
                    i,
                    by: Letter::new(g, true),
                });
            }
        }
        out.sort();
        out
    }

    /// Parses one line such as `R 1 2 +` or `C 1 b`. A conjugator word with
    /// several letters expands to one move per letter.
    pub fn parse_line(line: &str) -> Result<Vec<Move>, String> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let idx = |s: &str| -> Result<usize, String> { s.parse::<usize>().map_err(|_| format!("bad index {s:?}")) };
        let sign = |s: &str| match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(format!("bad sign {s:?}")),
        };
        match toks.as_slice() {
            ["R", i, j, s] => Ok(vec![Move::R {
                i: idx(i)?,
                j: idx(j)?,
                sign: sign(s)?,
            }]),
            ["L", i, j, s] => Ok(vec![Move::L {
                i: idx(i)?,
                j: idx(j)?,
                sign: sign(s)?,
            }]),
            ["I", i] => Ok(vec![Move::I { i: idx(i)? }]),
            ["C", i, w] => {
                let i = idx(i)?;
                w.chars()
                    .map(|ch| {
                        Letter::from_char(ch)
                            .map(|by| Move::C { i, by })
                            .ok_or_else(|| format!("bad conjugator letter {ch:?}"))
                    })
                    .collect()
            }
            _ => Err(format!("unrecognized move {line:?}")),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R { i, j, sign } => write!(f, "R {i} {j} {}", sign.as_char()),
            Move::L { i, j, sign } => write!(f, "L {i} {j} {}", sign.as_char()),
            Move::I { i } => write!(f, "I {i}"),
            Move::C { i, by } => write!(f, "C {i} {by}"),
        }
    }
}

/// A word in the elementary moves, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveSequence {
    k: usize,
    moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(k: usize, moves: Vec<Move>) -> Result<MoveSequence, MoveError> {
        for m in &moves {
            m.validate(k)?;
        }
        Ok(MoveSequence { k, moves })
    }

    pub fn empty(k: usize) -> MoveSequence {
        MoveSequence { k, moves: Vec::new() }
    }

    pub(crate) fn from_parts(k: usize, moves: Vec<Move>) -> MoveSequence {
        debug_assert!(moves.iter().all(|m| m.validate(k).is_ok()));
        MoveSequence { k, moves }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Largest conjugator generator index used, 0 if none.
    pub fn max_conjugator_index(&self) -> usize {
        self.moves
            .iter()
            .filter_map(|m| match m {
                Move::C { by, .. } => Some(by.index()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> MoveSequence {
        MoveSequence {
            k: self.k,
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &MoveSequence) -> MoveSequence {
        assert_eq!(self.k, other.k, "sequences act on different tuple sizes");
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        MoveSequence { k: self.k, moves }
    }

    pub fn apply(&self, t: &Tuple) -> Result<Tuple, MoveError> {
        if t.size() != self.k {
            return Err(MoveError::IndexOutOfBounds {
                mv: format!("sequence for k={}", self.k),
                k: t.size(),
            });
        }
        let mut cur = t.clone();
        for m in &self.moves {
            cur = m.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Formal action on `(x_1, …, x_k)`: returns words `W_1, …, W_k` over the
    /// free group of rank `constants + k`, where generators `1..=constants`
    /// are the constants of the ambient free group and `constants + i` is the
    /// indeterminate `x_i`. Substituting `x_i ↦ u_i` into `W_i` gives the
    /// i-th entry of `self.apply(u)`.
    pub fn extract_words(&self, constants: usize) -> Result<Vec<Word>, MoveError> {
        let k = self.k;
        let rank = constants + k;
        let start: Vec<Word> = (1..=k)
            .map(|i| Word::from_reduced_unchecked(vec![Letter::gen(constants + i)], rank))
            .collect();
        let mut cur = if k >= 2 {
            Tuple::from_parts(rank, start)
        } else {
            return Err(MoveError::Word(WordError::TupleTooSmall(k)));
        };
        for m in &self.moves {
            if let Move::C { by, .. } = m {
                if by.index() > constants {
                    return Err(MoveError::ConjugatorBeyondRank {
                        letter: *by,
                        rank: constants,
                    });
                }
            }
            cur = m.apply_unchecked(&cur);
        }
        Ok(cur.into_entries())
    }

    /// Whether the sequence is the identity of the full AC-group over a
    /// nonabelian free group: every extracted word must be the bare
    /// indeterminate `x_i`.
    pub fn is_identity(&self) -> bool {
        let constants = self.max_conjugator_index().max(self.k);
        let words = self.extract_words(constants).expect("constants cover every conjugator");
        words
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::gen(constants + i + 1)])
    }

    /// One move per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, k: usize) -> Result<MoveSequence, MoveError> {
        let mut moves = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed = Move::parse_line(line).map_err(|msg| MoveError::Parse { line: n + 1, msg })?;
            moves.extend(parsed);
        }
        MoveSequence::new(k, moves)
    }

    /// Largest tuple index mentioned in a move file, for callers that do not
    /// know `k` up front.
    pub fn infer_k(text: &str) -> Result<usize, MoveError> {
        let mut k = 2;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed = Move::parse_line(line).map_err(|msg| MoveError::Parse { line: n + 1, msg })?;
            for m in parsed {
                let top = match m {
                    Move::R { i, j, .. } | Move::L { i, j, .. } => i.max(j),
                    Move::I { i } | Move::C { i, .. } => i,
                };
                k = k.max(top);
            }
        }
        Ok(k)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.moves {
            s.push_str(&m.to_string());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: &str, b: &str) -> Tuple {
        Tuple::parse(&[a, b], 2).unwrap()
    }

    const A: Letter = Letter::new(1, false);
    const B: Letter = Letter::new(2, false);

    #[test]
    fn apply_move_examples() {
        let r = Move::R {
            i: 1,
            j: 2,
            sign: Sign::Plus,
        };
        assert_eq!(r.apply(&t("a", "b")).unwrap(), t("ab", "b"));
        assert_eq!(Move::I { i: 1 }.apply(&t("ab", "b")).unwrap(), t("BA", "b"));
        assert_eq!(Move::C { i: 1, by: B }.apply(&t("a", "b")).unwrap(), t("Bab", "b"));
        let l = Move::L {
            i: 1,
            j: 2,
            sign: Sign::Minus,
        };
        assert_eq!(l.apply(&t("ba", "b")).unwrap(), t("a", "b"));
    }

    #[test]
    fn apply_move_errors() {
        let bad = Move::R {
            i: 1,
            j: 3,
            sign: Sign::Plus,
        };
        assert!(matches!(
            bad.apply(&t("a", "b")),
            Err(MoveError::IndexOutOfBounds { .. })
        ));
        let same = Move::L {
            i: 2,
            j: 2,
            sign: Sign::Plus,
        };
        assert!(matches!(same.apply(&t("a", "b")), Err(MoveError::SameIndex(_))));
        let far = Move::C {
            i: 1,
            by: Letter::gen(3),
        };
        assert!(matches!(
            far.apply(&t("a", "b")),
            Err(MoveError::ConjugatorBeyondRank { .. })
        ));
        assert!(Move::I { i: 0 }.validate(2).is_err());
    }

    #[test]
    fn invert_move_examples() {
        let r = Move::R {
            i: 1,
            j: 2,
            sign: Sign::Plus,
        };
        assert_eq!(
            r.inverse(),
            Move::R {
                i: 1,
                j: 2,
                sign: Sign::Minus
            }
        );
        assert_eq!(Move::I { i: 2 }.inverse(), Move::I { i: 2 });
        assert_eq!(Move::C { i: 1, by: B }.inverse(), Move::C { i: 1, by: B.inverse() });
    }

    #[test]
    fn sequence_examples() {
        let r = Move::R {
            i: 1,
            j: 2,
            sign: Sign::Plus,
        };
        let s = MoveSequence::new(2, vec![r, Move::I { i: 1 }, r]).unwrap();
        assert_eq!(s.apply(&t("a", "b")).unwrap(), t("BAb", "b"));
        assert_eq!(MoveSequence::empty(2).apply(&t("ab", "A")).unwrap(), t("ab", "A"));

        let s = MoveSequence::new(2, vec![r, Move::C { i: 1, by: B }]).unwrap();
        let inv = s.inverse();
        assert_eq!(
            inv.moves(),
            &[
                Move::C { i: 1, by: B.inverse() },
                Move::R {
                    i: 1,
                    j: 2,
                    sign: Sign::Minus
                }
            ]
        );
        assert_eq!(MoveSequence::empty(2).inverse(), MoveSequence::empty(2));
    }

    #[test]
    fn extract_words_examples() {
        // rank 4: a, b are constants, c = x_1, d = x_2
        let w = |s: &str| Word::parse(s, 4).unwrap();
        assert_eq!(MoveSequence::empty(2).extract_words(2).unwrap(), vec![w("c"), w("d")]);
        let r = Move::R {
            i: 1,
            j: 2,
            sign: Sign::Plus,
        };
        let s = MoveSequence::new(2, vec![r]).unwrap();
        assert_eq!(s.extract_words(2).unwrap(), vec![w("cd"), w("d")]);
        let s = MoveSequence::new(2, vec![Move::C { i: 1, by: B }]).unwrap();
        assert_eq!(s.extract_words(2).unwrap(), vec![w("Bcb"), w("d")]);
    }

    #[test]
    fn identity_check_examples() {
        assert!(MoveSequence::empty(2).is_identity());
        let ii = MoveSequence::new(2, vec![Move::I { i: 1 }, Move::I { i: 1 }]).unwrap();
        assert!(ii.is_identity());
        let r = MoveSequence::new(
            2,
            vec![Move::R {
                i: 1,
                j: 2,
                sign: Sign::Plus,
            }],
        )
        .unwrap();
        assert!(!r.is_identity());
        // conjugations by a then A cancel; conjugation by a alone does not
        let ca = MoveSequence::new(2, vec![Move::C { i: 2, by: A }]).unwrap();
        assert!(!ca.is_identity());
        assert!(ca.concat(&ca.inverse()).is_identity());
    }

    #[test]
    fn alphabet_size_and_order() {
        for k in 2..=4 {
            let alpha = Move::alphabet(k, k);
            assert_eq!(alpha.len(), 6 * k * k - 3 * k);
            assert!(alpha.windows(2).all(|p| p[0] < p[1]));
            for m in &alpha {
                assert!(alpha.contains(&m.inverse()));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let text = "# scramble\nR 1 2 +\nL 2 1 -\n\nI 2\nC 1 B\n";
        let s = MoveSequence::parse(text, 2).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(MoveSequence::parse(&s.to_text(), 2).unwrap(), s);
        let expanded = MoveSequence::parse("C 2 aB", 2).unwrap();
        assert_eq!(
            expanded.moves(),
            &[Move::C { i: 2, by: A }, Move::C { i: 2, by: B.inverse() }]
        );
        assert!(matches!(
            MoveSequence::parse("R 1 2 *", 2),
            Err(MoveError::Parse { line: 1, .. })
        ));
        assert!(MoveSequence::parse("I 3", 2).is_err());
        assert_eq!(MoveSequence::infer_k("R 1 3 +\nI 2").unwrap(), 3);
    }
}
