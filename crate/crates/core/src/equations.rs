//! Equations over a free group `G` of rank `r`, as elements of `G * X` with
//! `X` free on the variables `x_1, …, x_m`.
//!
//! An equation body is a word of rank `r + m`: generators `1..=r` are the
//! constants, `r + i` is the variable `x_i`.

use std::fmt;

use thiserror::Error;

use crate::moves::{MoveError, MoveSequence};
use crate::word::{Letter, Tuple, Word, WordError};

/// Exponents are escalated by doubling up to this value.
pub const EXPONENT_CEILING: i64 = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("equation has no variables and a nontrivial constant body; it has no solutions")]
    ConstantFalse,
    #[error("equation has no variables")]
    NoVariables,
    #[error("constant product of the equation is nontrivial; conjugate-power form needs it to be 1")]
    ConstantProductNontrivial,
    #[error("the constant group must be free of rank at least 2, got rank {0}")]
    RankTooSmall(usize),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("tuple entry {0} is the identity")]
    IdentityEntry(usize),
    #[error("exponent ceiling {EXPONENT_CEILING} reached without a witness for {0}")]
    EscalationCeiling(String),
    #[error("witness failed re-verification")]
    Unverified,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    constants: usize,
    variables: usize,
    body: Word,
    normalized: bool,
}

/// `x_var^exp` followed by the constant word `after`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub var: usize,
    pub exp: i64,
    pub after: Word,
}

/// `prefix · x_var^exp · prefix⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatePower {
    pub prefix: Word,
    pub var: usize,
    pub exp: i64,
}

/// An equation rewritten as a product of conjugates of variable powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugatePowerForm {
    pub constants: usize,
    pub variables: usize,
    pub terms: Vec<ConjugatePower>,
}

impl ConjugatePowerForm {
    /// Multiplies the terms back together in `G * X`.
    pub fn reassemble(&self) -> Word {
        let rank = self.constants + self.variables;
        let mut acc = Word::identity(rank);
        for t in &self.terms {
            let p = t.prefix.widen(rank);
            let x = Word::from_reduced_unchecked(vec![Letter::gen(self.constants + t.var)], rank).pow(t.exp);
            acc = acc.mul_same_rank(&p).mul_same_rank(&x).mul_same_rank(&p.invert());
        }
        acc
    }
}

impl Equation {
    pub fn new(constants: usize, variables: usize, body: Word) -> Result<Equation, EquationError> {
        if body.rank() != constants + variables {
            return Err(WordError::RankMismatch {
                left: constants + variables,
                right: body.rank(),
            }
            .into());
        }
        Ok(Equation {
            constants,
            variables,
            body,
            normalized: false,
        })
    }

    pub fn constants(&self) -> usize {
        self.constants
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn body(&self) -> &Word {
        &self.body
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn is_variable(&self, l: Letter) -> bool {
        l.index() > self.constants
    }

    /// True when the body is the identity of `G * X`, i.e. every tuple is a
    /// solution.
    pub fn is_trivial(&self) -> bool {
        self.body.is_empty()
    }

    /// Conjugates the body so that it starts with a variable. Adjacent powers
    /// of one variable are already merged by free reduction.
    pub fn normalize(&self) -> Result<Equation, EquationError> {
        let letters = self.body.letters();
        let Some(first_var) = letters.iter().position(|&l| self.is_variable(l)) else {
            if self.body.is_empty() {
                return Ok(Equation {
                    normalized: true,
                    ..self.clone()
                });
            }
            return Err(EquationError::ConstantFalse);
        };
        let rank = self.body.rank();
        let lead = Word::from_reduced_unchecked(letters[..first_var].to_vec(), rank);
        let body = lead.invert().mul_same_rank(&self.body).mul_same_rank(&lead);
        Ok(Equation {
            constants: self.constants,
            variables: self.variables,
            body,
            normalized: true,
        })
    }

    /// Syllables of a normalized body, `x^d₁ a₁ x^d₂ a₂ ⋯`.
    pub fn syllables(&self) -> Vec<Syllable> {
        assert!(self.normalized, "syllables need a normalized equation");
        let letters = self.body.letters();
        let mut out: Vec<Syllable> = Vec::new();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            debug_assert!(self.is_variable(l));
            let mut exp = 0i64;
            while i < letters.len() && letters[i] == l {
                exp += l.sign() as i64;
                i += 1;
            }
            let start = i;
            while i < letters.len() && !self.is_variable(letters[i]) {
                i += 1;
            }
            let after = Word::from_reduced_unchecked(letters[start..i].to_vec(), self.constants);
            out.push(Syllable {
                var: l.index() - self.constants,
                exp,
                after,
            });
        }
        out
    }

    /// Substitutes `x_i ↦ values[i-1]` and reduces in `G`.
    pub fn evaluate(&self, values: &[Word]) -> Result<Word, EquationError> {
        if values.len() != self.variables {
            return Err(EquationError::Arity {
                expected: self.variables,
                got: values.len(),
            });
        }
        let mut image: Vec<Word> = (1..=self.constants)
            .map(|g| Word::from_reduced_unchecked(vec![Letter::gen(g)], self.constants))
            .collect();
        for v in values {
            if v.rank() != self.constants {
                return Err(WordError::RankMismatch {
                    left: self.constants,
                    right: v.rank(),
                }
                .into());
            }
            image.push(v.clone());
        }
        Ok(self.body.substitute(&image, self.constants))
    }

    pub fn is_solution(&self, values: &[Word]) -> Result<bool, EquationError> {
        Ok(self.evaluate(values)?.is_empty())
    }

    /// Product of conjugates of powers, with prefixes the partial products
    /// of the constants. Requires the constants to multiply to 1.
    pub fn conjugate_power_form(&self) -> Result<ConjugatePowerForm, EquationError> {
        let norm = if self.normalized {
            self.clone()
        } else {
            self.normalize()?
        };
        let ones = vec![Word::identity(self.constants); self.variables];
        if !norm.evaluate(&ones)?.is_empty() {
            return Err(EquationError::ConstantProductNontrivial);
        }
        let mut prefix = Word::identity(self.constants);
        let mut terms = Vec::new();
        for s in norm.syllables() {
            terms.push(ConjugatePower {
                prefix: prefix.clone(),
                var: s.var,
                exp: s.exp,
            });
            prefix = prefix.mul_same_rank(&s.after);
        }
        Ok(ConjugatePowerForm {
            constants: self.constants,
            variables: self.variables,
            terms,
        })
    }

    /// An assignment that is not a solution, or `None` when the equation is
    /// trivial (and so every assignment solves it).
    ///
    /// Bases are chosen so that consecutive conjugated powers do not commute
    /// where possible, then raised to exponents `exponent_start`,
    /// `2·exponent_start`, … up to [`EXPONENT_CEILING`]. Any returned
    /// assignment has been re-evaluated.
    pub fn find_nonsolution(&self, exponent_start: i64) -> Result<Option<Vec<Word>>, EquationError> {
        if self.constants < 2 {
            return Err(EquationError::RankTooSmall(self.constants));
        }
        if self.variables == 0 {
            return Err(EquationError::NoVariables);
        }
        let norm = match self.normalize() {
            Ok(n) => n,
            Err(EquationError::ConstantFalse) => return Ok(Some(vec![Word::identity(self.constants); self.variables])),
            Err(e) => return Err(e),
        };
        if norm.is_trivial() {
            return Ok(None);
        }
        let check = |values: Vec<Word>| -> Result<Option<Vec<Word>>, EquationError> {
            Ok((!self.evaluate(&values)?.is_empty()).then_some(values))
        };
        // Constant product ≠ 1: the identity assignment already fails.
        if let Some(v) = check(vec![Word::identity(self.constants); self.variables])? {
            return Ok(Some(v));
        }

        let syllables = norm.syllables();
        let mut bases: Vec<Word> = Vec::new();
        for len in 1..=2 {
            bases.extend(
                crate::search::words_up_to(self.constants, len)
                    .into_iter()
                    .filter(|w| w.len() == len),
            );
        }
        let assignments = cartesian(bases.len(), self.variables);
        let generic = |choice: &[usize]| {
            syllables.windows(2).all(|pair| {
                let g = &bases[choice[pair[0].var - 1]];
                let h = &bases[choice[pair[1].var - 1]];
                let a = &pair[0].after;
                !commute(g, &a.mul_same_rank(h).mul_same_rank(&a.invert()))
            })
        };
        let (good, rest): (Vec<_>, Vec<_>) = assignments.into_iter().partition(|c| generic(c));
        let start = exponent_start.max(1);
        for choice in good.iter().chain(rest.iter()) {
            let mut e = start;
            while e <= EXPONENT_CEILING {
                let values: Vec<Word> = choice.iter().map(|&b| bases[b].pow(e)).collect();
                if let Some(v) = check(values)? {
                    return Ok(Some(v));
                }
                e *= 2;
            }
        }
        Err(EquationError::EscalationCeiling(self.to_string()))
    }

    /// Parses e.g. `x1 a x1' A`: letters are constants, `x<i>` is a
    /// variable and a trailing `'` inverts it. Whitespace is ignored.
    pub fn parse(text: &str, constants: usize, variables: usize) -> Result<Equation, EquationError> {
        let chars: Vec<char> = text.chars().collect();
        let rank = constants + variables;
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == 'x' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let start = i;
                i += 1;
                let mut n = 0usize;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n * 10 + chars[i].to_digit(10).unwrap() as usize;
                    i += 1;
                }
                if n == 0 || n > variables {
                    return Err(EquationError::Parse {
                        pos: start,
                        msg: format!("no variable x{n}"),
                    });
                }
                let inverse = chars.get(i) == Some(&'\'');
                if inverse {
                    i += 1;
                }
                letters.push(Letter::new(constants + n, inverse));
                continue;
            }
            let l = Letter::from_char(c).ok_or(EquationError::Parse {
                pos: i,
                msg: format!("unexpected {c:?}"),
            })?;
            if l.index() > constants {
                return Err(EquationError::Parse {
                    pos: i,
                    msg: format!("constant {c:?} exceeds rank {constants}"),
                });
            }
            letters.push(l);
            i += 1;
        }
        Equation::new(constants, variables, Word::reduce(letters, rank)?)
    }

    /// Number of variables mentioned in the text, as the largest index.
    pub fn count_variables(text: &str) -> usize {
        let chars: Vec<char> = text.chars().collect();
        let mut best = 0;
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == 'x' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                let mut n = 0usize;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n * 10 + chars[i].to_digit(10).unwrap() as usize;
                    i += 1;
                }
                best = best.max(n);
            } else {
                i += 1;
            }
        }
        best
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .body
            .letters()
            .iter()
            .map(|&l| {
                if self.is_variable(l) {
                    let n = l.index() - self.constants;
                    if l.is_inverse() {
                        format!("x{n}'")
                    } else {
                        format!("x{n}")
                    }
                } else {
                    l.to_string()
                }
            })
            .collect();
        f.write_str(&toks.join(" "))
    }
}

/// All length-`m` index vectors over `0..n`, lexicographic.
fn cartesian(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// The primitive root `p` with `w = p^n`, `n ≥ 1`. Identity maps to itself.
pub fn root(w: &Word) -> Word {
    if w.is_empty() {
        return w.clone();
    }
    let (core, conj) = w.cyclic_reduce();
    let ls = core.letters();
    let n = ls.len();
    let period = (1..=n)
        .find(|&p| n % p == 0 && (p..n).all(|i| ls[i] == ls[i - p]))
        .unwrap();
    let base = Word::from_reduced_unchecked(ls[..period].to_vec(), w.rank());
    conj.invert().mul_same_rank(&base).mul_same_rank(&conj)
}

/// In a free group two elements commute iff one is trivial or they are
/// powers of a common root.
pub fn commute(u: &Word, v: &Word) -> bool {
    if u.is_empty() || v.is_empty() {
        return true;
    }
    let (ru, rv) = (root(u), root(v));
    ru == rv || ru == rv.invert()
}

/// Conjugators `h_1, …, h_k` such that the sequence moves the tuple
/// `(u_1^{h_1}, …, u_k^{h_k})`, or `None` when the sequence is the identity.
///
/// For each i the equation `W_i(u_1^{x_1}, …, u_k^{x_k}) · (u_i^{x_i})⁻¹`
/// over `G * X` is formed from the words extracted from the sequence; the
/// first nontrivial one yields the witness through [`Equation::find_nonsolution`].
pub fn faithfulness_witness(seq: &MoveSequence, u: &Tuple) -> Result<Option<Vec<Word>>, EquationError> {
    let k = seq.k();
    if u.size() != k {
        return Err(EquationError::Arity {
            expected: k,
            got: u.size(),
        });
    }
    if let Some(i) = u.entries().iter().position(Word::is_empty) {
        return Err(EquationError::IdentityEntry(i + 1));
    }
    let r = u.rank();
    if r < 2 {
        return Err(EquationError::RankTooSmall(r));
    }
    let words = seq.extract_words(r)?;
    let rank = r + k;
    let mut image: Vec<Word> = (1..=r)
        .map(|g| Word::from_reduced_unchecked(vec![Letter::gen(g)], rank))
        .collect();
    for (j, uj) in u.entries().iter().enumerate() {
        let x = Word::from_reduced_unchecked(vec![Letter::gen(r + j + 1)], rank);
        image.push(x.invert().mul_same_rank(&uj.widen(rank)).mul_same_rank(&x));
    }
    for (i, w) in words.iter().enumerate() {
        let lhs = w.substitute(&image, rank);
        let body = lhs.mul_same_rank(&image[r + i].invert());
        let eq = Equation::new(r, k, body)?;
        if eq.is_trivial() {
            continue;
        }
        let h = eq.find_nonsolution(2)?.ok_or(EquationError::Unverified)?;
        let conj: Vec<Word> = u
            .entries()
            .iter()
            .zip(&h)
            .map(|(uj, hj)| uj.conjugate(hj))
            .collect::<Result<_, _>>()?;
        let point = Tuple::new(conj)?;
        if seq.apply(&point)? == point {
            return Err(EquationError::Unverified);
        }
        return Ok(Some(h));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{Move, Sign};

    fn eq(s: &str, m: usize) -> Equation {
        Equation::parse(s, 2, m).unwrap()
    }

    fn g(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let e = eq("x1 a x1", 1).normalize().unwrap();
        assert_eq!(e.to_string(), "x1 a x1");
        let e = eq("a x1 A", 1).normalize().unwrap();
        assert_eq!(e.to_string(), "x1");
        let e = eq("x1 x1", 1).normalize().unwrap();
        assert_eq!(
            e.syllables(),
            vec![Syllable {
                var: 1,
                exp: 2,
                after: g("")
            }]
        );
        let e = eq("b a x1 b x2'", 2).normalize().unwrap();
        assert_eq!(e.to_string(), "x1 b x2' b a");
        assert_eq!(eq("a b", 1).normalize(), Err(EquationError::ConstantFalse));
        assert!(eq("", 1).normalize().unwrap().is_trivial());
    }

    #[test]
    fn evaluate_examples() {
        let e = eq("x1 a x1' A", 1);
        assert!(e.evaluate(&[g("a")]).unwrap().is_empty());
        assert_eq!(e.evaluate(&[g("b")]).unwrap(), g("baBA"));
        assert!(eq("", 1).evaluate(&[g("ab")]).unwrap().is_empty());
        assert!(matches!(e.evaluate(&[]), Err(EquationError::Arity { .. })));
    }

    #[test]
    fn is_trivial_examples() {
        assert!(eq("x1 x1'", 1).is_trivial());
        assert!(!eq("x1 a x1' A", 1).is_trivial());
        assert!(eq("a A", 1).is_trivial());
    }

    #[test]
    fn conjugate_power_form_examples() {
        let f = eq("x1 a x2 A", 2).conjugate_power_form().unwrap();
        assert_eq!(
            f.terms,
            vec![
                ConjugatePower {
                    prefix: g(""),
                    var: 1,
                    exp: 1
                },
                ConjugatePower {
                    prefix: g("a"),
                    var: 2,
                    exp: 1
                },
            ]
        );
        assert_eq!(f.reassemble(), eq("x1 a x2 A", 2).body().clone());
        let f = eq("x1 x1", 1).conjugate_power_form().unwrap();
        assert_eq!(
            f.terms,
            vec![ConjugatePower {
                prefix: g(""),
                var: 1,
                exp: 2
            }]
        );
        assert_eq!(
            eq("x1 a", 1).conjugate_power_form(),
            Err(EquationError::ConstantProductNontrivial)
        );
    }

    #[test]
    fn find_nonsolution_examples() {
        let e = eq("x1 a x1' A", 1);
        let w = e.find_nonsolution(2).unwrap().unwrap();
        assert!(!e.evaluate(&w).unwrap().is_empty());

        assert_eq!(eq("x1 x1'", 1).find_nonsolution(2).unwrap(), None);

        let e = eq("x1 x1 a x2 x2 x2 A", 2);
        let w = e.find_nonsolution(2).unwrap().unwrap();
        assert!(!e.evaluate(&w).unwrap().is_empty());

        // a nontrivial constant product is caught by the identity assignment
        let e = eq("x1 a", 1);
        assert_eq!(e.find_nonsolution(2).unwrap().unwrap(), vec![g("")]);

        assert_eq!(eq("ab", 0).find_nonsolution(2), Err(EquationError::NoVariables));
        let r1 = Equation::parse("x1 a x1' A", 1, 1).unwrap();
        assert_eq!(r1.find_nonsolution(2), Err(EquationError::RankTooSmall(1)));
    }

    #[test]
    fn roots_and_commutation() {
        assert_eq!(root(&g("abab")), g("ab"));
        assert_eq!(root(&g("Bababb")), g("Babb"));
        assert_eq!(root(&g("Babab")), g("Babab"));
        assert_eq!(root(&g("aab")), g("aab"));
        assert!(commute(&g("abab"), &g("BA")));
        assert!(commute(&g("Baab"), &g("Bab")));
        assert!(!commute(&g("a"), &g("b")));
        assert!(commute(&g(""), &g("b")));
    }

    #[test]
    fn faithfulness_witness_examples() {
        let u = Tuple::parse(&["a", "b"], 2).unwrap();
        let r = MoveSequence::new(
            2,
            vec![Move::R {
                i: 1,
                j: 2,
                sign: Sign::Plus,
            }],
        )
        .unwrap();
        assert_eq!(faithfulness_witness(&r, &u).unwrap(), Some(vec![g(""), g("")]));

        assert_eq!(faithfulness_witness(&MoveSequence::empty(2), &u).unwrap(), None);

        let c = MoveSequence::new(
            2,
            vec![Move::C {
                i: 1,
                by: Letter::gen(2),
            }],
        )
        .unwrap();
        let h = faithfulness_witness(&c, &u).unwrap().unwrap();
        let moved = Tuple::new(vec![g("a").conjugate(&h[0]).unwrap(), g("b").conjugate(&h[1]).unwrap()]).unwrap();
        assert_ne!(c.apply(&moved).unwrap(), moved);

        let with_one = Tuple::parse(&["a", ""], 2).unwrap();
        assert_eq!(
            faithfulness_witness(&r, &with_one),
            Err(EquationError::IdentityEntry(2))
        );
    }

    #[test]
    fn witness_needs_conjugators_when_entry_is_fixed() {
        // Conjugating u_1 by u_1 fixes (a, b) itself, but not every conjugate.
        let s = MoveSequence::new(
            2,
            vec![Move::C {
                i: 1,
                by: Letter::gen(1),
            }],
        )
        .unwrap();
        let u = Tuple::parse(&["a", "b"], 2).unwrap();
        assert_eq!(s.apply(&u).unwrap(), u);
        let h = faithfulness_witness(&s, &u).unwrap().unwrap();
        assert!(!h[0].is_empty());
    }

    #[test]
    fn text_round_trip() {
        let e = eq("x1 a x1' A", 1);
        assert_eq!(e.to_string(), "x1 a x1' A");
        assert_eq!(Equation::parse(&e.to_string(), 2, 1).unwrap(), e);
        assert_eq!(Equation::count_variables("x2 a x10'"), 10);
        assert!(matches!(Equation::parse("x3", 2, 2), Err(EquationError::Parse { .. })));
        assert!(matches!(
            Equation::parse("c x1", 2, 1),
            Err(EquationError::Parse { .. })
        ));
    }
}
