//! Seeded random words, tuples and move sequences for experiments and tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::moves::{Move, MoveSequence};
use crate::word::{Letter, Tuple, Word};

/// A uniformly chosen reduced word of uniformly chosen length `0..=max_len`.
pub fn word<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    word_of_length(rng, rank, len)
}

pub fn word_of_length<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(1..=rank), rng.gen_bool(0.5));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word::from_reduced_unchecked(letters, rank)
}

pub fn tuple<R: Rng + ?Sized>(rng: &mut R, rank: usize, k: usize, max_len: usize) -> Tuple {
    Tuple::from_parts(rank, (0..k).map(|_| word(rng, rank, max_len)).collect())
}

/// Tuple whose entries are all nontrivial.
pub fn nontrivial_tuple<R: Rng + ?Sized>(rng: &mut R, rank: usize, k: usize, max_len: usize) -> Tuple {
    assert!(max_len >= 1);
    let entries = (0..k)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            word_of_length(rng, rank, len)
        })
        .collect();
    Tuple::from_parts(rank, entries)
}

/// Random sequence of `0..=max_len` moves over the single-letter alphabet.
pub fn sequence<R: Rng + ?Sized>(rng: &mut R, k: usize, rank: usize, max_len: usize) -> MoveSequence {
    let alphabet = Move::alphabet(k, rank);
    let len = rng.gen_range(0..=max_len);
    let moves = (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect();
    MoveSequence::from_parts(k, moves)
}

/// Random walk of at most `max_moves` moves from `start` that never visits a
/// tuple longer than `length_limit`. Moves that would exceed the limit are
/// redrawn, a few times, before the walk stops early.
pub fn scramble<R: Rng + ?Sized>(rng: &mut R, start: &Tuple, max_moves: usize, length_limit: usize) -> MoveSequence {
    let alphabet = Move::alphabet(start.size(), start.rank());
    let mut cur = start.clone();
    let mut moves = Vec::new();
    let target = rng.gen_range(1..=max_moves.max(1)).min(max_moves);
    'walk: while moves.len() < target {
        for _ in 0..64 {
            let m = *alphabet.choose(rng).unwrap();
            let next = m.apply_unchecked(&cur);
            if next.total_length() <= length_limit && next != cur {
                moves.push(m);
                cur = next;
                continue 'walk;
            }
        }
        break;
    }
    MoveSequence::from_parts(start.size(), moves)
}
