use ac_workbench::equations::Equation;
use ac_workbench::sample;
use ac_workbench::{Letter, Move, Tuple, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn raw_letters(rank: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(i, inv)| Letter::new(i, inv)),
        0..30,
    )
}

/// Naive stack-free reduction: delete adjacent inverse pairs until none are left.
fn reduce_oracle(mut v: Vec<Letter>) -> Vec<Letter> {
    loop {
        match v.windows(2).position(|w| w[0] == w[1].inverse()) {
            Some(p) => {
                v.drain(p..p + 2);
            }
            None => return v,
        }
    }
}

proptest! {
    #[test]
    fn reduction_matches_oracle_and_is_idempotent(letters in raw_letters(3)) {
        let w = Word::reduce(letters.clone(), 3).unwrap();
        prop_assert_eq!(w.letters(), &reduce_oracle(letters)[..]);
        let again = Word::reduce(w.letters().to_vec(), 3).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn inverse_cancels_and_length_parity(a in raw_letters(2), b in raw_letters(2)) {
        let u = Word::reduce(a, 2).unwrap();
        let v = Word::reduce(b, 2).unwrap();
        prop_assert!(u.multiply(&u.invert()).unwrap().is_empty());
        let uv = u.multiply(&v).unwrap();
        prop_assert_eq!(uv.len() % 2, (u.len() + v.len()) % 2);
        prop_assert!(uv.len() <= u.len() + v.len());
    }

    #[test]
    fn conjugation_round_trips(a in raw_letters(2), b in raw_letters(2)) {
        let u = Word::reduce(a, 2).unwrap();
        let w = Word::reduce(b, 2).unwrap();
        prop_assert_eq!(u.conjugate(&w).unwrap().conjugate(&w.invert()).unwrap(), u);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(a in raw_letters(2)) {
        let u = Word::reduce(a, 2).unwrap();
        let (core, c) = u.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugate(&c).unwrap(), u);
    }

    #[test]
    fn sequence_then_inverse_is_identity(seed in any::<u64>(), k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::tuple(&mut rng, 2, k, 6);
        let s = sample::sequence(&mut rng, k, 2, 12);
        let there = s.apply(&t).unwrap();
        prop_assert_eq!(s.inverse().apply(&there).unwrap(), t);
        prop_assert!(s.concat(&s.inverse()).is_identity());
        prop_assert_eq!(s.apply(&Tuple::trivial(2, k)).unwrap(), Tuple::trivial(2, k));
    }

    #[test]
    fn extracted_words_agree_with_direct_action(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::sequence(&mut rng, 2, 2, 20);
        let t = sample::tuple(&mut rng, 2, 2, 5);
        let words = s.extract_words(2).unwrap();
        let mut image: Vec<Word> = vec![Word::letter(Letter::gen(1), 2).unwrap(), Word::letter(Letter::gen(2), 2).unwrap()];
        image.extend(t.entries().iter().cloned());
        let substituted: Vec<Word> = words.iter().map(|w| w.substitute(&image, 2)).collect();
        prop_assert_eq!(substituted, s.apply(&t).unwrap().into_entries());
    }

    #[test]
    fn involutions_square_to_identity(seed in any::<u64>(), i in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::tuple(&mut rng, 2, 3, 6);
        let m = Move::I { i };
        prop_assert_eq!(m.apply(&m.apply(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn conjugate_power_form_reassembles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = sample::word(&mut rng, 4, 10);
        // append the inverse of the constant part so that x = 1 solves it
        let ones = [Word::letter(Letter::gen(1), 4).unwrap(), Word::letter(Letter::gen(2), 4).unwrap(), Word::identity(4), Word::identity(4)];
        let body = raw.multiply(&raw.substitute(&ones, 4).invert()).unwrap();
        let e = Equation::new(2, 2, body).unwrap();
        if e.is_trivial() || e.body().letters().iter().all(|l| l.index() <= 2) {
            return Ok(());
        }
        let n = e.normalize().unwrap();
        let form = n.conjugate_power_form().unwrap();
        prop_assert_eq!(&form.reassemble(), n.body());
    }
}
