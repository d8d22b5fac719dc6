use std::collections::HashMap;

use super::perm::Permutation;
use super::GroupError;

/// Largest group built by closing permutation generators.
pub const CLOSURE_CEILING: usize = 10_000;

/// Associativity is checked on every triple up to this order, and by Light's
/// test over a generating set above it.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 128;

/// A finite group given by its multiplication table. Element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Axiom("empty table".into()));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(GroupError::Parse(format!("row {r} does not have {n} entries")));
        }
        if let Some(&x) = rows.iter().flatten().find(|&&x| x >= n) {
            return Err(GroupError::Parse(format!("entry {x} out of range for order {n}")));
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&x| x as u32).collect();
        let mul = |a: usize, b: usize| table[a * n + b] as usize;

        for a in 0..n {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(GroupError::Axiom(format!("identity: 0 is not neutral for {a}")));
            }
        }
        let mut inverse = vec![0u32; n];
        for (a, slot) in inverse.iter_mut().enumerate() {
            let b = (0..n)
                .find(|&b| mul(a, b) == 0)
                .ok_or_else(|| GroupError::Axiom(format!("inverses: {a} has no right inverse")))?;
            if mul(b, a) != 0 {
                return Err(GroupError::Axiom(format!(
                    "inverses: {b} is a right but not left inverse of {a}"
                )));
            }
            *slot = b as u32;
        }
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                if std::mem::replace(&mut seen[mul(a, b)], true) {
                    return Err(GroupError::Axiom(format!("cancellation fails in row {a}")));
                }
            }
        }
        let mut group = FiniteGroup {
            order: n,
            table,
            inverse,
            generators: Vec::new(),
        };
        group.generators = group.greedy_generators();
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c)) {
                            return Err(GroupError::Axiom(format!("associativity fails at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            for &g in &group.generators {
                for a in 0..n {
                    for c in 0..n {
                        if group.mul(group.mul(a, g), c) != group.mul(a, group.mul(g, c)) {
                            return Err(GroupError::Axiom(format!("associativity fails at ({a}, {g}, {c})")));
                        }
                    }
                }
            }
        }
        Ok(group)
    }

    /// The group generated by the permutations, elements numbered in
    /// breadth-first order from the identity.
    pub fn from_permutations(gens: &[Permutation]) -> Result<FiniteGroup, GroupError> {
        let degree = gens.first().map_or(0, Permutation::degree);
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::Parse("generators act on different degrees".into()));
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            for g in gens {
                let p = elements[head].then(g);
                if !index.contains_key(&p) {
                    if elements.len() >= CLOSURE_CEILING {
                        return Err(GroupError::ClosureCeiling(CLOSURE_CEILING));
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let rows: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.then(b)]).collect())
            .collect();
        let mut group = FiniteGroup::from_table(rows)?;
        group.generators = gens.iter().map(|g| index[g]).filter(|&g| g != 0).collect();
        debug_assert!(n == group.order);
        Ok(group)
    }

    /// Table file (`order n` then n rows) or one permutation per line.
    pub fn parse(text: &str) -> Result<FiniteGroup, GroupError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let Some(first) = lines.first() else {
            return Err(GroupError::Parse("empty group file".into()));
        };
        if let Some(rest) = first.strip_prefix("order") {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| GroupError::Parse(format!("bad header {first:?}")))?;
            if lines.len() != n + 1 {
                return Err(GroupError::Parse(format!("expected {n} rows, got {}", lines.len() - 1)));
            }
            let rows = lines[1..]
                .iter()
                .map(|l| {
                    l.split_whitespace()
                        .map(|s| s.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Parse("non-integer table entry".into()))?;
            FiniteGroup::from_table(rows)
        } else {
            let parsed: Vec<Permutation> = lines
                .iter()
                .map(|l| Permutation::parse(l, None))
                .collect::<Result<_, _>>()?;
            let degree = parsed.iter().map(Permutation::degree).max().unwrap_or(0);
            let gens: Vec<Permutation> = parsed
                .into_iter()
                .map(|p| {
                    let mut im = p.images().to_vec();
                    im.extend(im.len() as u32..degree as u32);
                    Permutation::from_images_unchecked(im)
                })
                .collect();
            FiniteGroup::from_permutations(&gens)
        }
    }

    pub fn to_table_text(&self) -> String {
        let mut s = format!("order {}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g⁻¹ a g`.
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut elems = vec![0usize];
        let mut head = 0;
        while head < elems.len() {
            let a = elems[head];
            for &g in gens {
                let p = self.mul(a, g);
                if !member[p] {
                    member[p] = true;
                    elems.push(p);
                }
            }
            head += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// Smallest normal subgroup containing `elements`.
    pub fn normal_closure(&self, elements: &[usize]) -> Vec<usize> {
        let mut conjugates: Vec<usize> = elements
            .iter()
            .flat_map(|&e| (0..self.order).map(move |g| (e, g)))
            .map(|(e, g)| self.conj(e, g))
            .filter(|&c| c != 0)
            .collect();
        conjugates.sort_unstable();
        conjugates.dedup();
        self.subgroup(&conjugates)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub = vec![0usize];
        while sub.len() < self.order {
            let mut inside = vec![false; self.order];
            sub.iter().for_each(|&x| inside[x] = true);
            let next = (0..self.order).find(|&x| !inside[x]).unwrap();
            gens.push(next);
            sub = self.subgroup(&gens);
        }
        gens
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(rows).expect("cyclic table")
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    /// Pairs `(a, b)` numbered `a * |H| + b`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (g.order, h.order);
        let rows = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("direct product table")
    }

    /// Symmetries of a regular n-gon, order 2n.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n >= 3);
        let rot = Permutation::from_images_unchecked((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        let refl = Permutation::from_images_unchecked((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        FiniteGroup::from_permutations(&[rot, refl]).expect("dihedral group")
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!(n >= 2);
        let swap = Permutation::parse("(0 1)", Some(n)).unwrap();
        let cyc = Permutation::from_images_unchecked((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        FiniteGroup::from_permutations(&[swap, cyc]).expect("symmetric group")
    }

    /// Quaternion group of order 8 as permutations of its regular action.
    pub fn quaternion() -> FiniteGroup {
        let i = Permutation::parse("(0 1 2 3)(4 5 6 7)", Some(8)).unwrap();
        let j = Permutation::parse("(0 4 2 6)(1 7 3 5)", Some(8)).unwrap();
        FiniteGroup::from_permutations(&[i, j]).expect("quaternion group")
    }

    /// Same group with elements renamed by `relabel` (which must fix 0).
    pub fn relabeled(&self, relabel: &[usize]) -> FiniteGroup {
        assert_eq!(relabel.len(), self.order);
        assert_eq!(relabel[0], 0, "identity must stay 0");
        let mut back = vec![0usize; self.order];
        for (old, &new) in relabel.iter().enumerate() {
            back[new] = old;
        }
        let rows = (0..self.order)
            .map(|x| (0..self.order).map(|y| relabel[self.mul(back[x], back[y])]).collect())
            .collect();
        FiniteGroup::from_table(rows).expect("relabeled table")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_examples() {
        let z2 = FiniteGroup::parse("order 2\n0 1\n1 0\n").unwrap();
        assert_eq!(z2, FiniteGroup::cyclic(2));
        let broken = "order 3\n0 1 2\n1 0 2\n2 2 0\n";
        assert!(matches!(FiniteGroup::parse(broken), Err(GroupError::Axiom(_))));
        let z3 = FiniteGroup::parse("(0 1 2)\n").unwrap();
        assert_eq!(z3.order(), 3);
        assert!(z3.is_abelian());
        let also = FiniteGroup::parse("1 2 0\n").unwrap();
        assert_eq!(also.order(), 3);
        let s4 = FiniteGroup::parse("(0 1)\n(0 1 2 3)\n").unwrap();
        assert_eq!(s4.order(), 24);
        assert!(matches!(
            FiniteGroup::parse("(0 1)\n(0 1 2 3 4 5 6 7)\n"),
            Err(GroupError::ClosureCeiling(_))
        ));
    }

    #[test]
    fn associativity_is_checked() {
        // A Latin square with identity 0 that is not a group (order 5 loop).
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table(rows) {
            Err(GroupError::Axiom(msg)) => assert!(msg.contains("associativity"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normal_closure_examples() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.normal_closure(&[1]), vec![0, 1]);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.normal_closure(&[]), vec![0]);
        let transposition = (1..6).find(|&x| s3.mul(x, x) == 0).unwrap();
        assert_eq!(s3.normal_closure(&[transposition]).len(), 6);
        let three_cycle = (1..6).find(|&x| s3.mul(x, x) != 0).unwrap();
        assert_eq!(s3.normal_closure(&[three_cycle]).len(), 3);
    }

    #[test]
    fn catalogue_orders() {
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert!(!FiniteGroup::dihedral(4).is_abelian());
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3)).order(),
            6
        );
        let g = FiniteGroup::dihedral(3);
        let relabel = vec![0, 5, 4, 3, 2, 1];
        assert_eq!(g.relabeled(&relabel).order(), 6);
    }
}
