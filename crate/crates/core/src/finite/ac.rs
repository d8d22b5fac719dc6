use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use super::chain::StabilizerChain;
use super::group::FiniteGroup;
use super::perm::Permutation;
use super::GroupError;
use crate::moves::Sign;

/// Largest tuple space `|G|^k` handled.
pub const DOMAIN_CEILING: usize = 1 << 24;

/// k-tuples over a finite group, numbered in base `|G|` with the first entry
/// most significant. Index 0 is `(1, …, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSpace {
    pub order: usize,
    pub k: usize,
    pub size: usize,
}

impl TupleSpace {
    pub fn new(group: &FiniteGroup, k: usize) -> Result<TupleSpace, GroupError> {
        if k < 2 {
            return Err(GroupError::TupleSize(k));
        }
        let order = group.order();
        let size = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(order).filter(|&s| s <= DOMAIN_CEILING));
        let size = size.ok_or(GroupError::DomainTooLarge {
            order,
            k,
            ceiling: DOMAIN_CEILING,
        })?;
        Ok(TupleSpace { order, k, size })
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for slot in out.iter_mut().rev() {
            *slot = index % self.order;
            index /= self.order;
        }
        out
    }

    pub fn encode(&self, entries: &[usize]) -> usize {
        entries.iter().fold(0, |acc, &e| acc * self.order + e)
    }
}

/// An elementary move with the conjugator any group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteMove {
    R { i: usize, j: usize, sign: Sign },
    L { i: usize, j: usize, sign: Sign },
    I { i: usize },
    C { i: usize, by: usize },
}

impl FiniteMove {
    pub fn inverse(self, group: &FiniteGroup) -> FiniteMove {
        match self {
            FiniteMove::R { i, j, sign } => FiniteMove::R {
                i,
                j,
                sign: sign.flip(),
            },
            FiniteMove::L { i, j, sign } => FiniteMove::L {
                i,
                j,
                sign: sign.flip(),
            },
            FiniteMove::I { i } => FiniteMove::I { i },
            FiniteMove::C { i, by } => FiniteMove::C { i, by: group.inv(by) },
        }
    }

    fn apply(&self, g: &FiniteGroup, t: &mut [usize]) {
        let signed = |x: usize, s: Sign| if s == Sign::Plus { x } else { g.inv(x) };
        match *self {
            FiniteMove::R { i, j, sign } => t[i - 1] = g.mul(t[i - 1], signed(t[j - 1], sign)),
            FiniteMove::L { i, j, sign } => t[i - 1] = g.mul(signed(t[j - 1], sign), t[i - 1]),
            FiniteMove::I { i } => t[i - 1] = g.inv(t[i - 1]),
            FiniteMove::C { i, by } => t[i - 1] = g.conj(t[i - 1], by),
        }
    }

    /// Every elementary move for tuple size k, conjugators over all of G.
    pub fn all(group: &FiniteGroup, k: usize) -> Vec<FiniteMove> {
        let mut out = Vec::new();
        for i in 1..=k {
            for j in (1..=k).filter(|&j| j != i) {
                for sign in [Sign::Plus, Sign::Minus] {
                    out.push(FiniteMove::R { i, j, sign });
                    out.push(FiniteMove::L { i, j, sign });
                }
            }
            out.push(FiniteMove::I { i });
            out.extend((0..group.order()).map(|by| FiniteMove::C { i, by }));
        }
        out.sort();
        out
    }
}

impl fmt::Display for FiniteMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteMove::R { i, j, sign } => write!(f, "R {i} {j} {}", sign.as_char()),
            FiniteMove::L { i, j, sign } => write!(f, "L {i} {j} {}", sign.as_char()),
            FiniteMove::I { i } => write!(f, "I {i}"),
            FiniteMove::C { i, by } => write!(f, "C {i} g{by}"),
        }
    }
}

/// The bijection of `G^k` induced by a move.
pub fn move_permutation(group: &FiniteGroup, k: usize, m: FiniteMove) -> Result<Permutation, GroupError> {
    let space = TupleSpace::new(group, k)?;
    let ok = match m {
        FiniteMove::R { i, j, .. } | FiniteMove::L { i, j, .. } => {
            (1..=k).contains(&i) && (1..=k).contains(&j) && i != j
        }
        FiniteMove::I { i } => (1..=k).contains(&i),
        FiniteMove::C { i, by } => (1..=k).contains(&i) && by < group.order(),
    };
    if !ok {
        return Err(GroupError::BadMove(m.to_string()));
    }
    let images = (0..space.size)
        .map(|x| {
            let mut t = space.decode(x);
            m.apply(group, &mut t);
            space.encode(&t) as u32
        })
        .collect();
    Ok(Permutation::from_images_unchecked(images))
}

/// Distinct nonidentity permutations of all elementary moves.
pub fn move_generators(group: &FiniteGroup, k: usize) -> Result<Vec<Permutation>, GroupError> {
    let mut out: Vec<Permutation> = Vec::new();
    for m in FiniteMove::all(group, k) {
        let p = move_permutation(group, k, m)?;
        if !p.is_identity() && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Tuples whose entries generate G as a normal subgroup, ascending.
pub fn n_k_set(group: &FiniteGroup, k: usize) -> Result<Vec<u32>, GroupError> {
    let space = TupleSpace::new(group, k)?;
    let n = group.order();
    let closures: Vec<Vec<bool>> = (0..n)
        .map(|e| {
            let mut bits = vec![false; n];
            group.normal_closure(&[e]).into_iter().for_each(|x| bits[x] = true);
            bits
        })
        .collect();
    let mut memo: HashMap<Vec<bool>, bool> = HashMap::new();
    let mut out = Vec::new();
    for x in 0..space.size {
        let t = space.decode(x);
        let mut union = vec![false; n];
        for &e in &t {
            union.iter_mut().zip(&closures[e]).for_each(|(u, &c)| *u |= c);
        }
        let full = *memo.entry(union).or_insert_with_key(|u| {
            let gens: Vec<usize> = (0..n).filter(|&i| u[i]).collect();
            group.subgroup(&gens).len() == n
        });
        if full {
            out.push(x as u32);
        }
    }
    Ok(out)
}

/// The full AC-group as a permutation group on `G^k`.
pub fn fac_group(group: &FiniteGroup, k: usize) -> Result<StabilizerChain, GroupError> {
    let space = TupleSpace::new(group, k)?;
    Ok(StabilizerChain::new(space.size, &move_generators(group, k)?, &[]))
}

/// Orbits of the full AC-group on `G^k`, each sorted, ordered by least
/// element.
pub fn orbits(group: &FiniteGroup, k: usize) -> Result<Vec<Vec<u32>>, GroupError> {
    let space = TupleSpace::new(group, k)?;
    let gens = move_generators(group, k)?;
    Ok(orbit_partition(space.size, &gens))
}

pub(crate) fn orbit_partition(degree: usize, gens: &[Permutation]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut head = 0;
        while head < orbit.len() {
            let p = orbit[head];
            for g in gens {
                let q = g.image(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub group_order: usize,
    pub k: usize,
    pub fac_order: BigUint,
    pub ac_order: BigUint,
    pub kernel_order: BigUint,
    /// Generate the kernel; each fixes every point of N_k(G).
    pub kernel_generators: Vec<Permutation>,
    pub n_k_size: usize,
    pub transitive_on_n: bool,
    /// Sizes of all orbits on `G^k`, ordered by least element.
    pub orbit_sizes: Vec<usize>,
}

impl KernelReport {
    pub fn summary_line(&self) -> String {
        let sizes: Vec<String> = self.orbit_sizes.iter().map(|s| s.to_string()).collect();
        format!(
            "fac_order={} ac_order={} kernel_order={} transitive_on_N={} orbit_sizes={}",
            self.fac_order,
            self.ac_order,
            self.kernel_order,
            if self.transitive_on_n { "yes" } else { "no" },
            sizes.join(",")
        )
    }
}

/// Builds the chain with all of N_k(G) first in the base and reads the
/// kernel of the restriction map to N_k(G) off the chain.
pub fn kernel_of_lambda(group: &FiniteGroup, k: usize) -> Result<KernelReport, GroupError> {
    let space = TupleSpace::new(group, k)?;
    let n_k = n_k_set(group, k)?;
    if n_k.is_empty() {
        return Err(GroupError::EmptyNk {
            order: group.order(),
            k,
        });
    }
    let gens = move_generators(group, k)?;
    let chain = StabilizerChain::new(space.size, &gens, &n_k);
    let fac_order = chain.order();
    let kernel_order = chain.order_from(n_k.len());
    let kernel_generators = chain.stabilizer_generators(n_k.len());
    for g in &kernel_generators {
        assert!(n_k.iter().all(|&p| g.fixes(p)), "kernel generator moves a point of N_k");
        assert!(!g.is_identity());
    }
    let ac_order = &fac_order / &kernel_order;
    debug_assert_eq!(&ac_order * &kernel_order, fac_order);

    let parts = orbit_partition(space.size, &gens);
    let in_n = {
        let mut bits = vec![false; space.size];
        n_k.iter().for_each(|&p| bits[p as usize] = true);
        bits
    };
    let touching = parts.iter().filter(|o| o.iter().any(|&p| in_n[p as usize])).count();
    Ok(KernelReport {
        group_order: group.order(),
        k,
        fac_order,
        ac_order,
        kernel_order,
        kernel_generators,
        n_k_size: n_k.len(),
        transitive_on_n: touching == 1,
        orbit_sizes: parts.iter().map(Vec::len).collect(),
    })
}
