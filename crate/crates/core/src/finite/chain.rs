use std::collections::HashMap;

use num_bigint::BigUint;

use super::perm::Permutation;

/// Base and strong generating set for a permutation group, built by
/// deterministic Schreier-Sims.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    point: u32,
    /// Indices into `strong` of generators fixing every earlier base point.
    gens: Vec<usize>,
    orbit: Vec<u32>,
    /// Schreier tree: orbit point ↦ (generator index, predecessor).
    tree: HashMap<u32, Option<(usize, u32)>>,
}

impl Level {
    fn new(point: u32) -> Level {
        let mut tree = HashMap::new();
        tree.insert(point, None);
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            tree,
        }
    }

    fn rebuild(&mut self, strong: &[Permutation]) {
        self.tree.clear();
        self.tree.insert(self.point, None);
        self.orbit = vec![self.point];
        let mut head = 0;
        while head < self.orbit.len() {
            let p = self.orbit[head];
            for &g in &self.gens {
                let q = strong[g].image(p);
                if let std::collections::hash_map::Entry::Vacant(e) = self.tree.entry(q) {
                    e.insert(Some((g, p)));
                    self.orbit.push(q);
                }
            }
            head += 1;
        }
    }
}

impl StabilizerChain {
    /// Builds a chain whose base begins with `base_prefix` in that order.
    /// Further base points are the smallest point moved by the element that
    /// needs them.
    pub fn new(degree: usize, generators: &[Permutation], base_prefix: &[u32]) -> StabilizerChain {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            assert_eq!(g.degree(), degree);
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut chain = StabilizerChain {
            degree,
            strong,
            levels: Vec::new(),
        };
        for &p in base_prefix {
            chain.levels.push(Level::new(p));
        }
        for s in 0..chain.strong.len() {
            if chain.levels.iter().all(|l| chain.strong[s].fixes(l.point)) {
                let p = chain.strong[s].first_moved().unwrap();
                chain.levels.push(Level::new(p));
            }
        }
        for i in 0..chain.levels.len() {
            let fixed: Vec<u32> = chain.levels[..i].iter().map(|l| l.point).collect();
            chain.levels[i].gens = (0..chain.strong.len())
                .filter(|&s| fixed.iter().all(|&p| chain.strong[s].fixes(p)))
                .collect();
            chain.levels[i].rebuild(&chain.strong);
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            match self.find_failure(lvl) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == self.levels.len() {
                        let p = h.first_moved().expect("nonidentity residue");
                        self.levels.push(Level::new(p));
                    }
                    let idx = self.strong.len();
                    self.strong.push(h);
                    for l in lvl + 1..=j {
                        self.levels[l].gens.push(idx);
                        self.levels[l].rebuild(&self.strong);
                    }
                    i = j as isize;
                }
            }
        }
    }

    /// First Schreier generator of `lvl` that does not sift, as the residue
    /// and the level where sifting stopped.
    fn find_failure(&self, lvl: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[lvl];
        for &beta in &level.orbit {
            let u_beta = self.coset_rep(lvl, beta);
            for &s in &level.gens {
                let gamma = self.strong[s].image(beta);
                // tree edges give trivial Schreier generators
                if level.tree[&gamma] == Some((s, beta)) {
                    continue;
                }
                let g = u_beta.then(&self.strong[s]).then(&self.coset_rep(lvl, gamma).inverse());
                let (h, j) = self.sift(g, lvl + 1);
                if j < self.levels.len() || !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// An element taking the base point of `lvl` to `beta`.
    fn coset_rep(&self, lvl: usize, beta: u32) -> Permutation {
        let level = &self.levels[lvl];
        let mut path = Vec::new();
        let mut p = beta;
        while let Some((g, prev)) = level.tree[&p] {
            path.push(g);
            p = prev;
        }
        let mut rep = Permutation::identity(self.degree);
        for &g in path.iter().rev() {
            rep = rep.then(&self.strong[g]);
        }
        rep
    }

    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for l in from..self.levels.len() {
            let beta = g.image(self.levels[l].point);
            if !self.levels[l].tree.contains_key(&beta) {
                return (g, l);
            }
            g = g.then(&self.coset_rep(l, beta).inverse());
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.order_from(0)
    }

    /// Order of the stabilizer of the first `level` base points.
    pub fn order_from(&self, level: usize) -> BigUint {
        self.levels[level.min(self.levels.len())..]
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strong generators of the stabilizer of the first `level` base points.
    pub fn stabilizer_generators(&self, level: usize) -> Vec<Permutation> {
        match self.levels.get(level) {
            Some(l) => l.gens.iter().map(|&g| self.strong[g].clone()).collect(),
            None => Vec::new(),
        }
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.sift(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }
}
