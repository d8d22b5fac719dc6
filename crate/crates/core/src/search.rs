//! Bounded exploration of the AC-graph on balanced tuples.
//!
//! States are tuples whose total length stays within a cap; edges are the
//! single-letter move alphabet. Budgets count states entered into the dedup
//! index. Frontier layers are expanded in parallel chunks and merged in
//! frontier order, so every result is independent of the rayon pool size.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::moves::{Move, MoveError, MoveSequence, Sign};
use crate::word::{Letter, Tuple, Word, WordError};

const CHUNK: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("AK(n) needs n >= 2, got {0}")]
    AkIndex(usize),
    #[error("presentation is not balanced: rank {rank}, {k} relators")]
    NotBalanced { rank: usize, k: usize },
    #[error("start has total length {length}, above the cap {cap}")]
    StartExceedsCap { length: usize, cap: usize },
    #[error("node budget must be positive")]
    ZeroBudget,
    #[error("enumeration cap {enum_cap} exceeds search cap {search_cap}")]
    InconsistentCaps { enum_cap: usize, search_cap: usize },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Bfs,
    Iddfs,
    Bidirectional,
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "iddfs" => Ok(Strategy::Iddfs),
            "bidirectional" | "bidi" => Ok(Strategy::Bidirectional),
            _ => Err(format!("unknown strategy {s:?} (bfs, iddfs, bidirectional)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bfs => "bfs",
            Strategy::Iddfs => "iddfs",
            Strategy::Bidirectional => "bidirectional",
        })
    }
}

/// How states are identified in the dedup index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dedup {
    /// The exact reduced tuple.
    #[default]
    Exact,
    /// The tuple up to inverting and permuting entries. Both operations are
    /// products of moves, so reachability is unchanged, but path lengths are
    /// not those of the exact graph.
    Orbit,
}

impl FromStr for Dedup {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Dedup::Exact),
            "orbit" => Ok(Dedup::Orbit),
            _ => Err(format!("unknown dedup mode {s:?} (exact, orbit)")),
        }
    }
}

impl fmt::Display for Dedup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dedup::Exact => "exact",
            Dedup::Orbit => "orbit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// States with total length above this are never entered.
    pub length_cap: usize,
    pub node_budget: usize,
    pub strategy: Strategy,
    pub dedup: Dedup,
    /// Recorded in certificates. The strategies here are deterministic and do
    /// not draw from it.
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(length_cap: usize, node_budget: usize) -> SearchConfig {
        SearchConfig {
            length_cap,
            node_budget,
            strategy: Strategy::Bfs,
            dedup: Dedup::Exact,
            seed: 0,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> SearchConfig {
        self.strategy = strategy;
        self
    }

    pub fn with_dedup(mut self, dedup: Dedup) -> SearchConfig {
        self.dedup = dedup;
        self
    }
}

/// A replayable path from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    pub start: Tuple,
    pub moves: MoveSequence,
    pub end: Tuple,
    pub dedup: Dedup,
    pub seed: u64,
}

impl PathCertificate {
    /// Replays the moves; the stored end is only compared against.
    pub fn verify(&self) -> bool {
        match self.moves.apply(&self.start) {
            Ok(t) => t == self.end,
            Err(_) => false,
        }
    }

    /// Move-file text with the start and end recorded as comments.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# rank: {}\n", self.start.rank()));
        s.push_str(&format!("# start: {}\n", self.start.to_inline()));
        s.push_str(&format!("# dedup: {}\n", self.dedup));
        s.push_str(&format!("# seed: {}\n", self.seed));
        s.push_str(&self.moves.to_text());
        s.push_str(&format!("# end: {}\n", self.end.to_inline()));
        s
    }

    pub fn parse(text: &str) -> Result<PathCertificate, SearchError> {
        let field = |name: &str| {
            text.lines()
                .filter_map(|l| l.trim().strip_prefix('#'))
                .filter_map(|l| l.trim().strip_prefix(name))
                .filter_map(|l| l.trim_start().strip_prefix(':'))
                .map(|l| l.trim().to_string())
                .next()
        };
        let missing = |n: &str| SearchError::MalformedCertificate(format!("missing `# {n}:`"));
        let rank: usize = field("rank")
            .ok_or_else(|| missing("rank"))?
            .parse()
            .map_err(|_| SearchError::MalformedCertificate("bad rank".into()))?;
        let start = Tuple::parse_inline(&field("start").ok_or_else(|| missing("start"))?, rank)?;
        let end = Tuple::parse_inline(&field("end").ok_or_else(|| missing("end"))?, rank)?;
        let dedup = match field("dedup") {
            Some(d) => d.parse().map_err(SearchError::MalformedCertificate)?,
            None => Dedup::Exact,
        };
        let seed = match field("seed") {
            Some(s) => s
                .parse()
                .map_err(|_| SearchError::MalformedCertificate("bad seed".into()))?,
            None => 0,
        };
        let moves = MoveSequence::parse(text, start.size())?;
        Ok(PathCertificate {
            start,
            moves,
            end,
            dedup,
            seed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        certificate: PathCertificate,
        states: usize,
    },
    /// Every state reachable under the cap was visited; no path exists
    /// within the cap.
    Exhausted { states: usize },
    /// The budget ran out first; nothing is concluded.
    BudgetExhausted { states: usize },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&PathCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn states(&self) -> usize {
        match *self {
            SearchOutcome::Found { states, .. }
            | SearchOutcome::Exhausted { states }
            | SearchOutcome::BudgetExhausted { states } => states,
        }
    }
}

/// The Akbulut-Kirby pair `(aⁿ b^-(n+1), abaBAB)`.
pub fn ak(n: usize) -> Result<Tuple, SearchError> {
    if n < 2 {
        return Err(SearchError::AkIndex(n));
    }
    let first = format!("{}{}", "a".repeat(n), "B".repeat(n + 1));
    Ok(Tuple::parse(&[&first, "abaBAB"], 2)?)
}

/// Searches for a move path from a balanced tuple to the generator tuple
/// `(x_1, …, x_k)`. Under [`Strategy::Bfs`] and exact dedup the path is the
/// shortest among paths whose every state respects the cap, and the
/// lexicographically least (in [`Move`] order) among those.
pub fn trivialize(start: &Tuple, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if start.rank() != start.size() {
        return Err(SearchError::NotBalanced {
            rank: start.rank(),
            k: start.size(),
        });
    }
    if start.total_length() > cfg.length_cap {
        return Err(SearchError::StartExceedsCap {
            length: start.total_length(),
            cap: cfg.length_cap,
        });
    }
    if cfg.node_budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let target = Tuple::generators(start.size());
    find_path(start, &target, cfg)
}

/// Searches for a path between two arbitrary tuples of equal shape.
pub fn find_path(start: &Tuple, target: &Tuple, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if start.size() != target.size() || start.rank() != target.rank() {
        return Err(SearchError::Word(WordError::RankMismatch {
            left: start.rank(),
            right: target.rank(),
        }));
    }
    if start.total_length() > cfg.length_cap {
        return Err(SearchError::StartExceedsCap {
            length: start.total_length(),
            cap: cfg.length_cap,
        });
    }
    if cfg.node_budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let space = Space::new(start, cfg);
    if target.total_length() > cfg.length_cap {
        return Ok(SearchOutcome::Exhausted { states: 0 });
    }
    let result = match cfg.strategy {
        Strategy::Bfs => space.bfs(start, target),
        Strategy::Iddfs => space.iddfs(start, target),
        Strategy::Bidirectional => space.bidirectional(start, target),
    };
    Ok(match result {
        Raw::Found { moves, states } => {
            let moves = MoveSequence::from_parts(start.size(), moves);
            let end = moves.apply(start)?;
            let certificate = PathCertificate {
                start: start.clone(),
                moves,
                end,
                dedup: cfg.dedup,
                seed: cfg.seed,
            };
            assert!(
                certificate.verify() && &certificate.end == target,
                "search produced a bad path"
            );
            SearchOutcome::Found { certificate, states }
        }
        Raw::Exhausted { states } => SearchOutcome::Exhausted { states },
        Raw::Budget { states } => SearchOutcome::BudgetExhausted { states },
    })
}

enum Raw {
    Found { moves: Vec<Move>, states: usize },
    Exhausted { states: usize },
    Budget { states: usize },
}

/// Canonical representative up to inverting and permuting entries.
pub fn orbit_key(t: &Tuple) -> Tuple {
    let mut entries: Vec<Word> = t
        .entries()
        .iter()
        .map(|w| {
            let inv = w.invert();
            if inv < *w {
                inv
            } else {
                w.clone()
            }
        })
        .collect();
    entries.sort();
    Tuple::from_parts(t.rank(), entries)
}

/// Moves that carry `from` to `to` when `to` is `from` with entries permuted
/// and inverted.
pub fn normalizing_moves(from: &Tuple, to: &Tuple) -> Option<Vec<Move>> {
    if from.size() != to.size() {
        return None;
    }
    let k = from.size();
    let mut cur = from.clone();
    let mut moves = Vec::new();
    for pos in 1..=k {
        let want = to.entry(pos);
        let want_inv = want.invert();
        let q = (pos..=k)
            .find(|&q| cur.entry(q) == want)
            .or_else(|| (pos..=k).find(|&q| *cur.entry(q) == want_inv))?;
        let mut step = Vec::new();
        if q != pos {
            step.extend(swap_moves(pos, q));
        }
        for m in &step {
            cur = m.apply_unchecked(&cur);
        }
        if cur.entry(pos) != want {
            let m = Move::I { i: pos };
            cur = m.apply_unchecked(&cur);
            step.push(m);
        }
        moves.extend(step);
    }
    (cur == *to).then_some(moves)
}

/// Exchanges entries i and j: (u, v) → (uv, v) → (uv, u⁻¹) → (v, u⁻¹) → (v, u).
fn swap_moves(i: usize, j: usize) -> [Move; 4] {
    [
        Move::R { i, j, sign: Sign::Plus },
        Move::R {
            i: j,
            j: i,
            sign: Sign::Minus,
        },
        Move::L { i, j, sign: Sign::Plus },
        Move::I { i: j },
    ]
}

struct Space {
    alphabet: Vec<Move>,
    cap: usize,
    budget: usize,
    dedup: Dedup,
}

/// Dedup index plus BFS tree.
struct Store {
    keys: IndexSet<Tuple>,
    /// Actual tuples when keys are canonical forms; empty in exact mode.
    actual: Vec<Tuple>,
    parent: Vec<(u32, Option<Move>)>,
    orbit: bool,
}

impl Store {
    fn new(dedup: Dedup) -> Store {
        Store {
            keys: IndexSet::new(),
            actual: Vec::new(),
            parent: Vec::new(),
            orbit: dedup == Dedup::Orbit,
        }
    }

    fn tuple(&self, id: usize) -> &Tuple {
        if self.orbit {
            &self.actual[id]
        } else {
            &self.keys[id]
        }
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn insert(&mut self, key: Tuple, actual: Tuple, parent: u32, mv: Option<Move>) -> Option<usize> {
        let (id, fresh) = self.keys.insert_full(key);
        if !fresh {
            return None;
        }
        if self.orbit {
            self.actual.push(actual);
        }
        self.parent.push((parent, mv));
        Some(id)
    }

    fn path_to(&self, mut id: usize) -> Vec<Move> {
        let mut moves = Vec::new();
        while let (p, Some(m)) = self.parent[id] {
            moves.push(m);
            id = p as usize;
        }
        moves.reverse();
        moves
    }
}

impl Space {
    fn new(start: &Tuple, cfg: &SearchConfig) -> Space {
        Space {
            alphabet: Move::alphabet(start.size(), start.rank()),
            cap: cfg.length_cap,
            budget: cfg.node_budget,
            dedup: cfg.dedup,
        }
    }

    fn key(&self, t: &Tuple) -> Tuple {
        match self.dedup {
            Dedup::Exact => t.clone(),
            Dedup::Orbit => orbit_key(t),
        }
    }

    /// Children of each frontier node, in frontier order then move order.
    fn expand(&self, store: &Store, frontier: &[usize]) -> Vec<Vec<(usize, Move, Tuple)>> {
        frontier
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut out = Vec::with_capacity(chunk.len() * self.alphabet.len());
                for &id in chunk {
                    let t = store.tuple(id);
                    for &m in &self.alphabet {
                        let child = m.apply_unchecked(t);
                        if child.total_length() <= self.cap {
                            out.push((id, m, child));
                        }
                    }
                }
                out
            })
            .collect()
    }

    fn bfs(&self, start: &Tuple, target: &Tuple) -> Raw {
        let target_key = self.key(target);
        let mut store = Store::new(self.dedup);
        let root_key = self.key(start);
        let at_target = root_key == target_key;
        store.insert(root_key, start.clone(), 0, None);
        if at_target {
            return self.finish(&store, 0, target);
        }
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for batch in self.expand(&store, &frontier) {
                for (parent, m, child) in batch {
                    let key = self.key(&child);
                    if store.keys.contains(&key) {
                        continue;
                    }
                    if store.len() >= self.budget {
                        return Raw::Budget { states: store.len() };
                    }
                    let hit = key == target_key;
                    let id = store.insert(key, child, parent as u32, Some(m)).unwrap();
                    if hit {
                        return self.finish(&store, id, target);
                    }
                    next.push(id);
                }
            }
            frontier = next;
        }
        Raw::Exhausted { states: store.len() }
    }

    fn finish(&self, store: &Store, id: usize, target: &Tuple) -> Raw {
        let mut moves = store.path_to(id);
        let fix = normalizing_moves(store.tuple(id), target).expect("equal keys differ by a signed permutation");
        moves.extend(fix);
        Raw::Found {
            moves,
            states: store.len(),
        }
    }

    fn iddfs(&self, start: &Tuple, target: &Tuple) -> Raw {
        let target_key = self.key(target);
        let mut states = 0usize;
        // the table ends each iteration holding exactly the ball of radius
        // `limit`; once the ball stops growing the component is exhausted
        let mut ball = 0usize;
        for limit in 0.. {
            let mut dfs = Dfs {
                space: self,
                target_key: &target_key,
                limit,
                table: HashMap::new(),
                path: Vec::new(),
                cutoff: false,
                states: &mut states,
            };
            dfs.table.insert(self.key(start), 0);
            *dfs.states += 1;
            match dfs.visit(start, 0) {
                Visit::Found(end) => {
                    let mut moves = dfs.path.clone();
                    moves.extend(normalizing_moves(&end, target).expect("equal keys"));
                    return Raw::Found { moves, states };
                }
                Visit::Budget => return Raw::Budget { states },
                Visit::Continue => {
                    if !dfs.cutoff || dfs.table.len() == ball {
                        return Raw::Exhausted { states };
                    }
                    ball = dfs.table.len();
                }
            }
        }
        unreachable!()
    }

    fn bidirectional(&self, start: &Tuple, target: &Tuple) -> Raw {
        let mut fwd = Store::new(self.dedup);
        let mut bwd = Store::new(self.dedup);
        fwd.insert(self.key(start), start.clone(), 0, None);
        bwd.insert(self.key(target), target.clone(), 0, None);
        if fwd.keys.contains(&self.key(target)) {
            return self.stitch(&fwd, 0, &bwd, 0);
        }
        let mut fwd_frontier = vec![0usize];
        let mut bwd_frontier = vec![0usize];
        loop {
            if fwd_frontier.is_empty() || bwd_frontier.is_empty() {
                return Raw::Exhausted {
                    states: fwd.len() + bwd.len(),
                };
            }
            let forward = fwd_frontier.len() <= bwd_frontier.len();
            let (side, other, frontier) = if forward {
                (&mut fwd, &bwd, &mut fwd_frontier)
            } else {
                (&mut bwd, &fwd, &mut bwd_frontier)
            };
            let mut next = Vec::new();
            let mut meetings: Vec<(usize, usize)> = Vec::new();
            for batch in self.expand(side, frontier) {
                for (parent, m, child) in batch {
                    let key = self.key(&child);
                    if side.keys.contains(&key) {
                        continue;
                    }
                    if side.len() + other.len() >= self.budget {
                        return Raw::Budget {
                            states: side.len() + other.len(),
                        };
                    }
                    let met = other.keys.get_index_of(&key);
                    let id = side.insert(key, child, parent as u32, Some(m)).unwrap();
                    if let Some(o) = met {
                        meetings.push((id, o));
                    }
                    next.push(id);
                }
            }
            *frontier = next;
            if !meetings.is_empty() {
                let candidates = meetings.into_iter().map(|(s, o)| {
                    if forward {
                        self.stitch(&fwd, s, &bwd, o)
                    } else {
                        self.stitch(&fwd, o, &bwd, s)
                    }
                });
                return candidates
                    .min_by(|a, b| match (a, b) {
                        (Raw::Found { moves: x, .. }, Raw::Found { moves: y, .. }) => {
                            x.len().cmp(&y.len()).then_with(|| x.cmp(y))
                        }
                        _ => unreachable!(),
                    })
                    .unwrap();
            }
        }
    }

    fn stitch(&self, fwd: &Store, f: usize, bwd: &Store, b: usize) -> Raw {
        let mut moves = fwd.path_to(f);
        moves.extend(normalizing_moves(fwd.tuple(f), bwd.tuple(b)).expect("equal keys"));
        let back = bwd.path_to(b);
        moves.extend(back.iter().rev().map(|m| m.inverse()));
        Raw::Found {
            moves,
            states: fwd.len() + bwd.len(),
        }
    }
}

enum Visit {
    Found(Tuple),
    Budget,
    Continue,
}

struct Dfs<'a> {
    space: &'a Space,
    target_key: &'a Tuple,
    limit: usize,
    /// Shallowest depth at which each key was reached in this iteration.
    table: HashMap<Tuple, usize>,
    path: Vec<Move>,
    cutoff: bool,
    states: &'a mut usize,
}

impl Dfs<'_> {
    fn visit(&mut self, t: &Tuple, depth: usize) -> Visit {
        if self.space.key(t) == *self.target_key {
            return Visit::Found(t.clone());
        }
        if depth == self.limit {
            self.cutoff = true;
            return Visit::Continue;
        }
        for &m in &self.space.alphabet {
            let child = m.apply_unchecked(t);
            if child.total_length() > self.space.cap {
                continue;
            }
            let key = self.space.key(&child);
            match self.table.get_mut(&key) {
                Some(d) if *d <= depth + 1 => continue,
                Some(d) => *d = depth + 1,
                None => {
                    if *self.states >= self.space.budget {
                        return Visit::Budget;
                    }
                    *self.states += 1;
                    self.table.insert(key, depth + 1);
                }
            }
            self.path.push(m);
            match self.visit(&child, depth + 1) {
                Visit::Continue => {
                    self.path.pop();
                }
                other => return other,
            }
        }
        Visit::Continue
    }
}

/// Settings for [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyConfig {
    /// Candidates have total length at most this.
    pub enum_cap: usize,
    /// Connectivity is through states of total length at most this.
    pub search_cap: usize,
    pub node_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    /// Number of enumerated candidates in the component.
    pub size: usize,
    /// First candidate of the component in enumeration order.
    pub representative: Tuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyReport {
    pub config: ClassifyConfig,
    pub candidates: usize,
    /// States labelled while exploring components.
    pub states: usize,
    pub components: Vec<Component>,
    /// Component holding `(a, b)`.
    pub trivial_component: usize,
    /// Component of every candidate, parallel to [`candidates`].
    pub membership: Vec<(Tuple, usize)>,
}

impl ClassifyReport {
    pub fn component_of(&self, t: &Tuple) -> Option<usize> {
        self.membership.iter().find(|(c, _)| c == t).map(|&(_, id)| id)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# enum_cap={} search_cap={} budget={} candidates={} states={}\n",
            self.config.enum_cap, self.config.search_cap, self.config.node_budget, self.candidates, self.states
        );
        let triv = &self.components[self.trivial_component];
        s.push_str(&format!("# trivial component {} size {}\n", triv.id, triv.size));
        for c in &self.components {
            let e = c.representative.entries();
            s.push_str(&format!("component {} size {} rep {} {}\n", c.id, c.size, e[0], e[1]));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyOutcome {
    Complete(ClassifyReport),
    BudgetExhausted { states: usize, candidates: usize },
}

/// Reduced rank-2 pairs of total length at most `cap` whose abelianization
/// has determinant ±1, ordered by total length then shortlex.
pub fn candidate_pairs(cap: usize) -> Vec<Tuple> {
    let words = words_up_to(2, cap);
    let mut out = Vec::new();
    for total in 0..=cap {
        for u in words.iter().filter(|u| u.len() <= total) {
            let need = total - u.len();
            let eu = u.exponent_sums();
            for v in words.iter().filter(|v| v.len() == need) {
                let ev = v.exponent_sums();
                let det = eu[0] * ev[1] - eu[1] * ev[0];
                if det.abs() == 1 {
                    out.push(Tuple::from_parts(2, vec![u.clone(), v.clone()]));
                }
            }
        }
    }
    out
}

/// All reduced words of length at most `max_len`, shortlex order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    let mut letters: Vec<Letter> = (1..=rank)
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    letters.sort();
    let mut out = vec![Word::identity(rank)];
    let mut layer = vec![Word::identity(rank)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(l.inverse()) {
                    let mut ls = w.letters().to_vec();
                    ls.push(l);
                    next.push(Word::from_reduced_unchecked(ls, rank));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Partitions the determinant-±1 candidates into connected components of the
/// capped AC-graph.
pub fn classify(cfg: &ClassifyConfig) -> Result<ClassifyOutcome, SearchError> {
    if cfg.enum_cap > cfg.search_cap {
        return Err(SearchError::InconsistentCaps {
            enum_cap: cfg.enum_cap,
            search_cap: cfg.search_cap,
        });
    }
    if cfg.node_budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    let candidates = candidate_pairs(cfg.enum_cap);
    let alphabet = Move::alphabet(2, 2);
    let mut label: HashMap<Tuple, usize> = HashMap::new();
    let mut components: Vec<Component> = Vec::new();
    let mut membership = Vec::with_capacity(candidates.len());
    for cand in &candidates {
        if let Some(&id) = label.get(cand) {
            components[id].size += 1;
            membership.push((cand.clone(), id));
            continue;
        }
        let id = components.len();
        if label.len() >= cfg.node_budget {
            return Ok(ClassifyOutcome::BudgetExhausted {
                states: label.len(),
                candidates: candidates.len(),
            });
        }
        label.insert(cand.clone(), id);
        let mut frontier = vec![cand.clone()];
        while !frontier.is_empty() {
            let children: Vec<Vec<Tuple>> = frontier
                .par_chunks(CHUNK)
                .map(|chunk| {
                    chunk
                        .iter()
                        .flat_map(|t| alphabet.iter().map(move |m| m.apply_unchecked(t)))
                        .filter(|c| c.total_length() <= cfg.search_cap)
                        .collect()
                })
                .collect();
            let mut next = Vec::new();
            for child in children.into_iter().flatten() {
                if label.contains_key(&child) {
                    continue;
                }
                if label.len() >= cfg.node_budget {
                    return Ok(ClassifyOutcome::BudgetExhausted {
                        states: label.len(),
                        candidates: candidates.len(),
                    });
                }
                label.insert(child.clone(), id);
                next.push(child);
            }
            frontier = next;
        }
        components.push(Component {
            id,
            size: 1,
            representative: cand.clone(),
        });
        membership.push((cand.clone(), id));
    }
    let trivial = label[&Tuple::generators(2)];
    Ok(ClassifyOutcome::Complete(ClassifyReport {
        config: cfg.clone(),
        candidates: candidates.len(),
        states: label.len(),
        components,
        trivial_component: trivial,
        membership,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: &str, b: &str) -> Tuple {
        Tuple::parse(&[a, b], 2).unwrap()
    }

    #[test]
    fn ak_presets() {
        let a2 = ak(2).unwrap();
        assert_eq!(a2, t("aaBBB", "abaBAB"));
        assert_eq!(a2.total_length(), 11);
        let a3 = ak(3).unwrap();
        assert_eq!(a3, t("aaaBBBB", "abaBAB"));
        assert_eq!(a3.total_length(), 13);
        assert_eq!(ak(1), Err(SearchError::AkIndex(1)));
    }

    #[test]
    fn trivialize_examples() {
        let cfg = SearchConfig::new(4, 100_000);
        let out = trivialize(&t("ab", "b"), &cfg).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(
            cert.moves.moves(),
            &[Move::R {
                i: 1,
                j: 2,
                sign: Sign::Minus
            }]
        );

        let out = trivialize(&t("a", "b"), &cfg).unwrap();
        assert!(out.certificate().unwrap().moves.is_empty());

        let out = trivialize(&t("ba", "b"), &cfg).unwrap();
        assert_eq!(
            out.certificate().unwrap().moves.moves(),
            &[Move::L {
                i: 1,
                j: 2,
                sign: Sign::Minus
            }]
        );
    }

    #[test]
    fn trivialize_errors_and_exhaustion() {
        let cfg = SearchConfig::new(4, 1000);
        let three = Tuple::parse(&["a", "b"], 3).unwrap();
        assert!(matches!(trivialize(&three, &cfg), Err(SearchError::NotBalanced { .. })));
        assert!(matches!(
            trivialize(&t("aaaaa", "b"), &cfg),
            Err(SearchError::StartExceedsCap { .. })
        ));
        assert!(matches!(
            trivialize(&t("a", "b"), &SearchConfig::new(4, 0)),
            Err(SearchError::ZeroBudget)
        ));

        // det 0: never reaches (a, b), and the capped component is finite
        let out = trivialize(&t("a", "a"), &SearchConfig::new(3, 1_000_000)).unwrap();
        assert!(matches!(out, SearchOutcome::Exhausted { .. }));
        let out = trivialize(&t("a", "a"), &SearchConfig::new(6, 5)).unwrap();
        assert_eq!(out, SearchOutcome::BudgetExhausted { states: 5 });

        // every strategy must notice exhaustion, not deepen forever
        for s in [Strategy::Bfs, Strategy::Iddfs, Strategy::Bidirectional] {
            for d in [Dedup::Exact, Dedup::Orbit] {
                let cfg = SearchConfig::new(7, 10_000_000).with_strategy(s).with_dedup(d);
                let out = trivialize(&t("abA", "aab"), &cfg).unwrap();
                assert!(matches!(out, SearchOutcome::Exhausted { .. }), "{s} {d}");
            }
        }
    }

    #[test]
    fn strategies_agree_on_length() {
        let start = t("abA", "bab");
        let mut lens = Vec::new();
        for s in [Strategy::Bfs, Strategy::Iddfs, Strategy::Bidirectional] {
            let cfg = SearchConfig::new(8, 1_000_000).with_strategy(s);
            let out = trivialize(&start, &cfg).unwrap();
            let cert = out.certificate().expect("reachable");
            assert!(cert.verify());
            lens.push(cert.moves.len());
        }
        assert!(lens.iter().all(|&l| l == lens[0]), "{lens:?}");
    }

    #[test]
    fn bfs_and_iddfs_pick_the_same_path() {
        let start = t("Bab", "aab");
        let bfs = trivialize(&start, &SearchConfig::new(8, 1_000_000)).unwrap();
        let dfs = trivialize(&start, &SearchConfig::new(8, 1_000_000).with_strategy(Strategy::Iddfs)).unwrap();
        assert_eq!(bfs.certificate().unwrap().moves, dfs.certificate().unwrap().moves);
    }

    #[test]
    fn orbit_dedup_finds_paths() {
        for s in [Strategy::Bfs, Strategy::Iddfs, Strategy::Bidirectional] {
            let cfg = SearchConfig::new(7, 1_000_000)
                .with_strategy(s)
                .with_dedup(Dedup::Orbit);
            let out = trivialize(&t("BA", "aab"), &cfg).unwrap();
            let cert = out.certificate().unwrap();
            assert!(cert.verify());
            assert_eq!(cert.end, t("a", "b"));
            assert_eq!(cert.dedup, Dedup::Orbit);
        }
    }

    #[test]
    fn normalizing_moves_realize_signed_permutations() {
        let from = Tuple::parse(&["ab", "c", "Ba"], 3).unwrap();
        let to = Tuple::parse(&["Ab", "ab", "C"], 3).unwrap();
        let ms = normalizing_moves(&from, &to).unwrap();
        let seq = MoveSequence::new(3, ms).unwrap();
        assert_eq!(seq.apply(&from).unwrap(), to);
        assert!(normalizing_moves(&from, &Tuple::parse(&["a", "c", "Ba"], 3).unwrap()).is_none());
    }

    #[test]
    fn certificates_verify_and_round_trip() {
        let cfg = SearchConfig::new(4, 1000);
        let out = trivialize(&t("ab", "b"), &cfg).unwrap();
        let cert = out.certificate().unwrap().clone();
        assert!(cert.verify());
        let text = cert.to_text();
        assert!(text.trim_end().ends_with("# end: (a, b)"));
        assert_eq!(PathCertificate::parse(&text).unwrap(), cert);

        let mut tampered = cert.clone();
        tampered.end = t("a", "B");
        assert!(!tampered.verify());

        let s = MoveSequence::new(
            2,
            vec![
                Move::R {
                    i: 2,
                    j: 1,
                    sign: Sign::Plus,
                },
                Move::I { i: 1 },
            ],
        )
        .unwrap();
        let start = t("ab", "A");
        let round = PathCertificate {
            start: start.clone(),
            moves: s.concat(&s.inverse()),
            end: start.clone(),
            dedup: Dedup::Exact,
            seed: 0,
        };
        assert!(round.verify());
    }

    #[test]
    fn candidate_enumeration() {
        let c = candidate_pairs(2);
        assert_eq!(c.len(), 8);
        assert_eq!(c[0], t("a", "b"));
        assert!(c.contains(&t("b", "a")) && c.contains(&t("A", "b")));
        assert_eq!(words_up_to(2, 3).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn classify_small() {
        let cfg = ClassifyConfig {
            enum_cap: 2,
            search_cap: 3,
            node_budget: 1_000_000,
        };
        let ClassifyOutcome::Complete(rep) = classify(&cfg).unwrap() else {
            panic!()
        };
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].size, 8);
        assert_eq!(rep.components[0].representative, t("a", "b"));

        let cfg = ClassifyConfig {
            enum_cap: 4,
            search_cap: 6,
            node_budget: 10_000_000,
        };
        let ClassifyOutcome::Complete(rep) = classify(&cfg).unwrap() else {
            panic!()
        };
        assert_eq!(rep.component_of(&t("ab", "b")), Some(rep.trivial_component));

        let bad = ClassifyConfig {
            enum_cap: 5,
            search_cap: 4,
            node_budget: 10,
        };
        assert!(matches!(classify(&bad), Err(SearchError::InconsistentCaps { .. })));
        let tiny = ClassifyConfig {
            enum_cap: 2,
            search_cap: 3,
            node_budget: 3,
        };
        assert!(matches!(
            classify(&tiny).unwrap(),
            ClassifyOutcome::BudgetExhausted { .. }
        ));
    }
}
