//! Exhaustive left-to-right search over colorings of H_n.
//!
//! Points are colored in order. When point `j` is placed, every interval
//! ending at `j` is complete: no later placement changes its colors. So a
//! prefix is checked only on the intervals ending at its last point, and a
//! prefix that fails there can never be extended to a valid coloring.
//!
//! Colors are canonical: a color may be used only if every smaller color
//! already appears, which removes the `m!` relabelings of each coloring.
//!
//! The tree is split at a fixed depth into ordered subtrees. Subtrees are
//! searched in parallel in chunks and merged in preorder, so the value, the
//! node count and the witness are the same for any number of worker threads.
//! A node cap is honored exactly: the subtree in which a sequential search
//! would run out is searched again sequentially with the remaining budget.
//! Only the wall-clock cap can make two runs differ.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::construct::construct;
use crate::error::{Error, Result};
use crate::verify::Mode;

/// Depth at which the tree is cut into independently searched subtrees.
const SPLIT_DEPTH: usize = 6;
/// Deepest prefix the search will build. Far above any reachable instance.
const MAX_DEPTH: usize = 1 << 16;
const CLOCK_STRIDE: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Most prefixes a single search may visit.
    pub max_nodes: u64,
    /// Wall-clock budget per search.
    pub max_time: Option<Duration>,
    /// Search subtrees on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 1_000_000_000,
            max_time: Some(Duration::from_secs(600)),
            parallel: true,
        }
    }
}

impl SearchLimits {
    pub fn sequential(self) -> Self {
        SearchLimits {
            parallel: false,
            ..self
        }
    }

    pub fn with_max_nodes(self, max_nodes: u64) -> Self {
        SearchLimits { max_nodes, ..self }
    }
}

/// Outcome of [`oracle_max_points`]. When `exhausted` is false the search hit
/// a cap and `value` is only a lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub value: usize,
    pub witness: Option<Coloring>,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub exhausted: bool,
}

/// Outcome of [`oracle_min_colors`]. The optimum lies in `[lower, upper]`;
/// `exhausted` means the bracket is closed and certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinColorsResult {
    pub lower: usize,
    pub upper: usize,
    pub witness: Coloring,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    pub exhausted: bool,
}

impl MinColorsResult {
    /// The certified optimum, if the bracket is closed.
    pub fn value(&self) -> Option<usize> {
        (self.exhausted && self.lower == self.upper).then_some(self.lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// Find the deepest valid prefix.
    Deepest,
    /// Stop at the first valid prefix of this length.
    Reach(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Budget,
    Clock,
}

#[derive(Debug, Clone, Default)]
struct Outcome {
    best: usize,
    witness: Vec<Color>,
    nodes: u64,
    found: bool,
    stopped: Option<Stop>,
}

impl Outcome {
    fn stopped(&self) -> Option<Stop> {
        self.stopped
    }
}

/// Ordered pieces of the tree above and at the split depth.
#[derive(Debug, Clone)]
enum Piece {
    /// A valid prefix of length at most the split depth.
    Node(Vec<Color>),
    /// Everything strictly below this split-depth prefix.
    Subtree(Vec<Color>),
}

struct Dfs {
    k: usize,
    palette: Color,
    mode: Mode,
    goal: Goal,
    seq: Vec<Color>,
    counts: Vec<u32>,
    budget: u64,
    deadline: Option<Instant>,
    split_at: Option<usize>,
    pieces: Vec<Piece>,
    out: Outcome,
}

impl Dfs {
    fn new(k: usize, palette: Color, mode: Mode, goal: Goal, budget: u64, deadline: Option<Instant>) -> Self {
        Dfs {
            k,
            palette,
            mode,
            goal,
            seq: Vec::new(),
            counts: vec![0; palette as usize + 1],
            budget,
            deadline,
            split_at: None,
            pieces: Vec::new(),
            out: Outcome::default(),
        }
    }

    /// Whether appending `c` keeps every interval ending at the new point
    /// valid.
    fn placement_ok(&mut self, c: Color) -> bool {
        let k = self.k;
        let mut unique = 0usize;
        let mut light = 0usize;
        let mut ok = true;
        let mut touched = 0;
        let colors = std::iter::once(c).chain(self.seq.iter().rev().copied());
        for (len, x) in colors.enumerate().map(|(i, x)| (i + 1, x)) {
            touched = len;
            let cnt = &mut self.counts[x as usize];
            *cnt += 1;
            match *cnt {
                1 => unique += 1,
                2 => unique -= 1,
                _ => {}
            }
            if *cnt == 1 {
                light += 1;
            } else if *cnt as usize == k + 1 {
                light -= 1;
            }
            let holds = match self.mode {
                Mode::Kscf => unique >= k.min(len),
                Mode::Kcf => light > 0,
            };
            if !holds {
                ok = false;
                break;
            }
        }
        self.counts[c as usize] = 0;
        for &x in self.seq.iter().rev().take(touched.saturating_sub(1)) {
            self.counts[x as usize] = 0;
        }
        ok
    }

    fn admit(&mut self) -> bool {
        if self.out.nodes >= self.budget {
            self.out.stopped = Some(Stop::Budget);
            return false;
        }
        self.out.nodes += 1;
        if self.out.nodes % CLOCK_STRIDE == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.out.stopped = Some(Stop::Clock);
                    return false;
                }
            }
        }
        true
    }

    /// Explores below the current prefix. Returns true when the search must
    /// stop (goal reached or a cap hit).
    fn visit(&mut self, max_used: Color) -> bool {
        let depth = self.seq.len();
        if let Some(split) = self.split_at {
            if depth > 0 {
                self.pieces.push(Piece::Node(self.seq.clone()));
            }
            if depth == split {
                self.pieces.push(Piece::Subtree(self.seq.clone()));
                return false;
            }
        }
        match self.goal {
            Goal::Deepest => {
                if depth > self.out.best {
                    self.out.best = depth;
                    self.out.witness = self.seq.clone();
                }
            }
            Goal::Reach(n) => {
                if depth == n {
                    self.out.best = depth;
                    self.out.found = true;
                    self.out.witness = self.seq.clone();
                    return true;
                }
            }
        }
        if depth >= MAX_DEPTH {
            return false;
        }
        let top = (max_used + 1).min(self.palette);
        for c in 1..=top {
            if !self.placement_ok(c) {
                continue;
            }
            if self.split_at.is_none() && !self.admit() {
                return true;
            }
            self.seq.push(c);
            let stop = self.visit(max_used.max(c));
            self.seq.pop();
            if stop {
                return true;
            }
        }
        false
    }

    fn run_from(mut self, prefix: &[Color]) -> Outcome {
        self.seq = prefix.to_vec();
        let max_used = prefix.iter().copied().max().unwrap_or(0);
        self.visit(max_used);
        self.out
    }
}

/// Searches with the given goal, merging split subtrees in preorder.
fn search(
    k: usize,
    palette: Color,
    mode: Mode,
    goal: Goal,
    limits: &SearchLimits,
    deadline: Option<Instant>,
) -> Outcome {
    let fresh = |budget: u64| Dfs::new(k, palette, mode, goal, budget, deadline);
    if !limits.parallel {
        return fresh(limits.max_nodes).run_from(&[]);
    }

    let mut splitter = fresh(u64::MAX);
    splitter.split_at = Some(SPLIT_DEPTH);
    let pieces = {
        splitter.visit(0);
        std::mem::take(&mut splitter.pieces)
    };

    let mut out = Outcome::default();
    let chunk = rayon::current_num_threads().max(1);
    let mut i = 0;
    while i < pieces.len() {
        if let Piece::Node(prefix) = &pieces[i] {
            if out.nodes >= limits.max_nodes {
                out.stopped = Some(Stop::Budget);
                return out;
            }
            out.nodes += 1;
            match goal {
                Goal::Deepest if prefix.len() > out.best => {
                    out.best = prefix.len();
                    out.witness = prefix.clone();
                }
                Goal::Reach(n) if prefix.len() == n => {
                    out.best = n;
                    out.found = true;
                    out.witness = prefix.clone();
                    return out;
                }
                _ => {}
            }
            i += 1;
            continue;
        }
        // A run of consecutive subtrees, searched together.
        let mut j = i;
        while j < pieces.len() && j - i < chunk && matches!(pieces[j], Piece::Subtree(_)) {
            j += 1;
        }
        let results: Vec<Outcome> = pieces[i..j]
            .par_iter()
            .map(|piece| match piece {
                Piece::Subtree(prefix) => fresh(limits.max_nodes).run_from(prefix),
                Piece::Node(_) => unreachable!("chunk holds subtrees only"),
            })
            .collect();
        for (piece, mut r) in pieces[i..j].iter().zip(results) {
            let remaining = limits.max_nodes - out.nodes;
            if r.nodes > remaining || r.stopped() == Some(Stop::Budget) {
                let Piece::Subtree(prefix) = piece else {
                    unreachable!("chunk holds subtrees only")
                };
                r = fresh(remaining).run_from(prefix);
            }
            out.nodes += r.nodes;
            match goal {
                Goal::Deepest => {
                    if r.best > out.best {
                        out.best = r.best;
                        out.witness = r.witness;
                    }
                }
                Goal::Reach(_) => {
                    if r.found {
                        out.best = r.best;
                        out.found = true;
                        out.witness = r.witness;
                        return out;
                    }
                }
            }
            if r.stopped.is_some() {
                out.stopped = r.stopped;
                return out;
            }
        }
        i = j;
    }
    out
}

fn check_args(k: usize, palette: usize) -> Result<Color> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if palette == 0 {
        return Err(Error::domain("color budget must be at least 1"));
    }
    Color::try_from(palette)
        .ok()
        .filter(|&p| p < Color::MAX)
        .ok_or_else(|| Error::domain(format!("color budget {palette} too large")))
}

/// Largest n such that H_n has a coloring with at most `m` colors satisfying
/// `mode` with parameter `k`.
pub fn oracle_max_points(k: usize, m: usize, mode: Mode, limits: &SearchLimits) -> Result<SearchResult> {
    let palette = check_args(k, m)?;
    let start = Instant::now();
    let deadline = limits.max_time.map(|t| start + t);
    let out = search(k, palette, mode, Goal::Deepest, limits, deadline);
    Ok(SearchResult {
        value: out.best,
        witness: (!out.witness.is_empty()).then(|| Coloring::from_vec_unchecked(out.witness)),
        nodes_explored: out.nodes,
        elapsed: start.elapsed(),
        exhausted: out.stopped.is_none(),
    })
}

/// Whether H_n has a valid coloring with at most `m` colors. `None` when a
/// cap stopped the search first.
pub fn oracle_feasible(
    n: usize,
    k: usize,
    m: usize,
    mode: Mode,
    limits: &SearchLimits,
) -> Result<(Option<Coloring>, u64, bool)> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    let palette = check_args(k, m)?;
    let deadline = limits.max_time.map(|t| Instant::now() + t);
    let out = search(k, palette, mode, Goal::Reach(n), limits, deadline);
    let witness = out.found.then(|| Coloring::from_vec_unchecked(out.witness));
    Ok((witness, out.nodes, out.stopped.is_none()))
}

/// Fewest colors of a valid coloring of H_n. The deterministic construction
/// for `mode` supplies the upper end of the bracket.
pub fn oracle_min_colors(n: usize, k: usize, mode: Mode, limits: &SearchLimits) -> Result<MinColorsResult> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    let built = construct(n, k, mode)?;
    let used = built.coloring.colors_used();
    oracle_min_colors_with_hint(n, k, mode, limits, (used, built.coloring))
}

/// Fewest colors of a valid coloring of H_n, by trying `m = 1, 2, ...`.
///
/// `upper_hint` is a color count known to be achievable (from a
/// construction) together with its coloring; it closes the bracket if a cap
/// stops the search early.
pub fn oracle_min_colors_with_hint(
    n: usize,
    k: usize,
    mode: Mode,
    limits: &SearchLimits,
    upper_hint: (usize, Coloring),
) -> Result<MinColorsResult> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    let start = Instant::now();
    let (hint_colors, hint) = upper_hint;
    let mut nodes = 0u64;
    let mut m = 1;
    loop {
        let remaining = SearchLimits {
            max_nodes: limits.max_nodes.saturating_sub(nodes),
            max_time: limits.max_time.map(|t| t.saturating_sub(start.elapsed())),
            ..*limits
        };
        let (witness, used, exhausted) = oracle_feasible(n, k, m, mode, &remaining)?;
        nodes += used;
        if let Some(witness) = witness {
            return Ok(MinColorsResult {
                lower: m,
                upper: m,
                witness,
                nodes_explored: nodes,
                elapsed: start.elapsed(),
                exhausted: true,
            });
        }
        if !exhausted || m >= hint_colors {
            // Either a cap hit, or the hint is not actually achievable.
            if exhausted {
                return Err(Error::integrity(format!(
                    "search found no coloring with {m} colors but a construction uses {hint_colors}"
                )));
            }
            return Ok(MinColorsResult {
                lower: m,
                upper: hint_colors,
                witness: hint,
                nodes_explored: nodes,
                elapsed: start.elapsed(),
                exhausted: false,
            });
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify;

    fn seq() -> SearchLimits {
        SearchLimits::default().sequential()
    }

    #[test]
    fn tiny_values() {
        let r = oracle_max_points(1, 1, Mode::Kscf, &seq()).unwrap();
        assert_eq!((r.value, r.exhausted), (1, true));
        assert_eq!(r.witness.unwrap().as_slice(), &[1]);
        assert_eq!(oracle_max_points(1, 3, Mode::Kcf, &seq()).unwrap().value, 7);
        assert_eq!(oracle_max_points(2, 2, Mode::Kcf, &seq()).unwrap().value, 8);
    }

    #[test]
    fn witnesses_verify_and_are_canonical() {
        for (k, m, mode) in [(2, 4, Mode::Kscf), (3, 5, Mode::Kscf), (1, 3, Mode::Kcf)] {
            let r = oracle_max_points(k, m, mode, &seq()).unwrap();
            let w = r.witness.unwrap();
            assert_eq!(w.len(), r.value);
            assert!(verify(&w, mode.predicate(), k).unwrap().ok());
            let mut seen = 0;
            for &c in w.as_slice() {
                assert!(c <= seen + 1);
                seen = seen.max(c);
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for (k, m, mode) in [
            (2, 5, Mode::Kscf),
            (3, 6, Mode::Kscf),
            (1, 3, Mode::Kcf),
            (4, 6, Mode::Kscf),
        ] {
            let a = oracle_max_points(k, m, mode, &seq()).unwrap();
            let b = oracle_max_points(k, m, mode, &SearchLimits::default()).unwrap();
            assert_eq!(
                (a.value, &a.witness, a.nodes_explored),
                (b.value, &b.witness, b.nodes_explored)
            );
        }
    }

    #[test]
    fn node_cap_is_exact_in_both_paths() {
        let full = oracle_max_points(2, 5, Mode::Kscf, &seq()).unwrap();
        for cap in [1, 5, 37, full.nodes_explored / 2, full.nodes_explored - 1] {
            let a = oracle_max_points(2, 5, Mode::Kscf, &seq().with_max_nodes(cap)).unwrap();
            let b = oracle_max_points(2, 5, Mode::Kscf, &SearchLimits::default().with_max_nodes(cap)).unwrap();
            assert!(!a.exhausted);
            assert_eq!(a.nodes_explored, cap);
            assert_eq!(
                a,
                SearchResult {
                    elapsed: a.elapsed,
                    ..b
                }
            );
        }
        let a = oracle_max_points(2, 5, Mode::Kscf, &seq().with_max_nodes(full.nodes_explored)).unwrap();
        assert!(a.exhausted);
        assert_eq!(a.value, 12);
    }

    /// A prefix rejected by the incremental check has no valid extension:
    /// cross-checked by brute force over all 3-colorings of length 6.
    #[test]
    fn pruning_is_sound() {
        use itertools::Itertools;
        for (k, mode) in [(1, Mode::Kcf), (2, Mode::Kscf), (2, Mode::Kcf)] {
            for len in 1..=6 {
                for colors in (0..len).map(|_| 1..=3u32).multi_cartesian_product() {
                    let mut dfs = Dfs::new(k, 3, mode, Goal::Deepest, u64::MAX, None);
                    let mut accepted = true;
                    for &c in &colors {
                        if !dfs.placement_ok(c) {
                            accepted = false;
                            break;
                        }
                        dfs.seq.push(c);
                    }
                    let whole = verify(&Coloring::new(colors.clone()).unwrap(), mode.predicate(), k).unwrap();
                    assert_eq!(accepted, whole.ok(), "{colors:?} k={k} {mode}");
                }
            }
        }
    }

    #[test]
    fn feasibility_and_min_colors() {
        let (w, _, exhausted) = oracle_feasible(5, 3, 3, Mode::Kscf, &seq()).unwrap();
        assert!(w.is_none() && exhausted);
        let (w, _, _) = oracle_feasible(5, 3, 4, Mode::Kscf, &seq()).unwrap();
        assert_eq!(w.unwrap().len(), 5);

        let hint = (5, "1,2,3,4,5".parse().unwrap());
        let r = oracle_min_colors_with_hint(5, 3, Mode::Kscf, &seq(), hint.clone()).unwrap();
        assert_eq!(r.value(), Some(4));

        let capped = oracle_min_colors_with_hint(5, 3, Mode::Kscf, &seq().with_max_nodes(3), hint).unwrap();
        assert!(!capped.exhausted);
        assert_eq!(capped.value(), None);
        assert!(capped.lower <= 4 && capped.upper == 5);

        assert_eq!(oracle_min_colors(15, 3, Mode::Kcf, &seq()).unwrap().value(), Some(2));
        assert_eq!(oracle_min_colors(1, 1, Mode::Kscf, &seq()).unwrap().value(), Some(1));
        assert_eq!(oracle_min_colors(1, 1, Mode::Kcf, &seq()).unwrap().value(), Some(1));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(oracle_max_points(1, 0, Mode::Kscf, &seq()).is_err());
        assert!(oracle_max_points(0, 2, Mode::Kscf, &seq()).is_err());
        assert!(oracle_feasible(0, 1, 1, Mode::Kcf, &seq()).is_err());
    }
}
