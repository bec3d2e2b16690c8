//! The interval hypergraph H_n on points `1..=n`, its induced sub-hypergraphs,
//! uniform restrictions, and insertion-order degeneracy.
//!
//! Points are abstract positions. Only their order matters, so an online
//! arrival sequence is a permutation of final positions.

use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which [`degeneracy_check`] enumerates every permutation.
pub const EXHAUSTIVE_DEGENERACY_CAP: usize = 8;

/// A hyperedge `{lo, ..., hi}` of H_n. Serialized as `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Interval {
    lo: usize,
    hi: usize,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn size(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, point: usize) -> bool {
        self.lo <= point && point <= self.hi
    }

    pub fn points(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl From<Interval> for [usize; 2] {
    fn from(e: Interval) -> Self {
        [e.lo, e.hi]
    }
}

impl TryFrom<[usize; 2]> for Interval {
    type Error = Error;

    fn try_from([lo, hi]: [usize; 2]) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A subset of `V_n`, kept strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn new(points: Vec<usize>) -> Result<Self> {
        if points.first() == Some(&0) {
            return Err(Error::domain("points are 1-based"));
        }
        if let Some((a, b)) = points.iter().tuple_windows().find(|(a, b)| a >= b) {
            return Err(Error::domain(format!(
                "point set must be strictly increasing, found {a} before {b}"
            )));
        }
        Ok(PointSet(points))
    }

    /// All of `1..=n`.
    pub fn full(n: usize) -> Self {
        PointSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, point: usize) -> bool {
        self.0.binary_search(&point).is_ok()
    }
}

impl TryFrom<Vec<usize>> for PointSet {
    type Error = Error;

    fn try_from(points: Vec<usize>) -> Result<Self> {
        PointSet::new(points)
    }
}

impl From<PointSet> for Vec<usize> {
    fn from(s: PointSet) -> Self {
        s.0
    }
}

/// An insertion order: `order[j]` is the position of the `(j+1)`-th arriving
/// point. Always a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Arrival(Vec<usize>);

impl Arrival {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n + 1];
        for &p in &order {
            if p == 0 || p > n {
                return Err(Error::domain(format!("arrival entry {p} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::domain(format!("arrival repeats point {p}")));
            }
        }
        Ok(Arrival(order))
    }

    pub fn identity(n: usize) -> Self {
        Arrival((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for Arrival {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Arrival::new(order)
    }
}

impl From<Arrival> for Vec<usize> {
    fn from(a: Arrival) -> Self {
        a.0
    }
}

/// Every hyperedge of H_n, ordered by `(lo, hi)`.
pub fn intervals(n: usize) -> Result<Vec<Interval>> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    Ok((1..=n)
        .flat_map(|lo| (lo..=n).map(move |hi| Interval { lo, hi }))
        .collect())
}

/// The size-`m` hyperedges of the sub-hypergraph induced by `set`: the runs of
/// `m` consecutive members of `set`, ordered by leftmost element.
pub fn induced_edges(set: &PointSet, m: usize) -> Result<Vec<PointSet>> {
    if m == 0 {
        return Err(Error::domain("edge size must be at least 1"));
    }
    Ok(set.as_slice().windows(m).map(|w| PointSet(w.to_vec())).collect())
}

/// Number of `(k+1)`-windows of a sorted sequence of length `len` that cover
/// index `idx`.
fn windows_covering(idx: usize, len: usize, k: usize) -> usize {
    let width = k + 1;
    if len < width {
        return 0;
    }
    let first = idx.saturating_sub(k);
    let last = idx.min(len - width);
    last + 1 - first
}

/// Number of hyperedges of size `k+1` in the sub-hypergraph induced by `set`
/// that contain `v`.
pub fn insertion_degree(set: &PointSet, v: usize, k: usize) -> Result<usize> {
    let idx = set
        .as_slice()
        .binary_search(&v)
        .map_err(|_| Error::domain(format!("point {v} is not in the set")))?;
    Ok(windows_covering(idx, set.len(), k))
}

/// Insertion degrees `d_k` of each arrival in turn.
fn arrival_degrees(order: &[usize], k: usize) -> impl Iterator<Item = usize> + '_ {
    let mut present: Vec<usize> = Vec::with_capacity(order.len());
    order.iter().map(move |&v| {
        let idx = present.partition_point(|&p| p < v);
        present.insert(idx, v);
        windows_covering(idx, present.len(), k)
    })
}

/// `S_k^pi(t)`: total insertion degree of the first `t` arrivals.
pub fn degeneracy_sum(arrival: &Arrival, k: usize, t: usize) -> Result<usize> {
    if t == 0 || t > arrival.len() {
        return Err(Error::domain(format!(
            "prefix length {t} outside 1..={}",
            arrival.len()
        )));
    }
    Ok(arrival_degrees(arrival.as_slice(), k).take(t).sum())
}

/// First prefix length `t` with `S_k^pi(t) > q t`.
fn first_violation(order: &[usize], k: usize, q: usize) -> Option<usize> {
    let mut sum = 0;
    for (j, d) in arrival_degrees(order, k).enumerate() {
        sum += d;
        if sum > q * (j + 1) {
            return Some(j + 1);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum DegeneracyMode {
    /// Every permutation, in lexicographic order.
    Exhaustive,
    /// `samples` uniformly random permutations from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyWitness {
    pub arrival: Arrival,
    pub t: usize,
    pub sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyVerdict {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub holds: bool,
    pub permutations_checked: usize,
    pub witness: Option<DegeneracyWitness>,
}

/// Checks whether H_n is `q`-degenerate of degree `k`, over all or a sample of
/// arrival orders.
pub fn degeneracy_check(n: usize, k: usize, q: usize, mode: DegeneracyMode) -> Result<DegeneracyVerdict> {
    degeneracy_check_with_cap(n, k, q, mode, EXHAUSTIVE_DEGENERACY_CAP)
}

pub fn degeneracy_check_with_cap(
    n: usize,
    k: usize,
    q: usize,
    mode: DegeneracyMode,
    exhaustive_cap: usize,
) -> Result<DegeneracyVerdict> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    if k == 0 {
        return Err(Error::domain("degree k must be at least 1"));
    }
    let mut checked = 0;
    let mut witness = None;
    let mut check = |order: Vec<usize>| -> bool {
        checked += 1;
        match first_violation(&order, k, q) {
            Some(t) => {
                let sum = arrival_degrees(&order, k).take(t).sum();
                witness = Some(DegeneracyWitness {
                    arrival: Arrival(order),
                    t,
                    sum,
                });
                false
            }
            None => true,
        }
    };
    match mode {
        DegeneracyMode::Exhaustive => {
            if n > exhaustive_cap {
                return Err(Error::Size {
                    what: "n",
                    got: n,
                    cap: exhaustive_cap,
                });
            }
            for order in (1..=n).permutations(n) {
                if !check(order) {
                    break;
                }
            }
        }
        DegeneracyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let mut order: Vec<usize> = (1..=n).collect();
                order.shuffle(&mut rng);
                if !check(order) {
                    break;
                }
            }
        }
    }
    Ok(DegeneracyVerdict {
        n,
        k,
        q,
        holds: witness.is_none(),
        permutations_checked: checked,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(v: &[usize]) -> PointSet {
        PointSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn intervals_of_h4() {
        let got = intervals(4).unwrap();
        assert_eq!(got.len(), 10);
        let mut by_size = got.clone();
        by_size.sort_by_key(|e| (e.size(), e.lo()));
        let expected: Vec<(usize, usize)> = vec![
            (1, 1),
            (2, 2),
            (3, 3),
            (4, 4),
            (1, 2),
            (2, 3),
            (3, 4),
            (1, 3),
            (2, 4),
            (1, 4),
        ];
        let by_size: Vec<_> = by_size.iter().map(|e| (e.lo(), e.hi())).collect();
        assert_eq!(by_size, expected);
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn intervals_small_and_empty() {
        assert_eq!(intervals(1).unwrap(), vec![Interval::new(1, 1).unwrap()]);
        assert_eq!(intervals(6).unwrap().len(), 21);
        assert_eq!(intervals(0), Err(Error::EmptyDomain("H_0 has no points")));
    }

    #[test]
    fn induced_edge_examples() {
        assert_eq!(
            induced_edges(&ps(&[1, 3, 4]), 2).unwrap(),
            vec![ps(&[1, 3]), ps(&[3, 4])]
        );
        assert_eq!(
            induced_edges(&ps(&[1, 2, 3, 4]), 3).unwrap(),
            vec![ps(&[1, 2, 3]), ps(&[2, 3, 4])]
        );
        assert!(induced_edges(&ps(&[2, 5]), 3).unwrap().is_empty());
        assert!(induced_edges(&ps(&[2, 5]), 0).is_err());
    }

    #[test]
    fn insertion_degree_examples() {
        assert_eq!(insertion_degree(&ps(&[1, 2, 3]), 2, 1).unwrap(), 2);
        assert_eq!(insertion_degree(&ps(&[5]), 5, 1).unwrap(), 0);
        assert_eq!(insertion_degree(&ps(&[1, 2, 3, 4, 5]), 3, 2).unwrap(), 3);
        assert!(matches!(insertion_degree(&ps(&[1, 2]), 4, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn degeneracy_sum_examples() {
        assert_eq!(degeneracy_sum(&Arrival::identity(3), 1, 3).unwrap(), 2);
        let pi = Arrival::new(vec![2, 1, 3]).unwrap();
        assert_eq!(degeneracy_sum(&pi, 1, 3).unwrap(), 2);
        assert_eq!(degeneracy_sum(&pi, 1, 1).unwrap(), 0);
        assert!(degeneracy_sum(&pi, 1, 0).is_err());
        assert!(degeneracy_sum(&pi, 1, 4).is_err());
    }

    #[test]
    fn degeneracy_check_examples() {
        let v = degeneracy_check(7, 1, 2, DegeneracyMode::Exhaustive).unwrap();
        assert!(v.holds);
        assert_eq!(v.permutations_checked, 5040);

        let v = degeneracy_check(7, 1, 0, DegeneracyMode::Exhaustive).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.t, 2);
        assert_eq!(w.arrival, Arrival::identity(7));

        assert!(degeneracy_check(8, 2, 3, DegeneracyMode::Exhaustive).unwrap().holds);
    }

    #[test]
    fn exhaustive_cap_is_enforced() {
        let err = degeneracy_check(9, 1, 2, DegeneracyMode::Exhaustive).unwrap_err();
        assert!(matches!(err, Error::Size { got: 9, cap: 8, .. }));
        assert!(degeneracy_check_with_cap(3, 1, 2, DegeneracyMode::Exhaustive, 2).is_err());
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let mode = DegeneracyMode::Sampled { samples: 50, seed: 11 };
        let a = degeneracy_check(30, 1, 1, mode).unwrap();
        let b = degeneracy_check(30, 1, 1, mode).unwrap();
        assert_eq!(a, b);
        assert!(!a.holds);
        assert!(degeneracy_check(30, 2, 3, mode).unwrap().holds);
    }

    #[test]
    fn rejects_bad_domain_objects() {
        assert!(Interval::new(0, 1).is_err());
        assert!(Interval::new(3, 2).is_err());
        assert!(PointSet::new(vec![1, 1]).is_err());
        assert!(PointSet::new(vec![0, 1]).is_err());
        assert!(Arrival::new(vec![1, 3]).is_err());
        assert!(Arrival::new(vec![2, 2]).is_err());
    }
}
