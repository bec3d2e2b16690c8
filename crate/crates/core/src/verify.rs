//! Deciders for the coloring predicates on H_n.
//!
//! Each decider sweeps every left endpoint and extends the right endpoint one
//! point at a time, keeping color counts incrementally, so a full check costs
//! O(n^2) after an O(n log n) color compaction. The first failing interval in
//! `(lo, hi)` order is reported.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Interval;

/// Which coloring property to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    /// Every interval has a color occurring between 1 and k times.
    Kcf,
    /// Every interval of size >= k has k uniquely occurring colors; shorter
    /// intervals are rainbow.
    Kscf,
    /// Every interval of size >= k+1 sees at least two colors.
    Kpnm,
}

impl Predicate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Predicate::Kcf => "kcf",
            Predicate::Kscf => "kscf",
            Predicate::Kpnm => "kpnm",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kcf" => Ok(Predicate::Kcf),
            "kscf" => Ok(Predicate::Kscf),
            "kpnm" => Ok(Predicate::Kpnm),
            other => Err(Error::domain(format!("unknown predicate {other:?}"))),
        }
    }
}

/// The two coloring families that constructions and the exact search target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Kscf,
    Kcf,
}

impl Mode {
    pub fn predicate(self) -> Predicate {
        match self {
            Mode::Kscf => Predicate::Kscf,
            Mode::Kcf => Predicate::Kcf,
        }
    }

    pub fn as_str(self) -> &'static str {
        self.predicate().as_str()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kscf" => Ok(Mode::Kscf),
            "kcf" => Ok(Mode::Kcf),
            other => Err(Error::domain(format!("unknown mode {other:?}"))),
        }
    }
}

/// Outcome of a check. `violation` is the smallest failing interval in
/// `(lo, hi)` order; `detail` lists `(color, count)` on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub violation: Option<Interval>,
    pub detail: Vec<(Color, usize)>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            violation: None,
            detail: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }

    pub fn report(&self, coloring: &Coloring) -> VerdictReport {
        VerdictReport {
            ok: self.ok(),
            violation: self.violation,
            colors_used: coloring.colors_used(),
        }
    }
}

/// JSON shape of a verdict: `{"ok": bool, "violation": [lo, hi] | null, "colors_used": int}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub ok: bool,
    pub violation: Option<Interval>,
    pub colors_used: usize,
}

/// Running tallies for one left endpoint.
struct Tally {
    counts: Vec<usize>,
    distinct: usize,
    unique: usize,
    light: usize,
    k: usize,
}

impl Tally {
    fn new(palette: usize, k: usize) -> Self {
        Tally {
            counts: vec![0; palette],
            distinct: 0,
            unique: 0,
            light: 0,
            k,
        }
    }

    fn reset(&mut self) {
        self.counts.fill(0);
        self.distinct = 0;
        self.unique = 0;
        self.light = 0;
    }

    fn push(&mut self, c: usize) {
        let cnt = &mut self.counts[c];
        *cnt += 1;
        match *cnt {
            1 => {
                self.distinct += 1;
                self.unique += 1;
            }
            2 => self.unique -= 1,
            _ => {}
        }
        if *cnt == 1 {
            self.light += 1;
        } else if *cnt == self.k + 1 {
            self.light -= 1;
        }
    }

    fn holds(&self, pred: Predicate, len: usize) -> bool {
        match pred {
            Predicate::Kcf => self.light > 0,
            Predicate::Kscf => self.unique >= self.k.min(len),
            Predicate::Kpnm => len <= self.k || self.distinct >= 2,
        }
    }
}

/// Maps colors onto `0..palette` preserving order.
fn compact(colors: &[Color]) -> (Vec<usize>, usize) {
    let mut palette: Vec<Color> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let dense = colors
        .iter()
        .map(|c| palette.binary_search(c).expect("color present in palette"))
        .collect();
    (dense, palette.len())
}

fn detail_of(colors: &[Color]) -> Vec<(Color, usize)> {
    let mut counts = BTreeMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

/// Decides `pred` with parameter `k` over every interval of H_n.
pub fn verify(c: &Coloring, pred: Predicate, k: usize) -> Result<Verdict> {
    if c.is_empty() {
        return Err(Error::EmptyDomain("cannot verify an empty coloring"));
    }
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let colors = c.as_slice();
    let (dense, palette) = compact(colors);
    let n = dense.len();
    let mut tally = Tally::new(palette, k);
    for lo in 0..n {
        tally.reset();
        for hi in lo..n {
            tally.push(dense[hi]);
            if !tally.holds(pred, hi - lo + 1) {
                return Ok(Verdict {
                    violation: Some(Interval::new(lo + 1, hi + 1)?),
                    detail: detail_of(&colors[lo..=hi]),
                });
            }
        }
    }
    Ok(Verdict::pass())
}

pub fn verify_kcf(c: &Coloring, k: usize) -> Result<Verdict> {
    verify(c, Predicate::Kcf, k)
}

pub fn verify_kscf(c: &Coloring, k: usize) -> Result<Verdict> {
    verify(c, Predicate::Kscf, k)
}

pub fn verify_kpnm(c: &Coloring, k: usize) -> Result<Verdict> {
    verify(c, Predicate::Kpnm, k)
}

/// Decides `pred` on the single hyperedge whose colors are `colors`.
pub fn edge_satisfies(colors: &[Color], pred: Predicate, k: usize) -> bool {
    let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
    for &c in colors {
        *counts.entry(c).or_insert(0) += 1;
    }
    let len = colors.len();
    match pred {
        Predicate::Kcf => counts.values().any(|&m| (1..=k).contains(&m)),
        Predicate::Kscf => {
            let unique = counts.values().filter(|&&m| m == 1).count();
            if len >= k {
                unique >= k
            } else {
                unique == len
            }
        }
        Predicate::Kpnm => len < k + 1 || counts.len() >= 2,
    }
}
