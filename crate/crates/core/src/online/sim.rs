use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::hypergraph::Arrival;

/// Stream reserved for strategy choices, distinct from arrival shuffles.
pub(crate) const STRATEGY_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// Smallest safe color.
    FirstFit,
    /// Uniform among safe colors in `1..=max_used+1`.
    RandomFit,
}

impl StrategyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::FirstFit => "first-fit",
            StrategyKind::RandomFit => "random-fit",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first-fit" => Ok(StrategyKind::FirstFit),
            "random-fit" => Ok(StrategyKind::RandomFit),
            other => Err(Error::domain(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    pub k: usize,
    /// Required by random-fit, ignored by first-fit.
    pub seed: Option<u64>,
    /// Largest color the strategy may use.
    pub palette_cap: Option<Color>,
}

impl StrategyConfig {
    pub fn first_fit(k: usize) -> Self {
        StrategyConfig {
            kind: StrategyKind::FirstFit,
            k,
            seed: None,
            palette_cap: None,
        }
    }

    pub fn random_fit(k: usize, seed: u64) -> Self {
        StrategyConfig {
            kind: StrategyKind::RandomFit,
            k,
            seed: Some(seed),
            palette_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::domain("k must be at least 1"));
        }
        if self.kind == StrategyKind::RandomFit && self.seed.is_none() {
            return Err(Error::domain("random-fit needs a seed"));
        }
        if self.palette_cap == Some(0) {
            return Err(Error::domain("palette cap must be positive"));
        }
        Ok(())
    }
}

/// One online run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub arrival: Arrival,
    pub strategy: StrategyConfig,
    pub coloring: Coloring,
    pub colors_used: usize,
    /// Number of safe colors in `1..=max_used+1` at each arrival.
    pub safe_set_sizes: Vec<usize>,
    /// Degeneracy used for the reference curve, `k + 1`.
    pub q: usize,
    /// `log_{1+1/(4q+1)} n`.
    pub bound: f64,
}

/// Reference curve `log_{1+1/(4q+1)} n`.
pub fn reference_bound(n: usize, q: usize) -> f64 {
    (n as f64).ln() / (1.0 + 1.0 / (4.0 * q as f64 + 1.0)).ln()
}

/// The points present so far, in positional order.
struct Config {
    points: Vec<usize>,
    colors: Vec<Color>,
    k: usize,
    counts: Vec<usize>,
    forbidden: Vec<bool>,
}

impl Config {
    fn new(k: usize, n: usize) -> Self {
        Config {
            points: Vec::with_capacity(n),
            colors: Vec::with_capacity(n),
            k,
            counts: vec![0; 2],
            forbidden: vec![false; 2],
        }
    }

    /// Marks every color whose use at slot `idx` would leave some run of
    /// present points through `idx` without a light color (count in
    /// `1..=k`). Removing the newcomer from such a run leaves a run of the
    /// previous configuration, which had a light color; the newcomer can
    /// only break it when that light color `c` is the sole one, has count
    /// exactly `k`, and is reused.
    fn mark_forbidden(&mut self, idx: usize, max_color: Color) {
        let palette = max_color as usize + 2;
        if self.counts.len() < palette {
            self.counts.resize(palette, 0);
            self.forbidden.resize(palette, false);
        }
        self.forbidden[..palette].fill(false);
        let k = self.k;
        let cols = &self.colors;
        let counts = &mut self.counts;
        let t = cols.len();
        let (mut light, mut light_sum) = (0usize, 0usize);
        // left part cols[a..idx], grown one point at a time
        for a in (0..=idx).rev() {
            if a < idx {
                add(counts, cols[a] as usize, k, &mut light, &mut light_sum);
            }
            let (base_light, base_sum) = (light, light_sum);
            for b in idx..=t {
                if b > idx {
                    add(counts, cols[b - 1] as usize, k, &mut light, &mut light_sum);
                }
                if light == 1 && counts[light_sum] == k {
                    self.forbidden[light_sum] = true;
                }
            }
            for b in idx..t {
                counts[cols[b] as usize] -= 1;
            }
            light = base_light;
            light_sum = base_sum;
        }
        for a in 0..idx {
            counts[cols[a] as usize] -= 1;
        }
        debug_assert!(counts.iter().all(|&c| c == 0));
    }
}

/// Adds one occurrence of `c`, maintaining the number and sum of light colors.
#[inline]
fn add(counts: &mut [usize], c: usize, k: usize, light: &mut usize, light_sum: &mut usize) {
    counts[c] += 1;
    if counts[c] == 1 {
        *light += 1;
        *light_sum += c;
    } else if counts[c] == k + 1 {
        *light -= 1;
        *light_sum -= c;
    }
}

/// Colors points irrevocably in arrival order. Every prefix configuration
/// stays k-CF over the present points, so the final coloring is k-CF for H_n.
pub fn online_color(arrival: &Arrival, strategy: &StrategyConfig) -> Result<TrialReport> {
    strategy.validate()?;
    let n = arrival.len();
    if n == 0 {
        return Err(Error::EmptyDomain("arrival order is empty"));
    }
    let mut rng = strategy.seed.map(|s| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        r.set_stream(STRATEGY_STREAM);
        r
    });
    let mut config = Config::new(strategy.k, n);
    let mut max_color: Color = 0;
    let mut safe_set_sizes = Vec::with_capacity(n);
    let mut safe = Vec::new();
    for &p in arrival.as_slice() {
        let idx = config.points.partition_point(|&q| q < p);
        config.mark_forbidden(idx, max_color);
        if config.forbidden[max_color as usize + 1] {
            return Err(Error::integrity(format!(
                "fresh color {} unsafe at point {p}",
                max_color + 1
            )));
        }
        safe.clear();
        safe.extend((1..=max_color + 1).filter(|&c| !config.forbidden[c as usize]));
        safe_set_sizes.push(safe.len());
        let allowed = match strategy.palette_cap {
            Some(cap) => safe.partition_point(|&c| c <= cap),
            None => safe.len(),
        };
        if allowed == 0 {
            return Err(Error::domain(format!(
                "no safe color within the palette cap at point {p}"
            )));
        }
        let c = match (strategy.kind, rng.as_mut()) {
            (StrategyKind::RandomFit, Some(r)) => safe[r.gen_range(0..allowed)],
            _ => safe[0],
        };
        config.points.insert(idx, p);
        config.colors.insert(idx, c);
        max_color = max_color.max(c);
    }
    let coloring = Coloring::from_vec_unchecked(config.colors);
    let q = strategy.k + 1;
    Ok(TrialReport {
        arrival: arrival.clone(),
        strategy: strategy.clone(),
        colors_used: coloring.colors_used(),
        coloring,
        safe_set_sizes,
        q,
        bound: reference_bound(n, q),
    })
}
