use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Arrival;

/// Stream reserved for shuffling arrival orders.
pub(crate) const ARRIVAL_STREAM: u64 = 0;

/// Arrival order families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrivalKind {
    Sorted,
    Reverse,
    /// Uniform permutation drawn from the seed.
    Random,
    /// Balanced bisection: each new point splits the largest gap.
    MidpointFirst,
    Custom(Arrival),
}

impl ArrivalKind {
    pub fn name(&self) -> &'static str {
        match self {
            ArrivalKind::Sorted => "sorted",
            ArrivalKind::Reverse => "reverse",
            ArrivalKind::Random => "random",
            ArrivalKind::MidpointFirst => "midpoint-first",
            ArrivalKind::Custom(_) => "custom",
        }
    }

    /// The four generated families, in report order.
    pub fn standard() -> [ArrivalKind; 4] {
        [
            ArrivalKind::Sorted,
            ArrivalKind::Reverse,
            ArrivalKind::Random,
            ArrivalKind::MidpointFirst,
        ]
    }
}

impl fmt::Display for ArrivalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrivalKind::Custom(a) => {
                let order: Vec<String> = a.as_slice().iter().map(|p| p.to_string()).collect();
                write!(f, "custom:{}", order.join(","))
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ArrivalKind {
    type Err = Error;

    /// `sorted`, `reverse`, `random`, `midpoint-first`, or `custom:3,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sorted" => Ok(ArrivalKind::Sorted),
            "reverse" => Ok(ArrivalKind::Reverse),
            "random" => Ok(ArrivalKind::Random),
            "midpoint-first" => Ok(ArrivalKind::MidpointFirst),
            _ => match s.strip_prefix("custom:") {
                Some(list) => {
                    let order = list
                        .split(',')
                        .map(|f| {
                            if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
                                return Err(Error::Parse(format!("bad point {f:?} in custom order")));
                            }
                            f.parse::<usize>()
                                .map_err(|e| Error::Parse(format!("bad point {f:?}: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(ArrivalKind::Custom(Arrival::new(order)?))
                }
                None => Err(Error::domain(format!("unknown arrival order {s:?}"))),
            },
        }
    }
}

/// Deterministic arrival order of `1..=n` for `kind` and `seed`.
pub fn generate_arrival(n: usize, kind: &ArrivalKind, seed: u64) -> Result<Arrival> {
    if n == 0 {
        return Err(Error::EmptyDomain("arrival orders need n >= 1"));
    }
    let order = match kind {
        ArrivalKind::Sorted => (1..=n).collect(),
        ArrivalKind::Reverse => (1..=n).rev().collect(),
        ArrivalKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ARRIVAL_STREAM);
            let mut order: Vec<usize> = (1..=n).collect();
            order.shuffle(&mut rng);
            order
        }
        ArrivalKind::MidpointFirst => midpoint_first(n),
        ArrivalKind::Custom(a) => {
            if a.len() != n {
                return Err(Error::domain(format!(
                    "custom order has {} points, expected {n}",
                    a.len()
                )));
            }
            return Ok(a.clone());
        }
    };
    Arrival::new(order)
}

fn midpoint_first(n: usize) -> Vec<usize> {
    // max-heap on gap length, ties to the leftmost gap
    let mut gaps = BinaryHeap::new();
    gaps.push((n, Reverse(1usize)));
    let mut order = Vec::with_capacity(n);
    while let Some((len, Reverse(lo))) = gaps.pop() {
        let hi = lo + len - 1;
        let mid = (lo + hi) / 2;
        order.push(mid);
        if mid > lo {
            gaps.push((mid - lo, Reverse(lo)));
        }
        if hi > mid {
            gaps.push((hi - mid, Reverse(mid + 1)));
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_orders() {
        let get = |n, k: ArrivalKind| generate_arrival(n, &k, 0).unwrap().as_slice().to_vec();
        assert_eq!(get(4, ArrivalKind::Sorted), vec![1, 2, 3, 4]);
        assert_eq!(get(4, ArrivalKind::Reverse), vec![4, 3, 2, 1]);
        assert_eq!(get(7, ArrivalKind::MidpointFirst), vec![4, 2, 6, 1, 3, 5, 7]);
        assert_eq!(get(1, ArrivalKind::MidpointFirst), vec![1]);
        assert_eq!(get(4, ArrivalKind::MidpointFirst), vec![2, 3, 1, 4]);
    }

    #[test]
    fn random_is_seeded() {
        let a = generate_arrival(50, &ArrivalKind::Random, 9).unwrap();
        let b = generate_arrival(50, &ArrivalKind::Random, 9).unwrap();
        let c = generate_arrival(50, &ArrivalKind::Random, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn midpoint_first_is_a_permutation() {
        for n in 1..200 {
            generate_arrival(n, &ArrivalKind::MidpointFirst, 0).unwrap();
        }
    }

    #[test]
    fn parse_kinds() {
        assert_eq!(
            "midpoint-first".parse::<ArrivalKind>().unwrap(),
            ArrivalKind::MidpointFirst
        );
        let custom: ArrivalKind = "custom:2,1,3".parse().unwrap();
        assert_eq!(custom.to_string(), "custom:2,1,3");
        assert_eq!(generate_arrival(3, &custom, 0).unwrap().as_slice(), &[2, 1, 3]);
        assert!(generate_arrival(4, &custom, 0).is_err());
        assert!("custom:1,1".parse::<ArrivalKind>().is_err());
        assert!("zigzag".parse::<ArrivalKind>().is_err());
        assert!(generate_arrival(0, &ArrivalKind::Sorted, 0).is_err());
    }
}
