//! 2-SCF colorings of length `F_{m+2} - 1` with `m` colors.
//!
//! `C_{m+1}` is `C_m`, then the fresh color `m+1`, then the first
//! `g_2(m-1)` entries of `C_m` read backwards under the exchange map `s_m`.
//! `s_m` pairs the colors of the tail `T_m` (everything after the unique `m`)
//! with the colors of `T_m` reversed, so the right half mirrors `C_m`.

use std::collections::BTreeMap;

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::formulas::g_scf_closed;

/// Largest color budget [`construct_2scf`] materializes (about 3.5M points).
pub const MAX_2SCF_COLORS: u32 = 32;

/// An involution on a finite set of colors; colors outside the table are
/// fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExchangeMap {
    mapping: BTreeMap<Color, Color>,
}

impl ExchangeMap {
    pub fn identity() -> Self {
        ExchangeMap::default()
    }

    /// Builds the map from `(from, to)` pairs, failing on any conflict or on a
    /// pair set that is not closed under swapping.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Color, Color)>) -> Result<Self> {
        let mut mapping = BTreeMap::new();
        for (from, to) in pairs {
            if let Some(prev) = mapping.insert(from, to) {
                if prev != to {
                    return Err(Error::integrity(format!(
                        "exchange map sends {from} to both {prev} and {to}"
                    )));
                }
            }
        }
        let map = ExchangeMap { mapping };
        for (&from, &to) in &map.mapping {
            if map.apply(to) != from {
                return Err(Error::integrity(format!(
                    "exchange map is not an involution at {from} -> {to}"
                )));
            }
        }
        Ok(map)
    }

    pub fn apply(&self, c: Color) -> Color {
        self.mapping.get(&c).copied().unwrap_or(c)
    }

    /// Colors moved by the map, as `(a, b)` with `a < b`.
    pub fn swaps(&self) -> Vec<(Color, Color)> {
        self.mapping
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(&a, &b)| (a, b))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.swaps().is_empty()
    }
}

/// The exchange map `s_m` of a step-`m` coloring (`m` = its largest color).
pub fn exchange_map_2scf(c: &Coloring) -> Result<ExchangeMap> {
    let colors = c.as_slice();
    let m = c.max_color();
    let mut top = colors.iter().enumerate().filter(|(_, &x)| x == m);
    let pos = match (top.next(), top.next()) {
        (Some((i, _)), None) => i,
        _ => return Err(Error::integrity(format!("largest color {m} must occur exactly once"))),
    };
    let tail = &colors[pos + 1..];
    ExchangeMap::from_pairs(tail.iter().copied().zip(tail.iter().rev().copied()))
}

fn g2(m: u32) -> usize {
    g_scf_closed(m, 2).expect("m within range") as usize
}

/// `C_m`: a 2-SCF coloring of `g_2(m)` points using exactly `m` colors.
pub fn construct_2scf(m: u32) -> Result<Coloring> {
    if m == 0 {
        return Err(Error::domain("color budget m must be at least 1"));
    }
    if m > MAX_2SCF_COLORS {
        return Err(Error::Size {
            what: "m",
            got: m as usize,
            cap: MAX_2SCF_COLORS as usize,
        });
    }
    let mut c: Vec<Color> = match m {
        1 => return Ok(Coloring::from_vec_unchecked(vec![1])),
        2 => return Ok(Coloring::from_vec_unchecked(vec![1, 2])),
        _ => vec![1, 2, 3, 1],
    };
    for step in 3..m {
        let current = Coloring::from_vec_unchecked(c);
        let s = exchange_map_2scf(&current)?;
        let mut next = current.into_vec();
        let mirrored: Vec<Color> = next[..g2(step - 1)].iter().rev().map(|&x| s.apply(x)).collect();
        next.push(step + 1);
        next.extend(mirrored);
        c = next;
    }
    debug_assert_eq!(c.len(), g2(m));
    Ok(Coloring::from_vec_unchecked(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_kscf;

    fn col(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn reproduces_printed_colorings() {
        assert_eq!(construct_2scf(1).unwrap(), col("1"));
        assert_eq!(construct_2scf(2).unwrap(), col("1,2"));
        assert_eq!(construct_2scf(3).unwrap(), col("1,2,3,1"));
        assert_eq!(construct_2scf(4).unwrap(), col("1,2,3,1,4,2,1"));
        assert_eq!(construct_2scf(5).unwrap(), col("1,2,3,1,4,2,1,5,2,3,1,2"));
        assert_eq!(
            construct_2scf(6).unwrap(),
            col("1,2,3,1,4,2,1,5,2,3,1,2,6,3,2,4,3,1,2,3")
        );
    }

    #[test]
    fn exchange_map_examples() {
        assert_eq!(exchange_map_2scf(&col("1,2,3,1,4,2,1")).unwrap().swaps(), vec![(1, 2)]);
        assert_eq!(
            exchange_map_2scf(&col("1,2,3,1,4,2,1,5,2,3,1,2")).unwrap().swaps(),
            vec![(1, 3)]
        );
        assert!(exchange_map_2scf(&col("1,2,3,1")).unwrap().is_identity());
    }

    #[test]
    fn exchange_map_rejects_inconsistent_tails() {
        // tail (1,2,1,3) pairs 1 with both 3 and 2
        assert!(exchange_map_2scf(&col("4,1,2,1,3")).is_err());
        assert!(exchange_map_2scf(&col("2,1,2")).is_err());
        assert!(ExchangeMap::from_pairs([(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn lengths_colors_and_reversal() {
        for m in 1..=12 {
            let c = construct_2scf(m).unwrap();
            assert_eq!(c.len(), g2(m));
            assert_eq!(c.colors_used(), m as usize);
            assert!(verify_kscf(&c, 2).unwrap().ok(), "m={m}");
            assert!(verify_kscf(&c.reversed(), 2).unwrap().ok(), "reversed m={m}");
        }
    }

    #[test]
    fn rejects_out_of_range_budgets() {
        assert!(construct_2scf(0).is_err());
        assert!(matches!(construct_2scf(33), Err(Error::Size { .. })));
    }
}
