//! k-SCF colorings for odd `k = 2p + 1`.
//!
//! Every level-`l` coloring interleaves two sequences: odd positions cycle
//! through the backbone `1, 3, ..., 2p+1`, even positions read the skeleton.
//! The skeleton at level 1 is `2, 4, ..., 2p, 2(p+1), 2(p+1)+1, ..., 2(p+1)+p`.
//! Level `l + 1` is `S_l, (l+2)(p+1), sigma(S_l)`, where `sigma` keeps every
//! skeleton entry except the even-ranked ones among the entries that occur
//! exactly once in `S_l`; the `j`-th of those becomes `(l+2)(p+1) + j`.
//! Each level doubles the length plus one and adds `p + 1` colors.

use std::collections::BTreeMap;

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::formulas::odd_level_colors;

/// Deepest level [`skeleton`] and [`construct_kscf_odd`] materialize.
pub const MAX_ODD_LEVEL: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub entries: Vec<Color>,
    pub level: u32,
    pub k: usize,
}

impl Skeleton {
    pub fn p(&self) -> usize {
        self.k / 2
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Indices of entries that occur exactly once, in order.
    fn unique_positions(&self) -> Vec<usize> {
        let mut counts: BTreeMap<Color, usize> = BTreeMap::new();
        for &c in &self.entries {
            *counts.entry(c).or_insert(0) += 1;
        }
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| counts[c] == 1)
            .map(|(i, _)| i)
            .collect()
    }

    fn first(k: usize) -> Skeleton {
        let p = (k / 2) as Color;
        let entries = (1..=p).map(|j| 2 * j).chain((0..=p).map(|j| 2 * (p + 1) + j)).collect();
        Skeleton { entries, level: 1, k }
    }

    fn next(&self) -> Result<Skeleton> {
        let p = self.p();
        let base = ((self.level as usize + 2) * (p + 1)) as Color;
        let unique = self.unique_positions();
        if unique.len() != self.k {
            return Err(Error::integrity(format!(
                "level-{} skeleton has {} uniquely occurring entries, expected {}",
                self.level,
                unique.len(),
                self.k
            )));
        }
        let mut renamed = self.entries.clone();
        for (j, &idx) in unique.iter().skip(1).step_by(2).enumerate() {
            renamed[idx] = base + j as Color + 1;
        }
        let mut entries = Vec::with_capacity(2 * self.len() + 1);
        entries.extend_from_slice(&self.entries);
        entries.push(base);
        entries.extend(renamed);
        Ok(Skeleton {
            entries,
            level: self.level + 1,
            k: self.k,
        })
    }
}

fn check_odd(k: usize) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::domain(format!("k must be odd and at least 3, got {k}")));
    }
    Ok(())
}

/// The level-`l` skeleton for odd `k >= 3`, `l >= 1`.
pub fn skeleton(k: usize, l: u32) -> Result<Skeleton> {
    check_odd(k)?;
    if l == 0 {
        return Err(Error::domain("skeleton level starts at 1"));
    }
    if l > MAX_ODD_LEVEL {
        return Err(Error::Size {
            what: "level",
            got: l as usize,
            cap: MAX_ODD_LEVEL as usize,
        });
    }
    let mut s = Skeleton::first(k);
    while s.level < l {
        s = s.next()?;
    }
    Ok(s)
}

/// The level-`l` k-SCF coloring: `2^l (k+1) - 1` points, `k + l(p+1)` colors.
pub fn construct_kscf_odd(k: usize, l: u32) -> Result<Coloring> {
    check_odd(k)?;
    if l == 0 {
        return Ok(Coloring::from_vec_unchecked((1..=k as Color).collect()));
    }
    let skel = skeleton(k, l)?;
    let backbone: Vec<Color> = (1..=k as Color).step_by(2).collect();
    let mut cycle = backbone.iter().copied().cycle();
    let mut out = Vec::with_capacity(2 * skel.len() + 1);
    for &s in &skel.entries {
        out.push(cycle.next().expect("cycle is infinite"));
        out.push(s);
    }
    out.push(cycle.next().expect("cycle is infinite"));
    let c = Coloring::from_vec_unchecked(out);
    if c.colors_used() != odd_level_colors(k, l) {
        return Err(Error::integrity(format!(
            "level-{l} coloring for k={k} uses {} colors, expected {}",
            c.colors_used(),
            odd_level_colors(k, l)
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::scf3::construct_3scf;
    use crate::verify::verify_kscf;

    #[test]
    fn skeleton_examples() {
        assert_eq!(skeleton(5, 1).unwrap().entries, vec![2, 4, 6, 7, 8]);
        assert_eq!(skeleton(3, 1).unwrap().entries, vec![2, 4, 5]);
        assert_eq!(skeleton(3, 2).unwrap().entries, vec![2, 4, 5, 6, 2, 7, 5]);
        // only the middle unique entry 6 is renamed at the next level
        assert_eq!(
            skeleton(3, 3).unwrap().entries,
            vec![2, 4, 5, 6, 2, 7, 5, 8, 2, 4, 5, 9, 2, 7, 5]
        );
    }

    #[test]
    fn skeleton_rejects_even_k_and_level_zero() {
        assert!(skeleton(4, 1).is_err());
        assert!(skeleton(1, 1).is_err());
        assert!(skeleton(3, 0).is_err());
        assert!(construct_kscf_odd(6, 1).is_err());
    }

    #[test]
    fn construct_examples() {
        assert_eq!(
            construct_kscf_odd(5, 1).unwrap().as_slice(),
            &[1, 2, 3, 4, 5, 6, 1, 7, 3, 8, 5]
        );
        assert_eq!(construct_kscf_odd(3, 0).unwrap().as_slice(), &[1, 2, 3]);
        assert_eq!(construct_kscf_odd(3, 2).unwrap(), construct_3scf(7).unwrap());
    }

    #[test]
    fn levels_are_valid() {
        for k in [3usize, 5, 7] {
            for l in 0..=4 {
                let c = construct_kscf_odd(k, l).unwrap();
                assert_eq!(c.len(), (1 << l) * (k + 1) - 1);
                assert!(verify_kscf(&c, k).unwrap().ok(), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn skeleton_shape() {
        for k in [3usize, 5, 9] {
            let p = k / 2;
            for l in 1..=5 {
                let s = skeleton(k, l).unwrap();
                assert_eq!(s.len(), (1 << l) * (p + 1) - 1);
                assert_eq!(s.unique_positions().len(), k);
                let distinct: std::collections::BTreeSet<_> = s.entries.iter().collect();
                assert_eq!(distinct.len(), l as usize * (p + 1) + p);
            }
        }
    }
}
