//! 3-SCF colorings with `g_3(m)` points and `m` colors.
//!
//! Odd budgets carry a pair `(C, B)` of equal-length colorings:
//! `C_{2q+1} = C_{2q-1}, 2q, B_{2q-1}` and
//! `B_{2q+1} = C_{2q-1}, 2q+3, B_{2q-1}`, seeded by `C_1 = (1)`, `B_1 = (3)`.
//! Even budgets glue two odd levels: `C_{2p} = C_{2p-1}, 2p, C_{2p-3}`.

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};

/// Largest color budget [`construct_3scf`] materializes.
pub const MAX_3SCF_COLORS: u32 = 44;

/// The `(C_m, B_m)` pair at odd budget `m = 2 * level + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairState {
    pub c: Vec<Color>,
    pub b: Vec<Color>,
    pub level: u32,
}

impl PairState {
    pub fn base() -> Self {
        PairState {
            c: vec![1],
            b: vec![3],
            level: 0,
        }
    }

    pub fn budget(&self) -> u32 {
        2 * self.level + 1
    }

    /// Advances from budget `2q - 1` to `2q + 1`.
    pub fn advance(&self) -> PairState {
        let q = self.level + 1;
        let glue = |mid: Color| {
            let mut out = Vec::with_capacity(2 * self.c.len() + 1);
            out.extend_from_slice(&self.c);
            out.push(mid);
            out.extend_from_slice(&self.b);
            out
        };
        let next = PairState {
            c: glue(2 * q),
            b: glue(2 * q + 3),
            level: q,
        };
        debug_assert_eq!(next.c.len(), next.b.len());
        next
    }
}

/// `C_m`: a 3-SCF coloring of `g_3(m)` points using exactly `m` colors.
pub fn construct_3scf(m: u32) -> Result<Coloring> {
    if m == 0 {
        return Err(Error::domain("color budget m must be at least 1"));
    }
    if m > MAX_3SCF_COLORS {
        return Err(Error::Size {
            what: "m",
            got: m as usize,
            cap: MAX_3SCF_COLORS as usize,
        });
    }
    let colors = match m {
        2 => vec![1, 2],
        4 => vec![1, 2, 3, 4, 1],
        _ if m % 2 == 1 => {
            let mut state = PairState::base();
            while state.budget() < m {
                state = state.advance();
            }
            state.c
        }
        _ => {
            // m = 2p with p >= 3: needs C_{2p-1} and C_{2p-3}.
            let mut prev = PairState::base();
            let mut state = prev.advance();
            while state.budget() < m - 1 {
                prev = state;
                state = prev.advance();
            }
            let mut out = state.c;
            out.push(m);
            out.extend_from_slice(&prev.c);
            out
        }
    };
    Ok(Coloring::from_vec_unchecked(colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::g_scf_closed;
    use crate::verify::verify_kscf;

    fn col(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn reproduces_printed_colorings() {
        assert_eq!(construct_3scf(3).unwrap(), col("1,2,3"));
        assert_eq!(construct_3scf(4).unwrap(), col("1,2,3,4,1"));
        assert_eq!(construct_3scf(5).unwrap(), col("1,2,3,4,1,5,3"));
        assert_eq!(construct_3scf(7).unwrap(), col("1,2,3,4,1,5,3,6,1,2,3,7,1,5,3"));
        assert_eq!(construct_3scf(6).unwrap(), col("1,2,3,4,1,5,3,6,1,2,3"));
    }

    #[test]
    fn pair_state_tracks_b() {
        let s = PairState::base().advance().advance();
        assert_eq!(s.budget(), 5);
        assert_eq!(s.b, vec![1, 2, 3, 7, 1, 5, 3]);
        assert_eq!(PairState::base().advance().b, vec![1, 5, 3]);
    }

    #[test]
    fn lengths_and_validity() {
        for m in 1..=13 {
            let c = construct_3scf(m).unwrap();
            assert_eq!(c.len() as u64, g_scf_closed(m, 3).unwrap(), "m={m}");
            assert_eq!(c.colors_used(), m as usize);
            assert!(verify_kscf(&c, 3).unwrap().ok(), "m={m}");
        }
    }

    #[test]
    fn rejects_zero() {
        assert!(construct_3scf(0).is_err());
    }
}
