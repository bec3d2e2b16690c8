//! Deterministic coloring constructions and the `n`/`k` dispatcher.

mod kcf;
mod odd;
mod scf2;
mod scf3;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use kcf::{construct_cf_midpoint, construct_kcf};
pub use odd::{construct_kscf_odd, skeleton, Skeleton, MAX_ODD_LEVEL};
pub use scf2::{construct_2scf, exchange_map_2scf, ExchangeMap, MAX_2SCF_COLORS};
pub use scf3::{construct_3scf, PairState, MAX_3SCF_COLORS};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::formulas::{f_scf_from_g, gk_odd_closed};
use crate::verify::{verify, Mode};

/// Which recursion produced a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    /// Middle point gets a fresh top color, halves recurse (k = 1 SCF).
    MidpointCf,
    /// Fibonacci-length mirrored recursion (k = 2 SCF).
    Fibonacci2scf,
    /// `(C, B)` pair doubling (k = 3 SCF).
    Doubling3scf,
    /// Backbone/skeleton interleaving (odd k >= 5 SCF).
    SkeletonOddKscf,
    /// Separator blocks (k-CF).
    SeparatorKcf,
}

impl ConstructionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionKind::MidpointCf => "midpoint-cf",
            ConstructionKind::Fibonacci2scf => "fibonacci-2scf",
            ConstructionKind::Doubling3scf => "doubling-3scf",
            ConstructionKind::SkeletonOddKscf => "skeleton-odd-kscf",
            ConstructionKind::SeparatorKcf => "separator-kcf",
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A dispatched construction together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub coloring: Coloring,
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub kind: ConstructionKind,
    /// The k whose construction was actually run; differs from `k` for even
    /// k >= 4 SCF, which borrows the `k + 1` coloring.
    pub source_k: usize,
}

/// JSON metadata line emitted next to a constructed coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub mode: Mode,
    pub colors_used: usize,
    pub construction: ConstructionKind,
    pub source_k: usize,
}

pub const META_SCHEMA_VERSION: u32 = 1;

impl Construction {
    pub fn meta(&self) -> ConstructionMeta {
        ConstructionMeta {
            schema_version: META_SCHEMA_VERSION,
            n: self.n,
            k: self.k,
            mode: self.mode,
            colors_used: self.coloring.colors_used(),
            construction: self.kind,
            source_k: self.source_k,
        }
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyDomain("H_0 has no points"));
    }
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    Ok(())
}

/// Smallest level whose odd-k coloring covers `n` points.
fn odd_level_for(n: usize, k: usize) -> Result<u32> {
    (0..=MAX_ODD_LEVEL)
        .find(|&l| gk_odd_closed(k, l).is_ok_and(|g| g >= n as u64))
        .ok_or(Error::Size {
            what: "n",
            got: n,
            cap: gk_odd_closed(k, MAX_ODD_LEVEL).unwrap_or(u64::MAX) as usize,
        })
}

/// A k-SCF coloring of H_n.
pub fn construct_kscf(n: usize, k: usize) -> Result<Construction> {
    check_nk(n, k)?;
    let (full, kind, source_k) = match k {
        1 => (construct_cf_midpoint(n)?, ConstructionKind::MidpointCf, 1),
        2 => {
            let m = f_scf_from_g(n as u64, 2)?;
            (construct_2scf(m)?, ConstructionKind::Fibonacci2scf, 2)
        }
        3 => {
            let m = f_scf_from_g(n as u64, 3)?;
            (construct_3scf(m)?, ConstructionKind::Doubling3scf, 3)
        }
        _ => {
            // (k+1)-SCF implies k-SCF, so even k reuses the next odd k.
            let odd_k = k | 1;
            let l = odd_level_for(n, odd_k)?;
            (construct_kscf_odd(odd_k, l)?, ConstructionKind::SkeletonOddKscf, odd_k)
        }
    };
    let coloring = full.prefix(n);
    debug_assert!(verify(&coloring, Mode::Kscf.predicate(), k)?.ok());
    Ok(Construction {
        coloring,
        n,
        k,
        mode: Mode::Kscf,
        kind,
        source_k,
    })
}

/// Dispatches on `mode`.
pub fn construct(n: usize, k: usize, mode: Mode) -> Result<Construction> {
    match mode {
        Mode::Kscf => construct_kscf(n, k),
        Mode::Kcf => {
            check_nk(n, k)?;
            let coloring = construct_kcf(n, k)?;
            debug_assert!(verify(&coloring, Mode::Kcf.predicate(), k)?.ok());
            Ok(Construction {
                coloring,
                n,
                k,
                mode,
                kind: ConstructionKind::SeparatorKcf,
                source_k: k,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_kscf;

    #[test]
    fn dispatcher_examples() {
        let c = construct_kscf(12, 2).unwrap();
        assert_eq!(c.coloring.to_string(), "1,2,3,1,4,2,1,5,2,3,1,2");
        assert_eq!(c.coloring.colors_used(), 5);
        for k in 1..=6 {
            assert_eq!(construct_kscf(1, k).unwrap().coloring.as_slice(), &[1]);
        }
        let c = construct_kscf(11, 4).unwrap();
        assert_eq!(c.coloring, construct_kscf_odd(5, 1).unwrap());
        assert_eq!(c.coloring.colors_used(), 8);
        assert_eq!(c.source_k, 5);
        assert!(verify_kscf(&c.coloring, 4).unwrap().ok());
    }

    #[test]
    fn dispatcher_outputs_are_valid() {
        for k in 1..=6 {
            for n in 1..=60 {
                let c = construct_kscf(n, k).unwrap();
                assert_eq!(c.coloring.len(), n);
                assert!(verify_kscf(&c.coloring, k).unwrap().ok(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn meta_json() {
        let c = construct(15, 3, Mode::Kcf).unwrap();
        let json = serde_json::to_string(&c.meta()).unwrap();
        assert_eq!(
            json,
            r#"{"schema_version":1,"n":15,"k":3,"mode":"kcf","colors_used":2,"construction":"separator-kcf","source_k":3}"#
        );
    }

    #[test]
    fn rejects_empty() {
        assert!(construct_kscf(0, 2).is_err());
        assert!(construct(3, 0, Mode::Kcf).is_err());
    }
}
