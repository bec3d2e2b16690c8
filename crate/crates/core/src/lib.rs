//! Conflict-free coloring variants of the interval hypergraph H_n.
//!
//! H_n has points `1..=n` and one hyperedge per nonempty run of consecutive
//! points. This crate decides the k-CF, k-SCF and k-proper-non-monochromatic
//! predicates on colorings of H_n, builds colorings with the optimal or
//! best-known number of colors, certifies extremal values by exhaustive
//! search, and simulates online k-CF coloring under arbitrary arrival orders.

pub mod coloring;
pub mod construct;
pub mod error;
pub mod formulas;
pub mod hypergraph;
pub mod online;
pub mod oracle;
pub mod verify;

pub use coloring::{colors_used, Color, Coloring};
pub use construct::{Construction, ConstructionKind, ConstructionMeta};
pub use error::{Error, Result};
pub use hypergraph::{Arrival, Interval, PointSet};
pub use online::{ArrivalKind, ExperimentReport, StrategyConfig, StrategyKind, TrialReport};
pub use oracle::{AuditReport, MinColorsResult, SearchLimits, SearchResult};
pub use verify::{verify, verify_kcf, verify_kpnm, verify_kscf, Mode, Predicate, Verdict, VerdictReport};
