//! Exact branch-and-prune search for extremal values on H_n.

mod audit;
mod search;

pub use audit::*;
pub use search::*;
