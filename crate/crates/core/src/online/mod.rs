//! Online k-CF coloring of H_n: points arrive one at a time and are colored
//! irrevocably with a color that keeps the present configuration k-CF.

mod arrival;
mod experiment;
mod sim;

pub use arrival::*;
pub use experiment::*;
pub use sim::*;
