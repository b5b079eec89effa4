//! End-to-end experiments: task pipelines, parameter sweeps over trials,
//! result files and figure reproduction.

mod grid;
mod reproduce;
mod sweep;
mod task;

pub use grid::*;
pub use reproduce::*;
pub use sweep::*;
pub use task::*;
