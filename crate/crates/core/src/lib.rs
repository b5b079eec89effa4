//! Synthesizes frequency- and amplitude-modulated stimuli, turns them into
//! cochleagrams, encodes the cochleagrams into spikes with four classic
//! encoders, and measures how much of the stimulus the spikes carry via
//! bias-corrected, time-delayed mutual information.

// `!(x > 0.0)` style checks reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cochleagram;
pub mod encoders;
pub mod erb;
pub mod error;
pub mod harness;
pub mod infotheory;
pub mod io;
pub mod rng;
pub mod stimulus;

pub use error::{Error, Result};
