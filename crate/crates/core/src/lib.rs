//! Adaptive inertia control for networked phase oscillators.
//!
//! The crate covers the full pipeline: generate a benchmark topology, take
//! the Laplacian spectrum, decouple the linearized swing dynamics into
//! modes, feed the measured modal response into a rate-limited adaptive
//! inertia law, and quantify the result with fragility/relaxation metrics.
//! An experiment harness ([`xplab`]) runs whole scenario matrices from
//! config files and emits deterministic CSV/JSON artifacts.
//!
//! Start with the runnable examples (`cargo run --example ...`): each major
//! capability has one. The `swingnet` binary exposes the same operations as
//! subcommands.

pub mod controller;
pub mod dynamics;
pub mod error;
mod hash;
pub mod metrics;
pub mod modal;
pub mod netgen;
pub mod spectral;
pub mod xplab;

pub use error::{Error, Result};
