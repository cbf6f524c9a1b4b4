//! File formats and batch tooling for six-channel hand datasets.
//!
//! The algorithms live in [`handmark_core`]; this crate adds what needs
//! `std`: packed-file IO, dataset manifests, the detections file format,
//! PNG export, metric report rendering, and the synthetic batch pipeline the
//! `handmark` binary drives.

pub mod config;
pub mod detections;
pub mod error;
pub mod imageio;
pub mod manifest;
pub mod packed;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
