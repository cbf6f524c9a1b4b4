//! Core primitives for six-channel hand datasets.
//!
//! Everything in this crate is pure computation over in-memory values:
//!
//! - [`topology`]: the fixed 21-keypoint / 20-bone hand graph and the
//!   intensity codes of the three annotation planes.
//! - [`geometry`]: small vector and rotation types.
//! - [`synth`]: procedural hand shapes and joint angles, forward kinematics,
//!   orthographic projection.
//! - [`render`]: a stylized RGB hand renderer.
//! - [`annotate`]: depth-ordered skeleton rasterization into annotation
//!   planes, plus decoding and validation of such planes.
//! - [`container`]: six-channel images and their packed byte layout.
//! - [`detection`]: detector records, the in-bounds filter, and annotation
//!   of real-photo records.
//! - [`metrics`]: detector confidence and mean joint ratio difference.
//!
//! File IO, serialization of manifests and detection files, and the CLI
//! live in the `handmark` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod annotate;
pub mod container;
pub mod detection;
pub mod geometry;
mod math;
mod raster;
pub mod metrics;
pub mod render;
pub mod synth;
pub mod topology;

pub use annotate::{AnnotationImage, ProjectedPose, RasterConfig, ValidationReport};
pub use container::{RgbImage, SixChannelImage};
pub use detection::{DetectedHand, DetectionRecord};
pub use geometry::{Keypoint, Rotation, Vec3};
pub use metrics::{JointLengths, MetricsReport};
pub use synth::{CameraConfig, HandPose3D, HandShape, JointAngles, JointLimits};
pub use topology::{BoneSpec, ChannelCodes, Finger, Handedness, SkeletonTopology};
