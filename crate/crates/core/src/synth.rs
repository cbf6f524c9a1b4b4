//! Procedural hand poses.
//!
//! A hand is a rigid kinematic skeleton: each finger starts at the wrist,
//! heads off along its own direction in the palm plane, and bends at three
//! joints. Bone lengths come from a [`HandShape`], joint rotations from
//! [`JointAngles`]. The result is a [`HandPose3D`], which [`project`] turns
//! into image coordinates with relative depth.
//!
//! This skeleton has no mesh. It provides keypoints and depth, which is all
//! the annotation and evaluation code consumes.

use core::fmt;

use rand::Rng;

use crate::annotate::ProjectedPose;
use crate::geometry::{Keypoint, Rotation, Vec3};
use crate::topology::{Finger, Handedness, BONE_COUNT, KEYPOINT_COUNT, WRIST};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthError {
    /// A joint limit whose lower bound exceeds its upper bound, or is not finite.
    InvalidInterval { finger: Finger, joint: Joint },
    InvalidShape,
    InvalidCamera,
    /// All projected keypoints coincide.
    DegenerateProjection,
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidInterval { finger, joint } => {
                write!(f, "invalid {joint} limit interval for the {finger} finger")
            }
            SynthError::InvalidShape => {
                f.write_str("hand shape needs positive finite bone lengths and scale")
            }
            SynthError::InvalidCamera => f.write_str(
                "camera needs width and height >= 16 and a fit margin in [0, 0.5)",
            ),
            SynthError::DegenerateProjection => {
                f.write_str("cannot fit pose: all keypoints project to one point")
            }
        }
    }
}

impl core::error::Error for SynthError {}

/// Canonical adult bone lengths in centimetres, thumb→little, base→tip.
/// Thumb segment 0 runs wrist→CMC; other fingers' run wrist→MCP.
const CANONICAL_LENGTHS: [[f64; 4]; 5] = [
    [2.6, 3.6, 3.1, 2.5],
    [6.8, 3.9, 2.2, 2.0],
    [6.5, 4.4, 2.7, 2.1],
    [5.9, 4.1, 2.6, 2.1],
    [5.4, 3.3, 1.8, 1.9],
];

/// Per-bone multiplicative jitter applied by [`sample_shape`].
const LENGTH_JITTER: f64 = 0.08;

/// Canonical finger base directions, radians from +y towards +x.
const CANONICAL_SPREAD: [f64; 5] = [0.85, 0.22, 0.0, -0.2, -0.4];
const SPREAD_JITTER: f64 = 0.04;

/// Roll of the thumb frame about its own axis, so it bends across the palm.
const THUMB_ROLL: f64 = 0.8;

const SCALE_RANGE: (f64, f64) = (0.8, 1.2);

#[derive(Debug, Clone, PartialEq)]
pub struct HandShape {
    bone_lengths: [f64; BONE_COUNT],
    palm_spread: [f64; 5],
    scale: f64,
}

impl HandShape {
    pub fn new(
        bone_lengths: [f64; BONE_COUNT],
        palm_spread: [f64; 5],
        scale: f64,
    ) -> Result<Self, SynthError> {
        let lengths_ok = bone_lengths.iter().all(|&l| l.is_finite() && l > 0.0);
        let spread_ok = palm_spread.iter().all(|a| a.is_finite());
        if !lengths_ok || !spread_ok || !(scale.is_finite() && scale > 0.0) {
            return Err(SynthError::InvalidShape);
        }
        Ok(HandShape {
            bone_lengths,
            palm_spread,
            scale,
        })
    }

    /// The unjittered canonical hand at scale 1.
    pub fn canonical() -> Self {
        let mut lengths = [0.0; BONE_COUNT];
        for (i, l) in lengths.iter_mut().enumerate() {
            *l = CANONICAL_LENGTHS[i / 4][i % 4];
        }
        HandShape {
            bone_lengths: lengths,
            palm_spread: CANONICAL_SPREAD,
            scale: 1.0,
        }
    }

    pub fn bone_lengths(&self) -> &[f64; BONE_COUNT] {
        &self.bone_lengths
    }

    pub fn palm_spread(&self) -> &[f64; 5] {
        &self.palm_spread
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Length of bone `i` once the global scale is applied; this is the
    /// distance forward kinematics places between the bone's endpoints.
    pub fn effective_length(&self, bone: usize) -> f64 {
        self.bone_lengths[bone] * self.scale
    }

    pub fn finger_length(&self, finger: Finger) -> f64 {
        let start = finger.index() * 4;
        self.bone_lengths[start..start + 4].iter().sum()
    }
}

pub fn sample_shape<R: Rng + ?Sized>(rng: &mut R) -> HandShape {
    let mut lengths = [0.0; BONE_COUNT];
    for (i, l) in lengths.iter_mut().enumerate() {
        let jitter = rng.random_range(-LENGTH_JITTER..=LENGTH_JITTER);
        *l = CANONICAL_LENGTHS[i / 4][i % 4] * (1.0 + jitter);
    }
    let mut spread = CANONICAL_SPREAD;
    for a in spread.iter_mut() {
        *a += rng.random_range(-SPREAD_JITTER..=SPREAD_JITTER);
    }
    let scale = rng.random_range(SCALE_RANGE.0..=SCALE_RANGE.1);
    HandShape {
        bone_lengths: lengths,
        palm_spread: spread,
        scale,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Joint {
    Abduction,
    FlexionMcp,
    FlexionPip,
    FlexionDip,
}

impl Joint {
    pub const ALL: [Joint; 4] = [
        Joint::Abduction,
        Joint::FlexionMcp,
        Joint::FlexionPip,
        Joint::FlexionDip,
    ];
}

impl fmt::Display for Joint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Joint::Abduction => "abduction",
            Joint::FlexionMcp => "MCP flexion",
            Joint::FlexionPip => "PIP flexion",
            Joint::FlexionDip => "DIP flexion",
        })
    }
}

/// Joint rotations of one finger, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FingerAngles {
    pub abduction: f64,
    pub flexion_mcp: f64,
    pub flexion_pip: f64,
    pub flexion_dip: f64,
}

impl FingerAngles {
    fn get(&self, joint: Joint) -> f64 {
        match joint {
            Joint::Abduction => self.abduction,
            Joint::FlexionMcp => self.flexion_mcp,
            Joint::FlexionPip => self.flexion_pip,
            Joint::FlexionDip => self.flexion_dip,
        }
    }

    fn set(&mut self, joint: Joint, value: f64) {
        match joint {
            Joint::Abduction => self.abduction = value,
            Joint::FlexionMcp => self.flexion_mcp = value,
            Joint::FlexionPip => self.flexion_pip = value,
            Joint::FlexionDip => self.flexion_dip = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JointAngles {
    /// Thumb to little.
    pub fingers: [FingerAngles; 5],
}

impl JointAngles {
    pub fn finger(&self, finger: Finger) -> &FingerAngles {
        &self.fingers[finger.index()]
    }

    pub fn get(&self, finger: Finger, joint: Joint) -> f64 {
        self.fingers[finger.index()].get(joint)
    }
}

/// Closed interval `[lo, hi]` in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn degrees(lo: f64, hi: f64) -> Self {
        Interval::new(lo.to_radians(), hi.to_radians())
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimits {
    /// Per finger, indexed by [`Joint`] order.
    pub fingers: [[Interval; 4]; 5],
}

impl JointLimits {
    pub fn uniform(interval: Interval) -> Self {
        JointLimits {
            fingers: [[interval; 4]; 5],
        }
    }

    pub fn get(&self, finger: Finger, joint: Joint) -> Interval {
        self.fingers[finger.index()][joint as usize]
    }
}

impl Default for JointLimits {
    /// MCP 0–90°, PIP 0–110°, DIP 0–80°, abduction ±15° (thumb ±40°).
    fn default() -> Self {
        let finger = [
            Interval::degrees(-15.0, 15.0),
            Interval::degrees(0.0, 90.0),
            Interval::degrees(0.0, 110.0),
            Interval::degrees(0.0, 80.0),
        ];
        let mut thumb = finger;
        thumb[0] = Interval::degrees(-40.0, 40.0);
        JointLimits {
            fingers: [thumb, finger, finger, finger, finger],
        }
    }
}

/// Draws every joint angle uniformly from its interval.
pub fn sample_angles<R: Rng + ?Sized>(
    rng: &mut R,
    limits: &JointLimits,
) -> Result<JointAngles, SynthError> {
    let mut angles = JointAngles::default();
    for finger in Finger::ALL {
        for joint in Joint::ALL {
            let iv = limits.get(finger, joint);
            if !iv.is_valid() {
                return Err(SynthError::InvalidInterval { finger, joint });
            }
            let u: f64 = rng.random();
            let v = (iv.lo + (iv.hi - iv.lo) * u).clamp(iv.lo, iv.hi);
            angles.fingers[finger.index()].set(joint, v);
        }
    }
    Ok(angles)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandPose3D {
    pub keypoints: [Vec3; KEYPOINT_COUNT],
    pub handedness: Handedness,
}

impl HandPose3D {
    pub fn rotated(&self, rotation: &Rotation) -> HandPose3D {
        HandPose3D {
            keypoints: self.keypoints.map(|p| rotation.apply(p)),
            handedness: self.handedness,
        }
    }
}

/// Local frame of a finger at the wrist: columns are (lateral, forward,
/// dorsal normal).
fn finger_frame(finger: Finger, spread: f64) -> Rotation {
    let base = Rotation::from_axis_angle(Vec3::Z, -spread);
    if finger == Finger::Thumb {
        base.compose(&Rotation::from_axis_angle(Vec3::Y, THUMB_ROLL))
    } else {
        base
    }
}

/// Rotation about the local lateral axis that bends the local forward axis
/// towards the palm.
fn flexion(angle: f64) -> Rotation {
    Rotation::from_axis_angle(Vec3::X, -angle)
}

/// Builds the right-hand skeleton and mirrors it in x for left hands.
pub fn forward_kinematics(
    shape: &HandShape,
    angles: &JointAngles,
    handedness: Handedness,
) -> HandPose3D {
    let mut kp = [Vec3::ZERO; KEYPOINT_COUNT];
    kp[WRIST] = Vec3::ZERO;
    for finger in Finger::ALL {
        let a = angles.finger(finger);
        let joints = [
            Rotation::IDENTITY,
            Rotation::from_axis_angle(Vec3::Z, a.abduction).compose(&flexion(a.flexion_mcp)),
            flexion(a.flexion_pip),
            flexion(a.flexion_dip),
        ];
        let mut frame = finger_frame(finger, shape.palm_spread[finger.index()]);
        let mut at = kp[WRIST];
        let first_kp = 1 + 4 * finger.index();
        for (seg, joint) in joints.iter().enumerate() {
            frame = frame.compose(joint);
            let bone = finger.index() * 4 + seg;
            at = at + frame.column(1).scale(shape.effective_length(bone));
            kp[first_kp + seg] = at;
        }
    }
    if handedness == Handedness::Left {
        for p in kp.iter_mut() {
            p.x = -p.x;
        }
    }
    HandPose3D {
        keypoints: kp,
        handedness,
    }
}

/// Orthographic camera that fits the hand into the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraConfig {
    rotation: Rotation,
    width: u32,
    height: u32,
    fit_margin: f64,
}

impl CameraConfig {
    pub const MIN_SIZE: u32 = 16;

    pub fn new(
        rotation: Rotation,
        width: u32,
        height: u32,
        fit_margin: f64,
    ) -> Result<Self, SynthError> {
        if width < Self::MIN_SIZE
            || height < Self::MIN_SIZE
            || !(0.0..0.5).contains(&fit_margin)
        {
            return Err(SynthError::InvalidCamera);
        }
        Ok(CameraConfig {
            rotation,
            width,
            height,
            fit_margin,
        })
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rotation
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn fit_margin(&self) -> f64 {
        self.fit_margin
    }
}

/// Rotates the pose, drops to the image plane, and scales/translates the
/// keypoint bounding box into the image minus the margin. Pixel centres sit
/// at integer coordinates, so the usable span on each axis is `[0, size-1]`.
/// Rotated z is kept unchanged as relative depth.
pub fn project(pose: &HandPose3D, camera: &CameraConfig) -> Result<ProjectedPose, SynthError> {
    let rotated = pose.rotated(&camera.rotation);
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in rotated.keypoints.iter() {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let span_x = f64::from(camera.width - 1);
    let span_y = f64::from(camera.height - 1);
    let usable_x = span_x * (1.0 - 2.0 * camera.fit_margin);
    let usable_y = span_y * (1.0 - 2.0 * camera.fit_margin);
    let (extent_x, extent_y) = (max_x - min_x, max_y - min_y);

    let scale = match (extent_x > 0.0, extent_y > 0.0) {
        (true, true) => (usable_x / extent_x).min(usable_y / extent_y),
        (true, false) => usable_x / extent_x,
        (false, true) => usable_y / extent_y,
        (false, false) => return Err(SynthError::DegenerateProjection),
    };
    if !scale.is_finite() {
        return Err(SynthError::DegenerateProjection);
    }
    let (cx, cy) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    let keypoints = rotated.keypoints.map(|p| {
        Keypoint::new(
            (span_x / 2.0 + scale * (p.x - cx)).clamp(0.0, span_x),
            (span_y / 2.0 + scale * (p.y - cy)).clamp(0.0, span_y),
            p.z,
        )
    });
    ProjectedPose::new(keypoints, pose.handedness).map_err(|_| SynthError::DegenerateProjection)
}

/// Everything drawn for one synthetic hand.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledHand {
    pub shape: HandShape,
    pub angles: JointAngles,
    pub rotation: Rotation,
    pub pose: HandPose3D,
    pub projected: ProjectedPose,
}

/// Default border kept clear when fitting synthetic hands.
pub const DEFAULT_FIT_MARGIN: f64 = 0.08;

/// Samples shape, angles, handedness and a uniform global rotation, then
/// projects into a `width`×`height` image.
pub fn sample_hand<R: Rng + ?Sized>(
    rng: &mut R,
    limits: &JointLimits,
    width: u32,
    height: u32,
) -> Result<SampledHand, SynthError> {
    let shape = sample_shape(rng);
    let angles = sample_angles(rng, limits)?;
    let handedness = if rng.random::<bool>() {
        Handedness::Right
    } else {
        Handedness::Left
    };
    let rotation = Rotation::random(rng);
    let pose = forward_kinematics(&shape, &angles, handedness);
    let camera = CameraConfig::new(rotation, width, height, DEFAULT_FIT_MARGIN)?;
    let projected = project(&pose, &camera)?;
    Ok(SampledHand {
        shape,
        angles,
        rotation,
        pose,
        projected,
    })
}
