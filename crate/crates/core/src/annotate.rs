//! Annotation planes: rasterization, decoding and validation.
//!
//! Every bone is stamped as a filled capsule into the three planes at once
//! with `(finger code, segment code, handedness code)`. Bones from all hands
//! are pooled and drawn farthest first by the mean depth of their two
//! endpoints, so nearer bones overwrite farther ones. Equal depths keep the
//! canonical order: hand index, then thumb→little, base→tip.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::geometry::Keypoint;
use crate::raster::{for_each_capsule_pixel, Capsule};
use crate::topology::{BoneSpec, ChannelCodes, Finger, Handedness, Segment, BONES, KEYPOINT_COUNT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnnotateError {
    NonFiniteKeypoint { index: usize },
    InvalidConfig,
    PlaneSize { expected: usize, actual: usize },
}

impl fmt::Display for AnnotateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnotateError::NonFiniteKeypoint { index } => {
                write!(f, "keypoint {index} has a non-finite coordinate")
            }
            AnnotateError::InvalidConfig => {
                f.write_str("raster config needs width, height >= 16 and stroke radius >= 1")
            }
            AnnotateError::PlaneSize { expected, actual } => {
                write!(f, "annotation plane has {actual} bytes, expected {expected}")
            }
        }
    }
}

impl core::error::Error for AnnotateError {}

/// 21 image-space keypoints (pixels, relative depth) and the hand's side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectedPose {
    keypoints: [Keypoint; KEYPOINT_COUNT],
    handedness: Handedness,
}

impl ProjectedPose {
    pub fn new(
        keypoints: [Keypoint; KEYPOINT_COUNT],
        handedness: Handedness,
    ) -> Result<Self, AnnotateError> {
        if let Some(index) = keypoints.iter().position(|k| !k.is_finite()) {
            return Err(AnnotateError::NonFiniteKeypoint { index });
        }
        Ok(ProjectedPose {
            keypoints,
            handedness,
        })
    }

    pub fn keypoints(&self) -> &[Keypoint; KEYPOINT_COUNT] {
        &self.keypoints
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    /// Applies `f` to every keypoint, keeping handedness.
    pub fn map_keypoints(
        &self,
        f: impl FnMut(Keypoint) -> Keypoint,
    ) -> Result<ProjectedPose, AnnotateError> {
        ProjectedPose::new(self.keypoints.map(f), self.handedness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RasterConfig {
    width: u32,
    height: u32,
    stroke_radius: f64,
}

impl RasterConfig {
    pub const MIN_SIZE: u32 = 16;
    /// Stroke radius at the 256×256 reference size.
    pub const REFERENCE_RADIUS: f64 = 3.0;

    pub fn new(width: u32, height: u32, stroke_radius: f64) -> Result<Self, AnnotateError> {
        let radius_ok = stroke_radius.is_finite() && stroke_radius >= 1.0;
        if width < Self::MIN_SIZE || height < Self::MIN_SIZE || !radius_ok {
            return Err(AnnotateError::InvalidConfig);
        }
        Ok(RasterConfig {
            width,
            height,
            stroke_radius,
        })
    }

    /// Default stroke radius for an image: 3 px at 256×256, proportional to
    /// the shorter side, never below 1.
    pub fn default_radius(width: u32, height: u32) -> f64 {
        (Self::REFERENCE_RADIUS * f64::from(width.min(height)) / 256.0).max(1.0)
    }

    pub fn for_size(width: u32, height: u32) -> Result<Self, AnnotateError> {
        Self::new(width, height, Self::default_radius(width, height))
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn stroke_radius(&self) -> f64 {
        self.stroke_radius
    }
}

/// Which annotation plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Plane {
    Finger = 0,
    Segment = 1,
    Handedness = 2,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::Finger, Plane::Segment, Plane::Handedness];

    pub fn name(self) -> &'static str {
        match self {
            Plane::Finger => "finger",
            Plane::Segment => "segment",
            Plane::Handedness => "handedness",
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Three coded 8-bit planes of equal size, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationImage {
    width: u32,
    height: u32,
    planes: [Vec<u8>; 3],
}

impl AnnotationImage {
    pub fn blank(width: u32, height: u32) -> Self {
        let n = width as usize * height as usize;
        AnnotationImage {
            width,
            height,
            planes: [vec![0; n], vec![0; n], vec![0; n]],
        }
    }

    /// Wraps existing planes in order finger, segment, handedness.
    pub fn from_planes(width: u32, height: u32, planes: [Vec<u8>; 3]) -> Result<Self, AnnotateError> {
        let expected = width as usize * height as usize;
        if let Some(p) = planes.iter().find(|p| p.len() != expected) {
            return Err(AnnotateError::PlaneSize {
                expected,
                actual: p.len(),
            });
        }
        Ok(AnnotationImage {
            width,
            height,
            planes,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn plane(&self, plane: Plane) -> &[u8] {
        &self.planes[plane as usize]
    }

    pub fn plane_finger(&self) -> &[u8] {
        self.plane(Plane::Finger)
    }

    pub fn plane_segment(&self) -> &[u8] {
        self.plane(Plane::Segment)
    }

    pub fn plane_handed(&self) -> &[u8] {
        self.plane(Plane::Handedness)
    }

    pub fn into_planes(self) -> [Vec<u8>; 3] {
        self.planes
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    /// `(finger, segment, handedness)` values at a pixel.
    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = self.offset(x, y);
        [self.planes[0][i], self.planes[1][i], self.planes[2][i]]
    }

    pub fn set(&mut self, x: u32, y: u32, values: [u8; 3]) {
        let i = self.offset(x, y);
        for (plane, v) in self.planes.iter_mut().zip(values) {
            plane[i] = v;
        }
    }

    pub fn set_plane_value(&mut self, plane: Plane, x: u32, y: u32, value: u8) {
        let i = self.offset(x, y);
        self.planes[plane as usize][i] = value;
    }

    /// Pixels nonzero in any plane.
    pub fn support_len(&self) -> usize {
        (0..self.planes[0].len())
            .filter(|&i| self.planes.iter().any(|p| p[i] != 0))
            .count()
    }
}

pub fn bone_depth(pose: &ProjectedPose, bone: &BoneSpec) -> f64 {
    (pose.keypoints[bone.from_kp].z + pose.keypoints[bone.to_kp].z) / 2.0
}

/// A bone scheduled for drawing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawItem {
    pub hand: usize,
    pub bone: BoneSpec,
    pub depth: f64,
}

/// All bones of all hands, farthest first, ties in canonical order.
pub fn draw_order(poses: &[ProjectedPose]) -> Vec<DrawItem> {
    let mut items: Vec<DrawItem> = poses
        .iter()
        .enumerate()
        .flat_map(|(hand, pose)| {
            BONES.iter().map(move |bone| DrawItem {
                hand,
                bone: *bone,
                depth: bone_depth(pose, bone),
            })
        })
        .collect();
    // stable: equal depths keep the (hand, bone) order they were built in
    items.sort_by(|a, b| b.depth.partial_cmp(&a.depth).unwrap_or(Ordering::Equal));
    items
}

/// A coded segment to stamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stroke {
    pub from: (f64, f64),
    pub to: (f64, f64),
    /// `(finger, segment, handedness)` codes.
    pub codes: [u8; 3],
}

/// Stamps strokes in the given order; later strokes overwrite earlier ones.
pub fn paint_strokes(strokes: &[Stroke], config: &RasterConfig) -> AnnotationImage {
    let mut img = AnnotationImage::blank(config.width, config.height);
    let width = config.width as usize;
    for s in strokes {
        let capsule = Capsule {
            ax: s.from.0,
            ay: s.from.1,
            bx: s.to.0,
            by: s.to.1,
            radius: config.stroke_radius,
        };
        for_each_capsule_pixel(&capsule, config.width, config.height, |x, y| {
            let i = y as usize * width + x as usize;
            for (plane, v) in img.planes.iter_mut().zip(s.codes) {
                plane[i] = v;
            }
        });
    }
    img
}

/// Depth-ordered stroke list for a set of hands.
pub fn strokes_for(poses: &[ProjectedPose], codes: &ChannelCodes) -> Vec<Stroke> {
    draw_order(poses)
        .into_iter()
        .map(|item| {
            let pose = &poses[item.hand];
            let a = pose.keypoints[item.bone.from_kp];
            let b = pose.keypoints[item.bone.to_kp];
            Stroke {
                from: (a.x, a.y),
                to: (b.x, b.y),
                codes: [
                    codes.finger_code(item.bone.finger),
                    codes.segment_code(item.bone.segment),
                    codes.handedness_code(pose.handedness),
                ],
            }
        })
        .collect()
}

/// Rasterizes the skeletons of all `poses` into three annotation planes.
pub fn rasterize(poses: &[ProjectedPose], config: &RasterConfig, codes: &ChannelCodes) -> AnnotationImage {
    paint_strokes(&strokes_for(poses, codes), config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PixelLabel {
    Background,
    Bone { finger: Finger, segment: Segment },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    /// One label per pixel, row-major.
    pub labels: Vec<PixelLabel>,
    /// Counts of every non-background label.
    pub histogram: BTreeMap<PixelLabel, usize>,
}

/// Maps each nonzero pixel back to the bone its codes name.
pub fn decode(ann: &AnnotationImage, codes: &ChannelCodes) -> Decoded {
    let n = ann.planes[0].len();
    let mut labels = Vec::with_capacity(n);
    let mut histogram = BTreeMap::new();
    for i in 0..n {
        let (f, s, h) = (ann.planes[0][i], ann.planes[1][i], ann.planes[2][i]);
        let label = if f == 0 && s == 0 && h == 0 {
            PixelLabel::Background
        } else {
            match (codes.finger_from_code(f), codes.segment_from_code(s)) {
                (Some(finger), Some(segment)) => PixelLabel::Bone { finger, segment },
                _ => PixelLabel::Unknown,
            }
        };
        if label != PixelLabel::Background {
            *histogram.entry(label).or_insert(0) += 1;
        }
        labels.push(label);
    }
    Decoded { labels, histogram }
}

/// Tolerance for planes produced by this toolkit.
pub const EXACT_TOLERANCE: u8 = 0;
/// Tolerance for planes emitted by trained generative models.
pub const MODEL_TOLERANCE: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Foreground value not within tolerance of any legal code.
    IllegalCode { plane: Plane, x: u32, y: u32, value: u8 },
    /// Foreground in some planes but background in others.
    SupportMismatch { x: u32, y: u32, values: [u8; 3] },
    /// A connected component whose handedness values fit no single code.
    MixedHandedness { x: u32, y: u32, min: u8, max: u8 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::IllegalCode { plane, x, y, value } => {
                write!(f, "({x}, {y}): illegal {plane} value {value}")
            }
            Violation::SupportMismatch { x, y, values } => write!(
                f,
                "({x}, {y}): supports differ, values {}/{}/{}",
                values[0], values[1], values[2]
            ),
            Violation::MixedHandedness { x, y, min, max } => write!(
                f,
                "component at ({x}, {y}): handedness values {min}..={max} fit no single code"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub tolerance: u8,
    /// Illegal values per plane, in [`Plane`] order.
    pub illegal_codes: [usize; 3],
    pub support_mismatches: usize,
    pub components: usize,
    pub mixed_components: usize,
    /// The first [`ValidationReport::SAMPLE_LIMIT`] violations found.
    pub samples: Vec<Violation>,
}

impl ValidationReport {
    pub const SAMPLE_LIMIT: usize = 32;

    pub fn passes(&self) -> bool {
        self.violation_count() == 0
    }

    pub fn violation_count(&self) -> usize {
        self.illegal_codes.iter().sum::<usize>() + self.support_mismatches + self.mixed_components
    }

    fn record(&mut self, v: Violation) {
        if self.samples.len() < Self::SAMPLE_LIMIT {
            self.samples.push(v);
        }
    }
}

fn near_any(value: u8, legal: &[u8], tolerance: u8) -> bool {
    legal.iter().any(|&c| value.abs_diff(c) <= tolerance)
}

/// Grades annotation planes. A value is foreground when it exceeds
/// `tolerance`; foreground values must lie within `tolerance` of a legal
/// code, all three planes must agree on foreground, and each 8-connected
/// foreground component must carry one handedness code.
pub fn validate(ann: &AnnotationImage, codes: &ChannelCodes, tolerance: u8) -> ValidationReport {
    let mut report = ValidationReport {
        tolerance,
        ..ValidationReport::default()
    };
    let (w, h) = (ann.width as usize, ann.height as usize);
    let legal: [&[u8]; 3] = [
        &codes.finger_codes,
        &codes.segment_codes,
        &codes.handedness_codes(),
    ];
    let is_fg = |v: u8| v > tolerance;

    let mut support = vec![false; w * h];
    for i in 0..w * h {
        let values = ann.get((i % w) as u32, (i / w) as u32);
        let (x, y) = ((i % w) as u32, (i / w) as u32);
        let fg = values.map(is_fg);
        for plane in Plane::ALL {
            let p = plane as usize;
            if fg[p] && !near_any(values[p], legal[p], tolerance) {
                report.illegal_codes[p] += 1;
                report.record(Violation::IllegalCode {
                    plane,
                    x,
                    y,
                    value: values[p],
                });
            }
        }
        if fg.iter().any(|&b| b) {
            support[i] = true;
            if !fg.iter().all(|&b| b) {
                report.support_mismatches += 1;
                report.record(Violation::SupportMismatch { x, y, values });
            }
        }
    }

    let handed = ann.plane_handed();
    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !support[start] || seen[start] {
            continue;
        }
        report.components += 1;
        seen[start] = true;
        stack.push(start);
        let (mut min, mut max) = (u8::MAX, u8::MIN);
        while let Some(i) = stack.pop() {
            if is_fg(handed[i]) {
                min = min.min(handed[i]);
                max = max.max(handed[i]);
            }
            let (x, y) = (i % w, i / w);
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if support[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        if min > max {
            // no handedness foreground in this component
            continue;
        }
        let explained = codes
            .handedness_codes()
            .iter()
            .any(|&c| min.abs_diff(c) <= tolerance && max.abs_diff(c) <= tolerance);
        if !explained {
            report.mixed_components += 1;
            report.record(Violation::MixedHandedness {
                x: (start % w) as u32,
                y: (start / w) as u32,
                min,
                max,
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Finger;

    fn pose_with(f: impl Fn(usize) -> Keypoint, handedness: Handedness) -> ProjectedPose {
        let mut kp = [Keypoint::default(); KEYPOINT_COUNT];
        for (i, k) in kp.iter_mut().enumerate() {
            *k = f(i);
        }
        ProjectedPose::new(kp, handedness).unwrap()
    }

    #[test]
    fn bone_depth_is_mean_of_endpoint_z() {
        let bone = BONES[5];
        let pose = pose_with(
            |i| {
                if i == bone.from_kp {
                    Keypoint::new(1.0, 9.0, 2.0)
                } else if i == bone.to_kp {
                    Keypoint::new(-4.0, 3.0, 4.0)
                } else {
                    Keypoint::new(0.0, 0.0, 0.0)
                }
            },
            Handedness::Left,
        );
        assert_eq!(bone_depth(&pose, &bone), 3.0);
        let moved = pose.map_keypoints(|k| Keypoint::new(k.x + 17.0, k.y - 2.0, k.z)).unwrap();
        assert_eq!(bone_depth(&moved, &bone), 3.0);
        let flat = pose_with(|_| Keypoint::new(0.0, 0.0, 1.25), Handedness::Left);
        assert_eq!(bone_depth(&flat, &bone), 1.25);
    }

    #[test]
    fn non_finite_keypoint_rejected() {
        let mut kp = [Keypoint::default(); KEYPOINT_COUNT];
        kp[7].z = f64::NAN;
        assert_eq!(
            ProjectedPose::new(kp, Handedness::Right),
            Err(AnnotateError::NonFiniteKeypoint { index: 7 })
        );
    }

    #[test]
    fn config_bounds() {
        assert!(RasterConfig::new(15, 64, 3.0).is_err());
        assert!(RasterConfig::new(64, 64, 0.5).is_err());
        assert!(RasterConfig::new(64, 64, f64::NAN).is_err());
        assert_eq!(RasterConfig::default_radius(256, 256), 3.0);
        assert_eq!(RasterConfig::default_radius(512, 1024), 6.0);
        assert_eq!(RasterConfig::default_radius(16, 16), 1.0);
    }

    #[test]
    fn single_thumb_base_stroke() {
        // every keypoint far off-image except the thumb base bone
        let pose = pose_with(
            |i| match i {
                0 => Keypoint::new(10.0, 20.0, 0.0),
                1 => Keypoint::new(50.0, 20.0, 0.0),
                _ => Keypoint::new(-1000.0 - i as f64, -1000.0, 0.0),
            },
            Handedness::Right,
        );
        let strokes: Vec<Stroke> = strokes_for(&[pose], &ChannelCodes::STANDARD)
            .into_iter()
            .filter(|s| s.from.0 > 0.0 && s.to.0 > 0.0)
            .collect();
        assert_eq!(strokes.len(), 1);
        let cfg = RasterConfig::new(64, 64, 1.0).unwrap();
        let img = paint_strokes(&strokes, &cfg);
        let mut n = 0;
        for y in 0..64 {
            for x in 0..64 {
                let v = img.get(x, y);
                if v != [0, 0, 0] {
                    assert_eq!(v, [50, 100, 200]);
                    n += 1;
                }
            }
        }
        assert_eq!(n, 41 * 2 + 43);
        let d = decode(&img, &ChannelCodes::STANDARD);
        assert_eq!(d.histogram.len(), 1);
        assert_eq!(
            d.histogram.get(&PixelLabel::Bone {
                finger: Finger::Thumb,
                segment: Segment::ALL[0]
            }),
            Some(&n)
        );
    }

    #[test]
    fn empty_pose_list_gives_blank_planes() {
        let cfg = RasterConfig::new(32, 16, 2.0).unwrap();
        let img = rasterize(&[], &cfg, &ChannelCodes::STANDARD);
        assert_eq!(img, AnnotationImage::blank(32, 16));
        assert!(decode(&img, &ChannelCodes::STANDARD).histogram.is_empty());
        assert!(validate(&img, &ChannelCodes::STANDARD, 0).passes());
    }

    #[test]
    fn crossing_strokes_nearer_wins() {
        let codes = ChannelCodes::STANDARD;
        let index1 = BONES[5];
        let ring2 = BONES[14];
        let mk = |bone: BoneSpec, from, to| Stroke {
            from,
            to,
            codes: [
                codes.finger_code(bone.finger),
                codes.segment_code(bone.segment),
                200,
            ],
        };
        // depth 5 drawn before depth 2
        let strokes = [
            mk(index1, (5.0, 16.0), (27.0, 16.0)),
            mk(ring2, (16.0, 5.0), (16.0, 27.0)),
        ];
        let img = paint_strokes(&strokes, &RasterConfig::new(32, 32, 2.0).unwrap());
        assert_eq!(img.get(16, 16), [100, 50, 200]);
        assert_eq!(img.get(6, 16), [150, 200, 200]);
    }

    #[test]
    fn unknown_codes_decode_as_unknown() {
        let mut img = AnnotationImage::blank(16, 16);
        img.set(3, 4, [73, 100, 200]);
        img.set(5, 5, [50, 100, 200]);
        let d = decode(&img, &ChannelCodes::STANDARD);
        assert_eq!(d.labels[4 * 16 + 3], PixelLabel::Unknown);
        assert_eq!(d.histogram.get(&PixelLabel::Unknown), Some(&1));
        assert_eq!(d.histogram.values().sum::<usize>(), 2);
    }

    #[test]
    fn validate_flags_mixed_handedness() {
        let mut img = AnnotationImage::blank(16, 16);
        img.set(3, 3, [50, 100, 100]);
        img.set(4, 3, [50, 100, 200]);
        let r = validate(&img, &ChannelCodes::STANDARD, 0);
        assert!(!r.passes());
        assert_eq!(r.mixed_components, 1);
        assert_eq!(r.components, 1);
        // separate components may differ
        let mut img = AnnotationImage::blank(16, 16);
        img.set(3, 3, [50, 100, 100]);
        img.set(9, 9, [50, 100, 200]);
        assert!(validate(&img, &ChannelCodes::STANDARD, 0).passes());
    }

    #[test]
    fn validate_flags_support_mismatch() {
        let mut img = AnnotationImage::blank(16, 16);
        img.set(3, 3, [50, 100, 100]);
        img.set(4, 3, [50, 0, 100]);
        let r = validate(&img, &ChannelCodes::STANDARD, 0);
        assert_eq!(r.support_mismatches, 1);
        assert!(!r.passes());
    }

    #[test]
    fn validate_tolerance() {
        let mut img = AnnotationImage::blank(16, 16);
        img.set(3, 3, [55, 95, 207]);
        img.set(8, 8, [4, 0, 0]);
        assert!(!validate(&img, &ChannelCodes::STANDARD, 0).passes());
        let r = validate(&img, &ChannelCodes::STANDARD, MODEL_TOLERANCE);
        assert!(r.passes(), "{:?}", r.samples);
        // 175 is 25 away from both handedness codes
        img.set(3, 3, [55, 95, 175]);
        let r = validate(&img, &ChannelCodes::STANDARD, MODEL_TOLERANCE);
        assert_eq!(r.illegal_codes, [0, 0, 1]);
    }
}
