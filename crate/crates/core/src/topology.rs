//! Hand skeleton graph and annotation channel codes.
//!
//! Keypoints follow the common 21-landmark detector layout:
//!
//! ```text
//! 0        wrist
//! 1..=4    thumb   (base -> tip)
//! 5..=8    index
//! 9..=12   middle
//! 13..=16  ring
//! 17..=20  little
//! ```
//!
//! Each finger has four bones. Segment 0 starts at the wrist, segment 3 ends
//! at the fingertip.

use core::fmt;

/// Number of keypoints in a hand.
pub const KEYPOINT_COUNT: usize = 21;
/// Number of bones in a hand.
pub const BONE_COUNT: usize = 20;
/// Bones per finger.
pub const SEGMENTS_PER_FINGER: usize = 4;

pub const WRIST: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Finger {
    Thumb = 0,
    Index = 1,
    Middle = 2,
    Ring = 3,
    Little = 4,
}

impl Finger {
    /// Anatomical order, thumb to little.
    pub const ALL: [Finger; 5] = [
        Finger::Thumb,
        Finger::Index,
        Finger::Middle,
        Finger::Ring,
        Finger::Little,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Finger::Thumb => "thumb",
            Finger::Index => "index",
            Finger::Middle => "middle",
            Finger::Ring => "ring",
            Finger::Little => "little",
        }
    }
}

impl fmt::Display for Finger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn name(self) -> &'static str {
        match self {
            Handedness::Left => "left",
            Handedness::Right => "right",
        }
    }

    /// Parses `"left"` or `"right"`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "left" => Some(Handedness::Left),
            "right" => Some(Handedness::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Handedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of a bone along its finger, 0 (attached to the wrist) to 3
/// (fingertip segment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "u8", into = "u8"))]
pub struct Segment(u8);

impl Segment {
    pub const ALL: [Segment; 4] = [Segment(0), Segment(1), Segment(2), Segment(3)];

    pub fn new(index: u8) -> Result<Self, SegmentOutOfRange> {
        if (index as usize) < SEGMENTS_PER_FINGER {
            Ok(Segment(index))
        } else {
            Err(SegmentOutOfRange(index))
        }
    }

    pub const fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Segment {
    type Error = SegmentOutOfRange;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Segment::new(value)
    }
}

impl From<Segment> for u8 {
    fn from(s: Segment) -> u8 {
        s.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentOutOfRange(pub u8);

impl fmt::Display for SegmentOutOfRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "segment index {} out of range 0..=3", self.0)
    }
}

impl core::error::Error for SegmentOutOfRange {}

/// One bone of the skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoneSpec {
    pub finger: Finger,
    pub segment: Segment,
    pub from_kp: usize,
    pub to_kp: usize,
}

impl BoneSpec {
    const fn canonical(finger: Finger, segment: u8) -> Self {
        let base = 1 + 4 * finger as usize;
        let from_kp = if segment == 0 {
            WRIST
        } else {
            base + segment as usize - 1
        };
        BoneSpec {
            finger,
            segment: Segment(segment),
            from_kp,
            to_kp: base + segment as usize,
        }
    }

    /// Position of this bone in canonical order (thumb→little, base→tip).
    pub const fn index(&self) -> usize {
        self.finger as usize * SEGMENTS_PER_FINGER + self.segment.0 as usize
    }
}

const fn build_bones() -> [BoneSpec; BONE_COUNT] {
    let mut bones = [BoneSpec::canonical(Finger::Thumb, 0); BONE_COUNT];
    let mut i = 0;
    while i < BONE_COUNT {
        let finger = match i / SEGMENTS_PER_FINGER {
            0 => Finger::Thumb,
            1 => Finger::Index,
            2 => Finger::Middle,
            3 => Finger::Ring,
            _ => Finger::Little,
        };
        bones[i] = BoneSpec::canonical(finger, (i % SEGMENTS_PER_FINGER) as u8);
        i += 1;
    }
    bones
}

/// The 20 bones in canonical order.
pub static BONES: [BoneSpec; BONE_COUNT] = build_bones();

/// The immutable hand graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonTopology {
    pub bones: &'static [BoneSpec; BONE_COUNT],
    pub keypoint_count: usize,
}

impl SkeletonTopology {
    /// Bones belonging to `finger`, base to tip.
    pub fn finger_bones(&self, finger: Finger) -> &'static [BoneSpec] {
        let start = finger.index() * SEGMENTS_PER_FINGER;
        &self.bones[start..start + SEGMENTS_PER_FINGER]
    }

    /// The five keypoints of a finger's chain starting at the wrist.
    pub fn finger_chain(&self, finger: Finger) -> [usize; 5] {
        let base = 1 + 4 * finger.index();
        [WRIST, base, base + 1, base + 2, base + 3]
    }
}

pub fn canonical_topology() -> SkeletonTopology {
    SkeletonTopology {
        bones: &BONES,
        keypoint_count: KEYPOINT_COUNT,
    }
}

/// Intensity tables for the three annotation planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelCodes {
    /// Thumb to little.
    pub finger_codes: [u8; 5],
    /// Base to tip.
    pub segment_codes: [u8; 4],
    pub left_code: u8,
    pub right_code: u8,
    pub background: u8,
}

impl ChannelCodes {
    pub const STANDARD: ChannelCodes = ChannelCodes {
        finger_codes: [50, 150, 250, 100, 200],
        segment_codes: [100, 200, 50, 250],
        left_code: 100,
        right_code: 200,
        background: 0,
    };

    pub fn finger_code(&self, finger: Finger) -> u8 {
        self.finger_codes[finger.index()]
    }

    pub fn segment_code(&self, segment: Segment) -> u8 {
        self.segment_codes[segment.get() as usize]
    }

    pub fn handedness_code(&self, handedness: Handedness) -> u8 {
        match handedness {
            Handedness::Left => self.left_code,
            Handedness::Right => self.right_code,
        }
    }

    pub fn handedness_codes(&self) -> [u8; 2] {
        [self.left_code, self.right_code]
    }

    pub fn finger_from_code(&self, code: u8) -> Option<Finger> {
        self.finger_codes
            .iter()
            .position(|&c| c == code)
            .map(|i| Finger::ALL[i])
    }

    pub fn segment_from_code(&self, code: u8) -> Option<Segment> {
        self.segment_codes
            .iter()
            .position(|&c| c == code)
            .map(|i| Segment(i as u8))
    }

    /// Checks that every table is injective and avoids the background value.
    pub fn is_well_formed(&self) -> bool {
        fn distinct(values: &[u8], background: u8) -> bool {
            values.iter().enumerate().all(|(i, &v)| {
                v != background && values[i + 1..].iter().all(|&w| w != v)
            })
        }
        distinct(&self.finger_codes, self.background)
            && distinct(&self.segment_codes, self.background)
            && distinct(&self.handedness_codes(), self.background)
    }
}

impl Default for ChannelCodes {
    fn default() -> Self {
        ChannelCodes::STANDARD
    }
}

pub fn finger_code(finger: Finger) -> u8 {
    ChannelCodes::STANDARD.finger_code(finger)
}

/// Code of an integer segment index. Rejects indices outside `0..=3`.
pub fn segment_code(segment: u8) -> Result<u8, SegmentOutOfRange> {
    Segment::new(segment).map(|s| ChannelCodes::STANDARD.segment_code(s))
}

pub fn handedness_code(handedness: Handedness) -> u8 {
    ChannelCodes::STANDARD.handedness_code(handedness)
}
