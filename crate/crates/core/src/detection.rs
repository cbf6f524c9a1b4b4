//! Hand-detector records for real photographs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::annotate::{rasterize, AnnotateError, AnnotationImage, ProjectedPose, RasterConfig};
use crate::geometry::Keypoint;
use crate::topology::{ChannelCodes, Handedness, KEYPOINT_COUNT};

/// One detected hand: keypoints in pixels with the detector's relative depth.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectedHand {
    pub handedness: Handedness,
    pub confidence: f64,
    pub keypoints: [Keypoint; KEYPOINT_COUNT],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecordError {
    ConfidenceOutOfRange(f64),
    NonFiniteKeypoint { index: usize },
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordError::ConfidenceOutOfRange(c) => write!(f, "confidence {c} outside [0, 1]"),
            RecordError::NonFiniteKeypoint { index } => {
                write!(f, "keypoint {index} has a non-finite coordinate")
            }
        }
    }
}

impl core::error::Error for RecordError {}

impl DetectedHand {
    pub fn new(
        handedness: Handedness,
        confidence: f64,
        keypoints: [Keypoint; KEYPOINT_COUNT],
    ) -> Result<Self, RecordError> {
        if !(0.0..=1.0).contains(&confidence) {
            return Err(RecordError::ConfidenceOutOfRange(confidence));
        }
        if let Some(index) = keypoints.iter().position(|k| !k.is_finite()) {
            return Err(RecordError::NonFiniteKeypoint { index });
        }
        Ok(DetectedHand {
            handedness,
            confidence,
            keypoints,
        })
    }

    /// Inside the pixel grid: `0 <= x < width` and `0 <= y < height` for
    /// every keypoint.
    pub fn is_inside(&self, width: u32, height: u32) -> bool {
        let (w, h) = (f64::from(width), f64::from(height));
        self.keypoints
            .iter()
            .all(|k| k.x >= 0.0 && k.x < w && k.y >= 0.0 && k.y < h)
    }

    pub fn to_pose(&self) -> Result<ProjectedPose, AnnotateError> {
        ProjectedPose::new(self.keypoints, self.handedness)
    }
}

/// Detector output for one image.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectionRecord {
    pub image: String,
    pub width: u32,
    pub height: u32,
    pub hands: Vec<DetectedHand>,
}

impl DetectionRecord {
    /// Kept by [`filter_in_bounds`].
    pub fn is_kept(&self) -> bool {
        !self.hands.is_empty() && self.hands.iter().all(|h| h.is_inside(self.width, self.height))
    }
}

/// Splits records into those whose every hand lies fully inside the image
/// and the rest. Records without hands are discarded. Order is preserved
/// within each part.
pub fn filter_in_bounds(
    records: impl IntoIterator<Item = DetectionRecord>,
) -> (Vec<DetectionRecord>, Vec<DetectionRecord>) {
    records.into_iter().partition(DetectionRecord::is_kept)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IngestError {
    NoHands,
    SizeMismatch {
        record: (u32, u32),
        config: (u32, u32),
    },
    Annotate(AnnotateError),
}

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IngestError::NoHands => f.write_str("record has no hands; filter records first"),
            IngestError::SizeMismatch { record, config } => write!(
                f,
                "record is {}x{} but raster config is {}x{}",
                record.0, record.1, config.0, config.1
            ),
            IngestError::Annotate(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for IngestError {}

impl From<AnnotateError> for IngestError {
    fn from(e: AnnotateError) -> Self {
        IngestError::Annotate(e)
    }
}

/// Rasterizes a record's hands, each with its own handedness code. The
/// raster config must match the record's image size.
pub fn annotate_record(
    record: &DetectionRecord,
    config: &RasterConfig,
    codes: &ChannelCodes,
) -> Result<AnnotationImage, IngestError> {
    if record.hands.is_empty() {
        return Err(IngestError::NoHands);
    }
    if (record.width, record.height) != (config.width(), config.height()) {
        return Err(IngestError::SizeMismatch {
            record: (record.width, record.height),
            config: (config.width(), config.height()),
        });
    }
    let poses = record
        .hands
        .iter()
        .map(DetectedHand::to_pose)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rasterize(&poses, config, codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn hand_at(x: f64, y: f64) -> DetectedHand {
        let mut kp = [Keypoint::new(x, y, 0.0); KEYPOINT_COUNT];
        for (i, k) in kp.iter_mut().enumerate() {
            k.x += (i % 5) as f64;
            k.y += (i / 5) as f64;
        }
        DetectedHand::new(Handedness::Right, 0.9, kp).unwrap()
    }

    fn record(name: &str, hands: Vec<DetectedHand>) -> DetectionRecord {
        DetectionRecord {
            image: name.to_string(),
            width: 256,
            height: 256,
            hands,
        }
    }

    #[test]
    fn decision_table() {
        let inside = record("a", vec![hand_at(100.0, 100.0)]);
        let mut neg = hand_at(100.0, 100.0);
        neg.keypoints[3].x = -3.0;
        let negative = record("b", vec![neg]);
        let mut edge = hand_at(100.0, 100.0);
        edge.keypoints[12].x = 256.0;
        let at_width = record("c", vec![edge]);
        let empty = record("d", vec![]);
        let mut just_inside = hand_at(100.0, 100.0);
        just_inside.keypoints[0] = Keypoint::new(0.0, 255.999, 0.0);
        let corner = record("e", vec![just_inside]);

        let input = vec![inside, negative, at_width, empty, corner];
        let (kept, discarded) = filter_in_bounds(input.clone());
        let names = |v: &[DetectionRecord]| v.iter().map(|r| r.image.clone()).collect::<Vec<_>>();
        assert_eq!(names(&kept), ["a", "e"]);
        assert_eq!(names(&discarded), ["b", "c", "d"]);
    }

    #[test]
    fn confidence_range_checked() {
        let kp = [Keypoint::default(); KEYPOINT_COUNT];
        assert_eq!(
            DetectedHand::new(Handedness::Left, 1.3, kp),
            Err(RecordError::ConfidenceOutOfRange(1.3))
        );
        assert!(DetectedHand::new(Handedness::Left, f64::NAN, kp).is_err());
        assert!(DetectedHand::new(Handedness::Left, 0.0, kp).is_ok());
        assert!(DetectedHand::new(Handedness::Left, 1.0, kp).is_ok());
    }

    #[test]
    fn annotate_requires_hands_and_matching_size() {
        let codes = ChannelCodes::STANDARD;
        let cfg = RasterConfig::for_size(256, 256).unwrap();
        assert_eq!(
            annotate_record(&record("x", vec![]), &cfg, &codes),
            Err(IngestError::NoHands)
        );
        let small = RasterConfig::for_size(128, 128).unwrap();
        assert!(matches!(
            annotate_record(&record("x", vec![hand_at(5.0, 5.0)]), &small, &codes),
            Err(IngestError::SizeMismatch { .. })
        ));
        let ann = annotate_record(&record("x", vec![hand_at(50.0, 50.0)]), &cfg, &codes).unwrap();
        assert!(ann.plane_handed().iter().all(|&v| v == 0 || v == 200));
        assert!(ann.support_len() > 0);
    }
}
