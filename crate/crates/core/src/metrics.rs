//! Hand-quality metrics over detector output.
//!
//! - Mean confidence: arithmetic mean of per-hand detector confidence.
//! - Above-threshold fraction: share of hands with confidence `>=` the
//!   threshold (0.9 by default).
//! - Mean joint ratio difference (MJRD): Euclidean distance between the
//!   L2-normalized mean bone-length vectors of a generated and a reference
//!   set of hands.
//!
//! Images in which the detector found no hand contribute one confidence of
//! 0 to both confidence metrics and no bone-length vector. Hands are pooled
//! across images.

use alloc::vec::Vec;
use core::fmt;

use crate::detection::{DetectedHand, DetectionRecord};
use crate::geometry::Keypoint;
use crate::math::{sqrt, CompensatedSum};
use crate::topology::{BONES, BONE_COUNT, KEYPOINT_COUNT};

pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// Side of a comparison, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Generated,
    Reference,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Generated => "generated",
            Side::Reference => "reference",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricError {
    Empty(Side),
    /// The mean bone-length vector has zero norm.
    ZeroNorm(Side),
    InvalidThreshold(f64),
    InvalidLengths,
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::Empty(side) => write!(f, "{side} set is empty"),
            MetricError::ZeroNorm(side) => {
                write!(f, "{side} mean joint-length vector has zero norm")
            }
            MetricError::InvalidThreshold(t) => write!(f, "threshold {t} outside [0, 1]"),
            MetricError::InvalidLengths => {
                f.write_str("joint lengths must be finite and non-negative")
            }
        }
    }
}

impl core::error::Error for MetricError {}

/// Pixel-plane lengths of the 20 bones, canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JointLengths([f64; BONE_COUNT]);

impl JointLengths {
    pub fn new(lengths: [f64; BONE_COUNT]) -> Result<Self, MetricError> {
        if lengths.iter().all(|l| l.is_finite() && *l >= 0.0) {
            Ok(JointLengths(lengths))
        } else {
            Err(MetricError::InvalidLengths)
        }
    }

    pub fn from_keypoints(keypoints: &[Keypoint; KEYPOINT_COUNT]) -> Self {
        JointLengths(BONES.map(|b| {
            let (p, q) = (keypoints[b.from_kp], keypoints[b.to_kp]);
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            sqrt(dx * dx + dy * dy)
        }))
    }

    pub fn as_array(&self) -> &[f64; BONE_COUNT] {
        &self.0
    }
}

/// 2D bone lengths of one detected hand; z is ignored.
pub fn joint_lengths(hand: &DetectedHand) -> JointLengths {
    JointLengths::from_keypoints(&hand.keypoints)
}

fn mean_vector(hands: &[JointLengths], side: Side) -> Result<[f64; BONE_COUNT], MetricError> {
    if hands.is_empty() {
        return Err(MetricError::Empty(side));
    }
    let mut sums = [CompensatedSum::default(); BONE_COUNT];
    for h in hands {
        for (s, &v) in sums.iter_mut().zip(h.0.iter()) {
            s.add(v);
        }
    }
    let n = hands.len() as f64;
    Ok(sums.map(|s| s.total() / n))
}

fn l2_norm(v: &[f64]) -> f64 {
    let mut s = CompensatedSum::default();
    for &x in v {
        s.add(x * x);
    }
    sqrt(s.total())
}

fn normalized(v: &[f64; BONE_COUNT], side: Side) -> Result<[f64; BONE_COUNT], MetricError> {
    let norm = l2_norm(v);
    if !(norm > 0.0) {
        return Err(MetricError::ZeroNorm(side));
    }
    Ok(v.map(|x| x / norm))
}

/// Mean and normalized mean bone-length vectors of both sides, and the
/// resulting distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MjrdBreakdown {
    pub mean_generated: [f64; BONE_COUNT],
    pub mean_reference: [f64; BONE_COUNT],
    pub normalized_generated: [f64; BONE_COUNT],
    pub normalized_reference: [f64; BONE_COUNT],
    pub value: f64,
}

pub fn mjrd_breakdown(
    generated: &[JointLengths],
    reference: &[JointLengths],
) -> Result<MjrdBreakdown, MetricError> {
    let mean_generated = mean_vector(generated, Side::Generated)?;
    let mean_reference = mean_vector(reference, Side::Reference)?;
    let normalized_generated = normalized(&mean_generated, Side::Generated)?;
    let normalized_reference = normalized(&mean_reference, Side::Reference)?;
    let diff: Vec<f64> = normalized_reference
        .iter()
        .zip(normalized_generated.iter())
        .map(|(d, g)| d - g)
        .collect();
    Ok(MjrdBreakdown {
        mean_generated,
        mean_reference,
        normalized_generated,
        normalized_reference,
        value: l2_norm(&diff),
    })
}

/// Mean joint ratio difference between two sets of hands.
pub fn mjrd(generated: &[JointLengths], reference: &[JointLengths]) -> Result<f64, MetricError> {
    mjrd_breakdown(generated, reference).map(|b| b.value)
}

/// Per-hand confidences, with one 0 for every record without hands.
pub fn pooled_confidences(records: &[DetectionRecord]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in records {
        if r.hands.is_empty() {
            out.push(0.0);
        } else {
            out.extend(r.hands.iter().map(|h| h.confidence));
        }
    }
    out
}

pub fn mean_confidence(records: &[DetectionRecord]) -> Result<f64, MetricError> {
    let c = pooled_confidences(records);
    if c.is_empty() {
        return Err(MetricError::Empty(Side::Generated));
    }
    let mut s = CompensatedSum::default();
    for &v in &c {
        s.add(v);
    }
    Ok(s.total() / c.len() as f64)
}

/// Share of hands whose confidence is at least `threshold`.
pub fn above_fraction(records: &[DetectionRecord], threshold: f64) -> Result<f64, MetricError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(MetricError::InvalidThreshold(threshold));
    }
    let c = pooled_confidences(records);
    if c.is_empty() {
        return Err(MetricError::Empty(Side::Generated));
    }
    let hits = c.iter().filter(|&&v| v >= threshold).count();
    Ok(hits as f64 / c.len() as f64)
}

fn all_lengths(records: &[DetectionRecord]) -> Vec<JointLengths> {
    records
        .iter()
        .flat_map(|r| r.hands.iter().map(joint_lengths))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    /// Images on each side.
    pub n_generated: usize,
    pub n_reference: usize,
    /// Detected hands on each side.
    pub n_generated_hands: usize,
    pub n_reference_hands: usize,
    pub threshold: f64,
    pub mean_confidence: f64,
    pub above_threshold_fraction: f64,
    pub reference_mean_confidence: f64,
    pub reference_above_threshold_fraction: f64,
    pub mjrd: f64,
    pub mean_generated: [f64; BONE_COUNT],
    pub mean_reference: [f64; BONE_COUNT],
    pub normalized_generated: [f64; BONE_COUNT],
    pub normalized_reference: [f64; BONE_COUNT],
}

/// All metrics of `generated` against `reference`.
pub fn report(
    generated: &[DetectionRecord],
    reference: &[DetectionRecord],
    threshold: f64,
) -> Result<MetricsReport, MetricError> {
    if generated.is_empty() {
        return Err(MetricError::Empty(Side::Generated));
    }
    if reference.is_empty() {
        return Err(MetricError::Empty(Side::Reference));
    }
    let side = |e: MetricError, s: Side| match e {
        MetricError::Empty(_) => MetricError::Empty(s),
        other => other,
    };
    let gen_lengths = all_lengths(generated);
    let ref_lengths = all_lengths(reference);
    let mj = mjrd_breakdown(&gen_lengths, &ref_lengths)?;
    Ok(MetricsReport {
        n_generated: generated.len(),
        n_reference: reference.len(),
        n_generated_hands: gen_lengths.len(),
        n_reference_hands: ref_lengths.len(),
        threshold,
        mean_confidence: mean_confidence(generated)?,
        above_threshold_fraction: above_fraction(generated, threshold)?,
        reference_mean_confidence: mean_confidence(reference)
            .map_err(|e| side(e, Side::Reference))?,
        reference_above_threshold_fraction: above_fraction(reference, threshold)
            .map_err(|e| side(e, Side::Reference))?,
        mjrd: mj.value,
        mean_generated: mj.mean_generated,
        mean_reference: mj.mean_reference,
        normalized_generated: mj.normalized_generated,
        normalized_reference: mj.normalized_reference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Handedness;
    use alloc::string::ToString;
    use alloc::vec;

    fn rec(confidences: &[f64]) -> DetectionRecord {
        let mut kp = [Keypoint::default(); KEYPOINT_COUNT];
        for (i, k) in kp.iter_mut().enumerate() {
            *k = Keypoint::new(i as f64, (i * i) as f64 * 0.1, 0.0);
        }
        DetectionRecord {
            image: "x".to_string(),
            width: 64,
            height: 64,
            hands: confidences
                .iter()
                .map(|&c| DetectedHand::new(Handedness::Right, c, kp).unwrap())
                .collect(),
        }
    }

    #[test]
    fn joint_length_345() {
        let mut kp = [Keypoint::default(); KEYPOINT_COUNT];
        kp[1] = Keypoint::new(3.0, 4.0, 99.0);
        let l = JointLengths::from_keypoints(&kp);
        assert_eq!(l.as_array()[0], 5.0);
        assert_eq!(l.as_array()[1], 5.0);
        assert!(l.as_array()[2..].iter().all(|&v| v == 0.0));
        let zero = JointLengths::from_keypoints(&[Keypoint::new(4.0, 4.0, 1.0); KEYPOINT_COUNT]);
        assert_eq!(zero.as_array(), &[0.0; 20]);
    }

    #[test]
    fn joint_lengths_translation_invariant() {
        let r = rec(&[0.5]);
        let a = joint_lengths(&r.hands[0]);
        let mut moved = r.hands[0].clone();
        for k in moved.keypoints.iter_mut() {
            k.x += 10.0;
            k.y -= 7.0;
        }
        let b = joint_lengths(&moved);
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn mjrd_worked_example() {
        let reference = [JointLengths::new([1.0; 20]).unwrap()];
        let mut g = [1.0; 20];
        g[0] = 2.0;
        let generated = [JointLengths::new(g).unwrap()];
        let v = mjrd(&generated, &reference).unwrap();
        assert!((v - 0.20430).abs() < 1e-5, "{v}");
    }

    #[test]
    fn mjrd_errors() {
        let ones = [JointLengths::new([1.0; 20]).unwrap()];
        let zeros = [JointLengths::new([0.0; 20]).unwrap()];
        assert_eq!(mjrd(&[], &ones), Err(MetricError::Empty(Side::Generated)));
        assert_eq!(mjrd(&ones, &[]), Err(MetricError::Empty(Side::Reference)));
        assert_eq!(mjrd(&zeros, &ones), Err(MetricError::ZeroNorm(Side::Generated)));
        assert_eq!(JointLengths::new([-1.0; 20]), Err(MetricError::InvalidLengths));
    }

    #[test]
    fn confidence_metrics() {
        let records = [rec(&[0.95]), rec(&[0.5]), rec(&[0.91]), rec(&[0.2])];
        assert!((mean_confidence(&records).unwrap() - 0.64).abs() < 1e-15);
        assert_eq!(above_fraction(&records, 0.9).unwrap(), 0.5);
        assert_eq!(above_fraction(&[rec(&[0.90])], 0.9).unwrap(), 1.0);
        assert_eq!(above_fraction(&records, 0.99).unwrap(), 0.0);
        assert_eq!(mean_confidence(&[rec(&[1.0, 1.0])]).unwrap(), 1.0);
        assert_eq!(mean_confidence(&[rec(&[])]).unwrap(), 0.0);
        assert_eq!(mean_confidence(&[]), Err(MetricError::Empty(Side::Generated)));
        assert_eq!(
            above_fraction(&records, 1.5),
            Err(MetricError::InvalidThreshold(1.5))
        );
    }

    #[test]
    fn report_of_identical_sets() {
        let records = vec![rec(&[0.95]), rec(&[0.3, 0.7])];
        let r = report(&records, &records, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(r.mjrd, 0.0);
        assert_eq!(r.mean_confidence, r.reference_mean_confidence);
        assert_eq!((r.n_generated, r.n_generated_hands), (2, 3));
    }

    #[test]
    fn report_needs_hands_for_mjrd() {
        let empty = vec![rec(&[])];
        let full = vec![rec(&[0.5])];
        assert_eq!(
            report(&empty, &full, 0.9),
            Err(MetricError::Empty(Side::Generated))
        );
        assert_eq!(report(&full, &[], 0.9), Err(MetricError::Empty(Side::Reference)));
    }
}
