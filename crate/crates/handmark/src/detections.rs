//! The detections file: one JSON document per detector run.
//!
//! ```json
//! { "version": 1,
//!   "records": [
//!     { "image": "img_0001.jpg", "width": 640, "height": 480,
//!       "hands": [
//!         { "handedness": "left", "confidence": 0.93,
//!           "keypoints": [ { "x": 312.5, "y": 200.0, "z": -0.01 }, ... 21 total ] } ] } ] }
//! ```
//!
//! Unknown fields (a detector version string, a list of skipped images) are
//! ignored. Schema violations are reported with the record index and the
//! path of the offending field.

use std::fmt;
use std::fs;
use std::path::Path;

use handmark_core::topology::{Handedness, KEYPOINT_COUNT};
use handmark_core::{DetectedHand, DetectionRecord, Keypoint};
use serde_json::{json, Map, Value};

use crate::{Error, Result};

pub const DETECTIONS_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionsError {
    /// Index into `records`, when the problem is inside one.
    pub record: Option<usize>,
    /// Dotted path of the field, relative to the record (or the document).
    pub field: String,
    pub message: String,
}

impl fmt::Display for DetectionsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.record {
            Some(i) => write!(f, "record {i}, field `{}`: {}", self.field, self.message),
            None => write!(f, "field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for DetectionsError {}

struct Cursor {
    record: Option<usize>,
}

impl Cursor {
    fn err(&self, field: impl Into<String>, message: impl Into<String>) -> DetectionsError {
        DetectionsError {
            record: self.record,
            field: field.into(),
            message: message.into(),
        }
    }

    fn get<'a>(&self, obj: &'a Map<String, Value>, prefix: &str, key: &str) -> Result<&'a Value, DetectionsError> {
        obj.get(key)
            .ok_or_else(|| self.err(join(prefix, key), "missing field"))
    }

    fn object<'a>(&self, v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, DetectionsError> {
        v.as_object()
            .ok_or_else(|| self.err(field, format!("expected an object, found {}", kind(v))))
    }

    fn array<'a>(&self, v: &'a Value, field: &str) -> Result<&'a Vec<Value>, DetectionsError> {
        v.as_array()
            .ok_or_else(|| self.err(field, format!("expected an array, found {}", kind(v))))
    }

    fn number(&self, v: &Value, field: &str) -> Result<f64, DetectionsError> {
        v.as_f64()
            .ok_or_else(|| self.err(field, format!("expected a number, found {}", kind(v))))
    }

    fn dimension(&self, v: &Value, field: &str) -> Result<u32, DetectionsError> {
        v.as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| self.err(field, format!("expected a positive integer, found {v}")))
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn parse_hand(c: &Cursor, v: &Value, prefix: &str) -> Result<DetectedHand, DetectionsError> {
    let obj = c.object(v, prefix)?;
    let field = join(prefix, "handedness");
    let handedness = c
        .get(obj, prefix, "handedness")?
        .as_str()
        .and_then(Handedness::parse)
        .ok_or_else(|| c.err(&field, "expected \"left\" or \"right\""))?;

    let field = join(prefix, "confidence");
    let confidence = c.number(c.get(obj, prefix, "confidence")?, &field)?;
    if !(0.0..=1.0).contains(&confidence) {
        return Err(c.err(field, format!("confidence {confidence} outside [0, 1]")));
    }

    let field = join(prefix, "keypoints");
    let list = c.array(c.get(obj, prefix, "keypoints")?, &field)?;
    if list.len() != KEYPOINT_COUNT {
        return Err(c.err(
            field,
            format!("expected {KEYPOINT_COUNT} keypoints, found {}", list.len()),
        ));
    }
    let mut keypoints = [Keypoint::default(); KEYPOINT_COUNT];
    for (i, (kv, out)) in list.iter().zip(keypoints.iter_mut()).enumerate() {
        let kp_prefix = format!("{field}[{i}]");
        let kobj = c.object(kv, &kp_prefix)?;
        let coord = |axis: &str| -> Result<f64, DetectionsError> {
            c.number(c.get(kobj, &kp_prefix, axis)?, &join(&kp_prefix, axis))
        };
        *out = Keypoint::new(coord("x")?, coord("y")?, coord("z")?);
    }
    DetectedHand::new(handedness, confidence, keypoints).map_err(|e| c.err(prefix, e.to_string()))
}

fn parse_record(c: &Cursor, v: &Value) -> Result<DetectionRecord, DetectionsError> {
    let obj = c.object(v, "")?;
    let image = c
        .get(obj, "", "image")?
        .as_str()
        .ok_or_else(|| c.err("image", "expected a string"))?
        .to_string();
    let width = c.dimension(c.get(obj, "", "width")?, "width")?;
    let height = c.dimension(c.get(obj, "", "height")?, "height")?;
    let hands = c
        .array(c.get(obj, "", "hands")?, "hands")?
        .iter()
        .enumerate()
        .map(|(i, h)| parse_hand(c, h, &format!("hands[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DetectionRecord {
        image,
        width,
        height,
        hands,
    })
}

/// Parses a detections document already loaded as text.
pub fn parse_detections_str(text: &str) -> Result<Vec<DetectionRecord>, DetectionsError> {
    let root: Value = serde_json::from_str(text).map_err(|e| DetectionsError {
        record: None,
        field: String::new(),
        message: format!("invalid JSON: {e}"),
    })?;
    let doc = Cursor { record: None };
    let obj = doc.object(&root, "")?;
    let version = doc.get(obj, "", "version")?;
    if version.as_u64() != Some(DETECTIONS_VERSION) {
        return Err(doc.err("version", format!("unsupported version {version}")));
    }
    let records = doc.array(doc.get(obj, "", "records")?, "records")?;
    records
        .iter()
        .enumerate()
        .map(|(i, r)| parse_record(&Cursor { record: Some(i) }, r))
        .collect()
}

pub fn parse_detections(path: impl AsRef<Path>) -> Result<Vec<DetectionRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    Ok(parse_detections_str(&text)?)
}

pub fn to_value(records: &[DetectionRecord]) -> Value {
    let records: Vec<Value> = records
        .iter()
        .map(|r| {
            let hands: Vec<Value> = r
                .hands
                .iter()
                .map(|h| {
                    let kps: Vec<Value> = h
                        .keypoints
                        .iter()
                        .map(|k| json!({ "x": k.x, "y": k.y, "z": k.z }))
                        .collect();
                    json!({
                        "handedness": h.handedness.name(),
                        "confidence": h.confidence,
                        "keypoints": kps,
                    })
                })
                .collect();
            json!({ "image": r.image, "width": r.width, "height": r.height, "hands": hands })
        })
        .collect();
    json!({ "version": DETECTIONS_VERSION, "records": records })
}

pub fn to_string(records: &[DetectionRecord]) -> String {
    serde_json::to_string_pretty(&to_value(records)).expect("JSON values always serialize")
}

pub fn write_detections(records: &[DetectionRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_string(records) + "\n").map_err(Error::io(path))
}
