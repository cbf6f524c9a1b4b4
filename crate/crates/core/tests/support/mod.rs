//! Reference implementations used as test oracles. Written independently of
//! the library's drawing and sorting code.

#![allow(dead_code)]

use handmark_core::topology::{ChannelCodes, BONES};
use handmark_core::ProjectedPose;

/// Squared distance from `p` to segment `ab`, by cases: endpoint regions,
/// otherwise perpendicular distance from the cross product.
pub fn segment_distance_sq(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let ab = (b.0 - a.0, b.1 - a.1);
    let ap = (p.0 - a.0, p.1 - a.1);
    let bp = (p.0 - b.0, p.1 - b.1);
    let len_sq = ab.0 * ab.0 + ab.1 * ab.1;
    let da = ap.0 * ap.0 + ap.1 * ap.1;
    if len_sq == 0.0 {
        return da;
    }
    let along = ap.0 * ab.0 + ap.1 * ab.1;
    if along <= 0.0 {
        return da;
    }
    if along >= len_sq {
        return bp.0 * bp.0 + bp.1 * bp.1;
    }
    let cross = ap.0 * ab.1 - ap.1 * ab.0;
    cross * cross / len_sq
}

/// One bone to paint: endpoints, depth, position in canonical order, codes.
#[derive(Clone, Copy, Debug)]
pub struct OracleBone {
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub depth: f64,
    pub order: usize,
    pub codes: [u8; 3],
}

pub fn oracle_bones(poses: &[ProjectedPose], codes: &ChannelCodes) -> Vec<OracleBone> {
    let mut out = Vec::new();
    for (h, pose) in poses.iter().enumerate() {
        let kp = pose.keypoints();
        for (i, bone) in BONES.iter().enumerate() {
            let (p, q) = (kp[bone.from_kp], kp[bone.to_kp]);
            out.push(OracleBone {
                a: (p.x, p.y),
                b: (q.x, q.y),
                depth: 0.5 * p.z + 0.5 * q.z,
                order: h * 20 + i,
                codes: [
                    codes.finger_codes[bone.finger as usize],
                    codes.segment_codes[bone.segment.get() as usize],
                    codes.handedness_code(pose.handedness()),
                ],
            });
        }
    }
    // selection sort: farthest first, ties by canonical order
    let mut sorted = Vec::with_capacity(out.len());
    while !out.is_empty() {
        let mut best = 0;
        for j in 1..out.len() {
            let (c, b) = (&out[j], &out[best]);
            if c.depth > b.depth || (c.depth == b.depth && c.order < b.order) {
                best = j;
            }
        }
        sorted.push(out.remove(best));
    }
    sorted
}

/// Brute force: every bone repaints every pixel within `radius`.
pub fn naive_paint(bones: &[OracleBone], radius: f64, width: u32, height: u32) -> [Vec<u8>; 3] {
    let n = (width * height) as usize;
    let mut planes = [vec![0u8; n], vec![0u8; n], vec![0u8; n]];
    for bone in bones {
        for y in 0..height {
            for x in 0..width {
                let d = segment_distance_sq((x as f64, y as f64), bone.a, bone.b);
                if d <= radius * radius {
                    let i = (y * width + x) as usize;
                    for c in 0..3 {
                        planes[c][i] = bone.codes[c];
                    }
                }
            }
        }
    }
    planes
}

pub fn naive_rasterize(
    poses: &[ProjectedPose],
    radius: f64,
    width: u32,
    height: u32,
    codes: &ChannelCodes,
) -> [Vec<u8>; 3] {
    naive_paint(&oracle_bones(poses, codes), radius, width, height)
}
