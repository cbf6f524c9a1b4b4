//! Stylized RGB hand rendering.
//!
//! The hand is a palm polygon (wrist plus the five segment-0 endpoints) and
//! one outlined capsule per bone, composited over a background in the same
//! farthest-first order the annotator uses.

use alloc::vec::Vec;
use core::fmt;

use crate::annotate::{draw_order, ProjectedPose};
use crate::container::RgbImage;
use crate::raster::{for_each_capsule_pixel, for_each_triangle_pixel, Capsule};

/// Keypoints of the palm polygon, in perimeter order.
pub const PALM_POLYGON: [usize; 6] = [0, 1, 5, 9, 13, 17];

/// A small set of skin tones used by the synthetic generator.
pub const SKIN_TONES: [[u8; 3]; 6] = [
    [255, 224, 196],
    [241, 194, 125],
    [224, 172, 105],
    [198, 134, 66],
    [141, 85, 36],
    [92, 58, 34],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Palette {
    pub skin: [u8; 3],
    pub outline: [u8; 3],
}

impl Palette {
    /// Skin fill with an outline at 55% brightness.
    pub fn from_skin(skin: [u8; 3]) -> Self {
        Palette {
            skin,
            outline: skin.map(|c| (u16::from(c) * 55 / 100) as u8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Background<'a> {
    Solid([u8; 3]),
    Image(&'a RgbImage),
}

/// Stroke sizes in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderStyle {
    pub finger_radius: f64,
    pub outline_width: f64,
}

impl RenderStyle {
    pub fn for_size(width: u32, height: u32) -> Self {
        let side = f64::from(width.min(height));
        RenderStyle {
            finger_radius: (0.03 * side).max(2.0),
            outline_width: (0.006 * side).max(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderError {
    BackgroundSize {
        expected: (u32, u32),
        actual: (u32, u32),
    },
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::BackgroundSize { expected, actual } => write!(
                f,
                "background is {}x{}, expected {}x{}",
                actual.0, actual.1, expected.0, expected.1
            ),
        }
    }
}

impl core::error::Error for RenderError {}

enum Part {
    Palm,
    Bone { from: usize, to: usize },
}

pub fn render_stylized(
    pose: &ProjectedPose,
    palette: &Palette,
    background: Background<'_>,
    width: u32,
    height: u32,
) -> Result<RgbImage, RenderError> {
    render_with_style(
        pose,
        palette,
        background,
        width,
        height,
        &RenderStyle::for_size(width, height),
    )
}

pub fn render_with_style(
    pose: &ProjectedPose,
    palette: &Palette,
    background: Background<'_>,
    width: u32,
    height: u32,
    style: &RenderStyle,
) -> Result<RgbImage, RenderError> {
    let mut img = match background {
        Background::Solid(c) => RgbImage::filled(width, height, c),
        Background::Image(bg) => {
            if (bg.width(), bg.height()) != (width, height) {
                return Err(RenderError::BackgroundSize {
                    expected: (width, height),
                    actual: (bg.width(), bg.height()),
                });
            }
            bg.clone()
        }
    };

    let kp = pose.keypoints();
    let palm_depth = PALM_POLYGON.iter().map(|&i| kp[i].z).sum::<f64>() / PALM_POLYGON.len() as f64;
    let bones = draw_order(core::slice::from_ref(pose));
    let palm_at = bones
        .iter()
        .position(|b| b.depth <= palm_depth)
        .unwrap_or(bones.len());
    let mut parts: Vec<Part> = bones
        .iter()
        .map(|b| Part::Bone {
            from: b.bone.from_kp,
            to: b.bone.to_kp,
        })
        .collect();
    parts.insert(palm_at, Part::Palm);

    let capsule = |a: usize, b: usize, radius: f64| Capsule {
        ax: kp[a].x,
        ay: kp[a].y,
        bx: kp[b].x,
        by: kp[b].y,
        radius,
    };
    for part in parts {
        match part {
            Part::Palm => {
                let p = |i: usize| (kp[i].x, kp[i].y);
                for w in PALM_POLYGON[1..].windows(2) {
                    let tri = [p(PALM_POLYGON[0]), p(w[0]), p(w[1])];
                    for_each_triangle_pixel(tri, width, height, |x, y| img.put(x, y, palette.skin));
                }
                for (i, &a) in PALM_POLYGON.iter().enumerate() {
                    let b = PALM_POLYGON[(i + 1) % PALM_POLYGON.len()];
                    let edge = capsule(a, b, style.outline_width / 2.0);
                    for_each_capsule_pixel(&edge, width, height, |x, y| {
                        img.put(x, y, palette.outline)
                    });
                }
            }
            Part::Bone { from, to } => {
                let outer = capsule(from, to, style.finger_radius + style.outline_width);
                for_each_capsule_pixel(&outer, width, height, |x, y| {
                    img.put(x, y, palette.outline)
                });
                let inner = capsule(from, to, style.finger_radius);
                for_each_capsule_pixel(&inner, width, height, |x, y| img.put(x, y, palette.skin));
            }
        }
    }
    Ok(img)
}
