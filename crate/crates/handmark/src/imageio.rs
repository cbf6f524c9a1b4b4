//! Standard image files: RGB photos, per-plane grayscale exports, the
//! three-channel annotation image, and the inspection preview.

use std::path::{Path, PathBuf};

use handmark_core::annotate::Plane;
use handmark_core::{AnnotationImage, RgbImage, SixChannelImage};
use image::imageops::FilterType;
use image::{GrayImage, ImageBuffer, Rgb};

use crate::{Error, Result};

fn image_err(path: &Path) -> impl FnOnce(image::ImageError) -> Error + '_ {
    move |source| Error::Image {
        path: path.to_path_buf(),
        source,
    }
}

fn to_buffer(img: &RgbImage) -> ImageBuffer<Rgb<u8>, Vec<u8>> {
    ImageBuffer::from_raw(img.width(), img.height(), img.as_raw().to_vec())
        .expect("RgbImage length matches its dimensions")
}

/// Loads any supported image as 8-bit RGB.
pub fn read_rgb(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let img = image::open(path).map_err(image_err(path))?.to_rgb8();
    let (w, h) = img.dimensions();
    Ok(RgbImage::from_raw(w, h, img.into_raw()).expect("decoded buffer matches dimensions"))
}

pub fn write_rgb_png(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    to_buffer(img).save(path).map_err(image_err(path))
}

pub fn write_gray_png(width: u32, height: u32, data: &[u8], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    GrayImage::from_raw(width, height, data.to_vec())
        .expect("plane length matches dimensions")
        .save(path)
        .map_err(image_err(path))
}

/// One three-channel PNG holding the finger, segment and handedness planes
/// as its R, G and B channels.
pub fn write_annotation_png(ann: &AnnotationImage, path: impl AsRef<Path>) -> Result<()> {
    let n = ann.width() as usize * ann.height() as usize;
    let mut data = Vec::with_capacity(3 * n);
    for i in 0..n {
        data.extend(Plane::ALL.iter().map(|&p| ann.plane(p)[i]));
    }
    let img = RgbImage::from_raw(ann.width(), ann.height(), data).expect("3 bytes per pixel");
    write_rgb_png(&img, path)
}

pub fn read_annotation_png(path: impl AsRef<Path>) -> Result<AnnotationImage> {
    let rgb = read_rgb(path)?;
    let n = rgb.width() as usize * rgb.height() as usize;
    let mut planes = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for px in rgb.as_raw().chunks_exact(3) {
        for (plane, &v) in planes.iter_mut().zip(px) {
            plane.push(v);
        }
    }
    Ok(AnnotationImage::from_planes(rgb.width(), rgb.height(), planes).expect("planes sized from image"))
}

/// RGB with the annotation planes drawn over it as colour wherever the
/// skeleton is present.
pub fn preview(img: &SixChannelImage) -> RgbImage {
    let mut out = img.rgb();
    let w = img.width() as usize;
    for i in 0..w * img.height() as usize {
        let codes = [img.plane(3)[i], img.plane(4)[i], img.plane(5)[i]];
        if codes != [0, 0, 0] {
            out.put((i % w) as u32, (i / w) as u32, codes);
        }
    }
    out
}

/// Files written by [`export_inspection`], in write order.
pub const INSPECTION_FILES: [&str; 5] = [
    "rgb.png",
    "finger.png",
    "segment.png",
    "handedness.png",
    "preview.png",
];

/// Writes the RGB image, each annotation plane as grayscale, and a preview.
pub fn export_inspection(img: &SixChannelImage, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    let paths: Vec<PathBuf> = INSPECTION_FILES.iter().map(|f| out_dir.join(f)).collect();
    write_rgb_png(&img.rgb(), &paths[0])?;
    for (c, path) in (3..6).zip(&paths[1..4]) {
        write_gray_png(img.width(), img.height(), img.plane(c), path)?;
    }
    write_rgb_png(&preview(img), &paths[4])?;
    Ok(paths)
}

/// Loads every image in `dir` (sorted by file name) and resizes it to
/// `width`×`height`.
pub fn read_backgrounds(dir: &Path, width: u32, height: u32) -> Result<Vec<RgbImage>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        })
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let img = image::open(p).map_err(image_err(p))?.to_rgb8();
            let img = image::imageops::resize(&img, width, height, FilterType::Triangle);
            Ok(RgbImage::from_raw(width, height, img.into_raw()).expect("resized to target"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_png_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let mut ann = AnnotationImage::blank(20, 17);
        ann.set(3, 4, [50, 200, 100]);
        ann.set(19, 16, [200, 250, 200]);
        let path = dir.path().join("a.png");
        write_annotation_png(&ann, &path).unwrap();
        assert_eq!(read_annotation_png(&path).unwrap(), ann);
    }

    #[test]
    fn gray_png_keeps_values() {
        let dir = tempfile::tempdir().unwrap();
        let data: Vec<u8> = (0..=255).collect();
        let path = dir.path().join("g.png");
        write_gray_png(16, 16, &data, &path).unwrap();
        let back = image::open(&path).unwrap().to_luma8();
        assert_eq!(back.into_raw(), data);
    }
}
