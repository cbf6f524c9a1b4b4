//! Batch jobs behind the `synth` and `annotate` commands.
//!
//! Every synthetic sample draws from its own random stream, keyed by the
//! master seed and the sample index, so a batch is byte-identical whatever
//! the worker count.

use std::fs;
use std::path::Path;

use handmark_core::annotate::rasterize;
use handmark_core::container::pack;
use handmark_core::detection::annotate_record;
use handmark_core::render::{render_stylized, Background, Palette, SKIN_TONES};
use handmark_core::synth::{sample_hand, SampledHand, SynthError};
use handmark_core::topology::Handedness;
use handmark_core::{ChannelCodes, DetectionRecord, JointLimits, RasterConfig, RgbImage, SixChannelImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::Size;
use crate::imageio::{read_rgb, write_annotation_png, write_rgb_png};
use crate::manifest::{ManifestEntry, Source, Storage};
use crate::packed::{write_packed, EXTENSION};
use crate::{Error, Result};

/// The projection fit can only fail for a pose collapsed to one point;
/// redraw from the same stream a few times before giving up.
const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// One `.h6c` file per sample.
    #[default]
    Packed,
    /// An RGB PNG plus a three-channel annotation PNG per sample.
    Paired,
}

#[derive(Debug, Clone)]
pub struct SynthSettings {
    pub seed: u64,
    pub size: Size,
    /// `None` uses the size-scaled default.
    pub stroke_radius: Option<f64>,
    pub limits: JointLimits,
    /// Already resized to `size`. Empty means random solid colours.
    pub backgrounds: Vec<RgbImage>,
}

impl SynthSettings {
    pub fn new(seed: u64, size: Size) -> Self {
        SynthSettings {
            seed,
            size,
            stroke_radius: None,
            limits: JointLimits::default(),
            backgrounds: Vec::new(),
        }
    }

    pub fn raster_config(&self) -> Result<RasterConfig> {
        let Size { width, height } = self.size;
        let radius = self
            .stroke_radius
            .unwrap_or_else(|| RasterConfig::default_radius(width, height));
        Ok(RasterConfig::new(width, height, radius)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSample {
    pub index: u64,
    pub hand: SampledHand,
    pub image: SixChannelImage,
}

impl SynthSample {
    pub fn handedness(&self) -> Handedness {
        self.hand.projected.handedness()
    }
}

pub fn sample_id(index: u64) -> String {
    format!("synth_{index:06}")
}

pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Generates sample `index` of the batch: pose, stylized render and
/// annotation planes.
pub fn synth_sample(settings: &SynthSettings, index: u64) -> Result<SynthSample> {
    let Size { width, height } = settings.size;
    let raster = settings.raster_config()?;
    let mut rng = sample_rng(settings.seed, index);

    let mut attempt = 0;
    let hand = loop {
        match sample_hand(&mut rng, &settings.limits, width, height) {
            Err(SynthError::DegenerateProjection) if attempt + 1 < MAX_ATTEMPTS => attempt += 1,
            other => break other?,
        }
    };

    let palette = Palette::from_skin(SKIN_TONES[rng.random_range(0..SKIN_TONES.len())]);
    let background = if settings.backgrounds.is_empty() {
        Background::Solid(rng.random())
    } else {
        Background::Image(&settings.backgrounds[rng.random_range(0..settings.backgrounds.len())])
    };
    let rgb = render_stylized(&hand.projected, &palette, background, width, height)
        .expect("backgrounds are resized to the batch size");
    let ann = rasterize(&[hand.projected], &raster, &ChannelCodes::STANDARD);
    let image = pack(&rgb, &ann).expect("render and annotation share a size");
    Ok(SynthSample { index, hand, image })
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

fn write_sample(
    image: &SixChannelImage,
    id: &str,
    out: &Path,
    layout: Layout,
) -> Result<Storage> {
    match layout {
        Layout::Packed => {
            let path = format!("{id}.{EXTENSION}");
            write_packed(image, out.join(&path))?;
            Ok(Storage::Packed { path: path.into() })
        }
        Layout::Paired => {
            let rgb = format!("{id}.rgb.png");
            let annotation = format!("{id}.ann.png");
            write_rgb_png(&image.rgb(), out.join(&rgb))?;
            write_annotation_png(&image.annotation(), out.join(&annotation))?;
            Ok(Storage::Paired {
                rgb: rgb.into(),
                annotation: annotation.into(),
            })
        }
    }
}

/// Writes `count` samples into `out` and returns their manifest entries in
/// index order. `workers == 0` uses every available core.
pub fn run_synth(
    settings: &SynthSettings,
    count: u64,
    out: &Path,
    layout: Layout,
    workers: usize,
) -> Result<Vec<ManifestEntry>> {
    fs::create_dir_all(out).map_err(Error::io(out))?;
    pool(workers).install(|| {
        (0..count)
            .into_par_iter()
            .map(|index| {
                let sample = synth_sample(settings, index)?;
                let id = sample_id(index);
                let storage = write_sample(&sample.image, &id, out, layout)?;
                Ok(ManifestEntry {
                    id,
                    storage,
                    handedness: vec![sample.handedness()],
                    source: Source::Synthetic,
                    width: settings.size.width,
                    height: settings.size.height,
                })
            })
            .collect()
    })
}

/// Annotates one detection record over its photo.
pub fn annotate_photo(
    record: &DetectionRecord,
    images: &Path,
    stroke_radius: Option<f64>,
) -> Result<SixChannelImage> {
    let path = images.join(&record.image);
    let rgb = read_rgb(&path)?;
    let expected = (record.width, record.height);
    if (rgb.width(), rgb.height()) != expected {
        return Err(Error::ImageSize {
            path,
            expected,
            actual: (rgb.width(), rgb.height()),
        });
    }
    let radius = stroke_radius.unwrap_or_else(|| RasterConfig::default_radius(record.width, record.height));
    let config = RasterConfig::new(record.width, record.height, radius)?;
    let ann = annotate_record(record, &config, &ChannelCodes::STANDARD).map_err(|source| Error::Ingest {
        image: record.image.clone(),
        source,
    })?;
    Ok(pack(&rgb, &ann).expect("photo size checked against the record"))
}

/// Writes one packed file per record (all expected to be kept) and returns
/// their manifest entries in input order.
pub fn run_annotate(
    records: &[DetectionRecord],
    images: &Path,
    out: &Path,
    stroke_radius: Option<f64>,
    workers: usize,
) -> Result<Vec<ManifestEntry>> {
    fs::create_dir_all(out).map_err(Error::io(out))?;
    pool(workers).install(|| {
        records
            .par_iter()
            .enumerate()
            .map(|(i, record)| {
                let image = annotate_photo(record, images, stroke_radius)?;
                let id = format!("real_{i:06}");
                let storage = write_sample(&image, &id, out, Layout::Packed)?;
                Ok(ManifestEntry {
                    id,
                    storage,
                    handedness: record.hands.iter().map(|h| h.handedness).collect(),
                    source: Source::Real,
                    width: record.width,
                    height: record.height,
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use handmark_core::annotate::{validate, EXACT_TOLERANCE};

    #[test]
    fn samples_are_deterministic_and_distinct() {
        let s = SynthSettings::new(1, Size::new(64, 64).unwrap());
        let a = synth_sample(&s, 3).unwrap();
        assert_eq!(a, synth_sample(&s, 3).unwrap());
        assert_ne!(a.image, synth_sample(&s, 4).unwrap().image);
        let report = validate(&a.image.annotation(), &ChannelCodes::STANDARD, EXACT_TOLERANCE);
        assert!(report.passes(), "{report:?}");
        assert!(a.image.annotation().support_len() > 0);
    }

    #[test]
    fn background_images_are_used() {
        let mut s = SynthSettings::new(9, Size::new(32, 32).unwrap());
        s.backgrounds = vec![RgbImage::filled(32, 32, [1, 2, 3])];
        let rgb = synth_sample(&s, 0).unwrap().image.rgb();
        assert_eq!(rgb.get(0, 0), [1, 2, 3]);
    }
}
