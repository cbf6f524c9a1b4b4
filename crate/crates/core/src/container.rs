//! Six-channel images and the packed byte layout.
//!
//! ```text
//! offset  size      field
//! 0       8         magic "HAND6CH\0"
//! 8       2         format version, u16 little-endian (= 1)
//! 10      4         width, u32 little-endian
//! 14      4         height, u32 little-endian
//! 18      6*w*h     planes R, G, B, A1 (finger), A2 (segment), A3 (handedness),
//!                   each row-major, one byte per pixel
//! ```
//!
//! There is no compression and no trailing data.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::annotate::AnnotationImage;

pub const MAGIC: [u8; 8] = *b"HAND6CH\0";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 18;

/// Interleaved 8-bit RGB, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn filled(width: u32, height: u32, color: [u8; 3]) -> Self {
        let n = width as usize * height as usize;
        let mut data = Vec::with_capacity(n * 3);
        for _ in 0..n {
            data.extend_from_slice(&color);
        }
        RgbImage {
            width,
            height,
            data,
        }
    }

    /// Wraps interleaved RGB bytes; `None` when the length is not `3*w*h`.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == 3 * width as usize * height as usize).then_some(RgbImage {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: u32, y: u32, color: [u8; 3]) {
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.data[i..i + 3].copy_from_slice(&color);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatError {
    DimensionMismatch {
        rgb: (u32, u32),
        annotation: (u32, u32),
    },
    BadMagic,
    UnsupportedVersion(u16),
    Truncated {
        expected: usize,
        actual: usize,
    },
    TrailingBytes {
        expected: usize,
        actual: usize,
    },
    /// `6*w*h` does not fit in memory.
    TooLarge {
        width: u32,
        height: u32,
    },
    PlaneSize {
        expected: usize,
        actual: usize,
    },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FormatError::DimensionMismatch { rgb, annotation } => write!(
                f,
                "RGB image is {}x{} but annotation is {}x{}",
                rgb.0, rgb.1, annotation.0, annotation.1
            ),
            FormatError::BadMagic => f.write_str("not a packed six-channel file (bad magic)"),
            FormatError::UnsupportedVersion(v) => write!(f, "unsupported format version {v}"),
            FormatError::Truncated { expected, actual } => {
                write!(f, "truncated file: {actual} bytes, expected {expected}")
            }
            FormatError::TrailingBytes { expected, actual } => {
                write!(f, "{actual} bytes, expected exactly {expected}")
            }
            FormatError::TooLarge { width, height } => {
                write!(f, "image {width}x{height} is too large")
            }
            FormatError::PlaneSize { expected, actual } => {
                write!(f, "plane has {actual} bytes, expected {expected}")
            }
        }
    }
}

impl core::error::Error for FormatError {}

/// RGB plus the three annotation planes, stored planar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixChannelImage {
    width: u32,
    height: u32,
    /// R, G, B, finger, segment, handedness.
    planes: [Vec<u8>; 6],
}

impl SixChannelImage {
    pub const CHANNELS: usize = 6;

    pub fn from_planes(width: u32, height: u32, planes: [Vec<u8>; 6]) -> Result<Self, FormatError> {
        let expected = width as usize * height as usize;
        if let Some(p) = planes.iter().find(|p| p.len() != expected) {
            return Err(FormatError::PlaneSize {
                expected,
                actual: p.len(),
            });
        }
        Ok(SixChannelImage {
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

    /// Plane `index` in order R, G, B, A1, A2, A3.
    pub fn plane(&self, index: usize) -> &[u8] {
        &self.planes[index]
    }

    pub fn planes(&self) -> &[Vec<u8>; 6] {
        &self.planes
    }

    pub fn rgb(&self) -> RgbImage {
        let n = self.planes[0].len();
        let mut data = Vec::with_capacity(3 * n);
        for i in 0..n {
            data.extend_from_slice(&[self.planes[0][i], self.planes[1][i], self.planes[2][i]]);
        }
        RgbImage {
            width: self.width,
            height: self.height,
            data,
        }
    }

    pub fn annotation(&self) -> AnnotationImage {
        AnnotationImage::from_planes(
            self.width,
            self.height,
            [
                self.planes[3].clone(),
                self.planes[4].clone(),
                self.planes[5].clone(),
            ],
        )
        .expect("planes share dimensions")
    }

    fn payload_len(width: u32, height: u32) -> Option<usize> {
        (width as usize)
            .checked_mul(height as usize)?
            .checked_mul(Self::CHANNELS)?
            .checked_add(HEADER_LEN)
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + Self::CHANNELS * self.planes[0].len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        for p in &self.planes {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, FormatError> {
        if bytes.len() < MAGIC.len() {
            return if MAGIC.starts_with(bytes) {
                Err(FormatError::Truncated {
                    expected: HEADER_LEN,
                    actual: bytes.len(),
                })
            } else {
                Err(FormatError::BadMagic)
            };
        }
        if bytes[..8] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::Truncated {
                expected: HEADER_LEN,
                actual: bytes.len(),
            });
        }
        let version = u16::from_le_bytes([bytes[8], bytes[9]]);
        if version != FORMAT_VERSION {
            return Err(FormatError::UnsupportedVersion(version));
        }
        let width = u32::from_le_bytes(bytes[10..14].try_into().expect("4 bytes"));
        let height = u32::from_le_bytes(bytes[14..18].try_into().expect("4 bytes"));
        let expected =
            Self::payload_len(width, height).ok_or(FormatError::TooLarge { width, height })?;
        if bytes.len() < expected {
            return Err(FormatError::Truncated {
                expected,
                actual: bytes.len(),
            });
        }
        if bytes.len() > expected {
            return Err(FormatError::TrailingBytes {
                expected,
                actual: bytes.len(),
            });
        }
        let n = width as usize * height as usize;
        let body = &bytes[HEADER_LEN..];
        let planes = core::array::from_fn(|c| body[c * n..(c + 1) * n].to_vec());
        Ok(SixChannelImage {
            width,
            height,
            planes,
        })
    }
}

/// Combines an RGB image with its annotation planes.
pub fn pack(rgb: &RgbImage, ann: &AnnotationImage) -> Result<SixChannelImage, FormatError> {
    if (rgb.width, rgb.height) != (ann.width(), ann.height()) {
        return Err(FormatError::DimensionMismatch {
            rgb: (rgb.width, rgb.height),
            annotation: (ann.width(), ann.height()),
        });
    }
    let n = rgb.width as usize * rgb.height as usize;
    let mut r = vec![0; n];
    let mut g = vec![0; n];
    let mut b = vec![0; n];
    for (i, px) in rgb.data.chunks_exact(3).enumerate() {
        r[i] = px[0];
        g[i] = px[1];
        b[i] = px[2];
    }
    let [a1, a2, a3] = ann.clone().into_planes();
    Ok(SixChannelImage {
        width: rgb.width,
        height: rgb.height,
        planes: [r, g, b, a1, a2, a3],
    })
}
