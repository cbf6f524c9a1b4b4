//! Packed six-channel files on disk. The byte layout is defined in
//! [`handmark_core::container`].

use std::fs;
use std::path::Path;

use handmark_core::SixChannelImage;

use crate::{Error, Result};

/// Conventional extension for packed files.
pub const EXTENSION: &str = "h6c";

pub fn write_packed(img: &SixChannelImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, img.to_bytes()).map_err(Error::io(path))
}

pub fn read_packed(path: impl AsRef<Path>) -> Result<SixChannelImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(Error::io(path))?;
    SixChannelImage::from_bytes(&bytes).map_err(|source| Error::Format {
        path: path.to_path_buf(),
        source,
    })
}
