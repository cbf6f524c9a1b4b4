//! Dataset manifests.
//!
//! A manifest is a JSON document listing every sample of a dataset. Paths
//! are relative to the directory holding the manifest.
//!
//! ```json
//! { "version": 1,
//!   "entries": [
//!     { "id": "synth_000000",
//!       "storage": { "kind": "packed", "path": "synth_000000.h6c" },
//!       "handedness": ["right"], "source": "synthetic", "width": 256, "height": 256 },
//!     { "id": "real_000004",
//!       "storage": { "kind": "paired", "rgb": "real_000004.rgb.png",
//!                    "annotation": "real_000004.ann.png" },
//!       "handedness": ["left", "right"], "source": "real", "width": 640, "height": 480 } ] }
//! ```
//!
//! `handedness` lists one value per annotated hand.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use handmark_core::container::pack;
use handmark_core::topology::Handedness;
use handmark_core::SixChannelImage;
use serde::{Deserialize, Serialize};

use crate::imageio::{read_annotation_png, read_rgb};
use crate::packed::read_packed;
use crate::{Error, Result};

pub const MANIFEST_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Storage {
    Packed { path: PathBuf },
    Paired { rgb: PathBuf, annotation: PathBuf },
}

impl Storage {
    pub fn paths(&self) -> Vec<&Path> {
        match self {
            Storage::Packed { path } => vec![path],
            Storage::Paired { rgb, annotation } => vec![rgb, annotation],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Synthetic,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub storage: Storage,
    pub handedness: Vec<Handedness>,
    pub source: Source,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("duplicate entry id {0:?}")]
    DuplicateId(String),
    #[error("unsupported manifest version {0}")]
    UnknownVersion(u64),
    #[error("entry {id:?} references missing file {path}")]
    MissingFile { id: String, path: PathBuf },
    #[error("invalid manifest {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

fn check_unique(entries: &[ManifestEntry]) -> Result<(), ManifestError> {
    let mut seen = HashSet::new();
    for e in entries {
        if !seen.insert(e.id.as_str()) {
            return Err(ManifestError::DuplicateId(e.id.clone()));
        }
    }
    Ok(())
}

pub fn write_manifest(entries: &[ManifestEntry], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    check_unique(entries)?;
    let manifest = Manifest {
        version: MANIFEST_VERSION,
        entries: entries.to_vec(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(path, text + "\n").map_err(Error::io(path))
}

/// Reads a manifest and checks that every referenced file exists.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let parse_err = |source| ManifestError::Parse {
        path: path.to_path_buf(),
        source,
    };

    #[derive(Deserialize)]
    struct Header {
        version: u64,
    }
    let header: Header = serde_json::from_str(&text).map_err(parse_err)?;
    if header.version != u64::from(MANIFEST_VERSION) {
        return Err(ManifestError::UnknownVersion(header.version).into());
    }
    let manifest: Manifest = serde_json::from_str(&text).map_err(parse_err)?;
    check_unique(&manifest.entries)?;

    let base = base_dir(path);
    for e in &manifest.entries {
        for p in e.storage.paths() {
            if !base.join(p).is_file() {
                return Err(ManifestError::MissingFile {
                    id: e.id.clone(),
                    path: p.to_path_buf(),
                }
                .into());
            }
        }
    }
    Ok(manifest)
}

/// Directory that relative entry paths resolve against.
pub fn base_dir(manifest_path: &Path) -> PathBuf {
    manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default()
}

/// Loads an entry's six-channel image, whichever storage it uses.
pub fn load_entry(base: &Path, entry: &ManifestEntry) -> Result<SixChannelImage> {
    match &entry.storage {
        Storage::Packed { path } => read_packed(base.join(path)),
        Storage::Paired { rgb, annotation } => {
            let rgb_path = base.join(rgb);
            let ann_path = base.join(annotation);
            let rgb = read_rgb(&rgb_path)?;
            let ann = read_annotation_png(&ann_path)?;
            pack(&rgb, &ann).map_err(|source| Error::Format {
                path: ann_path,
                source,
            })
        }
    }
}
