use std::path::PathBuf;

use handmark_core::annotate::AnnotateError;
use handmark_core::container::FormatError;
use handmark_core::detection::IngestError;
use handmark_core::metrics::MetricError;
use handmark_core::synth::SynthError;

use crate::config::ConfigError;
use crate::detections::DetectionsError;
use crate::manifest::ManifestError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        #[source]
        source: FormatError,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("{path}: image is {actual:?}, expected {expected:?}")]
    ImageSize {
        path: PathBuf,
        expected: (u32, u32),
        actual: (u32, u32),
    },
    #[error(transparent)]
    Detections(#[from] DetectionsError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{image}: {source}")]
    Ingest {
        image: String,
        #[source]
        source: IngestError,
    },
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Annotate(#[from] AnnotateError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
