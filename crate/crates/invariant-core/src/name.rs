//! Validated dataset names.

use alloc::string::{String, ToString};
use core::fmt;

/// A dotted dataset name such as `aicause.kinect.scan.bottle`.
///
/// Names are dot-separated segments of `[A-Za-z0-9_]+` with at least two
/// segments: the leading segment is an organisation prefix that keeps
/// contributed datasets from colliding. The character set contains no path
/// separators, so a name is safe to use directly as an archive file name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DatasetName(String);

/// Why a candidate dataset name was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NameError {
    Empty,
    /// Fewer than two segments, i.e. no organisation prefix.
    MissingPrefix(String),
    /// A segment is empty or contains characters outside `[A-Za-z0-9_]`.
    InvalidSegment { name: String, segment: String },
}

impl fmt::Display for NameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameError::Empty => write!(f, "dataset name is empty"),
            NameError::MissingPrefix(name) => write!(
                f,
                "dataset name '{name}' needs an organisation prefix (at least two dotted segments)"
            ),
            NameError::InvalidSegment { name, segment } => write!(
                f,
                "dataset name '{name}' has invalid segment '{segment}' \
                 (segments are letters, digits and underscores)"
            ),
        }
    }
}

impl core::error::Error for NameError {}

pub(crate) fn valid_segment(segment: &str) -> bool {
    !segment.is_empty()
        && segment
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl DatasetName {
    pub fn new(raw: &str) -> Result<Self, NameError> {
        if raw.is_empty() {
            return Err(NameError::Empty);
        }
        let segments: alloc::vec::Vec<&str> = raw.split('.').collect();
        if segments.len() < 2 {
            return Err(NameError::MissingPrefix(raw.to_string()));
        }
        for segment in segments {
            if !valid_segment(segment) {
                return Err(NameError::InvalidSegment {
                    name: raw.to_string(),
                    segment: segment.to_string(),
                });
            }
        }
        Ok(DatasetName(raw.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The organisation prefix, e.g. `aicause`.
    pub fn organisation(&self) -> &str {
        self.0.split('.').next().expect("validated non-empty")
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('.')
    }
}

impl fmt::Display for DatasetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::str::FromStr for DatasetName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, NameError> {
        DatasetName::new(s)
    }
}
