//! The data domain ontology: dotted accessor paths bound to dataset names.
//!
//! The ontology organises contributed datasets under domain trees such as
//! `Robotics`, `Weather` and `Scan`. A [`Registry`] maps each
//! [`OntologyPath`] to the [`DatasetName`] it is archived under, together
//! with the collection whose schema the dataset follows. [`Registry::builtin`]
//! seeds the contributed bindings; additional entries can be registered
//! programmatically or loaded from a manifest file.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::name::{valid_segment, DatasetName};
use crate::schema::Collection;

/// A dotted accessor path into the ontology, e.g. `Scan.Kinect.bottle`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OntologyPath(Vec<String>);

/// Why a candidate ontology path was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathError {
    Empty,
    InvalidSegment { path: String, segment: String },
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::Empty => write!(f, "ontology path is empty"),
            PathError::InvalidSegment { path, segment } => write!(
                f,
                "ontology path '{path}' has invalid segment '{segment}'"
            ),
        }
    }
}

impl core::error::Error for PathError {}

impl OntologyPath {
    pub fn new(raw: &str) -> Result<Self, PathError> {
        if raw.is_empty() {
            return Err(PathError::Empty);
        }
        let segments: Vec<&str> = raw.split('.').collect();
        for segment in &segments {
            if !valid_segment(segment) {
                return Err(PathError::InvalidSegment {
                    path: raw.to_string(),
                    segment: segment.to_string(),
                });
            }
        }
        Ok(OntologyPath(
            segments.into_iter().map(str::to_string).collect(),
        ))
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    fn starts_with(&self, prefix: &[String]) -> bool {
        self.0.len() >= prefix.len() && self.0[..prefix.len()] == *prefix
    }
}

impl fmt::Display for OntologyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

impl core::str::FromStr for OntologyPath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, PathError> {
        OntologyPath::new(s)
    }
}

/// One registry binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub path: OntologyPath,
    pub dataset: DatasetName,
    pub collection: Collection,
}

/// Errors from registry operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegistryError {
    /// The path is already bound.
    DuplicatePath(OntologyPath),
    /// No binding for the path; carries the longest registered prefix, if
    /// any, to point at where the lookup went astray.
    UnknownPath {
        path: OntologyPath,
        nearest: Option<String>,
    },
    /// A malformed manifest line.
    Manifest { line: usize, message: String },
}

impl fmt::Display for RegistryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegistryError::DuplicatePath(path) => {
                write!(f, "ontology path '{path}' is already registered")
            }
            RegistryError::UnknownPath { path, nearest } => match nearest {
                Some(prefix) => write!(
                    f,
                    "unknown ontology path '{path}' (nearest registered prefix: '{prefix}')"
                ),
                None => write!(f, "unknown ontology path '{path}'"),
            },
            RegistryError::Manifest { line, message } => {
                write!(f, "manifest line {line}: {message}")
            }
        }
    }
}

impl core::error::Error for RegistryError {}

/// A table of ontology bindings, ordered lexicographically by path.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    entries: BTreeMap<OntologyPath, (DatasetName, Collection)>,
}

impl Registry {
    /// An empty registry.
    pub fn new() -> Self {
        Registry::default()
    }

    /// A registry seeded with the contributed bindings: the accessor paths
    /// for the train experiment, the two factory scenarios, the Melbourne
    /// UV series (under both of its published accessor names) and the
    /// seventeen depth-scan datasets.
    pub fn builtin() -> Self {
        let mut registry = Registry::new();
        let mut seed = |path: &str, dataset: &str, collection: Collection| {
            registry
                .register(
                    OntologyPath::new(path).expect("built-in path"),
                    DatasetName::new(dataset).expect("built-in dataset name"),
                    collection,
                )
                .expect("built-in paths are distinct");
        };

        seed(
            "Robotics.Lego.Trains.experiment1",
            "aicause.lego.trains.experiment1",
            Collection::Trains,
        );
        seed(
            "Robotics.Festo.MiniFactory.station1.scenario1",
            "aicause.festo.station1.Scenario1.20mins",
            Collection::Festo,
        );
        seed(
            "Robotics.Festo.MiniFactory.station1.capsBlocking",
            "aicause.festo.station1.small.2capsBlocking",
            Collection::Festo,
        );
        seed(
            "Weather.SmartSpace.Melbourne.Aug_27_2015",
            "aicause.smartspace.melbourne.2015.aug.27",
            Collection::Weather,
        );
        // The same weather dataset is also published under a December
        // accessor name; both resolve to the archived series.
        seed(
            "Weather.SmartSpace.Melbourne.uvIndex_Dec_28_2015",
            "aicause.smartspace.melbourne.2015.aug.27",
            Collection::Weather,
        );
        seed(
            "Scan.Kinect.bottle",
            "aicause.kinect.scan.bottle",
            Collection::Kinect,
        );
        // The plain `obstacles` accessor is an alias for obstacles1a.
        seed(
            "Scan.Kinect.obstacles",
            "aicause.kinect.scan.obstacles1a",
            Collection::Kinect,
        );
        seed(
            "Scan.Kinect.obstacles1",
            "aicause.kinect.scan.obstacles1",
            Collection::Kinect,
        );
        seed(
            "Scan.Kinect.obstacles1a",
            "aicause.kinect.scan.obstacles1a",
            Collection::Kinect,
        );
        for n in 2..=15 {
            seed(
                &alloc::format!("Scan.Kinect.obstacles{n}"),
                &alloc::format!("aicause.kinect.scan.obstacles{n}"),
                Collection::Kinect,
            );
        }
        registry
    }

    /// Binds a path; fails if the path is already bound.
    pub fn register(
        &mut self,
        path: OntologyPath,
        dataset: DatasetName,
        collection: Collection,
    ) -> Result<(), RegistryError> {
        if self.entries.contains_key(&path) {
            return Err(RegistryError::DuplicatePath(path));
        }
        self.entries.insert(path, (dataset, collection));
        Ok(())
    }

    /// Resolves a path to its dataset name.
    pub fn resolve(&self, path: &OntologyPath) -> Result<&DatasetName, RegistryError> {
        match self.entries.get(path) {
            Some((dataset, _)) => Ok(dataset),
            None => Err(RegistryError::UnknownPath {
                path: path.clone(),
                nearest: self.nearest_prefix(path),
            }),
        }
    }

    /// The longest proper prefix of `path` that prefixes at least one
    /// registered path.
    fn nearest_prefix(&self, path: &OntologyPath) -> Option<String> {
        let segments = path.segments();
        (1..=segments.len())
            .rev()
            .map(|len| &segments[..len])
            .find(|prefix| self.entries.keys().any(|key| key.starts_with(prefix)))
            .map(|prefix| prefix.join("."))
    }

    /// All bindings in lexicographic path order; the order is stable across
    /// calls.
    pub fn list_entries(&self) -> Vec<RegistryEntry> {
        self.entries
            .iter()
            .map(|(path, (dataset, collection))| RegistryEntry {
                path: path.clone(),
                dataset: dataset.clone(),
                collection: *collection,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Loads `path dataset collection` triples, one per line. Blank lines
    /// and `#` comments are ignored.
    pub fn load_manifest(&mut self, manifest: &str) -> Result<usize, RegistryError> {
        let mut added = 0;
        for (index, line) in manifest.lines().enumerate() {
            let line_no = index + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (path, dataset, collection) =
                match (fields.next(), fields.next(), fields.next(), fields.next()) {
                    (Some(p), Some(d), Some(c), None) => (p, d, c),
                    _ => {
                        return Err(RegistryError::Manifest {
                            line: line_no,
                            message: "expected 'path dataset collection'".to_string(),
                        })
                    }
                };
            let path = OntologyPath::new(path).map_err(|e| RegistryError::Manifest {
                line: line_no,
                message: e.to_string(),
            })?;
            let dataset = DatasetName::new(dataset).map_err(|e| RegistryError::Manifest {
                line: line_no,
                message: e.to_string(),
            })?;
            let collection: Collection =
                collection.parse().map_err(|e: crate::schema::UnknownCollection| {
                    RegistryError::Manifest {
                        line: line_no,
                        message: e.to_string(),
                    }
                })?;
            self.register(path, dataset, collection)?;
            added += 1;
        }
        Ok(added)
    }
}
