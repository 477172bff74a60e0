//! Directory-backed archive store with an in-process cache.
//!
//! Each dataset is archived under its dotted name: `<data_dir>/<name>` holds
//! the gzip-compressed canonical text of the formula, and a readable
//! `<data_dir>/<name>.txt` sibling holds the plain text. The default data
//! directory is `../data`, overridable explicitly or through the
//! `INVARIANT_DATA_DIR` environment variable.
//!
//! Loading comes in two flavours, mirroring the memory trade-off the
//! archive consumers make: [`ArchiveStore::load_or_throw`] reads from disk
//! on every call and never caches, while the `Option`-returning family
//! (`load_and_cache`, `find_in_cache`, `find_in_cache_or_load`,
//! `find_in_cache_or_load_and_cache`) works against a cache whose entries
//! live until [`ArchiveStore::clear_cache`]. The store counts disk reads
//! ([`ArchiveStore::disk_reads`]) so the caching contract is observable.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use thiserror::Error;

use invariant_core::{parse, print, DatasetName, Formula};

/// Environment variable overriding the default data directory.
pub const DATA_DIR_ENV: &str = "INVARIANT_DATA_DIR";

/// Store configuration; only the data directory for now.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreConfig {
    pub data_dir: PathBuf,
}

impl StoreConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        StoreConfig {
            data_dir: data_dir.into(),
        }
    }
}

impl Default for StoreConfig {
    /// `$INVARIANT_DATA_DIR` when set, otherwise `../data`.
    fn default() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => StoreConfig::new(PathBuf::from(dir)),
            _ => StoreConfig::new("../data"),
        }
    }
}

/// Errors from archive persistence.
#[derive(Debug, Error)]
pub enum StoreError {
    /// No archive exists under this name.
    #[error("unknown dataset '{0}'")]
    UnknownDataset(DatasetName),
    /// The archive exists but cannot be decompressed or parsed.
    #[error("corrupt archive for '{name}': {detail}")]
    CorruptArchive { name: DatasetName, detail: String },
    /// The data directory or archive file cannot be accessed.
    #[error("storage failure at '{path}': {source}")]
    Storage {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Persistence of named formulas plus the in-process cache.
///
/// Safe to share across threads: saves to the same name are atomic
/// (last-writer-wins via a rename), and the cache behaves as one consistent
/// map.
pub struct ArchiveStore {
    data_dir: PathBuf,
    cache: Mutex<HashMap<DatasetName, Arc<Formula>>>,
    disk_reads: AtomicU64,
    diagnostics: Mutex<Vec<String>>,
    tmp_counter: AtomicU64,
}

impl ArchiveStore {
    pub fn new(config: StoreConfig) -> Self {
        ArchiveStore {
            data_dir: config.data_dir,
            cache: Mutex::new(HashMap::new()),
            disk_reads: AtomicU64::new(0),
            diagnostics: Mutex::new(Vec::new()),
            tmp_counter: AtomicU64::new(0),
        }
    }

    /// A store over an explicit directory.
    pub fn open(data_dir: impl Into<PathBuf>) -> Self {
        ArchiveStore::new(StoreConfig::new(data_dir))
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }

    /// Path of the compressed archive for `name`.
    pub fn archive_path(&self, name: &DatasetName) -> PathBuf {
        self.data_dir.join(name.as_str())
    }

    /// Path of the readable `.txt` sibling for `name`.
    pub fn text_path(&self, name: &DatasetName) -> PathBuf {
        self.data_dir.join(format!("{name}.txt"))
    }

    /// Number of archive reads performed so far.
    pub fn disk_reads(&self) -> u64 {
        self.disk_reads.load(Ordering::Relaxed)
    }

    /// Drains diagnostics recorded by the `Option`-returning loaders.
    pub fn take_diagnostics(&self) -> Vec<String> {
        std::mem::take(&mut self.diagnostics.lock().expect("diagnostics lock"))
    }

    /// Archives `data` under `name`: the compressed canonical text plus the
    /// readable `.txt` sibling. Creates the data directory if needed.
    pub fn save(&self, data: &Formula, name: &DatasetName) -> Result<(), StoreError> {
        fs::create_dir_all(&self.data_dir).map_err(|source| StoreError::Storage {
            path: self.data_dir.clone(),
            source,
        })?;
        let text = print(data);

        let mut encoder = GzEncoder::new(Vec::new(), Compression::default());
        encoder
            .write_all(text.as_bytes())
            .and_then(|_| encoder.finish())
            .map_err(|source| StoreError::Storage {
                path: self.archive_path(name),
                source,
            })
            .and_then(|compressed| self.write_atomic(&self.archive_path(name), &compressed))?;

        self.write_atomic(&self.text_path(name), text.as_bytes())
    }

    /// As [`save`](Self::save), and the cache holds `name -> data` afterwards.
    pub fn save_and_cache(&self, data: Formula, name: &DatasetName) -> Result<(), StoreError> {
        self.save(&data, name)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(name.clone(), Arc::new(data));
        Ok(())
    }

    /// Reads the archive fresh from disk; never consults or fills the cache.
    pub fn load_or_throw(&self, name: &DatasetName) -> Result<Formula, StoreError> {
        let path = self.archive_path(name);
        self.disk_reads.fetch_add(1, Ordering::Relaxed);
        let bytes = match fs::read(&path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(StoreError::UnknownDataset(name.clone()))
            }
            Err(source) => return Err(StoreError::Storage { path, source }),
        };
        let mut text = String::new();
        GzDecoder::new(bytes.as_slice())
            .read_to_string(&mut text)
            .map_err(|e| StoreError::CorruptArchive {
                name: name.clone(),
                detail: format!("decompression failed: {e}"),
            })?;
        parse(&text).map_err(|e| StoreError::CorruptArchive {
            name: name.clone(),
            detail: format!("archive text does not parse: {e}"),
        })
    }

    /// Reads from disk and caches the result; `None` when the archive is
    /// missing or unreadable (unreadable archives leave a diagnostic).
    pub fn load_and_cache(&self, name: &DatasetName) -> Option<Arc<Formula>> {
        let formula = Arc::new(self.load_quietly(name)?);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(name.clone(), Arc::clone(&formula));
        Some(formula)
    }

    /// Cache lookup only; never touches disk.
    pub fn find_in_cache(&self, name: &DatasetName) -> Option<Arc<Formula>> {
        self.cache.lock().expect("cache lock").get(name).cloned()
    }

    /// Cache lookup, falling back to a disk read that does not fill the
    /// cache.
    pub fn find_in_cache_or_load(&self, name: &DatasetName) -> Option<Arc<Formula>> {
        self.find_in_cache(name)
            .or_else(|| self.load_quietly(name).map(Arc::new))
    }

    /// Cache lookup, falling back to a disk read that fills the cache.
    pub fn find_in_cache_or_load_and_cache(&self, name: &DatasetName) -> Option<Arc<Formula>> {
        self.find_in_cache(name).or_else(|| self.load_and_cache(name))
    }

    /// Empties the cache; archives on disk are untouched.
    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    /// Dataset names with an archive file in the data directory, sorted.
    pub fn list_archives(&self) -> Vec<DatasetName> {
        let mut names = Vec::new();
        let Ok(entries) = fs::read_dir(&self.data_dir) else {
            return names;
        };
        for entry in entries.flatten() {
            if !entry.file_type().map(|t| t.is_file()).unwrap_or(false) {
                continue;
            }
            let file_name = entry.file_name();
            let Some(file_name) = file_name.to_str() else {
                continue;
            };
            // `.txt` siblings read as valid names, so filter them by
            // suffix; temp files fail name validation outright.
            if file_name.ends_with(".txt") {
                continue;
            }
            if let Ok(name) = DatasetName::new(file_name) {
                names.push(name);
            }
        }
        names.sort();
        names
    }

    fn load_quietly(&self, name: &DatasetName) -> Option<Formula> {
        match self.load_or_throw(name) {
            Ok(formula) => Some(formula),
            Err(StoreError::UnknownDataset(_)) => None,
            Err(e) => {
                self.diagnostics
                    .lock()
                    .expect("diagnostics lock")
                    .push(e.to_string());
                None
            }
        }
    }

    /// Writes via a temp file and rename, so concurrent saves to one name
    /// are last-writer-wins and readers never see a partial archive. The
    /// suffix contains `-`, which no dataset name can, keeping in-flight
    /// temp files out of [`list_archives`](Self::list_archives).
    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
        let storage_err = |source| StoreError::Storage {
            path: path.to_path_buf(),
            source,
        };
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(format!(
            ".tmp-{}-{}",
            std::process::id(),
            self.tmp_counter.fetch_add(1, Ordering::Relaxed)
        ));
        let tmp = PathBuf::from(tmp);
        fs::write(&tmp, bytes).map_err(storage_err)?;
        fs::rename(&tmp, path).map_err(storage_err)
    }
}
