//! Persistence and tooling for spatio-temporal invariant datasets.
//!
//! This crate adds the parts of the toolkit that need a filesystem: the
//! [`store::ArchiveStore`] for saving, loading and caching named datasets,
//! and the `invariant-data` command-line binary built on top of it. The
//! pure algebra, text format, schemas, generators and queries live in
//! `invariant-core`.

pub mod store;

pub use store::{ArchiveStore, StoreConfig, StoreError, DATA_DIR_ENV};
