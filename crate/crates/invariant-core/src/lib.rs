//! Core library for spatio-temporal invariant datasets.
//!
//! A dataset is one immutable [`Formula`] — a tree of logical connectives
//! over atoms for time points, component labels, measured values and
//! spatial occupancy. This crate provides:
//!
//! - the formula algebra and structural utilities ([`formula`]),
//! - the term-language text format with a round-tripping parser and
//!   canonical printer ([`text`]),
//! - schema validators for the four documented collections ([`schema`]),
//! - deterministic, seeded dataset generators ([`generate`]),
//! - read-side queries over collection-shaped formulas ([`query`]),
//! - dotted dataset names and the ontology registry ([`name`], [`registry`]).
//!
//! The crate is `no_std`-compatible (it only needs `alloc`); disable the
//! default `std` feature for embedded use. Persistence and the command-line
//! front end live in the companion `invariant-data` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod decimal;
pub mod formula;
pub mod generate;
pub mod name;
pub mod query;
pub mod registry;
pub mod samples;
pub mod schema;
pub mod text;

mod calendar;

pub use decimal::Decimal;
pub use formula::{Formula, StateValue, Timestamp};
pub use name::DatasetName;
pub use schema::{Collection, SchemaReport};
pub use text::{parse, print, ParseError};
