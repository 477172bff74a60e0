//! The invariant formula tree.
//!
//! Every dataset in this toolkit is a single [`Formula`]: an immutable,
//! finite tree of logical connectives over spatio-temporal atoms. Equality
//! is structural — variant by variant, payload by payload, with list order
//! significant — so two formulas compare equal exactly when they are the
//! same tree.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::num::NonZeroU64;

use crate::decimal::Decimal;

/// A point in time attached to a [`Formula::TimePoint`] atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Timestamp {
    /// Milliseconds since the Unix epoch; produced when the source token is
    /// purely numeric, e.g. `TimePoint(1429188806320)`.
    EpochMillis(u64),
    /// A calendar rendering preserved exactly as written, e.g.
    /// `Wed Jul 27 09:11:28 UTC 2016` or `1st December 201511:04AM`.
    ///
    /// The raw text must not be all digits (that form is an
    /// [`EpochMillis`](Self::EpochMillis)) and must keep its parentheses
    /// balanced, or it will not survive a print/parse round trip.
    CalendarText(String),
}

/// The measured value carried by a [`Formula::ComponentState`] atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StateValue {
    /// A decimal signal level such as `5.0` or `770`.
    Number(Decimal),
    /// An ordered integer tuple of one to three elements: a texture pair
    /// `(0,0)`, an RGB triple `(41,49,39)`, or a boxed scalar `(770)`.
    IntTuple(Vec<i64>),
    /// A text label such as `melbourne`.
    Text(String),
}

/// An immutable spatio-temporal formula.
///
/// Connectives are `And`/`Or`/`Not`/`Implies` plus the n-ary `BigAnd` and
/// `BigOr` over ordered lists (which may be empty). Everything else is an
/// atom. Trees are plain data: cloning is deep, sharing across threads is
/// safe, and nothing is mutated after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    BigAnd(Vec<Formula>),
    BigOr(Vec<Formula>),
    True,
    False,
    /// Binds a conclusion to an instant.
    TimePoint(Timestamp),
    /// Names a measurement category, e.g. `Points`, `Colors`, `Index`.
    Owner(String),
    /// Names a sensor or actuator, e.g. `stackEmptySensor`.
    Component(String),
    /// Carries a measured value.
    ComponentState(StateValue),
    /// An integer 3-D coordinate from a depth scan.
    Occupy3DPoint(i64, i64, i64),
    /// A symbolic track-segment identifier (ids start at 1).
    OccupyNode(NonZeroU64),
}

impl Formula {
    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Box::new(left), Box::new(right))
    }

    #[allow(clippy::should_implement_trait)] // constructor, mirrors the Not variant
    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    pub fn implies(premise: Formula, conclusion: Formula) -> Formula {
        Formula::Implies(Box::new(premise), Box::new(conclusion))
    }

    pub fn time_point(millis: u64) -> Formula {
        Formula::TimePoint(Timestamp::EpochMillis(millis))
    }

    pub fn calendar_time(raw: impl Into<String>) -> Formula {
        Formula::TimePoint(Timestamp::CalendarText(raw.into()))
    }

    pub fn owner(label: impl Into<String>) -> Formula {
        Formula::Owner(label.into())
    }

    pub fn component(label: impl Into<String>) -> Formula {
        Formula::Component(label.into())
    }

    pub fn state_number(value: Decimal) -> Formula {
        Formula::ComponentState(StateValue::Number(value))
    }

    pub fn state_tuple(values: impl Into<Vec<i64>>) -> Formula {
        Formula::ComponentState(StateValue::IntTuple(values.into()))
    }

    pub fn state_text(value: impl Into<String>) -> Formula {
        Formula::ComponentState(StateValue::Text(value.into()))
    }

    /// A track-segment occupancy atom.
    ///
    /// # Panics
    /// Panics if `id` is zero; segment ids start at 1.
    pub fn occupy_node(id: u64) -> Formula {
        Formula::OccupyNode(NonZeroU64::new(id).expect("track segment ids start at 1"))
    }

    /// True for leaf nodes: the constants, time points, labels, states and
    /// spatial atoms.
    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            Formula::And(..)
                | Formula::Or(..)
                | Formula::Not(..)
                | Formula::Implies(..)
                | Formula::BigAnd(..)
                | Formula::BigOr(..)
        )
    }

    /// Direct children of a connective, left to right; empty for atoms.
    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::Not(inner) => core::slice::from_ref(inner),
            Formula::BigAnd(items) | Formula::BigOr(items) => items,
            // Binary connectives box their children individually, so they
            // are exposed through `Atoms` instead of a slice.
            _ => &[],
        }
    }

    /// Depth-first, left-to-right iterator over the atoms of the tree
    /// (premise before conclusion).
    pub fn atoms(&self) -> Atoms<'_> {
        Atoms {
            stack: alloc::vec![self],
        }
    }

    /// Number of leaf nodes in the tree.
    pub fn count_atoms(&self) -> usize {
        self.atoms().count()
    }

    /// All atoms matching `predicate`, in depth-first, left-to-right order.
    pub fn collect_atoms<P>(&self, mut predicate: P) -> Vec<&Formula>
    where
        P: FnMut(&Formula) -> bool,
    {
        self.atoms().filter(|atom| predicate(atom)).collect()
    }

    /// Splices nested `BigAnd` lists into their parent `BigAnd`, bottom-up,
    /// so that no `BigAnd` item is itself a `BigAnd`. All other structure is
    /// preserved, including `BigAnd` items under other connectives.
    pub fn flatten_big_and(&self) -> Formula {
        match self {
            Formula::And(l, r) => Formula::and(l.flatten_big_and(), r.flatten_big_and()),
            Formula::Or(l, r) => Formula::or(l.flatten_big_and(), r.flatten_big_and()),
            Formula::Not(inner) => Formula::not(inner.flatten_big_and()),
            Formula::Implies(p, c) => Formula::implies(p.flatten_big_and(), c.flatten_big_and()),
            Formula::BigOr(items) => {
                Formula::BigOr(items.iter().map(Formula::flatten_big_and).collect())
            }
            Formula::BigAnd(items) => {
                let mut flat = Vec::with_capacity(items.len());
                for item in items {
                    match item.flatten_big_and() {
                        Formula::BigAnd(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                Formula::BigAnd(flat)
            }
            atom => atom.clone(),
        }
    }
}

/// Iterator returned by [`Formula::atoms`].
pub struct Atoms<'a> {
    stack: Vec<&'a Formula>,
}

impl<'a> Iterator for Atoms<'a> {
    type Item = &'a Formula;

    fn next(&mut self) -> Option<&'a Formula> {
        while let Some(node) = self.stack.pop() {
            match node {
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                    self.stack.push(r);
                    self.stack.push(l);
                }
                Formula::Not(inner) => self.stack.push(inner),
                Formula::BigAnd(items) | Formula::BigOr(items) => {
                    self.stack.extend(items.iter().rev());
                }
                atom => return Some(atom),
            }
        }
        None
    }
}
