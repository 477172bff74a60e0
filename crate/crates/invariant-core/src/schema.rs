//! Schema validators for the four documented data collections.
//!
//! Each validator checks a [`Formula`] against one collection's documented
//! shape and returns a [`SchemaReport`] carrying violations (with a path
//! into the tree) and summary statistics. Validators never fail: malformed
//! input produces a report with violations, and the stats are populated as
//! far as the data allows.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::calendar::{self, CivilTime};
use crate::decimal::Decimal;
use crate::formula::{Formula, StateValue, Timestamp};

/// The four documented dataset families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Collection {
    Kinect,
    Festo,
    Trains,
    Weather,
}

impl Collection {
    pub const ALL: [Collection; 4] = [
        Collection::Kinect,
        Collection::Festo,
        Collection::Trains,
        Collection::Weather,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Collection::Kinect => "kinect",
            Collection::Festo => "festo",
            Collection::Trains => "trains",
            Collection::Weather => "weather",
        }
    }

    /// Runs this collection's validator.
    pub fn validate(&self, f: &Formula) -> SchemaReport {
        match self {
            Collection::Kinect => validate_kinect(f),
            Collection::Festo => validate_festo(f),
            Collection::Trains => validate_trains(f),
            Collection::Weather => validate_weather(f),
        }
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Collection {
    type Err = UnknownCollection;

    fn from_str(s: &str) -> Result<Self, UnknownCollection> {
        match s {
            "kinect" => Ok(Collection::Kinect),
            "festo" => Ok(Collection::Festo),
            "trains" => Ok(Collection::Trains),
            "weather" => Ok(Collection::Weather),
            other => Err(UnknownCollection(other.to_string())),
        }
    }
}

/// Error for a collection name outside `kinect|festo|trains|weather`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownCollection(pub String);

impl fmt::Display for UnknownCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown collection '{}' (expected kinect, festo, trains or weather)",
            self.0
        )
    }
}

impl core::error::Error for UnknownCollection {}

/// One schema violation: where in the tree, and what went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Outcome of validating a formula against one collection schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaReport {
    pub collection: Collection,
    pub violations: Vec<Violation>,
    /// Summary counters; always populated, even for invalid data.
    pub stats: BTreeMap<String, u64>,
}

impl SchemaReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }

    /// One human summary line, e.g. `valid kinect dataset (colors=10 points=10)`.
    pub fn summary(&self) -> String {
        if self.is_valid() {
            let stats: Vec<String> = self
                .stats
                .iter()
                .filter(|(k, _)| !k.starts_with("component."))
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!("valid {} dataset ({})", self.collection, stats.join(" "))
        } else {
            format!(
                "invalid {} dataset: {} violation(s)",
                self.collection,
                self.violations.len()
            )
        }
    }

    /// Line-oriented report: summary, then one line per violation.
    pub fn render_text(&self) -> String {
        let mut out = self.summary();
        for v in &self.violations {
            out.push_str("\n  ");
            out.push_str(&v.to_string());
        }
        out
    }

    /// Machine-readable `key=value` block.
    pub fn render_kv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("collection={}\n", self.collection));
        out.push_str(&format!("valid={}\n", self.is_valid()));
        for (key, value) in &self.stats {
            out.push_str(&format!("stats.{key}={value}\n"));
        }
        out.push_str(&format!("violations={}", self.violations.len()));
        out
    }
}

/// The eleven signal identifiers of the factory station.
pub struct FestoComponentCatalog;

/// Whether a catalog component drives the station or senses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Actuator,
    Sensor,
}

impl FestoComponentCatalog {
    pub const ACTUATORS: [&'static str; 5] = [
        "stackEjectorExtendSol",
        "vacuumGripperSol",
        "ejectionAirPulseSol",
        "loaderPickupSol",
        "loaderDropoffSol",
    ];

    pub const SENSORS: [&'static str; 6] = [
        "stackEjectorExtendedLS",
        "stackEjectorRetractedLS",
        "workpieceGrippedSensor",
        "loaderPickupLS",
        "loaderDropoffLS",
        "stackEmptySensor",
    ];

    pub fn kind(name: &str) -> Option<ComponentKind> {
        if Self::ACTUATORS.contains(&name) {
            Some(ComponentKind::Actuator)
        } else if Self::SENSORS.contains(&name) {
            Some(ComponentKind::Sensor)
        } else {
            None
        }
    }

    pub fn contains(name: &str) -> bool {
        Self::kind(name).is_some()
    }

    pub fn all() -> impl Iterator<Item = &'static str> {
        Self::ACTUATORS.into_iter().chain(Self::SENSORS)
    }
}

/// Signal levels that may appear in a factory event.
fn admissible_festo_value(value: &Decimal) -> bool {
    [
        Decimal::new(50, 1),
        Decimal::new(55, 1),
        Decimal::new(800, 1),
        Decimal::new(1000, 1),
    ]
    .contains(value)
}

struct Checker {
    collection: Collection,
    violations: Vec<Violation>,
    stats: BTreeMap<String, u64>,
}

impl Checker {
    fn new(collection: Collection) -> Self {
        Checker {
            collection,
            violations: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    fn violate(&mut self, path: String, message: String) {
        self.violations.push(Violation { path, message });
    }

    fn set(&mut self, key: &str, value: u64) {
        self.stats.insert(key.to_string(), value);
    }

    fn bump(&mut self, key: String) {
        *self.stats.entry(key).or_insert(0) += 1;
    }

    fn finish(self) -> SchemaReport {
        SchemaReport {
            collection: self.collection,
            violations: self.violations,
            stats: self.stats,
        }
    }
}

/// A comparable key over the timestamp kinds the factory logs use.
enum TimeKey {
    Millis(u64),
    Civil(CivilTime),
}

fn time_key(ts: &Timestamp) -> Option<TimeKey> {
    match ts {
        Timestamp::EpochMillis(m) => Some(TimeKey::Millis(*m)),
        Timestamp::CalendarText(raw) => calendar::parse_utc(raw).map(TimeKey::Civil),
    }
}

fn not_after(a: &TimeKey, b: &TimeKey) -> Option<bool> {
    match (a, b) {
        (TimeKey::Millis(x), TimeKey::Millis(y)) => Some(x <= y),
        (TimeKey::Civil(x), TimeKey::Civil(y)) => Some(x <= y),
        _ => None,
    }
}

/// Checks a depth-scan frame:
/// `IMPLIES(TimePoint, BIGAND(Points branch, Colors branch))` where each
/// point is `IMPLIES(Occupy3DPoint, ComponentState(u,v))` and each color is
/// a `ComponentState` RGB triple with channels in -1..=255.
pub fn validate_kinect(f: &Formula) -> SchemaReport {
    let mut c = Checker::new(Collection::Kinect);
    c.set("points", 0);
    c.set("colors", 0);

    let (premise, conclusion) = match f {
        Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
        _ => {
            c.violate(
                "root".into(),
                "expected IMPLIES(TimePoint, BIGAND(...))".into(),
            );
            return c.finish();
        }
    };
    if !matches!(premise, Formula::TimePoint(_)) {
        c.violate("premise".into(), "expected a TimePoint".into());
    }
    let branches = match conclusion {
        Formula::BigAnd(items) => items,
        _ => {
            c.violate("conclusion".into(), "expected a BIGAND of two branches".into());
            return c.finish();
        }
    };
    if branches.len() != 2 {
        c.violate(
            "conclusion".into(),
            format!(
                "expected exactly two branches (Points, Colors), found {}",
                branches.len()
            ),
        );
        return c.finish();
    }

    if let Some(points) = owned_branch(&mut c, &branches[0], "Points", "conclusion[0]") {
        c.set("points", points.len() as u64);
        for (i, point) in points.iter().enumerate() {
            check_kinect_point(&mut c, point, i);
        }
    }
    if let Some(colors) = owned_branch(&mut c, &branches[1], "Colors", "conclusion[1]") {
        c.set("colors", colors.len() as u64);
        for (i, color) in colors.iter().enumerate() {
            check_kinect_color(&mut c, color, i);
        }
    }
    c.finish()
}

/// `IMPLIES(Owner(label), BIGAND(...))`; returns the list on success.
fn owned_branch<'f>(
    c: &mut Checker,
    branch: &'f Formula,
    label: &str,
    path: &str,
) -> Option<&'f [Formula]> {
    match branch {
        Formula::Implies(owner, body) => {
            match owner.as_ref() {
                Formula::Owner(found) if found == label => {}
                other => {
                    c.violate(
                        format!("{path}.owner"),
                        format!("expected Owner({label}), found {other}"),
                    );
                    return None;
                }
            }
            match body.as_ref() {
                Formula::BigAnd(items) => Some(items),
                _ => {
                    c.violate(format!("{path}.body"), "expected a BIGAND list".into());
                    None
                }
            }
        }
        _ => {
            c.violate(
                path.to_string(),
                format!("expected IMPLIES(Owner({label}), BIGAND(...))"),
            );
            None
        }
    }
}

fn check_kinect_point(c: &mut Checker, point: &Formula, index: usize) {
    let (coord, uv) = match point {
        Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
        _ => {
            c.violate(
                format!("points[{index}]"),
                "expected IMPLIES(Occupy3DPoint, ComponentState)".into(),
            );
            return;
        }
    };
    if !matches!(coord, Formula::Occupy3DPoint(..)) {
        c.violate(
            format!("points[{index}].coordinate"),
            "expected an Occupy3DPoint".into(),
        );
    }
    match uv {
        Formula::ComponentState(StateValue::IntTuple(values)) if values.len() == 2 => {}
        _ => c.violate(
            format!("points[{index}].uv"),
            "expected a ComponentState pair of integers".into(),
        ),
    }
}

fn check_kinect_color(c: &mut Checker, color: &Formula, index: usize) {
    match color {
        Formula::ComponentState(StateValue::IntTuple(values)) if values.len() == 3 => {
            for channel in values {
                if !(-1..=255).contains(channel) {
                    c.violate(
                        format!("colors[{index}]"),
                        format!("channel {channel} outside -1..255"),
                    );
                }
            }
        }
        _ => c.violate(
            format!("colors[{index}]"),
            "expected a ComponentState triple of integers".into(),
        ),
    }
}

/// Checks a factory event stream: a `BIGAND` of
/// `IMPLIES(AND(TimePoint, Component), ComponentState(level))` with catalog
/// components, levels in {5.0, 5.5, 80.0, 100.0} and non-decreasing
/// timestamps.
pub fn validate_festo(f: &Formula) -> SchemaReport {
    let mut c = Checker::new(Collection::Festo);
    c.set("events", 0);

    let events = match f {
        Formula::BigAnd(items) => items,
        _ => {
            c.violate("root".into(), "expected a BIGAND of events".into());
            return c.finish();
        }
    };
    c.set("events", events.len() as u64);

    let mut previous: Option<TimeKey> = None;
    for (i, event) in events.iter().enumerate() {
        let (premise, value) = match event {
            Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
            _ => {
                c.violate(
                    format!("events[{i}]"),
                    "expected IMPLIES(AND(TimePoint, Component), ComponentState)".into(),
                );
                continue;
            }
        };
        let (time, component) = match premise {
            Formula::And(t, comp) => (t.as_ref(), comp.as_ref()),
            _ => {
                c.violate(
                    format!("events[{i}].premise"),
                    "expected AND(TimePoint, Component)".into(),
                );
                continue;
            }
        };
        match component {
            Formula::Component(name) => {
                if FestoComponentCatalog::contains(name) {
                    c.bump(format!("component.{name}"));
                } else {
                    c.violate(
                        format!("events[{i}].component"),
                        format!("unknown component '{name}'"),
                    );
                }
            }
            _ => c.violate(
                format!("events[{i}].premise"),
                "expected a Component identifier".into(),
            ),
        }
        match value {
            Formula::ComponentState(StateValue::Number(level)) => {
                if !admissible_festo_value(level) {
                    c.violate(
                        format!("events[{i}].value"),
                        format!("signal level {level} outside {{5.0, 5.5, 80.0, 100.0}}"),
                    );
                }
            }
            _ => c.violate(
                format!("events[{i}].value"),
                "expected a numeric ComponentState".into(),
            ),
        }
        match time {
            Formula::TimePoint(ts) => match time_key(ts) {
                Some(key) => {
                    if let Some(prev) = &previous {
                        match not_after(prev, &key) {
                            Some(true) => {}
                            Some(false) => c.violate(
                                format!("events[{i}].time"),
                                "timestamps must be non-decreasing".into(),
                            ),
                            None => c.violate(
                                format!("events[{i}].time"),
                                "mixed timestamp kinds cannot be ordered".into(),
                            ),
                        }
                    }
                    previous = Some(key);
                }
                None => c.violate(
                    format!("events[{i}].time"),
                    format!("unorderable timestamp '{ts}'"),
                ),
            },
            _ => c.violate(format!("events[{i}].premise"), "expected a TimePoint".into()),
        }
    }
    c.finish()
}

/// Checks a train occupancy series: a `BIGAND` of frames, each
/// `IMPLIES(TimePoint(millis), BIGAND(exactly ten OccupyNode))`, with
/// strictly increasing timestamps. Window contiguity is reported as the
/// `sliding_window` stat, not as a validity requirement.
pub fn validate_trains(f: &Formula) -> SchemaReport {
    let mut c = Checker::new(Collection::Trains);
    c.set("time_points", 0);
    c.set("max_node", 0);

    let frames = match f {
        Formula::BigAnd(items) => items,
        _ => {
            c.violate("root".into(), "expected a BIGAND of occupancy frames".into());
            c.set("sliding_window", 0);
            return c.finish();
        }
    };
    c.set("time_points", frames.len() as u64);

    let mut previous: Option<u64> = None;
    let mut max_node = 0u64;
    let mut windows: Vec<Vec<u64>> = Vec::new();
    let mut well_formed = true;

    for (i, frame) in frames.iter().enumerate() {
        let (time, occupancy) = match frame {
            Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
            _ => {
                c.violate(
                    format!("frames[{i}]"),
                    "expected IMPLIES(TimePoint, BIGAND(...))".into(),
                );
                well_formed = false;
                continue;
            }
        };
        match time {
            Formula::TimePoint(Timestamp::EpochMillis(t)) => {
                if let Some(prev) = previous {
                    if *t <= prev {
                        c.violate(
                            format!("frames[{i}].time"),
                            "timestamps must be strictly increasing".into(),
                        );
                    }
                }
                previous = Some(*t);
            }
            _ => {
                c.violate(
                    format!("frames[{i}].time"),
                    "expected an epoch-millisecond TimePoint".into(),
                );
            }
        }
        let nodes = match occupancy {
            Formula::BigAnd(items) => items,
            _ => {
                c.violate(
                    format!("frames[{i}].occupancy"),
                    "expected a BIGAND of OccupyNode".into(),
                );
                well_formed = false;
                continue;
            }
        };
        if nodes.len() != 10 {
            c.violate(
                format!("frames[{i}].occupancy"),
                format!("expected exactly ten occupied segments, found {}", nodes.len()),
            );
        }
        let mut ids = Vec::with_capacity(nodes.len());
        for (j, node) in nodes.iter().enumerate() {
            match node {
                Formula::OccupyNode(id) => {
                    max_node = max_node.max(id.get());
                    ids.push(id.get());
                }
                _ => {
                    c.violate(
                        format!("frames[{i}].occupancy[{j}]"),
                        "expected an OccupyNode".into(),
                    );
                    well_formed = false;
                }
            }
        }
        windows.push(ids);
    }

    c.set("max_node", max_node);
    c.set(
        "sliding_window",
        u64::from(well_formed && is_sliding_window(&windows, max_node)),
    );
    c.finish()
}

/// True when every frame advances by one segment: the next window is
/// `tail(previous) + [successor]` with the successor wrapping from the
/// highest segment back to 1.
fn is_sliding_window(windows: &[Vec<u64>], track: u64) -> bool {
    windows.windows(2).all(|pair| {
        let (prev, next) = (&pair[0], &pair[1]);
        if prev.is_empty() || next.len() != prev.len() {
            return false;
        }
        let successor = prev[prev.len() - 1] % track + 1;
        next[..next.len() - 1] == prev[1..] && next[next.len() - 1] == successor
    })
}

/// Checks a UV weather series: a `BIGAND` of samples, each
/// `IMPLIES(TimePoint, BIGAND(ID, Index, Name entries))`; the index is an
/// integer multiple of ten in 0..=1000 (an index of 7.7 is stored as 770).
pub fn validate_weather(f: &Formula) -> SchemaReport {
    let mut c = Checker::new(Collection::Weather);
    c.set("time_points", 0);

    let samples = match f {
        Formula::BigAnd(items) => items,
        _ => {
            c.violate("root".into(), "expected a BIGAND of samples".into());
            return c.finish();
        }
    };
    c.set("time_points", samples.len() as u64);

    for (i, sample) in samples.iter().enumerate() {
        let (time, body) = match sample {
            Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
            _ => {
                c.violate(
                    format!("samples[{i}]"),
                    "expected IMPLIES(TimePoint, BIGAND(...))".into(),
                );
                continue;
            }
        };
        if !matches!(time, Formula::TimePoint(_)) {
            c.violate(format!("samples[{i}].premise"), "expected a TimePoint".into());
        }
        let entries = match body {
            Formula::BigAnd(items) => items,
            _ => {
                c.violate(
                    format!("samples[{i}].body"),
                    "expected a BIGAND of ID/Index/Name entries".into(),
                );
                continue;
            }
        };
        if entries.len() != 3 {
            c.violate(
                format!("samples[{i}].body"),
                format!("expected exactly three entries, found {}", entries.len()),
            );
        }
        let mut seen: Vec<&str> = Vec::new();
        for (j, entry) in entries.iter().enumerate() {
            let path = format!("samples[{i}].entries[{j}]");
            let (owner, value) = match entry {
                Formula::Implies(p, q) => (p.as_ref(), q.as_ref()),
                _ => {
                    c.violate(path, "expected IMPLIES(Owner, ComponentState)".into());
                    continue;
                }
            };
            let label = match owner {
                Formula::Owner(label) => label.as_str(),
                _ => {
                    c.violate(path, "expected an Owner label".into());
                    continue;
                }
            };
            let value = match value {
                Formula::ComponentState(v) => v,
                _ => {
                    c.violate(path, "expected a ComponentState".into());
                    continue;
                }
            };
            if seen.contains(&label) {
                c.violate(path, format!("duplicate Owner({label}) entry"));
                continue;
            }
            match label {
                "ID" | "Name" => {
                    seen.push(label);
                    if !matches!(value, StateValue::Text(_)) {
                        c.violate(path, format!("Owner({label}) value must be text"));
                    }
                }
                "Index" => {
                    seen.push(label);
                    match integer_state(value) {
                        Some(n) if (0..=1000).contains(&n) && n % 10 == 0 => {}
                        Some(n) => c.violate(
                            path,
                            format!("index {n} must be a multiple of 10 in 0..1000"),
                        ),
                        None => c.violate(path, "index must be an integer".into()),
                    }
                }
                other => c.violate(path, format!("unexpected Owner({other})")),
            }
        }
        for required in ["ID", "Index", "Name"] {
            if !seen.contains(&required) {
                c.violate(
                    format!("samples[{i}].body"),
                    format!("missing Owner({required}) entry"),
                );
            }
        }
    }
    c.finish()
}

/// The integer carried by a state value, whether written bare (`770`),
/// marked (`770.0`) or boxed in a one-element tuple (`(770)`).
fn integer_state(value: &StateValue) -> Option<i64> {
    match value {
        StateValue::Number(d) => d.as_int(),
        StateValue::IntTuple(values) if values.len() == 1 => Some(values[0]),
        _ => None,
    }
}

/// The unique collection whose validator accepts `f`; `None` when no
/// validator or more than one accepts (an empty `BIGAND`, for instance,
/// satisfies several schemas).
pub fn detect_collection(f: &Formula) -> Option<Collection> {
    let mut found = None;
    for collection in Collection::ALL {
        if collection.validate(f).is_valid() {
            if found.is_some() {
                return None;
            }
            found = Some(collection);
        }
    }
    found
}
