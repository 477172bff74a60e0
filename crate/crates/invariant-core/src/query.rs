//! Read-side helpers over collection-shaped formulas.
//!
//! These extract time series and summaries from datasets that validate
//! under one of the four schemas; they do not reason about arbitrary
//! formulas. Each query validates its input first, so malformed data is
//! reported instead of silently mis-read.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::decimal::Decimal;
use crate::formula::{Formula, StateValue, Timestamp};
use crate::schema::{self, Collection};

/// One factory event: when, which signal, what level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSample {
    pub time: Timestamp,
    pub component: String,
    pub value: StateValue,
}

/// Componentwise bounds of a point cloud.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds3 {
    pub min: (i64, i64, i64),
    pub max: (i64, i64, i64),
}

impl Bounds3 {
    pub fn contains(&self, x: i64, y: i64, z: i64) -> bool {
        (self.min.0..=self.max.0).contains(&x)
            && (self.min.1..=self.max.1).contains(&y)
            && (self.min.2..=self.max.2).contains(&z)
    }
}

/// Why a query could not be answered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryError {
    /// No schema (or more than one) accepts the formula.
    NotADataset,
    /// The formula does not validate under the collection the query needs.
    NotValidFor(Collection),
    /// Bounds are undefined for a scan without points.
    EmptyPointCloud,
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::NotADataset => {
                write!(f, "the formula is not a dataset of any known collection")
            }
            QueryError::NotValidFor(collection) => {
                write!(f, "the formula is not a valid {collection} dataset")
            }
            QueryError::EmptyPointCloud => write!(f, "the scan contains no points"),
        }
    }
}

impl core::error::Error for QueryError {}

fn require(collection: Collection, f: &Formula) -> Result<(), QueryError> {
    if collection.validate(f).is_valid() {
        Ok(())
    } else {
        Err(QueryError::NotValidFor(collection))
    }
}

/// All premise time points in document order, duplicates preserved.
///
/// The formula must be a dataset of exactly one collection; the premises
/// are the frame, event or sample timestamps of that collection.
pub fn time_points(f: &Formula) -> Result<Vec<Timestamp>, QueryError> {
    let collection = schema::detect_collection(f).ok_or(QueryError::NotADataset)?;
    let mut times = Vec::new();
    match collection {
        Collection::Kinect => {
            if let Formula::Implies(premise, _) = f {
                if let Formula::TimePoint(t) = premise.as_ref() {
                    times.push(t.clone());
                }
            }
        }
        Collection::Festo => {
            if let Formula::BigAnd(events) = f {
                for event in events {
                    if let Formula::Implies(premise, _) = event {
                        if let Formula::And(t, _) = premise.as_ref() {
                            if let Formula::TimePoint(t) = t.as_ref() {
                                times.push(t.clone());
                            }
                        }
                    }
                }
            }
        }
        Collection::Trains | Collection::Weather => {
            if let Formula::BigAnd(items) = f {
                for item in items {
                    if let Formula::Implies(premise, _) = item {
                        if let Formula::TimePoint(t) = premise.as_ref() {
                            times.push(t.clone());
                        }
                    }
                }
            }
        }
    }
    Ok(times)
}

/// All events for one component of a factory stream, in stream order.
pub fn component_series(f: &Formula, name: &str) -> Result<Vec<EventSample>, QueryError> {
    require(Collection::Festo, f)?;
    let mut series = Vec::new();
    if let Formula::BigAnd(events) = f {
        for event in events {
            let Formula::Implies(premise, value) = event else {
                continue;
            };
            let Formula::And(time, component) = premise.as_ref() else {
                continue;
            };
            let (Formula::TimePoint(time), Formula::Component(component)) =
                (time.as_ref(), component.as_ref())
            else {
                continue;
            };
            if component != name {
                continue;
            }
            let Formula::ComponentState(value) = value.as_ref() else {
                continue;
            };
            series.push(EventSample {
                time: time.clone(),
                component: component.clone(),
                value: value.clone(),
            });
        }
    }
    Ok(series)
}

/// The set of occupied track segments at time `millis`: the latest frame at
/// or before `millis`, or `None` when `millis` precedes the first frame.
pub fn occupancy_at(f: &Formula, millis: u64) -> Result<Option<BTreeSet<u64>>, QueryError> {
    require(Collection::Trains, f)?;
    let mut latest: Option<BTreeSet<u64>> = None;
    if let Formula::BigAnd(frames) = f {
        for frame in frames {
            let Formula::Implies(premise, occupancy) = frame else {
                continue;
            };
            let Formula::TimePoint(Timestamp::EpochMillis(t)) = premise.as_ref() else {
                continue;
            };
            if *t > millis {
                // Frame timestamps are strictly increasing.
                break;
            }
            if let Formula::BigAnd(nodes) = occupancy.as_ref() {
                latest = Some(
                    nodes
                        .iter()
                        .filter_map(|node| match node {
                            Formula::OccupyNode(id) => Some(id.get()),
                            _ => None,
                        })
                        .collect(),
                );
            }
        }
    }
    Ok(latest)
}

/// The UV index series: stored integers divided by 100 exactly, so a stored
/// 770 yields 7.7.
pub fn uv_series(f: &Formula) -> Result<Vec<(Timestamp, Decimal)>, QueryError> {
    require(Collection::Weather, f)?;
    let mut series = Vec::new();
    if let Formula::BigAnd(samples) = f {
        for sample in samples {
            let Formula::Implies(premise, body) = sample else {
                continue;
            };
            let Formula::TimePoint(time) = premise.as_ref() else {
                continue;
            };
            let Formula::BigAnd(entries) = body.as_ref() else {
                continue;
            };
            for entry in entries {
                let Formula::Implies(owner, value) = entry else {
                    continue;
                };
                if !matches!(owner.as_ref(), Formula::Owner(label) if label == "Index") {
                    continue;
                }
                let Formula::ComponentState(value) = value.as_ref() else {
                    continue;
                };
                let stored = match value {
                    StateValue::Number(d) => d.as_int(),
                    StateValue::IntTuple(values) if values.len() == 1 => Some(values[0]),
                    _ => None,
                };
                if let Some(stored) = stored {
                    series.push((time.clone(), Decimal::new(stored, 2)));
                }
            }
        }
    }
    Ok(series)
}

/// Componentwise min/max over the scan's 3-D points.
pub fn point_cloud_bounds(f: &Formula) -> Result<Bounds3, QueryError> {
    require(Collection::Kinect, f)?;
    let mut bounds: Option<Bounds3> = None;
    for atom in f.atoms() {
        if let Formula::Occupy3DPoint(x, y, z) = atom {
            bounds = Some(match bounds {
                None => Bounds3 {
                    min: (*x, *y, *z),
                    max: (*x, *y, *z),
                },
                Some(b) => Bounds3 {
                    min: (b.min.0.min(*x), b.min.1.min(*y), b.min.2.min(*z)),
                    max: (b.max.0.max(*x), b.max.1.max(*y), b.max.2.max(*z)),
                },
            });
        }
    }
    bounds.ok_or(QueryError::EmptyPointCloud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::samples;
    use crate::text::parse;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn trains_time_points_start_at_the_first_frame() {
        let f = parse(samples::TRAIN_OCCUPANCY).unwrap();
        let times = time_points(&f).unwrap();
        assert_eq!(times.len(), 10);
        assert_eq!(times[0], Timestamp::EpochMillis(1429188806320));
        assert_eq!(times[9], Timestamp::EpochMillis(1429188807191));
    }

    #[test]
    fn weather_has_eight_time_points() {
        let f = parse(samples::UV_WEATHER).unwrap();
        assert_eq!(time_points(&f).unwrap().len(), 8);
    }

    #[test]
    fn ambiguous_formulas_are_not_datasets() {
        assert_eq!(time_points(&F::BigAnd(vec![])), Err(QueryError::NotADataset));
        assert_eq!(time_points(&F::True), Err(QueryError::NotADataset));
    }

    #[test]
    fn stack_empty_sensor_series_matches_the_sample() {
        let f = parse(samples::FESTO_EVENTS).unwrap();
        let series = component_series(&f, "stackEmptySensor").unwrap();
        let values: Vec<Decimal> = series
            .iter()
            .map(|s| match &s.value {
                StateValue::Number(d) => *d,
                other => panic!("unexpected value {other:?}"),
            })
            .collect();
        assert_eq!(
            values,
            vec![
                Decimal::new(800, 1),
                Decimal::new(1000, 1),
                Decimal::new(800, 1),
                Decimal::new(1000, 1)
            ]
        );
    }

    #[test]
    fn unknown_component_yields_an_empty_series() {
        let f = parse(samples::FESTO_EVENTS).unwrap();
        assert!(component_series(&f, "noSuchSignal").unwrap().is_empty());
    }

    #[test]
    fn component_series_partition_the_event_stream() {
        let f = parse(samples::FESTO_EVENTS).unwrap();
        let total: usize = crate::schema::FestoComponentCatalog::all()
            .map(|name| component_series(&f, name).unwrap().len())
            .sum();
        assert_eq!(total, 28);
    }

    #[test]
    fn component_series_requires_festo_shape() {
        let f = parse(samples::TRAIN_OCCUPANCY).unwrap();
        assert_eq!(
            component_series(&f, "stackEmptySensor"),
            Err(QueryError::NotValidFor(Collection::Festo))
        );
    }

    #[test]
    fn occupancy_is_a_step_function() {
        let f = parse(samples::TRAIN_OCCUPANCY).unwrap();
        let first: BTreeSet<u64> = [664, 665, 666, 667, 668, 669, 670, 671, 672, 1]
            .into_iter()
            .collect();
        assert_eq!(occupancy_at(&f, 1429188806320).unwrap(), Some(first.clone()));
        // Between the first two frames the first frame still holds.
        assert_eq!(occupancy_at(&f, 1429188806400).unwrap(), Some(first));
        assert_eq!(occupancy_at(&f, 1429188806319).unwrap(), None);
        let last: BTreeSet<u64> = (1..=10).collect();
        assert_eq!(occupancy_at(&f, u64::MAX).unwrap(), Some(last));
    }

    #[test]
    fn uv_series_divides_by_one_hundred_exactly() {
        let f = parse(samples::UV_WEATHER).unwrap();
        let series = uv_series(&f).unwrap();
        assert_eq!(series.len(), 8);
        assert_eq!(series[0].1, Decimal::new(77, 1));
        assert_eq!(series[0].1.to_string(), "7.7");
        assert_eq!(series[1].1.to_string(), "4.6");
    }

    #[test]
    fn stored_zero_is_uv_zero() {
        assert_eq!(Decimal::new(0, 2).to_string(), "0.0");
    }

    #[test]
    fn sample_scan_bounds() {
        let f = parse(samples::KINECT_FRAME).unwrap();
        let bounds = point_cloud_bounds(&f).unwrap();
        assert_eq!(bounds.min, (-2, 0, 1));
        assert_eq!(bounds.max, (-1, 2, 4));
    }

    #[test]
    fn single_point_bounds_collapse_to_the_point() {
        let f = F::implies(
            F::time_point(0),
            F::BigAnd(vec![
                F::implies(
                    F::owner("Points"),
                    F::BigAnd(vec![F::implies(
                        F::Occupy3DPoint(3, -4, 5),
                        F::state_tuple([0, 0]),
                    )]),
                ),
                F::implies(F::owner("Colors"), F::BigAnd(vec![])),
            ]),
        );
        let bounds = point_cloud_bounds(&f).unwrap();
        assert_eq!(bounds.min, (3, -4, 5));
        assert_eq!(bounds.max, (3, -4, 5));
    }

    #[test]
    fn empty_scan_has_no_bounds() {
        let f = F::implies(
            F::time_point(0),
            F::BigAnd(vec![
                F::implies(F::owner("Points"), F::BigAnd(vec![])),
                F::implies(F::owner("Colors"), F::BigAnd(vec![])),
            ]),
        );
        assert_eq!(point_cloud_bounds(&f), Err(QueryError::EmptyPointCloud));
    }
}
