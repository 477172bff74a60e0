//! Deterministic, seeded synthetic dataset builders.
//!
//! The real archives are distributed separately, so each collection gets a
//! generator that reproduces its documented shape and cardinalities. Output
//! is a pure function of the generator spec: the same seed and sizes give a
//! structurally identical formula, across runs and across platforms. The
//! default spec for each collection reproduces the archived totals
//! (217,088 points with 2,764,800 colors; 4,761 events; 9,601 occupancy
//! frames on a 672-segment track; 439 UV samples).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::calendar;
use crate::decimal::Decimal;
use crate::formula::Formula;
use crate::schema::{Collection, ComponentKind, FestoComponentCatalog};

/// SplitMix64: the output sequence is part of the generator contract, so
/// reimplementations in other languages reproduce the same datasets.
///
/// `state += 0x9E3779B97F4A7C15`, then the output is the state mixed by two
/// xor-shift-multiply rounds with `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB` and a final `z ^ (z >> 31)`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..bound` via modulo (the bias is irrelevant at
    /// these bounds and keeps the recurrence trivial to port).
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// Inclusive range draw.
    pub fn range_i64(&mut self, low: i64, high: i64) -> i64 {
        debug_assert!(low <= high);
        let width = high.abs_diff(low) + 1;
        low.wrapping_add(self.below(width) as i64)
    }
}

/// Frame timestamp shared by the depth-scan collection and the first train
/// occupancy frame in the archived data.
const SCAN_FRAME_MILLIS: u64 = 1_429_188_806_320;

/// `Wed Jul 27 09:11:28 UTC 2016`, the first archived factory event.
const FESTO_START_MILLIS: u64 = 1_469_610_688_000;

/// Spec for one depth-scan frame.
///
/// Draw order per point: x, y, z, u, v; per color: r, g, b. Coordinates are
/// drawn in x,y ∈ -256..=255 and z ∈ 0..=15, texture pairs in
/// 0..=1919 × 0..=1079, color channels in -1..=255.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinectSpec {
    pub seed: u64,
    pub n_points: usize,
    pub n_colors: usize,
}

impl Default for KinectSpec {
    fn default() -> Self {
        KinectSpec {
            seed: 0,
            n_points: 217_088,
            n_colors: 2_764_800,
        }
    }
}

impl KinectSpec {
    pub fn generate(&self) -> Formula {
        let mut rng = SplitMix64::new(self.seed);
        let points: Vec<Formula> = (0..self.n_points)
            .map(|_| {
                let x = rng.range_i64(-256, 255);
                let y = rng.range_i64(-256, 255);
                let z = rng.range_i64(0, 15);
                let u = rng.range_i64(0, 1919);
                let v = rng.range_i64(0, 1079);
                Formula::implies(Formula::Occupy3DPoint(x, y, z), Formula::state_tuple([u, v]))
            })
            .collect();
        let colors: Vec<Formula> = (0..self.n_colors)
            .map(|_| {
                let r = rng.range_i64(-1, 255);
                let g = rng.range_i64(-1, 255);
                let b = rng.range_i64(-1, 255);
                Formula::state_tuple([r, g, b])
            })
            .collect();
        Formula::implies(
            Formula::time_point(SCAN_FRAME_MILLIS),
            Formula::BigAnd(alloc::vec![
                Formula::implies(Formula::owner("Points"), Formula::BigAnd(points)),
                Formula::implies(Formula::owner("Colors"), Formula::BigAnd(colors)),
            ]),
        )
    }
}

/// Spec for a factory event stream.
///
/// Draw order per event: the timestamp advance in whole seconds (0..=2,
/// skipped for the first event), the component index into the catalog
/// (actuators first, then sensors), then the signal level — actuators
/// toggle between 5.0 and 5.5, sensors between 80.0 and 100.0, matching the
/// archived pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FestoSpec {
    pub seed: u64,
    pub n_events: usize,
    pub start_millis: u64,
}

impl Default for FestoSpec {
    fn default() -> Self {
        FestoSpec {
            seed: 0,
            n_events: 4761,
            start_millis: FESTO_START_MILLIS,
        }
    }
}

impl FestoSpec {
    pub fn generate(&self) -> Formula {
        let mut rng = SplitMix64::new(self.seed);
        let components: Vec<&'static str> = FestoComponentCatalog::all().collect();
        let mut millis = self.start_millis;
        let events: Vec<Formula> = (0..self.n_events)
            .map(|i| {
                if i > 0 {
                    millis += rng.below(3) * 1000;
                }
                let name = components[rng.below(components.len() as u64) as usize];
                let level = match FestoComponentCatalog::kind(name) {
                    Some(ComponentKind::Actuator) => {
                        if rng.below(2) == 0 {
                            Decimal::new(50, 1)
                        } else {
                            Decimal::new(55, 1)
                        }
                    }
                    _ => {
                        if rng.below(2) == 0 {
                            Decimal::new(800, 1)
                        } else {
                            Decimal::new(1000, 1)
                        }
                    }
                };
                Formula::implies(
                    Formula::and(
                        Formula::calendar_time(calendar::format_utc(millis)),
                        Formula::component(name),
                    ),
                    Formula::state_number(level),
                )
            })
            .collect();
        Formula::BigAnd(events)
    }
}

/// Spec for a train occupancy series.
///
/// Frame `i` occupies segments `start_node + i .. start_node + i +
/// train_length`, wrapped into `1..=track_nodes`; timestamps start at
/// `start_millis` and advance by one draw of 80..=110 milliseconds per
/// frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainsSpec {
    pub seed: u64,
    pub n_frames: usize,
    pub track_nodes: u64,
    pub train_length: u64,
    pub start_node: u64,
    pub start_millis: u64,
}

impl Default for TrainsSpec {
    fn default() -> Self {
        TrainsSpec {
            seed: 0,
            n_frames: 9601,
            track_nodes: 672,
            train_length: 10,
            start_node: 664,
            start_millis: SCAN_FRAME_MILLIS,
        }
    }
}

impl TrainsSpec {
    /// # Panics
    /// Panics when the track is empty, the train is longer than the track,
    /// or the start node is off the track.
    pub fn generate(&self) -> Formula {
        assert!(self.track_nodes >= 1, "the track needs at least one segment");
        assert!(
            self.train_length <= self.track_nodes,
            "the train cannot be longer than the track"
        );
        assert!(
            (1..=self.track_nodes).contains(&self.start_node),
            "the start node must lie on the track"
        );
        let mut rng = SplitMix64::new(self.seed);
        let mut millis = self.start_millis;
        let frames: Vec<Formula> = (0..self.n_frames)
            .map(|i| {
                if i > 0 {
                    millis += 80 + rng.below(31);
                }
                let nodes: Vec<Formula> = (0..self.train_length)
                    .map(|k| {
                        let id = (self.start_node - 1 + i as u64 + k) % self.track_nodes + 1;
                        Formula::occupy_node(id)
                    })
                    .collect();
                Formula::implies(Formula::time_point(millis), Formula::BigAnd(nodes))
            })
            .collect();
        Formula::BigAnd(frames)
    }
}

/// Start-of-series clock for the weather generator, rendered in the
/// archive's `1st December 201511:04AM` style.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinuteClock {
    /// Day of month, 1..=31; wraps back to 1 past day 31.
    pub day: u32,
    /// Minute of day, 0..=1439.
    pub minute_of_day: u32,
}

impl MinuteClock {
    fn advance_minute(&mut self) {
        self.minute_of_day += 1;
        if self.minute_of_day == 1440 {
            self.minute_of_day = 0;
            self.day = if self.day >= 31 { 1 } else { self.day + 1 };
        }
    }

    fn render(&self) -> String {
        let suffix = match self.day {
            11..=13 => "th",
            d if d % 10 == 1 => "st",
            d if d % 10 == 2 => "nd",
            d if d % 10 == 3 => "rd",
            _ => "th",
        };
        let hour24 = self.minute_of_day / 60;
        let minute = self.minute_of_day % 60;
        let (hour12, half) = match hour24 {
            0 => (12, "AM"),
            1..=11 => (hour24, "AM"),
            12 => (12, "PM"),
            _ => (hour24 - 12, "PM"),
        };
        format!(
            "{day}{suffix} December 2015{hour12}:{minute:02}{half}",
            day = self.day
        )
    }
}

/// Spec for a UV index series.
///
/// The index starts at 770 (a UV index of 7.7) and performs a bounded
/// random walk in 0..=1000: one draw per sample after the first, a step of
/// -30..=30 in multiples of ten. Sample times advance one minute per
/// sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeatherSpec {
    pub seed: u64,
    pub n_samples: usize,
    pub city_id: String,
    pub city_name: String,
    pub start: MinuteClock,
}

impl Default for WeatherSpec {
    fn default() -> Self {
        WeatherSpec {
            seed: 0,
            n_samples: 439,
            city_id: "melbourne".to_string(),
            city_name: "mel".to_string(),
            start: MinuteClock {
                day: 1,
                minute_of_day: 11 * 60 + 4,
            },
        }
    }
}

impl WeatherSpec {
    pub fn generate(&self) -> Formula {
        let mut rng = SplitMix64::new(self.seed);
        let mut clock = self.start.clone();
        let mut index: i64 = 770;
        let samples: Vec<Formula> = (0..self.n_samples)
            .map(|i| {
                if i > 0 {
                    clock.advance_minute();
                    let step = rng.below(7) as i64 * 10 - 30;
                    index = (index + step).clamp(0, 1000);
                }
                Formula::implies(
                    Formula::calendar_time(clock.render()),
                    Formula::BigAnd(alloc::vec![
                        Formula::implies(
                            Formula::owner("ID"),
                            Formula::state_text(self.city_id.clone()),
                        ),
                        Formula::implies(
                            Formula::owner("Index"),
                            Formula::state_number(Decimal::from_int(index)),
                        ),
                        Formula::implies(
                            Formula::owner("Name"),
                            Formula::state_text(self.city_name.clone()),
                        ),
                    ]),
                )
            })
            .collect();
        Formula::BigAnd(samples)
    }
}

/// A generator spec for any of the four collections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Kinect(KinectSpec),
    Festo(FestoSpec),
    Trains(TrainsSpec),
    Weather(WeatherSpec),
}

impl GeneratorSpec {
    /// The default spec for a collection, reproducing the archived totals.
    pub fn default_for(collection: Collection) -> GeneratorSpec {
        match collection {
            Collection::Kinect => GeneratorSpec::Kinect(KinectSpec::default()),
            Collection::Festo => GeneratorSpec::Festo(FestoSpec::default()),
            Collection::Trains => GeneratorSpec::Trains(TrainsSpec::default()),
            Collection::Weather => GeneratorSpec::Weather(WeatherSpec::default()),
        }
    }

    pub fn collection(&self) -> Collection {
        match self {
            GeneratorSpec::Kinect(_) => Collection::Kinect,
            GeneratorSpec::Festo(_) => Collection::Festo,
            GeneratorSpec::Trains(_) => Collection::Trains,
            GeneratorSpec::Weather(_) => Collection::Weather,
        }
    }

    pub fn generate(&self) -> Formula {
        match self {
            GeneratorSpec::Kinect(spec) => spec.generate(),
            GeneratorSpec::Festo(spec) => spec.generate(),
            GeneratorSpec::Trains(spec) => spec.generate(),
            GeneratorSpec::Weather(spec) => spec.generate(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;
    use crate::schema;

    #[test]
    fn splitmix_matches_the_reference_sequence() {
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
        let mut rng = SplitMix64::new(42);
        assert_eq!(rng.next_u64(), 0xBDD7_3226_2FEB_6E95);
    }

    #[test]
    fn defaults_reproduce_the_archived_totals() {
        let kinect = KinectSpec::default();
        assert_eq!((kinect.n_points, kinect.n_colors), (217_088, 2_764_800));
        assert_eq!(FestoSpec::default().n_events, 4761);
        let trains = TrainsSpec::default();
        assert_eq!((trains.n_frames, trains.track_nodes), (9601, 672));
        assert_eq!(WeatherSpec::default().n_samples, 439);
    }

    #[test]
    fn small_kinect_output_validates() {
        let spec = KinectSpec {
            seed: 1,
            n_points: 10,
            n_colors: 10,
        };
        let report = schema::validate_kinect(&spec.generate());
        assert!(report.is_valid(), "{}", report.render_text());
        assert_eq!(report.stat("points"), 10);
        assert_eq!(report.stat("colors"), 10);
    }

    #[test]
    fn empty_kinect_output_is_still_valid() {
        let spec = KinectSpec {
            seed: 1,
            n_points: 0,
            n_colors: 0,
        };
        let report = schema::validate_kinect(&spec.generate());
        assert!(report.is_valid());
        assert_eq!(report.stat("points"), 0);
    }

    #[test]
    fn generators_are_deterministic() {
        for collection in Collection::ALL {
            let spec = small_spec(collection, 7);
            assert_eq!(
                spec.generate(),
                spec.generate(),
                "same spec must reproduce the same {collection} formula"
            );
        }
        assert_ne!(
            small_spec(Collection::Trains, 7).generate(),
            small_spec(Collection::Trains, 8).generate()
        );
    }

    fn small_spec(collection: Collection, seed: u64) -> GeneratorSpec {
        match collection {
            Collection::Kinect => GeneratorSpec::Kinect(KinectSpec {
                seed,
                n_points: 5,
                n_colors: 7,
            }),
            Collection::Festo => GeneratorSpec::Festo(FestoSpec {
                seed,
                n_events: 20,
                ..FestoSpec::default()
            }),
            Collection::Trains => GeneratorSpec::Trains(TrainsSpec {
                seed,
                n_frames: 20,
                ..TrainsSpec::default()
            }),
            Collection::Weather => GeneratorSpec::Weather(WeatherSpec {
                seed,
                n_samples: 20,
                ..WeatherSpec::default()
            }),
        }
    }

    #[test]
    fn small_outputs_validate_for_every_collection() {
        for collection in Collection::ALL {
            let spec = small_spec(collection, 3);
            let report = collection.validate(&spec.generate());
            assert!(report.is_valid(), "{}", report.render_text());
        }
    }

    #[test]
    fn empty_festo_stream_is_the_empty_conjunction() {
        let spec = FestoSpec {
            n_events: 0,
            ..FestoSpec::default()
        };
        assert_eq!(spec.generate(), F::BigAnd(alloc::vec![]));
        assert!(schema::validate_festo(&spec.generate()).is_valid());
    }

    #[test]
    fn first_festo_event_uses_the_archived_start_time() {
        let spec = FestoSpec {
            n_events: 1,
            ..FestoSpec::default()
        };
        let first = match spec.generate() {
            F::BigAnd(events) => events.into_iter().next().unwrap(),
            other => panic!("unexpected shape: {other:?}"),
        };
        let text = crate::text::print(&first);
        assert!(
            text.contains("TimePoint(Wed Jul 27 09:11:28 UTC 2016)"),
            "{text}"
        );
    }

    #[test]
    fn default_first_train_frame_matches_the_archive() {
        let spec = TrainsSpec {
            n_frames: 1,
            ..TrainsSpec::default()
        };
        let f = spec.generate();
        let ids: Vec<u64> = f
            .collect_atoms(|a| matches!(a, F::OccupyNode(_)))
            .iter()
            .map(|a| match a {
                F::OccupyNode(id) => id.get(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(ids, [664, 665, 666, 667, 668, 669, 670, 671, 672, 1]);
        let report = schema::validate_trains(&f);
        assert!(report.is_valid());
        assert_eq!(report.stat("time_points"), 1);
    }

    #[test]
    fn train_window_slides_with_wraparound() {
        let spec = TrainsSpec {
            seed: 5,
            n_frames: 50,
            ..TrainsSpec::default()
        };
        let report = schema::validate_trains(&spec.generate());
        assert!(report.is_valid());
        assert_eq!(report.stat("sliding_window"), 1);
    }

    #[test]
    fn oversized_train_panics() {
        let spec = TrainsSpec {
            track_nodes: 5,
            train_length: 10,
            ..TrainsSpec::default()
        };
        let result = std::panic::catch_unwind(|| spec.generate());
        assert!(result.is_err());
    }

    #[test]
    fn weather_clock_advances_one_minute_per_sample() {
        let spec = WeatherSpec {
            n_samples: 3,
            ..WeatherSpec::default()
        };
        let text = crate::text::print(&spec.generate());
        assert!(text.contains("TimePoint(1st December 201511:04AM)"));
        assert!(text.contains("TimePoint(1st December 201511:05AM)"));
        assert!(text.contains("TimePoint(1st December 201511:06AM)"));
    }

    #[test]
    fn weather_clock_rolls_over_noon_and_midnight() {
        let mut clock = MinuteClock {
            day: 2,
            minute_of_day: 11 * 60 + 59,
        };
        assert_eq!(clock.render(), "2nd December 201511:59AM");
        clock.advance_minute();
        assert_eq!(clock.render(), "2nd December 201512:00PM");
        let mut late = MinuteClock {
            day: 3,
            minute_of_day: 23 * 60 + 59,
        };
        late.advance_minute();
        assert_eq!(late.render(), "4th December 201512:00AM");
    }

    #[test]
    fn weather_indices_stay_on_the_grid() {
        let spec = WeatherSpec {
            seed: 99,
            n_samples: 200,
            ..WeatherSpec::default()
        };
        let f = spec.generate();
        let report = schema::validate_weather(&f);
        assert!(report.is_valid(), "{}", report.render_text());
    }
}
