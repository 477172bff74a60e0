//! Small sample documents in the text format, one per collection.
//!
//! These are the opening measurements of each archived collection and double
//! as reference input for the parser: a depth-scan frame with ten points and
//! ten colors, twenty-eight factory events, ten train occupancy frames, and
//! eight UV index samples.

/// One depth-scan frame: ten point measurements and ten color triples.
pub const KINECT_FRAME: &str = include_str!("../fixtures/kinect.txt");

/// The first twenty-eight events of a factory station run.
pub const FESTO_EVENTS: &str = include_str!("../fixtures/festo.txt");

/// The first ten occupancy frames of a train circling a 672-segment track.
pub const TRAIN_OCCUPANCY: &str = include_str!("../fixtures/trains.txt");

/// The first eight UV index samples for Melbourne.
pub const UV_WEATHER: &str = include_str!("../fixtures/weather.txt");
