//! The sensing layer as a logical system.
//!
//! A patterned conductive tape rides on the TPU-fabric strip. Two fixed
//! electrodes, one resolution step apart, read the tape as two binary
//! channels; the four channel states cycle through a Gray sequence as the
//! strip moves, exactly like a traditional incremental encoder. Counting
//! accepted transitions gives displacement, their order gives direction,
//! and a unique pattern at the tape start zeroes the counter.
//!
//! - [`EncoderPattern`] — tape layout and channel sampling.
//! - [`decode_step`] / [`Decoder`] / [`Debouncer`] — the decoding state
//!   machine with glitch suppression and index zeroing.
//! - [`MotionProfile`] / [`track_profile`] — replay of time-stamped strip
//!   motion through the sampled decoder.
//!
//! No electrical behavior is modeled (pull-down resistors, voltages,
//! contact wear); channels are ideal logic levels.

mod decoder;
mod pattern;
mod profile;

pub use decoder::{decode_step, Debouncer, Decoder, FaultKind, Observation, StepDecode};
pub use pattern::{Channels, EncoderPattern, Level};
pub use profile::{
    track_profile, track_profile_with, MotionProfile, PressureDistortion, ReplayStart,
    TrackOptions, TrackResult, TrackedSample,
};
