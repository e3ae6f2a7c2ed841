//! Conductive-tape layout and electrode sampling.
//!
//! The periodic region is a 50%-duty square wave of period `4δ` (δ = the
//! designed resolution). Electrode A reads the track at the strip position
//! `x`, electrode B at `x + δ`, so one resolution step advances the pair
//! through the Gray cycle `11 → 10 → 00 → 01 → 11`.
//!
//! The tape start carries the index mark: a half-period (`2δ`) segment
//! occupying the `4δ` ahead of the periodic region. Read through the same
//! two electrodes it yields the state string `10, 01, 10, 01` whose
//! internal transitions flip both channels at once — a signature that
//! fault-free motion inside the periodic region can never produce.

use crate::error::{Error, Result};
use crate::fp;

/// Logic level of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Low,
    High,
}

/// A sampled channel pair (A, B).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Channels {
    pub a: Level,
    pub b: Level,
}

impl Channels {
    pub const fn new(a: Level, b: Level) -> Self {
        Self { a, b }
    }

    /// Position of this state on the forward Gray cycle:
    /// `11 → 0, 10 → 1, 00 → 2, 01 → 3`.
    pub const fn phase(self) -> u8 {
        match (self.a, self.b) {
            (Level::High, Level::High) => 0,
            (Level::High, Level::Low) => 1,
            (Level::Low, Level::Low) => 2,
            (Level::Low, Level::High) => 3,
        }
    }

    /// Inverse of [`Self::phase`].
    pub const fn from_phase(phase: u8) -> Self {
        match phase % 4 {
            0 => Self::new(Level::High, Level::High),
            1 => Self::new(Level::High, Level::Low),
            2 => Self::new(Level::Low, Level::Low),
            _ => Self::new(Level::Low, Level::High),
        }
    }

    /// Number of channels that differ from `other` (0, 1 or 2).
    pub fn bits_changed(self, other: Self) -> u8 {
        (self.a != other.a) as u8 + (self.b != other.b) as u8
    }
}

impl core::fmt::Display for Channels {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let bit = |l: Level| if l == Level::High { '1' } else { '0' };
        write!(f, "{}{}", bit(self.a), bit(self.b))
    }
}

/// Number of preamble state bins ahead of the periodic region.
pub(crate) const PREAMBLE_STATES: usize = 4;

/// Tape layout: resolution, periodic track and index preamble.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderPattern {
    resolution: f64,
    tape_length: f64,
    electrode_offset: f64,
    preamble: [Channels; PREAMBLE_STATES],
}

impl EncoderPattern {
    /// Build a tape with the given resolution δ (mm) and periodic-region
    /// length (mm, must cover at least three periods). The electrode offset
    /// defaults to δ.
    pub fn generate(resolution: f64, tape_length: f64) -> Result<Self> {
        if !(resolution > 0.0) {
            return Err(Error::InvalidParameter {
                name: "resolution",
                reason: "must be positive",
            });
        }
        if !(tape_length >= 3.0 * 4.0 * resolution) {
            return Err(Error::InvalidParameter {
                name: "tape_length",
                reason: "must cover at least three periods (12 resolutions)",
            });
        }
        let mut pattern = Self {
            resolution,
            tape_length,
            electrode_offset: resolution,
            preamble: [Channels::from_phase(0); PREAMBLE_STATES],
        };
        // the index signature is what the electrodes actually read while
        // crossing the half-period segment; sample at bin centers
        let mut preamble = [Channels::from_phase(0); PREAMBLE_STATES];
        for (i, slot) in preamble.iter_mut().enumerate() {
            let x = (i as f64 - PREAMBLE_STATES as f64 + 0.5) * resolution;
            *slot = pattern.sample_unchecked(x);
        }
        pattern.preamble = preamble;
        Ok(pattern)
    }

    /// Tape with the designed 1 mm resolution and a 40 mm periodic region.
    pub fn default_tape() -> Self {
        Self::generate(1.0, 40.0).expect("default tape parameters are valid")
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Periodic track period, `4δ`.
    pub fn period(&self) -> f64 {
        4.0 * self.resolution
    }

    pub fn tape_length(&self) -> f64 {
        self.tape_length
    }

    pub fn electrode_offset(&self) -> f64 {
        self.electrode_offset
    }

    /// Length of the index preamble ahead of the periodic region, `4δ`.
    pub fn preamble_length(&self) -> f64 {
        PREAMBLE_STATES as f64 * self.resolution
    }

    /// The state string the decoder must observe to zero the counter.
    pub fn index_signature(&self) -> &[Channels; PREAMBLE_STATES] {
        &self.preamble
    }

    /// Exact-string index match over the trailing `|preamble|` states of a
    /// history window.
    pub fn matches_index(&self, history: &[Channels]) -> bool {
        history.len() >= PREAMBLE_STATES
            && history[history.len() - PREAMBLE_STATES..] == self.preamble
    }

    /// Conductivity of the single physical track at tape coordinate `x`:
    /// half-period segment on `[-4δ, 0)`, 50%-duty period-`4δ` wave beyond.
    fn track(&self, x: f64) -> Level {
        let bin = fp::floor(x / self.resolution) as i64;
        let conductive = if bin < 0 {
            // half-period index segment: conductive on even bins
            bin.rem_euclid(2) == 0
        } else {
            bin.rem_euclid(4) < 2
        };
        if conductive {
            Level::High
        } else {
            Level::Low
        }
    }

    fn sample_unchecked(&self, x: f64) -> Channels {
        Channels::new(self.track(x), self.track(x + self.electrode_offset))
    }

    /// Channel pair at strip position `x` (mm).
    ///
    /// `x = 0` is the start of the periodic region (the index origin);
    /// preamble positions are negative, down to `-4δ`. Piecewise constant
    /// with breakpoints at multiples of δ.
    pub fn sample(&self, x: f64) -> Result<Channels> {
        if !(x >= -self.preamble_length() && x <= self.tape_length) {
            return Err(Error::OutOfRange {
                what: "strip position",
                value: x,
                min: -self.preamble_length(),
                max: self.tape_length,
            });
        }
        Ok(self.sample_unchecked(x))
    }
}
