//! Quadrature decoding state machine: step classification, contact
//! debouncing, position counting and index zeroing.

use super::pattern::{Channels, EncoderPattern, PREAMBLE_STATES};

/// Classification of one state transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDecode {
    /// No change.
    Hold,
    /// One step along the forward Gray cycle (strip pulled out).
    Forward,
    /// One step along the reverse cycle.
    Backward,
    /// Both channels changed: at least one state was missed (sampling too
    /// slow for the motion).
    Fault,
}

impl StepDecode {
    /// Signed position increment; faults contribute nothing.
    pub fn increment(self) -> i32 {
        match self {
            StepDecode::Forward => 1,
            StepDecode::Backward => -1,
            StepDecode::Hold | StepDecode::Fault => 0,
        }
    }
}

/// Classify the transition between two sampled channel pairs.
///
/// Antisymmetric in its arguments: swapping `prev` and `next` maps
/// `Forward ↔ Backward` and leaves `Hold`/`Fault` fixed.
pub fn decode_step(prev: Channels, next: Channels) -> StepDecode {
    match (4 + next.phase() - prev.phase()) % 4 {
        0 => StepDecode::Hold,
        1 => StepDecode::Forward,
        3 => StepDecode::Backward,
        _ => StepDecode::Fault,
    }
}

/// Contact debouncer: a new level pair must persist for `required`
/// consecutive samples before the decoder sees it.
#[derive(Debug, Clone)]
pub struct Debouncer {
    required: u32,
    stable: Channels,
    candidate: Channels,
    run: u32,
}

impl Debouncer {
    /// `required >= 1`; with 1 every raw sample is accepted immediately.
    pub fn new(initial: Channels, required: u32) -> Self {
        Self {
            required: required.max(1),
            stable: initial,
            candidate: initial,
            run: 0,
        }
    }

    pub fn stable(&self) -> Channels {
        self.stable
    }

    /// Feed one raw sample; returns the new stable state when a change is
    /// accepted.
    pub fn feed(&mut self, raw: Channels) -> Option<Channels> {
        if raw == self.stable {
            self.run = 0;
            return None;
        }
        if raw == self.candidate {
            self.run += 1;
        } else {
            self.candidate = raw;
            self.run = 1;
        }
        if self.run >= self.required {
            self.stable = raw;
            self.run = 0;
            Some(raw)
        } else {
            None
        }
    }
}

/// What the decoder made of one observed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    Hold,
    /// Accepted quadrature step with its signed increment.
    Step(i32),
    /// Double-bit transition consistent with index-preamble traversal while
    /// uncalibrated; not counted, not a fault.
    PreambleAnomaly,
    /// Double-bit transition that cannot be preamble traversal.
    Fault,
}

/// Fault tags carried by [`Decoder::fault`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// A state was skipped between samples (displacement of at least two
    /// resolutions between accepted samples).
    MissedStep,
}

/// Incremental position decoder with index zeroing.
///
/// Sequential state machine: single writer, one accepted state at a time.
/// The position count is a signed number of resolution steps; it is only
/// an absolute position once `calibrated` is true (the index signature has
/// been observed), otherwise it is a relative count from the start state.
#[derive(Debug, Clone)]
pub struct Decoder {
    channels: Channels,
    position_count: i64,
    calibrated: bool,
    fault: Option<FaultKind>,
    signature: [Channels; PREAMBLE_STATES],
    history: [Channels; PREAMBLE_STATES],
    history_len: usize,
    zero_events: u32,
}

impl Decoder {
    pub fn new(pattern: &EncoderPattern, initial: Channels) -> Self {
        let mut d = Self {
            channels: initial,
            position_count: 0,
            calibrated: false,
            fault: None,
            signature: *pattern.index_signature(),
            history: [initial; PREAMBLE_STATES],
            history_len: 0,
            zero_events: 0,
        };
        d.push_history(initial);
        d
    }

    pub fn channels(&self) -> Channels {
        self.channels
    }

    /// Signed position count in resolution steps. Meaningful as an absolute
    /// position only when [`Self::calibrated`] is true.
    pub fn position_count(&self) -> i64 {
        self.position_count
    }

    pub fn calibrated(&self) -> bool {
        self.calibrated
    }

    pub fn fault(&self) -> Option<FaultKind> {
        self.fault
    }

    /// Number of index zeroing events seen so far.
    pub fn zero_events(&self) -> u32 {
        self.zero_events
    }

    fn push_history(&mut self, state: Channels) {
        if self.history_len < PREAMBLE_STATES {
            self.history[self.history_len] = state;
            self.history_len += 1;
        } else {
            self.history.rotate_left(1);
            self.history[PREAMBLE_STATES - 1] = state;
        }
    }

    /// The current history window is a contiguous substring of the index
    /// signature (so a double-bit flip can be legitimate preamble traversal).
    fn window_fits_signature(&self) -> bool {
        let w = &self.history[..self.history_len];
        if w.len() > PREAMBLE_STATES {
            return false;
        }
        (0..=PREAMBLE_STATES - w.len()).any(|o| &self.signature[o..o + w.len()] == w)
    }

    /// Process one accepted (debounced) channel state.
    pub fn observe(&mut self, state: Channels) -> Observation {
        if state == self.channels {
            return Observation::Hold;
        }
        let step = decode_step(self.channels, state);
        self.channels = state;
        self.push_history(state);

        let outcome = match step {
            StepDecode::Forward | StepDecode::Backward => {
                self.position_count += step.increment() as i64;
                Observation::Step(step.increment())
            }
            StepDecode::Fault => {
                if !self.calibrated && self.window_fits_signature() {
                    Observation::PreambleAnomaly
                } else {
                    self.fault.get_or_insert(FaultKind::MissedStep);
                    Observation::Fault
                }
            }
            StepDecode::Hold => unreachable!("state change already checked"),
        };

        if self.history_len == PREAMBLE_STATES && self.history == self.signature {
            self.position_count = 0;
            self.calibrated = true;
            self.zero_events += 1;
        }
        outcome
    }
}
