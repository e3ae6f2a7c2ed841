//! Motion-profile replay through the sampled decoder.
//!
//! A [`MotionProfile`] is the ground truth: time-stamped strip displacement,
//! linearly interpolated between samples. [`track_profile`] re-samples it at
//! the decoder's rate, reads the tape through the electrodes, debounces,
//! decodes, and reports the estimated displacement next to the truth at
//! every tick.

use alloc::vec::Vec;

use super::decoder::{Debouncer, Decoder, FaultKind};
use super::pattern::EncoderPattern;
use crate::error::{Error, Result};
use crate::fp;

/// Time-stamped strip displacement samples (s, mm). Times strictly
/// increasing, displacements non-negative. The sensing accuracy claims of
/// the device hold for speeds within 0.2–2 mm/s.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionProfile {
    samples: Vec<(f64, f64)>,
}

impl MotionProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "profile must contain at least one sample",
            });
        }
        for (i, &(t, d)) in samples.iter().enumerate() {
            if !t.is_finite() || !d.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    reason: "times and displacements must be finite",
                });
            }
            if !(d >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    reason: "displacements must be non-negative",
                });
            }
            if i > 0 && !(t > samples[i - 1].0) {
                return Err(Error::InvalidParameter {
                    name: "samples",
                    reason: "times must be strictly increasing",
                });
            }
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].0
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    pub fn max_displacement(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, &(_, d)| acc.max(d))
    }

    /// Largest segment speed |Δd/Δt| (mm/s).
    pub fn max_speed(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| fp::abs((w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
            .fold(0.0, f64::max)
    }

    /// Linearly interpolated displacement at time `t`, clamped to the ends.
    pub fn displacement_at(&self, t: f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].0 {
            return s[0].1;
        }
        if t >= s[s.len() - 1].0 {
            return s[s.len() - 1].1;
        }
        // linear scan: profiles are short and replay walks monotonically
        let mut i = 1;
        while s[i].0 < t {
            i += 1;
        }
        let (t0, d0) = s[i - 1];
        let (t1, d1) = s[i];
        d0 + (d1 - d0) * (t - t0) / (t1 - t0)
    }
}

/// Where the electrode sits when the profile starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReplayStart {
    /// Displacement zero is the index origin (start of the periodic
    /// region); the decoder begins uncalibrated but its relative count is
    /// index-aligned by construction. The measurement protocol zeroes the
    /// strip at the index, so this is the default.
    #[default]
    AtIndex,
    /// Displacement zero is the physical tape start: the run traverses the
    /// index preamble and calibrates on it.
    TapeStart,
}

/// Optional tape-stretch model: positions on the tape scale by
/// `1 + stretch_per_kpa · pressure`, emulating the conductive tape being
/// dragged by the pressurized clutch. Off by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureDistortion {
    pub pressure: f64,
    pub stretch_per_kpa: f64,
}

impl PressureDistortion {
    /// Default stretch coefficient (per kPa).
    pub const DEFAULT_STRETCH_PER_KPA: f64 = 1e-4;

    pub fn at_pressure(pressure: f64) -> Self {
        Self {
            pressure,
            stretch_per_kpa: Self::DEFAULT_STRETCH_PER_KPA,
        }
    }

    pub fn factor(&self) -> f64 {
        1.0 + self.stretch_per_kpa * self.pressure
    }
}

/// Replay options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// Decoder sampling rate (Hz).
    pub sample_rate: f64,
    /// Debounce: a level pair must persist this many consecutive samples.
    pub debounce: u32,
    pub start: ReplayStart,
    pub distortion: Option<PressureDistortion>,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            sample_rate: 100.0,
            debounce: 2,
            start: ReplayStart::AtIndex,
            distortion: None,
        }
    }
}

/// One replay tick: decoder estimate next to the interpolated truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedSample {
    pub time: f64,
    pub estimate: f64,
    pub truth: f64,
    /// True from the first decoder fault onward.
    pub fault: bool,
}

/// Replay outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackResult {
    pub samples: Vec<TrackedSample>,
    /// Final position count (resolution steps).
    pub final_count: i64,
    /// Whether the index was seen during the run.
    pub calibrated: bool,
    /// Number of index zeroing events.
    pub zero_events: u32,
    /// Largest |estimate − truth| over the run (mm).
    pub max_abs_error: f64,
    /// Time of the first decoder fault, if any; a faulted run is invalid.
    pub first_fault_time: Option<f64>,
}

impl TrackResult {
    pub fn is_valid(&self) -> bool {
        self.first_fault_time.is_none()
    }
}

/// Replay `profile` through the decoder at `sample_rate` Hz with the given
/// debounce requirement, starting at the index origin.
pub fn track_profile(
    pattern: &EncoderPattern,
    profile: &MotionProfile,
    sample_rate: f64,
    debounce: u32,
) -> Result<TrackResult> {
    track_profile_with(
        pattern,
        profile,
        &TrackOptions {
            sample_rate,
            debounce,
            ..TrackOptions::default()
        },
    )
}

/// Replay with full options.
///
/// For fault-free runs within the rated speed band the estimate stays
/// within one resolution of the truth at every tick; direction reversals
/// are tracked; the counter zeroes when the index signature is seen.
pub fn track_profile_with(
    pattern: &EncoderPattern,
    profile: &MotionProfile,
    opts: &TrackOptions,
) -> Result<TrackResult> {
    if !(opts.sample_rate > 0.0 && opts.sample_rate.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sample_rate",
            reason: "must be positive and finite",
        });
    }
    let factor = match &opts.distortion {
        Some(d) => {
            let f = d.factor();
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "distortion",
                    reason: "stretch factor must be positive and finite",
                });
            }
            f
        }
        None => 1.0,
    };
    let delta = pattern.resolution();
    let x_start = match opts.start {
        ReplayStart::AtIndex => 0.0,
        ReplayStart::TapeStart => -pattern.preamble_length(),
    };
    let x_max = x_start + profile.max_displacement() / factor;
    if x_max > pattern.tape_length() {
        return Err(Error::OutOfRange {
            what: "profile displacement (tape coordinate)",
            value: x_max,
            min: -pattern.preamble_length(),
            max: pattern.tape_length(),
        });
    }

    let t0 = profile.start_time();
    let t1 = profile.end_time();
    let ticks = fp::floor((t1 - t0) * opts.sample_rate + 1e-9) as usize;

    let map_x = |s: f64| x_start + s / factor;

    let s0 = profile.displacement_at(t0);
    let initial = pattern.sample(map_x(s0))?;
    let mut debouncer = Debouncer::new(initial, opts.debounce);
    let mut decoder = Decoder::new(pattern, initial);

    // bin index corresponding to position count zero; re-anchored on every
    // index zeroing (the zeroing fires on entering the last preamble bin)
    let mut count_zero_bin = fp::floor(map_x(s0) / delta) as i64;
    let mut zeros_seen = 0u32;

    let mut samples = Vec::with_capacity(ticks + 1);
    let mut max_abs_error = 0.0f64;
    let mut first_fault_time = None;

    for k in 0..=ticks {
        let t = t0 + k as f64 / opts.sample_rate;
        let truth = profile.displacement_at(t);
        let raw = pattern.sample(map_x(truth))?;
        if let Some(stable) = debouncer.feed(raw) {
            decoder.observe(stable);
            if decoder.zero_events() > zeros_seen {
                zeros_seen = decoder.zero_events();
                count_zero_bin = -1;
            }
        }
        if decoder.fault().is_some() && first_fault_time.is_none() {
            first_fault_time = Some(t);
        }
        let bin = count_zero_bin + decoder.position_count();
        let estimate = (bin as f64 + 0.5) * delta - x_start;
        let err = fp::abs(estimate - truth);
        if err > max_abs_error {
            max_abs_error = err;
        }
        samples.push(TrackedSample {
            time: t,
            estimate,
            truth,
            fault: first_fault_time.is_some(),
        });
    }

    let _ = FaultKind::MissedStep; // the only fault kind today
    Ok(TrackResult {
        final_count: decoder.position_count(),
        calibrated: decoder.calibrated(),
        zero_events: decoder.zero_events(),
        max_abs_error,
        first_fault_time,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tape() -> EncoderPattern {
        EncoderPattern::default_tape()
    }

    fn profile(points: &[(f64, f64)]) -> MotionProfile {
        MotionProfile::new(points.to_vec()).unwrap()
    }

    #[test]
    fn profile_validation() {
        assert!(MotionProfile::new(vec![]).is_err());
        assert!(MotionProfile::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(MotionProfile::new(vec![(0.0, 0.0), (1.0, -0.5)]).is_err());
        assert!(MotionProfile::new(vec![(1.0, 0.0), (0.5, 1.0)]).is_err());
        let p = profile(&[(0.0, 0.0), (10.0, 20.0)]);
        assert_eq!(p.max_speed(), 2.0);
        assert_eq!(p.displacement_at(5.0), 10.0);
        assert_eq!(p.displacement_at(-1.0), 0.0);
        assert_eq!(p.displacement_at(99.0), 20.0);
    }

    #[test]
    fn ramp_1mms_at_50hz_stays_within_one_resolution() {
        let p = profile(&[(0.0, 0.0), (20.0, 20.0)]);
        let r = track_profile(&tape(), &p, 50.0, 2).unwrap();
        assert!(r.is_valid());
        assert!(r.max_abs_error <= 1.0, "max error {}", r.max_abs_error);
        // the ramp ends exactly on a bin boundary; debounce may hold back
        // the final transition
        assert!((19..=20).contains(&r.final_count), "count {}", r.final_count);
    }

    #[test]
    fn triangle_returns_to_zero_count() {
        let p = profile(&[(0.0, 0.0), (10.0, 10.0), (20.0, 0.0)]);
        let r = track_profile(&tape(), &p, 100.0, 2).unwrap();
        assert!(r.is_valid());
        assert!(r.final_count.abs() <= 1, "final count {}", r.final_count);
        assert!(r.max_abs_error <= 1.0);
        // reversal visible: estimates rise then fall
        let mid = &r.samples[r.samples.len() / 2];
        assert!(mid.estimate > 8.0);
        let last = r.samples.last().unwrap();
        assert!(last.estimate < 1.0);
    }

    #[test]
    fn too_slow_sampling_faults() {
        // 2 mm per sample means two resolution steps between samples
        let p = profile(&[(0.0, 0.0), (10.0, 20.0)]);
        let r = track_profile(&tape(), &p, 1.0, 1).unwrap();
        assert!(!r.is_valid());
        assert_eq!(r.first_fault_time, Some(1.0));
        assert!(r.samples.iter().any(|s| s.fault));
    }

    #[test]
    fn tape_start_replay_calibrates_once() {
        let p = profile(&[(0.0, 0.0), (20.0, 20.0)]);
        let opts = TrackOptions {
            start: ReplayStart::TapeStart,
            ..TrackOptions::default()
        };
        let r = track_profile_with(&tape(), &p, &opts).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.zero_events, 1);
        assert!(r.calibrated);
        // the index fires 3 mm into the travel (entering the last preamble
        // bin); from then on the estimate is absolute in the strip frame
        for s in r.samples.iter().filter(|s| s.time >= 3.5) {
            assert!(
                (s.estimate - s.truth).abs() <= 1.0,
                "t = {}: est {} vs truth {}",
                s.time,
                s.estimate,
                s.truth
            );
        }
    }

    #[test]
    fn at_index_replay_never_zeroes_but_tracks() {
        let p = profile(&[(0.0, 0.0), (20.0, 20.0)]);
        let r = track_profile(&tape(), &p, 100.0, 2).unwrap();
        assert_eq!(r.zero_events, 0);
        assert!(!r.calibrated);
        assert!(r.max_abs_error <= 1.0);
    }

    #[test]
    fn pressure_distortion_grows_error_but_within_spec_to_200_kpa() {
        let p = profile(&[(0.0, 0.0), (20.0, 20.0)]);
        let mut prev = 0.0;
        for kpa in [0.0, 100.0, 200.0] {
            let opts = TrackOptions {
                distortion: Some(PressureDistortion::at_pressure(kpa)),
                ..TrackOptions::default()
            };
            let r = track_profile_with(&tape(), &p, &opts).unwrap();
            assert!(r.is_valid());
            assert!(r.max_abs_error <= 1.0, "{kpa} kPa: {}", r.max_abs_error);
            assert!(r.max_abs_error >= prev);
            prev = r.max_abs_error;
        }
    }

    #[test]
    fn profile_exceeding_tape_is_rejected() {
        let p = profile(&[(0.0, 0.0), (60.0, 60.0)]);
        assert!(track_profile(&tape(), &p, 100.0, 2).is_err());
    }

    #[test]
    fn randomized_profiles_stay_within_one_resolution() {
        // seeded piecewise-constant-speed profiles with reversals
        use rand::RngCore;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        for case in 0..10 {
            let mut points = vec![(0.0, 0.0)];
            let mut t = 0.0;
            let mut s: f64 = 0.0;
            for _ in 0..5 {
                let speed = 0.2 + 1.8 * unit();
                let dir = if unit() < 0.5 { -1.0 } else { 1.0 };
                let dur = 2.0 + 8.0 * unit();
                let target = (s + dir * speed * dur).clamp(0.0, 30.0);
                let real_dur = (target - s).abs() / speed;
                if real_dur > 1e-6 {
                    t += real_dur;
                    s = target;
                    points.push((t, s));
                }
            }
            if points.len() < 2 {
                continue;
            }
            let p = MotionProfile::new(points).unwrap();
            let r = track_profile(&tape(), &p, 100.0, 2).unwrap();
            assert!(r.is_valid(), "case {case} faulted");
            assert!(r.max_abs_error <= 1.0, "case {case}: {}", r.max_abs_error);
        }
    }
}
