//! Desk-scale models of a compact pneumatic friction clutch with integrated
//! stiffness variation and incremental position sensing.
//!
//! The clutch presses an inflatable circular air pouch against a sliding
//! TPU-fabric strip. Friction on the strip scales with the pouch's normal
//! pushing force, so the pulling impedance is regulated by air pressure. A
//! patterned conductive tape on the strip, read by two fixed electrodes,
//! forms an incremental encoder that reports strip displacement and
//! direction.
//!
//! The crate is organized around that physical chain:
//!
//! - [`materials`] — constitutive models for the flexible materials
//!   (linear-elastic TPU fabric, third-order Ogden adhesive TPU).
//! - [`pouch`] — large-deflection mechanics of the inflated pouch face:
//!   deflection vs pressure, contact normal force vs pressure, and an
//!   independent Rayleigh–Ritz energy-minimization oracle.
//! - [`clutch`] — the impedance model (friction + coil-spring recovery),
//!   force density, and least-squares calibration against measured anchors.
//! - [`encoder`] — the sensing layer as a logical system: tape pattern,
//!   two-channel sampling, quadrature decoding, debounce, index zeroing,
//!   and motion-profile replay.
//! - [`apps`] — application scenarios: stiffness-augmented soft actuator
//!   and gripper, three-clutch omnidirectional constant-curvature actuator,
//!   and two-clutch finger posture tracking.
//!
//! Units are mm, N, MPa (N/mm²) internally; pressures at the API take kPa.
//! The crate is `no_std` + `alloc`; all floating-point math routes through
//! `libm` so results are identical regardless of the host `std`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod apps;
pub mod clutch;
pub mod encoder;
pub mod error;
pub mod materials;
pub mod pouch;

mod fp;
mod linalg;

pub use error::{Error, Result};

/// Conversion factor from kPa to N/mm² (the crate's internal stress unit).
pub const KPA_TO_N_PER_MM2: f64 = 1e-3;

/// Conversion factor from mm² to cm², used for force density.
pub const MM2_TO_CM2: f64 = 1e-2;
