//! Clutch impedance model and calibration.
//!
//! The pulling force needed to move the TPU-fabric strip through the clutch
//! is friction from the pouch's normal force plus the strip's baseline drag
//! and the coil-spring recovery force:
//!
//! ```text
//! F(x, p) = μ · N(p) + F_b + F₀ + k x
//! ```
//!
//! with `N(p)` from [`crate::pouch::normal_force`]. Friction acts on a
//! single interface (the high-friction layer pressed against the strip);
//! any second interface folds into the calibrated μ. The model is
//! quasi-static: a force at a displacement, not a time-domain stick–slip
//! simulation.
//!
//! [`calibrate`] fits the free parameters (friction scale, constant force
//! offset, optionally spring stiffness) to measured anchors by linear least
//! squares. With the two measured zero-displacement anchors (0.53 N at
//! 0 kPa, 12.67 N at 300 kPa) the fit is exact and reproduces the ~24×
//! impedance modulation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;
use crate::linalg;
use crate::materials::LinearElastic;
use crate::pouch::{normal_force, PouchGeometry};
use crate::MM2_TO_CM2;

/// Coil spring recovering the strip. `stiffness` in N/mm, `preload` in N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringModel {
    pub stiffness: f64,
    pub preload: f64,
}

impl SpringModel {
    pub fn new(stiffness: f64, preload: f64) -> Result<Self> {
        if !(stiffness >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "stiffness",
                reason: "must be non-negative",
            });
        }
        if !(preload >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "preload",
                reason: "must be non-negative",
            });
        }
        Ok(Self { stiffness, preload })
    }
}

/// Friction on the strip interface plus pressure-independent drag (N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionModel {
    pub mu_static: f64,
    pub mu_kinetic: f64,
    /// Strip drag at zero pressure (N).
    pub baseline: f64,
}

impl FrictionModel {
    pub fn new(mu_static: f64, mu_kinetic: f64, baseline: f64) -> Result<Self> {
        if !(mu_kinetic > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu_kinetic",
                reason: "must be positive",
            });
        }
        if !(mu_static >= mu_kinetic) {
            return Err(Error::InvalidParameter {
                name: "mu_static",
                reason: "must be at least mu_kinetic",
            });
        }
        if !(baseline >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "baseline",
                reason: "must be non-negative",
            });
        }
        Ok(Self {
            mu_static,
            mu_kinetic,
            baseline,
        })
    }
}

/// Friction regime selector. The defaults keep the two coefficients equal;
/// the split is exposed for sensitivity studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrictionRegime {
    Static,
    Kinetic,
}

/// Full parameter set of one clutch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClutchConfig {
    pub geometry: PouchGeometry,
    pub material: LinearElastic,
    pub spring: SpringModel,
    pub friction: FrictionModel,
}

impl ClutchConfig {
    /// Uncalibrated defaults: measured pouch geometry and material, spring
    /// stiffness 0.05 N/mm, no preload, 0.53 N baseline drag, unit friction
    /// coefficients. Calibration replaces the friction scale.
    pub fn paper_defaults() -> Self {
        Self {
            geometry: PouchGeometry::default_pouch(),
            material: LinearElastic::tpu_fabric(),
            spring: SpringModel {
                stiffness: 0.05,
                preload: 0.0,
            },
            friction: FrictionModel {
                mu_static: 1.0,
                mu_kinetic: 1.0,
                baseline: 0.53,
            },
        }
    }

    /// Defaults calibrated against the two measured zero-displacement
    /// anchors (0.53 N at 0 kPa, 12.67 N at 300 kPa).
    pub fn paper_calibrated() -> Self {
        let (cfg, _) = calibrate(&paper_anchors(), &Self::paper_defaults())
            .expect("paper anchors are well-posed for the default geometry");
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        LinearElastic::new(self.material.youngs_modulus, self.material.poisson_ratio)?;
        SpringModel::new(self.spring.stiffness, self.spring.preload)?;
        FrictionModel::new(
            self.friction.mu_static,
            self.friction.mu_kinetic,
            self.friction.baseline,
        )?;
        Ok(())
    }

    /// Friction capacity μ(regime) · N(p) in N.
    pub fn friction_capacity(&self, pressure_kpa: f64, regime: FrictionRegime) -> Result<f64> {
        let mu = match regime {
            FrictionRegime::Static => self.friction.mu_static,
            FrictionRegime::Kinetic => self.friction.mu_kinetic,
        };
        Ok(mu * normal_force(pressure_kpa, &self.geometry, &self.material)?)
    }

    /// Pulling force (N) required to hold the strip at displacement `x` (mm)
    /// under pouch pressure `p` (kPa). Non-negative and monotone
    /// non-decreasing in both arguments; the spring contribution is exactly
    /// `stiffness · x`.
    pub fn impedance_force(
        &self,
        displacement_mm: f64,
        pressure_kpa: f64,
        regime: FrictionRegime,
    ) -> Result<f64> {
        if !(displacement_mm >= 0.0) {
            return Err(Error::OutOfRange {
                what: "displacement",
                value: displacement_mm,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(self.friction_capacity(pressure_kpa, regime)?
            + self.friction.baseline
            + self.spring.preload
            + self.spring.stiffness * displacement_mm)
    }

    /// Sample the impedance force on a displacement grid at one pressure.
    ///
    /// The grid is `0, step, 2·step, …` up to `x_max` inclusive. Curves at
    /// higher pressure dominate pointwise, and every curve rises with the
    /// spring slope.
    pub fn pull_curve(&self, pressure_kpa: f64, x_max: f64, step: f64) -> Result<PullCurve> {
        if !(x_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "x_max",
                reason: "must be positive",
            });
        }
        if !(step > 0.0 && step <= x_max) {
            return Err(Error::InvalidParameter {
                name: "step",
                reason: "must satisfy 0 < step <= x_max",
            });
        }
        let count = fp::floor(x_max / step + 1e-9) as usize;
        let mut samples = Vec::with_capacity(count + 1);
        for i in 0..=count {
            let x = i as f64 * step;
            samples.push((x, self.impedance_force(x, pressure_kpa, FrictionRegime::Kinetic)?));
        }
        Ok(PullCurve {
            pressure: pressure_kpa,
            samples,
        })
    }

    /// Static impedance at zero displacement divided by the pouch footprint,
    /// in N/cm².
    pub fn force_density(&self, pressure_kpa: f64) -> Result<f64> {
        let f = self.impedance_force(0.0, pressure_kpa, FrictionRegime::Static)?;
        Ok(f / (self.geometry.footprint_area_mm2() * MM2_TO_CM2))
    }
}

/// One impedance curve: (displacement mm, force N) samples at one pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct PullCurve {
    pub pressure: f64,
    pub samples: Vec<(f64, f64)>,
}

/// A measured impedance point used for calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationAnchor {
    /// Strip displacement (mm).
    pub displacement: f64,
    /// Pouch pressure (kPa).
    pub pressure: f64,
    /// Measured pulling force (N).
    pub force: f64,
}

/// The two measured zero-displacement anchors.
pub fn paper_anchors() -> [CalibrationAnchor; 2] {
    [
        CalibrationAnchor {
            displacement: 0.0,
            pressure: 0.0,
            force: 0.53,
        },
        CalibrationAnchor {
            displacement: 0.0,
            pressure: 300.0,
            force: 12.67,
        },
    ]
}

/// Outcome of a least-squares calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    /// Fitted kinetic friction coefficient (scale on the normal-force model).
    pub friction_scale: f64,
    /// Fitted pressure-independent force lump (baseline drag + preload), N.
    pub force_offset: f64,
    /// Spring stiffness used by the fit (fitted when the anchors vary in
    /// displacement, otherwise carried over from the input config), N/mm.
    pub spring_stiffness: f64,
    /// Whether the spring stiffness was identifiable and fitted.
    pub spring_fitted: bool,
    /// Per-anchor residuals, measured − model (N).
    pub residuals: Vec<f64>,
    /// Root-mean-square residual (N).
    pub rms_residual: f64,
}

/// Least-squares fit of the impedance model to measured anchors.
///
/// Solves for the kinetic friction scale, the constant force offset, and —
/// when the anchors vary in displacement — the spring stiffness. Requires
/// at least two anchors at distinct pressures, one of them at zero pressure
/// (which pins the offset because the normal force vanishes there).
///
/// The fitted offset is not separable into baseline drag and spring preload,
/// so it is assigned to the baseline and the preload is zeroed. The static
/// coefficient keeps the static/kinetic ratio of the input config.
pub fn calibrate(
    anchors: &[CalibrationAnchor],
    cfg: &ClutchConfig,
) -> Result<(ClutchConfig, CalibrationReport)> {
    cfg.validate()?;
    if anchors.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "at least two anchors are required",
        });
    }
    if !anchors.iter().any(|a| a.pressure == 0.0) {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "one anchor at zero pressure is required",
        });
    }
    let mut distinct_pressure = false;
    for a in anchors {
        if !(a.pressure >= 0.0) || !(a.displacement >= 0.0) || !a.force.is_finite() {
            return Err(Error::InvalidParameter {
                name: "anchors",
                reason: "pressures and displacements must be non-negative, forces finite",
            });
        }
        if a.pressure != anchors[0].pressure {
            distinct_pressure = true;
        }
    }
    if !distinct_pressure {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "at least two distinct pressures are required",
        });
    }

    let n_vals: Vec<f64> = anchors
        .iter()
        .map(|a| normal_force(a.pressure, &cfg.geometry, &cfg.material))
        .collect::<Result<_>>()?;

    let spread = |vals: &mut dyn Iterator<Item = f64>| -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    };
    let n_spread = spread(&mut n_vals.iter().copied());
    let x_spread = spread(&mut anchors.iter().map(|a| a.displacement));

    if n_spread < 1e-12 {
        // distinct pressures but identical normal force (all below contact
        // onset): the friction scale never enters the observations
        return Err(Error::Unidentifiable {
            parameter: "friction_scale",
        });
    }

    let fit_spring = x_spread >= 1e-12;
    let dims = if fit_spring { 3 } else { 2 };

    // rows [N_i, 1, (x_i)] against y_i; exactly determined systems are
    // solved directly (the zero-pressure row then pins the offset without
    // rounding), overdetermined ones through the normal equations
    let rows: Vec<[f64; 3]> = anchors
        .iter()
        .zip(&n_vals)
        .map(|(a, &n)| [n, 1.0, a.displacement])
        .collect();
    let ys: Vec<f64> = anchors
        .iter()
        .map(|a| {
            if fit_spring {
                a.force
            } else {
                a.force - cfg.spring.stiffness * a.displacement
            }
        })
        .collect();
    let unidentified = Error::Unidentifiable {
        parameter: if fit_spring { "spring_stiffness" } else { "friction_scale" },
    };
    let sol = if anchors.len() == dims {
        let mut a = vec![0.0; dims * dims];
        for (r, row) in rows.iter().enumerate() {
            a[r * dims..(r + 1) * dims].copy_from_slice(&row[..dims]);
        }
        linalg::solve(&a, &ys, dims, 1e-12).ok_or(unidentified)?
    } else {
        let mut ata = vec![0.0; dims * dims];
        let mut aty = vec![0.0; dims];
        for (row, &y) in rows.iter().zip(&ys) {
            for i in 0..dims {
                aty[i] += row[i] * y;
                for j in 0..dims {
                    ata[i * dims + j] += row[i] * row[j];
                }
            }
        }
        linalg::solve(&ata, &aty, dims, 1e-12).ok_or(unidentified)?
    };

    let friction_scale = sol[0];
    let force_offset = sol[1];
    let spring_stiffness = if fit_spring { sol[2] } else { cfg.spring.stiffness };
    if !(friction_scale > 0.0) {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "fit yields a non-positive friction scale",
        });
    }
    if !(force_offset >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "fit yields a negative force offset",
        });
    }
    if !(spring_stiffness >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "anchors",
            reason: "fit yields a negative spring stiffness",
        });
    }

    let static_ratio = cfg.friction.mu_static / cfg.friction.mu_kinetic;
    let calibrated = ClutchConfig {
        geometry: cfg.geometry,
        material: cfg.material,
        spring: SpringModel {
            stiffness: spring_stiffness,
            preload: 0.0,
        },
        friction: FrictionModel {
            mu_static: friction_scale * static_ratio,
            mu_kinetic: friction_scale,
            baseline: force_offset,
        },
    };

    let mut residuals = Vec::with_capacity(anchors.len());
    let mut ss = 0.0;
    for a in anchors {
        let model = calibrated.impedance_force(a.displacement, a.pressure, FrictionRegime::Kinetic)?;
        let r = a.force - model;
        ss += r * r;
        residuals.push(r);
    }
    let rms_residual = fp::sqrt(ss / anchors.len() as f64);

    Ok((
        calibrated,
        CalibrationReport {
            friction_scale,
            force_offset,
            spring_stiffness,
            spring_fitted: fit_spring,
            residuals,
            rms_residual,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_anchor_calibration_is_exact() {
        let (cfg, report) = calibrate(&paper_anchors(), &ClutchConfig::paper_defaults()).unwrap();
        assert_eq!(report.force_offset, 0.53);
        // mu * N(300) = 12.67 - 0.53 = 12.14
        let cap = cfg.friction_capacity(300.0, FrictionRegime::Kinetic).unwrap();
        assert!((cap - 12.14).abs() < 1e-12);
        for r in &report.residuals {
            assert!(r.abs() < 1e-12);
        }
        assert!(!report.spring_fitted);
        assert_eq!(report.spring_stiffness, 0.05);
    }

    #[test]
    fn calibrated_impedance_anchors() {
        let cfg = ClutchConfig::paper_calibrated();
        let f0 = cfg.impedance_force(0.0, 0.0, FrictionRegime::Kinetic).unwrap();
        let f300 = cfg.impedance_force(0.0, 300.0, FrictionRegime::Kinetic).unwrap();
        assert_eq!(f0, 0.53);
        assert!((f300 - 12.67).abs() < 1e-12);
        let ratio = f300 / f0;
        assert!((ratio - 23.9056603773585).abs() < 1e-10);
        assert!((ratio - 24.0).abs() < 0.2, "about 24-fold");
    }

    #[test]
    fn force_density_values() {
        let cfg = ClutchConfig::paper_calibrated();
        let d300 = cfg.force_density(300.0).unwrap();
        assert!((d300 - 15.64).abs() / 15.64 < 0.02, "d300 = {d300}");
        let d0 = cfg.force_density(0.0).unwrap();
        // 0.53 N over the 0.81 cm^2 footprint
        assert!((d0 - 0.6537302362104326).abs() < 1e-9);
    }

    #[test]
    fn force_density_scales_inverse_square_in_radius() {
        let cfg = ClutchConfig::paper_calibrated();
        let f = cfg.impedance_force(0.0, 300.0, FrictionRegime::Static).unwrap();
        let area = cfg.geometry.footprint_area_mm2() * MM2_TO_CM2;
        let d = cfg.force_density(300.0).unwrap();
        assert!((d - f / area).abs() < 1e-12);
        // doubling the radius at fixed force quarters the density
        let doubled = f / (4.0 * area);
        assert!((doubled - d / 4.0).abs() < 1e-12);
    }

    #[test]
    fn pull_curve_shape() {
        let cfg = ClutchConfig::paper_calibrated();
        let c0 = cfg.pull_curve(0.0, 30.0, 1.0).unwrap();
        assert_eq!(c0.samples.len(), 31);
        assert_eq!(c0.samples[0], (0.0, 0.53));
        // slope equals the spring stiffness
        let slope = (c0.samples[30].1 - c0.samples[0].1) / 30.0;
        assert!((slope - cfg.spring.stiffness).abs() < 1e-14);
        // displacements strictly increasing, forces non-negative
        for w in c0.samples.windows(2) {
            assert!(w[1].0 > w[0].0);
            assert!(w[0].1 >= 0.0);
        }
        let c300 = cfg.pull_curve(300.0, 30.0, 1.0).unwrap();
        assert!((c300.samples[0].1 - 12.67).abs() < 1e-12);
    }

    #[test]
    fn pressure_dominance() {
        let cfg = ClutchConfig::paper_calibrated();
        let c0 = cfg.pull_curve(0.0, 30.0, 1.0).unwrap();
        let c100 = cfg.pull_curve(100.0, 30.0, 1.0).unwrap();
        let c200 = cfg.pull_curve(200.0, 30.0, 1.0).unwrap();
        for i in 0..c0.samples.len() {
            assert!(c0.samples[i].1 < c100.samples[i].1);
            assert!(c100.samples[i].1 < c200.samples[i].1);
        }
    }

    #[test]
    fn static_regime_dominates_kinetic() {
        let mut cfg = ClutchConfig::paper_calibrated();
        cfg.friction.mu_static = cfg.friction.mu_kinetic * 1.2;
        for p in [0.0, 50.0, 150.0, 300.0] {
            let fs = cfg.impedance_force(5.0, p, FrictionRegime::Static).unwrap();
            let fk = cfg.impedance_force(5.0, p, FrictionRegime::Kinetic).unwrap();
            assert!(fs >= fk);
        }
    }

    #[test]
    fn three_anchor_fit_with_displacement_recovers_spring() {
        let truth = ClutchConfig::paper_calibrated();
        let mk = |x: f64, p: f64| CalibrationAnchor {
            displacement: x,
            pressure: p,
            force: truth.impedance_force(x, p, FrictionRegime::Kinetic).unwrap(),
        };
        let anchors = [mk(0.0, 0.0), mk(10.0, 150.0), mk(20.0, 300.0)];
        let (fit, report) = calibrate(&anchors, &ClutchConfig::paper_defaults()).unwrap();
        assert!(report.spring_fitted);
        assert!((fit.spring.stiffness - truth.spring.stiffness).abs() < 1e-9);
        assert!((fit.friction.mu_kinetic - truth.friction.mu_kinetic).abs() < 1e-9);
        assert!(report.rms_residual < 1e-10);
    }

    #[test]
    fn noisy_collinear_anchors_recover_offset_within_3_sigma() {
        // synthetic data: exact model forces plus seeded gaussian noise
        use rand::RngCore;
        use rand::SeedableRng;
        let truth = ClutchConfig::paper_calibrated();
        let sigma = 0.05;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut gauss = || {
            // Box-Muller from two uniform draws
            let u1 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            (-2.0 * u1.max(1e-300).ln()).sqrt() * (2.0 * core::f64::consts::PI * u2).cos()
        };
        let mut anchors = alloc::vec::Vec::new();
        for p in [0.0, 150.0, 300.0] {
            let f = truth.impedance_force(0.0, p, FrictionRegime::Kinetic).unwrap();
            anchors.push(CalibrationAnchor {
                displacement: 0.0,
                pressure: p,
                force: f + sigma * gauss(),
            });
        }
        let (_, report) = calibrate(&anchors, &ClutchConfig::paper_defaults()).unwrap();
        assert!(
            (report.force_offset - 0.53).abs() <= 3.0 * sigma,
            "offset {} vs truth 0.53",
            report.force_offset
        );
    }

    #[test]
    fn calibration_error_paths() {
        let cfg = ClutchConfig::paper_defaults();
        // fewer than two anchors
        assert!(calibrate(&paper_anchors()[..1], &cfg).is_err());
        // no zero-pressure anchor
        let bad = [
            CalibrationAnchor { displacement: 0.0, pressure: 100.0, force: 5.0 },
            CalibrationAnchor { displacement: 0.0, pressure: 300.0, force: 12.0 },
        ];
        assert!(calibrate(&bad, &cfg).is_err());
        // identical pressures
        let same = [
            CalibrationAnchor { displacement: 0.0, pressure: 0.0, force: 0.5 },
            CalibrationAnchor { displacement: 0.0, pressure: 0.0, force: 0.6 },
        ];
        assert!(calibrate(&same, &cfg).is_err());
        // distinct pressures but both below contact onset: friction scale
        // never enters the observations
        let below = [
            CalibrationAnchor { displacement: 0.0, pressure: 0.0, force: 0.53 },
            CalibrationAnchor { displacement: 0.0, pressure: 5.0, force: 0.54 },
        ];
        assert!(matches!(
            calibrate(&below, &cfg),
            Err(Error::Unidentifiable { parameter: "friction_scale" })
        ));
    }

    #[test]
    fn impedance_input_validation() {
        let cfg = ClutchConfig::paper_calibrated();
        assert!(cfg.impedance_force(-1.0, 0.0, FrictionRegime::Kinetic).is_err());
        assert!(cfg.impedance_force(0.0, -1.0, FrictionRegime::Kinetic).is_err());
        assert!(cfg.pull_curve(100.0, 0.0, 1.0).is_err());
        assert!(cfg.pull_curve(100.0, 30.0, 31.0).is_err());
        assert!(cfg.pull_curve(100.0, 30.0, 0.0).is_err());
    }

    proptest! {
        /// Spring separability: F(x,p) - F(0,p) = k x exactly.
        #[test]
        fn spring_separability(x in 0.0f64..50.0, p in 0.0f64..300.0) {
            let cfg = ClutchConfig::paper_calibrated();
            let fx = cfg.impedance_force(x, p, FrictionRegime::Kinetic).unwrap();
            let f0 = cfg.impedance_force(0.0, p, FrictionRegime::Kinetic).unwrap();
            prop_assert!((fx - f0 - cfg.spring.stiffness * x).abs() < 1e-12);
        }

        /// Monotone non-decreasing in displacement and pressure.
        #[test]
        fn impedance_monotone(x in 0.0f64..30.0, p in 0.0f64..290.0) {
            let cfg = ClutchConfig::paper_calibrated();
            let f = cfg.impedance_force(x, p, FrictionRegime::Kinetic).unwrap();
            let fx = cfg.impedance_force(x + 1.0, p, FrictionRegime::Kinetic).unwrap();
            let fpp = cfg.impedance_force(x, p + 10.0, FrictionRegime::Kinetic).unwrap();
            prop_assert!(fx >= f);
            prop_assert!(fpp >= f);
            prop_assert!(f >= 0.0);
        }
    }
}
