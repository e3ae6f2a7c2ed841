//! Constitutive models for the clutch's flexible materials.
//!
//! Two materials matter for the pouch mechanics: the TPU-coated fabric that
//! forms the pouch faces (its nominal stress–strain response is close to
//! linear, captured by [`LinearElastic`]), and the adhesive TPU of the
//! elastic films (hyperelastic, captured by a third-order [`OgdenMaterial`]).
//!
//! # Ogden convention
//!
//! The Ogden strain energy here uses the form common in commercial FEA
//! packages:
//!
//! ```text
//! W = Σᵢ (2 μᵢ / αᵢ²) (λ₁^αᵢ + λ₂^αᵢ + λ₃^αᵢ − 3)
//! ```
//!
//! This differs from the classical Ogden form `Σ (μᵢ/αᵢ)(…)`. The fitted
//! coefficients shipped in [`OgdenMaterial::adhesive_tpu`] belong to the FEA
//! convention; with it the initial shear modulus is `μ₀ = Σ μᵢ` and the
//! initial uniaxial tangent modulus is `3 μ₀`. The material is treated as
//! incompressible (`λ₁λ₂λ₃ = 1`, no volumetric term).

use crate::error::{Error, Result};
use crate::fp;

/// Isotropic linear-elastic material (nominal stress `s = E ε`).
///
/// Units: `youngs_modulus` in MPa (N/mm²), `poisson_ratio` dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearElastic {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

impl LinearElastic {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0) {
            return Err(Error::InvalidParameter {
                name: "youngs_modulus",
                reason: "must be positive",
            });
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::InvalidParameter {
                name: "poisson_ratio",
                reason: "must satisfy 0 <= nu < 0.5",
            });
        }
        Ok(Self {
            youngs_modulus,
            poisson_ratio,
        })
    }

    /// TPU-coated fabric of the pouch faces: E = 142.2 MPa from uniaxial
    /// extension tests; nu = 0.3 is an assumed default (not measured).
    pub fn tpu_fabric() -> Self {
        Self {
            youngs_modulus: 142.2,
            poisson_ratio: 0.3,
        }
    }

    /// Nominal uniaxial stress at engineering strain `strain` (MPa).
    ///
    /// Exactly linear and odd about zero strain. Strains at or below −1
    /// (complete collapse) are rejected.
    pub fn uniaxial_stress(&self, strain: f64) -> Result<f64> {
        if !(strain > -1.0) {
            return Err(Error::Domain {
                op: "linear_uniaxial_stress",
                reason: "strain must exceed -1",
            });
        }
        Ok(self.youngs_modulus * strain)
    }
}

/// One (μᵢ, αᵢ) pair of the Ogden series. `mu` in MPa, `alpha` dimensionless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgdenTerm {
    pub mu: f64,
    pub alpha: f64,
}

/// Incompressible third-order Ogden material (see module docs for the
/// energy convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgdenMaterial {
    terms: [OgdenTerm; 3],
}

impl OgdenMaterial {
    /// Build from exactly three terms. Requires `Σ μᵢ > 0` (positive initial
    /// shear modulus) and every `αᵢ ≠ 0`.
    pub fn new(terms: [OgdenTerm; 3]) -> Result<Self> {
        let mu_sum: f64 = terms.iter().map(|t| t.mu).sum();
        if !(mu_sum > 0.0) {
            return Err(Error::InvalidParameter {
                name: "terms",
                reason: "sum of mu_i must be positive",
            });
        }
        if terms.iter().any(|t| t.alpha == 0.0 || !t.alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "terms",
                reason: "every alpha_i must be finite and nonzero",
            });
        }
        Ok(Self { terms })
    }

    /// Adhesive TPU of the elastic films, fitted from uniaxial extension
    /// tests: μ = (−16.47, 6.47, 13.22) MPa, α = (1.61, 2.30, 0.71).
    pub fn adhesive_tpu() -> Self {
        Self {
            terms: [
                OgdenTerm { mu: -16.47, alpha: 1.61 },
                OgdenTerm { mu: 6.47, alpha: 2.30 },
                OgdenTerm { mu: 13.22, alpha: 0.71 },
            ],
        }
    }

    pub fn terms(&self) -> &[OgdenTerm; 3] {
        &self.terms
    }

    /// Strain energy density `W(λ₁, λ₂, λ₃)` in MPa.
    ///
    /// `W(1,1,1) = 0`; non-positive stretches are outside the domain.
    pub fn energy_density(&self, stretches: [f64; 3]) -> Result<f64> {
        if stretches.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Domain {
                op: "ogden_energy_density",
                reason: "all principal stretches must be positive",
            });
        }
        let [l1, l2, l3] = stretches;
        let mut w = 0.0;
        for t in &self.terms {
            w += 2.0 * t.mu / (t.alpha * t.alpha)
                * (fp::powf(l1, t.alpha) + fp::powf(l2, t.alpha) + fp::powf(l3, t.alpha) - 3.0);
        }
        Ok(w)
    }

    /// Nominal (first Piola–Kirchhoff) stress for incompressible uniaxial
    /// extension at stretch `λ` (MPa):
    ///
    /// ```text
    /// s(λ) = Σᵢ (2 μᵢ / αᵢ) (λ^(αᵢ−1) − λ^(−αᵢ/2−1))
    /// ```
    ///
    /// This is the derivative of [`Self::energy_density`] along the
    /// incompressible path `(λ, λ^{-1/2}, λ^{-1/2})`; `s(1) = 0`.
    pub fn uniaxial_stress(&self, stretch: f64) -> Result<f64> {
        if !(stretch > 0.0) {
            return Err(Error::Domain {
                op: "ogden_uniaxial_stress",
                reason: "stretch must be positive",
            });
        }
        let mut s = 0.0;
        for t in &self.terms {
            s += 2.0 * t.mu / t.alpha
                * (fp::powf(stretch, t.alpha - 1.0) - fp::powf(stretch, -t.alpha / 2.0 - 1.0));
        }
        Ok(s)
    }

    /// Initial uniaxial tangent modulus `ds/dλ` at `λ = 1`, equal to
    /// `3 Σ μᵢ` (MPa).
    pub fn initial_tangent_modulus(&self) -> f64 {
        3.0 * self.terms.iter().map(|t| t.mu).sum::<f64>()
    }
}
