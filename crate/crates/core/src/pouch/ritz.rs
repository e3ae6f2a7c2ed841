//! Rayleigh–Ritz energy-minimization oracle for the clamped pouch face.
//!
//! Independent cross-check of the closed-form load–deflection law: the total
//! potential energy
//!
//! ```text
//! Π = U_bend + U_membrane − ∫ p w dA
//! ```
//!
//! is minimized directly over polynomial trial families that satisfy the
//! clamped, immovable-edge boundary conditions,
//!
//! ```text
//! w(ρ) = Σ_k c_k (1 − ρ²)² ρ^{2(k−1)}        k = 1..n
//! u(ρ) = ρ (1 − ρ) Σ_j b_j ρ^{j−1}           j = 1..m,  ρ = r/a
//! ```
//!
//! using Gauss–Legendre quadrature for the energy integrals. For fixed `c`
//! the membrane energy is quadratic in `b`, so the in-plane coefficients are
//! eliminated exactly through a linear solve; the reduced energy in `c` is
//! then minimized by a damped Newton iteration with finite-difference
//! derivatives. Nothing in this path references the closed-form cubic.
//!
//! With one deflection term and two in-plane terms this is the classical
//! energy solution of the von Kármán clamped plate, and it reproduces the
//! tabulated stiffening coefficient β ≈ 0.488 to within about 1%. Richer
//! families lower the energy monotonically and converge toward the exact
//! large-deflection solution, which at the deep-membrane loads of this
//! application sits several percent below the fixed-β cubic; the default
//! single-term family is therefore the one used for cross-checks against
//! the closed form.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fp;
use crate::linalg;
use crate::materials::LinearElastic;
use crate::pouch::{linear_center_deflection, PouchGeometry};
use crate::KPA_TO_N_PER_MM2;

use core::f64::consts::PI;

/// Options for the Ritz solve.
#[derive(Debug, Clone, Copy)]
pub struct RitzOptions {
    /// Number of deflection (transverse) trial terms, `>= 1`.
    pub n_terms: usize,
    /// Number of in-plane trial terms; defaults to `n_terms + 1`, the
    /// pairing of the classical energy solution.
    pub u_terms: Option<usize>,
    /// Gauss–Legendre points for the energy integrals.
    pub quad_points: usize,
    /// Newton iteration cap; exceeding it is a numeric failure.
    pub max_iter: u32,
}

impl RitzOptions {
    pub fn with_terms(n_terms: usize) -> Self {
        Self {
            n_terms,
            u_terms: None,
            quad_points: 48,
            max_iter: 100,
        }
    }
}

impl Default for RitzOptions {
    fn default() -> Self {
        Self::with_terms(1)
    }
}

/// Converged minimizer summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RitzSolution {
    /// Apex deflection w(0) at the energy minimizer (mm).
    pub center_deflection: f64,
    /// Total potential energy at the minimizer (N·mm).
    pub energy: f64,
    /// Newton iterations used.
    pub iterations: u32,
}

/// Apex deflection from direct energy minimization (mm).
///
/// Convenience wrapper over [`ritz_center_deflection_with`] using default
/// options with `n_terms` deflection terms.
pub fn ritz_center_deflection(
    pressure_kpa: f64,
    geom: &PouchGeometry,
    mat: &LinearElastic,
    n_terms: usize,
) -> Result<f64> {
    ritz_center_deflection_with(pressure_kpa, geom, mat, &RitzOptions::with_terms(n_terms))
        .map(|s| s.center_deflection)
}

/// Full Ritz solve with explicit options.
pub fn ritz_center_deflection_with(
    pressure_kpa: f64,
    geom: &PouchGeometry,
    mat: &LinearElastic,
    opts: &RitzOptions,
) -> Result<RitzSolution> {
    if !(pressure_kpa >= 0.0) {
        return Err(Error::OutOfRange {
            what: "pressure",
            value: pressure_kpa,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    if opts.n_terms < 1 {
        return Err(Error::InvalidParameter {
            name: "n_terms",
            reason: "at least one deflection term is required",
        });
    }
    geom.validate()?;

    if pressure_kpa == 0.0 {
        // zero load: the flat plate is the exact minimizer
        return Ok(RitzSolution {
            center_deflection: 0.0,
            energy: 0.0,
            iterations: 0,
        });
    }

    let problem = RitzProblem::build(pressure_kpa, geom, mat, opts);
    problem.minimize(opts.max_iter)
}

fn powi(x: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// Gauss–Legendre nodes and weights on [0, 1].
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // initial guess (Tricomi) then Newton on P_n
        let mut x = fp::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if fp::abs(dx) < 1e-15 {
                break;
            }
        }
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

struct RitzProblem {
    n: usize,
    m: usize,
    // quadrature
    wq: Vec<f64>,
    rho: Vec<f64>,
    // basis tables, row-major (term, node)
    phi: Vec<f64>,
    dphi: Vec<f64>,
    ddphi: Vec<f64>,
    dpsi_a: Vec<f64>,   // psi'_j / a  (radial strain operator)
    psi_or_a: Vec<f64>, // (psi_j / rho) / a  (hoop strain operator)
    // energy prefactors
    bend_coeff: f64, // pi D / a^2
    memb_coeff: f64, // pi E h a^2 / (1 - nu^2)
    load_coeff: f64, // 2 pi p a^2
    nu: f64,
    inv_a: f64,
    // membrane normal matrix (constant in c)
    gram: Vec<f64>,
    seed: f64,
}

impl RitzProblem {
    fn build(pressure_kpa: f64, geom: &PouchGeometry, mat: &LinearElastic, opts: &RitzOptions) -> Self {
        let n = opts.n_terms;
        let m = opts.u_terms.unwrap_or(n + 1);
        let nq = opts.quad_points.max(16);
        let (rho, wq) = gauss_legendre_unit(nq);

        let a = geom.radius;
        let h = geom.face_thickness;
        let e = mat.youngs_modulus;
        let nu = mat.poisson_ratio;
        let d = e * h * h * h / (12.0 * (1.0 - nu * nu));
        let p = pressure_kpa * KPA_TO_N_PER_MM2;

        let mut phi = vec![0.0; n * nq];
        let mut dphi = vec![0.0; n * nq];
        let mut ddphi = vec![0.0; n * nq];
        for k in 0..n {
            let e2 = 2 * k;
            for (q, &r) in rho.iter().enumerate() {
                let f = (1.0 - r * r) * (1.0 - r * r);
                let df = -4.0 * r * (1.0 - r * r);
                let ddf = -4.0 + 12.0 * r * r;
                let g = powi(r, e2);
                let dg = if e2 > 0 { e2 as f64 * powi(r, e2 - 1) } else { 0.0 };
                let ddg = if e2 > 1 {
                    (e2 * (e2 - 1)) as f64 * powi(r, e2 - 2)
                } else {
                    0.0
                };
                phi[k * nq + q] = f * g;
                dphi[k * nq + q] = df * g + f * dg;
                ddphi[k * nq + q] = ddf * g + 2.0 * df * dg + f * ddg;
            }
        }

        let mut dpsi_a = vec![0.0; m * nq];
        let mut psi_or_a = vec![0.0; m * nq];
        for j in 1..=m {
            for (q, &r) in rho.iter().enumerate() {
                let dpsi = j as f64 * powi(r, j - 1) - (j + 1) as f64 * powi(r, j);
                let por = powi(r, j - 1) - powi(r, j);
                dpsi_a[(j - 1) * nq + q] = dpsi / a;
                psi_or_a[(j - 1) * nq + q] = por / a;
            }
        }

        let memb_coeff = PI * e * h * a * a / (1.0 - nu * nu);

        // Gram matrix of the membrane quadratic form in b
        let mut gram = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut s = 0.0;
                for q in 0..nq {
                    let lri = dpsi_a[i * nq + q];
                    let lrj = dpsi_a[j * nq + q];
                    let lti = psi_or_a[i * nq + q];
                    let ltj = psi_or_a[j * nq + q];
                    s += wq[q] * rho[q] * (lri * lrj + lti * ltj + nu * (lri * ltj + lti * lrj));
                }
                gram[i * m + j] = memb_coeff * s;
            }
        }

        // seed: linear Kirchhoff deflection, capped by the membrane-scaling
        // estimate so the Newton start stays near the physical branch
        let rhs = linear_center_deflection(pressure_kpa, geom, mat);
        let seed = {
            let membrane_est = fp::cbrt(rhs * h * h / 0.5);
            if rhs < membrane_est {
                rhs
            } else {
                membrane_est
            }
        };

        Self {
            n,
            m,
            wq,
            rho,
            phi,
            dphi,
            ddphi,
            dpsi_a,
            psi_or_a,
            bend_coeff: PI * d / (a * a),
            memb_coeff,
            load_coeff: 2.0 * PI * p * a * a,
            nu,
            inv_a: 1.0 / a,
            gram,
            seed,
        }
    }

    /// In-plane coefficients minimizing the membrane energy for fixed `c`.
    fn solve_inplane(&self, c: &[f64]) -> Result<Vec<f64>> {
        let nq = self.rho.len();
        let mut rhs = vec![0.0; self.m];
        for i in 0..self.m {
            let mut s = 0.0;
            for q in 0..nq {
                let wp: f64 = (0..self.n).map(|k| c[k] * self.dphi[k * nq + q]).sum();
                let quad = 0.5 * (wp * self.inv_a) * (wp * self.inv_a);
                s += self.wq[q]
                    * self.rho[q]
                    * quad
                    * (self.dpsi_a[i * nq + q] + self.nu * self.psi_or_a[i * nq + q]);
            }
            rhs[i] = -self.memb_coeff * s;
        }
        linalg::solve(&self.gram, &rhs, self.m, 1e-13).ok_or(Error::NonConvergence {
            op: "ritz_center_deflection",
            iterations: 0,
        })
    }

    fn energy(&self, c: &[f64], b: &[f64]) -> f64 {
        let nq = self.rho.len();
        let mut u_bend = 0.0;
        let mut u_memb = 0.0;
        let mut w_ext = 0.0;
        for q in 0..nq {
            let rho = self.rho[q];
            let wv: f64 = (0..self.n).map(|k| c[k] * self.phi[k * nq + q]).sum();
            let wp: f64 = (0..self.n).map(|k| c[k] * self.dphi[k * nq + q]).sum();
            let wpp: f64 = (0..self.n).map(|k| c[k] * self.ddphi[k * nq + q]).sum();
            let lap = wpp + wp / rho;
            u_bend += self.wq[q] * rho * (lap * lap - 2.0 * (1.0 - self.nu) * wpp * wp / rho);

            let er: f64 = (0..self.m).map(|j| b[j] * self.dpsi_a[j * nq + q]).sum::<f64>()
                + 0.5 * (wp * self.inv_a) * (wp * self.inv_a);
            let et: f64 = (0..self.m).map(|j| b[j] * self.psi_or_a[j * nq + q]).sum();
            u_memb += self.wq[q] * rho * (er * er + et * et + 2.0 * self.nu * er * et);

            w_ext += self.wq[q] * rho * wv;
        }
        self.bend_coeff * u_bend + self.memb_coeff * u_memb - self.load_coeff * w_ext
    }

    /// Reduced energy after exact elimination of the in-plane coefficients.
    fn reduced_energy(&self, c: &[f64]) -> Result<f64> {
        let b = self.solve_inplane(c)?;
        Ok(self.energy(c, &b))
    }

    fn minimize(&self, max_iter: u32) -> Result<RitzSolution> {
        let n = self.n;
        let mut c = vec![0.0; n];
        c[0] = self.seed;

        let mut converged = false;
        let mut iterations = 0u32;
        while iterations < max_iter {
            iterations += 1;
            let f0 = self.reduced_energy(&c)?;
            let c_scale = c.iter().fold(1.0f64, |acc, &v| acc.max(fp::abs(v)));
            let h = 1e-6 * c_scale;

            // finite-difference gradient and Hessian of the reduced energy
            let mut grad = vec![0.0; n];
            let mut hess = vec![0.0; n * n];
            let mut fplus = vec![0.0; n];
            let mut fminus = vec![0.0; n];
            for i in 0..n {
                let mut cp = c.clone();
                cp[i] += h;
                fplus[i] = self.reduced_energy(&cp)?;
                cp[i] = c[i] - h;
                fminus[i] = self.reduced_energy(&cp)?;
                grad[i] = (fplus[i] - fminus[i]) / (2.0 * h);
                hess[i * n + i] = (fplus[i] - 2.0 * f0 + fminus[i]) / (h * h);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let mut cx = c.clone();
                    cx[i] += h;
                    cx[j] += h;
                    let fpp = self.reduced_energy(&cx)?;
                    cx[j] = c[j] - h;
                    let fpm = self.reduced_energy(&cx)?;
                    cx[i] = c[i] - h;
                    let fmm = self.reduced_energy(&cx)?;
                    cx[j] = c[j] + h;
                    let fmp = self.reduced_energy(&cx)?;
                    let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
                    hess[i * n + j] = v;
                    hess[j * n + i] = v;
                }
            }

            let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
            let step = match linalg::solve(&hess, &neg_grad, n, 1e-14) {
                Some(s) => s,
                None => neg_grad, // fall back to steepest descent
            };

            // damped update: accept the longest halved step that decreases energy
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-10 {
                let trial: Vec<f64> = c.iter().zip(&step).map(|(ci, si)| ci + t * si).collect();
                if self.reduced_energy(&trial)? < f0 {
                    c = trial;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // at the numerical floor of the energy: treat as converged
                converged = true;
                break;
            }
            let step_inf = step
                .iter()
                .fold(0.0f64, |acc, &s| acc.max(fp::abs(t * s)));
            if step_inf < 1e-9 * c_scale {
                converged = true;
                break;
            }
        }

        if !converged {
            return Err(Error::NonConvergence {
                op: "ritz_center_deflection",
                iterations,
            });
        }

        let energy = self.reduced_energy(&c)?;
        Ok(RitzSolution {
            center_deflection: c[0],
            energy,
            iterations,
        })
    }
}
