//! Numerical engine for one separated half-system `K = kappa w^2 + V(z^2)`.
//!
//! In symplectic polar coordinates `w = sqrt(A) cos(theta)`,
//! `z = sqrt(A) sin(theta)` the level equation `K = a` becomes a scalar
//! root problem for `A(a, theta)` at each angle:
//!
//! ```text
//! kappa A cos^2(theta) + V(A sin^2(theta)) = a.
//! ```
//!
//! Implicit differentiation gives the closed forms
//!
//! ```text
//! A'  = 1 / (kappa cos^2 + V'(A sin^2) sin^2)
//! A'' = - V''(A sin^2) sin^4 * A'^3
//! ```
//!
//! and the action with its first two energy derivatives follows by
//! integrating `A`, `A'`, `A''` over the angle. The enclosed phase-plane
//! area is `(1/2) int A dtheta`, so the action (area over `2 pi`) is
//! `(1/4 pi) int_0^{2 pi} A dtheta`; the integrand is symmetric under
//! `theta -> -theta` and `theta -> pi - theta`, so one quarter period is
//! integrated and scaled.

use thiserror::Error;

use crate::poly::UnivariatePoly;
use crate::quad::{panel_rule, PANEL_ORDER};
use crate::separation::{barrier, horner, BarrierError};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("no root bracket for a = {a} at theta = {theta} (admissible limit {a_max})")]
    RootNotBracketed { a: f64, theta: f64, a_max: f64 },
    #[error("degenerate radial denominator {denom:.3e} at theta = {theta} (level grazes the barrier)")]
    DegenerateDenominator { theta: f64, denom: f64 },
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNotConverged { achieved: f64, requested: f64 },
    #[error("half-system potential is degenerate: {0}")]
    Barrier(BarrierError),
}

/// One separated half-system prepared for numerics: `kappa`, the potential
/// `V` (with `V'`, `V''` precomputed) and its barrier data.
#[derive(Debug, Clone)]
pub struct HalfSystem {
    pub kappa: f64,
    v: Vec<f64>,
    dv: Vec<f64>,
    d2v: Vec<f64>,
    /// Barrier value, or infinity when `V` is strictly increasing.
    pub a_max: f64,
    /// Barrier location in `u = z^2`, when a barrier exists.
    pub barrier_u: Option<f64>,
}

impl HalfSystem {
    /// Prepares a half-system from an exact separated potential. Runs the
    /// barrier analysis, so the admissible energy range is known up front.
    pub fn from_potential(kappa: f64, v: &UnivariatePoly) -> Result<Self, BarrierError> {
        let b = barrier(v)?;
        let coeffs = v.to_f64_coeffs();
        Ok(Self::from_coeffs(
            kappa,
            coeffs,
            b.map(|b| b.v_star).unwrap_or(f64::INFINITY),
            b.map(|b| b.u_star),
        ))
    }

    /// Raw constructor from `V` coefficients (lowest degree first) and
    /// already-known barrier data. Used by tests and oracles that build
    /// half-systems directly.
    pub fn from_coeffs(kappa: f64, v: Vec<f64>, a_max: f64, barrier_u: Option<f64>) -> Self {
        let dv: Vec<f64> = v
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        let d2v: Vec<f64> = dv
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self { kappa, v, dv, d2v, a_max, barrier_u }
    }

    pub fn v(&self, u: f64) -> f64 {
        horner(&self.v, u)
    }

    pub fn dv(&self, u: f64) -> f64 {
        horner(&self.dv, u)
    }

    pub fn d2v(&self, u: f64) -> f64 {
        horner(&self.d2v, u)
    }

    /// Top of the sampled energy range: `(1 - margin) * a_max`, infinite
    /// when there is no barrier.
    pub fn admissible_max(&self, margin: f64) -> f64 {
        if self.a_max.is_finite() {
            (1.0 - margin) * self.a_max
        } else {
            f64::INFINITY
        }
    }
}

/// Smallest nonnegative root `A` of
/// `kappa A cos^2(theta) + V(A sin^2(theta)) = a`, selecting the bounded
/// component of the level set.
///
/// Below the barrier the level function is strictly increasing on
/// `[0, barrier_u / sin^2(theta)]`, which both brackets the root and makes
/// it unique; without a barrier the bracket is grown geometrically. The
/// root is polished by safeguarded Newton/bisection to machine precision
/// (well inside the documented 1e-13 absolute tolerance).
pub fn radial_solve(h: &HalfSystem, a: f64, theta: f64) -> Result<f64, ActionError> {
    if a == 0.0 {
        return Ok(0.0);
    }
    if !(a > 0.0) || a >= h.a_max {
        return Err(ActionError::RootNotBracketed { a, theta, a_max: h.a_max });
    }
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let level = |big_a: f64| h.kappa * big_a * c2 + h.v(big_a * s2) - a;
    if s2 == 0.0 {
        return Ok(a / (h.kappa * c2));
    }

    let mut hi = match h.barrier_u {
        Some(u_star) => u_star / s2,
        None => {
            let mut hi = (a / h.kappa).max(1.0);
            let mut tries = 0;
            while level(hi) < 0.0 {
                hi *= 2.0;
                tries += 1;
                if tries > 200 {
                    return Err(ActionError::RootNotBracketed { a, theta, a_max: h.a_max });
                }
            }
            hi
        }
    };
    if level(hi) < 0.0 {
        // floating-point slack at the barrier; the margin policy keeps the
        // exact root strictly inside
        hi *= 1.0 + 1e-12;
        if level(hi) < 0.0 {
            return Err(ActionError::RootNotBracketed { a, theta, a_max: h.a_max });
        }
    }

    let mut lo = 0.0;
    let guess_denom = h.kappa * c2 + h.dv(0.0) * s2;
    let mut x = if guess_denom > 0.0 {
        (a / guess_denom).min(0.5 * hi)
    } else {
        0.5 * hi
    };
    for _ in 0..200 {
        let fx = level(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = h.kappa * c2 + h.dv(x * s2) * s2;
        let newton = x - fx / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-16 * (1.0 + next.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// `A` together with its first two derivatives in the energy `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSolution {
    pub a: f64,
    pub theta: f64,
    /// `A(a, theta)`.
    pub amplitude: f64,
    /// `dA/da`.
    pub d_amplitude: f64,
    /// `d^2 A / da^2`.
    pub d2_amplitude: f64,
}

/// Solves the radial problem and evaluates the closed-form derivatives.
pub fn radial_derivatives(h: &HalfSystem, a: f64, theta: f64) -> Result<RadialSolution, ActionError> {
    let amplitude = radial_solve(h, a, theta)?;
    let (s, c) = theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let u = amplitude * s2;
    let denom = h.kappa * c2 + h.dv(u) * s2;
    if denom <= 1e-12 * h.kappa.max(1.0) {
        return Err(ActionError::DegenerateDenominator { theta, denom });
    }
    let d_amplitude = 1.0 / denom;
    let d2_amplitude = -h.d2v(u) * s2 * s2 * d_amplitude.powi(3);
    Ok(RadialSolution { a, theta, amplitude, d_amplitude, d2_amplitude })
}

/// Quadrature controls for [`action_with`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Relative change between panel doublings at which to stop.
    pub rel_tol: f64,
    pub max_panels: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, max_panels: 4096 }
    }
}

/// Action `I` and its first two derivatives `I' = dI/da`, `I'' = d^2I/da^2`
/// at one energy, with the quadrature effort that produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValues {
    pub i: f64,
    pub i1: f64,
    pub i2: f64,
    /// Panels per quarter period at convergence.
    pub panels: u32,
    /// Relative change over the last doubling.
    pub achieved: f64,
}

pub fn action(h: &HalfSystem, a: f64) -> Result<ActionValues, ActionError> {
    action_with(h, a, &QuadratureOptions::default())
}

/// Composite Gauss-Legendre over a quarter period with panel doubling.
///
/// `A`, `A'`, `A''` are integrated in one pass (one radial solve per node).
/// `a = 0` needs no special casing: the radial root is exactly zero, so
/// `I(0) = 0` while `I'`, `I''` take their one-sided limit values from the
/// closed forms evaluated at `A = 0`.
pub fn action_with(h: &HalfSystem, a: f64, opts: &QuadratureOptions) -> Result<ActionValues, ActionError> {
    let rule = panel_rule();
    let scale = 1.0 / std::f64::consts::PI;
    let mut panels: u32 = 1;
    let mut prev: Option<[f64; 3]> = None;
    loop {
        let width = FRAC_PI_2 / f64::from(panels);
        let mut sums = [0.0f64; 3];
        for p in 0..panels {
            let left = f64::from(p) * width;
            for &(x, w) in rule {
                let theta = left + 0.5 * width * (x + 1.0);
                let r = radial_derivatives(h, a, theta)?;
                let w = 0.5 * width * w;
                sums[0] += w * r.amplitude;
                sums[1] += w * r.d_amplitude;
                sums[2] += w * r.d2_amplitude;
            }
        }
        let vals = [sums[0] * scale, sums[1] * scale, sums[2] * scale];
        if let Some(old) = prev {
            let floor = 1e-14 * vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let achieved = vals
                .iter()
                .zip(&old)
                .map(|(new, old)| {
                    let delta = (new - old).abs();
                    if delta <= floor {
                        0.0
                    } else {
                        delta / new.abs().max(f64::MIN_POSITIVE)
                    }
                })
                .fold(0.0f64, f64::max);
            if achieved <= opts.rel_tol {
                return Ok(ActionValues { i: vals[0], i1: vals[1], i2: vals[2], panels, achieved });
            }
            if panels >= opts.max_panels {
                return Err(ActionError::QuadratureNotConverged {
                    achieved,
                    requested: opts.rel_tol,
                });
            }
        }
        prev = Some(vals);
        panels *= 2;
    }
}

/// Sufficient star-shapedness check for the level set at energy `a`: at
/// each sampled angle the level function must be strictly increasing in `A`
/// up to the radial root, so the ray meets the boundary exactly once.
///
/// 256 equispaced angles over the full period (offset half a step so the
/// coordinate axes are not sampled exactly), 64 interior points per ray.
/// A sampling heuristic, not a proof.
pub fn star_shape_check(h: &HalfSystem, a: f64) -> bool {
    let n_angles = 256;
    let n_radii = 64;
    for i in 0..n_angles {
        let theta = (i as f64 + 0.5) * std::f64::consts::TAU / n_angles as f64;
        let Ok(root) = radial_solve(h, a, theta) else {
            return false;
        };
        let (s, c) = theta.sin_cos();
        let (s2, c2) = (s * s, c * c);
        for k in 0..=n_radii {
            let big_a = root * k as f64 / n_radii as f64;
            if h.kappa * c2 + h.dv(big_a * s2) * s2 <= 0.0 {
                return false;
            }
        }
    }
    true
}

/// Sampled action profile `(a, I, I', I'')` over an energy grid.
#[derive(Debug, Clone)]
pub struct ActionProfile {
    pub samples: Vec<ProfileSample>,
    /// Largest node count used by any sample (nodes = panels x panel order x 4).
    pub quadrature_nodes: u32,
    /// Worst relative change over the final doubling among the samples.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub a: f64,
    pub i: f64,
    pub i1: f64,
    pub i2: f64,
}

pub fn action_profile(h: &HalfSystem, a_grid: &[f64], opts: &QuadratureOptions) -> Result<ActionProfile, ActionError> {
    let mut samples = Vec::with_capacity(a_grid.len());
    let mut nodes = 0u32;
    let mut tolerance = 0.0f64;
    for &a in a_grid {
        let v = action_with(h, a, opts)?;
        nodes = nodes.max(v.panels * 4 * PANEL_ORDER as u32);
        tolerance = tolerance.max(v.achieved);
        samples.push(ProfileSample { a, i: v.i, i1: v.i1, i2: v.i2 });
    }
    Ok(ActionProfile { samples, quadrature_nodes: nodes, tolerance })
}
