//! System construction and Levi-Civita separation.
//!
//! A planar mechanical system with potential `-m/|q| - G(q1, q2)` is lifted
//! through the cotangent extension of the complex squaring map and
//! time-reparametrized by `|z|^2`. On the `(-f)`-energy level this produces
//! the Hamiltonian
//!
//! ```text
//! K = |w|^2 / 8 + f |z|^2 - (z1^2 + z2^2) G(z1^2 - z2^2, 2 z1 z2)
//! ```
//!
//! on its `m`-level. When the pullback term splits as `G1(z1) + G2(z2)` the
//! system decouples into two one-degree-of-freedom halves
//! `K_i = kappa w_i^2 + V_i(z_i^2)`. The kinetic factor `|w|^2/8` is
//! normalized to `kappa = 1/2` by the rescaling `w -> w/2`, which multiplies
//! both half-actions by the same positive constant and therefore cannot
//! change the sign of any slope or curvature downstream.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::coeffs::{ck_table, separability_poly, CoeffsError, MAX_N};
use crate::poly::{lc_pullback, split_separable, BivariatePoly, NotSeparable, UnivariatePoly};

/// Kinetic coefficient after the `w -> w/2` normalization.
pub const KAPPA: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("parameter `{name}` violates its bound: {message}")]
    InvalidParameter { name: &'static str, message: String },
    #[error("system is not of Stark type: {0}")]
    NotSeparable(#[from] NotSeparable),
    #[error("pullback produced an odd power of z{half}; cannot be written in u = z^2")]
    OddPowers { half: u8 },
    #[error("no critical values exist for g <= 0")]
    NoCriticalValues,
    #[error(transparent)]
    Coeffs(#[from] CoeffsError),
}

/// Structural failures of the one-dimensional barrier analysis.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarrierError {
    #[error("potential derivative has {0} positive critical points; expected at most one")]
    MultipleCriticalPoints(usize),
    #[error("potential is not strictly increasing from the origin and has no interior maximum")]
    NoInteriorMaximum,
}

/// Which member of the Stark-type family a potential belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    Kepler,
    Stark,
    FrozenHill,
    Generalized(u32),
    Custom,
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Kepler => write!(f, "kepler"),
            PotentialKind::Stark => write!(f, "stark"),
            PotentialKind::FrozenHill => write!(f, "frozen-hill"),
            PotentialKind::Generalized(n) => write!(f, "generalized(n={n})"),
            PotentialKind::Custom => write!(f, "custom"),
        }
    }
}

/// Configuration-space potential `V(q) = -m/|q| - G(q1, q2)` with `G`
/// polynomial. Parameters are kept as exact rationals (converted exactly
/// from their binary floating-point values) so that separation is exact.
#[derive(Debug, Clone)]
pub struct PolynomialPotential {
    pub kind: PotentialKind,
    pub m: BigRational,
    pub g: Option<BigRational>,
    /// The polynomial modification `G`.
    pub g_poly: BivariatePoly,
}

impl PolynomialPotential {
    pub fn m_f64(&self) -> f64 {
        self.m.to_f64().unwrap_or(f64::NAN)
    }

    pub fn g_f64(&self) -> Option<f64> {
        self.g.as_ref().map(|g| g.to_f64().unwrap_or(f64::NAN))
    }

    /// Family index: 1 for frozen-hill, `n` for generalized, `None` otherwise.
    pub fn family_index(&self) -> Option<u32> {
        match self.kind {
            PotentialKind::FrozenHill => Some(1),
            PotentialKind::Generalized(n) => Some(n),
            _ => None,
        }
    }
}

/// Parameters accepted by [`build_system`]. `f` is validated here even
/// though the hypersurface shift only enters at separation time.
#[derive(Debug, Clone, Copy)]
pub struct SystemParams {
    pub m: f64,
    pub g: Option<f64>,
    pub n: Option<u32>,
    pub f: f64,
}

fn exact(x: f64, name: &'static str) -> Result<BigRational, SystemError> {
    BigRational::from_float(x).ok_or_else(|| SystemError::InvalidParameter {
        name,
        message: format!("must be a finite number, got {x}"),
    })
}

/// Builds a [`PolynomialPotential`] for one of the named kinds, validating
/// parameter ranges. For the generalized kind the modification is
/// `g * F_n(q)` with `F_n` from the coefficient recurrence; frozen-hill is
/// the `n = 1` member of that family.
pub fn build_system(kind: PotentialKind, params: &SystemParams) -> Result<PolynomialPotential, SystemError> {
    let m = exact(params.m, "m")?;
    if !m.is_positive() {
        return Err(SystemError::InvalidParameter {
            name: "m",
            message: format!("must satisfy m > 0, got {}", params.m),
        });
    }
    let f = exact(params.f, "f")?;
    if !f.is_positive() {
        return Err(SystemError::InvalidParameter {
            name: "f",
            message: format!("must satisfy f > 0, got {}", params.f),
        });
    }

    let needs_g = matches!(
        kind,
        PotentialKind::Stark | PotentialKind::FrozenHill | PotentialKind::Generalized(_)
    );
    let g = match (needs_g, params.g) {
        (true, Some(g)) => {
            let g_rat = exact(g, "g")?;
            if g_rat.is_zero() {
                return Err(SystemError::InvalidParameter {
                    name: "g",
                    message: "must satisfy g != 0".into(),
                });
            }
            Some(g_rat)
        }
        (true, None) => {
            return Err(SystemError::InvalidParameter {
                name: "g",
                message: format!("required for kind {kind}"),
            })
        }
        (false, _) => None,
    };

    let g_poly = match kind {
        PotentialKind::Kepler => BivariatePoly::zero(),
        PotentialKind::Stark => BivariatePoly::monomial(g.clone().unwrap(), 1, 0),
        PotentialKind::FrozenHill | PotentialKind::Generalized(_) => {
            let n = match kind {
                PotentialKind::FrozenHill => 1,
                PotentialKind::Generalized(n) => {
                    if !(1..=MAX_N).contains(&n) {
                        return Err(SystemError::InvalidParameter {
                            name: "n",
                            message: format!("must satisfy 1 <= n <= {MAX_N}, got {n}"),
                        });
                    }
                    n
                }
                _ => unreachable!(),
            };
            separability_poly(&ck_table(n)?).scale(g.as_ref().unwrap())
        }
        PotentialKind::Custom => BivariatePoly::zero(),
    };

    Ok(PolynomialPotential { kind, m, g, g_poly })
}

/// Builds a custom potential from an explicit polynomial `G`.
pub fn build_custom(m: f64, f: f64, g_poly: BivariatePoly) -> Result<PolynomialPotential, SystemError> {
    let mut pot = build_system(
        PotentialKind::Kepler,
        &SystemParams { m, g: None, n: None, f },
    )?;
    pot.kind = PotentialKind::Custom;
    pot.g_poly = g_poly;
    Ok(pot)
}

/// The separated pair of one-degree-of-freedom Hamiltonians
/// `K_i = kappa w_i^2 + V_i(z_i^2)` on the level `K_1 + K_2 = m`.
#[derive(Debug, Clone)]
pub struct SeparatedSystem {
    pub kappa: f64,
    pub v1: UnivariatePoly,
    pub v2: UnivariatePoly,
    /// Energy shift: the original hypersurface is `H = -f`.
    pub f: BigRational,
    /// Level of the regularized Hamiltonian, equal to the Kepler mass.
    pub m_level: BigRational,
}

impl SeparatedSystem {
    pub fn f_f64(&self) -> f64 {
        self.f.to_f64().unwrap_or(f64::NAN)
    }

    pub fn m_f64(&self) -> f64 {
        self.m_level.to_f64().unwrap_or(f64::NAN)
    }

    pub fn potentials(&self) -> [&UnivariatePoly; 2] {
        [&self.v1, &self.v2]
    }
}

/// Separates a Stark-type potential on the `(-f)`-energy hypersurface into
/// a [`SeparatedSystem`]. Exact throughout: `V_i(u) = f u - G_i(u)` with
/// rational coefficients, `V_i(0) = 0`.
pub fn separate(pot: &PolynomialPotential, f: f64) -> Result<SeparatedSystem, SystemError> {
    let f_rat = exact(f, "f")?;
    if !f_rat.is_positive() {
        return Err(SystemError::InvalidParameter {
            name: "f",
            message: format!("must satisfy f > 0, got {f}"),
        });
    }
    let pulled = lc_pullback(&pot.g_poly);
    let (g1z, g2z) = split_separable(&pulled)?;
    let g1 = g1z
        .even_powers_to_u()
        .ok_or(SystemError::OddPowers { half: 1 })?;
    let g2 = g2z
        .even_powers_to_u()
        .ok_or(SystemError::OddPowers { half: 2 })?;
    let fu = UnivariatePoly::monomial(f_rat.clone(), 1);
    let v1 = fu.sub(&g1);
    let v2 = fu.sub(&g2);
    debug_assert!(v1.coeff(0).is_zero() && v2.coeff(0).is_zero());
    Ok(SeparatedSystem {
        kappa: KAPPA,
        v1,
        v2,
        f: f_rat,
        m_level: pot.m.clone(),
    })
}

/// The four critical points and two critical values of the generalized
/// family potential, by the closed forms
///
/// ```text
/// E_1 = -(2n+1) (m/2n)^(2n/(2n+1)) g^(1/(2n+1))     at (+-(m/2ng)^(1/(2n+1)), 0)
/// E_2 = -(2n+1) (m/4n)^(2n/(2n+1)) g^(1/(2n+1))     at (0, +-(2^(2n-1) m/ng)^(1/(2n+1)))
/// ```
///
/// Always `E_1 < E_2 < 0`. No critical values exist for `g <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalData {
    pub e1: f64,
    pub e2: f64,
    /// `[(r1, 0), (-r1, 0), (0, r2), (0, -r2)]`.
    pub points: [[f64; 2]; 4],
}

pub fn critical_values(n: u32, m: f64, g: f64) -> Result<CriticalData, SystemError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(SystemError::InvalidParameter {
            name: "n",
            message: format!("must satisfy 1 <= n <= {MAX_N}, got {n}"),
        });
    }
    if !(m > 0.0) {
        return Err(SystemError::InvalidParameter {
            name: "m",
            message: format!("must satisfy m > 0, got {m}"),
        });
    }
    if g <= 0.0 {
        return Err(SystemError::NoCriticalValues);
    }
    let nf = f64::from(n);
    let p = 2.0 * nf + 1.0;
    let r1 = (m / (2.0 * nf * g)).powf(1.0 / p);
    let r2 = ((2.0f64).powi(2 * n as i32 - 1) * m / (nf * g)).powf(1.0 / p);
    let e1 = -p * (m / (2.0 * nf)).powf(2.0 * nf / p) * g.powf(1.0 / p);
    let e2 = -p * (m / (4.0 * nf)).powf(2.0 * nf / p) * g.powf(1.0 / p);
    Ok(CriticalData {
        e1,
        e2,
        points: [[r1, 0.0], [-r1, 0.0], [0.0, r2], [0.0, -r2]],
    })
}

/// Location and value of the unique interior maximum of a separated
/// potential on `u > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierPoint {
    pub u_star: f64,
    pub v_star: f64,
}

/// Finds the potential barrier of `V` on `(0, inf)`, assuming `V(0) = 0`.
///
/// Returns `Ok(None)` when `V` is strictly increasing (no barrier, every
/// level set of the half-system is bounded). The critical-point count is
/// established exactly by a Sturm chain on `V'`; the single root is then
/// refined in floating point by safeguarded bisection/Newton.
pub fn barrier(v: &UnivariatePoly) -> Result<Option<BarrierPoint>, BarrierError> {
    let dv = v.derivative();
    if dv.is_zero() {
        return Err(BarrierError::NoInteriorMaximum);
    }
    let zero = BigRational::zero();
    let bound = dv.root_bound();
    let sign_origin = sign_just_right_of_zero(&dv);
    match dv.count_roots_in(&zero, &bound) {
        0 => {
            if sign_origin > 0 {
                Ok(None)
            } else {
                Err(BarrierError::NoInteriorMaximum)
            }
        }
        1 => {
            let sign_far = dv.sign_at(&bound);
            if sign_origin > 0 && sign_far < 0 {
                let u_star = refine_root(&dv.to_f64_coeffs(), bound.to_f64().unwrap_or(f64::MAX));
                let v_star = horner(&v.to_f64_coeffs(), u_star);
                Ok(Some(BarrierPoint { u_star, v_star }))
            } else {
                // touching root or a minimum: the level structure is outside
                // the family and is reported, not guessed around
                Err(BarrierError::NoInteriorMaximum)
            }
        }
        k => Err(BarrierError::MultipleCriticalPoints(k)),
    }
}

/// Sign of a polynomial immediately to the right of zero: the sign of its
/// lowest-order nonzero coefficient.
fn sign_just_right_of_zero(p: &UnivariatePoly) -> i8 {
    for c in p.coeffs() {
        if !c.is_zero() {
            return if c.is_positive() { 1 } else { -1 };
        }
    }
    0
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Bisection with Newton acceleration on `[lo, hi]` for a function known to
/// cross from positive to negative exactly once.
fn refine_root(dv: &[f64], hi0: f64) -> f64 {
    let d2v: Vec<f64> = dv
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect();
    // find a strictly positive left end
    let mut lo = 0.0;
    let mut x = hi0;
    for _ in 0..200 {
        x *= 0.5;
        if horner(dv, x) > 0.0 {
            lo = x;
            break;
        }
    }
    let mut hi = hi0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fm = horner(dv, mid);
        if fm > 0.0 {
            lo = mid;
        } else if fm < 0.0 {
            hi = mid;
        } else {
            return mid;
        }
        let dfm = horner(&d2v, mid);
        let newton = mid - fm / dfm;
        let next = if dfm != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - mid).abs() <= 1e-16 * (1.0 + next.abs()) {
            return next;
        }
        mid = next;
    }
    mid
}

/// Energy regime of a separated system relative to the first critical value
/// of its configuration potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyClass {
    /// `-f < E_1`: the hypersurface has a bounded and an unbounded component.
    BelowFirstCritical,
    AboveFirstCritical,
    /// The potential has no critical values (`g < 0`, or Kepler).
    NoCriticalValues,
    /// No critical-value notion is defined for this kind (Stark, custom);
    /// boundedness is decided per half-system by the barrier instead.
    NotApplicable,
}

impl fmt::Display for EnergyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyClass::BelowFirstCritical => write!(f, "below first critical value"),
            EnergyClass::AboveFirstCritical => write!(f, "above first critical value"),
            EnergyClass::NoCriticalValues => write!(f, "no critical values"),
            EnergyClass::NotApplicable => write!(f, "not applicable"),
        }
    }
}

/// Classifies the energy regime. For the generalized family with `g > 0`
/// this compares `f` against `-E_1`, which is equivalent to comparing the
/// barrier value of `V_1` against the level `m`.
pub fn classify_energy(sys: &SeparatedSystem, pot: &PolynomialPotential) -> EnergyClass {
    match pot.kind {
        PotentialKind::Kepler => EnergyClass::NoCriticalValues,
        PotentialKind::Stark | PotentialKind::Custom => EnergyClass::NotApplicable,
        PotentialKind::FrozenHill | PotentialKind::Generalized(_) => {
            let n = pot.family_index().unwrap();
            let g = pot.g_f64().unwrap_or(f64::NAN);
            if g < 0.0 {
                return EnergyClass::NoCriticalValues;
            }
            match critical_values(n, pot.m_f64(), g) {
                Ok(cd) if sys.f_f64() > -cd.e1 => EnergyClass::BelowFirstCritical,
                Ok(_) => EnergyClass::AboveFirstCritical,
                Err(_) => EnergyClass::NoCriticalValues,
            }
        }
    }
}
