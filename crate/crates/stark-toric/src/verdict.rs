//! Moment-map curve assembly and the toric-domain verdict.
//!
//! With the energy budget split `a + b = m` between the two halves, the
//! bounded component of the regularized level set maps to the curve
//! `(I_1(a), I_2(b))` in the action plane. Writing `a = h_1(I_1)`,
//! `b = h_2(I_2)` for the inverse action maps, the chain rule gives
//!
//! ```text
//! dI_2/dI_1 = - h_1'(I_1) / h_2'(I_2)                        (always < 0)
//! sign(d^2 I_2 / dI_1^2) is opposite to
//! N = h_1''(I_1) h_2'(I_2)^2 + h_1'(I_1)^2 h_2''(I_2)
//! ```
//!
//! with `h' = 1/I'` and `h'' = -I''/I'^3` per half. The quantity `N` is the
//! decision functional reported as `curvature` throughout this crate and in
//! the curve files: the bounded component bounds a **concave** toric domain
//! when `N < 0` at every sample (the boundary curve is then the graph of a
//! convex decreasing function) and a **convex** toric domain when `N > 0`
//! throughout. The sign conditions on the potentials (`V' > 0` with `V''`
//! of one sign for both halves) decide the same question without any
//! quadrature; that cheap test runs first and the sampled curve serves as
//! fallback and cross-check.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::action::{
    action_with, radial_solve, star_shape_check, ActionError, HalfSystem, QuadratureOptions,
};
use crate::poly::SignClass;
use crate::separation::SeparatedSystem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerdictError {
    #[error("half-system {half}: bounded level sets end at {available:.6e}, below the required budget {required:.6e}")]
    NoBoundedComponent { half: u8, required: f64, available: f64 },
    #[error("half-system {half}: level set at a = {a:.6e} is not star-shaped")]
    NotStarShaped { half: u8, a: f64 },
    #[error("half-system {half}: {source}")]
    Action {
        half: u8,
        #[source]
        source: ActionError,
    },
}

/// Sampling and tolerance controls for the curve and the verdict.
#[derive(Debug, Clone, Copy)]
pub struct CurveOptions {
    /// Number of energy samples (Chebyshev-spaced, at least 2).
    pub samples: usize,
    /// Fraction of the budget `m` trimmed off both window ends.
    pub endpoint_margin: f64,
    /// Fraction of the barrier value kept clear of the separatrix.
    pub barrier_margin: f64,
    pub quadrature: QuadratureOptions,
    /// Absolute band around zero inside which curvature counts as flat.
    pub tol_zero: f64,
}

impl Default for CurveOptions {
    fn default() -> Self {
        Self {
            samples: 65,
            endpoint_margin: 1e-3,
            barrier_margin: 1e-3,
            quadrature: QuadratureOptions::default(),
            tol_zero: 1e-9,
        }
    }
}

/// One point of the moment-map curve. The energy split is kept as exact
/// rationals so that `a + b = m` holds identically, not as a float residue;
/// the floating-point copies feed the quadrature and the output files.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub a_exact: BigRational,
    pub b_exact: BigRational,
    pub a: f64,
    pub b: f64,
    pub i1: f64,
    pub i2: f64,
    /// `dI_2/dI_1 = -I_2'(b) / I_1'(a)`.
    pub slope: f64,
    /// The decision functional `N` (see module docs); negative throughout
    /// means a concave toric domain.
    pub curvature: f64,
    /// `I_1'(a)` and `I_2'(b)`, kept for consistency checks.
    pub di1_da: f64,
    pub di2_db: f64,
}

#[derive(Debug, Clone)]
pub struct MomentMapCurve {
    pub samples: Vec<CurveSample>,
    pub m_level: f64,
    pub endpoint_margin: f64,
    pub barrier_margin: f64,
}

/// Samples the moment-map curve over the admissible energy window.
///
/// The split grid is Chebyshev-spaced on `[eps m, (1-eps) m]` and built in
/// exact rational arithmetic. Both halves must admit bounded star-shaped
/// level sets across the whole window; otherwise there is no bounded
/// component to sample and [`VerdictError::NoBoundedComponent`] is raised.
/// Prepares both half-systems, attributing barrier failures to their half.
fn build_halves(sys: &SeparatedSystem) -> Result<[HalfSystem; 2], VerdictError> {
    let mut out = Vec::with_capacity(2);
    for (idx, v) in sys.potentials().into_iter().enumerate() {
        let h = HalfSystem::from_potential(sys.kappa, v).map_err(|b| VerdictError::Action {
            half: idx as u8 + 1,
            source: ActionError::Barrier(b),
        })?;
        out.push(h);
    }
    Ok([out.remove(0), out.remove(0)])
}

pub fn moment_curve(sys: &SeparatedSystem, opts: &CurveOptions) -> Result<MomentMapCurve, VerdictError> {
    let halves = build_halves(sys)?;
    let m = sys.m_f64();
    let required = (1.0 - opts.endpoint_margin) * m;
    for (idx, h) in halves.iter().enumerate() {
        let clip = h.admissible_max(opts.barrier_margin);
        if clip < required {
            return Err(VerdictError::NoBoundedComponent {
                half: idx as u8 + 1,
                required,
                available: clip,
            });
        }
        if !star_shape_check(h, required) {
            return Err(VerdictError::NotStarShaped { half: idx as u8 + 1, a: required });
        }
    }

    let n = opts.samples.max(2);
    let m_rat = sys.m_level.clone();
    let eps = BigRational::from_float(opts.endpoint_margin).expect("finite margin");
    let lo = &m_rat * &eps;
    let hi = &m_rat * (BigRational::one() - &eps);
    let span = &hi - &lo;
    let grid: Vec<(BigRational, BigRational)> = (0..n)
        .map(|j| {
            let t = 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / (n as f64 - 1.0)).cos());
            let t_rat = BigRational::from_float(t).expect("finite node");
            let a = &lo + &span * t_rat;
            let b = &m_rat - &a;
            (a, b)
        })
        .collect();

    let samples: Vec<CurveSample> = grid
        .into_par_iter()
        .map(|(a_rat, b_rat)| {
            let a = a_rat.to_f64().unwrap();
            let b = b_rat.to_f64().unwrap();
            let act1 = action_with(&halves[0], a, &opts.quadrature)
                .map_err(|source| VerdictError::Action { half: 1, source })?;
            let act2 = action_with(&halves[1], b, &opts.quadrature)
                .map_err(|source| VerdictError::Action { half: 2, source })?;
            let slope = -act2.i1 / act1.i1;
            // N = h1'' h2'^2 + h1'^2 h2'' with h' = 1/I', h'' = -I''/I'^3
            let curvature = -act1.i2 / (act1.i1.powi(3) * act2.i1.powi(2))
                - act2.i2 / (act1.i1.powi(2) * act2.i1.powi(3));
            Ok(CurveSample {
                a_exact: a_rat,
                b_exact: b_rat,
                a,
                b,
                i1: act1.i,
                i2: act2.i,
                slope,
                curvature,
                di1_da: act1.i1,
                di2_db: act2.i1,
            })
        })
        .collect::<Result<_, _>>()?;

    Ok(MomentMapCurve {
        samples,
        m_level: m,
        endpoint_margin: opts.endpoint_margin,
        barrier_margin: opts.barrier_margin,
    })
}

/// Toric-domain type of the bounded component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Concave,
    Convex,
    Indeterminate,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainKind::Concave => write!(f, "concave"),
            DomainKind::Convex => write!(f, "convex"),
            DomainKind::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionMethod {
    Criterion3,
    CurveCurvature,
    Both,
}

impl std::fmt::Display for DecisionMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecisionMethod::Criterion3 => write!(f, "Criterion 3"),
            DecisionMethod::CurveCurvature => write!(f, "curve curvature"),
            DecisionMethod::Both => write!(f, "Criterion 3 + curve curvature"),
        }
    }
}

/// Exact sign classification of `V'` and `V''` over the swept range of one half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSignReport {
    pub v_prime: SignClass,
    pub v_double_prime: SignClass,
    /// Upper end of the classified range in `u = z^2`.
    pub u_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criterion3Report {
    pub halves: [HalfSignReport; 2],
    /// Partial verdict implied by the sign table alone.
    pub partial: DomainKind,
}

/// The potential-sign criterion: over the swept range of the bounded
/// component, `V' > 0` for both halves combined with `V'' < 0` for both
/// yields a concave toric domain, `V'' > 0` for both a convex one. Any
/// other sign pattern leaves the question open.
///
/// The sign classification is exact (Sturm chains on the rational
/// potentials); only the range endpoint comes from floating point.
pub fn criterion3(sys: &SeparatedSystem) -> Result<Criterion3Report, VerdictError> {
    let halves = build_halves(sys)?;
    let m = sys.m_f64();
    let mut reports = Vec::with_capacity(2);
    for (idx, (h, v)) in halves.iter().zip(sys.potentials()).enumerate() {
        // energy reachable by this half on the bounded component
        let a_cap = m.min(h.admissible_max(1e-3));
        let u_max = radial_solve(h, a_cap, std::f64::consts::FRAC_PI_2)
            .map_err(|source| VerdictError::Action { half: idx as u8 + 1, source })?;
        let hi = BigRational::from_float(u_max).expect("finite sweep range");
        let dv = v.derivative();
        let d2v = dv.derivative();
        reports.push(HalfSignReport {
            v_prime: dv.sign_on_interval(&BigRational::zero(), &hi),
            v_double_prime: d2v.sign_on_interval(&BigRational::zero(), &hi),
            u_max,
        });
    }
    let halves_report = [reports[0], reports[1]];
    let both_increasing = halves_report
        .iter()
        .all(|r| r.v_prime == SignClass::Positive);
    let partial = if !both_increasing {
        DomainKind::Indeterminate
    } else if halves_report
        .iter()
        .all(|r| r.v_double_prime == SignClass::Negative)
    {
        DomainKind::Concave
    } else if halves_report
        .iter()
        .all(|r| r.v_double_prime == SignClass::Positive)
    {
        DomainKind::Convex
    } else {
        DomainKind::Indeterminate
    };
    Ok(Criterion3Report { halves: halves_report, partial })
}

/// Per-sample curvature sign tally backing a curve-based verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureEvidence {
    pub negative: usize,
    pub positive: usize,
    /// Samples inside the `tol_zero` band.
    pub flat: usize,
    pub tol_zero: f64,
    pub min: f64,
    pub max: f64,
}

fn classify_curve(curve: &MomentMapCurve, tol_zero: f64) -> (DomainKind, CurvatureEvidence) {
    let mut ev = CurvatureEvidence {
        negative: 0,
        positive: 0,
        flat: 0,
        tol_zero,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for s in &curve.samples {
        ev.min = ev.min.min(s.curvature);
        ev.max = ev.max.max(s.curvature);
        if s.curvature.abs() <= tol_zero {
            ev.flat += 1;
        } else if s.curvature < 0.0 {
            ev.negative += 1;
        } else {
            ev.positive += 1;
        }
    }
    let n = curve.samples.len();
    let kind = if ev.flat == 0 && ev.negative == n {
        DomainKind::Concave
    } else if ev.flat == 0 && ev.positive == n {
        DomainKind::Convex
    } else {
        DomainKind::Indeterminate
    };
    (kind, ev)
}

#[derive(Debug, Clone, Copy)]
pub struct VerdictOptions {
    pub curve: CurveOptions,
    /// Fall back to the sampled curve when the sign criterion is silent.
    pub curve_fallback: bool,
    /// Compute the curve even when the sign criterion already decided
    /// (used to cross-check and to emit curve files).
    pub always_curve: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self {
            curve: CurveOptions::default(),
            curve_fallback: true,
            always_curve: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: DomainKind,
    pub method: DecisionMethod,
    pub criterion3: Criterion3Report,
    pub curvature: Option<CurvatureEvidence>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct VerdictOutcome {
    pub verdict: Verdict,
    pub curve: Option<MomentMapCurve>,
}

/// Renders the final verdict: the sign criterion first, the sampled curve
/// as fallback or cross-check. Indeterminate is a first-class outcome.
pub fn verdict(sys: &SeparatedSystem, opts: &VerdictOptions) -> Result<VerdictOutcome, VerdictError> {
    let c3 = criterion3(sys)?;
    let decisive = c3.partial != DomainKind::Indeterminate;
    let need_curve = opts.always_curve || (!decisive && opts.curve_fallback);
    let curve = if need_curve {
        Some(moment_curve(sys, &opts.curve)?)
    } else {
        None
    };

    let mut notes = Vec::new();
    let mut curvature = None;
    let (kind, method) = if decisive {
        if let Some(curve) = &curve {
            let (curve_kind, ev) = classify_curve(curve, opts.curve.tol_zero);
            curvature = Some(ev);
            if curve_kind == c3.partial {
                (c3.partial, DecisionMethod::Both)
            } else {
                notes.push(format!(
                    "curve curvature ({curve_kind}) does not confirm the sign criterion ({})",
                    c3.partial
                ));
                (c3.partial, DecisionMethod::Criterion3)
            }
        } else {
            (c3.partial, DecisionMethod::Criterion3)
        }
    } else if let Some(curve) = &curve {
        let (curve_kind, ev) = classify_curve(curve, opts.curve.tol_zero);
        if ev.flat > 0 {
            notes.push(format!(
                "{} of {} samples have |curvature| <= {:.1e}; no strict sign verdict",
                ev.flat,
                curve.samples.len(),
                ev.tol_zero
            ));
        } else if curve_kind == DomainKind::Indeterminate {
            notes.push(format!(
                "curvature changes sign along the curve ({} negative, {} positive samples)",
                ev.negative, ev.positive
            ));
        }
        curvature = Some(ev);
        (curve_kind, DecisionMethod::CurveCurvature)
    } else {
        notes.push("sign criterion silent and curve fallback disabled".into());
        (DomainKind::Indeterminate, DecisionMethod::Criterion3)
    };

    Ok(VerdictOutcome {
        verdict: Verdict { kind, method, criterion3: c3, curvature, notes },
        curve,
    })
}
