//! Independent brute-force validators.
//!
//! Nothing here shares a code path with the quantity it checks: areas come
//! from seeded Monte Carlo hit counting instead of quadrature, derivative
//! formulas are compared against central differences, the coefficient
//! recurrence is re-derived by solving the monomial-matching linear system
//! exactly, and critical values are recovered by a derivative-free Newton
//! search on the configuration potential. The test suites lean on these
//! oracles; the CLI exposes them through the `audit` subcommand.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::action::{action_with, radial_derivatives, radial_solve, HalfSystem, QuadratureOptions};
use crate::coeffs::{ck_table, CoeffsError, MAX_N};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("no finite bounding box for energy {a} (admissible limit {a_max})")]
    UnboundedRegion { a: f64, a_max: f64 },
    #[error(transparent)]
    Coeffs(#[from] CoeffsError),
}

/// Monte Carlo area estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub value: f64,
    /// Sample standard deviation of the hit indicator, scaled by the box
    /// area over `sqrt(n_samples)`.
    pub stderr: f64,
    pub n_samples: u64,
    pub rng_seed: u64,
}

const MC_BATCH: u64 = 1 << 16;

/// Unbiased area estimate of the bounded sublevel region
/// `{kappa w^2 + V(z^2) <= a}` by rejection sampling over its bounding box.
///
/// The box is `|z| <= sqrt(u_reach)`, `|w| <= sqrt(a/kappa)` with
/// `u_reach = V^{-1}(a)` on the bounded branch, so no point of the
/// unbounded component can be hit. The generator is ChaCha8, a counter-mode
/// stream cipher: the seed fixes the key and each fixed-size batch uses its
/// batch index as the stream counter, so the estimate is bit-reproducible
/// for a given `(seed, n_samples)` regardless of thread count. No global
/// RNG state is touched.
pub fn mc_area(h: &HalfSystem, a: f64, n_samples: u64, seed: u64) -> Result<AreaEstimate, OracleError> {
    if a == 0.0 {
        return Ok(AreaEstimate { value: 0.0, stderr: 0.0, n_samples, rng_seed: seed });
    }
    if !(a > 0.0) || a >= h.a_max {
        return Err(OracleError::UnboundedRegion { a, a_max: h.a_max });
    }
    let u_reach = radial_solve(h, a, std::f64::consts::FRAC_PI_2)
        .map_err(|_| OracleError::UnboundedRegion { a, a_max: h.a_max })?;
    let z_max = u_reach.sqrt();
    let w_max = (a / h.kappa).sqrt();
    let box_area = 4.0 * z_max * w_max;

    let n_batches = n_samples.div_ceil(MC_BATCH);
    let hits: u64 = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let count = MC_BATCH.min(n_samples - batch * MC_BATCH);
            let mut hits = 0u64;
            for _ in 0..count {
                let z = (2.0 * unit_f64(&mut rng) - 1.0) * z_max;
                let w = (2.0 * unit_f64(&mut rng) - 1.0) * w_max;
                if h.kappa * w * w + h.v(z * z) <= a {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let n = n_samples as f64;
    let p = hits as f64 / n;
    let sample_sd = if n_samples > 1 {
        (p * (1.0 - p) * n / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(AreaEstimate {
        value: box_area * p,
        stderr: box_area * sample_sd / n.sqrt(),
        n_samples,
        rng_seed: seed,
    })
}

/// 53-bit uniform draw in `[0, 1)`.
fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Worst-case relative errors of the closed-form derivatives against
/// central differences.
#[derive(Debug, Clone, Default)]
pub struct DerivativeAudit {
    pub max_rel_a1: f64,
    pub max_rel_a2: f64,
    pub max_rel_i1: f64,
    pub max_rel_i2: f64,
    /// Grid sites that produced non-finite values.
    pub failures: Vec<String>,
}

impl DerivativeAudit {
    pub fn max_error(&self) -> f64 {
        self.max_rel_a1
            .max(self.max_rel_a2)
            .max(self.max_rel_i1)
            .max(self.max_rel_i2)
    }
}

fn rel_err(closed: f64, fd: f64) -> f64 {
    let scale = closed.abs().max(fd.abs());
    if scale == 0.0 {
        0.0
    } else {
        (closed - fd).abs() / scale.max(1e-12)
    }
}

/// Central-difference audit of `A'`, `A''`, `I'`, `I''` on an energy grid.
///
/// `A'` and `I'` are differenced from the radial solver and the action
/// integral directly. The second derivatives are differenced from the
/// closed-form first derivatives: a direct second difference of the solver
/// at the documented step sits at the f64 noise floor (4 eps / step^2 is
/// already above 1e-6), while the staged comparison keeps every link of the
/// chain independently validated. The grid must be interior to the
/// admissible range by at least `step`.
pub fn fd_derivative_audit(h: &HalfSystem, a_grid: &[f64], step: f64) -> DerivativeAudit {
    const THETAS: [f64; 4] = [0.3, 0.8, 1.25, 1.5];
    let quad = QuadratureOptions { rel_tol: 1e-12, max_panels: 8192 };
    let mut audit = DerivativeAudit::default();
    for &a in a_grid {
        for &theta in &THETAS {
            let (Ok(r), Ok(rp), Ok(rm)) = (
                radial_derivatives(h, a, theta),
                radial_derivatives(h, a + step, theta),
                radial_derivatives(h, a - step, theta),
            ) else {
                audit.failures.push(format!("radial solve failed at a={a}, theta={theta}"));
                continue;
            };
            let fd_a1 = (rp.amplitude - rm.amplitude) / (2.0 * step);
            let fd_a2 = (rp.d_amplitude - rm.d_amplitude) / (2.0 * step);
            if !(fd_a1.is_finite() && fd_a2.is_finite()) {
                audit.failures.push(format!("NaN difference at a={a}, theta={theta}"));
                continue;
            }
            audit.max_rel_a1 = audit.max_rel_a1.max(rel_err(r.d_amplitude, fd_a1));
            audit.max_rel_a2 = audit.max_rel_a2.max(rel_err(r.d2_amplitude, fd_a2));
        }
        let (Ok(act), Ok(actp), Ok(actm)) = (
            action_with(h, a, &quad),
            action_with(h, a + step, &quad),
            action_with(h, a - step, &quad),
        ) else {
            audit.failures.push(format!("action failed at a={a}"));
            continue;
        };
        let fd_i1 = (actp.i - actm.i) / (2.0 * step);
        let fd_i2 = (actp.i1 - actm.i1) / (2.0 * step);
        if !(fd_i1.is_finite() && fd_i2.is_finite()) {
            audit.failures.push(format!("NaN action difference at a={a}"));
            continue;
        }
        audit.max_rel_i1 = audit.max_rel_i1.max(rel_err(act.i1, fd_i1));
        audit.max_rel_i2 = audit.max_rel_i2.max(rel_err(act.i2, fd_i2));
    }
    audit
}

/// Report of the brute-force re-derivation of the coefficient tables.
#[derive(Debug, Clone)]
pub struct IdentityAudit {
    pub n_max: u32,
    /// Human-readable descriptions of every disagreement found.
    pub mismatches: Vec<String>,
}

impl IdentityAudit {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-derives `C_0..C_n` without the recurrence: expands
/// `(z1^2 + z2^2) * sum_k x_k (z1^2 - z2^2)^(2n-2k) z1^(2k) z2^(2k)`
/// with unknown coefficients and solves the monomial-matching system
/// against `z1^(4n+2) + z2^(4n+2)` by exact Gaussian elimination.
/// (`(2 z1 z2)^(2k) / 4^k = z1^(2k) z2^(2k)`, so the unknowns are exactly
/// the `C_k`.)
pub fn brute_force_coefficients(n: u32) -> Result<Vec<BigRational>, CoeffsError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(CoeffsError::InvalidN(n));
    }
    let unknowns = n as usize + 1;
    let rows = 2 * n as usize + 2;
    // matrix[i][k] = coefficient of z1^(2i) z2^(2(2n+1-i)) in the k-th basis expansion
    let mut matrix = vec![vec![BigRational::zero(); unknowns]; rows];
    let mut rhs = vec![BigRational::zero(); rows];
    rhs[0] = BigRational::one(); // z2^(4n+2)
    rhs[rows - 1] = BigRational::one(); // z1^(4n+2)
    for k in 0..=n {
        let e = 2 * n - 2 * k;
        for j in 0..=e {
            let mut c = BigRational::from_integer(binomial(BigInt::from(e), BigInt::from(j)));
            if j % 2 == 1 {
                c = -c;
            }
            // (z1^2)^(e-j) (z2^2)^j * z1^(2k) z2^(2k) * (z1^2 + z2^2)
            let i1 = (e - j + k + 1) as usize;
            let i2 = (e - j + k) as usize;
            matrix[i1][k as usize] += &c;
            matrix[i2][k as usize] += &c;
        }
    }
    let solution = solve_exact(&matrix, &rhs).unwrap_or_default();
    Ok(solution)
}

/// Exact Gaussian elimination for a consistent (possibly overdetermined)
/// rational system with a unique solution. Returns `None` if the system is
/// rank-deficient or inconsistent.
fn solve_exact(matrix: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = matrix.len();
    let cols = matrix.first()?.len();
    let mut m: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut v = row.clone();
            v.push(r.clone());
            v
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return None; // rank-deficient
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    // inconsistent leftover rows mean no solution
    for row in &m[pivot_row..] {
        if !row[cols].is_zero() {
            return None;
        }
    }
    Some(pivots.iter().map(|&r| m[r][cols].clone()).collect())
}

/// Cross-checks the recurrence tables against the brute-force solve for
/// `n = 1..=n_max`, confirming `C_k`, the `d_k` pattern and the `D_k`
/// values. Mismatches are listed, not panicked on.
pub fn identity_audit(n_max: u32) -> Result<IdentityAudit, CoeffsError> {
    if !(1..=MAX_N).contains(&n_max) {
        return Err(CoeffsError::InvalidN(n_max));
    }
    let mut mismatches = Vec::new();
    for n in 1..=n_max {
        let table = ck_table(n)?;
        let brute = brute_force_coefficients(n)?;
        if brute.is_empty() {
            mismatches.push(format!("n={n}: monomial-matching system not uniquely solvable"));
            continue;
        }
        for (k, (c, x)) in table.c.iter().zip(&brute).enumerate() {
            if &BigRational::from_integer(c.clone()) != x {
                mismatches.push(format!("n={n}: C_{k} recurrence={c} brute-force={x}"));
            }
        }
        for (k, d) in table.d_small.iter().enumerate() {
            let expected = BigInt::from(if k % 2 == 0 { 2 } else { -2 });
            if d != &expected {
                mismatches.push(format!("n={n}: d_{} = {d}, expected {expected}", k + 1));
            }
        }
        for (k, big) in table.big_d.iter().enumerate() {
            let from_brute =
                BigRational::from_integer(BigInt::from(4 * (n - k as u32))) * &brute[k]
                    - BigRational::from_integer(BigInt::from(k as u32 + 1)) * &brute[k + 1];
            if BigRational::from_integer(big.clone()) != from_brute {
                mismatches.push(format!("n={n}: D_{k} table={big} brute-force={from_brute}"));
            }
        }
    }
    Ok(IdentityAudit { n_max, mismatches })
}

/// A critical point of the configuration potential found by search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub q: [f64; 2],
    pub value: f64,
}

/// Derivative-free critical-point search for the generalized family
/// potential `V(q) = -m/|q| - g F_n(q)`, independent of the closed forms:
/// a coarse scan of the finite-difference gradient norm locates candidate
/// basins, Newton iteration on the finite-difference gradient polishes
/// them. Returns deduplicated points sorted by value.
pub fn critical_point_search(n: u32, m: f64, g: f64) -> Result<Vec<CriticalPoint>, OracleError> {
    let table = ck_table(n)?;
    let coeffs: Vec<f64> = table
        .c
        .iter()
        .enumerate()
        .map(|(k, c)| c.to_f64().unwrap() / 4.0f64.powi(k as i32))
        .collect();
    let pot = move |q1: f64, q2: f64| -> f64 {
        let r = (q1 * q1 + q2 * q2).sqrt();
        let mut f = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            f += c * q1.powi(2 * (n as i32 - k as i32)) * q2.powi(2 * k as i32);
        }
        -m / r - g * f
    };

    let radius = 4.0 * (m / g).powf(1.0 / (2.0 * f64::from(n) + 1.0));
    let grad = |q: [f64; 2]| -> [f64; 2] {
        let h1 = 1e-6 * (1.0 + q[0].abs());
        let h2 = 1e-6 * (1.0 + q[1].abs());
        [
            (pot(q[0] + h1, q[1]) - pot(q[0] - h1, q[1])) / (2.0 * h1),
            (pot(q[0], q[1] + h2) - pot(q[0], q[1] - h2)) / (2.0 * h2),
        ]
    };

    // coarse scan for local minima of |grad|^2
    let cells = 161usize;
    let mut norms = vec![f64::INFINITY; cells * cells];
    let coord = |i: usize| -radius + 2.0 * radius * i as f64 / (cells - 1) as f64;
    for i in 0..cells {
        for j in 0..cells {
            let q = [coord(i), coord(j)];
            if (q[0] * q[0] + q[1] * q[1]).sqrt() < 0.03 * radius {
                continue;
            }
            let g = grad(q);
            norms[i * cells + j] = g[0] * g[0] + g[1] * g[1];
        }
    }
    let mut candidates = Vec::new();
    for i in 1..cells - 1 {
        for j in 1..cells - 1 {
            let v = norms[i * cells + j];
            if !v.is_finite() {
                continue;
            }
            let is_min = (-1i64..=1)
                .flat_map(|di| (-1i64..=1).map(move |dj| (di, dj)))
                .filter(|&(di, dj)| (di, dj) != (0, 0))
                .all(|(di, dj)| {
                    v <= norms[(i as i64 + di) as usize * cells + (j as i64 + dj) as usize]
                });
            if is_min {
                candidates.push([coord(i), coord(j)]);
            }
        }
    }

    let mut found: Vec<CriticalPoint> = Vec::new();
    for start in candidates {
        if let Some(q) = newton_on_gradient(&grad, start, radius) {
            let r = (q[0] * q[0] + q[1] * q[1]).sqrt();
            if r < 0.04 * radius || r > 1.5 * radius {
                continue;
            }
            if found
                .iter()
                .all(|p| (p.q[0] - q[0]).hypot(p.q[1] - q[1]) > 1e-5 * radius)
            {
                found.push(CriticalPoint { q, value: pot(q[0], q[1]) });
            }
        }
    }
    found.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.q[0].total_cmp(&b.q[0])));
    Ok(found)
}

fn newton_on_gradient<F: Fn([f64; 2]) -> [f64; 2]>(
    grad: &F,
    start: [f64; 2],
    radius: f64,
) -> Option<[f64; 2]> {
    // the finite-difference gradient carries ~1e-10 noise, so steps jitter
    // at that scale near the root; track the smallest-gradient iterate and
    // accept by gradient magnitude rather than by step size alone
    let mut q = start;
    let mut best = (f64::INFINITY, q);
    for _ in 0..100 {
        let g = grad(q);
        let g_norm = g[0].hypot(g[1]);
        if g_norm < best.0 {
            best = (g_norm, q);
        }
        let h1 = 1e-4 * (1.0 + q[0].abs());
        let h2 = 1e-4 * (1.0 + q[1].abs());
        let gx1 = grad([q[0] + h1, q[1]]);
        let gx0 = grad([q[0] - h1, q[1]]);
        let gy1 = grad([q[0], q[1] + h2]);
        let gy0 = grad([q[0], q[1] - h2]);
        let jac = [
            [(gx1[0] - gx0[0]) / (2.0 * h1), (gy1[0] - gy0[0]) / (2.0 * h2)],
            [(gx1[1] - gx0[1]) / (2.0 * h1), (gy1[1] - gy0[1]) / (2.0 * h2)],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !det.is_finite() || det.abs() < 1e-300 {
            break;
        }
        let mut step = [
            -(jac[1][1] * g[0] - jac[0][1] * g[1]) / det,
            -(-jac[1][0] * g[0] + jac[0][0] * g[1]) / det,
        ];
        let norm = step[0].hypot(step[1]);
        if norm > 0.2 * radius {
            let s = 0.2 * radius / norm;
            step[0] *= s;
            step[1] *= s;
        }
        q[0] += step[0];
        q[1] += step[1];
        if !q[0].is_finite() || !q[1].is_finite() {
            break;
        }
        if norm <= 1e-9 * (1.0 + q[0].abs().max(q[1].abs())) {
            break;
        }
    }
    let g = grad(q);
    let g_norm = g[0].hypot(g[1]);
    if g_norm < best.0 {
        best = (g_norm, q);
    }
    (best.0 < 1e-6).then_some(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UnivariatePoly;

    fn harmonic_half() -> HalfSystem {
        HalfSystem::from_coeffs(0.5, vec![0.0, 0.5], f64::INFINITY, None)
    }

    fn frozen_hill_half() -> HalfSystem {
        HalfSystem::from_potential(0.5, &UnivariatePoly::from_integers(&[0, 2, 0, -1])).unwrap()
    }

    #[test]
    fn mc_area_harmonic_matches_ellipse() {
        // kappa = f = 1/2, a = 1: the level set is the circle of area 2 pi
        let h = harmonic_half();
        let est = mc_area(&h, 1.0, 2_000_000, 7).unwrap();
        let exact = std::f64::consts::TAU;
        assert!(
            (est.value - exact).abs() < 3.0 * est.stderr,
            "{} vs {exact} (sigma {})",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn mc_area_is_seed_reproducible() {
        let h = frozen_hill_half();
        let a = mc_area(&h, 0.5, 500_000, 42).unwrap();
        let b = mc_area(&h, 0.5, 500_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_area(&h, 0.5, 500_000, 43).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn mc_area_zero_energy_is_zero() {
        let est = mc_area(&harmonic_half(), 0.0, 1000, 1).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn mc_area_rejects_energy_beyond_barrier() {
        let h = frozen_hill_half();
        assert!(matches!(
            mc_area(&h, h.a_max * 1.5, 1000, 1),
            Err(OracleError::UnboundedRegion { .. })
        ));
    }

    #[test]
    fn derivative_audit_harmonic_is_clean() {
        let h = harmonic_half();
        let audit = fd_derivative_audit(&h, &[0.5, 1.0, 2.0], 1e-5);
        assert!(audit.failures.is_empty());
        assert!(audit.max_error() < 1e-10, "{audit:?}");
    }

    #[test]
    fn derivative_audit_records_failures_outside_range() {
        let h = frozen_hill_half();
        let audit = fd_derivative_audit(&h, &[h.a_max * 2.0], 1e-5);
        assert!(!audit.failures.is_empty());
    }

    #[test]
    fn brute_force_matches_recurrence_small_n() {
        for (n, expected) in [(1u32, vec![1i64, 1]), (2, vec![1, 3, 1]), (3, vec![1, 5, 6, 1])] {
            let brute = brute_force_coefficients(n).unwrap();
            let expected: Vec<BigRational> = expected
                .into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            assert_eq!(brute, expected, "n={n}");
        }
    }

    #[test]
    fn identity_audit_clean_through_n8() {
        let audit = identity_audit(8).unwrap();
        assert!(audit.passed(), "{:?}", audit.mismatches);
    }

    #[test]
    fn identity_audit_validates_input() {
        assert!(identity_audit(0).is_err());
    }

    #[test]
    fn exact_solver_rejects_inconsistent_systems() {
        let one = BigRational::one();
        let zero = BigRational::zero();
        // x = 1 and x = 2 simultaneously
        let m = vec![vec![one.clone()], vec![one.clone()]];
        let rhs = vec![one.clone(), &one + &one];
        assert!(solve_exact(&m, &rhs).is_none());
        // rank-deficient
        let m2 = vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), one.clone()]];
        let rhs2 = vec![zero.clone(), one.clone()];
        assert!(solve_exact(&m2, &rhs2).is_none());
    }

    #[test]
    fn critical_search_recovers_frozen_hill_points() {
        let found = critical_point_search(1, 1.0, 1.0).unwrap();
        assert_eq!(found.len(), 4, "{found:?}");
        // E1 at (+-(1/2)^(1/3), 0), E2 at (0, +-2^(1/3))
        let e1 = -3.0 * 0.25f64.powf(1.0 / 3.0);
        let e2 = -1.5 * 0.5f64.powf(1.0 / 3.0);
        assert!(((found[0].value - e1) / e1).abs() < 1e-9);
        assert!(((found[1].value - e1) / e1).abs() < 1e-9);
        assert!(((found[2].value - e2) / e2).abs() < 1e-9);
        assert!(((found[3].value - e2) / e2).abs() < 1e-9);
        assert!(found[0].q[1].abs() < 1e-7 && found[2].q[0].abs() < 1e-7);
    }
}
