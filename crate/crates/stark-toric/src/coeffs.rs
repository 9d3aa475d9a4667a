//! The exact integer recurrence behind the generalized separable family.
//!
//! The potential family `-m/|q| - g * F_n(q)` separates under Levi-Civita
//! precisely because the coefficients of
//!
//! ```text
//! F_n(q) = sum_{k=0}^{n} C_k / 2^(2k) * q1^(2n-2k) * q2^(2k)
//! ```
//!
//! satisfy a telescoping identity: `(z1^2 + z2^2) * F_n(z1^2 - z2^2, 2 z1 z2)`
//! collapses to `z1^(4n+2) + z2^(4n+2)`. The `C_k` are produced by an
//! inductive recurrence starting from `C_0 = 1`; an auxiliary integer
//! sequence `d_k` (which works out to `(-1)^(k+1) * 2`) certifies that the
//! final coefficient `C_n` is 1, and the derived values
//! `D_k = 4 C_k (n-k) - C_{k+1} (k+1)` decide whether all critical points of
//! the potential sit on the coordinate axes.
//!
//! Everything here is exact `BigInt` arithmetic; [`poly_identity_check`]
//! closes the loop by expanding the pullback symbolically and comparing
//! term by term.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::poly::{lc_pullback, BivariatePoly};

/// Largest supported family index. The coefficients grow combinatorially;
/// the cap is a documented guardrail, not an arithmetic limit.
pub const MAX_N: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffsError {
    #[error("family index n must satisfy 1 <= n <= {MAX_N}, got {0}")]
    InvalidN(u32),
}

/// Exact coefficient data for one family index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    pub n: u32,
    /// `C_0 ..= C_n` from the inductive recurrence.
    pub c: Vec<BigInt>,
    /// `d_1 ..= d_n`, the telescoping certificate sequence.
    pub d_small: Vec<BigInt>,
    /// `D_0 ..= D_{n-1}` with `D_k = 4 C_k (n-k) - C_{k+1} (k+1)`.
    ///
    /// The axis-critical-point argument needs these positive. Its summation
    /// runs over exponents that stop at `k = n-1`; the `k = n` value would
    /// involve `C_{n+1}`, which the recurrence for this `n` does not define,
    /// so the implemented index range is `0..=n-1`.
    pub big_d: Vec<BigInt>,
}

/// Result of the `D_k > 0` scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DkPositivity {
    pub all_positive: bool,
    /// First index `k` with `D_k <= 0`, if any.
    pub first_violation: Option<usize>,
}

/// Outcome of the telescoping separability identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Monomials where the expansion and the target differ:
    /// `(e1, e2, got, expected)`.
    pub mismatches: Vec<(u32, u32, BigRational, BigRational)>,
}

/// Computes `C_0..C_n`, the certificate sequence `d_1..d_n`, and the
/// derived values `D_0..D_{n-1}`, all in exact integer arithmetic.
///
/// The recurrence is
///
/// ```text
/// C_0 = 1,
/// C_k = (-1)^k - sum_{l=0}^{k-1} (-1)^(k-l) * C(2n-2l, k-l) * C_l,
/// ```
///
/// and the certificate sequence is
///
/// ```text
/// d_1 = 2,
/// d_k = C(2k, k) - sum_{j=1}^{k-1} C(2k, k-j) * d_j.
/// ```
pub fn ck_table(n: u32) -> Result<CoefficientTable, CoeffsError> {
    if !(1..=MAX_N).contains(&n) {
        return Err(CoeffsError::InvalidN(n));
    }
    let mut c: Vec<BigInt> = Vec::with_capacity(n as usize + 1);
    c.push(BigInt::one());
    for k in 1..=n {
        let mut acc = if k % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        for l in 0..k {
            let b = binomial(BigInt::from(2 * n - 2 * l), BigInt::from(k - l));
            let term = b * &c[l as usize];
            if (k - l) % 2 == 0 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        c.push(acc);
    }

    let mut d_small: Vec<BigInt> = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let mut dk = binomial(BigInt::from(2 * k), BigInt::from(k));
        for j in 1..k {
            dk -= binomial(BigInt::from(2 * k), BigInt::from(k - j)) * &d_small[j as usize - 1];
        }
        d_small.push(dk);
    }

    let mut big_d: Vec<BigInt> = Vec::with_capacity(n as usize);
    for k in 0..n {
        let dk = BigInt::from(4) * &c[k as usize] * BigInt::from(n - k)
            - &c[k as usize + 1] * BigInt::from(k + 1);
        big_d.push(dk);
    }

    Ok(CoefficientTable { n, c, d_small, big_d })
}

/// Scans `D_0..D_{n-1}` for positivity.
pub fn dk_positivity(table: &CoefficientTable) -> DkPositivity {
    let first_violation = table.big_d.iter().position(|d| !d.is_positive());
    DkPositivity {
        all_positive: first_violation.is_none(),
        first_violation,
    }
}

/// The separable combination `F_n(q) = sum_k C_k / 4^k * q1^(2n-2k) * q2^(2k)`.
pub fn separability_poly(table: &CoefficientTable) -> BivariatePoly {
    let n = table.n;
    let mut f = BivariatePoly::zero();
    for (k, ck) in table.c.iter().enumerate() {
        let k = k as u32;
        let denom = BigInt::one() << (2 * k);
        f.add_term(
            2 * n - 2 * k,
            2 * k,
            BigRational::new(ck.clone(), denom),
        );
    }
    f
}

/// Verifies `(z1^2 + z2^2) * F_n(z1^2 - z2^2, 2 z1 z2) = z1^(4n+2) + z2^(4n+2)`
/// by exact expansion. The sign-free form is checked here; the coupling
/// constant `-g` is attached at the potential level.
pub fn poly_identity_check(n: u32) -> Result<IdentityCheck, CoeffsError> {
    let table = ck_table(n)?;
    let pulled = lc_pullback(&separability_poly(&table));
    let target = BivariatePoly::from_terms([
        ((4 * n + 2, 0), BigRational::one()),
        ((0, 4 * n + 2), BigRational::one()),
    ]);
    let diff = pulled.sub(&target);
    let mismatches: Vec<_> = diff
        .terms()
        .map(|(&(e1, e2), _)| (e1, e2, pulled.coeff(e1, e2), target.coeff(e1, e2)))
        .collect();
    Ok(IdentityCheck {
        holds: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rejects_out_of_range_n() {
        assert_eq!(ck_table(0), Err(CoeffsError::InvalidN(0)));
        assert_eq!(ck_table(MAX_N + 1), Err(CoeffsError::InvalidN(MAX_N + 1)));
    }

    #[test]
    fn table_n1_is_frozen_hill() {
        let t = ck_table(1).unwrap();
        assert_eq!(t.c, ints(&[1, 1]));
        assert_eq!(t.d_small, ints(&[2]));
        assert_eq!(t.big_d, ints(&[3]));
    }

    #[test]
    fn table_n2_hand_unrolled() {
        // C_1 = -1 + C(4,1) = 3, C_2 = 1 - (C(4,2) - C(2,1)*3) = 1
        let t = ck_table(2).unwrap();
        assert_eq!(t.c, ints(&[1, 3, 1]));
        assert_eq!(t.big_d, ints(&[5, 10]));
    }

    #[test]
    fn table_n3_hand_unrolled() {
        let t = ck_table(3).unwrap();
        assert_eq!(t.c, ints(&[1, 5, 6, 1]));
        assert_eq!(t.big_d, ints(&[7, 28, 21]));
    }

    #[test]
    fn endpoints_and_certificate_pattern() {
        for n in 1..=20 {
            let t = ck_table(n).unwrap();
            assert_eq!(t.c[0], BigInt::one(), "C_0 for n={n}");
            assert_eq!(t.c[n as usize], BigInt::one(), "C_n for n={n}");
            for (k, d) in t.d_small.iter().enumerate() {
                let expected = if k % 2 == 0 { 2 } else { -2 };
                assert_eq!(d, &BigInt::from(expected), "d_{} for n={n}", k + 1);
            }
        }
    }

    #[test]
    fn positivity_for_small_n() {
        for n in 1..=5 {
            let t = ck_table(n).unwrap();
            let p = dk_positivity(&t);
            assert!(p.all_positive, "n={n}");
        }
    }

    #[test]
    fn positivity_detects_violations() {
        // synthetic table: C = [1, 10] for n = 1 gives D_0 = 4 - 10 < 0
        let t = CoefficientTable {
            n: 1,
            c: ints(&[1, 10]),
            d_small: ints(&[2]),
            big_d: ints(&[-6]),
        };
        let p = dk_positivity(&t);
        assert!(!p.all_positive);
        assert_eq!(p.first_violation, Some(0));
    }

    #[test]
    fn identity_holds_for_small_n() {
        for n in [1, 2, 8] {
            let check = poly_identity_check(n).unwrap();
            assert!(check.holds, "n={n}: {:?}", check.mismatches);
        }
    }

    #[test]
    fn substituted_family_polynomial_is_alternating_sum() {
        // F_n(z1^2 - z2^2, 2 z1 z2) = sum_{k=0}^{2n} (-1)^k z1^(2k) z2^(4n-2k);
        // checked multiplied through by (z1^2 + z2^2), which telescopes the
        // alternating sum to the two extreme monomials
        for n in 1..=6u32 {
            let pulled = lc_pullback(&separability_poly(&ck_table(n).unwrap()));
            let mut alternating = BivariatePoly::zero();
            for k in 0..=2 * n {
                let sign = if k % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                alternating.add_term(2 * k, 4 * n - 2 * k, sign);
            }
            let z1sq = BivariatePoly::monomial(BigRational::one(), 2, 0);
            let z2sq = BivariatePoly::monomial(BigRational::one(), 0, 2);
            let product = z1sq.add(&z2sq).mul(&alternating);
            assert_eq!(pulled, product, "n={n}");
        }
    }

    #[test]
    fn identity_reports_mismatches_for_broken_table() {
        let mut table = ck_table(2).unwrap();
        table.c[1] = BigInt::from(4);
        let pulled = lc_pullback(&separability_poly(&table));
        let target = BivariatePoly::from_terms([
            ((10, 0), BigRational::one()),
            ((0, 10), BigRational::one()),
        ]);
        assert_ne!(pulled, target);
    }
}
