use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::Zero;

use super::univariate::UnivariatePoly;

/// A sparse bivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by the exponent pair `(e1, e2)`; zero coefficients are
/// never stored, so structural equality is semantic equality. The
/// `BTreeMap` keeps term order deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single term `c * x^e1 * y^e2`. A zero coefficient yields the zero polynomial.
    pub fn monomial(c: BigRational, e1: u32, e2: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(e1, e2, c);
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigRational)>,
    {
        let mut p = Self::zero();
        for ((e1, e2), c) in terms {
            p.add_term(e1, e2, c);
        }
        p
    }

    /// Adds `c * x^e1 * y^e2` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e1: u32, e2: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((e1, e2)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(e1, e2));
        }
    }

    pub fn coeff(&self, e1: u32, e2: u32) -> BigRational {
        self.terms
            .get(&(e1, e2))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Terms in ascending `(e1, e2)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(e1, e2), c) in other.terms() {
            out.add_term(e1, e2, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(e1, e2), c) in other.terms() {
            out.add_term(e1, e2, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (&(e1, e2), c) in self.terms() {
            out.add_term(e1, e2, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (&(e1, e2), k) in self.terms() {
            out.add_term(e1, e2, k * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, a2), ca) in self.terms() {
            for (&(b1, b2), cb) in other.terms() {
                out.add_term(a1 + b1, a2 + b2, ca * cb);
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(e1, e2), c) in self.terms() {
            acc += c * x.pow(e1 as i32) * y.pow(e2 as i32);
        }
        acc
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(e1, e2), c) in self.terms() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            if e1 > 0 {
                write!(f, "*x^{}", e1)?;
            }
            if e2 > 0 {
                write!(f, "*y^{}", e2)?;
            }
        }
        Ok(())
    }
}

/// Error returned by [`split_separable`] for a polynomial with a surviving
/// mixed monomial `z1^e1 * z2^e2`, `e1 > 0`, `e2 > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotSeparable {
    pub exponents: (u32, u32),
    pub coeff: BigRational,
}

impl fmt::Display for NotSeparable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mixed monomial ({}) * z1^{} * z2^{} survives the pullback",
            self.coeff, self.exponents.0, self.exponents.1
        )
    }
}

impl std::error::Error for NotSeparable {}

/// Expands `(z1^2 + z2^2) * G(z1^2 - z2^2, 2 z1 z2)` exactly.
///
/// This is the composition of the potential term with the cotangent lift of
/// the complex squaring map, times the factor that reparametrizes time on
/// the energy level. Each input monomial `c * q1^e1 * q2^e2` contributes
/// `c * (z1^2 - z2^2)^e1 * (2 z1 z2)^e2 * (z1^2 + z2^2)`, expanded by the
/// binomial theorem. Output term order is the map order, hence deterministic.
pub fn lc_pullback(g: &BivariatePoly) -> BivariatePoly {
    let mut inner = BivariatePoly::zero();
    for (&(e1, e2), c) in g.terms() {
        // (2 z1 z2)^e2 = 2^e2 * z1^e2 * z2^e2
        let two_pow: BigInt = BigInt::from(2).pow(e2);
        let base = c * BigRational::from_integer(two_pow);
        // (z1^2 - z2^2)^e1 = sum_j C(e1, j) (-1)^j z1^(2(e1-j)) z2^(2j)
        for j in 0..=e1 {
            let mut k = BigRational::from_integer(binomial(BigInt::from(e1), BigInt::from(j)));
            if j % 2 == 1 {
                k = -k;
            }
            inner.add_term(2 * (e1 - j) + e2, 2 * j + e2, &base * k);
        }
    }
    let mut out = BivariatePoly::zero();
    for (&(e1, e2), c) in inner.terms() {
        out.add_term(e1 + 2, e2, c.clone());
        out.add_term(e1, e2 + 2, c.clone());
    }
    out
}

/// Splits `P(z1, z2)` as `G1(z1) + G2(z2)` if no mixed monomial survives.
///
/// The constant term is assigned to `G1`, so `G2(0) = 0`; this makes the
/// split deterministic. Fails with the first offending mixed monomial in
/// term order.
pub fn split_separable(
    p: &BivariatePoly,
) -> Result<(UnivariatePoly, UnivariatePoly), NotSeparable> {
    for (&(e1, e2), c) in p.terms() {
        if e1 > 0 && e2 > 0 {
            return Err(NotSeparable {
                exponents: (e1, e2),
                coeff: c.clone(),
            });
        }
    }
    let mut g1 = vec![BigRational::zero(); 1];
    let mut g2 = vec![BigRational::zero(); 1];
    for (&(e1, e2), c) in p.terms() {
        if e2 == 0 {
            // pure z1 power, including the constant term
            if g1.len() <= e1 as usize {
                g1.resize(e1 as usize + 1, BigRational::zero());
            }
            g1[e1 as usize] = c.clone();
        } else {
            if g2.len() <= e2 as usize {
                g2.resize(e2 as usize + 1, BigRational::zero());
            }
            g2[e2 as usize] = c.clone();
        }
    }
    Ok((UnivariatePoly::new(g1), UnivariatePoly::new(g2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn pullback_of_zero_is_zero() {
        assert!(lc_pullback(&BivariatePoly::zero()).is_zero());
    }

    #[test]
    fn pullback_of_linear_term_is_stark_expansion() {
        // G = q1  ->  (z1^2 + z2^2)(z1^2 - z2^2) = z1^4 - z2^4
        let g = BivariatePoly::monomial(int(1), 1, 0);
        let p = lc_pullback(&g);
        let expected = BivariatePoly::from_terms([((4, 0), int(1)), ((0, 4), int(-1))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn pullback_of_frozen_hill_potential() {
        // G = q1^2 + q2^2/4  ->  z1^6 + z2^6
        let g = BivariatePoly::from_terms([((2, 0), int(1)), ((0, 2), rat(1, 4))]);
        let p = lc_pullback(&g);
        let expected = BivariatePoly::from_terms([((6, 0), int(1)), ((0, 6), int(1))]);
        assert_eq!(p, expected);
    }

    #[test]
    fn split_zero() {
        let (g1, g2) = split_separable(&BivariatePoly::zero()).unwrap();
        assert!(g1.is_zero());
        assert!(g2.is_zero());
    }

    #[test]
    fn split_assigns_constant_to_first_half() {
        let p = BivariatePoly::from_terms([((0, 0), int(5)), ((0, 2), int(3))]);
        let (g1, g2) = split_separable(&p).unwrap();
        assert_eq!(g1.coeff(0), int(5));
        assert_eq!(g2.coeff(0), int(0));
        assert_eq!(g2.coeff(2), int(3));
    }

    #[test]
    fn split_rejects_mixed_monomial() {
        // pullback of q1*q2 contains z1^5 z2 etc.
        let g = BivariatePoly::monomial(int(1), 1, 1);
        let p = lc_pullback(&g);
        let err = split_separable(&p).unwrap_err();
        assert!(err.exponents.0 > 0 && err.exponents.1 > 0);
    }

    #[test]
    fn pullback_matches_direct_evaluation() {
        // spot-check the expansion numerically at a rational point
        let g = BivariatePoly::from_terms([
            ((2, 0), rat(3, 7)),
            ((1, 2), rat(-2, 5)),
            ((0, 3), int(4)),
        ]);
        let p = lc_pullback(&g);
        let z1 = rat(3, 2);
        let z2 = rat(-1, 3);
        let q1 = z1.pow(2) - z2.pow(2);
        let q2 = int(2) * &z1 * &z2;
        let direct = (z1.pow(2) + z2.pow(2)) * g.eval(&q1, &q2);
        assert_eq!(p.eval(&z1, &z2), direct);
    }
}
