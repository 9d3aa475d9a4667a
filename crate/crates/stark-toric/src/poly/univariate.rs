use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense univariate polynomial with exact rational coefficients,
/// lowest degree first. The highest stored coefficient is nonzero unless
/// the polynomial is zero (empty coefficient list).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnivariatePoly {
    coeffs: Vec<BigRational>,
}

/// Sign of a polynomial over an interval, as classified by
/// [`UnivariatePoly::sign_on_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignClass {
    Positive,
    Negative,
    /// The zero polynomial.
    Zero,
    /// The polynomial has a root inside the interval (or vanishes at the
    /// right endpoint); no uniform strict sign is claimed.
    Mixed,
}

impl UnivariatePoly {
    /// Builds a polynomial from coefficients (lowest first), trimming
    /// trailing zeros.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// `c * u^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact sign at a rational point: -1, 0, or +1.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Reinterprets a polynomial in `z` that contains only even powers as a
    /// polynomial in `u = z^2`. Returns `None` if any odd-power coefficient
    /// is nonzero.
    pub fn even_powers_to_u(&self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len() / 2 + 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % 2 == 0 {
                out.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Self::new(out))
    }

    /// Remainder of `self` divided by `div` over the rationals.
    fn rem(&self, div: &Self) -> Self {
        let d = div.degree().expect("division by zero polynomial");
        let lead = div.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let q = r.last().unwrap() / &lead;
            let shift = r.len() - 1 - d;
            for k in 0..=d {
                let sub = &q * &div.coeffs[k];
                r[shift + k] -= sub;
            }
            // the top coefficient cancels exactly
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Sturm chain `p, p', -rem(...), ...`.
    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            if chain[n - 1].degree() == Some(0) {
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_variations(chain: &[Self], x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut variations = 0;
        for p in chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    variations += 1;
                }
                last = s;
            }
        }
        variations
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`,
    /// by Sturm's theorem. The zero polynomial reports zero roots.
    pub fn count_roots_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if self.is_zero() || self.degree() == Some(0) {
            return 0;
        }
        let chain = self.sturm_chain();
        let v_lo = Self::sign_variations(&chain, lo);
        let v_hi = Self::sign_variations(&chain, hi);
        v_lo.saturating_sub(v_hi)
    }

    /// Cauchy bound: every real root has absolute value below the returned
    /// value. Returns 1 for constants and the zero polynomial.
    pub fn root_bound(&self) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::one();
        };
        if d == 0 {
            return BigRational::one();
        }
        let lead = self.coeffs[d].abs();
        let mut max = BigRational::zero();
        for c in &self.coeffs[..d] {
            let r = c.abs() / &lead;
            if r > max {
                max = r;
            }
        }
        BigRational::one() + max
    }

    /// Classifies the sign of the polynomial on the interval `(lo, hi]`.
    ///
    /// The classification is exact: if no root lies in the interval the
    /// strict sign at `hi` holds throughout; otherwise `Mixed` is reported
    /// without attempting to distinguish touching roots from crossings.
    pub fn sign_on_interval(&self, lo: &BigRational, hi: &BigRational) -> SignClass {
        if self.is_zero() {
            return SignClass::Zero;
        }
        if self.count_roots_in(lo, hi) > 0 {
            return SignClass::Mixed;
        }
        match self.sign_at(hi) {
            1 => SignClass::Positive,
            -1 => SignClass::Negative,
            _ => SignClass::Mixed,
        }
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            if !unit || k == 0 {
                write!(f, "{}", mag)?;
            }
            let sep = if unit || mag.is_integer() { "" } else { "*" };
            match k {
                0 => {}
                1 => write!(f, "{sep}u")?,
                _ => write!(f, "{sep}u^{k}")?,
            }
        }
        Ok(())
    }
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
    fn trailing_zeros_are_trimmed() {
        let p = UnivariatePoly::new(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(UnivariatePoly::new(vec![int(0)]).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        // p = 2u - u^3, p' = 2 - 3u^2
        let p = UnivariatePoly::from_integers(&[0, 2, 0, -1]);
        let dp = p.derivative();
        assert_eq!(dp, UnivariatePoly::from_integers(&[2, 0, -3]));
        assert_eq!(p.eval(&int(2)), int(-4));
        assert_eq!(dp.eval(&rat(1, 2)), rat(5, 4));
    }

    #[test]
    fn remainder_is_exact() {
        // (u^3 - 1) mod (u - 1) = 0; (u^3) mod (u^2 + 1) = -u
        let a = UnivariatePoly::from_integers(&[-1, 0, 0, 1]);
        let b = UnivariatePoly::from_integers(&[-1, 1]);
        assert!(a.rem(&b).is_zero());
        let c = UnivariatePoly::from_integers(&[0, 0, 0, 1]);
        let d = UnivariatePoly::from_integers(&[1, 0, 1]);
        assert_eq!(c.rem(&d), UnivariatePoly::from_integers(&[0, -1]));
    }

    #[test]
    fn sturm_counts_roots() {
        // 2 - 3u^2 has one positive root at sqrt(2/3)
        let p = UnivariatePoly::from_integers(&[2, 0, -3]);
        assert_eq!(p.count_roots_in(&int(0), &int(10)), 1);
        assert_eq!(p.count_roots_in(&int(1), &int(10)), 0);
        // (u-1)(u-2)(u-3)
        let q = UnivariatePoly::from_integers(&[-6, 11, -6, 1]);
        assert_eq!(q.count_roots_in(&int(0), &int(10)), 3);
        assert_eq!(q.count_roots_in(&rat(3, 2), &rat(5, 2)), 1);
        // root exactly at the right endpoint is counted
        assert_eq!(q.count_roots_in(&int(0), &int(1)), 1);
    }

    #[test]
    fn root_bound_contains_roots() {
        let q = UnivariatePoly::from_integers(&[-6, 11, -6, 1]);
        let b = q.root_bound();
        assert!(b > int(3));
        assert_eq!(q.count_roots_in(&(-b.clone()), &b), 3);
    }

    #[test]
    fn sign_classification() {
        let p = UnivariatePoly::from_integers(&[2, 0, -3]); // 2 - 3u^2
        assert_eq!(p.sign_on_interval(&int(0), &rat(1, 2)), SignClass::Positive);
        assert_eq!(p.sign_on_interval(&int(1), &int(2)), SignClass::Negative);
        assert_eq!(p.sign_on_interval(&int(0), &int(2)), SignClass::Mixed);
        assert_eq!(
            UnivariatePoly::zero().sign_on_interval(&int(0), &int(1)),
            SignClass::Zero
        );
    }

    #[test]
    fn even_powers_reinterpretation() {
        // z^4 - 2 z^2 in z becomes u^2 - 2u in u
        let p = UnivariatePoly::from_integers(&[0, 0, -2, 0, 1]);
        let u = p.even_powers_to_u().unwrap();
        assert_eq!(u, UnivariatePoly::from_integers(&[0, -2, 1]));
        let odd = UnivariatePoly::from_integers(&[0, 1]);
        assert!(odd.even_powers_to_u().is_none());
    }

    #[test]
    fn display_reads_naturally() {
        let p = UnivariatePoly::new(vec![int(0), int(2), int(0), int(-1)]);
        assert_eq!(p.to_string(), "2u - u^3");
        let q = UnivariatePoly::new(vec![int(0), rat(1, 2), rat(-3, 4)]);
        assert_eq!(q.to_string(), "1/2*u - 3/4*u^2");
    }
}
