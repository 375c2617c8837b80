//! Fixed-point decimal intervals with directed rounding.
//!
//! Endpoints are integers at scale `10^prec`, so every interval is an exact
//! pair of decimal numbers and every rounding step is outward. Used where a
//! quantity like `q^(a/b)` is irrational but a certified decimal enclosure
//! of a sum or comparison is still required.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;
use crate::{Error, Result};

/// Closed interval `[lo/10^prec, hi/10^prec]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

impl DecimalInterval {
    pub fn zero(prec: u32) -> Self {
        DecimalInterval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            prec,
        }
    }

    /// Tightest interval at this scale containing the rational `r`.
    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        DecimalInterval {
            lo: scale_floor(r, prec),
            hi: scale_ceil(r, prec),
            prec,
        }
    }

    /// Interval sum; both operands must share a scale.
    pub fn add_assign(&mut self, other: &DecimalInterval) {
        assert_eq!(self.prec, other.prec, "mismatched scales");
        self.lo += &other.lo;
        self.hi += &other.hi;
    }

    /// Certified enclosure of `base^(num/den)` for an integer `base >= 1`
    /// and rational exponent of either sign.
    pub fn pow_of_uint(base: &BigUint, exp: &Rational, prec: u32) -> Result<Self> {
        if base.is_zero() {
            return Err(Error::Domain("power base must be positive".into()));
        }
        let one_scaled = BigInt::from(pow10(prec));
        if base.is_one() || exp.is_zero() {
            return Ok(DecimalInterval {
                lo: one_scaled.clone(),
                hi: one_scaled,
                prec,
            });
        }
        let b = exp
            .denom()
            .to_u32()
            .filter(|&b| b >= 1 && b <= 4096)
            .ok_or_else(|| Error::Range(format!("exponent denominator {} too large", exp.denom())))?;
        let a = exp
            .numer()
            .magnitude()
            .to_u32()
            .filter(|&a| a <= 1 << 20)
            .ok_or_else(|| Error::Range(format!("exponent numerator {} too large", exp.numer())))?;
        let x = base.pow(a);
        let scale = pow10(prec).pow(b);
        let (n, exact_div) = if exp.numer().is_positive() {
            (&x * &scale, true)
        } else {
            let (q, r) = scale.div_rem(&x);
            (q, r.is_zero())
        };
        // floor(y^(1/b)) = floor(floor(y)^(1/b)) because b-th powers of
        // integers are integers, so the truncated radicand loses nothing.
        let root = n.nth_root(b);
        let exact = exact_div && root.pow(b) == n;
        let lo = BigInt::from(root);
        let hi = if exact { lo.clone() } else { &lo + 1 };
        Ok(DecimalInterval { lo, hi, prec })
    }

    /// Interval product, outward rounding; both operands must be
    /// non-negative and share a scale.
    pub fn mul(&self, other: &DecimalInterval) -> DecimalInterval {
        assert_eq!(self.prec, other.prec, "mismatched scales");
        assert!(
            !self.lo.is_negative() && !other.lo.is_negative(),
            "product defined for non-negative intervals"
        );
        let scale = BigInt::from(pow10(self.prec));
        DecimalInterval {
            lo: (&self.lo * &other.lo).div_floor(&scale),
            hi: (&self.hi * &other.hi).div_ceil(&scale),
            prec: self.prec,
        }
    }

    /// Interval quotient, outward rounding; numerator non-negative,
    /// denominator strictly positive.
    pub fn div(&self, other: &DecimalInterval) -> DecimalInterval {
        assert_eq!(self.prec, other.prec, "mismatched scales");
        assert!(
            !self.lo.is_negative() && other.lo.is_positive(),
            "quotient defined for non-negative over positive intervals"
        );
        let scale = BigInt::from(pow10(self.prec));
        DecimalInterval {
            lo: (&self.lo * &scale).div_floor(&other.hi),
            hi: (&self.hi * &scale).div_ceil(&other.lo),
            prec: self.prec,
        }
    }

    /// Width in units of the last place.
    pub fn ulp_width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Decimal renderings of both endpoints.
    pub fn to_strings(&self) -> (String, String) {
        (
            format_scaled(&self.lo, self.prec),
            format_scaled(&self.hi, self.prec),
        )
    }
}

/// `10^prec` as an unsigned integer.
pub fn pow10(prec: u32) -> BigUint {
    BigUint::from(10u32).pow(prec)
}

/// Largest integer `<= r * 10^prec`.
pub fn scale_floor(r: &Rational, prec: u32) -> BigInt {
    (r.numer() * BigInt::from(pow10(prec))).div_floor(r.denom())
}

/// Smallest integer `>= r * 10^prec`.
pub fn scale_ceil(r: &Rational, prec: u32) -> BigInt {
    (r.numer() * BigInt::from(pow10(prec))).div_ceil(r.denom())
}

/// Render `x / 10^prec` as a plain decimal string.
pub fn format_scaled(x: &BigInt, prec: u32) -> String {
    let ten = BigInt::from(pow10(prec));
    let mag = BigInt::from(x.magnitude().clone());
    let (int, frac) = mag.div_rem(&ten);
    let sign = if x.is_negative() { "-" } else { "" };
    if prec == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>width$}", width = prec as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn ratio(n: i64, d: i64) -> Rational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn scaling_rounds_outward() {
        let r = ratio(1, 3);
        assert_eq!(scale_floor(&r, 4), BigInt::from(3333));
        assert_eq!(scale_ceil(&r, 4), BigInt::from(3334));
        let neg = ratio(-1, 3);
        assert_eq!(scale_floor(&neg, 4), BigInt::from(-3334));
        assert_eq!(scale_ceil(&neg, 4), BigInt::from(-3333));
        // exact values collapse to a point
        assert_eq!(scale_floor(&ratio(5, 4), 2), scale_ceil(&ratio(5, 4), 2));
    }

    #[test]
    fn sqrt_two_digits() {
        // 2^(1/2) = 1.4142135623...
        let iv = DecimalInterval::pow_of_uint(&BigUint::from(2u32), &ratio(1, 2), 10).unwrap();
        assert_eq!(iv.lo, BigInt::from(14142135623i64));
        assert_eq!(iv.hi, BigInt::from(14142135624i64));
        assert_eq!(iv.to_strings().0, "1.4142135623");
    }

    #[test]
    fn exact_powers_collapse() {
        // 4^(3/2) = 8 exactly
        let iv = DecimalInterval::pow_of_uint(&BigUint::from(4u32), &ratio(3, 2), 6).unwrap();
        assert_eq!(iv.lo, iv.hi);
        assert_eq!(iv.to_strings().0, "8.000000");
        // 2^-3 = 0.125 exactly
        let iv = DecimalInterval::pow_of_uint(&BigUint::from(2u32), &ratio(-3, 1), 6).unwrap();
        assert_eq!(iv.lo, iv.hi);
        assert_eq!(iv.to_strings().0, "0.125000");
    }

    #[test]
    fn negative_fractional_exponents_match_f64() {
        // 3^(-5/2) = 0.0641500299...
        let iv = DecimalInterval::pow_of_uint(&BigUint::from(3u32), &ratio(-5, 2), 12).unwrap();
        assert!(iv.ulp_width() <= BigInt::from(1));
        let lo = iv.lo.to_f64().unwrap() / 1e12;
        let value = 3f64.powf(-2.5);
        assert!((lo - value).abs() < 1e-9, "lo {} vs {}", lo, value);
    }

    #[test]
    fn interval_sum_accumulates_width() {
        let mut acc = DecimalInterval::zero(8);
        for q in 2u32..=10 {
            let term =
                DecimalInterval::pow_of_uint(&BigUint::from(q), &ratio(-3, 2), 8).unwrap();
            acc.add_assign(&term);
        }
        assert!(acc.lo <= acc.hi);
        assert!(acc.ulp_width() <= BigInt::from(9)); // one ulp per term
        let mid = acc.lo.to_f64().unwrap() / 1e8;
        let direct: f64 = (2..=10).map(|q| (q as f64).powf(-1.5)).sum();
        assert!((mid - direct).abs() < 1e-6);
    }

    #[test]
    fn products_and_quotients_round_outward() {
        let a = DecimalInterval::pow_of_uint(&BigUint::from(2u32), &ratio(1, 2), 10).unwrap();
        let sq = a.mul(&a); // contains 2 exactly
        let two = BigInt::from(2) * BigInt::from(pow10(10));
        assert!(sq.lo <= two && two <= sq.hi);
        assert!(sq.ulp_width() <= BigInt::from(5));
        let q = a.div(&a); // contains 1
        let one = BigInt::from(pow10(10));
        assert!(q.lo <= one && one <= q.hi);
    }

    #[test]
    fn formatting_handles_signs_and_zero_prec() {
        assert_eq!(format_scaled(&BigInt::from(-5), 1), "-0.5");
        assert_eq!(format_scaled(&BigInt::from(1205), 2), "12.05");
        assert_eq!(format_scaled(&BigInt::from(7), 0), "7");
    }
}
