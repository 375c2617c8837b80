//! Arbitrary-precision kernels: modular powers, multiplicative orders, and
//! exact comparison of a rational against a rational power of an integer.
//!
//! Orders modulo a prime power `pi^t` never enumerate the group: the order
//! modulo `pi` is found by search and then lifted, each level multiplying by
//! 1 or `pi`, with the stable tail computed in closed form.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Reduced arbitrary-precision fraction; denominators are always positive.
pub type Rational = BigRational;

/// Largest denominator accepted for the exponent in [`compare_to_power`].
/// The comparison raises both sides to the denominator, so keeping it small
/// bounds the integer blow-up.
pub const MAX_POWER_DENOM: u64 = 8;

/// Default iteration cap for brute-force order searches.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// `base^exponent mod modulus` for naturals, `modulus >= 2`.
pub fn mod_pow(base: &BigUint, exponent: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if modulus < &BigUint::from(2u32) {
        return Err(Error::Domain(format!(
            "mod_pow requires modulus >= 2, got {modulus}"
        )));
    }
    Ok(base.modpow(exponent, modulus))
}

/// Deterministic Miller-Rabin for `u64` (the witness set below is exact for
/// all inputs < 3.3 * 10^24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mul_mod_u64(x, x, n);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Factor `n` by trial division; suitable for the `u64` inputs used here.
/// Returns (prime, exponent) pairs in increasing prime order.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All divisors of `n`, ascending.
fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

/// Order of `base` modulo the prime `pi`, by searching the divisors of
/// `pi - 1`.
fn order_mod_prime_u64(pi: u64, base: &BigUint) -> Result<BigUint> {
    let b = (base % BigUint::from(pi)).to_u64().unwrap();
    if b == 0 {
        return Err(Error::Domain(format!(
            "order undefined: base shares the factor {pi} with the modulus"
        )));
    }
    if pi == 2 || b == 1 {
        return Ok(BigUint::one());
    }
    for d in divisors_u64(pi - 1) {
        if pow_mod_u64(b, d, pi) == 1 {
            return Ok(BigUint::from(d));
        }
    }
    Err(Error::Internal(format!(
        "no order found for {b} mod prime {pi}"
    )))
}

/// `pi`-adic valuation of `x`, capped at `cap` (valuations at least `cap`
/// are reported as `cap`).
fn valuation_capped(x: &BigUint, pi: u64, cap: u64) -> u64 {
    let pi_big = BigUint::from(pi);
    let mut x = x.clone();
    let mut v = 0u64;
    while v < cap {
        let (q, r) = x.div_rem(&pi_big);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    v
}

/// Multiplicative order of `base` modulo `pi^t` (`pi` prime, `t >= 1`,
/// `gcd(base, pi) = 1`).
///
/// The order modulo `pi` is found by divisor search; each further level
/// multiplies the order by 1 or `pi`, and the level where the factor `pi`
/// sets in permanently is read off from a valuation, so the cost does not
/// grow with the group size.
pub fn multiplicative_order_prime_power(pi: u64, t: u64, base: &BigUint) -> Result<BigUint> {
    if !is_prime_u64(pi) {
        return Err(Error::Domain(format!("{pi} is not prime")));
    }
    if t == 0 {
        return Err(Error::Domain("prime-power exponent must be >= 1".into()));
    }
    if (base % BigUint::from(pi)).is_zero() {
        return Err(Error::Domain(format!(
            "order undefined: base shares the factor {pi} with the modulus"
        )));
    }
    if pi == 2 {
        // ord(b mod 2^t) from d = v2(b-1), e = v2(b+1):
        //   v2(b^(2^s) - 1) = d for s = 0 and d + e + s - 1 for s >= 1.
        let one = BigUint::one();
        if base.is_one() {
            return Ok(one);
        }
        let d = valuation_capped(&(base - 1u32), 2, t);
        if d >= t {
            return Ok(one);
        }
        let e = valuation_capped(&(base + 1u32), 2, t + 1);
        if d + e >= t {
            return Ok(BigUint::from(2u32));
        }
        let s = t - d - e + 1;
        return Ok(BigUint::from(2u32).pow(u32::try_from(s).map_err(|_| {
            Error::Range(format!("order exponent {s} too large"))
        })?));
    }
    let omega = order_mod_prime_u64(pi, base)?;
    if t == 1 {
        return Ok(omega);
    }
    let t_u32 = u32::try_from(t).map_err(|_| Error::Range(format!("exponent {t} too large")))?;
    let modulus = BigUint::from(pi).pow(t_u32);
    let g = base.modpow(&omega, &modulus);
    // c = valuation of base^omega - 1 at pi, capped at t; the order modulo
    // pi^j stays omega for j <= c and gains one factor pi per level after.
    let c = if g.is_one() {
        t
    } else {
        valuation_capped(&(&g - 1u32), pi, t)
    };
    if c == 0 {
        return Err(Error::Internal(format!(
            "base^omega != 1 mod {pi}: omega is not the order"
        )));
    }
    let lift = u32::try_from(t - c).map_err(|_| Error::Range("lift exponent too large".into()))?;
    Ok(omega * BigUint::from(pi).pow(lift))
}

/// Multiplicative order of `base` modulo `modulus` (`modulus >= 2`, base
/// coprime to it).
///
/// Prime-power moduli up to `u64` are detected and routed to
/// [`multiplicative_order_prime_power`]; anything else falls back to a
/// brute-force search capped at `cap` iterations.
pub fn multiplicative_order_with_cap(
    modulus: &BigUint,
    base: &BigUint,
    cap: u64,
) -> Result<BigUint> {
    if modulus < &BigUint::from(2u32) {
        return Err(Error::Domain(format!(
            "order requires modulus >= 2, got {modulus}"
        )));
    }
    if !base.gcd(modulus).is_one() {
        return Err(Error::Domain(format!(
            "order undefined: gcd(base, modulus) = {} != 1",
            base.gcd(modulus)
        )));
    }
    if let Some(m) = modulus.to_u64() {
        let factors = factor_u64(m);
        if factors.len() == 1 {
            let (pi, e) = factors[0];
            return multiplicative_order_prime_power(pi, e as u64, base);
        }
    }
    let base = base % modulus;
    let mut acc = base.clone();
    let mut k = 1u64;
    while k <= cap {
        if acc.is_one() {
            return Ok(BigUint::from(k));
        }
        acc = (&acc * &base) % modulus;
        k += 1;
    }
    Err(Error::CapExceeded(format!(
        "no order of {base} mod {modulus} within {cap} iterations"
    )))
}

/// [`multiplicative_order_with_cap`] with the default cap.
pub fn multiplicative_order(modulus: &BigUint, base: &BigUint) -> Result<BigUint> {
    multiplicative_order_with_cap(modulus, base, DEFAULT_ORDER_CAP)
}

/// Compare a positive rational `r` with `q^(-tau)` exactly.
///
/// `tau = a/b` must be positive with `b <=` [`MAX_POWER_DENOM`]; the result
/// is the ordering of `r` relative to `q^(-a/b)`, decided by the integer
/// comparison `numer(r)^b * q^a` versus `denom(r)^b`.
pub fn compare_to_power(r: &Rational, q: &BigUint, tau: &Rational) -> Result<Ordering> {
    if !r.is_positive() {
        return Err(Error::Domain(format!("compare_to_power requires r > 0, got {r}")));
    }
    compare_frac_to_power(r.numer().magnitude(), r.denom().magnitude(), q, tau)
}

/// [`compare_to_power`] on an unreduced fraction `num/den`, so callers with
/// very large components never pay for a gcd reduction.
pub fn compare_frac_to_power(
    num: &BigUint,
    den: &BigUint,
    q: &BigUint,
    tau: &Rational,
) -> Result<Ordering> {
    if den.is_zero() {
        return Err(Error::Domain("compare_frac_to_power requires den > 0".into()));
    }
    if num.is_zero() {
        return Err(Error::Domain("compare_frac_to_power requires num > 0".into()));
    }
    if !tau.is_positive() {
        return Err(Error::Domain(format!("compare_to_power requires tau > 0, got {tau}")));
    }
    if q.is_zero() {
        return Err(Error::Domain("compare_to_power requires q >= 1".into()));
    }
    let b = tau
        .denom()
        .to_u64()
        .filter(|b| *b <= MAX_POWER_DENOM)
        .ok_or_else(|| {
            Error::Domain(format!(
                "tau denominator {} exceeds the supported bound {MAX_POWER_DENOM}",
                tau.denom()
            ))
        })?;
    let b = b as u32;
    let a = tau
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Range(format!("tau numerator {} too large", tau.numer())))?;
    let lhs = num.pow(b) * q.pow(a);
    let rhs = den.pow(b);
    Ok(lhs.cmp(&rhs))
}

/// Natural log of a positive big integer, via the leading 53 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Decimal digit count of `x` (0 has one digit), without converting the
/// whole number to a string.
pub fn decimal_digits(x: &BigUint) -> u64 {
    if x.is_zero() {
        return 1;
    }
    let est = (ln_biguint(x) / std::f64::consts::LN_10).floor() as u64;
    // ln-based estimate can be off by one near powers of ten; settle exactly.
    let mut digits = est.max(1);
    let ten = BigUint::from(10u32);
    let mut bound = BigUint::from(10u32).pow(u32::try_from(digits).unwrap_or(u32::MAX));
    while bound <= *x {
        digits += 1;
        bound *= &ten;
    }
    digits
}

/// Parse a rational from `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("cannot parse rational {s:?}: {e}")))
}

/// Rational from an integer pair.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
