//! Denominator sets closed under divisors.
//!
//! A set `Q ⊆ ℕ*` is *free* when membership is the divisibility fixed
//! point: `q ∈ Q` iff no non-member divides `q`. Equivalently, `Q` contains
//! 1 and is closed under divisors. The module provides the standard
//! families (k-th-power-free, coprime-to-m, B-free) plus explicit tables
//! for tests, and interrogates them: exact membership, range sieves, the
//! fixed-point verifier, prime support, the exponent of convergence of
//! `Σ q^{-ν}`, and partial Euler-product sandwiches with certified
//! orderings.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::decimal::DecimalInterval;
use crate::exact::{factor_u64, Rational};
use crate::{Error, Result};

/// Membership rule beyond an explicit table's listed range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailRule {
    /// Nothing declared: queries beyond the table are domain errors.
    Undeclared,
    /// No members beyond the table.
    Empty,
    /// Beyond the table, members are exactly the powers of `base`.
    PowersOf(u64),
}

/// Finite membership table on `[1, n_max]` with a declared tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTable {
    members: BTreeSet<u64>,
    n_max: u64,
    tail: TailRule,
}

/// A denominator-set rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeSetSpec {
    /// Integers with no k-th-power divisor > 1.
    KFree(u32),
    /// Integers coprime to a fixed modulus.
    CoprimeTo(u64),
    /// Integers divisible by no element of the list.
    BFree(Vec<u64>),
    /// Explicit table, for tests and degenerate sets.
    Table(ExplicitTable),
}

/// Result of the fixed-point check `q ∈ Q ⇔ no non-member divides q`.
#[derive(Clone, Debug, Serialize)]
pub struct FreeReport {
    pub spec: String,
    pub n: u64,
    /// Members with a non-member divisor (the only way the biconditional
    /// can fail, since a non-member divides itself).
    pub violations: Vec<u64>,
}

impl FreeReport {
    pub fn is_free(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Primes classified by whether they divide some member.
#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub p_bound: u64,
    pub confirmed: Vec<u64>,
    pub excluded: Vec<u64>,
    /// Primes the bounded multiple-scan could not classify.
    pub inconclusive: Vec<u64>,
}

/// Exponent of convergence of `Σ_{q ∈ Q} q^{-ν}`.
#[derive(Clone, Debug)]
pub struct ConvergenceExponent {
    pub value: ExponentValue,
    pub method: &'static str,
    pub diagnostics: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExponentValue {
    Exact(Rational),
    Fitted {
        slope: f64,
        max_residual: f64,
        counts: Vec<(u64, u64)>,
    },
    /// Support structure not recognized; callers should fall back to the
    /// counting fit.
    UnknownExact,
}

/// The three quantities of the support sandwich
/// `Σ_{π ≤ P} π^{-ν} ≤ Σ_{q ≤ P} q^{-ν} ≤ Π_{π ≤ P} (1 + 1/(π^ν − 1))`
/// with certified orderings.
#[derive(Clone, Debug)]
pub struct EulerReport {
    pub spec: String,
    pub nu: Rational,
    pub p_bound: u64,
    pub precision: u32,
    pub left_sum: DecimalInterval,
    pub q_partial_sum: DecimalInterval,
    pub right_product: DecimalInterval,
    /// Left ordering, certified structurally (support primes are members)
    /// or by interval separation.
    pub left_le_middle: bool,
    /// Right ordering, certified when every member's prime factors appear
    /// in the confirmed support (then the sum is a sub-sum of the product
    /// expansion) or by interval separation.
    pub middle_le_right: bool,
    pub support_inconclusive: usize,
}

const DEFAULT_SCAN_BOUND: u64 = 1_000_000;

/// Largest modulus accepted for membership queries that need a complete
/// factorization by trial division.
const FACTOR_LIMIT: u64 = 1_000_000_000_000;

impl FreeSetSpec {
    pub fn kfree(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("power-free order must be >= 2, got {k}")));
        }
        Ok(FreeSetSpec::KFree(k))
    }

    pub fn coprime_to(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("coprimality modulus must be >= 2, got {m}")));
        }
        Ok(FreeSetSpec::CoprimeTo(m))
    }

    pub fn bfree(b: impl IntoIterator<Item = u64>) -> Result<Self> {
        let set: BTreeSet<u64> = b.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&x| x < 2) {
            return Err(Error::Domain(format!("excluded divisor {bad} must be >= 2")));
        }
        Ok(FreeSetSpec::BFree(set.into_iter().collect()))
    }

    /// Build an explicit table; 1 must be listed and all members must lie
    /// in `[1, n_max]`. Divisor-closedness is *not* required here — that is
    /// what [`FreeSetSpec::verify_free_property`] checks.
    pub fn table(
        members: impl IntoIterator<Item = u64>,
        n_max: u64,
        tail: TailRule,
    ) -> Result<Self> {
        let members: BTreeSet<u64> = members.into_iter().collect();
        if !members.contains(&1) {
            return Err(Error::Domain("a free set must contain 1".into()));
        }
        if let Some(&bad) = members.iter().find(|&&q| q == 0 || q > n_max) {
            return Err(Error::Domain(format!(
                "table member {bad} outside [1, {n_max}]"
            )));
        }
        if let TailRule::PowersOf(base) = tail {
            if base < 2 {
                return Err(Error::Domain(format!("tail power base {base} must be >= 2")));
            }
        }
        Ok(FreeSetSpec::Table(ExplicitTable {
            members,
            n_max,
            tail,
        }))
    }

    /// Exact membership test.
    pub fn member(&self, q: u64) -> Result<bool> {
        if q == 0 {
            return Err(Error::Domain("membership is defined on positive integers".into()));
        }
        match self {
            FreeSetSpec::KFree(k) => {
                if q > FACTOR_LIMIT {
                    return Err(Error::Range(format!(
                        "power-free membership needs a full factorization; {q} exceeds {FACTOR_LIMIT}"
                    )));
                }
                Ok(factor_u64(q).iter().all(|&(_, e)| e < *k))
            }
            FreeSetSpec::CoprimeTo(m) => Ok(q.gcd(m) == 1),
            FreeSetSpec::BFree(b) => Ok(b.iter().all(|&d| q % d != 0)),
            FreeSetSpec::Table(t) => {
                if q <= t.n_max {
                    Ok(t.members.contains(&q))
                } else {
                    match t.tail {
                        TailRule::Undeclared => Err(Error::Domain(format!(
                            "table query {q} beyond {} with no declared tail",
                            t.n_max
                        ))),
                        TailRule::Empty => Ok(false),
                        TailRule::PowersOf(base) => {
                            let mut x = q;
                            while x % base == 0 {
                                x /= base;
                            }
                            Ok(x == 1)
                        }
                    }
                }
            }
        }
    }

    /// Membership bitmap on `[0, n]` (index 0 unused), built by sieving.
    pub fn membership_bitmap(&self, n: u64) -> Result<Vec<bool>> {
        let len = (n + 1) as usize;
        let mut bits = vec![true; len];
        bits[0] = false;
        let mark_multiples = |bits: &mut Vec<bool>, d: u64| {
            let mut x = d;
            while x <= n {
                bits[x as usize] = false;
                x += d;
            }
        };
        match self {
            FreeSetSpec::KFree(k) => {
                for pi in primes_up_to(n.nth_root(*k)) {
                    if let Some(pk) = pi.checked_pow(*k) {
                        if pk <= n {
                            mark_multiples(&mut bits, pk);
                        }
                    }
                }
            }
            FreeSetSpec::CoprimeTo(m) => {
                for (pi, _) in factor_u64(*m) {
                    if pi <= n {
                        mark_multiples(&mut bits, pi);
                    }
                }
            }
            FreeSetSpec::BFree(b) => {
                for &d in b {
                    if d <= n {
                        mark_multiples(&mut bits, d);
                    }
                }
            }
            FreeSetSpec::Table(t) => {
                if n > t.n_max && t.tail == TailRule::Undeclared {
                    return Err(Error::Domain(format!(
                        "table range {n} beyond {} with no declared tail",
                        t.n_max
                    )));
                }
                bits.iter_mut().for_each(|b| *b = false);
                for &q in &t.members {
                    if q <= n {
                        bits[q as usize] = true;
                    }
                }
                if let TailRule::PowersOf(base) = t.tail {
                    let mut x = 1u64;
                    while x <= n / base {
                        x *= base;
                        if x > t.n_max {
                            bits[x as usize] = true;
                        }
                    }
                }
            }
        }
        Ok(bits)
    }

    /// Members in `[1, n]`, ascending.
    pub fn range_members(&self, n: u64) -> Result<Vec<u64>> {
        let bits = self.membership_bitmap(n)?;
        Ok((1..=n).filter(|&q| bits[q as usize]).collect())
    }

    /// Check the fixed-point biconditional for all `q <= n`: a member may
    /// not have a non-member divisor, and every non-member trivially has
    /// one (itself). Violations are members with a non-member divisor.
    pub fn verify_free_property(&self, n: u64) -> Result<FreeReport> {
        if n < 1 {
            return Err(Error::Domain("verification range must be >= 1".into()));
        }
        let bits = self.membership_bitmap(n)?;
        let mut violations = BTreeSet::new();
        for v in 2..=n {
            if bits[v as usize] {
                continue;
            }
            let mut w = v;
            while w <= n {
                if bits[w as usize] {
                    violations.insert(w);
                }
                w += v;
            }
        }
        Ok(FreeReport {
            spec: self.to_string(),
            n,
            violations: violations.into_iter().collect(),
        })
    }

    /// Classify primes `<= p_bound` by whether they divide some member,
    /// scanning multiples up to the default bound where a rule table gives
    /// no shortcut.
    pub fn support_primes(&self, p_bound: u64) -> Result<SupportReport> {
        self.support_primes_with_scan(p_bound, DEFAULT_SCAN_BOUND.max(p_bound))
    }

    /// As [`support_primes`](Self::support_primes) with an explicit scan
    /// bound; primes whose multiples were exhausted without a decision are
    /// reported inconclusive.
    pub fn support_primes_with_scan(&self, p_bound: u64, scan_bound: u64) -> Result<SupportReport> {
        if p_bound < 2 {
            return Err(Error::Domain("prime bound must be >= 2".into()));
        }
        let mut confirmed = Vec::new();
        let mut excluded = Vec::new();
        let mut inconclusive = Vec::new();
        let primes = primes_up_to(p_bound);
        match self {
            FreeSetSpec::KFree(_) => confirmed = primes,
            FreeSetSpec::CoprimeTo(m) => {
                for pi in primes {
                    if m % pi == 0 {
                        excluded.push(pi);
                    } else {
                        confirmed.push(pi);
                    }
                }
            }
            FreeSetSpec::BFree(b) => {
                for pi in primes {
                    if b.contains(&pi) {
                        // every multiple of pi is then divisible by pi
                        excluded.push(pi);
                        continue;
                    }
                    let mut found = false;
                    let mut q = pi;
                    while q <= scan_bound {
                        if b.iter().all(|&d| q % d != 0) {
                            found = true;
                            break;
                        }
                        q += pi;
                    }
                    if found {
                        confirmed.push(pi);
                    } else if pi > scan_bound {
                        inconclusive.push(pi);
                    } else {
                        excluded.push(pi);
                    }
                }
            }
            FreeSetSpec::Table(t) => {
                let mut dividing = BTreeSet::new();
                for &q in &t.members {
                    for (pi, _) in factor_u64(q) {
                        dividing.insert(pi);
                    }
                }
                if let TailRule::PowersOf(base) = t.tail {
                    for (pi, _) in factor_u64(base) {
                        dividing.insert(pi);
                    }
                }
                for pi in primes {
                    if dividing.contains(&pi) {
                        confirmed.push(pi);
                    } else if t.tail == TailRule::Undeclared {
                        inconclusive.push(pi);
                    } else {
                        excluded.push(pi);
                    }
                }
            }
        }
        Ok(SupportReport {
            p_bound,
            confirmed,
            excluded,
            inconclusive,
        })
    }

    /// Exact exponent of convergence by the support rule: 0 when the
    /// support is finite, 1 when it is cofinite in the primes (the prime
    /// sum `Σ π^{-ν}` then diverges for every ν ≤ 1).
    pub fn convergence_exponent(&self) -> ConvergenceExponent {
        let (value, diagnostics) = match self {
            FreeSetSpec::KFree(_) => (
                ExponentValue::Exact(Rational::from_integer(1.into())),
                "support is all primes".to_string(),
            ),
            FreeSetSpec::CoprimeTo(m) => (
                ExponentValue::Exact(Rational::from_integer(1.into())),
                format!("support omits only the primes dividing {m}"),
            ),
            FreeSetSpec::BFree(b) => (
                ExponentValue::Exact(Rational::from_integer(1.into())),
                format!("support omits at most the {} listed divisors", b.len()),
            ),
            FreeSetSpec::Table(t) => match t.tail {
                TailRule::Empty => (
                    ExponentValue::Exact(Rational::zero()),
                    "finite set, finite support".to_string(),
                ),
                TailRule::PowersOf(base) => (
                    ExponentValue::Exact(Rational::zero()),
                    format!("support is finite: primes of the listed members and of {base}"),
                ),
                TailRule::Undeclared => (
                    ExponentValue::UnknownExact,
                    "tail undeclared; use the counting fit".to_string(),
                ),
            },
        };
        ConvergenceExponent {
            value,
            method: "exact-by-support",
            diagnostics,
        }
    }

    /// Partial Euler sandwich at precision `prec` decimal digits.
    pub fn euler_product_partial(
        &self,
        nu: &Rational,
        p_bound: u64,
        prec: u32,
    ) -> Result<EulerReport> {
        if !nu.is_positive() {
            return Err(Error::Domain("convergence exponent must be positive".into()));
        }
        if p_bound < 2 {
            return Err(Error::Domain("summation bound must be >= 2".into()));
        }
        let support = self.support_primes(p_bound)?;
        let neg_nu = -nu.clone();

        let mut left = DecimalInterval::zero(prec);
        for &pi in &support.confirmed {
            left.add_assign(&DecimalInterval::pow_of_uint(&pi.into(), &neg_nu, prec)?);
        }

        let members = self.range_members(p_bound)?;
        let mut middle = DecimalInterval::zero(prec);
        for &q in &members {
            middle.add_assign(&DecimalInterval::pow_of_uint(&q.into(), &neg_nu, prec)?);
        }

        let mut right = DecimalInterval::pow_of_uint(&1u32.into(), nu, prec)?; // exactly 1
        for &pi in &support.confirmed {
            // 1 + 1/(π^ν − 1) = π^ν / (π^ν − 1)
            let t = DecimalInterval::pow_of_uint(&pi.into(), nu, prec)?;
            let mut den = t.clone();
            den.lo -= num_bigint::BigInt::from(crate::decimal::pow10(prec));
            den.hi -= num_bigint::BigInt::from(crate::decimal::pow10(prec));
            if !den.lo.is_positive() {
                return Err(Error::Range(format!(
                    "factor at prime {pi} needs more precision: π^ν − 1 not resolved positive"
                )));
            }
            right = right.mul(&t.div(&den));
        }

        // Ordering certificates: structural subset arguments where they
        // apply (every term is positive), interval separation otherwise.
        let member_set: BTreeSet<u64> = members.iter().copied().collect();
        let structural_left = support
            .confirmed
            .iter()
            .all(|pi| member_set.contains(pi));
        let left_le_middle = structural_left || left.hi <= middle.lo;
        let confirmed_set: BTreeSet<u64> = support.confirmed.iter().copied().collect();
        let structural_right = members
            .iter()
            .all(|&q| factor_u64(q).iter().all(|(pi, _)| confirmed_set.contains(pi)));
        let middle_le_right = structural_right || middle.hi <= right.lo;

        Ok(EulerReport {
            spec: self.to_string(),
            nu: nu.clone(),
            p_bound,
            precision: prec,
            left_sum: left,
            q_partial_sum: middle,
            right_product: right,
            left_le_middle,
            middle_le_right,
            support_inconclusive: support.inconclusive.len(),
        })
    }

    /// Parse a spec literal: `kfree:k | coprime:m | bfree:b1,b2,… |
    /// table:@file.json`.
    pub fn parse(literal: &str) -> Result<Self> {
        const GRAMMAR: &str = "kfree:k | coprime:m | bfree:b1,b2,… | table:@file";
        let (head, rest) = literal
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("spec literal `{literal}`; expected {GRAMMAR}")))?;
        let num = |s: &str| -> Result<u64> {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("`{s}` is not a natural number in `{literal}`")))
        };
        match head {
            "kfree" => FreeSetSpec::kfree(
                num(rest)?
                    .to_u32()
                    .ok_or_else(|| Error::Parse(format!("power order `{rest}` too large")))?,
            ),
            "coprime" => FreeSetSpec::coprime_to(num(rest)?),
            "bfree" => {
                if rest.trim().is_empty() {
                    // no excluded divisors: every positive integer
                    return FreeSetSpec::bfree([]);
                }
                let vals: Result<Vec<u64>> = rest.split(',').map(|s| num(s)).collect();
                FreeSetSpec::bfree(vals?)
            }
            "table" => {
                let path = rest.strip_prefix('@').ok_or_else(|| {
                    Error::Parse(format!("table spec must name a file: table:@file, got `{literal}`"))
                })?;
                let text = std::fs::read_to_string(path)?;
                Self::parse_table_json(&text)
            }
            _ => Err(Error::Parse(format!(
                "unknown spec kind `{head}`; expected {GRAMMAR}"
            ))),
        }
    }

    /// Parse the JSON table document `{members, n_max, tail}`.
    pub fn parse_table_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct TailFile {
            kind: String,
            #[serde(default)]
            base: Option<u64>,
        }
        #[derive(serde::Deserialize)]
        struct TableFile {
            members: Vec<u64>,
            n_max: u64,
            #[serde(default)]
            tail: Option<TailFile>,
        }
        let doc: TableFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("table file: {e}")))?;
        let tail = match doc.tail {
            None => TailRule::Undeclared,
            Some(t) => match t.kind.as_str() {
                "undeclared" => TailRule::Undeclared,
                "empty" => TailRule::Empty,
                "powers_of" => TailRule::PowersOf(t.base.ok_or_else(|| {
                    Error::Parse("tail kind powers_of requires a base".into())
                })?),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown tail kind `{other}`; expected empty | undeclared | powers_of"
                    )))
                }
            },
        };
        FreeSetSpec::table(doc.members, doc.n_max, tail)
    }
}

impl fmt::Display for FreeSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeSetSpec::KFree(k) => write!(f, "kfree:{k}"),
            FreeSetSpec::CoprimeTo(m) => write!(f, "coprime:{m}"),
            FreeSetSpec::BFree(b) => {
                write!(f, "bfree:")?;
                for (i, d) in b.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            FreeSetSpec::Table(t) => {
                let tail = match t.tail {
                    TailRule::Undeclared => "undeclared".to_string(),
                    TailRule::Empty => "empty".to_string(),
                    TailRule::PowersOf(b) => format!("powers_of:{b}"),
                };
                write!(
                    f,
                    "table(n_max={},members={},tail={})",
                    t.n_max,
                    t.members.len(),
                    tail
                )
            }
        }
    }
}

/// Least-squares fit of `log count` against `log N` over a grid; an
/// estimator of the counting exponent, which upper-bounds and typically
/// equals the exponent of convergence.
pub fn counting_exponent_fit(
    oracle: &dyn Fn(u64) -> bool,
    grid: &[u64],
) -> Result<ConvergenceExponent> {
    if grid.len() < 3 {
        return Err(Error::Domain(format!(
            "counting fit needs >= 3 grid points, got {}",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let max_n = *grid.last().unwrap();
    let mut counts = Vec::with_capacity(grid.len());
    let mut count = 0u64;
    let mut gi = 0;
    for q in 1..=max_n {
        if oracle(q) {
            count += 1;
        }
        while gi < grid.len() && grid[gi] == q {
            counts.push((q, count));
            gi += 1;
        }
    }
    if count <= 1 {
        return Err(Error::Domain(format!(
            "undefined fit: only {count} member(s) up to {max_n}"
        )));
    }
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .map(|&(n, c)| ((n as f64).ln(), (c.max(1) as f64).ln()))
        .collect();
    let (slope, intercept) = least_squares(&pts);
    let max_residual = pts
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0f64, f64::max);
    Ok(ConvergenceExponent {
        value: ExponentValue::Fitted {
            slope,
            max_residual,
            counts,
        },
        method: "counting-fit",
        diagnostics: format!("{} grid points up to {max_n}", grid.len()),
    })
}

/// Counting fit for a spec, using the range sieve for the counts.
pub fn counting_exponent_fit_spec(spec: &FreeSetSpec, grid: &[u64]) -> Result<ConvergenceExponent> {
    if grid.len() < 3 {
        return Err(Error::Domain(format!(
            "counting fit needs >= 3 grid points, got {}",
            grid.len()
        )));
    }
    let bits = spec.membership_bitmap(*grid.last().unwrap())?;
    counting_exponent_fit(&|q| bits[q as usize], grid)
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Primes `<= n`, ascending (simple sieve).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut is_p = vec![true; (n + 1) as usize];
    is_p[0] = false;
    is_p[1] = false;
    let mut i = 2u64;
    while i * i <= n {
        if is_p[i as usize] {
            let mut j = i * i;
            while j <= n {
                is_p[j as usize] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&q| is_p[q as usize]).collect()
}
