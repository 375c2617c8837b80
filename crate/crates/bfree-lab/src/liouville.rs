//! Constructions with prime-power convergent denominators.
//!
//! Given two distinct primes `π₀, π₁`, a [`PrimePairConstruction`] grows a
//! continued fraction `x = [0; a₁, a₂, …]` whose convergent denominators
//! alternate between pure powers of the two primes: `q_{2s} = π₀^{α_{2s}}`
//! and `q_{2s+1} = π₁^{α_{2s+1}}`. At step `t` the next exponent is
//! `α_t = α_{t-2} + k·ω`, where `ω` is the multiplicative order of `π_i`
//! (the prime owning step `t`) modulo `π_{1-i}^{α_{t-1}}` and `k ≥ 1` is a
//! free choice subject to `α_t > α_{t-1}`. That congruence is exactly what
//! makes the next partial quotient
//! `a_t = (π_i^{α_t} − π_i^{α_{t-2}}) / π_{1-i}^{α_{t-1}}`
//! a positive integer, which the builder checks at every step. The
//! exponents explode fast — the default (2,3) run leaves any digit budget
//! at step 6 — so a budget guard flips the state to `growth-exceeded`
//! instead of attempting the impossible arithmetic.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cf::{ContinuedFraction, PowerTest};
use crate::exact::{
    decimal_digits, is_prime_u64, ln_biguint, multiplicative_order_prime_power, Rational,
};
use crate::{Error, Result};

/// Default cap on the decimal-digit count of any stored `q_t`.
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// How to pick the free parameter `k` at an extension step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    /// Least `k >= 1` with `α_t > α_{t-1}` (canonical run).
    Minimal,
    /// A caller-supplied `k >= 1`; rejected if the increase fails.
    Explicit(u64),
}

/// Builder state: either still extendable or stopped at the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Active,
    /// The candidate exponent at `step` would give `q` more decimal digits
    /// than the budget allows; `alpha_digits` is the digit count of that
    /// exponent itself.
    GrowthExceeded { step: u64, alpha_digits: u64 },
}

/// A two-prime continued-fraction construction (see module docs).
#[derive(Clone, Debug)]
pub struct PrimePairConstruction {
    pi0: u64,
    pi1: u64,
    digit_budget: u64,
    /// α_0 = 0, α_1, …, strictly increasing from index 1.
    alpha: Vec<u64>,
    /// k chosen at step t = 2, 3, … (index t-2).
    k_choices: Vec<u64>,
    /// a_0 = 0 (the value lies in (0,1)), a_1 = π₁^{α₁}, …
    a: Vec<BigUint>,
    /// p_{-1} = 1 at index 0, then p_0, p_1, …
    p: Vec<BigInt>,
    /// q_{-1} = 0 at index 0, then q_0 = 1, q_1, …
    q: Vec<BigUint>,
    status: Status,
}

/// One named invariant check from [`PrimePairConstruction::verify`].
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Full invariant replay.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// Per-index outcome of the `|x - p_s/q_s| < q_s^{-tau}` scan.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxOutcome {
    Hit { s: u64, depth: u64 },
    Miss { s: u64, depth: u64 },
    Inconclusive { s: u64 },
}

/// Finite-scale evidence that the construction value is τ-approximable
/// with denominators avoiding the coprime-to-`π₀π₁` set.
#[derive(Clone, Debug)]
pub struct EvidenceReport {
    pub tau: Rational,
    /// (s, q_s has a factor among {π₀, π₁}) for every s >= 1.
    pub outside_q: Vec<(u64, bool)>,
    pub hits: Vec<(u64, u64)>,
    pub misses: Vec<(u64, u64)>,
    pub inconclusive: Vec<u64>,
    /// Least q with `q^{tau-2} > 2`: beyond it, any fraction this close
    /// must be a convergent.
    pub legendre_cutoff: u64,
    /// Members of the coprime-to-`π₀π₁` set below the cutoff — the only
    /// possible exceptional denominators besides convergent hits.
    pub small_q_members: Vec<u64>,
    /// Convergent hits whose denominator lies in the coprime set (always
    /// zero: every q_s is a pure prime power).
    pub convergent_hits_in_q: usize,
}

impl PrimePairConstruction {
    /// Start a construction: `q = [1, π₁^{α₁}]`, `a₁ = q₁`.
    pub fn init(pi0: u64, pi1: u64, alpha1: u64) -> Result<Self> {
        if !is_prime_u64(pi0) {
            return Err(Error::Domain(format!("{pi0} is not prime")));
        }
        if !is_prime_u64(pi1) {
            return Err(Error::Domain(format!("{pi1} is not prime")));
        }
        if pi0 == pi1 {
            return Err(Error::Domain(format!("the primes must be distinct, got {pi0} twice")));
        }
        if alpha1 == 0 {
            return Err(Error::Domain("the first exponent must be >= 1".into()));
        }
        let a1_exp = u32::try_from(alpha1)
            .map_err(|_| Error::Range(format!("first exponent {alpha1} too large")))?;
        let q1 = BigUint::from(pi1).pow(a1_exp);
        let mut c = PrimePairConstruction {
            pi0,
            pi1,
            digit_budget: DEFAULT_DIGIT_BUDGET,
            alpha: vec![0, alpha1],
            k_choices: Vec::new(),
            a: vec![BigUint::zero(), q1.clone()],
            p: vec![BigInt::one(), BigInt::zero()],
            q: vec![BigUint::zero(), BigUint::one()],
            status: Status::Active,
        };
        // p_1 = a_1·p_0 + p_{-1} = 1, q_1 = a_1·q_0 + q_{-1} = a_1
        c.p.push(BigInt::one());
        c.q.push(q1);
        if decimal_digits(&c.q[2]) > c.digit_budget {
            return Err(Error::Range(format!(
                "initial denominator already beyond the {}-digit budget",
                c.digit_budget
            )));
        }
        Ok(c)
    }

    /// Replace the digit budget (default `10^6`).
    pub fn with_digit_budget(mut self, budget: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::Domain("digit budget must be >= 1".into()));
        }
        self.digit_budget = budget;
        Ok(self)
    }

    pub fn pi0(&self) -> u64 {
        self.pi0
    }

    pub fn pi1(&self) -> u64 {
        self.pi1
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn digit_budget(&self) -> u64 {
        self.digit_budget
    }

    /// Exponents α_0, α_1, …
    pub fn alphas(&self) -> &[u64] {
        &self.alpha
    }

    /// The k used at each step t >= 2.
    pub fn k_choices(&self) -> &[u64] {
        &self.k_choices
    }

    /// Partial quotients a_0 = 0, a_1, …
    pub fn quotients(&self) -> &[BigUint] {
        &self.a
    }

    /// Number of stored denominators q_0, …, q_S (so S + 1).
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        false // q_0 and q_1 always exist
    }

    /// Denominator q_s.
    pub fn q(&self, s: u64) -> &BigUint {
        &self.q[s as usize + 1]
    }

    /// Numerator p_s.
    pub fn p(&self, s: u64) -> &BigInt {
        &self.p[s as usize + 1]
    }

    /// The prime owning index `t` (π₀ for even t, π₁ for odd).
    fn prime_at(&self, t: u64) -> u64 {
        if t % 2 == 0 {
            self.pi0
        } else {
            self.pi1
        }
    }

    /// One extension step; returns the new state and leaves `self` intact.
    /// If the candidate exponent would blow the digit budget, the returned
    /// state has status `growth-exceeded` and no new term (not an error).
    pub fn extend(&self, k: KChoice) -> Result<Self> {
        if let Status::GrowthExceeded { step, .. } = self.status {
            return Err(Error::Domain(format!(
                "construction already growth-exceeded at step {step}"
            )));
        }
        let t = self.alpha.len() as u64;
        let pi = self.prime_at(t);
        let pi_other = self.prime_at(t + 1);
        let alpha_prev = self.alpha[(t - 1) as usize];
        let alpha_prev2 = self.alpha[(t - 2) as usize];
        // ω = order of π_i modulo π_{1-i}^{α_{t-1}}; the congruence
        // π_i^ω ≡ 1 makes the division below exact.
        let omega = multiplicative_order_prime_power(pi_other, alpha_prev, &BigUint::from(pi))?;
        let gap = BigUint::from(alpha_prev - alpha_prev2);
        let k_min = &gap / &omega + 1u32;
        let k_used: BigUint = match k {
            KChoice::Minimal => k_min.clone(),
            KChoice::Explicit(k) => {
                if k == 0 {
                    return Err(Error::Domain("k must be >= 1".into()));
                }
                let k = BigUint::from(k);
                if k < k_min {
                    return Err(Error::Domain(format!(
                        "k = {k} gives α_{t} = {} + {k}·ω, not above α_{} = {alpha_prev}",
                        alpha_prev2,
                        t - 1
                    )));
                }
                k
            }
        };
        let alpha_t = BigUint::from(alpha_prev2) + &k_used * &omega;
        // budget guard: q_t = π^{α_t} has ⌊α_t·log10(π)⌋ + 1 digits
        let digits_estimate = alpha_t.to_f64().unwrap_or(f64::INFINITY) * (pi as f64).log10();
        if digits_estimate > self.digit_budget as f64 {
            let mut next = self.clone();
            next.status = Status::GrowthExceeded {
                step: t,
                alpha_digits: decimal_digits(&alpha_t),
            };
            return Ok(next);
        }
        let alpha_t = alpha_t
            .to_u64()
            .ok_or_else(|| Error::Range("exponent exceeds u64 despite budget".into()))?;
        let k_used = k_used
            .to_u64()
            .ok_or_else(|| Error::Range("k exceeds u64 despite budget".into()))?;
        let exp = |e: u64| -> Result<u32> {
            u32::try_from(e).map_err(|_| Error::Range(format!("exponent {e} too large")))
        };
        let q_t = BigUint::from(pi).pow(exp(alpha_t)?);
        let q_prev2_pow = BigUint::from(pi).pow(exp(alpha_prev2)?);
        let den = BigUint::from(pi_other).pow(exp(alpha_prev)?);
        let (a_t, rem) = (&q_t - &q_prev2_pow).div_rem(&den);
        if !rem.is_zero() {
            return Err(Error::Internal(format!(
                "step {t}: (π^{alpha_t} − π^{alpha_prev2}) not divisible by the previous denominator — order computation is wrong"
            )));
        }
        if a_t.is_zero() {
            return Err(Error::Internal(format!("step {t}: partial quotient is zero")));
        }
        // replay the recurrence as an independent cross-check
        let n = self.q.len();
        let q_rec = &a_t * &self.q[n - 1] + &self.q[n - 2];
        if q_rec != q_t {
            return Err(Error::Internal(format!(
                "step {t}: recurrence a_t·q_(t-1) + q_(t-2) disagrees with π^{alpha_t}"
            )));
        }
        let p_t = BigInt::from(a_t.clone()) * &self.p[n - 1] + &self.p[n - 2];
        let mut next = self.clone();
        next.alpha.push(alpha_t);
        next.k_choices.push(k_used);
        next.a.push(a_t);
        next.q.push(q_t);
        next.p.push(p_t);
        Ok(next)
    }

    /// Extend by `steps` minimal-k steps (or fewer if the budget cuts the
    /// run short — inspect `status`).
    pub fn extend_minimal(&self, steps: u64) -> Result<Self> {
        let mut c = self.clone();
        for _ in 0..steps {
            c = c.extend(KChoice::Minimal)?;
            if matches!(c.status, Status::GrowthExceeded { .. }) {
                break;
            }
        }
        Ok(c)
    }

    /// Re-derive every construction invariant from the stored state.
    pub fn verify(&self) -> VerifyReport {
        let mut checks = Vec::new();
        let mut push = |name: &'static str, pass: bool, detail: String| {
            checks.push(Check { name, pass, detail });
        };
        let s_max = self.alpha.len() - 1; // q_0..q_{s_max}

        // initial state
        let init_ok = self.q(0).is_one()
            && self.alpha[0] == 0
            && self.alpha[1] >= 1
            && *self.q(1) == BigUint::from(self.pi1).pow(self.alpha[1] as u32)
            && self.a[1] == *self.q(1)
            && self.a[0].is_zero()
            && self.p(0).is_zero()
            && self.p(1).is_one();
        push(
            "initial-state",
            init_ok,
            format!("q0 = 1, q1 = {}^{} = a1", self.pi1, self.alpha[1]),
        );

        // recurrences q_t = a_t q_(t-1) + q_(t-2), p likewise (t >= 1)
        let mut rec_ok = true;
        let mut rec_detail = String::from("replayed exactly");
        for t in 1..=s_max {
            let i = t + 1;
            let q_expect = &self.a[t] * &self.q[i - 1] + &self.q[i - 2];
            let p_expect = BigInt::from(self.a[t].clone()) * &self.p[i - 1] + &self.p[i - 2];
            if q_expect != self.q[i] || p_expect != self.p[i] {
                rec_ok = false;
                rec_detail = format!("recurrence fails at index {t}");
                break;
            }
        }
        push("recurrence", rec_ok, rec_detail);

        // prime-power form
        let mut form_ok = true;
        let mut form_detail = String::from("q_{2s} powers of π0, q_{2s+1} powers of π1");
        for t in 0..=s_max {
            let pi = self.prime_at(t as u64);
            let a = self.alpha[t];
            let expect = match u32::try_from(a) {
                Ok(e) => BigUint::from(pi).pow(e),
                Err(_) => {
                    form_ok = false;
                    form_detail = format!("exponent α_{t} out of range");
                    break;
                }
            };
            if *self.q(t as u64) != expect {
                form_ok = false;
                form_detail = format!("q_{t} is not {pi}^{a}");
                break;
            }
        }
        push("prime-power-form", form_ok, form_detail);

        // α strictly increasing from index 1 (α_0 = 0 < α_1 included)
        let alpha_ok = self.alpha.windows(2).all(|w| w[0] < w[1]);
        push(
            "alpha-increasing",
            alpha_ok,
            format!("α = {:?}", &self.alpha),
        );

        // partial quotients positive from index 1
        let a_ok = self.a[1..].iter().all(|a| !a.is_zero());
        push("quotients-positive", a_ok, "a_t >= 1 for t >= 1".into());

        // determinant p_s q_(s-1) − p_(s-1) q_s = (−1)^(s+1)
        let mut det_ok = true;
        let mut det_detail = String::from("alternating ±1 at every index");
        for s in 0..=s_max {
            let i = s + 1;
            let det = &self.p[i] * BigInt::from(self.q[i - 1].clone())
                - &self.p[i - 1] * BigInt::from(self.q[i].clone());
            let expect = if s % 2 == 0 { -1 } else { 1 };
            if det != BigInt::from(expect) {
                det_ok = false;
                det_detail = format!("determinant at s = {s} is not {expect}");
                break;
            }
        }
        push("determinant", det_ok, det_detail);

        // coprimality of consecutive denominators: distinct prime powers
        // when the form check holds; small cases fall back to a real gcd
        let qq_ok = if form_ok {
            true
        } else {
            (0..s_max).all(|s| {
                let (x, y) = (&self.q[s + 1], &self.q[s + 2]);
                x.bits().max(y.bits()) <= 1 << 14 && x.gcd(y).is_one()
            })
        };
        push(
            "q-coprimality",
            qq_ok,
            if form_ok {
                "distinct prime powers are coprime".into()
            } else {
                "checked by gcd (prime-power form unavailable)".into()
            },
        );

        // coprimality of p_s and q_s follows from the determinant identity
        push(
            "pq-coprimality",
            det_ok,
            "a common factor would divide the determinant ±1".into(),
        );

        // congruence π_i^(α_t − α_(t-2)) ≡ 1 mod π_(1-i)^(α_(t-1)), t >= 2
        let mut cong_ok = true;
        let mut cong_detail = String::from("verified by modular exponentiation");
        for t in 2..=s_max {
            let pi = self.prime_at(t as u64);
            let pi_other = self.prime_at(t as u64 + 1);
            let modulus = BigUint::from(pi_other).pow(self.alpha[t - 1] as u32);
            let e = BigUint::from(self.alpha[t] - self.alpha[t - 2]);
            if !BigUint::from(pi).modpow(&e, &modulus).is_one() {
                cong_ok = false;
                cong_detail = format!("congruence fails at step {t}");
                break;
            }
        }
        push("congruence", cong_ok, cong_detail);

        let all_pass = checks.iter().all(|c| c.pass);
        VerifyReport { checks, all_pass }
    }

    /// The stored prefix as a continued fraction (`a0 = 0`).
    pub fn continued_fraction(&self) -> ContinuedFraction {
        ContinuedFraction::from_quotients(BigInt::zero(), self.a[1..].to_vec())
            .expect("construction quotients are positive")
    }

    /// Evidence report for approximability at exponent `tau > 2` with
    /// denominators outside the coprime-to-`π₀π₁` set.
    pub fn wstar_evidence(&self, tau: &Rational) -> Result<EvidenceReport> {
        if *tau <= crate::exact::ratio(2, 1) {
            return Err(Error::Domain(format!(
                "evidence needs tau > 2, got {tau}"
            )));
        }
        let s_max = self.alpha.len() as u64 - 1;
        if s_max < 3 {
            return Err(Error::Domain(format!(
                "evidence needs at least 4 stored denominators, have {}",
                s_max + 1
            )));
        }
        let m = self.pi0 * self.pi1;

        // (a) every q_s, s >= 1, is divisible by π0 or π1
        let outside_q: Vec<(u64, bool)> = (1..=s_max)
            .map(|s| {
                let q = self.q(s);
                let hit0 = (q % BigUint::from(self.pi0)).is_zero();
                let hit1 = (q % BigUint::from(self.pi1)).is_zero();
                (s, hit0 || hit1)
            })
            .collect();

        // (b) three-valued approximation scan along the convergents
        let cf = self.continued_fraction();
        let mut hits = Vec::new();
        let mut misses = Vec::new();
        let mut inconclusive = Vec::new();
        for s in 1..=s_max {
            match cf.convergent_power_test(s, tau)? {
                PowerTest::Hit { depth } => hits.push((s, depth)),
                PowerTest::Miss { depth } => misses.push((s, depth)),
                PowerTest::Inconclusive => inconclusive.push(s),
            }
        }

        // (c) Legendre cutoff: least q with q^(tau-2) > 2
        let excess = tau - crate::exact::ratio(2, 1);
        let c = excess
            .numer()
            .to_u32()
            .ok_or_else(|| Error::Range("tau too large for the cutoff scan".into()))?;
        let d = excess
            .denom()
            .to_u32()
            .ok_or_else(|| Error::Range("tau denominator too large".into()))?;
        let two_pow = BigUint::from(2u32).pow(d);
        let mut cutoff = 1u64;
        while BigUint::from(cutoff).pow(c) <= two_pow {
            cutoff += 1;
        }
        let small_q_members: Vec<u64> = (1..cutoff).filter(|&q| q.gcd(&m) == 1).collect();
        let convergent_hits_in_q = hits
            .iter()
            .filter(|(s, _)| {
                let q = self.q(*s);
                (q % BigUint::from(self.pi0)) != BigUint::zero()
                    && (q % BigUint::from(self.pi1)) != BigUint::zero()
            })
            .count();

        Ok(EvidenceReport {
            tau: tau.clone(),
            outside_q,
            hits,
            misses,
            inconclusive,
            legendre_cutoff: cutoff,
            small_q_members,
            convergent_hits_in_q,
        })
    }

    /// Growth exponents `w_s = 1 + ln q_{s+1} / ln q_s` along the prefix —
    /// a lower-bound witness for the irrationality exponent.
    pub fn irrationality_profile(&self) -> Result<Vec<f64>> {
        let s_max = self.alpha.len() as u64 - 1;
        if s_max < 2 {
            return Err(Error::Domain(
                "profile needs at least 3 stored denominators".into(),
            ));
        }
        Ok((1..s_max)
            .map(|s| 1.0 + ln_biguint(self.q(s + 1)) / ln_biguint(self.q(s)))
            .collect())
    }

    /// JSON certificate. `q` entries switch to `{prime, exponent}` form
    /// beyond `inline_digits` decimal digits; `a` values stay inline. The
    /// optional evidence block is appended when provided.
    pub fn to_certificate_json(
        &self,
        inline_digits: u64,
        evidence: Option<&EvidenceReport>,
    ) -> String {
        let report = self.verify();
        let mut out = String::with_capacity(1024);
        out.push_str("{\"pi0\":\"");
        let _ = write!(out, "{}", self.pi0);
        out.push_str("\",\"pi1\":\"");
        let _ = write!(out, "{}", self.pi1);
        out.push_str("\",\"digit_budget\":\"");
        let _ = write!(out, "{}", self.digit_budget);
        out.push_str("\",\"status\":");
        match &self.status {
            Status::Active => out.push_str("\"active\""),
            Status::GrowthExceeded { step, alpha_digits } => {
                let _ = write!(
                    out,
                    "{{\"growth-exceeded\":{{\"step\":\"{step}\",\"alpha_digits\":\"{alpha_digits}\"}}}}"
                );
            }
        }
        out.push_str(",\"alpha\":[");
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{a}\"");
        }
        out.push_str("],\"k\":[");
        for (i, k) in self.k_choices.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{k}\"");
        }
        out.push_str("],\"a\":[");
        for (i, a) in self.a.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{a}\"");
        }
        out.push_str("],\"q\":[");
        for s in 0..self.alpha.len() {
            if s > 0 {
                out.push(',');
            }
            let q = self.q(s as u64);
            if decimal_digits(q) > inline_digits && s >= 1 {
                let _ = write!(
                    out,
                    "{{\"prime\":\"{}\",\"exponent\":\"{}\"}}",
                    self.prime_at(s as u64),
                    self.alpha[s]
                );
            } else {
                let _ = write!(out, "\"{q}\"");
            }
        }
        out.push_str("],\"checks\":{");
        for (i, c) in report.checks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{}\":{}", c.name, c.pass);
        }
        let _ = write!(out, ",\"all_pass\":{}}}", report.all_pass);
        if let Some(ev) = evidence {
            out.push_str(",\"evidence\":");
            out.push_str(&ev.to_json());
        }
        out.push('}');
        out
    }
}

impl EvidenceReport {
    /// JSON block `{tau, outside_q, hits[], misses[], inconclusive[],
    /// legendre_cutoff, …}` with every number a decimal string.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry {
            s: String,
            depth: String,
        }
        #[derive(Serialize)]
        struct Doc {
            tau: String,
            outside_q: Vec<[String; 2]>,
            hits: Vec<Entry>,
            misses: Vec<Entry>,
            inconclusive: Vec<String>,
            legendre_cutoff: String,
            small_q_members: Vec<String>,
            convergent_hits_in_q: String,
        }
        let entry = |v: &[(u64, u64)]| {
            v.iter()
                .map(|(s, d)| Entry {
                    s: s.to_string(),
                    depth: d.to_string(),
                })
                .collect()
        };
        let doc = Doc {
            tau: self.tau.to_string(),
            outside_q: self
                .outside_q
                .iter()
                .map(|(s, b)| [s.to_string(), b.to_string()])
                .collect(),
            hits: entry(&self.hits),
            misses: entry(&self.misses),
            inconclusive: self.inconclusive.iter().map(|s| s.to_string()).collect(),
            legendre_cutoff: self.legendre_cutoff.to_string(),
            small_q_members: self.small_q_members.iter().map(|q| q.to_string()).collect(),
            convergent_hits_in_q: self.convergent_hits_in_q.to_string(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// The s-indices of proven hits.
    pub fn hit_indices(&self) -> Vec<u64> {
        self.hits.iter().map(|(s, _)| *s).collect()
    }

    /// The s-indices of proven misses.
    pub fn miss_indices(&self) -> Vec<u64> {
        self.misses.iter().map(|(s, _)| *s).collect()
    }
}

#[cfg(test)]
impl PrimePairConstruction {
    /// Test-only fault injection.
    pub(crate) fn tamper_q(&mut self, s: u64, value: u64) {
        self.q[s as usize + 1] = BigUint::from(value);
    }
}
