//! Rational hyperplanes and the dependence transfer property.
//!
//! A hyperplane `Γ(A, u, v)` is the solution set of `Σ aᵢxᵢ = u/v` with
//! integer coefficients and `aₙ ≠ 0`. Its key constants are the Lipschitz
//! bound `K(A) = Σ|aᵢ| / |aₙ|` of the graph map and the dependence
//! threshold: the least `q₀` with `q₀^{τ-1} > Σ|aᵢ|`, beyond which any
//! simultaneous approximation `|xᵢ − pᵢ/q| < q^{-τ}` of a point on the
//! plane forces the exact identity `v·Σ aᵢpᵢ = u·q` — good approximations
//! of rationally dependent coordinates are themselves dependent. The
//! module checks that transfer exhaustively at small scale, enumerates
//! rational points, and scans seeded construction points for
//! approximation evidence with denominators inside or outside a chosen
//! denominator set.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decimal::{format_scaled, pow10};
use crate::exact::{compare_frac_to_power, Rational};
use crate::liouville::PrimePairConstruction;
use crate::qfree::FreeSetSpec;
use crate::{Error, Result};

/// `Σ aᵢxᵢ = u/v` with `aₙ ≠ 0`, `v >= 1`, `gcd(u, v) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    a: Vec<BigInt>,
    u: BigInt,
    v: BigInt,
}

/// Proof state of a reported approximation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Proof {
    Proven,
    Inconclusive,
}

/// One denominator surviving the scan.
#[derive(Clone, Debug)]
pub struct ScanHit {
    pub q: u64,
    /// Numerators for the first n-1 coordinates, then the lifted one when
    /// `full` is set.
    pub p: Vec<BigInt>,
    /// Whether the final coordinate was completed and proven too.
    pub full: bool,
    pub proof: Proof,
    pub in_q: bool,
}

/// Result of scanning a seeded point for simultaneous approximations.
#[derive(Clone, Debug)]
pub struct ScanReport {
    /// Decimal enclosures of all n coordinates.
    pub x: Vec<(String, String)>,
    pub tau: Rational,
    pub q_max: u64,
    pub threshold: BigUint,
    pub hits: Vec<ScanHit>,
    pub in_q_count: usize,
    pub out_q_count: usize,
    pub inconclusive_count: usize,
    /// Every proven full hit with `q` at or above the threshold has `q`
    /// divisible by v (the transfer identity forces it).
    pub large_full_hits_multiple_of_v: bool,
}

/// Exhaustive small-scale check of the transfer property around a point.
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub threshold: BigUint,
    pub hits_checked: u64,
    /// Good approximations at/above the threshold that fail the identity —
    /// must be empty.
    pub violations: Vec<(u64, Vec<BigInt>)>,
    /// Good approximations below the threshold that fail the identity —
    /// allowed, listed for inspection.
    pub below_threshold_failures: Vec<(u64, Vec<BigInt>)>,
}

impl Hyperplane {
    /// Canonicalize and validate: `n >= 2`, `aₙ ≠ 0`, `v ≠ 0`; the target
    /// is stored with `v >= 1` and `gcd(u, v) = 1`.
    pub fn new(a: Vec<BigInt>, u: BigInt, v: BigInt) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Domain(format!(
                "a hyperplane needs dimension >= 2, got {}",
                a.len()
            )));
        }
        if a.last().unwrap().is_zero() {
            return Err(Error::Domain("the last coefficient must be nonzero".into()));
        }
        if v.is_zero() {
            return Err(Error::Domain("the target denominator must be nonzero".into()));
        }
        let (mut u, mut v) = (u, v);
        if v.is_negative() {
            u = -u;
            v = -v;
        }
        let g = u.gcd(&v);
        if !g.is_zero() {
            u /= &g;
            v /= &g;
        }
        Ok(Hyperplane { a, u, v })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(a: &[i64], u: i64, v: i64) -> Result<Self> {
        Self::new(
            a.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(u),
            BigInt::from(v),
        )
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.a
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }

    pub fn v(&self) -> &BigInt {
        &self.v
    }

    /// Target value `u/v`.
    pub fn target(&self) -> Rational {
        BigRational::new_raw(self.u.clone(), self.v.clone())
    }

    /// `K(A) = Σ|aᵢ| / |aₙ|`.
    pub fn lipschitz_constant(&self) -> Rational {
        let sum: BigInt = self.a.iter().map(|x| x.abs()).sum();
        BigRational::new(sum, self.a.last().unwrap().abs())
    }

    /// The unique `xₙ` completing `y` to a point of the plane.
    pub fn lift(&self, y: &[Rational]) -> Result<Rational> {
        if y.len() + 1 != self.a.len() {
            return Err(Error::Domain(format!(
                "lift needs {} coordinates, got {}",
                self.a.len() - 1,
                y.len()
            )));
        }
        let mut acc = self.target();
        for (ai, yi) in self.a.iter().zip(y) {
            acc -= BigRational::from(ai.clone()) * yi;
        }
        Ok(acc / BigRational::from(self.a.last().unwrap().clone()))
    }

    /// Exact incidence test.
    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.a.len() {
            return false;
        }
        let sum: Rational = self
            .a
            .iter()
            .zip(x)
            .map(|(ai, xi)| BigRational::from(ai.clone()) * xi)
            .sum();
        sum == self.target()
    }

    /// `v·Σ aᵢpᵢ = u·q`: is `(p₁/q, …, pₙ/q)` on the plane?
    pub fn check_transfer(&self, q: u64, p: &[BigInt]) -> bool {
        if p.len() != self.a.len() {
            return false;
        }
        let sum: BigInt = self.a.iter().zip(p).map(|(ai, pi)| ai * pi).sum();
        &self.v * sum == &self.u * BigInt::from(q)
    }

    /// Least `q₀` with `q₀^{τ-1} > Σ|aᵢ|`, from which the transfer
    /// property is forced.
    pub fn dependence_threshold(&self, tau: &Rational) -> Result<BigUint> {
        dependence_threshold(&self.a, tau)
    }

    /// All integer vectors `p` in the per-coordinate box solving
    /// `v·Σ aᵢpᵢ = u·q`.
    pub fn rational_points(&self, q: u64, bounds: &[(i64, i64)]) -> Result<Vec<Vec<BigInt>>> {
        if q == 0 {
            return Err(Error::Domain("denominator must be >= 1".into()));
        }
        if bounds.len() != self.a.len() {
            return Err(Error::Domain(format!(
                "need {} coordinate bounds, got {}",
                self.a.len(),
                bounds.len()
            )));
        }
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::Domain("empty coordinate box".into()));
        }
        // solvability: v | u·q, then gcd(a) | u·q/v
        let uq = &self.u * BigInt::from(q);
        let (t, rem) = uq.div_rem(&self.v);
        if !rem.is_zero() {
            return Ok(Vec::new());
        }
        let g = self
            .a
            .iter()
            .fold(BigInt::zero(), |acc, ai| acc.gcd(ai));
        if !(&t % &g).is_zero() {
            return Ok(Vec::new());
        }
        let n = self.a.len();
        let an = self.a.last().unwrap();
        let mut out = Vec::new();
        let mut partial = vec![BigInt::zero(); n];
        // enumerate the first n-1 coordinates, solve the last exactly
        fn recurse(
            h: &Hyperplane,
            bounds: &[(i64, i64)],
            t: &BigInt,
            an: &BigInt,
            partial: &mut Vec<BigInt>,
            idx: usize,
            acc: BigInt,
            out: &mut Vec<Vec<BigInt>>,
        ) {
            let n = h.a.len();
            if idx == n - 1 {
                let (pn, rem) = (t - &acc).div_rem(an);
                if rem.is_zero() {
                    let (lo, hi) = bounds[n - 1];
                    if pn >= BigInt::from(lo) && pn <= BigInt::from(hi) {
                        partial[n - 1] = pn;
                        out.push(partial.clone());
                    }
                }
                return;
            }
            let (lo, hi) = bounds[idx];
            for c in lo..=hi {
                partial[idx] = BigInt::from(c);
                let next = &acc + &h.a[idx] * BigInt::from(c);
                recurse(h, bounds, t, an, partial, idx + 1, next, out);
            }
        }
        recurse(self, bounds, &t, an, &mut partial, 0, BigInt::zero(), &mut out);
        Ok(out)
    }

    /// Deterministic pseudo-random tail `y ∈ ℚ^{n-1}` with denominators up
    /// to `denom_bound`; lift it to obtain a point of the plane.
    pub fn sample_tail(&self, seed: u64, denom_bound: u64) -> Vec<Rational> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let b = denom_bound.max(1) as i64;
        (0..self.a.len() - 1)
            .map(|_| {
                let den = rng.gen_range(1..=b);
                let num = rng.gen_range(-b..=b);
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect()
    }

    /// Exhaustively test the transfer property around the exact point `x`
    /// (which must lie on the plane): for every `q <= q_max` and every
    /// candidate `p` within rounding range, any good approximation
    /// (`|xᵢ − pᵢ/q| < q^{-τ}` strictly, all coordinates) at or above the
    /// threshold must satisfy the exact identity.
    pub fn transfer_property_test(
        &self,
        x: &[Rational],
        tau: &Rational,
        q_max: u64,
    ) -> Result<TransferReport> {
        if *tau <= Rational::one() {
            return Err(Error::Domain(format!("transfer needs tau > 1, got {tau}")));
        }
        if !self.contains(x) {
            return Err(Error::Domain("the supplied point is not on the plane".into()));
        }
        let threshold = self.dependence_threshold(tau)?;
        let mut hits_checked = 0u64;
        let mut violations = Vec::new();
        let mut below = Vec::new();
        for q in 1..=q_max {
            let qb = BigUint::from(q);
            // per-coordinate candidates: round(q xᵢ) and neighbors that
            // strictly beat q^{-tau}
            let mut coord_choices: Vec<Vec<BigInt>> = Vec::with_capacity(x.len());
            for xi in x {
                let center = (xi * BigRational::from(BigInt::from(q))).round().to_integer();
                let mut ok = Vec::new();
                for off in -1i64..=1 {
                    let pi = &center + BigInt::from(off);
                    let d = (xi - BigRational::new(pi.clone(), BigInt::from(q))).abs();
                    let good = d.is_zero()
                        || compare_frac_to_power(
                            d.numer().magnitude(),
                            d.denom().magnitude(),
                            &qb,
                            tau,
                        )? == std::cmp::Ordering::Less;
                    if good {
                        ok.push(pi);
                    }
                }
                coord_choices.push(ok);
            }
            if coord_choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            // expand the (tiny) cartesian product
            let mut combos: Vec<Vec<BigInt>> = vec![Vec::new()];
            for choices in &coord_choices {
                let mut next = Vec::new();
                for c in &combos {
                    for pi in choices {
                        let mut c2 = c.clone();
                        c2.push(pi.clone());
                        next.push(c2);
                    }
                }
                combos = next;
            }
            for p in combos {
                hits_checked += 1;
                if !self.check_transfer(q, &p) {
                    if BigUint::from(q) >= threshold {
                        violations.push((q, p));
                    } else {
                        below.push((q, p));
                    }
                }
            }
        }
        Ok(TransferReport {
            threshold,
            hits_checked,
            violations,
            below_threshold_failures: below,
        })
    }

    /// Exact bi-Lipschitz sandwich for two points given by their tails:
    /// `‖tail(x)−tail(y)‖∞ ≤ ‖x−y‖∞ ≤ K(A)·‖tail(x)−tail(y)‖∞`.
    pub fn bilipschitz_holds(&self, y1: &[Rational], y2: &[Rational]) -> Result<bool> {
        let x1 = self.lift(y1)?;
        let x2 = self.lift(y2)?;
        let tail_norm = y1
            .iter()
            .zip(y2)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let full_norm = tail_norm.clone().max((x1 - x2).abs());
        Ok(tail_norm <= full_norm && full_norm <= self.lipschitz_constant() * &tail_norm)
    }

    /// Build a point of the plane whose first `n-1` coordinates are the
    /// values of seed constructions, and scan `q <= q_max` for proven
    /// simultaneous approximations `|xᵢ − pᵢ/q| < K(A)^{-1} q^{-τ}` (first
    /// `n-1` coordinates) with exact interval arithmetic at `prec` decimal
    /// digits. Each hit is completed through the transfer identity where
    /// possible and the final coordinate is tested against `q^{-τ}`.
    pub fn wstar_point_from_seed(
        &self,
        seeds: &[PrimePairConstruction],
        tau: &Rational,
        spec: &FreeSetSpec,
        q_max: u64,
        prec: u32,
    ) -> Result<ScanReport> {
        if *tau <= crate::exact::ratio(2, 1) {
            return Err(Error::Domain(format!(
                "seeded scans need tau > 2 for proven seed hits, got {tau}"
            )));
        }
        let n = self.a.len();
        if seeds.len() != n - 1 {
            return Err(Error::Domain(format!(
                "need {} seed constructions, got {}",
                n - 1,
                seeds.len()
            )));
        }
        let depth = seeds[0].len();
        if seeds.iter().any(|s| s.len() != depth) {
            return Err(Error::Range(
                "seed constructions must have equal usable depth".into(),
            ));
        }
        let v_u64 = self.v.to_u64().ok_or_else(|| {
            Error::Range("target denominator too large for membership tests".into())
        })?;
        if spec.member(v_u64)? {
            return Err(Error::Domain(format!(
                "the target denominator v = {v_u64} must lie outside the denominator set"
            )));
        }
        if q_max == 0 {
            return Err(Error::Domain("q_max must be >= 1".into()));
        }

        // scaled enclosures of the first n-1 coordinates
        let scale = BigInt::from(pow10(prec));
        let coords: Vec<(BigInt, BigInt)> = seeds
            .iter()
            .map(|s| s.continued_fraction().scaled_enclosure(prec))
            .collect();
        // lifted coordinate interval: (u/v − Σ aᵢ·[xᵢ]) / aₙ
        let mut sum_lo = BigInt::zero();
        let mut sum_hi = BigInt::zero();
        for (ai, (lo, hi)) in self.a.iter().zip(&coords) {
            if ai.is_negative() {
                sum_lo += ai * hi;
                sum_hi += ai * lo;
            } else {
                sum_lo += ai * lo;
                sum_hi += ai * hi;
            }
        }
        let t_lo = (&self.u * &scale).div_floor(&self.v) - &sum_hi;
        let t_hi = (&self.u * &scale).div_ceil(&self.v) - &sum_lo;
        let an = self.a.last().unwrap();
        let lifted = if an.is_negative() {
            (t_hi.div_floor(an), t_lo.div_ceil(an))
        } else {
            (t_lo.div_floor(an), t_hi.div_ceil(an))
        };
        let mut x_present: Vec<(String, String)> = coords
            .iter()
            .map(|(lo, hi)| (format_scaled(lo, prec), format_scaled(hi, prec)))
            .collect();
        x_present.push((format_scaled(&lifted.0, prec), format_scaled(&lifted.1, prec)));

        let threshold = self.dependence_threshold(tau)?;
        let k_num: BigInt = self.a.iter().map(|x| x.abs()).sum();
        let k_den = an.abs();

        // per-q classification, parallel over chunks, merged in q-order
        let qs: Vec<u64> = (1..=q_max).collect();
        let results: Vec<Result<Option<ScanHit>>> = qs
            .par_iter()
            .map(|&q| {
                self.classify_q(
                    q, &coords, &lifted, &scale, tau, &k_num, &k_den, spec,
                )
            })
            .collect();
        let mut hits = Vec::new();
        for r in results {
            if let Some(h) = r? {
                hits.push(h);
            }
        }
        let in_q_count = hits
            .iter()
            .filter(|h| h.proof == Proof::Proven && h.in_q)
            .count();
        let out_q_count = hits
            .iter()
            .filter(|h| h.proof == Proof::Proven && !h.in_q)
            .count();
        let inconclusive_count = hits.iter().filter(|h| h.proof == Proof::Inconclusive).count();
        let large_ok = hits
            .iter()
            .filter(|h| {
                h.proof == Proof::Proven && h.full && BigUint::from(h.q) >= threshold
            })
            .all(|h| (BigInt::from(h.q) % &self.v).is_zero());
        Ok(ScanReport {
            x: x_present,
            tau: tau.clone(),
            q_max,
            threshold,
            hits,
            in_q_count,
            out_q_count,
            inconclusive_count,
            large_full_hits_multiple_of_v: large_ok,
        })
    }

    /// Decide denominator `q`: None (proven miss or nothing close),
    /// or a hit/inconclusive entry.
    #[allow(clippy::too_many_arguments)]
    fn classify_q(
        &self,
        q: u64,
        coords: &[(BigInt, BigInt)],
        lifted: &(BigInt, BigInt),
        scale: &BigInt,
        tau: &Rational,
        k_num: &BigInt,
        k_den: &BigInt,
        spec: &FreeSetSpec,
    ) -> Result<Option<ScanHit>> {
        let qb = BigUint::from(q);
        let qi = BigInt::from(q);
        let mut p = Vec::with_capacity(self.a.len());
        let mut all_proven = true;
        for (lo, hi) in coords {
            match classify_coord(lo, hi, &qi, &qb, scale, tau, Some((k_num, k_den)))? {
                CoordOutcome::Hit(pi) => p.push(pi),
                CoordOutcome::Inconclusive(pi) => {
                    p.push(pi);
                    all_proven = false;
                }
                CoordOutcome::Miss => return Ok(None),
            }
        }
        // complete via the exact identity v·Σaᵢpᵢ = u·q when divisible
        let uq = &self.u * &qi;
        let (t, rem) = uq.div_rem(&self.v);
        let mut full = false;
        if rem.is_zero() {
            let acc: BigInt = self
                .a
                .iter()
                .zip(&p)
                .map(|(ai, pi)| ai * pi)
                .sum();
            let an = self.a.last().unwrap();
            let (pn, rem2) = (&t - &acc).div_rem(an);
            if rem2.is_zero() {
                match classify_coord(&lifted.0, &lifted.1, &qi, &qb, scale, tau, None)? {
                    CoordOutcome::Hit(cand) if cand == pn => {
                        p.push(pn);
                        full = true;
                    }
                    CoordOutcome::Inconclusive(cand) if cand == pn => {
                        p.push(pn);
                        full = true;
                        all_proven = false;
                    }
                    _ => {}
                }
            }
        }
        let in_q = spec.member(q)?;
        Ok(Some(ScanHit {
            q,
            p,
            full,
            proof: if all_proven {
                Proof::Proven
            } else {
                Proof::Inconclusive
            },
            in_q,
        }))
    }
}

enum CoordOutcome {
    Hit(BigInt),
    Inconclusive(BigInt),
    Miss,
}

/// Three-valued test of `|x − p/q| < K⁻¹ q^{-τ}` for the best integer `p`,
/// where `x` is known only through the scaled enclosure `[lo, hi]/scale`.
/// `strengthen = Some((k_num, k_den))` multiplies distances by `K` before
/// the comparison; `None` tests against the plain `q^{-τ}`.
fn classify_coord(
    lo: &BigInt,
    hi: &BigInt,
    qi: &BigInt,
    qb: &BigUint,
    scale: &BigInt,
    tau: &Rational,
    strengthen: Option<(&BigInt, &BigInt)>,
) -> Result<CoordOutcome> {
    // candidates: integers p with p·scale within rounding range of q·[lo,hi]
    let qlo = lo * qi;
    let qhi = hi * qi;
    let p_min: BigInt = qlo.div_floor(scale) - 1;
    let p_max: BigInt = qhi.div_ceil(scale) + 1;
    let one = BigInt::one();
    let (k_num, k_den) = strengthen.unwrap_or((&one, &one));
    // K·d vs q^-tau with d = num/(q·scale): compare (k_num·num)/(k_den·q·scale)
    let den = (k_den * qi * scale).magnitude().clone();
    // rank 0 = proven hit, 1 = inconclusive; ties broken by distance
    let mut best: Option<(u8, BigUint, BigInt)> = None;
    let mut p = p_min;
    while p <= p_max {
        let ps = &p * scale;
        let d_lo = (&qlo - &ps).magnitude().clone();
        let d_hi = (&qhi - &ps).magnitude().clone();
        let inside = qlo <= ps && ps <= qhi;
        let d_max = d_lo.clone().max(d_hi.clone());
        let d_min = d_lo.min(d_hi);
        let num_max = k_num.magnitude() * &d_max;
        let beats = |num: &BigUint| -> Result<bool> {
            Ok(num.is_zero()
                || compare_frac_to_power(num, &den, qb, tau)? == std::cmp::Ordering::Less)
        };
        let rank = if beats(&num_max)? {
            Some(0u8)
        } else if inside || beats(&(k_num.magnitude() * &d_min))? {
            Some(1u8)
        } else {
            None // proven miss for this candidate
        };
        if let Some(r) = rank {
            let better = match &best {
                None => true,
                Some((br, bd, _)) => r < *br || (r == *br && d_max < *bd),
            };
            if better {
                best = Some((r, d_max, p.clone()));
            }
        }
        p += 1;
    }
    Ok(match best {
        Some((0, _, p)) => CoordOutcome::Hit(p),
        Some((_, _, p)) => CoordOutcome::Inconclusive(p),
        None => CoordOutcome::Miss,
    })
}

/// Least `q₀ >= 1` with `q₀^{τ-1} > Σ|aᵢ|`, computed exactly as
/// `⌊(S^d)^{1/c}⌋ + 1` for `τ − 1 = c/d`.
pub fn dependence_threshold(a: &[BigInt], tau: &Rational) -> Result<BigUint> {
    if *tau <= Rational::one() {
        return Err(Error::Domain(format!(
            "the threshold needs tau > 1, got {tau}"
        )));
    }
    let excess = tau - Rational::one();
    let c = excess
        .numer()
        .to_u32()
        .ok_or_else(|| Error::Range("tau too large".into()))?;
    let d = excess
        .denom()
        .to_u32()
        .filter(|&d| d <= 64)
        .ok_or_else(|| Error::Range(format!("tau denominator {} too large", excess.denom())))?;
    let s: BigInt = a.iter().map(|x| x.abs()).sum();
    let s = s.magnitude().clone();
    Ok(s.pow(d).nth_root(c) + 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::liouville::KChoice;
    use proptest::prelude::*;

    fn plane(a: &[i64], u: i64, v: i64) -> Hyperplane {
        Hyperplane::from_i64(a, u, v).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    #[test]
    fn construction_canonicalizes_and_validates() {
        let h = plane(&[1, 1], 2, -4);
        assert_eq!(h.u(), &BigInt::from(-1)); // 2/-4 -> -1/2
        assert_eq!(h.v(), &BigInt::from(2));
        let h0 = plane(&[3, -5], 0, 7);
        assert_eq!(h0.u(), &BigInt::from(0)); // 0/7 -> 0/1
        assert_eq!(h0.v(), &BigInt::from(1));
        assert!(Hyperplane::from_i64(&[4], 1, 1).is_err()); // dimension 1
        assert!(Hyperplane::from_i64(&[1, 0], 1, 1).is_err()); // a_n = 0
        assert!(Hyperplane::from_i64(&[1, 1], 1, 0).is_err()); // v = 0
    }

    #[test]
    fn lipschitz_constant_examples() {
        assert_eq!(plane(&[1, 1], 1, 2).lipschitz_constant(), rat(2, 1));
        assert_eq!(plane(&[3, -2, 6], 0, 1).lipschitz_constant(), rat(11, 6));
        assert_eq!(plane(&[0, 1], 0, 1).lipschitz_constant(), rat(1, 1));
    }

    #[test]
    fn lift_and_contains_agree() {
        let h = plane(&[1, 1], 1, 1); // x + y = 1
        assert_eq!(h.lift(&[rat(1, 3)]).unwrap(), rat(2, 3));
        assert!(h.contains(&[rat(1, 3), rat(2, 3)]));
        assert!(!h.contains(&[rat(1, 3), rat(1, 3)]));
        let g = plane(&[2, -3, 4], 5, 6); // 2x - 3y + 4z = 5/6
        let z = g.lift(&[rat(1, 2), rat(-1, 3)]).unwrap();
        assert!(g.contains(&[rat(1, 2), rat(-1, 3), z]));
        assert!(h.lift(&[rat(1, 2), rat(1, 2)]).is_err()); // wrong arity
    }

    #[test]
    fn transfer_identity_matches_incidence() {
        let h = plane(&[1, 1], 1, 2); // x + y = 1/2
        assert!(h.check_transfer(4, &[BigInt::from(1), BigInt::from(1)]));
        assert!(!h.check_transfer(3, &[BigInt::from(1), BigInt::from(1)]));
        assert!(!h.check_transfer(4, &[BigInt::from(2), BigInt::from(1)]));
    }

    #[test]
    fn threshold_examples() {
        let tau3 = rat(3, 1);
        let t = dependence_threshold(&[BigInt::from(1), BigInt::from(-1)], &tau3).unwrap();
        assert_eq!(t, BigUint::from(2u32)); // least q with q^2 > 2
        let t = dependence_threshold(
            &[BigInt::from(1), BigInt::from(1), BigInt::from(1)],
            &rat(2, 1),
        )
        .unwrap();
        assert_eq!(t, BigUint::from(4u32)); // least q with q^1 > 3
        let t = dependence_threshold(&[BigInt::from(1), BigInt::from(1)], &rat(5, 2)).unwrap();
        assert_eq!(t, BigUint::from(2u32)); // least q with q^{3/2} > 2
        assert!(dependence_threshold(&[BigInt::from(1)], &rat(1, 1)).is_err());
    }

    #[test]
    fn threshold_really_is_least() {
        // exhaustive check against the definition for several (A, tau)
        for (a, tau) in [
            (vec![1i64, -1], rat(3, 1)),
            (vec![1, 1, 1], rat(2, 1)),
            (vec![7, -3, 2], rat(5, 2)),
            (vec![10, 10], rat(11, 10)),
        ] {
            let coeffs: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
            let q0 = dependence_threshold(&coeffs, &tau).unwrap();
            let s: u64 = a.iter().map(|x| x.unsigned_abs()).sum();
            let excess = &tau - Rational::one();
            let c = excess.numer().to_u32().unwrap();
            let d = excess.denom().to_u32().unwrap();
            let beats = |q: &BigUint| q.pow(c) > BigUint::from(s).pow(d);
            assert!(beats(&q0), "threshold fails its own bound for {a:?}");
            let prev = &q0 - 1u32;
            if !prev.is_zero() {
                assert!(!beats(&prev), "threshold not minimal for {a:?}");
            }
        }
    }

    #[test]
    fn rational_points_enumeration() {
        let h = plane(&[1, 1], 1, 1); // p1 + p2 = q
        let pts = h.rational_points(3, &[(0, 3), (0, 3)]).unwrap();
        assert_eq!(pts.len(), 4); // (0,3) (1,2) (2,1) (3,0)
        assert!(pts.iter().all(|p| h.check_transfer(3, p)));

        let g = plane(&[1, -1], 1, 2); // p1 - p2 = q/2
        assert!(g.rational_points(3, &[(-5, 5), (-5, 5)]).unwrap().is_empty());
        let pts = g.rational_points(4, &[(-5, 5), (-5, 5)]).unwrap();
        assert_eq!(pts.len(), 9); // p1 in -3..=5, p2 = p1 - 2
        assert!(pts.iter().all(|p| g.check_transfer(4, p)));

        // unsolvable gcd: 2p1 + 2p2 = 1 has no integer solutions
        let odd = plane(&[2, 2], 1, 1);
        assert!(odd.rational_points(1, &[(-9, 9), (-9, 9)]).unwrap().is_empty());
    }

    #[test]
    fn transfer_test_finds_no_violations_on_plane_points() {
        let h = plane(&[1, 1], 1, 1);
        let x = [rat(1, 3), rat(2, 3)];
        let report = h.transfer_property_test(&x, &rat(3, 1), 200).unwrap();
        assert_eq!(report.threshold, BigUint::from(2u32));
        assert!(report.hits_checked > 0);
        assert!(report.violations.is_empty());
        // q = 1 admits sloppy approximations that ignore the relation
        assert!(report
            .below_threshold_failures
            .iter()
            .all(|(q, _)| BigUint::from(*q) < report.threshold));
        assert!(!report.below_threshold_failures.is_empty());
    }

    #[test]
    fn transfer_test_rejects_off_plane_points() {
        let h = plane(&[1, 1], 1, 1);
        assert!(h
            .transfer_property_test(&[rat(1, 3), rat(1, 3)], &rat(3, 1), 10)
            .is_err());
        assert!(h
            .transfer_property_test(&[rat(1, 3), rat(2, 3)], &rat(1, 1), 10)
            .is_err());
    }

    #[test]
    fn relabeling_axes_preserves_transfer_statistics() {
        let h1 = plane(&[2, 3, 5], 1, 1);
        let h2 = plane(&[3, 2, 5], 1, 1);
        let x1 = [rat(1, 7), rat(2, 7)];
        let x2 = [rat(2, 7), rat(1, 7)];
        let p1 = h1.lift(&x1.to_vec()).unwrap();
        let full1 = vec![x1[0].clone(), x1[1].clone(), p1];
        let p2 = h2.lift(&x2.to_vec()).unwrap();
        let full2 = vec![x2[0].clone(), x2[1].clone(), p2];
        let r1 = h1.transfer_property_test(&full1, &rat(3, 1), 120).unwrap();
        let r2 = h2.transfer_property_test(&full2, &rat(3, 1), 120).unwrap();
        assert_eq!(r1.threshold, r2.threshold);
        assert_eq!(r1.hits_checked, r2.hits_checked);
        let qs1: Vec<u64> = r1.violations.iter().map(|(q, _)| *q).collect();
        let qs2: Vec<u64> = r2.violations.iter().map(|(q, _)| *q).collect();
        assert_eq!(qs1, qs2);
        assert_eq!(h1.lipschitz_constant(), h2.lipschitz_constant());
    }

    #[test]
    fn sampling_is_deterministic_and_on_plane() {
        let h = plane(&[2, -3, 4], 5, 6);
        let t1 = h.sample_tail(42, 50);
        let t2 = h.sample_tail(42, 50);
        assert_eq!(t1, t2);
        assert_ne!(t1, h.sample_tail(43, 50));
        let mut x = t1.clone();
        x.push(h.lift(&t1).unwrap());
        assert!(h.contains(&x));
    }

    fn run_23(extends: usize) -> PrimePairConstruction {
        let mut c = PrimePairConstruction::init(2, 3, 1).unwrap();
        for _ in 0..extends {
            c = c.extend(KChoice::Minimal).unwrap();
        }
        c
    }

    #[test]
    fn seeded_scan_hits_seed_denominators() {
        let h = plane(&[1, 1], 1, 2); // x1 + x2 = 1/2, v = 2
        let spec = FreeSetSpec::parse("coprime:6").unwrap();
        let seed = run_23(3); // denominators 1, 3, 4, 27, 2^20
        let report = h
            .wstar_point_from_seed(&[seed], &rat(5, 2), &spec, 50, 80)
            .unwrap();
        assert_eq!(report.threshold, BigUint::from(2u32));
        let proven: Vec<u64> = report
            .hits
            .iter()
            .filter(|h| h.proof == Proof::Proven)
            .map(|h| h.q)
            .collect();
        assert_eq!(proven, vec![1, 4, 27]);
        let at = |q: u64| report.hits.iter().find(|h| h.q == q).unwrap();
        // q = 4 completes through the identity: p = (1, 1), both proven
        assert!(at(4).full);
        assert_eq!(at(4).p, vec![BigInt::from(1), BigInt::from(1)]);
        // q = 27 is odd, so v = 2 never divides u*q: no completion
        assert!(!at(27).full);
        assert_eq!(at(27).p, vec![BigInt::from(7)]);
        // membership flags against gcd(q, 6) = 1
        assert!(at(1).in_q);
        assert!(!at(4).in_q);
        assert!(!at(27).in_q);
        assert_eq!(report.in_q_count, 1);
        assert_eq!(report.out_q_count, 2);
        assert_eq!(report.inconclusive_count, 0);
        assert!(report.large_full_hits_multiple_of_v);
        // presentations: both coordinates enclosed near 0.2593 and 0.2407
        assert!(report.x[0].0.starts_with("0.259"));
        assert!(report.x[1].0.starts_with("0.240"));
    }

    #[test]
    fn seeded_scan_guards() {
        let h = plane(&[1, 1], 1, 2);
        let spec = FreeSetSpec::parse("coprime:6").unwrap();
        let seed = run_23(2);
        // tau must exceed 2
        assert!(h
            .wstar_point_from_seed(&[seed.clone()], &rat(2, 1), &spec, 10, 40)
            .is_err());
        // v = 1 is a member of every divisor-closed set
        let h1 = plane(&[1, 1], 0, 1);
        assert!(h1
            .wstar_point_from_seed(&[seed.clone()], &rat(5, 2), &spec, 10, 40)
            .is_err());
        // wrong seed count
        assert!(h
            .wstar_point_from_seed(&[], &rat(5, 2), &spec, 10, 40)
            .is_err());
        // unequal depths in higher dimension
        let g = plane(&[1, 1, 1], 1, 2);
        let other = run_23(3);
        let err = g
            .wstar_point_from_seed(&[seed, other], &rat(5, 2), &spec, 10, 40)
            .unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn seeded_scan_goes_inconclusive_when_precision_runs_out() {
        // with a shallow seed the enclosure is ~1e-12 wide, so a hit at
        // q = 27 still proves, but scanning near q = 2^20 cannot decide
        let h = plane(&[1, 1], 1, 2);
        let spec = FreeSetSpec::parse("coprime:6").unwrap();
        let seed = run_23(3);
        let report = h
            .wstar_point_from_seed(&[seed], &rat(5, 2), &spec, 1 << 11, 80)
            .unwrap();
        assert!(report.hits.iter().any(|h| h.q == 27 && h.proof == Proof::Proven));
        // the enclosure never misleads: no violations of the large-hit rule
        assert!(report.large_full_hits_multiple_of_v);
    }

    #[test]
    fn bilipschitz_sandwich_on_exact_pairs() {
        let planes = [
            plane(&[1, 1], 1, 1),
            plane(&[2, -3, 4], 5, 6),
            plane(&[7, 1, -2], 0, 1),
        ];
        for h in &planes {
            for s in 0..10u64 {
                let y1 = h.sample_tail(s, 40);
                let y2 = h.sample_tail(s + 1000, 40);
                assert!(h.bilipschitz_holds(&y1, &y2).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn transfer_identity_equals_exact_incidence(
            a1 in -9i64..=9, a2 in 1i64..=9, u in -5i64..=5, v in 1i64..=5,
            p1 in -20i64..=20, p2 in -20i64..=20, q in 1u64..=30,
        ) {
            let h = plane(&[a1, a2], u, v);
            let p = vec![BigInt::from(p1), BigInt::from(p2)];
            let x = vec![rat(p1, q as i64), rat(p2, q as i64)];
            prop_assert_eq!(h.check_transfer(q, &p), h.contains(&x));
        }

        #[test]
        fn bilipschitz_holds_for_random_tails(
            a in proptest::collection::vec(-8i64..=8, 1..=2),
            an in prop_oneof![-8i64..=-1, 1i64..=8],
            u in -4i64..=4, v in 1i64..=4,
            seed1 in 0u64..=500, seed2 in 501u64..=1000,
        ) {
            let mut coeffs = a;
            coeffs.push(an);
            let h = Hyperplane::from_i64(&coeffs, u, v).unwrap();
            let y1 = h.sample_tail(seed1, 60);
            let y2 = h.sample_tail(seed2, 60);
            prop_assert!(h.bilipschitz_holds(&y1, &y2).unwrap());
        }
    }
}
