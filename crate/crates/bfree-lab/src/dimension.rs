//! Dimension formulas and a desk-scale cover-series estimator.
//!
//! Three limsup families share the same formula skeleton: the classical
//! simultaneously-approximable points (dimension `(n+1)/τ`), the variant
//! with denominators restricted to a set `Q` of exponent of convergence ν
//! (dimension `(n+ν)/τ`), and the variant with denominators *avoiding* `Q`
//! (full value `(n+1)/τ` when ν < 1, a two-sided bound `[n/τ, (n+1)/τ]`
//! when ν = 1). Each formula holds only above an explicit exponent gate;
//! [`theoretical_dimension`] reports the gates it checked and refuses to
//! assert a value outside them.
//!
//! The natural cover of such a set uses, for each admissible denominator
//! `q`, about `qⁿ` balls of diameter `2q^{-τ}`; its `s`-volume sum is
//! `Σ qⁿ (2q^{-τ})^s`, and the abscissa where this series flips from
//! divergent to convergent is `(n+ν)/τ`. [`cover_series`] evaluates exact
//! partial sums, and [`critical_exponent`] estimates the abscissa from the
//! growth slope of dyadic block sums — an honest desk-scale surrogate for
//! a quantity no box-counting experiment can see (the sets are dense, so
//! their box dimension is always `n`).

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::decimal::DecimalInterval;
use crate::exact::Rational;
use crate::qfree::{ExponentValue, FreeSetSpec};
use crate::{Error, Result};

/// Which limsup family a formula speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    /// All denominators allowed.
    W,
    /// Denominators restricted to the set.
    WQ,
    /// Denominators restricted to the complement of the set.
    WStar,
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SetKind::W => write!(f, "W"),
            SetKind::WQ => write!(f, "W(Q)"),
            SetKind::WStar => write!(f, "W*"),
        }
    }
}

/// Exponent of convergence, either supplied directly or derived from a
/// denominator-set description.
pub enum NuInput<'a> {
    Spec(&'a FreeSetSpec),
    Exact(Rational),
}

/// What a dimension formula asserts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaValue {
    Value(Rational),
    /// Lower and upper bound (the ν = 1 complement case).
    Interval(Rational, Rational),
    /// Some hypothesis gate failed; no claim is made.
    NotAsserted { reason: String },
}

/// A formula value together with the hypothesis gates that justify it.
#[derive(Clone, Debug)]
pub struct DimensionVerdict {
    pub kind: SetKind,
    pub n: u32,
    pub tau: Rational,
    /// The exponent of convergence used, when the family depends on one.
    pub nu: Option<Rational>,
    pub value: FormulaValue,
    /// Named hypothesis gates with their outcomes.
    pub gates: Vec<(String, bool)>,
    /// Which classical result backs the asserted value.
    pub source: &'static str,
}

/// One dyadic block of the cover series at one grid exponent.
#[derive(Clone, Debug)]
pub struct BlockRow {
    pub s: f64,
    pub block_j: u32,
    pub block_sum: f64,
    pub count: u64,
    /// The fitted growth slope for this `s` (shared across its rows).
    pub slope: Option<f64>,
}

/// Outcome of the dyadic-block abscissa scan.
#[derive(Clone, Debug)]
pub struct CriticalExponentReport {
    pub spec: String,
    pub n: u32,
    pub tau: Rational,
    pub q_max: u64,
    /// Interpolated zero crossing of the block-growth slope.
    pub s_star: f64,
    /// The abscissa `(n+ν)/τ` when ν is exactly known.
    pub exact_value: Option<f64>,
    pub abs_error: Option<f64>,
    /// `(s, fitted slope)` per grid point; `None` when fewer than two
    /// usable blocks existed.
    pub slopes: Vec<(f64, Option<f64>)>,
    pub rows: Vec<BlockRow>,
    /// Dyadic blocks with no members, skipped in every fit.
    pub skipped_blocks: Vec<u32>,
}

/// Closed-form dimension with explicit hypothesis gates.
///
/// Asserts `(n+1)/τ` for the unrestricted family above `τ > 1 + 1/n`,
/// `(n+ν)/τ` for the restricted family above `τ > 1 + ν/n`, and for the
/// complement family either `(n+1)/τ` (ν < 1, same gate as unrestricted)
/// or the interval `[n/τ, (n+1)/τ]` (ν = 1, needing `n >= 2` and
/// `τ > 1 + 1/(n−1)`). Outside its gates a formula is reported as not
/// asserted rather than extrapolated.
pub fn theoretical_dimension(
    kind: SetKind,
    n: u32,
    tau: &Rational,
    nu: NuInput<'_>,
) -> Result<DimensionVerdict> {
    if n == 0 {
        return Err(Error::Domain("ambient dimension n must be >= 1".into()));
    }
    if *tau <= Rational::one() {
        return Err(Error::Domain(format!(
            "approximation exponent must satisfy tau > 1, got {tau}"
        )));
    }
    let n_rat = Rational::from_integer(n.into());
    let one = Rational::one();

    // resolve ν where the family needs it
    let nu_value: Option<Rational> = match (&kind, nu) {
        (SetKind::W, _) => None,
        (_, NuInput::Exact(v)) => {
            if v.is_negative() || v > one {
                return Err(Error::Domain(format!(
                    "an exponent of convergence lies in [0, 1], got {v}"
                )));
            }
            Some(v)
        }
        (_, NuInput::Spec(spec)) => match spec.convergence_exponent().value {
            ExponentValue::Exact(v) => Some(v),
            _ => {
                return Ok(DimensionVerdict {
                    kind,
                    n,
                    tau: tau.clone(),
                    nu: None,
                    value: FormulaValue::NotAsserted {
                        reason: format!(
                            "the exponent of convergence of `{spec}` is not exactly known"
                        ),
                    },
                    gates: vec![],
                    source: "none",
                });
            }
        },
    };

    let mut gates: Vec<(String, bool)> = Vec::new();
    let gate = |name: String, pass: bool, gates: &mut Vec<(String, bool)>| -> bool {
        gates.push((name, pass));
        pass
    };

    let (value, source) = match kind {
        SetKind::W => {
            let bound = &one + &one / &n_rat;
            let pass = gate(format!("tau > 1 + 1/{n}"), *tau > bound, &mut gates);
            if pass {
                (
                    FormulaValue::Value((&n_rat + &one) / tau),
                    "jarnik-besicovitch",
                )
            } else {
                (
                    FormulaValue::NotAsserted {
                        reason: format!("needs tau > {bound}"),
                    },
                    "jarnik-besicovitch",
                )
            }
        }
        SetKind::WQ => {
            let v = nu_value.clone().unwrap();
            let bound = &one + &v / &n_rat;
            let pass = gate(format!("tau > 1 + nu/{n}"), *tau > bound, &mut gates);
            if pass {
                (
                    FormulaValue::Value((&n_rat + &v) / tau),
                    "borosh-fraenkel",
                )
            } else {
                (
                    FormulaValue::NotAsserted {
                        reason: format!("needs tau > {bound}"),
                    },
                    "borosh-fraenkel",
                )
            }
        }
        SetKind::WStar => {
            let v = nu_value.clone().unwrap();
            if v < one {
                let bound = &one + &one / &n_rat;
                let pass = gate(format!("tau > 1 + 1/{n}"), *tau > bound, &mut gates);
                gate("nu < 1".into(), true, &mut gates);
                if pass {
                    (
                        FormulaValue::Value((&n_rat + &one) / tau),
                        "two-sided-bounds",
                    )
                } else {
                    (
                        FormulaValue::NotAsserted {
                            reason: format!("needs tau > {bound}"),
                        },
                        "two-sided-bounds",
                    )
                }
            } else {
                gate("nu = 1".into(), true, &mut gates);
                let dim_ok = gate("n >= 2".into(), n >= 2, &mut gates);
                if !dim_ok {
                    (
                        FormulaValue::NotAsserted {
                            reason: "the nu = 1 bounds need ambient dimension n >= 2".into(),
                        },
                        "two-sided-bounds",
                    )
                } else {
                    let bound =
                        &one + &one / Rational::from_integer((n - 1).into());
                    let pass = gate(
                        format!("tau > 1 + 1/{}", n - 1),
                        *tau > bound,
                        &mut gates,
                    );
                    if pass {
                        (
                            FormulaValue::Interval(&n_rat / tau, (&n_rat + &one) / tau),
                            "two-sided-bounds",
                        )
                    } else {
                        (
                            FormulaValue::NotAsserted {
                                reason: format!("needs tau > {bound}"),
                            },
                            "two-sided-bounds",
                        )
                    }
                }
            }
        }
    };

    Ok(DimensionVerdict {
        kind,
        n,
        tau: tau.clone(),
        nu: nu_value,
        value,
        gates,
        source,
    })
}

/// Exact partial sum `Σ_{q ∈ Q ∩ [q0, q1]} qⁿ (2 q^{-τ})^s` as a certified
/// decimal interval; every term is `2^s · q^{n - τs}` with rational
/// exponents, so the enclosure is exact up to one outward rounding per
/// term.
pub fn cover_series(
    spec: &FreeSetSpec,
    n: u32,
    tau: &Rational,
    s: &Rational,
    q0: u64,
    q1: u64,
    prec: u32,
) -> Result<DecimalInterval> {
    if !s.is_positive() {
        return Err(Error::Domain(format!("series exponent must be positive, got {s}")));
    }
    if q0 == 0 || q0 > q1 {
        return Err(Error::Domain(format!(
            "denominator range [{q0}, {q1}] must satisfy 1 <= q0 <= q1"
        )));
    }
    let diameter_pow = DecimalInterval::pow_of_uint(&BigUint::from(2u32), s, prec)?;
    let term_exp = Rational::from_integer(n.into()) - tau * s;
    let mut sum = DecimalInterval::zero(prec);
    for q in spec.range_members(q1)? {
        if q < q0 {
            continue;
        }
        let q_pow = DecimalInterval::pow_of_uint(&BigUint::from(q), &term_exp, prec)?;
        sum.add_assign(&diameter_pow.mul(&q_pow));
    }
    Ok(sum)
}

/// Estimate the convergence abscissa of the cover series by fitting the
/// growth exponent of dyadic block sums.
///
/// Blocks are `Q ∩ [2^j, 2^{j+1})` for `j = 4, …` up to the last block
/// inside `q_max`. For each grid exponent `s` the slope of
/// `log2(block sum)` against `j` is fitted by least squares; analytically
/// that slope is `n + ν − τs`, so its zero crossing estimates
/// `(n+ν)/τ`. Block sums use floating point in a fixed accumulation
/// order, so repeated runs agree bit for bit.
pub fn critical_exponent(
    spec: &FreeSetSpec,
    n: u32,
    tau: &Rational,
    q_max: u64,
    grid_step: f64,
) -> Result<CriticalExponentReport> {
    if n == 0 {
        return Err(Error::Domain("ambient dimension n must be >= 1".into()));
    }
    if q_max < 1 << 16 {
        return Err(Error::Domain(format!(
            "the block fit needs q_max >= 2^16, got {q_max}"
        )));
    }
    if !(grid_step > 0.0) || grid_step > n as f64 + 1.0 {
        return Err(Error::Domain(format!("bad grid step {grid_step}")));
    }
    let tau_f = tau
        .to_f64()
        .ok_or_else(|| Error::Range("tau out of floating range".into()))?;

    // dyadic blocks [2^j, 2^{j+1}) fully below q_max
    const J_MIN: u32 = 4;
    let j_max = (u64::BITS - (q_max + 1).leading_zeros()) - 2; // last full block
    let bitmap = spec.membership_bitmap(q_max)?;
    let mut blocks: Vec<(u32, Vec<u64>)> = Vec::new();
    let mut skipped = Vec::new();
    for j in J_MIN..=j_max {
        let members: Vec<u64> = (1u64 << j..1u64 << (j + 1))
            .filter(|&q| bitmap[q as usize])
            .collect();
        if members.is_empty() {
            skipped.push(j);
        } else {
            blocks.push((j, members));
        }
    }
    if blocks.len() < 2 {
        return Err(Error::Range(format!(
            "only {} nonempty dyadic blocks below {q_max}; cannot fit a slope",
            blocks.len()
        )));
    }

    let grid: Vec<f64> = (1..)
        .map(|i| i as f64 * grid_step)
        .take_while(|&s| s <= n as f64 + 1.0 + 1e-12)
        .collect();

    // per-s block sums and slopes; each s independent, order preserved
    let per_s: Vec<(Vec<(u32, f64, u64)>, Option<f64>)> = grid
        .par_iter()
        .map(|&s| {
            let rows: Vec<(u32, f64, u64)> = blocks
                .iter()
                .map(|(j, members)| {
                    let mut sum = 0.0f64;
                    for &q in members {
                        sum += 2f64.powf(s) * (q as f64).powf(n as f64 - tau_f * s);
                    }
                    (*j, sum, members.len() as u64)
                })
                .collect();
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|(_, sum, _)| *sum > 0.0 && sum.is_finite())
                .map(|(j, sum, _)| (*j as f64, sum.log2()))
                .collect();
            let slope = fit_slope(&pts);
            (rows, slope)
        })
        .collect();

    let slopes: Vec<(f64, Option<f64>)> = grid
        .iter()
        .zip(&per_s)
        .map(|(&s, (_, slope))| (s, *slope))
        .collect();
    let mut rows = Vec::new();
    for (&s, (block_rows, slope)) in grid.iter().zip(&per_s) {
        for &(j, sum, count) in block_rows {
            rows.push(BlockRow {
                s,
                block_j: j,
                block_sum: sum,
                count,
                slope: *slope,
            });
        }
    }

    // zero crossing of slope(s): analytically linear with slope −τ
    let mut s_star = None;
    for w in slopes.windows(2) {
        if let ((s0, Some(m0)), (s1, Some(m1))) = (&w[0], &w[1]) {
            if *m0 > 0.0 && *m1 <= 0.0 {
                s_star = Some(s0 + (s1 - s0) * m0 / (m0 - m1));
                break;
            }
        }
    }
    let s_star = match s_star {
        Some(v) => v,
        None => {
            return Err(Error::Range(
                "the grid does not bracket the slope's zero crossing".into(),
            ))
        }
    };

    let exact_value = match spec.convergence_exponent().value {
        ExponentValue::Exact(v) => {
            let nu = v.to_f64().unwrap_or(f64::NAN);
            Some((n as f64 + nu) / tau_f)
        }
        _ => None,
    };
    Ok(CriticalExponentReport {
        spec: spec.to_string(),
        n,
        tau: tau.clone(),
        q_max,
        s_star,
        exact_value,
        abs_error: exact_value.map(|e| (s_star - e).abs()),
        slopes,
        rows,
        skipped_blocks: skipped,
    })
}

/// Least-squares slope of `y` against `x`; `None` below two points.
fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}
