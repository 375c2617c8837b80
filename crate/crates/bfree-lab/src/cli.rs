//! Command-line front end.
//!
//! Five families of subcommands (`cf`, `qset`, `liouville`, `plane`,
//! `dim`) expose the library operations with reproducible, machine-
//! readable output. JSON schema v1: every number is a decimal string
//! (booleans stay booleans); integers beyond `--inline-digits` decimal
//! digits serialize as `{"prime": π, "exponent": e}` when they are known
//! prime powers. Identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success; 2 domain, range, or parse error; 3 result
//! inconclusive at the configured budget (any partial output is still
//! written).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::dimension::{self, FormulaValue, NuInput, SetKind};
use crate::exact::{parse_rational, Rational};
use crate::liouville::{KChoice, PrimePairConstruction, Status};
use crate::plane::{dependence_threshold, Hyperplane, Proof};
use crate::qfree::{ExponentValue, FreeSetSpec};
use crate::{Error, Result};

const SCHEMA_NOTE: &str = "JSON schema v1: numbers are decimal strings; prime powers beyond \
--inline-digits digits serialize as {\"prime\",\"exponent\"}. Exit codes: 0 ok, 2 domain/parse \
error, 3 inconclusive at budget.";

#[derive(Parser)]
#[command(
    name = "bfree-lab",
    version,
    about = "Exact simultaneous Diophantine approximation with divisibility-constrained denominators",
    after_help = SCHEMA_NOTE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal digits carried by interval enclosures.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    /// Stop constructions whose next denominator would exceed this many
    /// decimal digits.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    digit_budget: u64,
    /// Integers above this many digits serialize in prime-power form.
    #[arg(long, global = true, default_value_t = 10_000)]
    inline_digits: u64,
    /// Worker threads (overrides BFREE_LAB_THREADS; default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Continued fractions: expansion, convergents, best-approximation filter.
    #[command(subcommand)]
    Cf(CfCmd),
    /// Divisor-closed denominator sets.
    #[command(subcommand)]
    Qset(QsetCmd),
    /// Two-prime continued-fraction constructions.
    #[command(subcommand)]
    Liouville(LiouvilleCmd),
    /// Rational hyperplanes and the dependence transfer property.
    #[command(subcommand)]
    Plane(PlaneCmd),
    /// Dimension formulas and the cover-series abscissa.
    #[command(subcommand)]
    Dim(DimCmd),
}

#[derive(Subcommand)]
enum CfCmd {
    /// Canonical continued-fraction expansion of a rational.
    #[command(after_help = SCHEMA_NOTE)]
    Expand {
        /// The rational to expand, as p/q or an integer.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Convergents of a given prefix of partial quotients.
    #[command(after_help = SCHEMA_NOTE)]
    Convergents {
        /// Integer part a0.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a0: String,
        /// Comma-separated positive partial quotients a1,a2,…
        #[arg(long)]
        quotients: String,
    },
    /// Fractions p/q with q <= qmax satisfying |x − p/q| < 1/(2q²).
    #[command(after_help = SCHEMA_NOTE)]
    Legendre {
        /// The target rational, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Largest denominator to scan.
        #[arg(long)]
        qmax: u64,
    },
}

#[derive(Subcommand)]
enum QsetCmd {
    /// Exact membership test.
    #[command(after_help = SCHEMA_NOTE)]
    Member {
        /// Set literal: kfree:k | coprime:m | bfree:b1,b2,… | table:@file
        #[arg(long)]
        spec: String,
        /// The integer to test.
        #[arg(long)]
        q: u64,
    },
    /// Check the divisor-closure property on [1, n].
    #[command(after_help = SCHEMA_NOTE)]
    Verify {
        #[arg(long)]
        spec: String,
        /// Upper end of the checked range.
        #[arg(long)]
        n: u64,
    },
    /// Classify primes up to a bound as support / excluded / inconclusive.
    #[command(after_help = SCHEMA_NOTE)]
    Support {
        #[arg(long)]
        spec: String,
        /// Largest prime to classify.
        #[arg(long)]
        bound: u64,
        /// Multiple-scan depth for sets needing a search (default 10^6).
        #[arg(long)]
        scan_bound: Option<u64>,
    },
    /// Exponent of convergence, exact or fitted from counting data.
    #[command(after_help = SCHEMA_NOTE)]
    Nu {
        #[arg(long)]
        spec: String,
        /// Comma-separated count bounds; forces the log-log counting fit.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Partial Euler sandwich Σπ^{-ν} <= Σq^{-ν} <= Π(1+1/(π^ν−1)).
    #[command(after_help = SCHEMA_NOTE)]
    Euler {
        #[arg(long)]
        spec: String,
        /// Exponent ν, as a/b.
        #[arg(long)]
        nu: String,
        /// Sum and product truncated at this bound.
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Args, Clone)]
struct ConstructionArgs {
    /// First prime of the pair (owns even steps).
    #[arg(long)]
    p0: u64,
    /// Second prime of the pair (owns odd steps).
    #[arg(long)]
    p1: u64,
    /// Exponent of the first denominator q_1 = p1^alpha1.
    #[arg(long)]
    alpha1: u64,
    /// Target highest denominator index S (so q_0 … q_S).
    #[arg(long)]
    steps: u64,
    /// `minimal`, or a comma-separated explicit k per extension step.
    #[arg(long, default_value = "minimal")]
    k: String,
}

#[derive(Subcommand)]
enum LiouvilleCmd {
    /// Run the construction and emit its certificate.
    #[command(after_help = SCHEMA_NOTE)]
    Build {
        #[command(flatten)]
        args: ConstructionArgs,
    },
    /// Rebuild a certificate's construction and replay every check.
    #[command(after_help = SCHEMA_NOTE)]
    Verify {
        /// Certificate JSON produced by `liouville build`.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Certificate plus approximation evidence at an exponent tau > 2.
    #[command(after_help = SCHEMA_NOTE)]
    Evidence {
        #[command(flatten)]
        args: ConstructionArgs,
        /// Approximation exponent, as a/b.
        #[arg(long)]
        tau: String,
    },
    /// Irrationality-exponent profile w_s = 1 + ln q_{s+1} / ln q_s.
    #[command(after_help = SCHEMA_NOTE)]
    Profile {
        #[command(flatten)]
        args: ConstructionArgs,
    },
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// Complete a point: the last coordinate from the first n-1.
    #[command(after_help = SCHEMA_NOTE)]
    Lift {
        /// Comma-separated integer coefficients a1,…,an (an nonzero).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Target numerator u.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        u: String,
        /// Target denominator v >= 1.
        #[arg(long, default_value = "1")]
        v: String,
        /// Comma-separated rationals y1,…,y(n-1).
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Least q0 with q0^{tau-1} > Σ|ai|.
    #[command(after_help = SCHEMA_NOTE)]
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        tau: String,
    },
    /// Exhaustive small-scale transfer check around a point of the plane.
    #[command(after_help = SCHEMA_NOTE)]
    Transfer {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value = "1")]
        v: String,
        #[arg(long)]
        tau: String,
        /// Largest denominator to scan.
        #[arg(long)]
        qmax: u64,
        /// Explicit point x1,…,xn on the plane; sampled when omitted.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Seed for the sampled point.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Denominator bound for sampled coordinates.
        #[arg(long, default_value_t = 1000)]
        denom_bound: u64,
    },
    /// Integer solutions of v·Σ ai·pi = u·q inside a box.
    #[command(after_help = SCHEMA_NOTE)]
    Points {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value = "1")]
        v: String,
        /// The common denominator q.
        #[arg(long)]
        q: u64,
        /// Coordinate bounds lo,hi — once for all coordinates or repeated
        /// per coordinate.
        #[arg(long = "box", required = true, allow_hyphen_values = true)]
        boxes: Vec<String>,
    },
    /// Scan a seeded construction point on the plane for proven
    /// simultaneous approximations.
    #[command(after_help = SCHEMA_NOTE)]
    Wstar {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value = "1")]
        v: String,
        #[arg(long)]
        tau: String,
        /// Denominator set the hits are classified against.
        #[arg(long)]
        spec: String,
        /// Largest denominator to scan.
        #[arg(long)]
        qmax: u64,
        /// Seed constructions p0:p1:alpha1, comma-separated, one per
        /// free coordinate.
        #[arg(long)]
        seeds: String,
        /// Target highest denominator index for every seed.
        #[arg(long)]
        steps: u64,
        /// `minimal`, or explicit comma-separated k values per step.
        #[arg(long, default_value = "minimal")]
        k: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetArg {
    /// All denominators.
    W,
    /// Denominators inside the set.
    Wq,
    /// Denominators outside the set.
    Wstar,
}

#[derive(Subcommand)]
enum DimCmd {
    /// Closed-form dimension with hypothesis gates.
    #[command(after_help = SCHEMA_NOTE)]
    Formula {
        /// Ambient dimension n >= 1.
        #[arg(long)]
        n: u32,
        /// Approximation exponent, as a/b.
        #[arg(long)]
        tau: String,
        /// Which limsup family.
        #[arg(long, value_enum)]
        set: SetArg,
        /// Denominator set (its exponent of convergence is derived).
        #[arg(long)]
        spec: Option<String>,
        /// Explicit exponent of convergence, as a/b.
        #[arg(long)]
        nu: Option<String>,
    },
    /// Exact partial sum of the natural cover series.
    #[command(after_help = SCHEMA_NOTE)]
    Series {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        tau: String,
        /// Series exponent s > 0, as a/b.
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 1)]
        q0: u64,
        #[arg(long)]
        q1: u64,
    },
    /// Estimate the series' convergence abscissa from dyadic block slopes.
    #[command(after_help = SCHEMA_NOTE)]
    Critical {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        tau: String,
        #[arg(long, default_value_t = 1 << 20)]
        qmax: u64,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
    },
}

/// Parse argv, dispatch, write output; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    init_threads(cli.global.threads);
    match execute(&cli.command, &cli.global) {
        Ok(rendered) => {
            let body = rendered.body + "\n";
            let write_result = match &cli.global.out {
                Some(path) => std::fs::write(path, &body),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(body.as_bytes())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: i/o error: {e}");
                return 2;
            }
            rendered.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CapExceeded(_) => 3,
                _ => 2,
            }
        }
    }
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("BFREE_LAB_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

struct Rendered {
    body: String,
    exit: i32,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered { body, exit: 0 }
    }
}

fn execute(cmd: &Command, g: &GlobalOpts) -> Result<Rendered> {
    match cmd {
        Command::Cf(c) => run_cf(c, g),
        Command::Qset(c) => run_qset(c, g),
        Command::Liouville(c) => run_liouville(c, g),
        Command::Plane(c) => run_plane(c, g),
        Command::Dim(c) => run_dim(c, g),
    }
}

// ---- parsing helpers -------------------------------------------------

fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("`{s}` is not a natural number in {what}")))
        })
        .collect()
}

fn parse_bigint_list(text: &str, what: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("`{s}` is not an integer in {what}")))
        })
        .collect()
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .map(|s| {
            parse_rational(s.trim())
                .map_err(|_| Error::Parse(format!("`{s}` is not a rational in {what}")))
        })
        .collect()
}

fn parse_bigint(text: &str, what: &str) -> Result<BigInt> {
    text.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(format!("`{text}` is not an integer for {what}")))
}

/// Build a construction up to target index `steps`, honoring the budget.
fn build_construction(args: &ConstructionArgs, budget: u64) -> Result<PrimePairConstruction> {
    if args.steps < 1 {
        return Err(Error::Domain("--steps must be >= 1".into()));
    }
    let extends = (args.steps - 1) as usize;
    let ks: Vec<KChoice> = if args.k.trim() == "minimal" {
        vec![KChoice::Minimal; extends]
    } else {
        let vals = parse_u64_list(&args.k, "--k")?;
        if vals.len() != extends {
            return Err(Error::Domain(format!(
                "--k lists {} values but --steps {} needs {}",
                vals.len(),
                args.steps,
                extends
            )));
        }
        vals.into_iter().map(KChoice::Explicit).collect()
    };
    let mut c = PrimePairConstruction::init(args.p0, args.p1, args.alpha1)?
        .with_digit_budget(budget)?;
    for k in ks {
        c = c.extend(k)?;
        if matches!(c.status(), Status::GrowthExceeded { .. }) {
            break;
        }
    }
    Ok(c)
}

// ---- rendering helpers -----------------------------------------------

fn sv(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn string_array<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::Array(items.into_iter().map(sv).collect())
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_table(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::from(header);
    for row in rows {
        out.push('\n');
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
    }
    out
}

fn no_csv(command: &str) -> Error {
    Error::Domain(format!("`{command}` has no tabular form; use --format json"))
}

// ---- cf --------------------------------------------------------------

fn run_cf(cmd: &CfCmd, g: &GlobalOpts) -> Result<Rendered> {
    match cmd {
        CfCmd::Expand { x } => {
            let r = parse_rational(x)?;
            let cf = crate::cf::ContinuedFraction::from_rational(&r);
            match g.format {
                Format::Json => {
                    let mut doc: Value = serde_json::from_str(&cf.to_json())
                        .map_err(|e| Error::Internal(format!("cf json: {e}")))?;
                    doc["x"] = sv(&r);
                    Ok(Rendered::ok(doc.to_string()))
                }
                Format::Csv => Ok(Rendered::ok(convergents_csv(&cf))),
            }
        }
        CfCmd::Convergents { a0, quotients } => {
            let a0 = parse_bigint(a0, "--a0")?;
            let qs = parse_u64_list(quotients, "--quotients")?;
            let cf = crate::cf::ContinuedFraction::from_quotients(
                a0,
                qs.into_iter().map(Into::into).collect(),
            )?;
            match g.format {
                Format::Json => Ok(Rendered::ok(cf.to_json())),
                Format::Csv => Ok(Rendered::ok(convergents_csv(&cf))),
            }
        }
        CfCmd::Legendre { x, qmax } => {
            let r = parse_rational(x)?;
            let cf = crate::cf::ContinuedFraction::from_rational(&r);
            let entries = cf.legendre_filter(*qmax);
            match g.format {
                Format::Json => {
                    let list: Vec<Value> = entries
                        .iter()
                        .map(|e| {
                            json!({
                                "p": sv(&e.p),
                                "q": sv(e.q),
                                "convergent": e.is_convergent,
                                "proof": format!("{:?}", e.status).to_lowercase(),
                            })
                        })
                        .collect();
                    Ok(Rendered::ok(
                        json!({"x": sv(&r), "q_max": sv(qmax), "entries": list}).to_string(),
                    ))
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = entries
                        .iter()
                        .map(|e| {
                            vec![
                                e.p.to_string(),
                                e.q.to_string(),
                                e.is_convergent.to_string(),
                                format!("{:?}", e.status).to_lowercase(),
                            ]
                        })
                        .collect();
                    Ok(Rendered::ok(csv_table("p,q,convergent,proof", &rows)))
                }
            }
        }
    }
}

fn convergents_csv(cf: &crate::cf::ContinuedFraction) -> String {
    let rows: Vec<Vec<String>> = cf
        .convergents()
        .iter()
        .enumerate()
        .map(|(s, (p, q))| vec![s.to_string(), p.to_string(), q.to_string()])
        .collect();
    csv_table("s,p,q", &rows)
}

// ---- qset ------------------------------------------------------------

fn run_qset(cmd: &QsetCmd, g: &GlobalOpts) -> Result<Rendered> {
    match cmd {
        QsetCmd::Member { spec, q } => {
            let set = FreeSetSpec::parse(spec)?;
            let member = set.member(*q)?;
            if g.format == Format::Csv {
                return Err(no_csv("qset member"));
            }
            Ok(Rendered::ok(
                json!({"spec": sv(&set), "q": sv(q), "member": member}).to_string(),
            ))
        }
        QsetCmd::Verify { spec, n } => {
            let set = FreeSetSpec::parse(spec)?;
            let report = set.verify_free_property(*n)?;
            match g.format {
                Format::Json => Ok(Rendered::ok(
                    json!({
                        "spec": sv(&set),
                        "n": sv(n),
                        "free": report.is_free(),
                        "violations": string_array(&report.violations),
                    })
                    .to_string(),
                )),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .violations
                        .iter()
                        .map(|v| vec![v.to_string()])
                        .collect();
                    Ok(Rendered::ok(csv_table("violation", &rows)))
                }
            }
        }
        QsetCmd::Support {
            spec,
            bound,
            scan_bound,
        } => {
            let set = FreeSetSpec::parse(spec)?;
            let report = match scan_bound {
                Some(sb) => set.support_primes_with_scan(*bound, *sb)?,
                None => set.support_primes(*bound)?,
            };
            match g.format {
                Format::Json => Ok(Rendered::ok(
                    json!({
                        "spec": sv(&set),
                        "p_bound": sv(report.p_bound),
                        "confirmed": string_array(&report.confirmed),
                        "excluded": string_array(&report.excluded),
                        "inconclusive": string_array(&report.inconclusive),
                    })
                    .to_string(),
                )),
                Format::Csv => {
                    let mut rows: Vec<Vec<String>> = Vec::new();
                    for (class, list) in [
                        ("confirmed", &report.confirmed),
                        ("excluded", &report.excluded),
                        ("inconclusive", &report.inconclusive),
                    ] {
                        rows.extend(list.iter().map(|p| vec![p.to_string(), class.to_string()]));
                    }
                    rows.sort_by_key(|r| r[0].parse::<u64>().unwrap_or(u64::MAX));
                    Ok(Rendered::ok(csv_table("prime,class", &rows)))
                }
            }
        }
        QsetCmd::Nu { spec, grid } => {
            let set = FreeSetSpec::parse(spec)?;
            let exponent = match grid {
                Some(text) => {
                    let grid = parse_u64_list(text, "--grid")?;
                    crate::qfree::counting_exponent_fit_spec(&set, &grid)?
                }
                None => set.convergence_exponent(),
            };
            if g.format == Format::Csv {
                return Err(no_csv("qset nu"));
            }
            let value = match &exponent.value {
                ExponentValue::Exact(v) => json!({"exact": sv(v)}),
                ExponentValue::Fitted {
                    slope,
                    max_residual,
                    counts,
                } => json!({
                    "fitted": {
                        "slope": f6(*slope),
                        "max_residual": f6(*max_residual),
                        "counts": counts
                            .iter()
                            .map(|(n, c)| string_array([n.to_string(), c.to_string()]))
                            .collect::<Vec<_>>(),
                    }
                }),
                ExponentValue::UnknownExact => Value::String("unknown".into()),
            };
            Ok(Rendered::ok(
                json!({
                    "spec": sv(&set),
                    "method": exponent.method,
                    "diagnostics": exponent.diagnostics,
                    "value": value,
                })
                .to_string(),
            ))
        }
        QsetCmd::Euler { spec, nu, bound } => {
            let set = FreeSetSpec::parse(spec)?;
            let nu = parse_rational(nu)?;
            let report = set.euler_product_partial(&nu, *bound, g.precision)?;
            if g.format == Format::Csv {
                return Err(no_csv("qset euler"));
            }
            let pair = |d: &crate::DecimalInterval| {
                let (lo, hi) = d.to_strings();
                string_array([lo, hi])
            };
            Ok(Rendered::ok(
                json!({
                    "spec": report.spec,
                    "nu": sv(&report.nu),
                    "p_bound": sv(report.p_bound),
                    "precision": sv(report.precision),
                    "left_sum": pair(&report.left_sum),
                    "member_sum": pair(&report.q_partial_sum),
                    "right_product": pair(&report.right_product),
                    "left_le_middle": report.left_le_middle,
                    "middle_le_right": report.middle_le_right,
                    "support_inconclusive": sv(report.support_inconclusive),
                })
                .to_string(),
            ))
        }
    }
}

// ---- liouville -------------------------------------------------------

fn run_liouville(cmd: &LiouvilleCmd, g: &GlobalOpts) -> Result<Rendered> {
    if g.format == Format::Csv {
        return Err(no_csv("liouville"));
    }
    match cmd {
        LiouvilleCmd::Build { args } => {
            let c = build_construction(args, g.digit_budget)?;
            let exit = exit_for_status(c.status());
            Ok(Rendered {
                body: c.to_certificate_json(g.inline_digits, None),
                exit,
            })
        }
        LiouvilleCmd::Verify { cert } => {
            let text = std::fs::read_to_string(cert)?;
            verify_certificate(&text, g)
        }
        LiouvilleCmd::Evidence { args, tau } => {
            let tau = parse_rational(tau)?;
            let c = build_construction(args, g.digit_budget)?;
            let evidence = c.wstar_evidence(&tau)?;
            let exit = exit_for_status(c.status());
            Ok(Rendered {
                body: c.to_certificate_json(g.inline_digits, Some(&evidence)),
                exit,
            })
        }
        LiouvilleCmd::Profile { args } => {
            let c = build_construction(args, g.digit_budget)?;
            let w = c.irrationality_profile()?;
            let exit = exit_for_status(c.status());
            Ok(Rendered {
                body: json!({
                    "pi0": sv(args.p0),
                    "pi1": sv(args.p1),
                    "alpha1": sv(args.alpha1),
                    "denominators": sv(c.len()),
                    "w": Value::Array(w.iter().map(|x| sv(f6(*x))).collect()),
                })
                .to_string(),
                exit,
            })
        }
    }
}

fn exit_for_status(status: &Status) -> i32 {
    match status {
        Status::Active => 0,
        Status::GrowthExceeded { .. } => 3,
    }
}

/// Rebuild the construction named by a certificate and replay the checks.
fn verify_certificate(text: &str, g: &GlobalOpts) -> Result<Rendered> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    let field_u64 = |name: &str| -> Result<u64> {
        doc.get(name)
            .and_then(|v| v.as_str())
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("certificate lacks a numeric `{name}`")))
    };
    let p0 = field_u64("pi0")?;
    let p1 = field_u64("pi1")?;
    let alphas: Vec<u64> = doc
        .get("alpha")
        .and_then(|v| v.as_array())
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().and_then(|s| s.parse().ok()))
                .collect()
        })
        .ok_or_else(|| Error::Parse("certificate lacks an `alpha` array".into()))?;
    if alphas.len() < 2 {
        return Err(Error::Parse("certificate alpha array too short".into()));
    }
    let ks: Vec<u64> = doc
        .get("k")
        .and_then(|v| v.as_array())
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().and_then(|s| s.parse().ok()))
                .collect()
        })
        .unwrap_or_default();
    let mut c = PrimePairConstruction::init(p0, p1, alphas[1])?
        .with_digit_budget(field_u64("digit_budget")?)?;
    for &k in &ks {
        c = c.extend(KChoice::Explicit(k))?;
        if matches!(c.status(), Status::GrowthExceeded { .. }) {
            break;
        }
    }
    let alpha_match = c.alphas() == alphas.as_slice();
    let report = c.verify();
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|ch| json!({"name": ch.name, "pass": ch.pass, "detail": ch.detail}))
        .collect();
    let all_ok = alpha_match && report.all_pass;
    let _ = g;
    Ok(Rendered {
        body: json!({
            "pi0": sv(p0),
            "pi1": sv(p1),
            "rebuilt_denominators": sv(c.len()),
            "alpha_match": alpha_match,
            "checks": checks,
            "all_pass": all_ok,
        })
        .to_string(),
        exit: if all_ok { 0 } else { 2 },
    })
}

// ---- plane -----------------------------------------------------------

fn run_plane(cmd: &PlaneCmd, g: &GlobalOpts) -> Result<Rendered> {
    match cmd {
        PlaneCmd::Lift { a, u, v, y } => {
            let h = plane_of(a, u, v)?;
            let y = parse_rational_list(y, "--y")?;
            let xn = h.lift(&y)?;
            if g.format == Format::Csv {
                return Err(no_csv("plane lift"));
            }
            Ok(Rendered::ok(
                json!({
                    "a": string_array(h.coefficients()),
                    "u": sv(h.u()),
                    "v": sv(h.v()),
                    "y": string_array(&y),
                    "x_n": sv(&xn),
                })
                .to_string(),
            ))
        }
        PlaneCmd::Threshold { a, tau } => {
            let coeffs = parse_bigint_list(a, "--a")?;
            let tau = parse_rational(tau)?;
            let threshold = dependence_threshold(&coeffs, &tau)?;
            let sum_abs: BigInt = coeffs.iter().map(|x| x.abs()).sum();
            if g.format == Format::Csv {
                return Err(no_csv("plane threshold"));
            }
            Ok(Rendered::ok(
                json!({
                    "a": string_array(&coeffs),
                    "tau": sv(&tau),
                    "sum_abs": sv(&sum_abs),
                    "threshold": sv(&threshold),
                })
                .to_string(),
            ))
        }
        PlaneCmd::Transfer {
            a,
            u,
            v,
            tau,
            qmax,
            x,
            seed,
            denom_bound,
        } => {
            let h = plane_of(a, u, v)?;
            let tau = parse_rational(tau)?;
            let point: Vec<Rational> = match x {
                Some(text) => parse_rational_list(text, "--x")?,
                None => {
                    let mut tail = h.sample_tail(*seed, *denom_bound);
                    let last = h.lift(&tail)?;
                    tail.push(last);
                    tail
                }
            };
            let report = h.transfer_property_test(&point, &tau, *qmax)?;
            let pair_list = |items: &[(u64, Vec<BigInt>)]| -> Value {
                Value::Array(
                    items
                        .iter()
                        .map(|(q, p)| json!({"q": sv(q), "p": string_array(p)}))
                        .collect(),
                )
            };
            match g.format {
                Format::Json => Ok(Rendered::ok(
                    json!({
                        "a": string_array(h.coefficients()),
                        "u": sv(h.u()),
                        "v": sv(h.v()),
                        "tau": sv(&tau),
                        "q_max": sv(qmax),
                        "x": string_array(&point),
                        "threshold": sv(&report.threshold),
                        "hits_checked": sv(report.hits_checked),
                        "violations": pair_list(&report.violations),
                        "below_threshold_failures": pair_list(&report.below_threshold_failures),
                    })
                    .to_string(),
                )),
                Format::Csv => {
                    let mut rows = Vec::new();
                    for (class, list) in [
                        ("violation", &report.violations),
                        ("allowed", &report.below_threshold_failures),
                    ] {
                        for (q, p) in list {
                            let p_str: Vec<String> =
                                p.iter().map(|x| x.to_string()).collect();
                            rows.push(vec![
                                q.to_string(),
                                p_str.join(";"),
                                class.to_string(),
                            ]);
                        }
                    }
                    Ok(Rendered::ok(csv_table("q,p,class", &rows)))
                }
            }
        }
        PlaneCmd::Points { a, u, v, q, boxes } => {
            let h = plane_of(a, u, v)?;
            let n = h.dim();
            let parsed: Vec<(i64, i64)> = boxes
                .iter()
                .map(|b| -> Result<(i64, i64)> {
                    let (lo, hi) = b.split_once(',').ok_or_else(|| {
                        Error::Parse(format!("--box wants lo,hi — got `{b}`"))
                    })?;
                    let lo = lo.trim().parse().map_err(|_| {
                        Error::Parse(format!("`{lo}` is not an integer in --box"))
                    })?;
                    let hi = hi.trim().parse().map_err(|_| {
                        Error::Parse(format!("`{hi}` is not an integer in --box"))
                    })?;
                    Ok((lo, hi))
                })
                .collect::<Result<_>>()?;
            let bounds: Vec<(i64, i64)> = if parsed.len() == 1 {
                vec![parsed[0]; n]
            } else {
                parsed
            };
            let points = h.rational_points(*q, &bounds)?;
            match g.format {
                Format::Json => Ok(Rendered::ok(
                    json!({
                        "a": string_array(h.coefficients()),
                        "u": sv(h.u()),
                        "v": sv(h.v()),
                        "q": sv(q),
                        "box": Value::Array(
                            bounds
                                .iter()
                                .map(|(lo, hi)| string_array([lo.to_string(), hi.to_string()]))
                                .collect(),
                        ),
                        "points": Value::Array(
                            points.iter().map(|p| string_array(p)).collect(),
                        ),
                    })
                    .to_string(),
                )),
                Format::Csv => {
                    let header: Vec<String> =
                        (1..=n).map(|i| format!("p{i}")).collect();
                    let rows: Vec<Vec<String>> = points
                        .iter()
                        .map(|p| p.iter().map(|x| x.to_string()).collect())
                        .collect();
                    Ok(Rendered::ok(csv_table(&header.join(","), &rows)))
                }
            }
        }
        PlaneCmd::Wstar {
            a,
            u,
            v,
            tau,
            spec,
            qmax,
            seeds,
            steps,
            k,
        } => {
            let h = plane_of(a, u, v)?;
            let tau = parse_rational(tau)?;
            let set = FreeSetSpec::parse(spec)?;
            let seed_list: Vec<PrimePairConstruction> = seeds
                .split(',')
                .map(|triple| -> Result<PrimePairConstruction> {
                    let parts: Vec<&str> = triple.trim().split(':').collect();
                    if parts.len() != 3 {
                        return Err(Error::Parse(format!(
                            "--seeds wants p0:p1:alpha1 triples, got `{triple}`"
                        )));
                    }
                    let num = |s: &str| -> Result<u64> {
                        s.parse()
                            .map_err(|_| Error::Parse(format!("`{s}` in --seeds")))
                    };
                    build_construction(
                        &ConstructionArgs {
                            p0: num(parts[0])?,
                            p1: num(parts[1])?,
                            alpha1: num(parts[2])?,
                            steps: *steps,
                            k: k.clone(),
                        },
                        g.digit_budget,
                    )
                })
                .collect::<Result<_>>()?;
            let report = h.wstar_point_from_seed(&seed_list, &tau, &set, *qmax, g.precision)?;
            let exit = if report.inconclusive_count > 0 { 3 } else { 0 };
            match g.format {
                Format::Json => {
                    let hits: Vec<Value> = report
                        .hits
                        .iter()
                        .map(|hit| {
                            json!({
                                "q": sv(hit.q),
                                "p": string_array(&hit.p),
                                "full": hit.full,
                                "proof": proof_str(hit.proof),
                                "in_q": hit.in_q,
                            })
                        })
                        .collect();
                    Ok(Rendered {
                        body: json!({
                            "a": string_array(h.coefficients()),
                            "u": sv(h.u()),
                            "v": sv(h.v()),
                            "tau": sv(&report.tau),
                            "spec": sv(&set),
                            "q_max": sv(report.q_max),
                            "threshold": sv(&report.threshold),
                            "x": Value::Array(
                                report
                                    .x
                                    .iter()
                                    .map(|(lo, hi)| string_array([lo.clone(), hi.clone()]))
                                    .collect(),
                            ),
                            "hits": hits,
                            "summary": {
                                "in_q": sv(report.in_q_count),
                                "out_q": sv(report.out_q_count),
                                "inconclusive": sv(report.inconclusive_count),
                                "large_full_hits_multiple_of_v":
                                    report.large_full_hits_multiple_of_v,
                            },
                        })
                        .to_string(),
                        exit,
                    })
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .hits
                        .iter()
                        .map(|hit| {
                            let p: Vec<String> =
                                hit.p.iter().map(|x| x.to_string()).collect();
                            vec![
                                hit.q.to_string(),
                                p.join(";"),
                                hit.full.to_string(),
                                proof_str(hit.proof).to_string(),
                                hit.in_q.to_string(),
                            ]
                        })
                        .collect();
                    Ok(Rendered {
                        body: csv_table("q,p,full,proof,in_q", &rows),
                        exit,
                    })
                }
            }
        }
    }
}

fn plane_of(a: &str, u: &str, v: &str) -> Result<Hyperplane> {
    Hyperplane::new(
        parse_bigint_list(a, "--a")?,
        parse_bigint(u, "--u")?,
        parse_bigint(v, "--v")?,
    )
}

fn proof_str(p: Proof) -> &'static str {
    match p {
        Proof::Proven => "proven",
        Proof::Inconclusive => "inconclusive",
    }
}

// ---- dim ---------------------------------------------------------------

fn run_dim(cmd: &DimCmd, g: &GlobalOpts) -> Result<Rendered> {
    match cmd {
        DimCmd::Formula {
            n,
            tau,
            set,
            spec,
            nu,
        } => {
            if g.format == Format::Csv {
                return Err(no_csv("dim formula"));
            }
            let tau = parse_rational(tau)?;
            let kind = match set {
                SetArg::W => SetKind::W,
                SetArg::Wq => SetKind::WQ,
                SetArg::Wstar => SetKind::WStar,
            };
            let parsed_spec = spec.as_deref().map(FreeSetSpec::parse).transpose()?;
            let verdict = match (&parsed_spec, nu) {
                (Some(_), Some(_)) => {
                    return Err(Error::Domain(
                        "give either --spec or --nu, not both".into(),
                    ))
                }
                (Some(s), None) => {
                    dimension::theoretical_dimension(kind, *n, &tau, NuInput::Spec(s))?
                }
                (None, Some(nu_text)) => dimension::theoretical_dimension(
                    kind,
                    *n,
                    &tau,
                    NuInput::Exact(parse_rational(nu_text)?),
                )?,
                (None, None) => {
                    if kind == SetKind::W {
                        dimension::theoretical_dimension(
                            kind,
                            *n,
                            &tau,
                            NuInput::Exact(Rational::from_integer(1.into())),
                        )?
                    } else {
                        return Err(Error::Domain(
                            "this family needs --spec or --nu for its exponent of convergence"
                                .into(),
                        ));
                    }
                }
            };
            let mut doc = json!({
                "set": verdict.kind.to_string(),
                "n": sv(verdict.n),
                "tau": sv(&verdict.tau),
                "nu": verdict.nu.as_ref().map(sv).unwrap_or(Value::Null),
                "gates": Value::Array(
                    verdict
                        .gates
                        .iter()
                        .map(|(name, pass)| json!({"gate": name, "pass": pass}))
                        .collect(),
                ),
                "source": verdict.source,
            });
            match &verdict.value {
                FormulaValue::Value(v) => doc["value"] = sv(v),
                FormulaValue::Interval(lo, hi) => {
                    doc["interval"] = string_array([lo.to_string(), hi.to_string()])
                }
                FormulaValue::NotAsserted { reason } => {
                    doc["not_asserted"] = Value::String(reason.clone())
                }
            }
            Ok(Rendered::ok(doc.to_string()))
        }
        DimCmd::Series {
            spec,
            n,
            tau,
            s,
            q0,
            q1,
        } => {
            if g.format == Format::Csv {
                return Err(no_csv("dim series"));
            }
            let set = FreeSetSpec::parse(spec)?;
            let tau = parse_rational(tau)?;
            let s = parse_rational(s)?;
            let sum = dimension::cover_series(&set, *n, &tau, &s, *q0, *q1, g.precision)?;
            let (lo, hi) = sum.to_strings();
            Ok(Rendered::ok(
                json!({
                    "spec": sv(&set),
                    "n": sv(n),
                    "tau": sv(&tau),
                    "s": sv(&s),
                    "q0": sv(q0),
                    "q1": sv(q1),
                    "precision": sv(g.precision),
                    "sum": string_array([lo, hi]),
                })
                .to_string(),
            ))
        }
        DimCmd::Critical {
            spec,
            n,
            tau,
            qmax,
            grid_step,
        } => {
            let set = FreeSetSpec::parse(spec)?;
            let tau = parse_rational(tau)?;
            let report = dimension::critical_exponent(&set, *n, &tau, *qmax, *grid_step)?;
            match g.format {
                Format::Json => Ok(Rendered::ok(
                    json!({
                        "spec": report.spec,
                        "n": sv(report.n),
                        "tau": sv(&report.tau),
                        "q_max": sv(report.q_max),
                        "grid_step": f6(*grid_step),
                        "s_star": f6(report.s_star),
                        "exact_value": report.exact_value.map(|v| sv(f6(v))).unwrap_or(Value::Null),
                        "abs_error": report.abs_error.map(|v| sv(f6(v))).unwrap_or(Value::Null),
                        "skipped_blocks": string_array(&report.skipped_blocks),
                    })
                    .to_string(),
                )),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = report
                        .rows
                        .iter()
                        .map(|r| {
                            vec![
                                report.spec.clone(),
                                report.n.to_string(),
                                report.tau.to_string(),
                                f6(r.s),
                                r.block_j.to_string(),
                                format!("{:.6e}", r.block_sum),
                                r.slope.map(f6).unwrap_or_default(),
                            ]
                        })
                        .collect();
                    Ok(Rendered::ok(csv_table(
                        "spec,n,tau,s,block_j,block_sum,slope",
                        &rows,
                    )))
                }
            }
        }
    }
}
