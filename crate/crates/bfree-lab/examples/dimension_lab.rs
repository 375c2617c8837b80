//! Evaluate the closed-form Hausdorff-dimension verdicts for the three
//! limsup families, sum the natural cover series exactly, and recover
//! the series' convergence abscissa from dyadic block slopes.

use bfree_lab::dimension::{
    cover_series, critical_exponent, theoretical_dimension, FormulaValue, NuInput, SetKind,
};
use bfree_lab::exact::parse_rational;
use bfree_lab::qfree::FreeSetSpec;

fn show(value: &FormulaValue) -> String {
    match value {
        FormulaValue::Value(v) => v.to_string(),
        FormulaValue::Interval(lo, hi) => format!("[{lo}, {hi}]"),
        FormulaValue::NotAsserted { reason } => format!("not asserted ({reason})"),
    }
}

fn main() -> bfree_lab::Result<()> {
    let tau = parse_rational("3")?;
    let spec = FreeSetSpec::parse("coprime:6")?;

    println!("closed forms at n = 2, tau = 3:");
    for kind in [SetKind::W, SetKind::WQ, SetKind::WStar] {
        let v = theoretical_dimension(kind, 2, &tau, NuInput::Spec(&spec))?;
        println!("  dim {} = {}  (source: {})", v.kind, show(&v.value), v.source);
        for (gate, pass) in &v.gates {
            println!("      gate {gate}: {pass}");
        }
    }

    let s = parse_rational("1")?;
    let sum = cover_series(&FreeSetSpec::parse("bfree:")?, 1, &tau, &s, 1, 100_000, 30)?;
    let (lo, hi) = sum.to_strings();
    println!("\ncover series over all integers, n = 1, s = 1, q <= 10^5:");
    println!("  sum in [{lo}, {hi}]");

    println!("\nabscissa estimates at q_max = 2^18 (exact value (n + nu)/tau):");
    for (literal, n) in [("bfree:", 1u32), ("kfree:2", 2)] {
        let set = FreeSetSpec::parse(literal)?;
        let r = critical_exponent(&set, n, &tau, 1 << 18, 0.05)?;
        println!(
            "  {literal:<10} n = {n}: s* = {:.4}  (exact {:.4}, |err| = {:.4})",
            r.s_star,
            r.exact_value.unwrap(),
            r.abs_error.unwrap()
        );
    }
    Ok(())
}
