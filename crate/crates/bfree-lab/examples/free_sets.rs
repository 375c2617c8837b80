//! Tour the divisor-closed denominator sets: parse each literal family,
//! probe membership, verify the defining closure property on a range,
//! classify supporting primes, and read off the exponent of convergence.

use bfree_lab::qfree::{ExponentValue, FreeSetSpec};

fn show(value: &ExponentValue) -> String {
    match value {
        ExponentValue::Exact(v) => format!("exactly {v}"),
        ExponentValue::Fitted { slope, .. } => format!("fitted slope {slope:.4}"),
        ExponentValue::UnknownExact => "unknown".into(),
    }
}

fn main() -> bfree_lab::Result<()> {
    let specs = [
        "kfree:2",       // squarefree integers
        "coprime:6",     // integers coprime to 6
        "bfree:4,9,25",  // nothing divisible by 4, 9, or 25
        "bfree:",        // no exclusions: all positive integers
    ];

    for literal in specs {
        let set = FreeSetSpec::parse(literal)?;
        let sample: Vec<u64> = (1..=20).filter(|&q| set.member(q).unwrap()).collect();
        println!("{set}");
        println!("  members up to 20: {sample:?}");

        let closure = set.verify_free_property(10_000)?;
        println!("  divisor-closure on [1, 10^4]: {}", closure.is_free());

        let support = set.support_primes(30)?;
        println!(
            "  primes <= 30 in the support: {:?} (excluded: {:?})",
            support.confirmed, support.excluded
        );

        let nu = set.convergence_exponent();
        println!("  exponent of convergence: {} via {}\n", show(&nu.value), nu.method);
    }

    // A finite table with declared empty tail has exponent zero.
    let finite = FreeSetSpec::table(vec![1, 2, 3, 4, 6, 12], 12, bfree_lab::qfree::TailRule::Empty)?;
    println!("{finite}");
    println!(
        "  exponent of convergence: {}",
        show(&finite.convergence_exponent().value)
    );
    Ok(())
}
