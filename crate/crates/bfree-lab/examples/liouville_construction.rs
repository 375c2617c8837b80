//! Build the canonical two-prime construction over (2, 3), print the
//! denominator ladder, replay every structural check, and show the
//! digit budget stopping runaway growth.

use bfree_lab::liouville::{KChoice, PrimePairConstruction, Status};

fn main() -> bfree_lab::Result<()> {
    let mut c = PrimePairConstruction::init(2, 3, 1)?;
    for _ in 0..4 {
        c = c.extend(KChoice::Minimal)?;
    }

    println!("denominators q_0 .. q_{}:", c.len() - 1);
    for (s, alpha) in c.alphas().iter().enumerate() {
        let prime = if s % 2 == 0 { 2 } else { 3 };
        let digits = c.q(s as u64).to_string().len();
        println!("  q_{s} = {prime}^{alpha}  ({digits} decimal digits)");
    }

    println!("\npartial quotients a_1 .. a_{}:", c.len() - 1);
    for (t, a) in c.quotients().iter().enumerate().skip(1) {
        let shown = a.to_string();
        if shown.len() <= 40 {
            println!("  a_{t} = {shown}");
        } else {
            println!("  a_{t} = {}… ({} digits)", &shown[..20], shown.len());
        }
    }

    let report = c.verify();
    println!("\nstructural checks:");
    for check in &report.checks {
        let mark = if check.pass { "ok " } else { "FAIL" };
        println!("  [{mark}] {} — {}", check.name, check.detail);
    }
    assert!(report.all_pass);

    // One more step would need 2^(20 + 2·3^262146): the budget stops it.
    match c.extend(KChoice::Minimal)?.status() {
        Status::GrowthExceeded { step, alpha_digits } => println!(
            "\nstep {step} refused: next exponent has {alpha_digits} digits (budget 10^6)"
        ),
        Status::Active => unreachable!("growth must exceed the default budget"),
    }
    Ok(())
}
