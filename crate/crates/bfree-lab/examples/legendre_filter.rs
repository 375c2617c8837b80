//! Expand a rational into its continued fraction and list every fraction
//! p/q with q <= 60 satisfying |x - p/q| < 1/(2q^2); each one is forced
//! to be a convergent, and the filter proves it exactly.

use bfree_lab::cf::ContinuedFraction;
use bfree_lab::exact::parse_rational;

fn main() -> bfree_lab::Result<()> {
    let x = parse_rational("271853/1048576")?;
    let cf = ContinuedFraction::from_rational(&x);

    println!("x = {x}");
    println!("quotients: {:?}", cf.quotients().iter().map(|a| a.to_string()).collect::<Vec<_>>());
    println!("convergents:");
    for (s, (p, q)) in cf.convergents().iter().enumerate() {
        println!("  c_{s} = {p}/{q}");
    }

    println!("\nfractions with |x - p/q| < 1/(2q^2), q <= 60:");
    for entry in cf.legendre_filter(60) {
        println!(
            "  {}/{}  convergent: {}  ({:?})",
            entry.p, entry.q, entry.is_convergent, entry.status
        );
    }
    Ok(())
}
