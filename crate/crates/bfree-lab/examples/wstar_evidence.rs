//! Inspect how well the construction's convergents approximate its limit
//! at exponent tau = 5/2, and check that every denominator avoids the
//! integers coprime to 6.

use bfree_lab::exact::parse_rational;
use bfree_lab::liouville::PrimePairConstruction;

fn main() -> bfree_lab::Result<()> {
    let c = PrimePairConstruction::init(2, 3, 1)?.extend_minimal(4)?;
    let tau = parse_rational("5/2")?;
    let ev = c.wstar_evidence(&tau)?;

    println!("evidence at tau = {tau}:");
    println!("  proven |x - p_s/q_s| < q_s^(-5/2) at s = {:?}", ev.hit_indices());
    println!("  proven failures at s = {:?}", ev.miss_indices());
    println!("  undecided at s = {:?} (needs a deeper expansion)", ev.inconclusive);

    println!("\ndenominators against the set coprime to 6:");
    for (s, outside) in &ev.outside_q {
        println!("  q_{s} outside: {outside}");
    }
    println!(
        "  members of the set below the filter cutoff {}: {:?}",
        ev.legendre_cutoff, ev.small_q_members
    );
    println!(
        "  convergents with denominator in the set: {}",
        ev.convergent_hits_in_q
    );
    Ok(())
}
