//! Plant a construction-backed point on the plane x1 + x2 = 1/2 and scan
//! denominators q <= 50 for proven simultaneous approximations of
//! quality q^(-5/2), classifying each against the set coprime to 6.

use bfree_lab::exact::parse_rational;
use bfree_lab::liouville::PrimePairConstruction;
use bfree_lab::plane::Hyperplane;
use bfree_lab::qfree::FreeSetSpec;

fn main() -> bfree_lab::Result<()> {
    let h = Hyperplane::from_i64(&[1, 1], 1, 2)?;
    let tau = parse_rational("5/2")?;
    let spec = FreeSetSpec::parse("coprime:6")?;

    // x1 comes from the (2, 3) construction; x2 = 1/2 - x1 is its mirror.
    let seed = PrimePairConstruction::init(2, 3, 1)?.extend_minimal(3)?;
    let report = h.wstar_point_from_seed(&[seed], &tau, &spec, 50, 80)?;

    println!("x enclosures:");
    for (i, (lo, hi)) in report.x.iter().enumerate() {
        println!("  x{} in [{}..., {}...]", i + 1, &lo[..12], &hi[..12]);
    }
    println!("dependence threshold: {}", report.threshold);

    println!("\nproven hits with max_i |x_i - p_i/q| < K^(-1) q^(-5/2):");
    for hit in &report.hits {
        let p: Vec<String> = hit.p.iter().map(|x| x.to_string()).collect();
        println!(
            "  q = {:>2}  p = ({})  all coords: {}  q in set: {}",
            hit.q,
            p.join(", "),
            hit.full,
            hit.in_q
        );
    }
    println!(
        "\nsummary: {} hit(s) inside the set, {} outside, {} undecided",
        report.in_q_count, report.out_q_count, report.inconclusive_count
    );
    println!(
        "full hits past the threshold have q divisible by v: {}",
        report.large_full_hits_multiple_of_v
    );
    Ok(())
}
