//! For a point on a rational hyperplane, any simultaneous approximation
//! of quality q^(-tau) with q past an explicit threshold inherits the
//! plane's own rational dependence. This example computes the threshold
//! and verifies the inheritance exhaustively for small q.

use bfree_lab::exact::parse_rational;
use bfree_lab::plane::Hyperplane;

fn main() -> bfree_lab::Result<()> {
    // 2x1 + 3x2 - x3 = 1/6
    let h = Hyperplane::from_i64(&[2, 3, -1], 1, 6)?;
    let tau = parse_rational("3")?;

    println!("plane: 2x1 + 3x2 - x3 = 1/6");
    println!("lipschitz constant K = {}", h.lipschitz_constant());
    println!("threshold q0 = {}", h.dependence_threshold(&tau)?);

    // A point with small coordinate denominators, completed via the plane.
    let mut x = vec![parse_rational("1/6")?, parse_rational("0")?];
    let last = h.lift(&x)?;
    x.push(last);
    let coords: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    println!("point on the plane: ({})", coords.join(", "));

    let report = h.transfer_property_test(&x, &tau, 400)?;
    println!("\nscan of all integer vectors with |x_i - p_i/q| < q^(-3), q <= 400:");
    println!("  approximations checked: {}", report.hits_checked);
    println!("  dependence violations at q >= q0: {}", report.violations.len());
    println!(
        "  failures below the threshold (allowed): {}",
        report.below_threshold_failures.len()
    );
    assert!(report.violations.is_empty());
    println!("\nevery approximation past q0 satisfies v·(a1 p1 + a2 p2 + a3 p3) = u·q");

    // A random point sampled on the plane behaves the same way.
    let mut y = h.sample_tail(42, 1000);
    let last = h.lift(&y)?;
    y.push(last);
    let sampled = h.transfer_property_test(&y, &tau, 400)?;
    println!(
        "sampled point: {} checked, {} violations",
        sampled.hits_checked,
        sampled.violations.len()
    );
    assert!(sampled.violations.is_empty());
    Ok(())
}
