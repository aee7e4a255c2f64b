//! Log-log rates of sup |y_ε − f/k| along the θ-midpoint sequence.
//!
//! f′ nonzero at an end point gives order ½; vanishing end slopes give
//! order 1, reached only once 4π²ε is small for cos(2πt).

use neumann_sp::prelude::*;

fn report(src: &str, n_from: u64, n_to: u64) -> neumann_sp::Result<()> {
    let f = SmoothFunction::parse(src, 0.0, 1.0)?;
    let problem = ProblemSpec::new(0.0, 1.0, 1.0, f)?;
    let fit = rate_fit(&problem, 0.5, n_from, n_to, 101, QuadConfig::default())?;
    println!("f = {src}, n = {n_from}..{n_to}");
    for p in &fit.points {
        println!("  n = {:>2}  eps = {:.4e}  error = {:.4e}", p.n, p.eps, p.sup_error);
    }
    println!(
        "  slope {:.4}  r^2 {:.5}  expected {:?}  within window: {}\n",
        fit.slope,
        fit.r_squared,
        fit.expected_order,
        fit.passes()
    );
    Ok(())
}

fn main() -> neumann_sp::Result<()> {
    report("exp(t)", 2, 14)?;
    report("cos(2*pi*t)", 2, 14)?;
    report("cos(2*pi*t)", 10, 22)?;

    let f = SmoothFunction::parse("1", 0.0, 1.0)?;
    let flat = ProblemSpec::new(0.0, 1.0, 1.0, f)?;
    if let Err(e) = rate_fit(&flat, 0.5, 2, 14, 101, QuadConfig::default()) {
        println!("f = 1: {e}");
    }
    Ok(())
}
