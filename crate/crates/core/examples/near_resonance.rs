//! Growth of sup |y| as θ = π + δ closes in on π.

use neumann_sp::analysis::DELTA_FLOOR;
use neumann_sp::prelude::*;

fn main() -> neumann_sp::Result<()> {
    let f = SmoothFunction::parse("exp(t)", 0.0, 1.0)?;
    let problem = ProblemSpec::new(0.0, 1.0, 1.0, f)?;
    let deltas = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.01, 0.001];
    let sweep = near_resonance_sweep(&problem, 1, &deltas, 201, QuadConfig::default(), DELTA_FLOOR)?;
    println!("{:>8} {:>12} {:>12} {:>14}", "delta", "eps", "sup|y|", "sup|y| sin d");
    for p in sweep {
        println!(
            "{:>8} {:>12.6e} {:>12.4} {:>14.4}",
            p.delta,
            p.eps,
            p.sup_abs_y,
            p.sup_abs_y * p.delta.sin()
        );
    }

    // the regular solver refuses the same eps
    let eps = 1.0 / (std::f64::consts::PI + 0.01).powi(2);
    if let Err(e) = SolveContext::new(&problem, eps, 0.5, QuadConfig::default(), EvalForm::Reduced) {
        println!("\n{e}");
    }
    Ok(())
}
