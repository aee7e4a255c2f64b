//! Solve ε·y″ + y = eᵗ, y′(0) = y′(1) = 0 and compare with the closed form.

use neumann_sp::analysis::Example1;
use neumann_sp::prelude::*;
use std::f64::consts::PI;

fn main() -> neumann_sp::Result<()> {
    let f = SmoothFunction::parse("exp(t)", 0.0, 1.0)?;
    let problem = ProblemSpec::new(0.0, 1.0, 1.0, f)?;
    let grid = uniform_grid(0.0, 1.0, 11);

    let eps = 4.0 / (PI * PI);
    let ctx = SolveContext::new(&problem, eps, 0.5, QuadConfig::default(), EvalForm::Reduced)?;
    let exact = Example1::new(0.0, 1.0, 1.0, eps)?;
    let profile = ctx.solve_grid(&grid)?;
    println!("eps = {eps:.6}, theta = {:.6}", ctx.theta);
    println!("{:>5} {:>20} {:>20} {:>10} {:>10}", "t", "y", "closed form", "y'", "residual");
    for i in 0..profile.len() {
        let t = profile.grid[i];
        println!(
            "{t:>5.2} {:>20.15} {:>20.15} {:>10.2e} {:>10.2e}",
            profile.y[i],
            exact.value(t),
            profile.y1[i],
            profile.residual[i]
        );
    }

    println!("\nsup |y - closed form| along the theta-midpoint sequence");
    for (n, eps) in sample_sequence(0.5, 1.0, 0.0, 1.0, 0, 12, Placement::ThetaMidpoint)? {
        let ctx = SolveContext::new(&problem, eps, 0.5, QuadConfig::default(), EvalForm::Reduced)?;
        let mut err = 0.0f64;
        for t in uniform_grid(0.0, 1.0, 101) {
            err = err.max((ctx.evaluate(t)? - oracle_example1(0.0, 1.0, 1.0, eps, t)?).abs());
        }
        println!("  n = {n:>2}  eps = {eps:.4e}  {err:.2e}");
    }
    Ok(())
}
