//! Analytic solution against second-order finite differences.

use neumann_sp::prelude::*;

fn main() -> neumann_sp::Result<()> {
    let f = SmoothFunction::parse("cos(2*pi*t)", 0.0, 1.0)?;
    let problem = ProblemSpec::new(0.0, 1.0, 1.0, f)?;
    let eps = 0.01;
    let ctx = SolveContext::new(&problem, eps, 0.5, QuadConfig::default(), EvalForm::Reduced)?;

    let mut prev: Option<f64> = None;
    for nodes in [1251, 2501, 5001, 10001, 20001] {
        let fd = fd_oracle(&problem, eps, nodes)?;
        let mut err = 0.0f64;
        for i in 0..fd.len() {
            err = err.max((fd.y[i] - ctx.evaluate(fd.grid[i])?).abs());
        }
        match prev {
            Some(p) => println!("nodes {nodes:>6}  sup error {err:.3e}  ratio {:.3}", p / err),
            None => println!("nodes {nodes:>6}  sup error {err:.3e}"),
        }
        prev = Some(err);
    }
    Ok(())
}
