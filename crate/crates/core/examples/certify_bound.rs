use neumann_sp::prelude::*;

/// Measured sup |y − f/k| against the a priori bound for a few right-hand
/// sides and window indices.
fn main() -> neumann_sp::Result<()> {
    let grid = uniform_grid(0.0, 1.0, 201);
    let cfg = SupNormConfig::default();
    for src in ["exp(t)", "cos(2*pi*t)", "1 + 2*t^3", "sin(t)"] {
        let f = SmoothFunction::parse(src, 0.0, 1.0)?;
        let problem = ProblemSpec::new(0.0, 1.0, 4.0, f)?;
        println!("f = {src}, k = 4, lambda = 0.3");
        for (n, eps) in sample_sequence(0.3, 4.0, 0.0, 1.0, 0, 12, Placement::ThetaMidpoint)?.into_iter().step_by(3) {
            let ctx = SolveContext::new(&problem, eps, 0.3, QuadConfig::default(), EvalForm::Reduced)?;
            let r = certify_bound(&ctx, &grid, &cfg)?;
            println!(
                "  n = {n:>2}  error {:.3e}  bound {:.3e}  certified {}",
                r.sup_error, r.terms.bound, r.certified
            );
        }
    }
    println!("(suprema of f'' and f''' are sampled, see the caveat field of BoundReport)");
    Ok(())
}
