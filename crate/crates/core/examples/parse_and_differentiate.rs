//! Parse a right-hand side and print its value and first three derivatives.
//!
//! ```text
//! cargo run --example parse_and_differentiate -- "exp(-t)/(2 + t)"
//! ```

use neumann_sp::prelude::*;

fn main() -> neumann_sp::Result<()> {
    let src = std::env::args().nth(1).unwrap_or_else(|| "sin(3*t)*exp(t/2) + t^3".into());
    let ast = parse_expr(&src)?;
    println!("parsed: {ast}");

    let f = SmoothFunction::parse(&src, 0.0, 1.0)?;
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "t", "f", "f'", "f''", "f'''");
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let jet = eval_jet(&ast, t)?;
        println!(
            "{t:>6.2} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            jet.derivative(0),
            jet.derivative(1),
            jet.derivative(2),
            jet.derivative(3)
        );
    }

    let cfg = SupNormConfig::default();
    for order in 0..=3 {
        let m = sup_norm_deriv(&f, order, (0.0, 1.0), cfg.samples, cfg.safety)?;
        println!("sup |f^({order})| ~ {m:.6}");
    }

    // syntax errors carry a position
    if let Err(e) = parse_expr("exp(t") {
        println!("bad input: {e}");
    }
    Ok(())
}
