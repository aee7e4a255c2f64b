//! Integrals of g(s)·sin(ω(c − s)) for growing ω, next to the closed form
//! for g = eˢ.

use neumann_sp::prelude::*;

fn closed_form(omega: f64) -> f64 {
    // ∫₀¹ eˢ sin(ω(1 − s)) ds
    (std::f64::consts::E * omega - omega.sin() - omega * omega.cos()) / (1.0 + omega * omega)
}

fn main() -> neumann_sp::Result<()> {
    let g = SmoothFunction::parse("exp(t)", 0.0, 1.0)?;
    let cfg = QuadConfig::default();
    println!("{:>8} {:>10} {:>22} {:>10}", "omega", "evals", "integral", "rel err");
    for omega in [10.0, 1e2, 1e3, 1e4, 1e5] {
        let q = OscIntegrand {
            kind: Kernel::Sin,
            omega,
            shift: 1.0,
            g: &g,
            order: 0,
        };
        let v = osc_integral(&q, 0.0, 1.0, &cfg)?;
        let exact = closed_form(omega);
        println!(
            "{omega:>8.0e} {:>10} {v:>22.15e} {:>10.2e}",
            estimate_cost(omega, 0.0, 1.0, &cfg),
            ((v - exact) / exact).abs()
        );
    }

    let tight = QuadConfig {
        max_panels: 1000,
        ..cfg
    };
    let q = OscIntegrand {
        kind: Kernel::Cos,
        omega: 1e6,
        shift: 1.0,
        g: &g,
        order: 0,
    };
    match osc_integral(&q, 0.0, 1.0, &tight) {
        Err(e) => println!("with a 1000 panel cap: {e}"),
        Ok(v) => println!("unexpected: {v}"),
    }
    Ok(())
}
