//! Non-resonance windows, the resonance points between them, and the
//! θ-midpoint sequence.

use neumann_sp::prelude::*;

fn main() -> neumann_sp::Result<()> {
    let (k, a, b, lambda) = (1.0, 0.0, 1.0, 0.5);

    println!("windows for k = {k}, [a, b] = [{a}, {b}], lambda = {lambda}");
    for n in 0..6 {
        let w = window(n, lambda, k, a, b)?;
        println!("  J_{n}: [{:.6e}, {:.6e}]", w.lo, w.hi);
    }

    println!("resonance points");
    for (i, eps) in resonance_points(k, a, b, 6)?.iter().enumerate() {
        println!("  eps*_{} = {eps:.6e}", i + 1);
    }

    println!("classification");
    for eps in [0.5, 0.1013, 0.05, 0.01, 1e-4] {
        match classify(eps, lambda, k, a, b)? {
            Classification::InWindow { n, theta } => println!("  eps = {eps:<8} theta = {theta:>8.4}  in J_{n}"),
            Classification::NearResonance { nearest_m, distance_theta, theta } => println!(
                "  eps = {eps:<8} theta = {theta:>8.4}  refused, {distance_theta:.3e} from {nearest_m} pi"
            ),
        }
    }

    println!("theta-midpoint sequence");
    for (n, eps) in sample_sequence(lambda, k, a, b, 0, 5, Placement::ThetaMidpoint)? {
        println!("  eps_{n} = {eps:.6e}");
    }
    Ok(())
}
