//! Closed forms for the oscillatory integrals.
//!
//! Oracles:
//! * `g = eˢ`: `∫ₗʰ eˢ e^{iω(c−s)} ds = e^{iωc} [e^{(1−iω)s}/(1−iω)]ₗʰ`,
//!   real part for the cosine kernel, imaginary part for the sine kernel.
//! * `g = sⁿ`, `c = 1`, `[0, 1]`: substitute `u = 1 − s` and use the
//!   recurrences for `∫₀¹ uⁿ cos(ωu) du`, `∫₀¹ uⁿ sin(ωu) du`.

#![allow(dead_code)]

use neumann_sp::prelude::*;
use num_complex::Complex64;

pub fn exp_oracle(kind: Kernel, omega: f64, shift: f64, lo: f64, hi: f64) -> f64 {
    let z = Complex64::new(1.0, -omega);
    let anti = |s: f64| (z * s).exp() / z;
    let v = Complex64::new(0.0, omega * shift).exp() * (anti(hi) - anti(lo));
    match kind {
        Kernel::Cos => v.re,
        Kernel::Sin => v.im,
    }
}

/// `(∫₀¹ uᵐ cos(ωu) du, ∫₀¹ uᵐ sin(ωu) du)` for m = 0..=n.
pub fn moments(omega: f64, n: usize) -> Vec<(f64, f64)> {
    let (s, c) = omega.sin_cos();
    let mut out = vec![(s / omega, (1.0 - c) / omega)];
    for m in 1..=n {
        let (pc, ps) = out[m - 1];
        let mf = m as f64;
        out.push((s / omega - mf / omega * ps, -c / omega + mf / omega * pc));
    }
    out
}

/// `∫₀¹ kernel(ω(1 − s)) · Σ coeffs[j] sʲ ds`.
pub fn poly_oracle(kind: Kernel, omega: f64, coeffs: &[f64]) -> f64 {
    // expand Σ cⱼ (1 − u)ʲ in powers of u
    let n = coeffs.len() - 1;
    let mut in_u = vec![0.0; n + 1];
    for (j, &c) in coeffs.iter().enumerate() {
        let mut binom = 1.0;
        for m in 0..=j {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            in_u[m] += c * binom * sign;
            binom = binom * (j - m) as f64 / (m + 1) as f64;
        }
    }
    let mom = moments(omega, n);
    in_u.iter()
        .zip(&mom)
        .map(|(c, (mc, ms))| c * if kind == Kernel::Cos { *mc } else { *ms })
        .sum()
}

pub fn integrate(src: &str, kind: Kernel, omega: f64, shift: f64, lo: f64, hi: f64, cfg: &QuadConfig) -> f64 {
    let g = SmoothFunction::parse(src, -2.0, 3.0).unwrap();
    let q = OscIntegrand {
        kind,
        omega,
        shift,
        g: &g,
        order: 0,
    };
    osc_integral(&q, lo, hi, cfg).unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
