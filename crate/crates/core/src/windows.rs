//! Non-resonance windows.
//!
//! With θ = √(k/ε)·(b − a), the window `J_n` is the set of ε for which
//! θ − nπ ∈ [λ, π − λ]; on it |sin θ| ≥ sin λ. Resonance points
//! ε*ₘ = k((b − a)/(mπ))² sit between consecutive windows.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonWindow {
    pub n: u64,
    pub lo: f64,
    pub hi: f64,
    pub lambda: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
}

impl EpsilonWindow {
    pub fn contains(&self, eps: f64) -> bool {
        self.lo <= eps && eps <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    InWindow { n: u64, theta: f64 },
    NearResonance { nearest_m: u64, distance_theta: f64, theta: f64 },
}

impl Classification {
    pub fn theta(&self) -> f64 {
        match *self {
            Classification::InWindow { theta, .. } | Classification::NearResonance { theta, .. } => {
                theta
            }
        }
    }

    pub fn window_index(&self) -> Option<u64> {
        match *self {
            Classification::InWindow { n, .. } => Some(n),
            Classification::NearResonance { .. } => None,
        }
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

pub(crate) fn check_problem(k: f64, a: f64, b: f64) -> Result<()> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidProblem(format!("k = {k} must be positive")));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidProblem(format!(
            "interval [{a}, {b}] must satisfy a < b"
        )));
    }
    Ok(())
}

/// ε for a given phase θ.
pub fn eps_for_theta(theta: f64, k: f64, a: f64, b: f64) -> f64 {
    let r = (b - a) / theta;
    k * r * r
}

/// Phase θ = √(k/ε)·(b − a).
pub fn theta_for_eps(eps: f64, k: f64, a: f64, b: f64) -> f64 {
    (k / eps).sqrt() * (b - a)
}

/// The window `J_n`.
pub fn window(n: u64, lambda: f64, k: f64, a: f64, b: f64) -> Result<EpsilonWindow> {
    check_lambda(lambda)?;
    check_problem(k, a, b)?;
    let nf = n as f64;
    Ok(EpsilonWindow {
        n,
        lo: eps_for_theta((nf + 1.0) * PI - lambda, k, a, b),
        hi: eps_for_theta(nf * PI + lambda, k, a, b),
        lambda,
        k,
        a,
        b,
    })
}

/// ε*ₘ for m = 1..=m_max, strictly decreasing.
pub fn resonance_points(k: f64, a: f64, b: f64, m_max: u64) -> Result<Vec<f64>> {
    check_problem(k, a, b)?;
    if m_max < 1 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    Ok((1..=m_max)
        .map(|m| eps_for_theta(m as f64 * PI, k, a, b))
        .collect())
}

/// Slack on the phase test so that ε at a computed window endpoint still
/// classifies as inside the (closed) window.
fn phase_slack(theta: f64) -> f64 {
    8.0 * f64::EPSILON * theta.max(1.0)
}

/// Places `eps` relative to the windows for gap `lambda`.
pub fn classify(eps: f64, lambda: f64, k: f64, a: f64, b: f64) -> Result<Classification> {
    check_lambda(lambda)?;
    check_problem(k, a, b)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    let theta = theta_for_eps(eps, k, a, b);
    let n = (theta / PI).floor();
    let r = theta - n * PI;
    let slack = phase_slack(theta);
    if r >= lambda - slack && r <= PI - lambda + slack {
        return Ok(Classification::InWindow {
            n: n as u64,
            theta,
        });
    }
    let m = (theta / PI).round();
    Ok(Classification::NearResonance {
        nearest_m: m as u64,
        distance_theta: (theta - m * PI).abs(),
        theta,
    })
}

/// Where inside `J_n` to put ε_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "placement", content = "r", rename_all = "snake_case")]
pub enum Placement {
    /// θ_n = (2n + 1)π/2, where |sin θ| = 1.
    ThetaMidpoint,
    /// θ_n = nπ + λ + r(π − 2λ) with r ∈ (0, 1).
    ThetaFraction(f64),
}

impl Placement {
    pub fn theta(&self, n: u64, lambda: f64) -> f64 {
        let nf = n as f64;
        match *self {
            Placement::ThetaMidpoint => (2.0 * nf + 1.0) * FRAC_PI_2,
            Placement::ThetaFraction(r) => nf * PI + lambda + r * (PI - 2.0 * lambda),
        }
    }
}

/// `(n, ε_n)` for `n_from..=n_to`; each ε_n classifies into `J_n`.
pub fn sample_sequence(
    lambda: f64,
    k: f64,
    a: f64,
    b: f64,
    n_from: u64,
    n_to: u64,
    placement: Placement,
) -> Result<Vec<(u64, f64)>> {
    check_lambda(lambda)?;
    check_problem(k, a, b)?;
    if n_from > n_to {
        return Err(Error::InvalidArgument(format!(
            "n_from = {n_from} exceeds n_to = {n_to}"
        )));
    }
    if let Placement::ThetaFraction(r) = placement {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "placement fraction {r} must lie in (0, 1)"
            )));
        }
    }
    (n_from..=n_to)
        .map(|n| {
            let eps = eps_for_theta(placement.theta(n, lambda), k, a, b);
            match classify(eps, lambda, k, a, b)? {
                Classification::InWindow { n: got, .. } if got == n => Ok((n, eps)),
                other => Err(Error::InvalidArgument(format!(
                    "placement {placement:?} put eps = {eps} outside J_{n}: {other:?}"
                ))),
            }
        })
        .collect()
}
