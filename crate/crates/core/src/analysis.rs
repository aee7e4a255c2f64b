//! Error bounds, independent oracles and convergence-rate measurement.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnmodel::{lerp, sup_norm_deriv, SupNormConfig};
use crate::quadrature::QuadConfig;
use crate::solver::{EvalForm, ProblemSpec, SolutionProfile, SolveContext};
use crate::windows::{classify, eps_for_theta, sample_sequence, Classification, Placement};

/// `n` uniform points on `[a, b]`, both endpoints included exactly.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| lerp(a, b, i, n)).collect(),
    }
}

// ---------------------------------------------------------------------------
// A priori bound

/// Ingredients and value of the uniform a priori bound on `|y_ε − f/k|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AprioriBound {
    pub eps: f64,
    pub lambda: f64,
    pub k: f64,
    /// `b − a`
    pub span: f64,
    /// estimate of sup |f″|
    pub mu1: f64,
    /// estimate of sup |f‴|
    pub mu2: f64,
    /// |f′(a)|
    pub fa1: f64,
    /// |f′(b)|
    pub fb1: f64,
    /// |f″(a)|
    pub fa2: f64,
    pub bound: f64,
}

impl AprioriBound {
    /// The bound from its stored ingredients.
    pub fn assemble(&self) -> f64 {
        let r = (self.eps / self.k).sqrt();
        let global = self.fa1 + self.fb1 + r * (self.fa2 + self.mu2 * self.span);
        let local = self.fa1 + r * (self.mu1 + self.fa2 + self.mu2 * self.span);
        r * global / (self.k * self.lambda.sin()) + r * local / self.k
    }
}

/// Bound on `sup |y_ε − f/k|` for ε inside a window of gap `lambda`.
pub fn apriori_bound(
    p: &ProblemSpec,
    eps: f64,
    lambda: f64,
    cfg: &SupNormConfig,
) -> Result<AprioriBound> {
    if let Classification::NearResonance {
        nearest_m,
        distance_theta,
        theta,
    } = classify(eps, lambda, p.k, p.a, p.b)?
    {
        return Err(Error::NearResonance {
            eps,
            theta,
            nearest_m,
            distance: distance_theta,
            lambda,
        });
    }
    let interval = (p.a, p.b);
    let mut out = AprioriBound {
        eps,
        lambda,
        k: p.k,
        span: p.b - p.a,
        mu1: sup_norm_deriv(&p.f, 2, interval, cfg.samples, cfg.safety)?,
        mu2: sup_norm_deriv(&p.f, 3, interval, cfg.samples, cfg.safety)?,
        fa1: p.f.eval(p.a, 1)?.abs(),
        fb1: p.f.eval(p.b, 1)?.abs(),
        fa2: p.f.eval(p.a, 2)?.abs(),
        bound: 0.0,
    };
    out.bound = out.assemble();
    Ok(out)
}

/// A priori bound next to the measured error on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(flatten)]
    pub terms: AprioriBound,
    pub sup_error: f64,
    pub certified: bool,
    pub caveat: String,
}

/// Measures `sup |y_ε − f/k|` on `grid` and compares it with the bound.
pub fn certify_bound(ctx: &SolveContext<'_>, grid: &[f64], cfg: &SupNormConfig) -> Result<BoundReport> {
    let terms = apriori_bound(ctx.problem(), ctx.eps, ctx.lambda, cfg)?;
    let sup_error = sup_error_vs_reduced(ctx, grid)?;
    Ok(BoundReport {
        terms,
        sup_error,
        certified: sup_error <= terms.bound,
        caveat: format!(
            "sup|f''| and sup|f'''| estimated as max over {} uniform samples times {}; \
             error measured on {} grid points",
            cfg.samples,
            cfg.safety,
            grid.len()
        ),
    })
}

/// `max over grid of |y_ε(t) − f(t)/k|`.
pub fn sup_error_vs_reduced(ctx: &SolveContext<'_>, grid: &[f64]) -> Result<f64> {
    let p = ctx.problem();
    let mut max = 0.0f64;
    for &t in grid {
        max = max.max((ctx.evaluate(t)? - p.reduced(t)?).abs());
    }
    Ok(max)
}

// ---------------------------------------------------------------------------
// Closed-form oracle for f = eᵗ

/// Closed-form solution for `f(t) = eᵗ` and its first two derivatives.
#[derive(Debug, Clone, Copy)]
pub struct Example1 {
    a: f64,
    b: f64,
    k: f64,
    eps: f64,
    omega: f64,
    denom: f64,
}

impl Example1 {
    pub fn new(a: f64, b: f64, k: f64, eps: f64) -> Result<Self> {
        crate::windows::check_problem(k, a, b)?;
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
        }
        let omega = (k / eps).sqrt();
        let theta = omega * (b - a);
        let s = theta.sin();
        if s.abs() <= 1e-12 {
            let m = (theta / PI).round();
            return Err(Error::NearResonance {
                eps,
                theta,
                nearest_m: m as u64,
                distance: (theta - m * PI).abs(),
                lambda: 0.0,
            });
        }
        Ok(Self {
            a,
            b,
            k,
            eps,
            omega,
            denom: omega * (k + eps) * s,
        })
    }

    pub fn value(&self, t: f64) -> f64 {
        let w = self.omega;
        (-self.a.exp() * (w * (self.b - t)).cos() + self.b.exp() * (w * (t - self.a)).cos())
            / self.denom
            + t.exp() / (self.k + self.eps)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let w = self.omega;
        w * (-self.a.exp() * (w * (self.b - t)).sin() - self.b.exp() * (w * (t - self.a)).sin())
            / self.denom
            + t.exp() / (self.k + self.eps)
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let w = self.omega;
        w * w * (self.a.exp() * (w * (self.b - t)).cos() - self.b.exp() * (w * (t - self.a)).cos())
            / self.denom
            + t.exp() / (self.k + self.eps)
    }
}

/// Closed-form `y_ε(t)` for `f(t) = eᵗ`.
pub fn oracle_example1(a: f64, b: f64, k: f64, eps: f64, t: f64) -> Result<f64> {
    Ok(Example1::new(a, b, k, eps)?.value(t))
}

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// Solves a tridiagonal system with partial pivoting (LAPACK `gtsv`
/// elimination order). `sub[i]` couples row `i + 1` to column `i`,
/// `sup[i]` couples row `i` to column `i + 1`.
fn solve_tridiagonal(
    mut sub: Vec<f64>,
    mut diag: Vec<f64>,
    mut sup: Vec<f64>,
    mut rhs: Vec<f64>,
) -> Result<Vec<f64>> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(&sub)
        .chain(&sup)
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let tiny = scale * f64::EPSILON * n as f64;
    // second superdiagonal fill-in from row swaps
    let mut sup2 = vec![0.0; n.saturating_sub(2)];
    for i in 0..n - 1 {
        if diag[i].abs() >= sub[i].abs() {
            if diag[i].abs() <= tiny {
                return Err(Error::SingularSystem { row: i });
            }
            let m = sub[i] / diag[i];
            diag[i + 1] -= m * sup[i];
            rhs[i + 1] -= m * rhs[i];
        } else {
            let m = diag[i] / sub[i];
            diag[i] = sub[i];
            let tmp = diag[i + 1];
            diag[i + 1] = sup[i] - m * tmp;
            if i + 1 < n - 1 {
                sup2[i] = sup[i + 1];
                sup[i + 1] = -m * sup2[i];
            }
            sup[i] = tmp;
            rhs.swap(i, i + 1);
            rhs[i + 1] -= m * rhs[i];
        }
        sub[i] = 0.0;
    }
    if diag[n - 1].abs() <= tiny {
        return Err(Error::SingularSystem { row: n - 1 });
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - sup[n - 2] * x[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1] - sup2[i] * x[i + 2]) / diag[i];
    }
    Ok(x)
}

/// Second-order central differences for `ε·y″ + k·y = f` with Neumann
/// conditions imposed by ghost-node reflection (`y₋₁ = y₁`,
/// `y_{N+1} = y_{N−1}`).
///
/// `y1` holds central-difference slopes (zero at both ends by construction),
/// `y2` the discrete second difference.
pub fn fd_oracle(p: &ProblemSpec, eps: f64, n_nodes: usize) -> Result<SolutionProfile> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    let theta = (p.k / eps).sqrt() * (p.b - p.a);
    let needed = (20.0 * theta / PI).ceil().max(11.0);
    if (n_nodes as f64) < needed {
        return Err(Error::InvalidArgument(format!(
            "n_nodes = {n_nodes} is below the {needed} needed to resolve theta = {theta}"
        )));
    }
    let grid = uniform_grid(p.a, p.b, n_nodes);
    let h = (p.b - p.a) / (n_nodes - 1) as f64;
    let c = eps / (h * h);
    let n = n_nodes;

    let diag = vec![p.k - 2.0 * c; n];
    let mut sub = vec![c; n - 1];
    let mut sup = vec![c; n - 1];
    sup[0] = 2.0 * c;
    sub[n - 2] = 2.0 * c;
    let rhs = grid
        .iter()
        .map(|&t| p.f.eval(t, 0))
        .collect::<Result<Vec<_>>>()?;

    let y = solve_tridiagonal(sub, diag, sup, rhs.clone())?;

    let mut profile = SolutionProfile::with_capacity(n);
    for i in 0..n {
        let left = if i == 0 { y[1] } else { y[i - 1] };
        let right = if i == n - 1 { y[n - 2] } else { y[i + 1] };
        let y1 = (right - left) / (2.0 * h);
        let y2 = (left - 2.0 * y[i] + right) / (h * h);
        profile.push(grid[i], y[i], y1, y2, eps * y2 + p.k * y[i] - rhs[i]);
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Convergence rates

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectedOrder {
    /// O(√ε)
    Half,
    /// O(ε), when f′ vanishes at both ends
    One,
}

impl ExpectedOrder {
    pub fn slope(self) -> f64 {
        match self {
            ExpectedOrder::Half => 0.5,
            ExpectedOrder::One => 1.0,
        }
    }

    /// Accepted slope interval.
    pub fn window(self) -> (f64, f64) {
        let s = self.slope();
        (s - 0.1, s + 0.1)
    }
}

/// Endpoint slopes at or below this count as vanishing.
pub const VANISHING_SLOPE: f64 = 1e-12;

/// Minimum r² for a rate fit to pass.
pub const MIN_R_SQUARED: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: u64,
    pub eps: f64,
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateFit {
    pub points: Vec<RatePoint>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub expected_order: ExpectedOrder,
}

impl RateFit {
    /// Slope inside the expected order's window and r² ≥ [`MIN_R_SQUARED`].
    pub fn passes(&self) -> bool {
        let (lo, hi) = self.expected_order.window();
        self.slope >= lo && self.slope <= hi && self.r_squared >= MIN_R_SQUARED
    }
}

/// Least-squares line through `(log eps, log sup_error)` over the points
/// whose error exceeds `floor`.
pub fn fit_power_law(
    points: Vec<RatePoint>,
    expected_order: ExpectedOrder,
    floor: f64,
) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.sup_error > floor)
        .map(|p| (p.eps.ln(), p.sup_error.ln()))
        .collect();
    if usable.len() < 2 || 2 * usable.len() <= points.len() {
        return Err(Error::DegenerateFit(format!(
            "{} of {} errors exceed the floor {floor:e}",
            usable.len(),
            points.len()
        )));
    }
    let m = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / m;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &usable {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all eps values coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(RateFit {
        points,
        slope,
        intercept: my - slope * mx,
        r_squared,
        expected_order,
    })
}

/// Sweeps the θ-midpoint sequence `n_from..=n_to` and fits the log-log
/// slope of `sup |y_ε − f/k|` against ε.
pub fn rate_fit(
    p: &ProblemSpec,
    lambda: f64,
    n_from: u64,
    n_to: u64,
    grid_size: usize,
    quad: QuadConfig,
) -> Result<RateFit> {
    if n_to < n_from + 5 {
        return Err(Error::InvalidArgument(format!(
            "rate fits need n_to - n_from >= 5, got {n_from}..{n_to}"
        )));
    }
    let expected = if p.f.eval(p.a, 1)?.abs() <= VANISHING_SLOPE
        && p.f.eval(p.b, 1)?.abs() <= VANISHING_SLOPE
    {
        ExpectedOrder::One
    } else {
        ExpectedOrder::Half
    };
    let grid = uniform_grid(p.a, p.b, grid_size);
    let mut scale = 0.0f64;
    for &t in &grid {
        scale = scale.max(p.reduced(t)?.abs());
    }
    let seq = sample_sequence(lambda, p.k, p.a, p.b, n_from, n_to, Placement::ThetaMidpoint)?;
    let mut points = Vec::with_capacity(seq.len());
    for (n, eps) in seq {
        let ctx = SolveContext::new(p, eps, lambda, quad, EvalForm::Reduced)?;
        points.push(RatePoint {
            n,
            eps,
            sup_error: sup_error_vs_reduced(&ctx, &grid)?,
        });
    }
    fit_power_law(points, expected, 1e-13 * (1.0 + scale))
}

// ---------------------------------------------------------------------------
// Near-resonance growth

/// Default lower limit on the phase offset δ.
pub const DELTA_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonancePoint {
    pub delta: f64,
    pub eps: f64,
    pub sup_abs_y: f64,
}

/// `sup |y_ε|` on a grid for θ = mπ + δ, bypassing the window check.
pub fn near_resonance_sweep(
    p: &ProblemSpec,
    m: u64,
    deltas: &[f64],
    grid_size: usize,
    quad: QuadConfig,
    floor: f64,
) -> Result<Vec<ResonancePoint>> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("no deltas given".into()));
    }
    for (i, &d) in deltas.iter().enumerate() {
        if !(d.is_finite() && d >= floor) {
            return Err(Error::InvalidArgument(format!(
                "delta = {d} is below the floor {floor:e}"
            )));
        }
        if i > 0 && d >= deltas[i - 1] {
            return Err(Error::InvalidArgument("deltas must be strictly decreasing".into()));
        }
    }
    let grid = uniform_grid(p.a, p.b, grid_size);
    deltas
        .iter()
        .map(|&delta| {
            let eps = eps_for_theta(m as f64 * PI + delta, p.k, p.a, p.b);
            let ctx = SolveContext::new_unchecked(p, eps, quad, EvalForm::Reduced)?;
            let mut sup = 0.0f64;
            for &t in &grid {
                sup = sup.max(ctx.evaluate(t)?.abs());
            }
            Ok(ResonancePoint {
                delta,
                eps,
                sup_abs_y: sup,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnmodel::SmoothFunction;
    use std::f64::consts::E;

    fn problem(src: &str, k: f64) -> ProblemSpec {
        ProblemSpec::new(0.0, 1.0, k, SmoothFunction::parse(src, 0.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn bound_of_constant_is_zero() {
        let p = problem("1", 2.0);
        let b = apriori_bound(&p, 0.4, 0.5, &SupNormConfig::default()).unwrap();
        assert_eq!(b.bound, 0.0);
    }

    #[test]
    fn bound_for_exponential() {
        let p = problem("exp(t)", 1.0);
        // exact suprema: the bound by hand
        let exact = AprioriBound {
            eps: 0.01,
            lambda: 0.5,
            k: 1.0,
            span: 1.0,
            mu1: E,
            mu2: E,
            fa1: 1.0,
            fb1: E,
            fa2: 1.0,
            bound: 0.0,
        };
        let by_hand = (1.0 / 0.5f64.sin()) * 0.1 * (1.0 + E + 0.1 * (1.0 + E))
            + 0.1 * (1.0 + 0.1 * (E + 1.0 + E));
        assert!((exact.assemble() - by_hand).abs() < 1e-15);
        assert!((by_hand - 1.0175).abs() < 1e-4);

        let b = apriori_bound(&p, 0.01, 0.5, &SupNormConfig::default()).unwrap();
        assert!((b.mu1 - 1.05 * E).abs() < 1e-12);
        assert_eq!(b.bound, b.assemble());
        assert!(b.bound > by_hand && b.bound < by_hand * 1.05);
    }

    #[test]
    fn bound_refuses_resonance() {
        let p = problem("exp(t)", 1.0);
        let r = apriori_bound(&p, 1.0 / (PI * PI), 0.5, &SupNormConfig::default());
        assert!(matches!(r, Err(Error::NearResonance { .. })));
    }

    #[test]
    fn example1_closed_form() {
        let eps = 4.0 / (PI * PI);
        let ex = Example1::new(0.0, 1.0, 1.0, eps).unwrap();
        // e/((π/2)(1 + ε)) + 1/(1 + ε)
        assert!((ex.value(0.0) - 1.943_031_110_845_514).abs() < 1e-14);
        assert!(ex.derivative(0.0).abs() < 1e-15);
        assert!(ex.derivative(1.0).abs() < 1e-14);
        for t in uniform_grid(0.0, 1.0, 11) {
            let r = eps * ex.second_derivative(t) + ex.value(t) - t.exp();
            assert!(r.abs() <= 1e-10 * t.exp(), "{t}: {r}");
        }
        assert!(matches!(
            oracle_example1(0.0, 1.0, 1.0, 1.0 / (PI * PI), 0.0),
            Err(Error::NearResonance { .. })
        ));
    }

    #[test]
    fn tridiagonal_solver_with_pivoting() {
        // small indefinite system, checked by multiplying back
        let sub = vec![3.0, -1.0, 4.0];
        let diag = vec![0.5, 0.1, 2.0, -1.0];
        let sup = vec![1.0, 5.0, 0.3];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let mut rhs = vec![0.0; 4];
        for i in 0..4 {
            rhs[i] += diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += sub[i - 1] * x_true[i - 1];
            }
            if i < 3 {
                rhs[i] += sup[i] * x_true[i + 1];
            }
        }
        let x = solve_tridiagonal(sub, diag, sup, rhs).unwrap();
        for i in 0..4 {
            assert!((x[i] - x_true[i]).abs() < 1e-13, "{x:?}");
        }
    }

    #[test]
    fn tridiagonal_singular() {
        let r = solve_tridiagonal(vec![1.0], vec![1.0, 1.0], vec![1.0], vec![1.0, 2.0]);
        assert!(matches!(r, Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn fd_constant_is_exact() {
        let p = problem("1", 2.0);
        let prof = fd_oracle(&p, 0.405, 101).unwrap();
        for y in &prof.y {
            assert!((y - 0.5).abs() < 1e-12);
        }
        assert!(fd_oracle(&p, 0.001, 50).is_err());
    }

    #[test]
    fn synthetic_power_law() {
        let points: Vec<RatePoint> = (2..15)
            .map(|n| {
                let eps = (2.0 / ((2 * n + 1) as f64 * PI)).powi(2);
                RatePoint {
                    n,
                    eps,
                    sup_error: 3.0 * eps.sqrt(),
                }
            })
            .collect();
        let fit = fit_power_law(points, ExpectedOrder::Half, 0.0).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.passes());
    }

    #[test]
    fn degenerate_fit() {
        let points = (0..6)
            .map(|n| RatePoint {
                n,
                eps: 0.1 / (n + 1) as f64,
                sup_error: 0.0,
            })
            .collect();
        assert!(matches!(
            fit_power_law(points, ExpectedOrder::Half, 1e-13),
            Err(Error::DegenerateFit(_))
        ));
        let p = problem("1", 1.0);
        assert!(matches!(
            rate_fit(&p, 0.5, 2, 14, 11, QuadConfig::default()),
            Err(Error::DegenerateFit(_))
        ));
        assert!(rate_fit(&p, 0.5, 2, 6, 11, QuadConfig::default()).is_err());
    }

    #[test]
    fn sweep_validation() {
        let p = problem("exp(t)", 1.0);
        let q = QuadConfig::default();
        assert!(near_resonance_sweep(&p, 1, &[0.5, 1e-6], 11, q, DELTA_FLOOR).is_err());
        assert!(near_resonance_sweep(&p, 1, &[0.25, 0.5], 11, q, DELTA_FLOOR).is_err());
        assert!(near_resonance_sweep(&p, 0, &[0.5], 11, q, DELTA_FLOOR).is_err());
        assert!(near_resonance_sweep(&p, 1, &[], 11, q, DELTA_FLOOR).is_err());
    }

    #[test]
    fn sweep_of_constant_is_flat() {
        let p = problem("1", 4.0);
        let pts =
            near_resonance_sweep(&p, 2, &[0.5, 0.1, 0.01], 21, QuadConfig::default(), DELTA_FLOOR)
                .unwrap();
        for pt in pts {
            assert_eq!(pt.sup_abs_y, 0.25);
        }
    }
}
