//! Explicit solution of `ε·y″ + k·y = f`, `y′(a) = y′(b) = 0`.
//!
//! With ω = √(k/ε) and θ = ω(b − a), variation of parameters gives
//!
//! ```text
//! y(t)  = cos(ω(t−a))·I₁ / (ω sin θ) + (1/ω)∫ₐᵗ sin(ω(t−s)) f(s)/ε ds,
//! I₁    = ∫ₐᵇ cos(ω(b−s)) f(s)/ε ds.
//! ```
//!
//! Integrating both integrals by parts once moves the derivative onto `f`
//! and removes a factor 1/ε from the integrands:
//!
//! ```text
//! y(t) = f(t)/k + cos(ω(t−a))/sin θ · ∫ₐᵇ sin(ω(b−s)) f′(s)/k ds
//!               − ∫ₐᵗ cos(ω(t−s)) f′(s)/k ds.
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnmodel::SmoothFunction;
use crate::quadrature::{osc_integral, Kernel, OscIntegrand, QuadConfig};
use crate::windows::{check_lambda, check_problem, classify, Classification};

/// One instance `(a, b, k, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub f: SmoothFunction,
}

impl ProblemSpec {
    pub fn new(a: f64, b: f64, k: f64, f: SmoothFunction) -> Result<Self> {
        check_problem(k, a, b)?;
        let (lo, hi) = f.domain();
        if lo > a || hi < b {
            return Err(Error::InvalidProblem(format!(
                "f is defined on [{lo}, {hi}], which does not cover [{a}, {b}]"
            )));
        }
        Ok(Self { a, b, k, f })
    }

    /// The reduced solution `f(t)/k`.
    pub fn reduced(&self, t: f64) -> Result<f64> {
        Ok(self.f.eval(t, 0)? / self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalForm {
    Naive,
    #[default]
    Reduced,
}

impl std::str::FromStr for EvalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(EvalForm::Naive),
            "reduced" => Ok(EvalForm::Reduced),
            _ => Err(Error::InvalidArgument(format!(
                "form `{s}` must be `naive` or `reduced`"
            ))),
        }
    }
}

impl std::fmt::Display for EvalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalForm::Naive => "naive",
            EvalForm::Reduced => "reduced",
        })
    }
}

/// Everything that depends on `(problem, ε)` but not on `t`, including the
/// two boundary integrals. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SolveContext<'p> {
    problem: &'p ProblemSpec,
    pub eps: f64,
    pub lambda: f64,
    pub omega: f64,
    pub theta: f64,
    pub window: Classification,
    pub quad: QuadConfig,
    pub eval_form: EvalForm,
    sin_theta: f64,
    /// `∫ₐᵇ cos(ω(b−s)) f(s) ds` (without the 1/ε factor)
    i1_naive: f64,
    /// `∫ₐᵇ sin(ω(b−s)) f′(s) ds` (without the 1/k factor)
    i1_reduced: f64,
}

impl<'p> SolveContext<'p> {
    /// Refuses ε outside every window `J_n` for this λ.
    pub fn new(
        problem: &'p ProblemSpec,
        eps: f64,
        lambda: f64,
        quad: QuadConfig,
        eval_form: EvalForm,
    ) -> Result<Self> {
        let window = classify(eps, lambda, problem.k, problem.a, problem.b)?;
        if let Classification::NearResonance {
            nearest_m,
            distance_theta,
            theta,
        } = window
        {
            return Err(Error::NearResonance {
                eps,
                theta,
                nearest_m,
                distance: distance_theta,
                lambda,
            });
        }
        Self::build(problem, eps, lambda, quad, eval_form, window)
    }

    /// Skips the window check; only exact resonance (sin θ = 0) is refused.
    /// Used to study growth of the solution as θ approaches mπ.
    pub fn new_unchecked(
        problem: &'p ProblemSpec,
        eps: f64,
        quad: QuadConfig,
        eval_form: EvalForm,
    ) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
        }
        let theta = (problem.k / eps).sqrt() * (problem.b - problem.a);
        let m = (theta / std::f64::consts::PI).round();
        let window = Classification::NearResonance {
            nearest_m: m as u64,
            distance_theta: (theta - m * std::f64::consts::PI).abs(),
            theta,
        };
        Self::build(problem, eps, f64::NAN, quad, eval_form, window)
    }

    fn build(
        problem: &'p ProblemSpec,
        eps: f64,
        lambda: f64,
        quad: QuadConfig,
        eval_form: EvalForm,
        window: Classification,
    ) -> Result<Self> {
        if !lambda.is_nan() {
            check_lambda(lambda)?;
        }
        quad.validate()?;
        let omega = (problem.k / eps).sqrt();
        let theta = omega * (problem.b - problem.a);
        let sin_theta = theta.sin();
        if sin_theta == 0.0 {
            return Err(Error::NearResonance {
                eps,
                theta,
                nearest_m: (theta / std::f64::consts::PI).round() as u64,
                distance: 0.0,
                lambda,
            });
        }
        let mut ctx = Self {
            problem,
            eps,
            lambda,
            omega,
            theta,
            window,
            quad,
            eval_form,
            sin_theta,
            i1_naive: 0.0,
            i1_reduced: 0.0,
        };
        let (a, b) = (problem.a, problem.b);
        ctx.i1_naive = ctx.integral(Kernel::Cos, b, 0, a, b)?;
        ctx.i1_reduced = ctx.integral(Kernel::Sin, b, 1, a, b)?;
        Ok(ctx)
    }

    pub fn problem(&self) -> &'p ProblemSpec {
        self.problem
    }

    pub fn sin_theta(&self) -> f64 {
        self.sin_theta
    }

    fn integral(&self, kind: Kernel, shift: f64, order: usize, lo: f64, hi: f64) -> Result<f64> {
        if lo == hi {
            return Ok(0.0);
        }
        let q = OscIntegrand {
            kind,
            omega: self.omega,
            shift,
            g: &self.problem.f,
            order,
        };
        osc_integral(&q, lo, hi, &self.quad)
    }

    fn check_t(&self, t: f64) -> Result<()> {
        let p = self.problem;
        if t >= p.a && t <= p.b {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "t = {t} lies outside [{}, {}]",
                p.a, p.b
            )))
        }
    }

    /// Variation-of-parameters formula with `f/ε` integrands.
    pub fn evaluate_naive(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let p = self.problem;
        let (w, eps) = (self.omega, self.eps);
        let i2 = self.integral(Kernel::Sin, t, 0, p.a, t)? / eps;
        let i1 = self.i1_naive / eps;
        Ok((w * (t - p.a)).cos() * i1 / (w * self.sin_theta) + i2 / w)
    }

    /// Integrated-by-parts formula with `f′/k` integrands.
    pub fn evaluate_reduced(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let p = self.problem;
        let w = self.omega;
        let tail = self.integral(Kernel::Cos, t, 1, p.a, t)?;
        Ok(p.f.eval(t, 0)? / p.k + (w * (t - p.a)).cos() / self.sin_theta * self.i1_reduced / p.k
            - tail / p.k)
    }

    /// `y(t)` in the configured form.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        match self.eval_form {
            EvalForm::Naive => self.evaluate_naive(t),
            EvalForm::Reduced => self.evaluate_reduced(t),
        }
    }

    /// `y′(t)`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let p = self.problem;
        let (w, eps) = (self.omega, self.eps);
        let i1 = self.i1_naive / eps;
        let tail = self.integral(Kernel::Cos, t, 0, p.a, t)? / eps;
        Ok(-(w * (t - p.a)).sin() * i1 / self.sin_theta + tail)
    }

    /// `y″(t)`.
    pub fn second_derivative(&self, t: f64) -> Result<f64> {
        self.check_t(t)?;
        let p = self.problem;
        let (w, eps) = (self.omega, self.eps);
        let i1 = self.i1_naive / eps;
        let tail = self.integral(Kernel::Sin, t, 0, p.a, t)? / eps;
        Ok(-w * (w * (t - p.a)).cos() * i1 / self.sin_theta - w * tail + p.f.eval(t, 0)? / eps)
    }

    /// Samples `y`, `y′`, `y″` and the ODE residual on a sorted grid.
    pub fn solve_grid(&self, grid: &[f64]) -> Result<SolutionProfile> {
        if grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument("grid must be sorted".into()));
        }
        let p = self.problem;
        let mut profile = SolutionProfile::with_capacity(grid.len());
        for &t in grid {
            let y = self.evaluate(t)?;
            let y1 = self.derivative(t)?;
            let y2 = self.second_derivative(t)?;
            let residual = self.eps * y2 + p.k * y - p.f.eval(t, 0)?;
            profile.push(t, y, y1, y2, residual);
        }
        Ok(profile)
    }
}

/// Sampled solution. `residual[i] = ε·y2[i] + k·y[i] − f(grid[i])`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolutionProfile {
    pub grid: Vec<f64>,
    pub y: Vec<f64>,
    pub y1: Vec<f64>,
    pub y2: Vec<f64>,
    pub residual: Vec<f64>,
}

impl SolutionProfile {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            grid: Vec::with_capacity(n),
            y: Vec::with_capacity(n),
            y1: Vec::with_capacity(n),
            y2: Vec::with_capacity(n),
            residual: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, t: f64, y: f64, y1: f64, y2: f64, residual: f64) {
        self.grid.push(t);
        self.y.push(y);
        self.y1.push(y1);
        self.y2.push(y2);
        self.residual.push(residual);
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn exp_problem() -> ProblemSpec {
        ProblemSpec::new(0.0, 1.0, 1.0, SmoothFunction::parse("exp(t)", 0.0, 1.0).unwrap()).unwrap()
    }

    fn ctx(p: &ProblemSpec, eps: f64) -> SolveContext<'_> {
        SolveContext::new(p, eps, 0.5, QuadConfig::default(), EvalForm::Reduced).unwrap()
    }

    // y(0) of the closed form for f = eᵗ on [0, 1], k = 1, θ = π/2.
    fn example1_at_zero(eps: f64) -> f64 {
        let w = (1.0 / eps).sqrt();
        (-(w).cos() + E) / (w * (1.0 + eps) * w.sin()) + 1.0 / (1.0 + eps)
    }

    #[test]
    fn constant_rhs_gives_constant_solution() {
        let p = ProblemSpec::new(0.0, 1.0, 2.0, SmoothFunction::parse("1", 0.0, 1.0).unwrap())
            .unwrap();
        for eps in [0.4, 0.05, 0.003] {
            let c = SolveContext::new(&p, eps, 0.3, QuadConfig::default(), EvalForm::Reduced);
            let Ok(c) = c else { continue };
            for t in [0.0, 0.25, 0.6, 1.0] {
                assert_eq!(c.evaluate_reduced(t).unwrap(), 0.5);
                assert!((c.evaluate_naive(t).unwrap() - 0.5).abs() < 1e-10);
                assert!(c.derivative(t).unwrap().abs() < 1e-9);
                assert!(c.second_derivative(t).unwrap().abs() < 1e-8 / eps);
            }
        }
    }

    #[test]
    fn example1_value_at_zero() {
        let p = exp_problem();
        let eps = 4.0 / (PI * PI);
        let want = example1_at_zero(eps);
        assert!((want - 1.943_031_110_845_514).abs() < 1e-14, "{want}");
        let c = ctx(&p, eps);
        assert!((c.evaluate_naive(0.0).unwrap() - want).abs() < 1e-12);
        assert!((c.evaluate_reduced(0.0).unwrap() - want).abs() < 1e-12);
        let y2 = c.second_derivative(0.0).unwrap();
        assert!((y2 - (1.0 - want) / eps).abs() < 1e-10);
        assert!((y2 + 2.32685).abs() < 1e-4, "{y2}");
    }

    #[test]
    fn neumann_conditions() {
        let p = exp_problem();
        let eps = 4.0 / (PI * PI);
        let c = ctx(&p, eps);
        assert_eq!(c.derivative(0.0).unwrap(), 0.0);
        assert!(c.derivative(1.0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn refuses_near_resonance() {
        let p = exp_problem();
        let r = SolveContext::new(
            &p,
            1.0 / (PI * PI),
            0.5,
            QuadConfig::default(),
            EvalForm::Reduced,
        );
        assert!(matches!(r, Err(Error::NearResonance { nearest_m: 1, .. })));
    }

    #[test]
    fn out_of_range_t() {
        let p = exp_problem();
        let c = ctx(&p, 0.05);
        assert!(c.evaluate(1.5).is_err());
        assert!(c.derivative(-0.1).is_err());
    }

    #[test]
    fn grid_profile_on_constant() {
        let p = ProblemSpec::new(0.0, 1.0, 2.0, SmoothFunction::parse("1", 0.0, 1.0).unwrap())
            .unwrap();
        let c = SolveContext::new(&p, 0.4, 0.5, QuadConfig::default(), EvalForm::Reduced).unwrap();
        let prof = c.solve_grid(&[0.0]).unwrap();
        assert_eq!(prof.grid, vec![0.0]);
        assert_eq!(prof.y, vec![0.5]);
        assert_eq!(prof.y1, vec![0.0]);
        assert!(prof.y2[0].abs() < 1e-12);
        assert!(prof.residual[0].abs() < 1e-12);
        assert!(c.solve_grid(&[0.5, 0.1]).is_err());
    }

    #[test]
    fn problem_validation() {
        let f = SmoothFunction::parse("t", 0.0, 1.0).unwrap();
        assert!(ProblemSpec::new(0.0, 1.0, -1.0, f.clone()).is_err());
        assert!(ProblemSpec::new(0.0, 2.0, 1.0, f.clone()).is_err());
        assert!(ProblemSpec::new(0.2, 0.8, 1.0, f).is_ok());
    }
}
