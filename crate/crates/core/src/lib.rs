//! # neumann-sp
//!
//! Explicit solutions of the singularly perturbed linear Neumann problem
//!
//! ```text
//! ε·y″ + k·y = f(t),   t ∈ [a, b],   k > 0,
//! y′(a) = 0,  y′(b) = 0,
//! ```
//!
//! in the non-resonant regime, where the phase θ = √(k/ε)·(b − a) stays at
//! least λ away from every multiple of π.
//!
//! The crate is organised around the steps of a study of this problem:
//!
//! * [`fnmodel`]: right-hand sides `f` as C³ function models, parsed from a
//!   small expression language and differentiated to third order by
//!   Taylor-mode propagation.
//! * [`windows`]: the non-resonance windows `J_n`, resonance points and
//!   ε-sequences inside the windows.
//! * [`quadrature`]: oscillation-resolving composite Gauss–Legendre rules for
//!   the kernels `sin(ω(c − s))`, `cos(ω(c − s))`.
//! * [`solver`]: the explicit variation-of-parameters solution, its first two
//!   derivatives, and the integrated-by-parts form used by default.
//! * [`analysis`]: the a priori error bound, independent oracles
//!   (closed form for `f = eᵗ`, finite differences) and log-log rate fits.
//! * [`cli`]: the command-line front end behind the `neumann-sp` binary.
//!
//! ## Quick start
//!
//! ```
//! use neumann_sp::prelude::*;
//!
//! let f = SmoothFunction::parse("exp(t)", 0.0, 1.0).unwrap();
//! let problem = ProblemSpec::new(0.0, 1.0, 1.0, f).unwrap();
//! let eps = 4.0 / (std::f64::consts::PI * std::f64::consts::PI);
//! let ctx = SolveContext::new(&problem, eps, 0.5, QuadConfig::default(), EvalForm::Reduced).unwrap();
//! let y0 = ctx.evaluate(0.0).unwrap();
//! assert!((y0 - oracle_example1(0.0, 1.0, 1.0, eps, 0.0).unwrap()).abs() < 1e-10);
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`:
//!
//! ```bash
//! cargo run --example solve_example1
//! cargo run --example convergence_rates
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fnmodel;
pub mod quadrature;
pub mod solver;
pub mod windows;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{
        apriori_bound, certify_bound, fd_oracle, fit_power_law, near_resonance_sweep,
        oracle_example1, rate_fit, sup_error_vs_reduced, uniform_grid, AprioriBound,
        BoundReport, ExpectedOrder, RateFit, ResonancePoint,
    };
    pub use crate::error::{Error, Result};
    pub use crate::fnmodel::{
        eval_jet, parse_expr, sup_norm_deriv, Builtin, Expr, Jet3, SmoothFunction, SupNormConfig,
    };
    pub use crate::quadrature::{estimate_cost, osc_integral, Kernel, OscIntegrand, QuadConfig};
    pub use crate::solver::{EvalForm, ProblemSpec, SolutionProfile, SolveContext};
    pub use crate::windows::{
        classify, resonance_points, sample_sequence, window, Classification, EpsilonWindow,
        Placement,
    };
}
