use std::fmt;

use super::expr::{eval_jet, parse_expr, Expr, DEFAULT_DENOMINATOR_FLOOR};
use super::jet::Jet3;
use crate::error::{Error, Result};

/// Closed-form right-hand sides with hand-coded derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Constant(f64),
    /// `scale · exp(rate · t)`
    Exp { scale: f64, rate: f64 },
    /// `sin(freq · t)`
    Sin { freq: f64 },
    /// `cos(freq · t)`
    Cos { freq: f64 },
    /// `Σ coeffs[i] · tⁱ`
    Polynomial(Vec<f64>),
}

impl Builtin {
    fn eval(&self, t: f64, order: usize) -> f64 {
        match self {
            Builtin::Constant(c) => {
                if order == 0 {
                    *c
                } else {
                    0.0
                }
            }
            Builtin::Exp { scale, rate } => scale * rate.powi(order as i32) * (rate * t).exp(),
            Builtin::Sin { freq } => {
                let (s, c) = (freq * t).sin_cos();
                let w = freq.powi(order as i32);
                w * [s, c, -s, -c][order % 4]
            }
            Builtin::Cos { freq } => {
                let (s, c) = (freq * t).sin_cos();
                let w = freq.powi(order as i32);
                w * [c, -s, -c, s][order % 4]
            }
            Builtin::Polynomial(coeffs) => {
                // Horner on the differentiated coefficients.
                let mut acc = 0.0;
                for (i, &c) in coeffs.iter().enumerate().skip(order).rev() {
                    let falling: f64 = ((i - order + 1)..=i).map(|m| m as f64).product();
                    acc = acc * t + c * falling;
                }
                acc
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Expr(Expr),
    Builtin(Builtin),
}

/// A C³ right-hand side on a closed interval.
///
/// Immutable once built; `eval` is pure and may be called from any thread.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothFunction {
    descriptor: Descriptor,
    domain: (f64, f64),
}

/// Points used to screen division nodes at construction.
pub const VALIDATION_SAMPLES: usize = 1025;

impl SmoothFunction {
    /// Parses `src` and checks every denominator on a uniform sample of
    /// `[a, b]`.
    pub fn parse(src: &str, a: f64, b: f64) -> Result<Self> {
        Self::from_expr(parse_expr(src)?, a, b)
    }

    pub fn from_expr(expr: Expr, a: f64, b: f64) -> Result<Self> {
        check_domain(a, b)?;
        for i in 0..VALIDATION_SAMPLES {
            let t = lerp(a, b, i, VALIDATION_SAMPLES);
            if let Some(d) = expr.min_denominator(t) {
                if d < DEFAULT_DENOMINATOR_FLOOR {
                    return Err(Error::Domain(format!(
                        "denominator of `{expr}` reaches {d:e} at t = {t}"
                    )));
                }
            }
            eval_jet(&expr, t)?;
        }
        Ok(Self {
            descriptor: Descriptor::Expr(expr),
            domain: (a, b),
        })
    }

    pub fn builtin(b: Builtin, lo: f64, hi: f64) -> Result<Self> {
        check_domain(lo, hi)?;
        Ok(Self {
            descriptor: Descriptor::Builtin(b),
            domain: (lo, hi),
        })
    }

    pub fn constant(c: f64, a: f64, b: f64) -> Result<Self> {
        Self::builtin(Builtin::Constant(c), a, b)
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// `f⁽ᵒʳᵈᵉʳ⁾(t)` for `order ≤ 3`.
    pub fn eval(&self, t: f64, order: usize) -> Result<f64> {
        if order > 3 {
            return Err(Error::InvalidArgument(format!(
                "derivative order {order} exceeds 3"
            )));
        }
        let v = match &self.descriptor {
            Descriptor::Expr(e) => eval_jet(e, t)?.derivative(order),
            Descriptor::Builtin(b) => b.eval(t, order),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!("f^({order})({t}) is not finite")))
        }
    }

    pub fn jet(&self, t: f64) -> Result<Jet3> {
        match &self.descriptor {
            Descriptor::Expr(e) => eval_jet(e, t),
            Descriptor::Builtin(b) => Ok(Jet3::new(
                b.eval(t, 0),
                b.eval(t, 1),
                b.eval(t, 2) / 2.0,
                b.eval(t, 3) / 6.0,
            )),
        }
    }
}

impl fmt::Display for SmoothFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.descriptor {
            Descriptor::Expr(e) => write!(f, "{e}"),
            Descriptor::Builtin(b) => write!(f, "{b:?}"),
        }
    }
}

fn check_domain(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidProblem(format!(
            "domain [{a}, {b}] must be a finite interval with a < b"
        )))
    }
}

pub(crate) fn lerp(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * (i as f64 / (n - 1) as f64)
    }
}

/// Grid-based estimate of `sup |f⁽ᵒʳᵈᵉʳ⁾|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormConfig {
    pub samples: usize,
    pub safety: f64,
}

impl Default for SupNormConfig {
    fn default() -> Self {
        Self {
            samples: 4097,
            safety: 1.05,
        }
    }
}

/// Maximum of `|f⁽ᵒʳᵈᵉʳ⁾|` over `n_samples` uniform points of `[a, b]`
/// (both endpoints included), times `safety`.
///
/// This is a heuristic upper estimate of the true supremum, not a rigorous
/// enclosure.
pub fn sup_norm_deriv(
    f: &SmoothFunction,
    order: usize,
    (a, b): (f64, f64),
    n_samples: usize,
    safety: f64,
) -> Result<f64> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "n_samples = {n_samples} must be at least 2"
        )));
    }
    let mut max = 0.0f64;
    for i in 0..n_samples {
        max = max.max(f.eval(lerp(a, b, i, n_samples), order)?.abs());
    }
    Ok(max * safety)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn sup_norm_examples() {
        let f = SmoothFunction::parse("exp(t)", 0.0, 1.0).unwrap();
        for n in [2, 3, 17, 4097] {
            let s = sup_norm_deriv(&f, 2, (0.0, 1.0), n, 1.05).unwrap();
            assert!((s - E * 1.05).abs() < 1e-14);
        }

        let f = SmoothFunction::parse("cos(2*pi*t)", 0.0, 1.0).unwrap();
        let s = sup_norm_deriv(&f, 0, (0.0, 1.0), 101, 1.05).unwrap();
        assert!((s - 1.05).abs() < 1e-15);

        let f = SmoothFunction::parse("5", 0.0, 1.0).unwrap();
        assert_eq!(sup_norm_deriv(&f, 1, (0.0, 1.0), 11, 1.05).unwrap(), 0.0);

        assert!(sup_norm_deriv(&f, 1, (0.0, 1.0), 1, 1.05).is_err());
    }

    #[test]
    fn nested_grids_are_monotone() {
        let f = SmoothFunction::parse("sin(7*t) * exp(-t)", 0.0, 2.0).unwrap();
        let mut prev = 0.0;
        for p in 1..12 {
            let s = sup_norm_deriv(&f, 3, (0.0, 2.0), (1 << p) + 1, 1.0).unwrap();
            assert!(s >= prev);
            prev = s;
        }
    }

    #[test]
    fn division_validated_at_construction() {
        assert!(matches!(
            SmoothFunction::parse("1/(t - 0.25)", 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(SmoothFunction::parse("1/(t - 0.25)", 0.5, 1.0).is_ok());
        assert!(SmoothFunction::parse("t", 1.0, 1.0).is_err());
    }

    #[test]
    fn builtins_match_expressions() {
        let pairs = [
            (Builtin::Exp { scale: 1.0, rate: 1.0 }, "exp(t)"),
            (Builtin::Cos { freq: 2.0 * PI }, "cos(2*pi*t)"),
            (Builtin::Sin { freq: 1.0 }, "sin(t)"),
            (Builtin::Polynomial(vec![1.0, 0.0, 0.0, 2.0]), "1 + 2*t^3"),
            (Builtin::Constant(3.5), "3.5"),
        ];
        for (b, src) in pairs {
            let fb = SmoothFunction::builtin(b, 0.0, 1.0).unwrap();
            let fe = SmoothFunction::parse(src, 0.0, 1.0).unwrap();
            for &t in &[0.0, 0.3, 0.77, 1.0] {
                for order in 0..4 {
                    let (x, y) = (fb.eval(t, order).unwrap(), fe.eval(t, order).unwrap());
                    assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{src} {t} {order}");
                }
            }
        }
    }

    #[test]
    fn order_above_three_rejected() {
        let f = SmoothFunction::constant(1.0, 0.0, 1.0).unwrap();
        assert!(f.eval(0.5, 4).is_err());
    }
}
