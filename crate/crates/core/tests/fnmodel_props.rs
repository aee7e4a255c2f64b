use neumann_sp::fnmodel::{BinaryOp, UnaryOp};
use neumann_sp::prelude::*;
use proptest::prelude::*;
use std::f64::consts::PI;

/// (expression, closed-form third derivative)
fn catalogue() -> Vec<(&'static str, fn(f64) -> f64)> {
    vec![
        ("t^4", |t| 24.0 * t),
        ("-t^3", |_| -6.0),
        ("pi*t^3 - t", |_| 6.0 * PI),
        ("exp(t)", |t| t.exp()),
        ("exp(2*t)", |t| 8.0 * (2.0 * t).exp()),
        ("sin(3*t)", |t| -27.0 * (3.0 * t).cos()),
        ("cos(2*t)", |t| 8.0 * (2.0 * t).sin()),
        ("1/(1 + t)", |t| -6.0 / (1.0 + t).powi(4)),
        ("1/(2 + t)^2", |t| -24.0 / (2.0 + t).powi(5)),
        ("t*exp(t)", |t| (t + 3.0) * t.exp()),
        ("sin(t)^2", |t| -4.0 * (2.0 * t).sin()),
        ("cos(t)*sin(t)", |t| -4.0 * (2.0 * t).cos()),
        ("exp(sin(t))", |t| {
            let (s, c) = t.sin_cos();
            s.exp() * (c.powi(3) - 3.0 * s * c - c)
        }),
        ("cos(2*pi*t)", |t| (2.0 * PI).powi(3) * (2.0 * PI * t).sin()),
    ]
}

#[test]
fn third_derivatives_match_closed_forms() {
    for (src, d3) in catalogue() {
        let f = SmoothFunction::parse(src, -0.5, 2.0).unwrap();
        for i in 0..=25 {
            let t = -0.5 + 2.5 * i as f64 / 25.0;
            let got = f.eval(t, 3).unwrap();
            let want = d3(t);
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "{src} at {t}: {got} vs {want}"
            );
        }
    }
}

/// Eighth-order central difference of `g` at `t`.
fn fd8(g: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    C.iter()
        .enumerate()
        .map(|(i, c)| {
            let s = (i + 1) as f64 * h;
            c * (g(t + s) - g(t - s))
        })
        .sum::<f64>()
        / h
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0.0f64..3.0).prop_map(Expr::Num),
        Just(Expr::Var),
        Just(Expr::Pi),
    ]
}

fn ast() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Add, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Sub, l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(BinaryOp::Mul, l, r)),
            // denominators bounded away from zero: l / (2 + r²)
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::binary(
                BinaryOp::Div,
                l,
                Expr::binary(BinaryOp::Add, Expr::Num(2.0), Expr::pow(r, 2))
            )),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Neg, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Sin, e)),
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Cos, e)),
            // exp of a bounded argument keeps values moderate
            inner.clone().prop_map(|e| Expr::unary(UnaryOp::Exp, Expr::unary(UnaryOp::Sin, e))),
            (inner, 0u32..4).prop_map(|(e, n)| Expr::pow(e, n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn jets_agree_with_finite_differences(e in ast(), t in -1.0f64..1.0) {
        let jet = eval_jet(&e, t).unwrap();
        prop_assume!(jet.c.iter().all(|c| c.abs() < 1e4));
        let h = 1e-3;
        for order in 1..4 {
            let prev = |s: f64| eval_jet(&e, s).unwrap().derivative(order - 1);
            let fd = fd8(prev, t, h);
            let d = jet.derivative(order);
            prop_assert!(
                (d - fd).abs() <= 1e-6 * (1.0 + d.abs()),
                "{e} at {t}, order {order}: jet {d} fd {fd}"
            );
        }
    }

    #[test]
    fn print_then_parse_is_identity(e in ast()) {
        let printed = e.to_string();
        prop_assert_eq!(parse_expr(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn smooth_function_eval_is_finite(e in ast(), t in 0.0f64..1.0) {
        let f = SmoothFunction::from_expr(e, 0.0, 1.0).unwrap();
        for order in 0..4 {
            prop_assert!(f.eval(t, order).unwrap().is_finite());
        }
    }
}

#[test]
fn first_order_finite_difference_invariant() {
    // eval(·, k) vs O(h²) central differences of eval(·, k−1) at fixed h
    let f = SmoothFunction::parse("exp(-t)*sin(5*t) + t^3/(3 + cos(t))", 0.0, 1.0).unwrap();
    let h = 1e-4;
    for i in 1..10 {
        let t = i as f64 / 10.0;
        for order in 1..4 {
            let fd = (f.eval(t + h, order - 1).unwrap() - f.eval(t - h, order - 1).unwrap())
                / (2.0 * h);
            let d = f.eval(t, order).unwrap();
            assert!((d - fd).abs() <= 1e-5 * (1.0 + d.abs()), "{t} {order}");
        }
    }
}
