//! Right-hand sides `f` and their first three derivatives.

mod expr;
mod function;
mod jet;

pub use expr::{eval_jet, parse_expr, BinaryOp, Expr, UnaryOp, DEFAULT_DENOMINATOR_FLOOR};
pub use function::{
    sup_norm_deriv, Builtin, Descriptor, SmoothFunction, SupNormConfig, VALIDATION_SAMPLES,
};
pub use jet::Jet3;

pub(crate) use function::lerp;
