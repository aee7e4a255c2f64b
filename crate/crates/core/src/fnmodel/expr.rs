//! Expression language for right-hand sides.
//!
//! ```text
//! expr   := term (('+'|'-') term)* ;
//! term   := factor (('*'|'/') factor)* ;
//! factor := atom ('^' integer)? | '-' factor ;
//! atom   := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')' ;
//! func   := 'exp' | 'sin' | 'cos' ;
//! ```

use std::fmt;

use super::jet::Jet3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn unary(op: UnaryOp, e: Expr) -> Self {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Self {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn pow(e: Expr, n: u32) -> Self {
        Expr::Pow(Box::new(e), n)
    }

    /// Evaluates the jet without any denominator check.
    fn jet(&self, t: f64) -> Jet3 {
        match self {
            Expr::Num(v) => Jet3::constant(*v),
            Expr::Var => Jet3::variable(t),
            Expr::Pi => Jet3::constant(std::f64::consts::PI),
            Expr::Unary(op, e) => {
                let x = e.jet(t);
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                }
            }
            Expr::Binary(op, l, r) => {
                let (x, y) = (l.jet(t), r.jet(t));
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div => x / y,
                }
            }
            Expr::Pow(e, n) => e.jet(t).powi(*n),
        }
    }

    /// Smallest |denominator value| met while evaluating at `t`, if any
    /// division is present.
    pub(crate) fn min_denominator(&self, t: f64) -> Option<f64> {
        match self {
            Expr::Num(_) | Expr::Var | Expr::Pi => None,
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.min_denominator(t),
            Expr::Binary(op, l, r) => {
                let mut m = min_opt(l.min_denominator(t), r.min_denominator(t));
                if *op == BinaryOp::Div {
                    m = min_opt(m, Some(r.jet(t).value().abs()));
                }
                m
            }
        }
    }
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Denominators below this magnitude are reported as [`Error::Domain`].
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-10;

/// Value and first three Taylor coefficients of `ast` at `t`.
pub fn eval_jet(ast: &Expr, t: f64) -> Result<Jet3> {
    if let Some(d) = ast.min_denominator(t) {
        if d < DEFAULT_DENOMINATOR_FLOOR {
            return Err(Error::Domain(format!(
                "denominator magnitude {d:e} at t = {t} is below {DEFAULT_DENOMINATOR_FLOOR:e}"
            )));
        }
    }
    let j = ast.jet(t);
    if !j.is_finite() {
        return Err(Error::Domain(format!("non-finite jet at t = {t}")));
    }
    Ok(j)
}

// Printing: the output re-parses to a structurally identical tree.

fn write_atomic(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Num(_) | Expr::Var | Expr::Pi => write!(f, "{e}"),
        Expr::Unary(op, _) if *op != UnaryOp::Neg => write!(f, "{e}"),
        _ => write!(f, "({e})"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("t"),
            Expr::Pi => f.write_str("pi"),
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                write_atomic(f, e)
            }
            Expr::Unary(op, e) => {
                let name = match op {
                    UnaryOp::Exp => "exp",
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}({e})")
            }
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    BinaryOp::Mul => "*",
                    BinaryOp::Div => "/",
                };
                write_atomic(f, l)?;
                write!(f, " {sym} ")?;
                write_atomic(f, r)
            }
            Expr::Pow(e, n) => {
                write_atomic(f, e)?;
                write!(f, "^{n}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(u32),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(position: usize, expected: &[&str]) -> Error {
    Error::Syntax {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => toks.push((start, Tok::Plus)),
            b'-' => toks.push((start, Tok::Minus)),
            b'*' => toks.push((start, Tok::Star)),
            b'/' => toks.push((start, Tok::Slash)),
            b'^' => toks.push((start, Tok::Caret)),
            b'(' => toks.push((start, Tok::LParen)),
            b')' => toks.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                let mut integral = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integral = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integral = false;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| syntax(start, &["number"]))?;
                let tok = match text.parse::<u32>() {
                    Ok(n) if integral => Tok::Int(n),
                    _ => Tok::Num(value),
                };
                toks.push((start, tok));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => return Err(syntax(start, &["number", "identifier", "operator", "'('", "')'"])),
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinaryOp::Mul,
                Some(Tok::Slash) => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(Expr::unary(UnaryOp::Neg, self.factor()?));
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let n = *n;
                    self.pos += 1;
                    Ok(Expr::pow(base, n))
                }
                _ => Err(syntax(self.offset(), &["integer exponent"])),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n as f64))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let op = match name.as_str() {
                    "t" => return Ok(Expr::Var),
                    "pi" => return Ok(Expr::Pi),
                    "exp" => UnaryOp::Exp,
                    "sin" => UnaryOp::Sin,
                    "cos" => UnaryOp::Cos,
                    _ => {
                        return Err(Error::UnknownIdentifier {
                            name,
                            position: at,
                        })
                    }
                };
                if self.peek() != Some(&Tok::LParen) {
                    return Err(syntax(self.offset(), &["'('"]));
                }
                self.pos += 1;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::unary(op, arg))
            }
            _ => Err(syntax(at, &["number", "'t'", "'pi'", "function", "'('", "'-'"])),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.offset(), &["')'"]))
        }
    }
}

/// Parses an expression in `t`.
pub fn parse_expr(src: &str) -> Result<Expr> {
    if !src.is_ascii() {
        let position = src.find(|c: char| !c.is_ascii()).unwrap_or(0);
        return Err(syntax(position, &["ASCII input"]));
    }
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(syntax(0, &["expression"]));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.offset(), &["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use BinaryOp::*;

    fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    #[test]
    fn parses_function_call() {
        assert_eq!(
            parse_expr("exp(t)").unwrap(),
            Expr::unary(UnaryOp::Exp, Expr::Var)
        );
    }

    #[test]
    fn power_binds_tighter_than_product() {
        let want = Expr::binary(
            Add,
            num(1.0),
            Expr::binary(Mul, num(2.0), Expr::pow(Expr::Var, 3)),
        );
        assert_eq!(parse_expr("1 + 2*t^3").unwrap(), want);
    }

    #[test]
    fn named_constant_pi() {
        let want = Expr::unary(
            UnaryOp::Cos,
            Expr::binary(Mul, Expr::binary(Mul, num(2.0), Expr::Pi), Expr::Var),
        );
        assert_eq!(parse_expr("cos(2*pi*t)").unwrap(), want);
    }

    #[test]
    fn unary_minus_wraps_power() {
        let want = Expr::unary(UnaryOp::Neg, Expr::pow(Expr::Var, 2));
        assert_eq!(parse_expr("-t^2").unwrap(), want);
    }

    #[test]
    fn number_forms() {
        assert_eq!(parse_expr("1.5e-3").unwrap(), num(1.5e-3));
        assert_eq!(parse_expr(".25").unwrap(), num(0.25));
        assert_eq!(parse_expr("2E2").unwrap(), num(200.0));
    }

    #[test]
    fn left_associative_subtraction() {
        let want = Expr::binary(Sub, Expr::binary(Sub, num(1.0), num(2.0)), num(3.0));
        assert_eq!(parse_expr("1 - 2 - 3").unwrap(), want);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_expr("1 + ") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse_expr("sin(t") {
            Err(Error::Syntax { position, expected }) => {
                assert_eq!(position, 5);
                assert_eq!(expected, vec!["')'".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("   "), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("t^2.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("t^2^3"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("t $ 2"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_expr("tπ"), Err(Error::Syntax { position: 1, .. })));
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(
            parse_expr("2*log(t)"),
            Err(Error::UnknownIdentifier {
                name: "log".into(),
                position: 2
            })
        );
    }

    #[test]
    fn jet_examples() {
        let j = eval_jet(&parse_expr("t^2").unwrap(), 3.0).unwrap();
        assert_eq!(j.derivative(1), 6.0);

        let j = eval_jet(&parse_expr("exp(t)").unwrap(), 1.0).unwrap();
        assert!((j.value() - std::f64::consts::E).abs() < 1e-15);

        let j = eval_jet(&parse_expr("sin(2*pi*t)").unwrap(), 0.0).unwrap();
        let c = 2.0 * std::f64::consts::PI;
        assert!((j.derivative(3) + c.powi(3)).abs() < 1e-12 * c.powi(3));
        assert!((j.derivative(3) + 248.0502).abs() < 1e-4);
    }

    #[test]
    fn division_blow_up_is_a_domain_error() {
        let e = parse_expr("1/(t - 0.5)").unwrap();
        assert!(matches!(eval_jet(&e, 0.5), Err(Error::Domain(_))));
        assert!(eval_jet(&e, 0.0).is_ok());
    }

    #[test]
    fn printing_reparses() {
        for src in [
            "1 + 2*t^3",
            "-(t + 1)^2",
            "exp(-t)/(2 + cos(t))",
            "-sin(t)^3 - -t",
            "1 - (2 - t)",
            "1e-7 * t",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
