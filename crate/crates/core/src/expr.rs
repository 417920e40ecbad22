//! A tiny arithmetic expression language for initial data and fluxes.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" unary)?          right associative, binds tighter than unary minus
//! atom    := number | "x" | "y" | func "(" expr ")" | "(" expr ")"
//! func    := "exp" | "tanh" | "sin" | "abs" | "sgn"
//! number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```
//!
//! `sgn(0)` is 0. The variable `y` is only accepted where the caller allows it.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Tanh,
    Sin,
    Abs,
    Sgn,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Sin => "sin",
            Func::Abs => "abs",
            Func::Sgn => "sgn",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Exp => v.exp(),
            Func::Tanh => v.tanh(),
            Func::Sin => v.sin(),
            Func::Abs => v.abs(),
            Func::Sgn => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Y,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parses an expression in the variable `x` only.
    pub fn parse(text: &str) -> Result<Expr> {
        Parser::new(text, false).parse_all()
    }

    /// Parses an expression in the variables `x` and `y`.
    pub fn parse_xy(text: &str) -> Result<Expr> {
        Parser::new(text, true).parse_all()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_xy(x, 0.0)
    }

    pub fn eval_xy(&self, x: f64, y: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Y => y,
            Expr::Neg(a) => -a.eval_xy(x, y),
            Expr::Add(a, b) => a.eval_xy(x, y) + b.eval_xy(x, y),
            Expr::Sub(a, b) => a.eval_xy(x, y) - b.eval_xy(x, y),
            Expr::Mul(a, b) => a.eval_xy(x, y) * b.eval_xy(x, y),
            Expr::Div(a, b) => a.eval_xy(x, y) / b.eval_xy(x, y),
            Expr::Pow(a, b) => pow(a.eval_xy(x, y), b.eval_xy(x, y)),
            Expr::Call(f, a) => f.apply(a.eval_xy(x, y)),
        }
    }

    pub fn uses_y(&self) -> bool {
        match self {
            Expr::Y => true,
            Expr::Num(_) | Expr::X => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.uses_y(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.uses_y() || b.uses_y()
            }
        }
    }

    /// Returns the value if the expression does not depend on any variable.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::X | Expr::Y => None,
            Expr::Neg(a) => a.constant_value().map(|v| -v),
            Expr::Call(f, a) => a.constant_value().map(|v| f.apply(v)),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.constant_value()?;
                b.constant_value()?;
                Some(self.eval(0.0))
            }
        }
    }
}

/// Integer exponents use repeated multiplication so that `x^2` is exactly `x*x`.
fn pow(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => {
                if *v < 0.0 {
                    write!(f, "(-{:?})", -v)
                } else {
                    write!(f, "{v:?}")
                }
            }
            Expr::X => write!(f, "x"),
            Expr::Y => write!(f, "y"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    allow_y: bool,
    lex_error: Option<Error>,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Expression {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s
                .parse()
                .map_err(|_| err(col, format!("malformed number '{s}'")))?;
            out.push((Token::Num(v), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Token::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        return Err(err(col, format!("unexpected character '{c}'")));
    }
    out.push((Token::End, chars.len() + 1));
    Ok(out)
}

impl Parser {
    fn new(text: &str, allow_y: bool) -> Self {
        match lex(text) {
            Ok(tokens) => Parser {
                tokens,
                pos: 0,
                allow_y,
                lex_error: None,
            },
            Err(e) => Parser {
                tokens: vec![(Token::End, 1)],
                pos: 0,
                allow_y,
                lex_error: Some(e),
            },
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn column(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn parse_all(mut self) -> Result<Expr> {
        if let Some(e) = self.lex_error.take() {
            return Err(e);
        }
        let e = self.expr()?;
        if *self.peek() != Token::End {
            return Err(err(self.column(), "unexpected trailing input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.column();
        match self.bump() {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Token::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::X),
                "y" if self.allow_y => Ok(Expr::Y),
                "y" => Err(err(col, "variable 'y' is only allowed in 2D data")),
                other => {
                    let func = match other {
                        "exp" => Func::Exp,
                        "tanh" => Func::Tanh,
                        "sin" => Func::Sin,
                        "abs" => Func::Abs,
                        "sgn" => Func::Sgn,
                        _ => return Err(err(col, format!("unknown identifier '{other}'"))),
                    };
                    if *self.peek() != Token::LParen {
                        return Err(err(self.column(), format!("expected '(' after '{other}'")));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            Token::End => Err(err(col, "unexpected end of input")),
            t => Err(err(col, format!("unexpected token {t:?}"))),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() == Token::RParen {
            self.bump();
            Ok(())
        } else {
            Err(err(self.column(), "expected ')'"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_tanh_matches_direct_evaluation() {
        let e = Expr::parse("-tanh(x)").unwrap();
        for k in 0..100 {
            let x = -5.0 + 0.1 * k as f64;
            assert!((e.eval(x) + x.tanh()).abs() <= 1e-12);
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let e = Expr::parse("-x^2").unwrap();
        assert_eq!(e.eval(3.0), -9.0);
        let e = Expr::parse("2^3^2").unwrap();
        assert_eq!(e.eval(0.0), 512.0);
        let e = Expr::parse("1 - 2 - 3").unwrap();
        assert_eq!(e.eval(0.0), -4.0);
        let e = Expr::parse("8 / 2 / 2").unwrap();
        assert_eq!(e.eval(0.0), 2.0);
        let e = Expr::parse("2^-1").unwrap();
        assert_eq!(e.eval(0.0), 0.5);
        let e = Expr::parse("1 + 0.1*exp(-x^2)").unwrap();
        assert!((e.eval(1.0) - (1.0 + 0.1 * (-1.0f64).exp())).abs() < 1e-15);
        let e = Expr::parse("sgn(x)*abs(x) + sin(0)").unwrap();
        assert_eq!(e.eval(-2.5), -2.5);
        assert_eq!(Expr::parse("sgn(0)").unwrap().eval(0.0), 0.0);
        assert_eq!(Expr::parse("1.5e-1").unwrap().eval(0.0), 0.15);
    }

    #[test]
    fn errors_report_columns() {
        match Expr::parse("1 + foo(x)") {
            Err(Error::Expression { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match Expr::parse("(x + 1") {
            Err(Error::Expression { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("x $ 1").is_err());
        assert!(Expr::parse("y").is_err());
        assert!(Expr::parse_xy("x + y").unwrap().uses_y());
        assert!(Expr::parse("").is_err());
    }

    #[test]
    fn constants_are_detected() {
        assert_eq!(Expr::parse("2*3 - 1").unwrap().constant_value(), Some(5.0));
        assert_eq!(Expr::parse("-1").unwrap().constant_value(), Some(-1.0));
        assert_eq!(Expr::parse("x").unwrap().constant_value(), None);
    }

    #[test]
    fn display_round_trips() {
        for src in ["-tanh(x)", "1 + 0.1*exp(-x^2)", "x^3/3", "-(x - 2)^2 * sgn(x)", "-0.5 + 2e-3*x"] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            for k in 0..21 {
                let x = -2.0 + 0.2 * k as f64;
                assert_eq!(e.eval(x).to_bits(), again.eval(x).to_bits(), "{src}");
            }
        }
    }
}
