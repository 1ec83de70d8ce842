//! Scalar expressions in parameter variables, evaluated together with their
//! exact first and second derivatives.
//!
//! The grammar is the usual one: numeric literals, the constants `pi` and
//! `e`, variables, `+ - * / ^`, unary minus, parentheses and the functions
//! `sin cos tan exp log sqrt atan sinh cosh`. `^` binds tightest and is
//! right-associative, so `-t1^2` is `-(t1^2)` and `2^3^2` is `2^(3^2)`.
//!
//! Variables are named by a prefix and an index. Chart coordinates use
//! `t1 … tn` (see [`VarNames::params`]); form numerators use
//! `p_0 … p_{C-1}` (see [`VarNames::pluecker`]).

use std::fmt;

use crate::error::{Error, Result};

/// Largest number of variables a [`Jet2`] can carry.
pub const MAX_JET_ARITY: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Atan,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Atan,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Value, first and second derivative at `u`.
    fn taylor2(self, u: f64) -> std::result::Result<(f64, f64, f64), &'static str> {
        Ok(match self {
            Func::Sin => (u.sin(), u.cos(), -u.sin()),
            Func::Cos => (u.cos(), -u.sin(), -u.cos()),
            Func::Tan => {
                if u.cos() == 0.0 {
                    return Err("tan at a pole");
                }
                let t = u.tan();
                let d = 1.0 + t * t;
                (t, d, 2.0 * t * d)
            }
            Func::Exp => {
                let e = u.exp();
                (e, e, e)
            }
            Func::Log => {
                if u <= 0.0 {
                    return Err("log of a non-positive argument");
                }
                (u.ln(), 1.0 / u, -1.0 / (u * u))
            }
            Func::Sqrt => {
                if u <= 0.0 {
                    return Err("sqrt of a non-positive argument");
                }
                let s = u.sqrt();
                (s, 0.5 / s, -0.25 / (s * u))
            }
            Func::Atan => {
                let d = 1.0 / (1.0 + u * u);
                (u.atan(), d, -2.0 * u * d * d)
            }
            Func::Sinh => (u.sinh(), u.cosh(), u.sinh()),
            Func::Cosh => (u.cosh(), u.sinh(), u.cosh()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Abstract syntax tree. Variable indices are zero-based internally.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    E,
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// How variables are spelled in source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    pub prefix: &'static str,
    /// Index written for the zero-based variable 0.
    pub first: usize,
}

impl VarNames {
    /// `t1, t2, …`
    pub const fn params() -> Self {
        VarNames {
            prefix: "t",
            first: 1,
        }
    }

    /// `p_0, p_1, …`
    pub const fn pluecker() -> Self {
        VarNames {
            prefix: "p_",
            first: 0,
        }
    }

    fn lookup(&self, ident: &str) -> Option<usize> {
        let digits = ident.strip_prefix(self.prefix)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        digits.parse::<usize>().ok()?.checked_sub(self.first)
    }
}

/// Parse an expression in `t1 … t{arity}`.
pub fn parse(text: &str, arity: usize) -> Result<Expr> {
    parse_with(text, arity, &VarNames::params())
}

/// Parse with an explicit variable naming scheme.
///
/// Error offsets are one-based byte positions; an error at end of input
/// points one past the last byte.
pub fn parse_with(text: &str, arity: usize, names: &VarNames) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        arity,
        names,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arity: usize,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Expr::Num).map_err(|_| Error::Syntax {
            offset: start + 1,
            message: format!("malformed number `{text}`"),
        })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(f) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(self.error("expected `(` after function name"));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected `)`"));
            }
            return Ok(Expr::Call(f, Box::new(arg)));
        }
        match name {
            "pi" => return Ok(Expr::Pi),
            "e" => return Ok(Expr::E),
            _ => {}
        }
        match self.names.lookup(name) {
            Some(i) if i < self.arity => Ok(Expr::Var(i)),
            Some(_) => Err(Error::VariableOutOfRange {
                name: name.to_string(),
                offset: start + 1,
                arity: self.arity,
            }),
            None => Err(Error::Syntax {
                offset: start + 1,
                message: format!("unknown identifier `{name}`"),
            }),
        }
    }
}

/// Value, gradient and Hessian of a scalar function of up to
/// [`MAX_JET_ARITY`] variables. Entries past `n` are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub n: usize,
    pub value: f64,
    pub grad: [f64; MAX_JET_ARITY],
    pub hess: [[f64; MAX_JET_ARITY]; MAX_JET_ARITY],
}

impl Jet2 {
    pub fn constant(n: usize, value: f64) -> Self {
        Jet2 {
            n,
            value,
            grad: [0.0; MAX_JET_ARITY],
            hess: [[0.0; MAX_JET_ARITY]; MAX_JET_ARITY],
        }
    }

    pub fn variable(n: usize, index: usize, value: f64) -> Self {
        let mut j = Jet2::constant(n, value);
        j.grad[index] = 1.0;
        j
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad[..self.n]
    }

    fn map_linear(&self, other: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        let mut out = Jet2::constant(self.n, f(self.value, other.value));
        for i in 0..self.n {
            out.grad[i] = f(self.grad[i], other.grad[i]);
            for j in 0..self.n {
                out.hess[i][j] = f(self.hess[i][j], other.hess[i][j]);
            }
        }
        out
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        self.map_linear(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        self.map_linear(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Jet2 {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> Jet2 {
        let mut out = *self;
        out.value *= c;
        for i in 0..self.n {
            out.grad[i] *= c;
            for j in 0..self.n {
                out.hess[i][j] *= c;
            }
        }
        out
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let (a, b) = (self, other);
        let mut out = Jet2::constant(a.n, a.value * b.value);
        for i in 0..a.n {
            out.grad[i] = a.value * b.grad[i] + b.value * a.grad[i];
            for j in i..a.n {
                let h = a.value * b.hess[i][j]
                    + b.value * a.hess[i][j]
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i];
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }

    /// Chain rule through a scalar function with value `f0`, slope `f1`
    /// and curvature `f2` at `self.value`.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let mut out = Jet2::constant(self.n, f0);
        for i in 0..self.n {
            out.grad[i] = f1 * self.grad[i];
            for j in i..self.n {
                let h = f1 * self.hess[i][j] + f2 * self.grad[i] * self.grad[j];
                out.hess[i][j] = h;
                out.hess[j][i] = h;
            }
        }
        out
    }
}

impl Expr {
    /// Largest variable index referenced plus one (zero for constants).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Pi | Expr::E => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(a) | Expr::Call(_, a) => a.arity(),
            Expr::Bin(_, a, b) => a.arity().max(b.arity()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.arity() == 0
    }

    /// Replace every variable `i` by `vars[i]`.
    pub fn substitute(&self, vars: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => vars[*i].clone(),
            Expr::Num(_) | Expr::Pi | Expr::E => self.clone(),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(vars))),
            Expr::Call(f, a) => Expr::Call(*f, Box::new(a.substitute(vars))),
            Expr::Bin(op, a, b) => {
                Expr::Bin(*op, Box::new(a.substitute(vars)), Box::new(b.substitute(vars)))
            }
        }
    }

    /// Render with an explicit variable naming scheme. The output is fully
    /// parenthesised so that parsing it back reproduces the same tree.
    pub fn display_with<'a>(&'a self, names: &'a VarNames) -> impl fmt::Display + 'a {
        Printer { expr: self, names }
    }

    fn domain_error(&self, reason: &'static str) -> Error {
        Error::Domain {
            expr: self.to_string(),
            reason,
        }
    }

    /// Plain evaluation.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Pi => std::f64::consts::PI,
            Expr::E => std::f64::consts::E,
            Expr::Var(i) => *point.get(*i).ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "variable index {} but point has {} entries",
                    i + 1,
                    point.len()
                ))
            })?,
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Call(f, a) => {
                let u = a.eval(point)?;
                f.taylor2(u).map_err(|r| self.domain_error(r))?.0
            }
            Expr::Bin(op, a, b) => {
                let x = a.eval(point)?;
                match op {
                    BinOp::Add => x + b.eval(point)?,
                    BinOp::Sub => x - b.eval(point)?,
                    BinOp::Mul => x * b.eval(point)?,
                    BinOp::Div => {
                        let y = b.eval(point)?;
                        if y == 0.0 {
                            return Err(self.domain_error("division by zero"));
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        let y = b.eval(point)?;
                        self.pow_taylor(x, y, b.is_constant())?.0
                    }
                }
            }
        })
    }

    /// Base-power value and derivatives with respect to the base, for a
    /// constant exponent `y`.
    fn pow_taylor(&self, x: f64, y: f64, exponent_constant: bool) -> Result<(f64, f64, f64)> {
        if exponent_constant && y.fract() == 0.0 && y.abs() < 2f64.powi(31) {
            let k = y as i32;
            if k == 0 {
                return Ok((1.0, 0.0, 0.0));
            }
            if k < 0 && x == 0.0 {
                return Err(self.domain_error("zero base with negative exponent"));
            }
            let kf = k as f64;
            let d2 = if k == 1 {
                0.0
            } else {
                kf * (kf - 1.0) * x.powi(k - 2)
            };
            return Ok((x.powi(k), kf * x.powi(k - 1), d2));
        }
        if x <= 0.0 {
            return Err(self.domain_error("non-integer power of a non-positive base"));
        }
        Ok((x.powf(y), y * x.powf(y - 1.0), y * (y - 1.0) * x.powf(y - 2.0)))
    }

    /// Evaluate value, gradient and Hessian at `point`.
    pub fn eval_jet2(&self, point: &[f64]) -> Result<Jet2> {
        let n = point.len();
        if n > MAX_JET_ARITY {
            return Err(Error::ArityTooLarge {
                got: n,
                max: MAX_JET_ARITY,
            });
        }
        if self.arity() > n {
            return Err(Error::DimensionMismatch(format!(
                "expression uses {} variables but point has {}",
                self.arity(),
                n
            )));
        }
        self.jet(point)
    }

    fn jet(&self, point: &[f64]) -> Result<Jet2> {
        let n = point.len();
        Ok(match self {
            Expr::Num(v) => Jet2::constant(n, *v),
            Expr::Pi => Jet2::constant(n, std::f64::consts::PI),
            Expr::E => Jet2::constant(n, std::f64::consts::E),
            Expr::Var(i) => Jet2::variable(n, *i, point[*i]),
            Expr::Neg(a) => a.jet(point)?.neg(),
            Expr::Call(f, a) => {
                let u = a.jet(point)?;
                let (f0, f1, f2) = f.taylor2(u.value).map_err(|r| self.domain_error(r))?;
                u.compose(f0, f1, f2)
            }
            Expr::Bin(op, a, b) => {
                let x = a.jet(point)?;
                match op {
                    BinOp::Add => x.add(&b.jet(point)?),
                    BinOp::Sub => x.sub(&b.jet(point)?),
                    BinOp::Mul => x.mul(&b.jet(point)?),
                    BinOp::Div => {
                        let y = b.jet(point)?;
                        if y.value == 0.0 {
                            return Err(self.domain_error("division by zero"));
                        }
                        let r = 1.0 / y.value;
                        x.mul(&y.compose(r, -r * r, 2.0 * r * r * r))
                    }
                    BinOp::Pow if b.is_constant() => {
                        let y = b.eval(&[])?;
                        let (f0, f1, f2) = self.pow_taylor(x.value, y, true)?;
                        x.compose(f0, f1, f2)
                    }
                    BinOp::Pow => {
                        if x.value <= 0.0 {
                            return Err(
                                self.domain_error("variable power of a non-positive base")
                            );
                        }
                        let y = b.jet(point)?;
                        let ln = x.compose(x.value.ln(), 1.0 / x.value, -1.0 / (x.value * x.value));
                        let e = y.mul(&ln);
                        let v = e.value.exp();
                        e.compose(v, v, v)
                    }
                }
            }
        })
    }
}

struct Printer<'a> {
    expr: &'a Expr,
    names: &'a VarNames,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self.expr, self.names, f)
    }
}

fn write_expr(e: &Expr, names: &VarNames, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Num(v) => write!(f, "{v:?}"),
        Expr::Pi => f.write_str("pi"),
        Expr::E => f.write_str("e"),
        Expr::Var(i) => write!(f, "{}{}", names.prefix, i + names.first),
        Expr::Neg(a) => {
            f.write_str("(-")?;
            write_expr(a, names, f)?;
            f.write_str(")")
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(a, names, f)?;
            f.write_str(")")
        }
        Expr::Bin(op, a, b) => {
            f.write_str("(")?;
            write_expr(a, names, f)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(b, names, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, &VarNames::params(), f)
    }
}
