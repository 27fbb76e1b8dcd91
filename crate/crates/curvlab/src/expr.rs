//! Arithmetic expressions for radial weights and radial-graph profiles.
//!
//! Grammar: numbers, named variables, `+ - * / ^`, unary minus,
//! parentheses, `pi`, `e`, and the functions `exp log sqrt sin cos abs`
//! (one argument) and `min max` (two arguments). `^` binds tighter than
//! unary minus and is right associative.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use curvlab_core::radial::RadialFn;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Abs,
    Min,
    Max,
    /// Sign, used by derivatives of `abs`.
    Sign,
    /// `step(a - b)`: 1 when `a < b`; used by derivatives of `min`/`max`.
    Less,
}

impl Func {
    fn from_name(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "exp" => (Func::Exp, 1),
            "log" | "ln" => (Func::Log, 1),
            "sqrt" => (Func::Sqrt, 1),
            "sin" => (Func::Sin, 1),
            "cos" => (Func::Cos, 1),
            "abs" => (Func::Abs, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Sign => "sign",
            Func::Less => "less",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
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
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| anyhow!("bad number `{text}`"))?;
            out.push(Token::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            bail!("unexpected character `{c}` at offset {i}");
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            bail!("expected `{op}` at token {}", self.pos)
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned().ok_or_else(|| anyhow!("unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(name) => {
                if let Some((f, arity)) = Func::from_name(&name) {
                    self.expect('(')?;
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    if args.len() != arity {
                        bail!("{name} takes {arity} argument(s), got {}", args.len());
                    }
                    Ok(Expr::Call(f, args))
                } else {
                    match name.as_str() {
                        "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                        "e" => Ok(Expr::Num(std::f64::consts::E)),
                        _ => Ok(Expr::Var(name)),
                    }
                }
            }
            Token::Op(c) => bail!("unexpected `{c}`"),
        }
    }
}

/// Variable bindings for evaluation.
pub type Bindings<'a> = &'a dyn Fn(&str) -> Option<f64>;

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != p.tokens.len() {
            bail!("trailing input after token {} in `{src}`", p.pos);
        }
        Ok(e)
    }

    /// Names of all free variables.
    pub fn variables(&self) -> Vec<String> {
        let mut out = BTreeMap::new();
        self.collect_vars(&mut out);
        out.into_keys().collect()
    }

    fn collect_vars(&self, out: &mut BTreeMap<String, ()>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone(), ());
            }
            Expr::Neg(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Fails when `vars` leaves a variable unbound.
    pub fn check_vars(&self, allowed: &[&str]) -> Result<()> {
        for v in self.variables() {
            if !allowed.contains(&v.as_str()) {
                bail!("unknown variable `{v}` (allowed: {})", allowed.join(", "));
            }
        }
        Ok(())
    }

    pub fn eval(&self, vars: Bindings) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(name) => vars(name).unwrap_or(f64::NAN),
            Expr::Neg(a) => -a.eval(vars),
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Pow(a, b) => {
                let (x, y) = (a.eval(vars), b.eval(vars));
                if y.fract() == 0.0 && y.abs() <= 64.0 {
                    x.powi(y as i32)
                } else {
                    x.powf(y)
                }
            }
            Expr::Call(f, args) => {
                let x = args[0].eval(vars);
                match f {
                    Func::Exp => x.exp(),
                    Func::Log => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Abs => x.abs(),
                    Func::Sign => {
                        if x > 0.0 {
                            1.0
                        } else if x < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    Func::Min => x.min(args[1].eval(vars)),
                    Func::Max => x.max(args[1].eval(vars)),
                    Func::Less => {
                        if x < args[1].eval(vars) {
                            1.0
                        } else {
                            0.0
                        }
                    }
                }
            }
        }
    }

    /// Symbolic derivative with respect to `var`. `min`, `max` and `abs`
    /// get one-sided piecewise derivatives.
    pub fn diff(&self, var: &str) -> Expr {
        use Expr::*;
        let b = |e: Expr| Box::new(e);
        match self {
            Num(_) => Num(0.0),
            Var(v) => Num(if v == var { 1.0 } else { 0.0 }),
            Neg(a) => Neg(b(a.diff(var))),
            Add(x, y) => Add(b(x.diff(var)), b(y.diff(var))),
            Sub(x, y) => Sub(b(x.diff(var)), b(y.diff(var))),
            Mul(x, y) => Add(b(Mul(b(x.diff(var)), y.clone())), b(Mul(x.clone(), b(y.diff(var))))),
            Div(x, y) => Div(
                b(Sub(b(Mul(b(x.diff(var)), y.clone())), b(Mul(x.clone(), b(y.diff(var)))))),
                b(Pow(y.clone(), b(Num(2.0)))),
            ),
            Pow(x, y) => {
                if y.variables().iter().all(|v| v != var) {
                    // d(x^c) = c x^(c-1) x'
                    Mul(
                        b(Mul(y.clone(), b(Pow(x.clone(), b(Sub(y.clone(), b(Num(1.0)))))))),
                        b(x.diff(var)),
                    )
                } else {
                    // d(x^y) = x^y (y' ln x + y x'/x)
                    Mul(
                        b(self.clone()),
                        b(Add(
                            b(Mul(b(y.diff(var)), b(Call(Func::Log, vec![(**x).clone()])))),
                            b(Div(b(Mul(y.clone(), b(x.diff(var)))), x.clone())),
                        )),
                    )
                }
            }
            Call(f, args) => {
                let x = &args[0];
                let dx = x.diff(var);
                match f {
                    Func::Exp => Mul(b(self.clone()), b(dx)),
                    Func::Log => Div(b(dx), b(x.clone())),
                    Func::Sqrt => Div(b(dx), b(Mul(b(Num(2.0)), b(self.clone())))),
                    Func::Sin => Mul(b(Call(Func::Cos, vec![x.clone()])), b(dx)),
                    Func::Cos => Neg(b(Mul(b(Call(Func::Sin, vec![x.clone()])), b(dx)))),
                    Func::Abs => Mul(b(Call(Func::Sign, vec![x.clone()])), b(dx)),
                    Func::Sign | Func::Less => Num(0.0),
                    Func::Min | Func::Max => {
                        let y = &args[1];
                        let less = Call(Func::Less, vec![x.clone(), y.clone()]);
                        let (dy, rest) = (y.diff(var), Sub(b(Num(1.0)), b(less.clone())));
                        // min picks x where x < y, max picks y there
                        let (on_less, on_rest) = if *f == Func::Min { (dx, dy) } else { (dy, dx) };
                        Add(b(Mul(b(less), b(on_less))), b(Mul(b(rest), b(on_rest))))
                    }
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A function of `r` with its symbolic derivative.
#[derive(Debug, Clone)]
pub struct ExprRadial {
    pub source: String,
    f: Arc<Expr>,
    df: Arc<Expr>,
}

impl ExprRadial {
    pub fn parse(src: &str) -> Result<Self> {
        let f = Expr::parse(src).map_err(|e| anyhow!("in `{src}`: {e}"))?;
        f.check_vars(&["r"]).map_err(|e| anyhow!("in `{src}`: {e}"))?;
        let df = f.diff("r");
        Ok(Self { source: src.to_string(), f: Arc::new(f), df: Arc::new(df) })
    }

    /// Fails unless the function and its derivative are finite on `grid`.
    pub fn check_finite(&self, grid: &[f64]) -> Result<()> {
        for &r in grid {
            if !self.value(r).is_finite() || !self.derivative(r).is_finite() {
                bail!("`{}` is not finite at r = {r}", self.source);
            }
        }
        Ok(())
    }
}

impl RadialFn for ExprRadial {
    fn value(&self, r: f64) -> f64 {
        self.f.eval(&|v| (v == "r").then_some(r))
    }
    fn derivative(&self, r: f64) -> f64 {
        self.df.eval(&|v| (v == "r").then_some(r))
    }
}

/// Bindings of a point `ω` on the unit sphere `S^{n-1}`: `x1..xn` are its
/// components, `z = x_n` and `theta = acos(z)` the polar angle.
pub fn sphere_bindings<'a>(omega: &'a [f64]) -> impl Fn(&str) -> Option<f64> + 'a {
    move |name: &str| {
        let n = omega.len();
        match name {
            "z" => Some(omega[n - 1]),
            "theta" => Some(omega[n - 1].clamp(-1.0, 1.0).acos()),
            _ => {
                let i: usize = name.strip_prefix('x')?.parse().ok()?;
                (1..=n).contains(&i).then(|| omega[i - 1])
            }
        }
    }
}

/// Allowed variable names for a profile over `S^{n-1}`.
pub fn sphere_variables(n: usize) -> Vec<String> {
    let mut v = vec!["theta".to_string(), "z".to_string()];
    v.extend((1..=n).map(|i| format!("x{i}")));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_r(src: &str, r: f64) -> f64 {
        Expr::parse(src).unwrap().eval(&|v| (v == "r").then_some(r))
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval_r("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(eval_r("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(eval_r("-r^2", 3.0), -9.0);
        assert_eq!(eval_r("(1 + r) / 2", 3.0), 2.0);
        assert_eq!(eval_r("min(r, 2) + max(r, 2)", 1.0), 3.0);
        assert_eq!(eval_r("1.5e-1 * 2", 0.0), 0.3);
    }

    #[test]
    fn errors_are_reported() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("sin(1, 2)").is_err());
        assert!(Expr::parse("r $ 2").is_err());
        assert!(Expr::parse("(r").is_err());
        assert!(ExprRadial::parse("r + y").is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        for src in ["r^2", "exp(-r) * sin(r)", "sqrt(1 + r^2) / r", "r^r", "min(r^2, 2*r)", "max(1, r)", "abs(r - 2)"] {
            let f = ExprRadial::parse(src).unwrap();
            for r in [0.7, 1.3, 2.9] {
                let h = 1e-6;
                let fd = (f.value(r + h) - f.value(r - h)) / (2.0 * h);
                assert!((fd - f.derivative(r)).abs() < 1e-6 * (1.0 + fd.abs()), "{src} at {r}");
            }
        }
    }

    #[test]
    fn sphere_variables_bind() {
        let e = Expr::parse("1 + 0.1 * cos(theta) + x1 - z").unwrap();
        let omega = [0.6, 0.0, 0.8];
        let v = e.eval(&sphere_bindings(&omega));
        assert!((v - (1.0 + 0.1 * 0.8 + 0.6 - 0.8)).abs() < 1e-15);
        let names = sphere_variables(3);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert!(e.check_vars(&refs).is_ok());
    }
}
