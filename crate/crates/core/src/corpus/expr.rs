//! A small arithmetic language in one variable `t`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | 't' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func  := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt' | 'abs'
//! ```
//!
//! `^` binds tighter than unary minus (`-t^2 = -(t^2)`) and is right-associative
//! (`2^3^2 = 2^(3^2)`); its exponent may itself be negated (`t^-1`).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Var,
    Num(f64),
    Pi,
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident(usize, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_start: usize,
}

const ATOM_START: &[&str] = &["number", "`t`", "`pi`", "function", "`(`", "`-`"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>> {
        let mut p = Parser { src, pos: 0, tok: Tok::End, tok_start: 0 };
        p.advance()?;
        Ok(p)
    }

    fn error(&self, expected: &[&str]) -> Error {
        Error::Parse { offset: self.tok_start, expected: expected.iter().map(|s| s.to_string()).collect() }
    }

    fn advance(&mut self) -> Result<()> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            self.tok = t;
            return Ok(());
        }
        if c.is_ascii_digit() || c == b'.' {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
                self.pos += 1;
            }
            if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
                let mut k = self.pos + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    self.pos = k;
                }
            }
            return match self.src[start..self.pos].parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    self.tok = Tok::Num(v);
                    Ok(())
                }
                _ => Err(Error::Parse { offset: start, expected: vec!["finite number".into()] }),
            };
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            self.tok = Tok::Ident(start, self.pos);
            return Ok(());
        }
        Err(Error::Parse { offset: self.pos, expected: ATOM_START.iter().map(|s| s.to_string()).collect() })
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = ExprAst::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = ExprAst::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        if self.tok == Tok::Minus {
            self.advance()?;
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if self.tok == Tok::Caret {
            self.advance()?;
            let exp = self.unary()?;
            return Ok(ExprAst::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst> {
        match self.tok {
            Tok::Num(v) => {
                self.advance()?;
                Ok(ExprAst::Num(v))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(s, e) => {
                let name = &self.src[s..e];
                if name == "t" {
                    self.advance()?;
                    return Ok(ExprAst::Var);
                }
                if name == "pi" {
                    self.advance()?;
                    return Ok(ExprAst::Pi);
                }
                let Some(f) = Func::ALL.iter().copied().find(|f| f.name() == name) else {
                    return Err(self.error(&["`t`", "`pi`", "function"]));
                };
                self.advance()?;
                if self.tok != Tok::LParen {
                    return Err(self.error(&["`(`"]));
                }
                self.advance()?;
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(ExprAst::Call(f, Box::new(arg)))
            }
            _ => Err(self.error(ATOM_START)),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if self.tok != Tok::RParen {
            return Err(self.error(&["`)`", "operator"]));
        }
        self.advance()
    }
}

/// Parse an expression. Errors carry the byte offset of the offending token
/// and the set of tokens that would have been accepted there.
pub fn parse_expr(text: &str) -> Result<ExprAst> {
    let mut p = Parser::new(text)?;
    let ast = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(ast)
}

fn eval_err(msg: String) -> Error {
    Error::Eval(msg)
}

/// Evaluate at `t`. Domain violations (log of a non-positive number, square root
/// of a negative one, division by zero, non-finite results) are errors.
pub fn eval_expr(ast: &ExprAst, t: f64) -> Result<f64> {
    let v = match ast {
        ExprAst::Var => t,
        ExprAst::Num(v) => *v,
        ExprAst::Pi => std::f64::consts::PI,
        ExprAst::Neg(x) => -eval_expr(x, t)?,
        ExprAst::Bin(op, l, r) => {
            let (x, y) = (eval_expr(l, t)?, eval_expr(r, t)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(eval_err(format!("division by zero at t = {t}")));
                    }
                    x / y
                }
                BinOp::Pow => {
                    if x < 0.0 && y.fract() != 0.0 {
                        return Err(eval_err(format!("negative base {x} to non-integer power at t = {t}")));
                    }
                    if x == 0.0 && y < 0.0 {
                        return Err(eval_err(format!("zero to negative power at t = {t}")));
                    }
                    x.powf(y)
                }
            }
        }
        ExprAst::Call(f, arg) => {
            let x = eval_expr(arg, t)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Abs => x.abs(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(eval_err(format!("log of non-positive {x} at t = {t}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(eval_err(format!("sqrt of negative {x} at t = {t}")));
                    }
                    x.sqrt()
                }
            }
        }
    };
    if !v.is_finite() {
        return Err(eval_err(format!("non-finite value at t = {t}")));
    }
    Ok(v)
}

fn prec(ast: &ExprAst) -> u8 {
    match ast {
        ExprAst::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        ExprAst::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        ExprAst::Neg(_) => 3,
        ExprAst::Bin(BinOp::Pow, ..) => 4,
        ExprAst::Num(v) if *v < 0.0 => 3,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &ExprAst, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints with the minimal parentheses that reparse to the same tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Var => f.write_str("t"),
            ExprAst::Pi => f.write_str("pi"),
            ExprAst::Num(v) => write!(f, "{v:?}"),
            ExprAst::Neg(x) => {
                f.write_str("-")?;
                write_child(f, x, prec(x) < 3)
            }
            ExprAst::Call(func, x) => write!(f, "{}({x})", func.name()),
            ExprAst::Bin(op, l, r) => {
                let p = prec(self);
                let (sym, lp, rp) = match op {
                    BinOp::Pow => ("^", prec(l) < 5, prec(r) < 3),
                    BinOp::Add => (" + ", prec(l) < p, prec(r) <= p),
                    BinOp::Sub => (" - ", prec(l) < p, prec(r) <= p),
                    BinOp::Mul => (" * ", prec(l) < p, prec(r) <= p),
                    BinOp::Div => (" / ", prec(l) < p, prec(r) <= p),
                };
                write_child(f, l, lp)?;
                f.write_str(sym)?;
                write_child(f, r, rp)
            }
        }
    }
}
