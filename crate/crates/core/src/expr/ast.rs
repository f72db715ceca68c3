use std::collections::BTreeSet;
use std::fmt;

use crate::numerics::Func;

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

/// Expression tree. Literals are non-negative; negation is always explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// The imaginary unit `i`.
    ImagUnit,
    Pi,
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Expr::Num(_) | Expr::ImagUnit | Expr::Pi => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Neg(_) => 2,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 3,
            Expr::Binary(BinOp::Pow, ..) => 5,
            _ => 6,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Writes `e` where the grammar expects a multiplicative or exponent operand:
/// a negation there may only wrap another operand.
fn write_tight(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Neg(inner) => {
            write!(f, "-")?;
            write_tight(f, inner)
        }
        _ => write_operand(f, e, e.precedence() < 5),
    }
}

/// Prints with the minimum parentheses needed to parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::ImagUnit => write!(f, "i"),
            Expr::Pi => write!(f, "pi"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                write_operand(f, e, e.precedence() < 2)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Binary(BinOp::Pow, base, exponent) => {
                write_operand(f, base, base.precedence() <= 5)?;
                write!(f, "^")?;
                write_tight(f, exponent)
            }
            Expr::Binary(op @ (BinOp::Mul | BinOp::Div), l, r) => {
                write_operand(f, l, l.precedence() < 3)?;
                write!(f, " {} ", op.symbol())?;
                write_tight(f, r)
            }
            Expr::Binary(op, l, r) => {
                write_operand(f, l, false)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, r, r.precedence() <= 1)
            }
        }
    }
}
