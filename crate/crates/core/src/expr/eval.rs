use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::ast::{BinOp, Expr};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Evaluates `expr` in the algebra `S`, looking variables up in `bindings`.
pub fn evaluate<S: Scalar>(expr: &Expr, bindings: &HashMap<String, S>) -> Result<S> {
    evaluate_with(expr, &|name| bindings.get(name).copied())
}

pub fn evaluate_with<S, F>(expr: &Expr, lookup: &F) -> Result<S>
where
    S: Scalar,
    F: Fn(&str) -> Option<S>,
{
    match expr {
        Expr::Num(x) => Ok(S::from_real(*x)),
        Expr::ImagUnit => Ok(S::from_complex(Complex64::new(0.0, 1.0))),
        Expr::Pi => Ok(S::from_real(PI)),
        Expr::Var(name) => lookup(name).ok_or_else(|| Error::UnboundVariable(name.clone())),
        // 0 - x rather than -x: keeps a +0 imaginary part off the branch cuts.
        Expr::Neg(e) => Ok(S::from_real(0.0) - evaluate_with(e, lookup)?),
        Expr::Call(f, arg) => evaluate_with(arg, lookup)?.apply(*f),
        Expr::Binary(op, l, r) => {
            let a = evaluate_with(l, lookup)?;
            let b = evaluate_with(r, lookup)?;
            match op {
                BinOp::Add => Ok(a + b),
                BinOp::Sub => Ok(a - b),
                BinOp::Mul => Ok(a * b),
                BinOp::Div => a.try_div(b),
                BinOp::Pow => a.pow(b),
            }
        }
    }
}
