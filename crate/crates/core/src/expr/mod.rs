//! Expression language for analytic detector wavefunctions.
//!
//! Numbers (`2`, `0.5`, `1e-3`), identifiers, the constants `i` and `pi`,
//! the operators `+ - * / ^` (with `^` right-associative and binding tighter
//! than unary minus), parentheses, and the functions `exp ln sin cos tan sqrt`.

mod ast;
mod eval;
mod lexer;
mod parser;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;

pub use ast::{BinOp, Expr};
pub use eval::{evaluate, evaluate_with};
pub use parser::parse;

use crate::error::{Error, Result};
use crate::numerics::Scalar;
use crate::pointer::ScalarWave;

/// A parsed wavefunction expression.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveExpr {
    ast: Expr,
}

impl WaveExpr {
    pub fn parse(source: &str) -> Result<Self> {
        Ok(WaveExpr { ast: parse(source)? })
    }

    pub fn from_ast(ast: Expr) -> Self {
        WaveExpr { ast }
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.ast.free_vars()
    }

    pub fn evaluate<S: Scalar>(&self, bindings: &HashMap<String, S>) -> Result<S> {
        evaluate(&self.ast, bindings)
    }
}

impl fmt::Display for WaveExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

/// A [`WaveExpr`] with its pointer and width variables identified and every
/// other free variable bound to a constant.
#[derive(Debug, Clone)]
pub struct ExprWave {
    expr: WaveExpr,
    pointer_var: String,
    width_var: String,
    params: HashMap<String, Complex64>,
}

impl ExprWave {
    pub fn new(
        expr: WaveExpr,
        pointer_var: &str,
        width_var: &str,
        params: HashMap<String, Complex64>,
    ) -> Result<Self> {
        if pointer_var == width_var {
            return Err(Error::InvalidArgument(format!(
                "pointer and width variables must differ (both `{pointer_var}`)"
            )));
        }
        for name in [pointer_var, width_var] {
            if params.contains_key(name) {
                return Err(Error::InvalidArgument(format!("`{name}` cannot be both a parameter and a seeded variable")));
            }
        }
        for name in expr.free_vars() {
            if name != pointer_var && name != width_var && !params.contains_key(&name) {
                return Err(Error::UnboundVariable(name));
            }
        }
        Ok(ExprWave { expr, pointer_var: pointer_var.into(), width_var: width_var.into(), params })
    }

    pub fn expr(&self) -> &WaveExpr {
        &self.expr
    }

    pub fn pointer_var(&self) -> &str {
        &self.pointer_var
    }

    pub fn width_var(&self) -> &str {
        &self.width_var
    }
}

impl ScalarWave for ExprWave {
    fn eval<S: Scalar>(&self, q: S, beta: S) -> Result<S> {
        evaluate_with(&self.expr.ast, &|name: &str| {
            if name == self.pointer_var {
                Some(q)
            } else if name == self.width_var {
                Some(beta)
            } else {
                self.params.get(name).map(|z| S::from_complex(*z))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointer::Wave;

    #[test]
    fn unbound_parameter_is_named() {
        let e = WaveExpr::parse("exp(-beta*(y+a)^2/2)").unwrap();
        let r = ExprWave::new(e, "y", "beta", HashMap::new());
        assert!(matches!(r, Err(Error::UnboundVariable(n)) if n == "a"));
    }

    #[test]
    fn seeded_names_are_checked() {
        let e = WaveExpr::parse("Q*beta").unwrap();
        assert!(ExprWave::new(e.clone(), "Q", "Q", HashMap::new()).is_err());
        let params = HashMap::from([("Q".to_string(), Complex64::new(1.0, 0.0))]);
        assert!(ExprWave::new(e, "Q", "beta", params).is_err());
    }

    #[test]
    fn evaluates_as_a_wave() {
        let e = WaveExpr::parse("c*exp(-beta*Q^2/2)").unwrap();
        let w = ExprWave::new(e, "Q", "beta", HashMap::from([("c".to_string(), Complex64::new(0.0, 2.0))])).unwrap();
        let z = w.eval_complex(Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)).unwrap();
        assert!((z - Complex64::new(0.0, 2.0 * (-1.0f64).exp())).norm() < 1e-15);
    }

    #[test]
    fn display_round_trips() {
        for src in ["-(a+b)^2", "(-a)^2", "a-(b-c)", "a/(b*c)", "2^-x^2", "exp(-(Q-3)^2)*i", "--x"] {
            let e = WaveExpr::parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(WaveExpr::parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
