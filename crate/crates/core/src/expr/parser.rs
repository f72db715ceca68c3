//! Recursive-descent parser.
//!
//! ```text
//! expr     := signed (('+' | '-') signed)*
//! signed   := ('-' | '+') signed | product
//! product  := factor (('*' | '/') operand)*
//! operand  := ('-' | '+') operand | factor
//! factor   := primary ('^' operand)?
//! primary  := number | 'i' | 'pi' | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! A leading minus negates the whole product that follows (`-b*Q^2/2` is
//! `-(b*Q^2/2)`), while `^` binds tighter than any minus (`-Q^2` is `-(Q^2)`)
//! and is right-associative.

use super::ast::{BinOp, Expr};
use super::lexer::{tokenize, Spanned, Token};
use crate::error::{Error, Result};
use crate::numerics::Func;

pub fn parse(source: &str) -> Result<Expr> {
    let tokens = tokenize(source)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].token.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            position: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            Token::End => Ok(()),
            _ => Err(self.error("operator or end of input")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.signed()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.signed()?);
        }
    }

    fn signed(&mut self) -> Result<Expr> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(Expr::negate(self.signed()?))
            }
            Token::Plus => {
                self.bump();
                self.signed()
            }
            _ => self.product(),
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.operand()?);
        }
    }

    fn operand(&mut self) -> Result<Expr> {
        match self.peek() {
            Token::Minus => {
                self.bump();
                Ok(Expr::negate(self.operand()?))
            }
            Token::Plus => {
                self.bump();
                self.operand()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            return Ok(Expr::binary(BinOp::Pow, base, self.operand()?));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Token::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Token::Ident(name) => {
                self.bump();
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Token::LParen {
                        return Err(self.error(&format!("`(` after function `{name}`")));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.close_paren()?;
                    return Ok(Expr::call(func, arg));
                }
                Ok(match name.as_str() {
                    "i" => Expr::ImagUnit,
                    "pi" => Expr::Pi,
                    _ => Expr::Var(name),
                })
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            _ => Err(self.error("number, identifier, or `(`")),
        }
    }

    fn close_paren(&mut self) -> Result<()> {
        if *self.peek() != Token::RParen {
            return Err(self.error("`)`"));
        }
        self.bump();
        Ok(())
    }
}
