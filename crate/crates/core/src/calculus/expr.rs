//! Exact expression language for manifests.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' nat)?
//! atom   := int | int '/' int | identifier | '(' expr ')'
//! ```
//! Identifiers resolve to chart variables, declared constants, or the
//! builtins `sigma`, `p`, `q`. Positions in errors are byte offsets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::poly::Poly;
use crate::scalar::{MetallicParams, MetallicScalar};

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("non-polynomial expression at {pos}: {msg}")]
    NonPolynomial { pos: usize, msg: String },
    #[error("zero denominator at {pos}")]
    ZeroDenominator { pos: usize },
}

impl ExprError {
    pub fn position(&self) -> usize {
        match self {
            Self::Syntax { pos, .. }
            | Self::UnknownIdentifier { pos, .. }
            | Self::NonPolynomial { pos, .. }
            | Self::ZeroDenominator { pos } => *pos,
        }
    }
}

/// Names visible to the parser.
#[derive(Debug, Clone)]
pub struct ExprContext {
    params: MetallicParams,
    vars: Vec<String>,
    constants: BTreeMap<String, MetallicScalar>,
}

pub const BUILTINS: [&str; 3] = ["sigma", "p", "q"];

impl ExprContext {
    pub fn new(params: MetallicParams, vars: Vec<String>) -> Self {
        Self {
            params,
            vars,
            constants: BTreeMap::new(),
        }
    }

    pub fn with_constants(mut self, constants: BTreeMap<String, MetallicScalar>) -> Self {
        self.constants = constants;
        self
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    fn lookup(&self, name: &str, pos: usize) -> Result<Poly, ExprError> {
        let n = self.vars.len();
        if let Some(k) = self.vars.iter().position(|v| v == name) {
            return Ok(Poly::var(self.params, n, k));
        }
        let builtin = match name {
            "sigma" => Some(self.params.sigma()),
            "p" => Some(self.params.int(self.params.p())),
            "q" => Some(self.params.int(self.params.q())),
            _ => None,
        };
        if let Some(c) = builtin.or_else(|| self.constants.get(name).cloned()) {
            return Ok(Poly::constant(self.params, n, c));
        }
        Err(ExprError::UnknownIdentifier {
            pos,
            name: name.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digit run");
                out.push((start, Tok::Int(n)));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(ExprError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a ExprContext,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    return Err(ExprError::NonPolynomial {
                        pos: self.pos(),
                        msg: "division is only allowed inside a rational literal `a/b`".into(),
                    })
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, ExprError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Poly, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let e: u32 = u32::try_from(n)
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or_else(|| ExprError::Syntax {
                        pos,
                        msg: format!("exponent exceeds {MAX_EXPONENT}"),
                    })?;
                Ok(base.pow(e))
            }
            Some(Tok::Minus) => Err(ExprError::NonPolynomial {
                pos,
                msg: "negative exponent".into(),
            }),
            _ => Err(ExprError::Syntax {
                pos,
                msg: "expected a natural-number exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Poly, ExprError> {
        let pos = self.pos();
        let n = self.ctx.vars.len();
        let params = self.ctx.params;
        match self.bump() {
            Some(Tok::Int(num)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.pos();
                    let Some(Tok::Int(den)) = self.bump() else {
                        return Err(ExprError::Syntax {
                            pos: dpos,
                            msg: "expected an integer denominator".into(),
                        });
                    };
                    if den.is_zero() {
                        return Err(ExprError::ZeroDenominator { pos: dpos });
                    }
                    let r = BigRational::new(num, den);
                    Ok(Poly::constant(params, n, params.rational(r)))
                } else {
                    let r = BigRational::from_integer(num);
                    Ok(Poly::constant(params, n, params.rational(r)))
                }
            }
            Some(Tok::Ident(name)) => self.ctx.lookup(&name, pos),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let cpos = self.pos();
                if self.bump() != Some(Tok::RParen) {
                    return Err(ExprError::Syntax {
                        pos: cpos,
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Some(_) => Err(ExprError::Syntax {
                pos,
                msg: "expected a number, identifier or `(`".into(),
            }),
            None => Err(ExprError::Syntax {
                pos,
                msg: "unexpected end of expression".into(),
            }),
        }
    }
}

pub fn parse_expression(src: &str, ctx: &ExprContext) -> Result<Poly, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser {
        ctx,
        toks,
        at: 0,
        end: src.len(),
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(ExprError::Syntax {
            pos: p.pos(),
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(out)
}

/// Parses an expression that must not involve chart variables.
pub fn parse_scalar(src: &str, ctx: &ExprContext) -> Result<MetallicScalar, ExprError> {
    let poly = parse_expression(src, ctx)?;
    poly.as_constant().ok_or(ExprError::NonPolynomial {
        pos: 0,
        msg: "expected a constant".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ctx() -> ExprContext {
        let params = MetallicParams::golden();
        let mut constants = BTreeMap::new();
        constants.insert("c".to_string(), params.ratio(3, 5));
        constants.insert("s".to_string(), params.ratio(4, 5));
        ExprContext::new(params, vec!["u1".into(), "u2".into(), "u3".into()])
            .with_constants(constants)
    }

    #[test]
    fn constant_expression() {
        let c = ctx();
        let v = parse_scalar("3/5 + 2*sigma", &c).unwrap();
        assert_eq!(*v.a(), BigRational::new(BigInt::from(3), BigInt::from(5)));
        assert_eq!(*v.b(), BigRational::from_integer(BigInt::from(2)));
        assert_eq!(parse_scalar("p - sigma", &c).unwrap(), c.params().sigma_conj());
        assert_eq!(parse_scalar("-(-2)^3", &c).unwrap(), c.params().int(8));
    }

    #[test]
    fn polynomial_expression() {
        let c = ctx();
        let params = c.params();
        let p = parse_expression("u1^2 - sigma*u2", &c).unwrap();
        let u1 = Poly::var(params, 3, 0);
        let u2 = Poly::var(params, 3, 1);
        assert_eq!(p, u1.clone() * u1 - u2.scale(&params.sigma()));
        let q = parse_expression("s*u1 + c*u3", &c).unwrap();
        assert_eq!(
            q.eval(&[params.int(5), params.zero(), params.int(5)]),
            params.int(7)
        );
    }

    #[test]
    fn errors_carry_positions() {
        let c = ctx();
        assert_eq!(
            parse_expression("u1 + w", &c).unwrap_err(),
            ExprError::UnknownIdentifier {
                pos: 5,
                name: "w".into()
            }
        );
        assert!(matches!(
            parse_expression("u1^-1", &c).unwrap_err(),
            ExprError::NonPolynomial { pos: 3, .. }
        ));
        assert!(matches!(
            parse_expression("u1 / u2", &c).unwrap_err(),
            ExprError::NonPolynomial { pos: 3, .. }
        ));
        assert!(matches!(
            parse_expression("(u1 + 1", &c).unwrap_err(),
            ExprError::Syntax { pos: 7, .. }
        ));
        assert_eq!(
            parse_expression("1/0", &c).unwrap_err(),
            ExprError::ZeroDenominator { pos: 2 }
        );
        assert!(matches!(
            parse_expression("u1 $", &c).unwrap_err(),
            ExprError::Syntax { pos: 3, .. }
        ));
        assert!(parse_expression("", &c).is_err());
        assert!(parse_expression("2 3", &c).is_err());
    }
}
