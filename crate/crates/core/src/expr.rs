//! Expression parser, evaluator and renderers for the operator tower
//! F ⊂ F⟨∂⟩ ⊂ F(∂).
//!
//! Grammar (whitespace-insensitive, byte offsets in errors):
//!
//! ```text
//!   expr     := term (('+' | '-') term)*
//!   term     := unary (('*' | '/') unary)*
//!   unary    := '-' unary | postfix
//!   postfix  := atom ('^' '-'? integer)*
//!   atom     := integer | 'x' | 'd' | '(' expr ')'
//! ```
//!
//! `*` is noncommutative composition with left associativity, `/` is
//! right-multiplication by the inverse, and `^-1` on any subexpression is
//! the inverse in F(∂). Evaluation lands in the smallest level of the tower
//! that hosts the result.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::RationalFunction;
use crate::formal::FormalPdo;
use crate::fraction::PdoFraction;
use crate::intop::IntegrationOp;

/// Largest exponent magnitude accepted at evaluation time.
const MAX_EXPONENT: i64 = 64;

/// Abstract syntax of an input expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Int(BigInt),
    Var,
    D,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, PartialEq, Debug)]
enum Token {
    Int(BigInt),
    X,
    D,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                pos += 1;
            }
            b'0'..=b'9' => {
                let mut end = pos;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let digits = std::str::from_utf8(&bytes[pos..end]).expect("ascii digits");
                let value: BigInt = digits.parse().expect("digit string");
                tokens.push((Token::Int(value), start));
                pos = end;
            }
            b'x' => {
                tokens.push((Token::X, start));
                pos += 1;
            }
            b'd' => {
                tokens.push((Token::D, start));
                pos += 1;
            }
            b'+' => {
                tokens.push((Token::Plus, start));
                pos += 1;
            }
            b'-' => {
                tokens.push((Token::Minus, start));
                pos += 1;
            }
            b'*' => {
                tokens.push((Token::Star, start));
                pos += 1;
            }
            b'/' => {
                tokens.push((Token::Slash, start));
                pos += 1;
            }
            b'^' => {
                tokens.push((Token::Caret, start));
                pos += 1;
            }
            b'(' => {
                tokens.push((Token::LParen, start));
                pos += 1;
            }
            b')' => {
                tokens.push((Token::RParen, start));
                pos += 1;
            }
            _ => {
                return Err(Error::syntax(start, format!("unexpected byte 0x{:02x}", b)));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    index: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.index)
            .map_or(self.input_len, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.index).map(|(t, _)| t.clone());
        self.index += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
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
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let negative = if matches!(self.peek(), Some(Token::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            let offset = self.offset();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let magnitude: i64 = n
                        .try_into()
                        .map_err(|_| Error::syntax(offset, "exponent does not fit"))?;
                    let e = if negative { -magnitude } else { magnitude };
                    base = Expr::Pow(Box::new(base), e);
                }
                _ => return Err(Error::syntax(offset, "expected an integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Int(n)) => Ok(Expr::Int(n)),
            Some(Token::X) => Ok(Expr::Var),
            Some(Token::D) => Ok(Expr::D),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                let offset = self.offset();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::syntax(offset, "expected ')'")),
                }
            }
            Some(_) => Err(Error::syntax(offset, "expected a value")),
            None => Err(Error::syntax(offset, "unexpected end of input")),
        }
    }
}

/// Parses an expression; errors carry the byte offset of the failure.
pub fn parse(input: &str) -> Result<Expr> {
    let tokens = lex(input)?;
    let mut parser = Parser {
        tokens,
        index: 0,
        input_len: input.len(),
    };
    let expr = parser.expr()?;
    if parser.index != parser.tokens.len() {
        return Err(Error::syntax(parser.offset(), "trailing input"));
    }
    Ok(expr)
}

/// An evaluated expression, at the smallest level of the tower that can
/// host it.
#[derive(Clone, PartialEq, Debug)]
pub enum Value {
    Function(RationalFunction),
    Operator(DiffOp),
    Fraction(PdoFraction),
}

impl Value {
    pub fn as_fraction(&self) -> PdoFraction {
        match self {
            Value::Function(f) => f.clone().into(),
            Value::Operator(p) => p.clone().into(),
            Value::Fraction(f) => f.clone(),
        }
    }

    pub fn as_operator(&self) -> Result<DiffOp> {
        match self {
            Value::Function(f) => Ok(DiffOp::from_fn(f.clone())),
            Value::Operator(p) => Ok(p.clone()),
            Value::Fraction(f) if f.is_operator() => Ok(f.num().clone()),
            Value::Fraction(_) => Err(Error::KindMismatch {
                expected: "a differential operator",
            }),
        }
    }

    pub fn as_function(&self) -> Result<RationalFunction> {
        let op = self.as_operator()?;
        if op.degree().map_or(true, |d| d == 0) {
            Ok(op.coeff(0))
        } else {
            Err(Error::KindMismatch {
                expected: "a rational function",
            })
        }
    }

    fn demote(self) -> Value {
        match self {
            Value::Fraction(f) if f.is_operator() => Value::Operator(f.num().clone()).demote(),
            Value::Operator(p) if p.degree().map_or(true, |d| d == 0) => {
                Value::Function(p.coeff(0))
            }
            other => other,
        }
    }
}

fn inverse(v: &Value) -> Result<Value> {
    match v {
        Value::Function(f) => Ok(Value::Function(f.inv()?)),
        _ => Ok(Value::Fraction(v.as_fraction().inverse()?).demote()),
    }
}

enum BinOp {
    Add,
    Sub,
    Mul,
}

fn binary(op: BinOp, lhs: &Value, rhs: &Value) -> Value {
    use Value::*;
    let v = match (lhs, rhs) {
        (Function(a), Function(b)) => Function(match op {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
        }),
        (Fraction(_), _) | (_, Fraction(_)) => {
            let (a, b) = (lhs.as_fraction(), rhs.as_fraction());
            Fraction(match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
            })
        }
        _ => {
            let (a, b) = (
                lhs.as_operator().expect("not a fraction"),
                rhs.as_operator().expect("not a fraction"),
            );
            Operator(match op {
                BinOp::Add => &a + &b,
                BinOp::Sub => &a - &b,
                BinOp::Mul => &a * &b,
            })
        }
    };
    v.demote()
}

impl Expr {
    /// Evaluates in the tower; `^-1` and `/` promote to fractions as
    /// needed, and results are demoted to the smallest hosting level.
    pub fn eval(&self) -> Result<Value> {
        match self {
            Expr::Int(n) => Ok(Value::Function(RationalFunction::constant(
                BigRational::from_integer(n.clone()),
            ))),
            Expr::Var => Ok(Value::Function(RationalFunction::var())),
            Expr::D => Ok(Value::Operator(DiffOp::d())),
            Expr::Neg(e) => {
                let v = e.eval()?;
                Ok(match v {
                    Value::Function(f) => Value::Function(-&f),
                    Value::Operator(p) => Value::Operator(-&p),
                    Value::Fraction(f) => Value::Fraction(-&f),
                })
            }
            Expr::Add(a, b) => Ok(binary(BinOp::Add, &a.eval()?, &b.eval()?)),
            Expr::Sub(a, b) => Ok(binary(BinOp::Sub, &a.eval()?, &b.eval()?)),
            Expr::Mul(a, b) => Ok(binary(BinOp::Mul, &a.eval()?, &b.eval()?)),
            Expr::Div(a, b) => {
                let rhs = inverse(&b.eval()?)?;
                Ok(binary(BinOp::Mul, &a.eval()?, &rhs))
            }
            Expr::Pow(e, k) => {
                if k.unsigned_abs() > MAX_EXPONENT as u64 {
                    return Err(Error::ExponentOutOfRange);
                }
                let v = e.eval()?;
                match v {
                    Value::Function(f) => Ok(Value::Function(f.pow(*k)?)),
                    Value::Operator(p) if *k >= 0 => {
                        let mut acc = DiffOp::one();
                        for _ in 0..*k {
                            acc = &acc * &p;
                        }
                        Ok(Value::Operator(acc).demote())
                    }
                    other => Ok(Value::Fraction(other.as_fraction().pow(*k)?).demote()),
                }
            }
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(input: &str) -> Result<Value> {
    parse(input)?.eval()
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Function(v) => write!(f, "{}", v),
            Value::Operator(v) => write!(f, "{}", v),
            Value::Fraction(v) => write!(f, "{}", v),
        }
    }
}

/// JSON form of a differential operator: `{"coeffs": [...]}`, index i
/// holding the coefficient of ∂ⁱ as a canonical string.
pub fn json_of_diffop(p: &DiffOp) -> serde_json::Value {
    serde_json::json!({
        "coeffs": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

/// JSON form of a fraction: `{"den": ..., "num": ...}` as operator strings.
pub fn json_of_fraction(f: &PdoFraction) -> serde_json::Value {
    serde_json::json!({
        "den": f.den().to_string(),
        "num": f.num().to_string(),
    })
}

/// JSON form of an integration operator:
/// `{"scalar": ..., "tensors": [[a, b], ...]}`.
pub fn json_of_intop(i: &IntegrationOp) -> serde_json::Value {
    serde_json::json!({
        "scalar": i.scalar().to_string(),
        "tensors": i
            .tensors()
            .iter()
            .map(|(a, b)| vec![a.to_string(), b.to_string()])
            .collect::<Vec<_>>(),
    })
}

/// JSON form of a truncated series:
/// `{"order": n|null, "precision": p, "terms": {"exp": coeff}}`.
pub fn json_of_formal(f: &FormalPdo) -> serde_json::Value {
    let terms: serde_json::Map<String, serde_json::Value> = f
        .terms()
        .map(|(e, c)| (e.to_string(), serde_json::Value::String(c.to_string())))
        .collect();
    serde_json::json!({
        "order": f.order(),
        "precision": f.precision(),
        "terms": terms,
    })
}

/// JSON form of an evaluated value, shaped by its level in the tower.
pub fn json_of_value(v: &Value) -> serde_json::Value {
    match v {
        Value::Function(f) => serde_json::Value::String(f.to_string()),
        Value::Operator(p) => json_of_diffop(p),
        Value::Fraction(f) => json_of_fraction(f),
    }
}
