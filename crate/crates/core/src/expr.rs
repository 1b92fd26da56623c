//! Small arithmetic expressions for the command line, e.g. `3^x`,
//! `(x^3 - x)/3`, `C(x, 4) + 2*y`.
//!
//! Grammar: `+ -` over `* /` over unary minus over right-associative `^`.
//! `C(e, k)` is the binomial coefficient with a literal `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{
  binom::{binomial_rational, BinomialPoly, RationalPoly},
  error::{NumaError, Result},
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
  Num(BigInt),
  Var(usize),
  Neg(Box<Expr>),
  Add(Box<Expr>, Box<Expr>),
  Sub(Box<Expr>, Box<Expr>),
  Mul(Box<Expr>, Box<Expr>),
  Div(Box<Expr>, Box<Expr>),
  Pow(Box<Expr>, Box<Expr>),
  Binom(Box<Expr>, u32),
}

const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
  Num(BigInt),
  Ident(String),
  Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
  let mut out = Vec::new();
  let mut chars = s.chars().peekable();
  while let Some(&c) = chars.peek() {
    if c.is_whitespace() {
      chars.next();
    } else if c.is_ascii_digit() {
      let mut lit = String::new();
      while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
        lit.push(d);
        chars.next();
      }
      out.push(Tok::Num(lit.parse().expect("digits")));
    } else if c.is_ascii_alphabetic() || c == '_' {
      let mut id = String::new();
      while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
        id.push(d);
        chars.next();
      }
      out.push(Tok::Ident(id));
    } else if "+-*/^(),".contains(c) {
      out.push(Tok::Op(c));
      chars.next();
    } else {
      return Err(NumaError::InvalidInput(format!("unexpected character {c:?} in expression")));
    }
  }
  Ok(out)
}

struct Parser<'a> {
  toks: Vec<Tok>,
  pos:  usize,
  vars: &'a [&'a str],
}

impl Parser<'_> {
  fn peek(&self) -> Option<&Tok> { self.toks.get(self.pos) }

  fn eat(&mut self, c: char) -> bool {
    if self.peek() == Some(&Tok::Op(c)) {
      self.pos += 1;
      true
    } else {
      false
    }
  }

  fn expect(&mut self, c: char) -> Result<()> {
    if self.eat(c) { Ok(()) } else { Err(NumaError::InvalidInput(format!("expected {c:?} in expression"))) }
  }

  fn sum(&mut self) -> Result<Expr> {
    let mut e = self.product()?;
    loop {
      if self.eat('+') {
        e = Expr::Add(Box::new(e), Box::new(self.product()?));
      } else if self.eat('-') {
        e = Expr::Sub(Box::new(e), Box::new(self.product()?));
      } else {
        return Ok(e);
      }
    }
  }

  fn product(&mut self) -> Result<Expr> {
    let mut e = self.unary()?;
    loop {
      if self.eat('*') {
        e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
      } else if self.eat('/') {
        e = Expr::Div(Box::new(e), Box::new(self.unary()?));
      } else {
        return Ok(e);
      }
    }
  }

  fn unary(&mut self) -> Result<Expr> {
    if self.eat('-') {
      return Ok(Expr::Neg(Box::new(self.unary()?)));
    }
    self.power()
  }

  fn power(&mut self) -> Result<Expr> {
    let base = self.atom()?;
    if self.eat('^') {
      return Ok(Expr::Pow(Box::new(base), Box::new(self.unary()?)));
    }
    Ok(base)
  }

  fn atom(&mut self) -> Result<Expr> {
    match self.toks.get(self.pos).cloned() {
      Some(Tok::Num(n)) => {
        self.pos += 1;
        Ok(Expr::Num(n))
      },
      Some(Tok::Ident(id)) => {
        self.pos += 1;
        if id == "C" && self.eat('(') {
          let arg = self.sum()?;
          self.expect(',')?;
          let k = match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(k)) => {
              self.pos += 1;
              k.to_u32().ok_or_else(|| NumaError::InvalidInput("binomial index too large".into()))?
            },
            _ => return Err(NumaError::InvalidInput("binomial index must be a literal".into())),
          };
          self.expect(')')?;
          return Ok(Expr::Binom(Box::new(arg), k));
        }
        let v = self.vars.iter().position(|&name| name == id).ok_or_else(|| {
          NumaError::InvalidInput(format!("unknown variable {id:?}; expected one of {}", self.vars.join(", ")))
        })?;
        Ok(Expr::Var(v))
      },
      Some(Tok::Op('(')) => {
        self.pos += 1;
        let e = self.sum()?;
        self.expect(')')?;
        Ok(e)
      },
      _ => Err(NumaError::InvalidInput("incomplete expression".into())),
    }
  }
}

impl Expr {
  pub fn parse(s: &str, vars: &[&str]) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, vars };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
      return Err(NumaError::InvalidInput(format!("trailing input in expression {s:?}")));
    }
    Ok(e)
  }

  pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
    Ok(match self {
      Expr::Num(n) => BigRational::from_integer(n.clone()),
      Expr::Var(v) => point.get(*v).cloned().ok_or(NumaError::ArityMismatch { expected: v + 1, found: point.len() })?,
      Expr::Neg(a) => -a.eval(point)?,
      Expr::Add(a, b) => a.eval(point)? + b.eval(point)?,
      Expr::Sub(a, b) => a.eval(point)? - b.eval(point)?,
      Expr::Mul(a, b) => a.eval(point)? * b.eval(point)?,
      Expr::Div(a, b) => {
        let d = b.eval(point)?;
        if d.is_zero() {
          return Err(NumaError::InvalidInput("division by zero".into()));
        }
        a.eval(point)? / d
      },
      Expr::Pow(a, b) => {
        let base = a.eval(point)?;
        let e = b.eval(point)?;
        let k = exponent(&e)?;
        if k < 0 && base.is_zero() {
          return Err(NumaError::InvalidInput("zero to a negative power".into()));
        }
        let p = num_traits::pow(base, k.unsigned_abs() as usize);
        if k < 0 { p.recip() } else { p }
      },
      Expr::Binom(a, k) => binomial_rational(&a.eval(point)?, *k),
    })
  }

  /// Integer value at an integer point; fails on a non-integer value.
  pub fn eval_int(&self, point: &[BigInt]) -> Result<BigInt> {
    let q: Vec<BigRational> = point.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let v = self.eval(&q)?;
    if !v.is_integer() {
      return Err(NumaError::NotNumerical(format!("value {v} is not an integer")));
    }
    Ok(v.to_integer())
  }

  /// Symbolic form; exponents must be constant non-negative integers.
  pub fn to_rational_poly(&self, nvars: usize) -> Result<RationalPoly> {
    Ok(match self {
      Expr::Num(n) => RationalPoly::constant(nvars, BigRational::from_integer(n.clone())),
      Expr::Var(v) => RationalPoly::var(nvars, *v),
      Expr::Neg(a) => -&a.to_rational_poly(nvars)?,
      Expr::Add(a, b) => &a.to_rational_poly(nvars)? + &b.to_rational_poly(nvars)?,
      Expr::Sub(a, b) => &a.to_rational_poly(nvars)? - &b.to_rational_poly(nvars)?,
      Expr::Mul(a, b) => &a.to_rational_poly(nvars)? * &b.to_rational_poly(nvars)?,
      Expr::Div(a, b) => {
        let d = constant_value(&b.to_rational_poly(nvars)?)
          .filter(|d| !d.is_zero())
          .ok_or_else(|| NumaError::InvalidInput("can only divide by a nonzero constant".into()))?;
        a.to_rational_poly(nvars)?.scale(&d.recip())
      },
      Expr::Pow(a, b) => {
        let e = constant_value(&b.to_rational_poly(nvars)?)
          .ok_or_else(|| NumaError::InvalidInput("exponent must be constant for a polynomial".into()))?;
        let k = exponent(&e)?;
        if k < 0 {
          return Err(NumaError::InvalidInput("negative exponent in a polynomial".into()));
        }
        a.to_rational_poly(nvars)?.pow(k as u32)
      },
      Expr::Binom(a, k) => {
        let p = a.to_rational_poly(nvars)?;
        let mut acc = RationalPoly::constant(nvars, BigRational::one());
        for i in 0..*k {
          let shifted = &p - &RationalPoly::constant(nvars, BigRational::from_integer(BigInt::from(i)));
          acc = &acc * &shifted;
        }
        acc.scale(&BigRational::new(BigInt::one(), crate::binom::factorial(*k)))
      },
    })
  }

  pub fn to_binomial(&self, nvars: usize) -> Result<BinomialPoly> { BinomialPoly::from_rational_poly(&self.to_rational_poly(nvars)?) }
}

fn constant_value(p: &RationalPoly) -> Option<BigRational> {
  match p.total_degree() {
    None => Some(BigRational::zero()),
    Some(0) => Some(p.coeff(&vec![0; p.nvars()])),
    _ => None,
  }
}

fn exponent(e: &BigRational) -> Result<i64> {
  if !e.is_integer() {
    return Err(NumaError::InvalidInput(format!("exponent {e} is not an integer")));
  }
  let k = e.to_integer().to_i64().filter(|k| k.unsigned_abs() <= u64::from(MAX_EXPONENT));
  k.ok_or_else(|| NumaError::InvalidInput(format!("exponent {e} exceeds {MAX_EXPONENT} in absolute value")))
}

#[cfg(test)]
mod tests {
  use super::*;

  fn int(n: i64) -> BigInt { BigInt::from(n) }

  #[test]
  fn parse_and_evaluate() {
    let e = Expr::parse("3^x", &["x"]).unwrap();
    assert_eq!(e.eval_int(&[int(4)]).unwrap(), int(81));
    let e = Expr::parse("(x^3 - x)/3", &["x"]).unwrap();
    assert_eq!(e.eval_int(&[int(5)]).unwrap(), int(40));
    let e = Expr::parse("-2^2", &["x"]).unwrap();
    assert_eq!(e.eval_int(&[int(0)]).unwrap(), int(-4));
    let e = Expr::parse("2^3^2", &[]).unwrap();
    assert_eq!(e.eval_int(&[]).unwrap(), int(512));
    assert!(Expr::parse("x/2", &["x"]).unwrap().eval_int(&[int(3)]).is_err());
    assert!(Expr::parse("x +", &["x"]).is_err());
    assert!(Expr::parse("w", &["x"]).is_err());
  }

  #[test]
  fn symbolic_forms() {
    let e = Expr::parse("C(x, 2) + x*y", &["x", "y"]).unwrap();
    let b = e.to_binomial(2).unwrap();
    let expect = BinomialPoly::from_terms(2, [(vec![2, 0], 1), (vec![1, 1], 1)]).unwrap();
    assert_eq!(b, expect);
    assert!(matches!(Expr::parse("x/2", &["x"]).unwrap().to_binomial(1), Err(NumaError::NotNumerical(_))));
    assert!(Expr::parse("2^x", &["x"]).unwrap().to_rational_poly(1).is_err());
  }
}
