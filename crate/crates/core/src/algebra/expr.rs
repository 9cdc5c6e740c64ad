//! A small infix parser producing [`SparsePoly`] values.
//!
//! Grammar: sums and differences of products and quotients of powers;
//! atoms are non-negative integers, variable names, extra symbols supplied
//! by the caller, or parenthesised expressions. Division is only allowed
//! by a constant.

use super::coeff::Coefficient;
use super::poly::SparsePoly;
use super::var::Var;
use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text
                .parse()
                .map_err(|_| ParseError::new(format!("integer `{text}` too large")))?;
            out.push(Tok::Num(n));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ParseError::new(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, C, F> {
    toks: Vec<Tok>,
    pos: usize,
    resolve: &'a F,
    _c: std::marker::PhantomData<C>,
}

impl<'a, C, F> Parser<'a, C, F>
where
    C: Coefficient,
    F: Fn(&str) -> Option<SparsePoly<C>>,
{
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<SparsePoly<C>, ParseError> {
        let mut acc = if self.eat('-') {
            -self.product()?
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<SparsePoly<C>, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = match d.terms().next() {
                    Some((m, c)) if d.len() == 1 && m.is_one() => c.clone(),
                    _ => return Err(ParseError::new("division by a non-constant".to_string())),
                };
                acc = acc.scale(&C::one().div_ref(&c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SparsePoly<C>, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) if n >= 0 => {
                    self.pos += 1;
                    Ok(base.pow(n as u32))
                }
                _ => Err(ParseError::new(
                    "exponent must be a non-negative integer".to_string(),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePoly<C>, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(SparsePoly::integer(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(p) = (self.resolve)(&name) {
                    return Ok(p);
                }
                let v: Var = name.parse()?;
                Ok(SparsePoly::var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(ParseError::new("missing `)`".to_string()));
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            other => Err(ParseError::new(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `src`; identifiers are looked up in `resolve` first, then in the
/// variable namespace.
pub fn parse_poly_with<C, F>(src: &str, resolve: &F) -> Result<SparsePoly<C>, ParseError>
where
    C: Coefficient,
    F: Fn(&str) -> Option<SparsePoly<C>>,
{
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        resolve,
        _c: std::marker::PhantomData,
    };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(ParseError::new(format!(
            "trailing input at token {}",
            p.pos
        )));
    }
    Ok(out)
}

pub fn parse_poly<C: Coefficient>(src: &str) -> Result<SparsePoly<C>, ParseError> {
    parse_poly_with(src, &|_: &str| None)
}
