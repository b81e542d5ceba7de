//! Real-valued arithmetic expressions used for parameterized coefficients.
//!
//! Grammar: `+ - * / ^`, unary signs, parentheses, decimal literals,
//! identifiers, and the functions `sqrt`, `abs`, `sin`, `cos`. `^` is
//! right-associative and binds tighter than unary minus, so `-b^2 = -(b^2)`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character '{0}' in expression")]
    BadChar(char),
    #[error("malformed number '{0}'")]
    BadNumber(String),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unexpected token '{0}'")]
    UnexpectedToken(String),
    #[error("unknown parameter '{0}'")]
    UnknownName(String),
    #[error("unknown function '{0}'")]
    UnknownFunction(String),
    #[error("expression evaluates to a non-finite value")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
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
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| ExprError::BadNumber(s.clone()))?;
            out.push(Tok::Num(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(ExprError::BadChar(c));
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    toks: Vec<Tok>,
    pos: usize,
    lookup: &'a F,
}

impl<F: Fn(&str) -> Option<f64>> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<f64, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat_op('+') {
                acc += self.product()?;
            } else if self.eat_op('-') {
                acc -= self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<f64, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc *= self.unary()?;
            } else if self.eat_op('/') {
                acc /= self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, ExprError> {
        if self.eat_op('-') {
            Ok(-self.unary()?)
        } else if self.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<f64, ExprError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            let exp = self.unary()?;
            Ok(base.powf(exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<f64, ExprError> {
        let tok = self.peek().cloned().ok_or(ExprError::UnexpectedEnd)?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(v),
            Tok::Op('(') => {
                let v = self.sum()?;
                if !self.eat_op(')') {
                    return Err(self.unexpected());
                }
                Ok(v)
            }
            Tok::Ident(name) => {
                if self.eat_op('(') {
                    let arg = self.sum()?;
                    if !self.eat_op(')') {
                        return Err(self.unexpected());
                    }
                    match name.as_str() {
                        "sqrt" => Ok(arg.sqrt()),
                        "abs" => Ok(arg.abs()),
                        "sin" => Ok(arg.sin()),
                        "cos" => Ok(arg.cos()),
                        _ => Err(ExprError::UnknownFunction(name)),
                    }
                } else {
                    (self.lookup)(&name).ok_or(ExprError::UnknownName(name))
                }
            }
            Tok::Op(c) => Err(ExprError::UnexpectedToken(c.to_string())),
        }
    }

    fn unexpected(&self) -> ExprError {
        match self.peek() {
            None => ExprError::UnexpectedEnd,
            Some(Tok::Num(v)) => ExprError::UnexpectedToken(v.to_string()),
            Some(Tok::Ident(s)) => ExprError::UnexpectedToken(s.clone()),
            Some(Tok::Op(c)) => ExprError::UnexpectedToken(c.to_string()),
        }
    }
}

/// Evaluates `src`, resolving identifiers through `lookup`.
pub fn eval(src: &str, lookup: &impl Fn(&str) -> Option<f64>) -> Result<f64, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        lookup,
    };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    if !v.is_finite() {
        return Err(ExprError::NonFinite);
    }
    Ok(v)
}

/// Identifiers referenced by `src` (function names excluded), in order of first use.
/// Fails on syntax errors and unknown functions.
pub fn free_names(src: &str) -> Result<Vec<String>, ExprError> {
    match eval(src, &|_| Some(1.0)) {
        Ok(_) | Err(ExprError::NonFinite) => {}
        Err(e) => return Err(e),
    }
    let toks = lex(src)?;
    let mut out: Vec<String> = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        if let Tok::Ident(s) = t {
            let is_call = toks.get(i + 1) == Some(&Tok::Op('('));
            if !is_call && !out.contains(s) {
                out.push(s.clone());
            }
        }
    }
    Ok(out)
}
