//! Plain-text Grassmann expressions.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := ident | number | '(' real ',' real ')' | '(' expr ')'
//! real    := ['-'] number
//! number  := digits ['.' digits] ['/' digits]
//! ```
//!
//! Identifiers must name generators of the supplied universe. Numbers are
//! converted to exact rationals, so `0.1` means `1/10`.

use num::{BigInt, BigRational, Zero};

use super::element::{real, Coeff, Generators, GrassmannElement};
use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(BigRational),
    Plus,
    Minus,
    Star,
    Slash,
    Comma,
    Open,
    Close,
}

fn decimal(text: &str) -> Result<BigRational> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return domain(format!("malformed number {text:?}"));
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| crate::Error::Domain(format!("malformed number {text:?}")))?;
    let denom = num::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(numer, denom))
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            '(' => {
                out.push(Token::Open);
                i += 1;
            }
            ')' => {
                out.push(Token::Close);
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Number(decimal(&text)?));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return domain(format!("unexpected character {other:?} at offset {i}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    generators: &'a Generators,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            other => domain(format!("expected {want:?}, found {other:?}")),
        }
    }

    fn expr(&mut self) -> Result<GrassmannElement> {
        let negate = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GrassmannElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<BigRational> {
        let Some(Token::Number(n)) = self.bump() else {
            return domain("expected a number");
        };
        if self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            let Some(Token::Number(d)) = self.bump() else {
                return domain("expected a denominator after '/'");
            };
            if d.is_zero() {
                return domain("division by zero in literal");
            }
            return Ok(n / d);
        }
        Ok(n)
    }

    fn signed_number(&mut self) -> Result<BigRational> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-self.number()?);
        }
        self.number()
    }

    /// `(re,im)` if the parenthesised content matches, otherwise `None` with
    /// the position restored.
    fn try_complex(&mut self) -> Option<Coeff> {
        let save = self.pos;
        let parsed = (|| {
            let re = self.signed_number().ok()?;
            if self.bump()? != Token::Comma {
                return None;
            }
            let im = self.signed_number().ok()?;
            if self.bump()? != Token::Close {
                return None;
            }
            Some(Coeff::new(re, im))
        })();
        if parsed.is_none() {
            self.pos = save;
        }
        parsed
    }

    fn factor(&mut self) -> Result<GrassmannElement> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                GrassmannElement::generator(self.generators, &name)
            }
            Some(Token::Number(_)) => {
                let n = self.number()?;
                Ok(GrassmannElement::scalar(self.generators, real(n)))
            }
            Some(Token::Open) => {
                self.pos += 1;
                if let Some(c) = self.try_complex() {
                    return Ok(GrassmannElement::scalar(self.generators, c));
                }
                let inner = self.expr()?;
                self.expect(Token::Close)?;
                Ok(inner)
            }
            other => domain(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses `src` into an element over `generators`.
pub fn parse_element(src: &str, generators: &Generators) -> Result<GrassmannElement> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Ok(GrassmannElement::zero(generators));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        generators,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return domain(format!("trailing input at token {}", p.pos));
    }
    Ok(e)
}
