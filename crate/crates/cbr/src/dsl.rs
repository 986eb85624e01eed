//! One-line diagram expressions.
//!
//! Grammar:
//!   expr   := term ((";" | "∘") term)*
//!   term   := factor ("*" factor)*
//!   factor := atom | "(" expr ")"
//!   atom   := "id(" colors ")" | "b(" k "," l ")" | "i(" k ")" | "e(" k ")"
//!
//! ";" reads left to right (the left operand is applied first); "∘" is the
//! usual composition with the right operand applied first. "*" is the tensor
//! and binds tighter than both.

use thiserror::Error;

use crate::diagram::{compose, tensor, Color, ColoredObject, Diagram, DiagramError};

#[derive(Debug, Error)]
pub enum DslError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn parse_fail<T>(pos: usize, msg: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Parse {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Number(u32),
    LParen,
    RParen,
    Comma,
    Semi,
    Compose,
    Star,
}

fn lex(src: &str) -> Result<Vec<(usize, Token)>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((pos, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Token::RParen));
                i += 1;
            }
            ',' => {
                out.push((pos, Token::Comma));
                i += 1;
            }
            ';' => {
                out.push((pos, Token::Semi));
                i += 1;
            }
            '∘' => {
                out.push((pos, Token::Compose));
                i += 1;
            }
            '*' => {
                out.push((pos, Token::Star));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let mut n: u64 = 0;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    n = n * 10 + chars[i].1 as u64 - '0' as u64;
                    if n > u32::MAX as u64 {
                        return parse_fail(pos, "number too large");
                    }
                    i += 1;
                }
                out.push((pos, Token::Number(n as u32)));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                    name.push(chars[i].1);
                    i += 1;
                }
                out.push((pos, Token::Name(name)));
            }
            other => return parse_fail(pos, format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        self.cursor += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), DslError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => parse_fail(pos, format!("expected {what}, found {t:?}")),
            None => parse_fail(pos, format!("expected {what}, found end of input")),
        }
    }

    fn number(&mut self) -> Result<u32, DslError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Number(n)) => Ok(n),
            Some(t) => parse_fail(pos, format!("expected a color, found {t:?}")),
            None => parse_fail(pos, "expected a color, found end of input"),
        }
    }

    fn expr(&mut self) -> Result<Diagram, DslError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Semi) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = compose(&rhs, &acc)?;
                }
                Some(Token::Compose) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = compose(&acc, &rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Diagram, DslError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.bump();
            let rhs = self.factor()?;
            acc = tensor(&acc, &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Diagram, DslError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "\")\"")?;
                Ok(inner)
            }
            Some(Token::Name(name)) => self.atom(&name, pos),
            Some(t) => parse_fail(pos, format!("expected an atom, found {t:?}")),
            None => parse_fail(pos, "expected an atom, found end of input"),
        }
    }

    fn atom(&mut self, name: &str, pos: usize) -> Result<Diagram, DslError> {
        self.expect(Token::LParen, "\"(\"")?;
        let d = match name {
            "id" => {
                let mut colors = Vec::new();
                if self.peek() != Some(&Token::RParen) {
                    colors.push(Color(self.number()?));
                    while self.peek() == Some(&Token::Comma) {
                        self.bump();
                        colors.push(Color(self.number()?));
                    }
                }
                Diagram::identity(&ColoredObject::new(colors))
            }
            "b" => {
                let k = self.number()?;
                self.expect(Token::Comma, "\",\"")?;
                let l = self.number()?;
                Diagram::braid(Color(k), Color(l))
            }
            "i" => Diagram::unit(Color(self.number()?)),
            "e" => Diagram::counit(Color(self.number()?)),
            other => return parse_fail(pos, format!("unknown atom {other:?}")),
        };
        self.expect(Token::RParen, "\")\"")?;
        Ok(d)
    }
}

/// Parse a diagram expression.
pub fn parse_expr(text: &str) -> Result<Diagram, DslError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        cursor: 0,
        end: text.chars().count(),
    };
    if p.peek().is_none() {
        return parse_fail(0, "empty expression");
    }
    let d = p.expr()?;
    if p.peek().is_some() {
        return parse_fail(p.pos(), "trailing input after expression");
    }
    Ok(d)
}
