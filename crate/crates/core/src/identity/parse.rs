//! Recursive-descent parser for fully parenthesized identities.
//!
//! ```text
//! identity := term "=" term
//! term     := var | "(" term op term ")"
//! op       := "*" | "\" | "/"
//! ```

use super::{Identity, IdentityError, Term};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, expected: &str) -> IdentityError {
        IdentityError::Syntax {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn term(&mut self) -> Result<Term, IdentityError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let left = self.term()?;
                let op = match self.peek() {
                    Some(c @ (b'*' | b'\\' | b'/')) => {
                        self.pos += 1;
                        c
                    }
                    _ => return Err(self.syntax("operator '*', '\\' or '/'")),
                };
                let right = self.term()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("')'"));
                }
                self.pos += 1;
                let (l, r) = (Box::new(left), Box::new(right));
                Ok(match op {
                    b'*' => Term::Multiply(l, r),
                    b'\\' => Term::LeftDivide(l, r),
                    _ => Term::RightDivide(l, r),
                })
            }
            Some(c) if is_ident(c) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident(self.src[self.pos]) {
                    self.pos += 1;
                }
                let name =
                    std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                Ok(Term::Variable(name.to_string()))
            }
            _ => Err(self.syntax("variable or '('")),
        }
    }
}

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

pub fn parse_identity(text: &str) -> Result<Identity, IdentityError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if matches!(p.peek(), None | Some(b'=')) {
        return Err(IdentityError::EmptySide);
    }
    let lhs = p.term()?;
    if p.peek() != Some(b'=') {
        return Err(p.syntax("'='"));
    }
    p.pos += 1;
    if p.peek().is_none() {
        return Err(IdentityError::EmptySide);
    }
    let rhs = p.term()?;
    if p.peek().is_some() {
        return Err(p.syntax("end of input"));
    }
    Ok(Identity::new(lhs, rhs))
}

/// Parses a single term (no equality sign).
pub fn parse_term(text: &str) -> Result<Term, IdentityError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.syntax("end of input"));
    }
    Ok(t)
}
