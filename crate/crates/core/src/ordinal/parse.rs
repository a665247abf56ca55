use std::str::FromStr;

use thiserror::Error;

use super::Ordinal;

/// Syntax error with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 256;

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        digits.parse().map_err(|_| ParseError {
            position: start,
            message: "number too large".into(),
        })
    }

    fn expr(&mut self) -> Result<Ordinal, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        let mut acc = self.term()?;
        while self.eat("+") {
            let t = self.term()?;
            acc = match acc.checked_add(&t) {
                Some(x) => x,
                None => return self.err("coefficient overflow"),
            };
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, ParseError> {
        let f = self.factor()?;
        if self.eat("*") {
            let n = self.nat()?;
            return match f.checked_nat_mul(n) {
                Some(x) => Ok(x),
                None => self.err("coefficient overflow"),
            };
        }
        Ok(f)
    }

    fn factor(&mut self) -> Result<Ordinal, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        let out = match self.peek() {
            Some(c) if c.is_ascii_digit() => Ordinal::nat(self.nat()?),
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(")")?;
                x
            }
            _ if self.eat("phi") => {
                self.expect("(")?;
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect(")")?;
                Ordinal::phi(&a, &b)
            }
            Some(b'e') => {
                self.pos += 1;
                self.expect("(")?;
                let b = self.expr()?;
                self.expect(")")?;
                Ordinal::epsilon(&b)
            }
            Some(b'w') => {
                self.pos += 1;
                if self.eat("^") {
                    Ordinal::omega_pow(&self.factor()?)
                } else {
                    Ordinal::omega()
                }
            }
            Some(_) => return self.err("unexpected character"),
            None => return self.err("unexpected end of input"),
        };
        self.depth -= 1;
        Ok(out)
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            depth: 0,
        };
        let x = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_position() {
        let e = "w+".parse::<Ordinal>().unwrap_err();
        assert_eq!(e.position, 2);
        let e = "phi(1 2)".parse::<Ordinal>().unwrap_err();
        assert_eq!(e.position, 6);
        assert!("w)".parse::<Ordinal>().is_err());
        assert!("99999999999999999999999".parse::<Ordinal>().is_err());
    }

    #[test]
    fn whitespace_and_sugar() {
        let a: Ordinal = " w ^ ( w + 1 ) * 2 ".parse().unwrap();
        assert_eq!(a.to_string(), "w^(w+1)*2");
        let b: Ordinal = "(w+1)*3".parse().unwrap();
        assert_eq!(b.to_string(), "w*3+1");
        let c: Ordinal = "2+w".parse().unwrap();
        assert_eq!(c.to_string(), "w");
    }
}
