//! Polynomial text grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power ('*' power)*
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'x' | 'y' | '(' expr ')'
//! ```
//! Whitespace is insignificant; juxtaposition is rejected.

use num_bigint::BigInt;

use super::{ArithError, BiPoly, Rational, Scalar};

/// Total degree above which input is rejected.
pub const MAX_TOTAL_DEGREE: u32 = 64;

pub fn parse_poly(text: &str) -> Result<BiPoly, ArithError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let p = parser.expr()?;
    if let Some(tok) = parser.tokens.get(parser.pos) {
        return Err(ArithError::Parse {
            position: tok.offset,
            message: format!("unexpected `{}`", tok.kind.describe()),
        });
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int(n) => n.to_string(),
            Kind::Var(c) => c.to_string(),
            Kind::Plus => "+".into(),
            Kind::Minus => "-".into(),
            Kind::Star => "*".into(),
            Kind::Slash => "/".into(),
            Kind::Caret => "^".into(),
            Kind::LParen => "(".into(),
            Kind::RParen => ")".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ArithError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (off, c) = chars[k];
        k += 1;
        let kind = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let mut digits = c.to_string();
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    digits.push(chars[k].1);
                    k += 1;
                }
                Kind::Int(digits.parse().unwrap())
            }
            'x' | 'y' => Kind::Var(c),
            '+' => Kind::Plus,
            '-' | '−' => Kind::Minus,
            '*' => Kind::Star,
            '/' => Kind::Slash,
            '^' => Kind::Caret,
            '(' => Kind::LParen,
            ')' => Kind::RParen,
            other => {
                return Err(ArithError::Parse {
                    position: off,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token { kind, offset: off });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Kind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or_else(
            || self.tokens.last().map_or(0, |t| t.offset + 1),
            |t| t.offset,
        )
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ArithError> {
        Err(ArithError::Parse {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn check_degree(p: BiPoly) -> Result<BiPoly, ArithError> {
        match p.total_degree() {
            Some(d) if d > MAX_TOTAL_DEGREE => Err(ArithError::DegreeCap {
                degree: d,
                cap: MAX_TOTAL_DEGREE,
            }),
            _ => Ok(p),
        }
    }

    fn expr(&mut self) -> Result<BiPoly, ArithError> {
        let negate = if self.peek() == Some(&Kind::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Some(Kind::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Kind::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly, ArithError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Kind::Star) {
            self.pos += 1;
            let rhs = self.power()?;
            acc = Self::check_degree(acc.mul(&rhs))?;
        }
        match self.peek() {
            Some(Kind::Var(_) | Kind::Int(_) | Kind::LParen) => {
                self.error("juxtaposition is not allowed; use `*`")
            }
            _ => Ok(acc),
        }
    }

    fn power(&mut self) -> Result<BiPoly, ArithError> {
        let base = self.atom()?;
        if self.peek() != Some(&Kind::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Kind::Int(e)) = self.peek().cloned() else {
            return self.error("expected a nonnegative integer exponent");
        };
        self.pos += 1;
        let e: u32 = match u32::try_from(&e) {
            Ok(e) if e <= 1024 => e,
            _ => return self.error(format!("exponent {e} is too large")),
        };
        if let Some(d) = base.total_degree() {
            if d.saturating_mul(e) > MAX_TOTAL_DEGREE {
                return Err(ArithError::DegreeCap {
                    degree: d.saturating_mul(e),
                    cap: MAX_TOTAL_DEGREE,
                });
            }
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<BiPoly, ArithError> {
        match self.peek().cloned() {
            Some(Kind::Int(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Kind::Slash) {
                    self.pos += 1;
                    let Some(Kind::Int(d)) = self.peek().cloned() else {
                        return self.error("expected a denominator after `/`");
                    };
                    if d == BigInt::from(0) {
                        return self.error("zero denominator");
                    }
                    self.pos += 1;
                    Ok(BiPoly::constant(Scalar::Rational(Rational::new(n, d))))
                } else {
                    Ok(BiPoly::constant(Scalar::Rational(Rational::from_integer(n))))
                }
            }
            Some(Kind::Var('x')) => {
                self.pos += 1;
                Ok(BiPoly::x())
            }
            Some(Kind::Var(_)) => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(Kind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Kind::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(other) => self.error(format!("unexpected `{}`", other.describe())),
            None => self.error("unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_forms() {
        let p = parse_poly("y^2 - x^3").unwrap();
        assert_eq!(p, BiPoly::from_int_terms(&[(1, 0, 2), (-1, 3, 0)]));
        let q = parse_poly(" 3/6*x*y + -1 ").unwrap_err();
        assert!(matches!(q, ArithError::Parse { .. }));
        let r = parse_poly("1/2*x*y - 1").unwrap();
        assert_eq!(r.coeff(1, 1), Scalar::from_ratio(1, 2));
    }

    #[test]
    fn parentheses_expand() {
        let p = parse_poly("(y - x)^2*(y + x)").unwrap();
        let q = parse_poly("y^3 - x*y^2 - x^2*y + x^3").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_juxtaposition_and_junk() {
        assert!(parse_poly("2x").is_err());
        assert!(parse_poly("x y").is_err());
        assert!(parse_poly("x + z").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("x^-1").is_err());
        assert!(parse_poly("").is_err());
    }

    #[test]
    fn degree_cap() {
        assert!(parse_poly("x^64").is_ok());
        assert!(matches!(parse_poly("x^65"), Err(ArithError::DegreeCap { .. })));
        assert!(matches!(parse_poly("x^40*y^40"), Err(ArithError::DegreeCap { .. })));
    }
}
