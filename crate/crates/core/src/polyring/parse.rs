//! Text grammar for polynomials (whitespace-insensitive):
//!
//! ```text
//! poly  := term (("+"|"-") term)*
//! term  := coeff ("*" mono)? | mono
//! coeff := int | int "/" posint
//! mono  := var ("^" posint)? ("*" var ("^" posint)?)*
//! var   := "x" | "y" | "z"
//! ```
//!
//! A single leading sign is also accepted so that every printed polynomial
//! parses back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Monomial, Poly, Var, XY, XYZ};
use super::{ParseError, Rat};

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let offset = self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i);
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }

    /// Error at the next non-blank character.
    fn unexpected(&mut self, expected: &str) -> ParseError {
        self.skip_ws();
        let found = match self.chars.get(self.pos) {
            Some(&(_, c)) => format!("unexpected '{c}'"),
            None => "unexpected end of input".to_string(),
        };
        self.error(format!("{expected}{found}"))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("expected integer, "));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(s.parse().expect("digits"))
    }

    fn posint_u32(&mut self) -> Result<u32, ParseError> {
        let save = self.pos;
        let n = self.integer()?;
        if n.is_zero() {
            self.pos = save;
            return Err(self.error("exponent must be positive"));
        }
        u32::try_from(n).map_err(|_| {
            self.pos = save;
            self.error("exponent too large")
        })
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        let v = match self.peek() {
            Some('x') => Var::X,
            Some('y') => Var::Y,
            Some('z') => Var::Z,
            _ => return Err(self.unexpected("expected variable, ")),
        };
        self.pos += 1;
        Ok(v)
    }

    fn mono(&mut self) -> Result<Monomial, ParseError> {
        let mut m = Monomial::ONE;
        loop {
            let v = self.var()?;
            let e = if self.peek() == Some('^') {
                self.pos += 1;
                self.posint_u32()?
            } else {
                1
            };
            m.0[v.index()] += e;
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok(m);
            }
        }
    }

    fn term(&mut self) -> Result<(Rat, Monomial), ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut coeff = Rat::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let save = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        self.pos = save;
                        return Err(self.error("zero denominator"));
                    }
                    coeff /= Rat::from_integer(den);
                }
                if self.peek() == Some('*') {
                    self.pos += 1;
                    Ok((coeff, self.mono()?))
                } else {
                    Ok((coeff, Monomial::ONE))
                }
            }
            Some('x' | 'y' | 'z') => Ok((Rat::one(), self.mono()?)),
            _ => Err(self.unexpected("expected term, ")),
        }
    }

    fn poly(&mut self) -> Result<Vec<(Rat, Monomial)>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = Rat::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, m) = self.term()?;
            terms.push((c * &sign, m));
            match self.peek() {
                Some('+') => sign = Rat::one(),
                Some('-') => sign = -Rat::one(),
                None => return Ok(terms),
                Some(_) => return Err(self.unexpected("")),
            }
            self.pos += 1;
        }
    }

}

/// Parses a polynomial over `{x, y}`, or over `{x, y, z}` when `z` occurs.
pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let terms = Parser::new(src).poly()?;
    let uses_z = terms.iter().any(|(_, m)| m.exp(Var::Z) > 0);
    let vars = if uses_z { XYZ } else { XY };
    Ok(Poly::from_terms(vars, terms).expect("variables checked"))
}

/// Parses a polynomial declared over `vars`; using any other variable is a
/// parse error.
pub fn parse_poly_in(src: &str, vars: &[Var]) -> Result<Poly, ParseError> {
    let terms = Parser::new(src).poly()?;
    Poly::from_terms(vars, terms).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

/// Parses with a line offset, for multi-line input files.
pub(crate) fn parse_poly_at(src: &str, line: usize, column_offset: usize) -> Result<Poly, ParseError> {
    parse_poly(src).map_err(|mut e| {
        if e.line == 1 {
            e.column += column_offset;
        }
        e.line += line - 1;
        e
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_example() {
        let p = parse_poly("3*x^2*y - 1/2*y^3 + x - 7").unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.to_string(), "3*x^2*y - 1/2*y^3 + x - 7");
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_poly(" 3 * x ^ 2 *y-1 / 2*y^3").unwrap(), parse_poly("3*x^2*y-1/2*y^3").unwrap());
    }

    #[test]
    fn repeated_variables_multiply() {
        assert_eq!(parse_poly("x*x*y").unwrap(), parse_poly("x^2*y").unwrap());
    }

    #[test]
    fn dangling_caret_reports_position() {
        let e = parse_poly("x^").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        let e = parse_poly("x + 2*").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x^0").is_err());
        assert!(parse_poly("1/0").is_err());
        assert!(parse_poly("w").is_err());
        assert!(parse_poly("x y").is_err());
        assert!(parse_poly_in("z", XY).is_err());
    }

    #[test]
    fn multiline_offsets() {
        let e = parse_poly_at("x^", 2, 4).unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
    }
}
