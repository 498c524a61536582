//! Parser for integer polynomial expressions in one named variable.
//!
//! Grammar: sums/differences of terms; terms multiply factors either with `*`
//! or by juxtaposition (`2t`, `(t-1)(t+2)`); factors take nonnegative integer
//! exponents with `^`; parentheses group; unary minus applies to a whole term.
//! Errors carry 1-based line and column positions.

use crate::algebra::poly::IntPoly;
use crate::error::{Error, Result};
use num_bigint::BigInt;

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn position(input: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, ch) in input.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn err_at(input: &str, offset: usize, msg: &str) -> Error {
    let (line, col) = position(input, offset);
    Error::Parse(format!("line {line}, column {col}: {msg}"))
}

fn lex(input: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let bytes: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (off, ch) = bytes[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                toks.push((Tok::Plus, off));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, off));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, off));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, off));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, off));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, off));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().map(|&(_, c)| c).collect();
                let n: BigInt = s.parse().expect("digit run parses as integer");
                toks.push((Tok::Int(n), off));
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_alphanumeric() && !bytes[i].1.is_ascii_digit()
                {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().map(|&(_, c)| c).collect();
                toks.push((Tok::Ident(s), off));
            }
            c => return Err(err_at(input, off, &format!("unexpected character '{c}'"))),
        }
    }
    Ok(Lexer { toks })
}

struct Parser<'a> {
    input: &'a str,
    var: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.input.len())
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: &str) -> Error {
        err_at(self.input, self.offset(), msg)
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<IntPoly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := factor (('*' factor) | factor)*
    fn term(&mut self) -> Result<IntPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // Juxtaposition: a factor can start with INT, IDENT, or '('.
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // factor := atom ['^' uint]
    fn factor(&mut self) -> Result<IntPoly> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let off = self.offset();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| {
                        err_at(self.input, off, "exponent does not fit in u32")
                    })?;
                    if e > MAX_EXPONENT {
                        return Err(err_at(
                            self.input,
                            off,
                            &format!("exponent {e} exceeds limit {MAX_EXPONENT}"),
                        ));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(err_at(
                    self.input,
                    off,
                    "expected a nonnegative integer exponent after '^'",
                )),
            }
        } else {
            Ok(base)
        }
    }

    // atom := INT | VAR | '(' expr ')'
    fn atom(&mut self) -> Result<IntPoly> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(IntPoly::constant(n)),
            Some(Tok::Ident(name)) => {
                if name == self.var {
                    Ok(IntPoly::x())
                } else {
                    Err(err_at(
                        self.input,
                        off,
                        &format!("unexpected variable '{}', expected '{}'", name, self.var),
                    ))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err_at(self.input, off, "unclosed parenthesis")),
                }
            }
            Some(_) => Err(err_at(self.input, off, "expected a number, variable, or '('")),
            None => Err(err_at(self.input, off, "unexpected end of expression")),
        }
    }
}

/// Parses an integer polynomial expression in the variable `var`.
///
/// Accepts `^` for powers; `*` is optional (juxtaposition multiplies).
pub fn parse_poly(input: &str, var: &str) -> Result<IntPoly> {
    let lexer = lex(input)?;
    if lexer.toks.is_empty() {
        return Err(err_at(input, input.len(), "empty expression"));
    }
    let mut p = Parser { input, var, toks: lexer.toks, pos: 0 };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn parses_expanded_form() {
        let f = parse_poly("2*t^8 + 14*t^4 + 1", "t").unwrap();
        let mut v = vec![0i64; 9];
        v[0] = 1;
        v[4] = 14;
        v[8] = 2;
        assert_eq!(f, ip(&v));
    }

    #[test]
    fn parses_factored_form_with_juxtaposition() {
        let f = parse_poly("-(2t-1)^3*(4t-1)^2", "t").unwrap();
        let g = ip(&[-1, 2]).pow(3).mul(&ip(&[-1, 4]).pow(2)).neg();
        assert_eq!(f, g);
        let h = parse_poly("t(t-2)(t-4)", "t").unwrap();
        assert_eq!(h, IntPoly::x().mul(&ip(&[-2, 1])).mul(&ip(&[-4, 1])));
    }

    #[test]
    fn star_optional_and_exponent_rules() {
        assert_eq!(parse_poly("2t", "t").unwrap(), ip(&[0, 2]));
        assert_eq!(parse_poly("t^0", "t").unwrap(), IntPoly::one());
        assert_eq!(parse_poly("3^2", "t").unwrap(), IntPoly::constant(9));
        // Unary minus applies to the whole leading term.
        assert_eq!(parse_poly("-t^2", "t").unwrap(), ip(&[0, 0, -1]));
        assert_eq!(parse_poly("-2t + 1", "t").unwrap(), ip(&[1, -2]));
    }

    #[test]
    fn other_variable_names() {
        assert_eq!(parse_poly("s^2 - 1", "s").unwrap(), ip(&[-1, 0, 1]));
        let err = parse_poly("s + 1", "t").unwrap_err();
        assert!(err.to_string().contains("expected 't'"), "{err}");
    }

    #[test]
    fn error_positions_are_reported() {
        let err = parse_poly("t^2 + $", "t").unwrap_err();
        assert!(err.to_string().contains("line 1, column 7"), "{err}");
        let err = parse_poly("(t + 1", "t").unwrap_err();
        assert!(err.to_string().contains("unclosed parenthesis"), "{err}");
        let err = parse_poly("t^", "t").unwrap_err();
        assert!(err.to_string().contains("exponent"), "{err}");
        let err = parse_poly("t^-2", "t").unwrap_err();
        assert!(err.to_string().contains("exponent"), "{err}");
        let err = parse_poly("", "t").unwrap_err();
        assert!(err.to_string().contains("empty"), "{err}");
        let err = parse_poly("t )", "t").unwrap_err();
        assert!(err.to_string().contains("trailing"), "{err}");
    }

    #[test]
    fn round_trips_rendered_polynomials() {
        let polys = [
            ip(&[1, 0, -2, 0, 1]),
            ip(&[0, -1]),
            ip(&[5]),
            ip(&[-3, 0, 0, 0, 0, 0, 0, 0, 2]),
            IntPoly::zero(),
        ];
        for p in &polys {
            let rendered = p.to_string_var("t");
            assert_eq!(&parse_poly(&rendered, "t").unwrap(), p, "{rendered}");
        }
    }

    #[test]
    fn big_coefficients() {
        let f = parse_poly("123456789012345678901234567890*t - 1", "t").unwrap();
        assert_eq!(
            f.coeff(1).to_string(),
            "123456789012345678901234567890"
        );
    }
}
