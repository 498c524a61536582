//! Text format for Weierstrass models, shared by the library and the CLI:
//!
//! ```text
//! # optional comments
//! A = t^4 - 2t^3
//! B = t^5
//! ```
//!
//! Coefficients are integers, `^` denotes powers, `*` is optional, and
//! parenthesized products like `2(t^8 + 14t^4 + 1)` are accepted.

use crate::algebra::expr::parse_poly;
use crate::algebra::poly::IntPoly;
use crate::error::{Error, Result};
use crate::weierstrass::model::WeierstrassModel;

/// Parses the two-line model format. Syntax problems raise parse errors
/// (with the offending line number); a vanishing discriminant raises a
/// degenerate-model error.
pub fn parse_model(input: &str) -> Result<WeierstrassModel> {
    let mut a: Option<IntPoly> = None;
    let mut b: Option<IntPoly> = None;
    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!(
                "line {lineno}: expected \"A = <polynomial>\" or \"B = <polynomial>\""
            ))
        })?;
        let slot = match key.trim() {
            "A" => &mut a,
            "B" => &mut b,
            other => {
                return Err(Error::Parse(format!(
                    "line {lineno}: unknown key {other:?} (expected A or B)"
                )))
            }
        };
        if slot.is_some() {
            return Err(Error::Parse(format!(
                "line {lineno}: duplicate definition of {}",
                key.trim()
            )));
        }
        let poly = parse_poly(value, "t")
            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))?;
        *slot = Some(poly);
    }
    let a = a.ok_or_else(|| Error::Parse("missing \"A = <polynomial>\" line".into()))?;
    let b = b.ok_or_else(|| Error::Parse("missing \"B = <polynomial>\" line".into()))?;
    WeierstrassModel::new(a, b)
}

/// Renders a model in the two-line format (round-trips through
/// [`parse_model`]).
pub fn render_model(m: &WeierstrassModel) -> String {
    format!("A = {}\nB = {}\n", m.a(), m.b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_two_line_format() {
        let m = parse_model("A = t^4 - 2t^3\nB = t^5\n").unwrap();
        assert_eq!(m.a(), &parse_poly("t^3(t-2)", "t").unwrap());
        assert_eq!(m.b(), &parse_poly("t^5", "t").unwrap());
    }

    #[test]
    fn accepts_comments_blank_lines_and_either_order() {
        let text = "# the auxiliary surface\n\nB = t^5  # quintic\nA = t^4 - 2t^3\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.b(), &parse_poly("t^5", "t").unwrap());
    }

    #[test]
    fn reports_parse_errors_with_line_numbers() {
        let err = parse_model("A = t^4\nB = t^5 +\n").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.starts_with("line 2:"), "got {msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_model("A = t^4\n"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_model("A = t\nC = t^5\nB = 1\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_model("A = t\nA = t^2\nB = 1\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_model("A t\nB = 1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn degenerate_models_are_flagged_as_degenerate_not_parse() {
        assert!(matches!(
            parse_model("A = -3t^2\nB = 2t^3\n"),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn render_round_trips() {
        let m = parse_model("A = 2(t^8 + 14t^4 + 1)\nB = 4t^2(t^8 + 6t^4 + 1)\n").unwrap();
        let text = render_model(&m);
        let back = parse_model(&text).unwrap();
        assert_eq!(&back, &m);
    }
}
