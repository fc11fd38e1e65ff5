//! The surface file format and scalar literals.
//!
//! A surface file is UTF-8 text. Scalars are 5-tuples of integers
//! `a_num a_den b_num b_den d` meaning `a_num/a_den + (b_num/b_den) sqrt(d)`
//! with positive denominators and reduced fractions. Layout:
//!
//! ```text
//! format_version 1
//! disc 2
//! cylinder C1 {
//!   height 1 2 0 1 1
//!   twist 0 1 0 1 1
//!   top s1p 1 1 0 1 1
//!   bottom s1 1 1 0 1 1
//! }
//! ```
//!
//! `top`/`bottom` lines list the boundary words in order. Serialization is
//! canonical, so parse-then-write is byte-stable.
//!
//! Command lines use a compact literal grammar for scalars instead:
//! `a/b`, `a/b+c/e r d` written as `a/b+c/erD`, e.g. `3/2`, `-1+3/2r2`.

use crate::diagram::{CylinderDiagram, CylinderSpec};
use crate::scalar::FieldScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Serialize a scalar as the 5-tuple `a_num a_den b_num b_den d`.
pub fn scalar5(s: &FieldScalar) -> String {
    format!(
        "{} {} {} {} {}",
        s.rational_part().numer(),
        s.rational_part().denom(),
        s.radical_part().numer(),
        s.radical_part().denom(),
        s.disc()
    )
}

fn parse_scalar5(tokens: &[&str], line: usize) -> Result<FieldScalar, ParseError> {
    if tokens.len() != 5 {
        return err(line, format!("expected 5 integers for a scalar, got {}", tokens.len()));
    }
    let mut ints = Vec::with_capacity(5);
    for t in tokens {
        match BigInt::from_str(t) {
            Ok(v) => ints.push(v),
            Err(_) => return err(line, format!("bad integer {t:?}")),
        }
    }
    let d: u64 = match ints[4].to_string().parse() {
        Ok(v) => v,
        Err(_) => return err(line, "discriminant out of range"),
    };
    if ints[1].is_zero() || ints[3].is_zero() {
        return err(line, "zero denominator in scalar");
    }
    let a = BigRational::new(ints[0].clone(), ints[1].clone());
    let b = BigRational::new(ints[2].clone(), ints[3].clone());
    FieldScalar::try_new(a, b, d).map_err(|e| ParseError {
        line,
        message: e.to_string(),
    })
}

/// Serialize a diagram in the canonical layout.
pub fn write_surface(d: &CylinderDiagram) -> String {
    let mut out = String::new();
    writeln!(out, "format_version 1").unwrap();
    writeln!(out, "disc {}", d.disc).unwrap();
    for c in &d.cylinders {
        writeln!(out, "cylinder {} {{", c.id).unwrap();
        writeln!(out, "  height {}", scalar5(&c.height)).unwrap();
        writeln!(out, "  twist {}", scalar5(&c.twist)).unwrap();
        for (l, len) in &c.top {
            writeln!(out, "  top {} {}", l, scalar5(len)).unwrap();
        }
        for (l, len) in &c.bottom {
            writeln!(out, "  bottom {} {}", l, scalar5(len)).unwrap();
        }
        writeln!(out, "}}").unwrap();
    }
    out
}

/// Parse the surface format.
pub fn parse_surface(text: &str) -> Result<CylinderDiagram, ParseError> {
    let mut disc: Option<u64> = None;
    let mut version_seen = false;
    let mut cylinders: Vec<CylinderSpec> = Vec::new();
    let mut current: Option<CylinderSpec> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "format_version" => {
                if tokens.len() != 2 || tokens[1] != "1" {
                    return err(line_no, "unsupported format_version");
                }
                version_seen = true;
            }
            "disc" => {
                if tokens.len() != 2 {
                    return err(line_no, "disc wants one integer");
                }
                match tokens[1].parse() {
                    Ok(v) => disc = Some(v),
                    Err(_) => return err(line_no, "bad disc"),
                }
            }
            "cylinder" => {
                if current.is_some() {
                    return err(line_no, "nested cylinder block");
                }
                if tokens.len() != 3 || tokens[2] != "{" {
                    return err(line_no, "expected: cylinder <id> {");
                }
                current = Some(CylinderSpec {
                    id: tokens[1].to_string(),
                    height: FieldScalar::zero(),
                    twist: FieldScalar::zero(),
                    top: Vec::new(),
                    bottom: Vec::new(),
                });
            }
            "height" => match current.as_mut() {
                Some(c) => c.height = parse_scalar5(&tokens[1..], line_no)?,
                None => return err(line_no, "height outside cylinder block"),
            },
            "twist" => match current.as_mut() {
                Some(c) => c.twist = parse_scalar5(&tokens[1..], line_no)?,
                None => return err(line_no, "twist outside cylinder block"),
            },
            "top" | "bottom" => {
                let Some(c) = current.as_mut() else {
                    return err(line_no, "boundary entry outside cylinder block");
                };
                if tokens.len() != 7 {
                    return err(line_no, "expected: top|bottom <label> <scalar5>");
                }
                let label = tokens[1].to_string();
                let len = parse_scalar5(&tokens[2..], line_no)?;
                if tokens[0] == "top" {
                    c.top.push((label, len));
                } else {
                    c.bottom.push((label, len));
                }
            }
            "}" => match current.take() {
                Some(c) => cylinders.push(c),
                None => return err(line_no, "unmatched closing brace"),
            },
            other => return err(line_no, format!("unknown directive {other:?}")),
        }
    }
    if current.is_some() {
        return err(text.lines().count(), "unterminated cylinder block");
    }
    if !version_seen {
        return err(1, "missing format_version");
    }
    let Some(disc) = disc else {
        return err(1, "missing disc");
    };
    Ok(CylinderDiagram::new(cylinders, disc))
}

/// Parse the compact scalar literal grammar used on command lines:
/// `a[/b]` optionally followed by `+c[/e]rD` or `-c[/e]rD`, plus the pure
/// radical form `c[/e]rD`.
pub fn parse_scalar_literal(text: &str) -> Result<FieldScalar, String> {
    fn parse_fraction(s: &str) -> Result<BigRational, String> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num).map_err(|_| format!("bad numerator {num:?}"))?;
        let d = BigInt::from_str(den).map_err(|_| format!("bad denominator {den:?}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    }

    let text = text.trim();
    if text.is_empty() {
        return Err("empty scalar".into());
    }
    // Split off a radical term at the LAST 'r' that is followed by digits and
    // preceded by a digit (so labels like "3/2r2" parse, while plain
    // rationals never contain 'r').
    if let Some(rpos) = text.rfind('r') {
        let (head, dpart) = text.split_at(rpos);
        let dpart = &dpart[1..];
        if !dpart.is_empty() && dpart.chars().all(|c| c.is_ascii_digit()) && !head.is_empty() {
            let d: u64 = dpart.parse().map_err(|_| "bad discriminant")?;
            // head = [rational part +/-] coefficient
            // Find the split: the last '+' or '-' not at position 0 and not
            // right after '/' (no exponents in this grammar).
            let mut split: Option<usize> = None;
            for (i, ch) in head.char_indices().skip(1) {
                if ch == '+' || ch == '-' {
                    split = Some(i);
                }
            }
            let (a_str, b_str) = match split {
                Some(i) => (&head[..i], &head[i..]),
                None => ("0", head),
            };
            let a = parse_fraction(a_str)?;
            let b_sign = if b_str.starts_with('-') { -1 } else { 1 };
            let b_body = b_str.trim_start_matches(['+', '-']);
            let mut b = parse_fraction(b_body)?;
            if b_sign < 0 {
                b = -b;
            }
            return FieldScalar::try_new(a, b, d).map_err(|e| e.to_string());
        }
    }
    let a = parse_fraction(text)?;
    Ok(FieldScalar::from_rational(a))
}

/// Render a scalar in the literal grammar (inverse of `parse_scalar_literal`).
pub fn scalar_literal(s: &FieldScalar) -> String {
    format!("{s}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip_bit_exactly() {
        for name in fixtures::FIXTURE_NAMES {
            let d = fixtures::by_name(name).unwrap();
            let text = write_surface(&d);
            let parsed = parse_surface(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(parsed, d, "{name} round trip");
            assert_eq!(write_surface(&parsed), text, "{name} byte stability");
        }
    }

    #[test]
    fn parse_error_carries_line() {
        let text = "format_version 1\ndisc 1\ncylinder C {\n  height 1 0 0 1 1\n}\n";
        let e = parse_surface(text).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn unknown_directive_rejected() {
        let e = parse_surface("format_version 1\ndisc 1\nwidget 3\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar_literal("3/2").unwrap(), FieldScalar::from_ratio(3, 2));
        assert_eq!(parse_scalar_literal("-7").unwrap(), FieldScalar::from_int(-7));
        let x = parse_scalar_literal("1/2+3/4r2").unwrap();
        assert_eq!(x.rational_part(), &BigRational::new(1.into(), 2.into()));
        assert_eq!(x.radical_part(), &BigRational::new(3.into(), 4.into()));
        assert_eq!(x.disc(), 2);
        let y = parse_scalar_literal("-1+3/2r2").unwrap();
        assert_eq!(y.rational_part(), &BigRational::from_integer((-1).into()));
        let z = parse_scalar_literal("1/2r5").unwrap();
        assert!(z.rational_part().is_zero());
        assert_eq!(z.disc(), 5);
        // Round trip through Display.
        for lit in ["3/2", "-1+3/2r2", "1/2r5", "0"] {
            let v = parse_scalar_literal(lit).unwrap();
            assert_eq!(parse_scalar_literal(&scalar_literal(&v)).unwrap(), v);
        }
        assert!(parse_scalar_literal("1/0").is_err());
        assert!(parse_scalar_literal("").is_err());
    }
}
