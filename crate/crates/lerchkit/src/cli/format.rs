//! Decimal input and output for the command line.

use rug::float::Round;
use rug::Float;

use crate::error::{Error, Result};
use crate::numeric::Cx;

/// `x` to `digits` significant decimal digits, ties to even.
pub fn decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
}

/// Error estimates need only a few digits.
pub fn short(x: f64) -> String {
    format!("{x:.3e}")
}

fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// Parse `a`, `bi`, `a+bi` or `a-bi` (also `i` and `-i`).
pub fn parse_complex(s: &str, prec: u32) -> Result<Cx> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Cx::from_real(parse_real(&t, prec)?));
    };
    // split before the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(Cx::from_parts(parse_real(re, prec)?, parse_real(im, prec)?))
}
