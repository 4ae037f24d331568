//! Text parsing helpers for configuration inputs.

use crate::error::{Error, Result};

/// Parse an angle given as a literal float or a π token: `pi`, `2pi`,
/// `pi/2`, `3pi/4`, `-pi/2`, `0.5pi`. Exact multiples of π avoid user-side
/// rounding.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Malformed("empty angle".into()));
    }
    if let Ok(value) = s.parse::<f64>() {
        if !value.is_finite() {
            return Err(Error::Malformed(format!("non-finite angle {s:?}")));
        }
        return Ok(value);
    }
    let lower = s.to_ascii_lowercase();
    let Some(pi_pos) = lower.find("pi") else {
        return Err(Error::Malformed(format!("unrecognized angle {s:?}")));
    };
    let (coef_str, rest) = lower.split_at(pi_pos);
    let rest = &rest[2..];
    let coef = match coef_str {
        "" => 1.0,
        "-" => -1.0,
        "+" => 1.0,
        other => other
            .parse::<f64>()
            .map_err(|_| Error::Malformed(format!("bad multiplier in angle {s:?}")))?,
    };
    let div = if rest.is_empty() {
        1.0
    } else if let Some(d) = rest.strip_prefix('/') {
        let div = d
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Malformed(format!("bad divisor in angle {s:?}")))?;
        if div == 0.0 {
            return Err(Error::Malformed("zero divisor in angle".into()));
        }
        div
    } else {
        return Err(Error::Malformed(format!("trailing junk in angle {s:?}")));
    };
    let value = coef * std::f64::consts::PI / div;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Malformed(format!("non-finite angle {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn angle_tokens() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle(" PI ").unwrap(), PI);
        assert_relative_eq!(parse_angle("0.5pi").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert_eq!(parse_angle("-2e-3").unwrap(), -2e-3);
    }

    #[test]
    fn angle_rejects_junk() {
        for bad in ["", "pie", "pi/0", "pi/", "2pi3", "nan", "inf", "pi/pi", "--pi"] {
            assert!(parse_angle(bad).is_err(), "{bad:?} parsed");
        }
    }
}
