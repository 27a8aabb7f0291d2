//! `a+bi` strings for complex numbers.

use num_complex::Complex64;

pub fn parse(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?} (expected a+bi)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the sign of the imaginary part, skipping exponent signs
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip form, e.g. `1.5-2i`.
pub fn format(z: Complex64) -> String {
    format!("{}{}{}i", real(z.re), if z.im.is_sign_negative() { "" } else { "+" }, real(z.im))
}

/// Shortest round-trip form, switching to an exponent far from 1.
fn real(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for (s, z) in [
            ("1+1i", Complex64::new(1.0, 1.0)),
            ("2i", Complex64::new(0.0, 2.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("3", Complex64::new(3.0, 0.0)),
            ("1e-3-2.5e2i", Complex64::new(1e-3, -250.0)),
            ("-1.5 + 0.5i", Complex64::new(-1.5, 0.5)),
            ("5-4.3e-101i", Complex64::new(5.0, -4.3e-101)),
            ("1e20+1e-20i", Complex64::new(1e20, 1e-20)),
        ] {
            assert_eq!(parse(s).unwrap(), z, "{s}");
            assert_eq!(parse(&format(z)).unwrap(), z);
        }
        assert_eq!(format(Complex64::new(5.0, -4.3e-101)), "5-4.3e-101i");
        assert!(parse("1+xi").is_err());
        assert!(parse("").is_err());
    }
}
