//! Numbers on the command line: reals such as `0.5`, `-pi/2`, `3pi/4`, `1e-3`,
//! and complex numbers such as `1.5`, `2i`, `-0.2+0.4i`, `pi/2 i`, `0.1,0.3`.

use std::f64::consts::PI;

use num_complex::Complex64;

fn bad(s: &str, what: &str) -> String {
    format!("cannot parse {s:?} as a {what}")
}

/// A real number, optionally with a `pi` factor and a `/d` divisor.
pub fn real(s: &str) -> Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad(s, "real number"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t.as_str(), None),
    };
    let num_val = if let Some(coef) = num.strip_suffix("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad(s, "real number"))?,
        };
        c * PI
    } else {
        num.parse::<f64>().map_err(|_| bad(s, "real number"))?
    };
    let v = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| bad(s, "real number"))?;
            if d == 0.0 {
                return Err(bad(s, "real number"));
            }
            num_val / d
        }
        None => num_val,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(s, "finite real number"))
    }
}

/// Position of the sign separating real and imaginary parts, skipping the
/// leading sign and exponent signs.
fn split_point(t: &str) -> Option<usize> {
    let b = t.as_bytes();
    (1..b.len())
        .rev()
        .find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E'))
}

pub fn complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some((re, im)) = t.split_once(',') {
        return Ok(Complex64::new(real(re)?, real(im)?));
    }
    let Some(body) = t.strip_suffix('i').filter(|b| !b.ends_with('p')) else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    let imag = |x: &str| -> Result<f64, String> {
        let x = x.strip_suffix('*').unwrap_or(x);
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            x => real(x),
        }
    };
    match split_point(body) {
        Some(p) => Ok(Complex64::new(real(&body[..p])?, imag(&body[p..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// Comma-separated reals.
pub fn real_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(real).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real("0.5").unwrap(), 0.5);
        assert_eq!(real("pi/2").unwrap(), PI / 2.0);
        assert_eq!(real("-pi").unwrap(), -PI);
        assert_eq!(real("3pi/4").unwrap(), 0.75 * PI);
        assert_eq!(real("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(real("1e-3").unwrap(), 1e-3);
        assert!(real("1/0").is_err());
        assert!(real("abc").is_err());
    }

    #[test]
    fn complexes() {
        let c = |a, b| Complex64::new(a, b);
        assert_eq!(complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(complex("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("-0.2+0.4i").unwrap(), c(-0.2, 0.4));
        assert_eq!(complex("1e-3-2e-2i").unwrap(), c(1e-3, -2e-2));
        assert_eq!(complex("pi/2 i").unwrap(), c(0.0, PI / 2.0));
        assert_eq!(complex("0.1,0.3").unwrap(), c(0.1, 0.3));
        assert_eq!(complex("pi").unwrap(), c(PI, 0.0));
        assert!(complex("1+").is_err());
    }
}
