//! Parsing of complex coefficient triples from the command line.

use num_complex::Complex64;

/// Parse one complex number in `re`, `imi` or `re±imi` form
/// (e.g. `0.6`, `0.8i`, `1.2-0.5i`, `-i`).
pub fn parse_complex(token: &str) -> Result<Complex64, String> {
    let s = token.trim();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(imag_part) = s.strip_suffix(['i', 'I']) {
        // split into real and imaginary at the last sign that is not an
        // exponent sign and not the leading sign
        let bytes = imag_part.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&imag_part[..idx], &imag_part[idx..]),
            None => ("", imag_part),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            re_str
                .parse::<f64>()
                .map_err(|_| format!("invalid real part in `{token}`"))?
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("invalid imaginary part in `{token}`"))?,
        };
        Ok(Complex64::new(re, im))
    } else {
        s.parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("invalid number `{token}`"))
    }
}

/// Parse `a,b,c` into three complex coefficients.
pub fn parse_state_triple(spec: &str) -> Result<[Complex64; 3], String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "--state needs three comma-separated coefficients, got {}",
            parts.len()
        ));
    }
    Ok([
        parse_complex(parts[0])?,
        parse_complex(parts[1])?,
        parse_complex(parts[2])?,
    ])
}
