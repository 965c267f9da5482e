//! Shell-safe complex literals: "a", "bi", "a+bi", "a-bi", no spaces.
//! Exponent signs ("1e-3") never split the literal.

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix(['i', 'I']) else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| format!("bad real literal {t:?}"));
    };
    // split at the last +/- that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part
            .parse::<f64>()
            .map_err(|_| format!("bad real part {re_part:?} in {t:?}"))?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => im_part
            .parse::<f64>()
            .map_err(|_| format!("bad imaginary part {im_part:?} in {t:?}"))?,
    };
    Ok(Complex64::new(re, im))
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}
