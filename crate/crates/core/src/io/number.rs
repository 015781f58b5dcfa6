/// Significant digits kept for values that are not already short decimals.
pub const SIGNIFICANT_DIGITS: usize = 6;

/// Values whose shortest exact representation has at most this many
/// significant digits are written exactly.
const EXACT_DIGITS: usize = 8;

fn split_exp(v: f64) -> (String, i32) {
    let s = format!("{v:e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    (mantissa.to_owned(), exp.parse().expect("integer exponent"))
}

fn digit_count(mantissa: &str) -> usize {
    mantissa.chars().filter(char::is_ascii_digit).count()
}

/// Formats a probability in the style of the published tables.
///
/// Short decimals (as read from a table) are reproduced exactly; anything
/// longer is rounded to six significant digits. Magnitudes below `1e-3` use
/// scientific notation with a two-digit exponent (`2.858e-04`).
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let (mantissa, _) = split_exp(v);
    let value = if digit_count(&mantissa) <= EXACT_DIGITS {
        v
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
            .parse()
            .expect("formatted float parses")
    };
    let (mantissa, exp) = split_exp(value);
    if value.abs() < 1e-3 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digit_count(&mantissa) as i32 - 1 - exp).max(0) as usize;
        format!("{value:.decimals$}")
    }
}
