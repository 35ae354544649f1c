//! Number formatting shared by reports and CSV output.

use pwx_core::rational::to_terminating_decimal;
use pwx_core::Rational;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-5, 1e12)`.
pub fn float12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Exact decimal when the expansion terminates, `num/den` otherwise.
pub fn decimal_or_fraction(r: &Rational) -> String {
    to_terminating_decimal(r).unwrap_or_else(|| r.to_string())
}
