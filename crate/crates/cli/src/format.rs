//! Locale-independent number formatting for CSV output.

/// `x` with 12 significant digits in plain decimal notation.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    // let the scientific formatter do the rounding, then read off the exponent
    let sci = format!("{:.11e}", x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if !(-6..=15).contains(&exp) {
        return sci;
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// `x` with 12 decimal places; round-off zeros print without a sign.
pub fn fixed12(x: f64) -> String {
    let x = if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:.12}", x)
}
