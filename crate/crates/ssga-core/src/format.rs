//! Locale-independent numeric formatting: every number the crate emits is
//! printed with six significant digits.

/// Number of significant digits in all emitted output.
pub const SIGNIFICANT_DIGITS: u32 = 6;

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits. Non-finite
/// values format to the empty string (CSV's representation of "no value").
pub fn format_significant(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits, for JSON output.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let exponent = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(SIGNIFICANT_DIGITS as i32 - 1 - exponent);
    (x * scale).round() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_significant(546.574_2), "546.574");
        assert_eq!(format_significant(14_470.42), "14470.4");
        assert_eq!(format_significant(0.076_641_55), "0.0766416");
        assert_eq!(format_significant(186_012.84), "186013");
        assert_eq!(format_significant(1.0), "1.00000");
        assert_eq!(format_significant(0.0), "0");
        assert_eq!(format_significant(f64::NAN), "");
        assert_eq!(format_significant(-3.141_592_65), "-3.14159");
    }

    #[test]
    fn rounding_matches_formatting() {
        for x in [546.5742, 14_470.42, 0.07664155, 186_012.84, 1.0 / 3.0] {
            let formatted: f64 = format_significant(x).parse().unwrap();
            assert!((round_significant(x) - formatted).abs() <= f64::EPSILON * x.abs());
        }
    }
}
