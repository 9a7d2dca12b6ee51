//! Comma-separated lists of positive decimals.

/// Parses `a,b,...` into positive finite rates. Whitespace around entries is
/// allowed; empty entries are not.
pub fn parse_rates(text: &str) -> Result<Vec<f64>, String> {
    parse_positive_list(text, "rate")
}

pub(crate) fn parse_positive_list(text: &str, what: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Err(format!("expected a comma-separated list of {what}s"));
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let v: f64 = item.parse().map_err(|_| format!("{what} {item:?} is not a decimal number"))?;
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(format!("{what} {item:?} must be positive and finite"))
            }
        })
        .collect()
}
