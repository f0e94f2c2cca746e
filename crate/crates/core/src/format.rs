//! Fixed numeric formatting for CSV output.

/// Positional decimal with 17 significant digits, e.g. `0.23447779679464055`.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            format!("{:.16}", 0.0)
        } else {
            x.to_string()
        };
    }
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (16 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}
