//! Number formatting shared by the CSV and text writers.

/// Fixed-point rendering of `v` with `digits` significant digits.
pub fn sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".to_string()
        } else {
            v.to_string()
        };
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new digit (9.99999 -> 10.0000); one fewer
    // decimal restores the requested precision
    let rounded: f64 = s.parse().unwrap_or(v);
    if rounded != 0.0 && (rounded.abs().log10().floor() as i64) > magnitude && decimals > 0 {
        let d = decimals - 1;
        return format!("{v:.d$}");
    }
    s
}
