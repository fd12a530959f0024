//! Shared formatting for data files.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Fixed 12-significant-digit rendering used in every CSV column.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_finite() {
        format!("{x:.11e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Compact angle label for file names: `0`, `22.5`, `60`.
pub fn fmt_angle(deg: f64) -> String {
    let s = format!("{deg}");
    s.trim_end_matches(".0").to_string()
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(181.8), "1.81800000000e2");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-2.5e-3), "-2.50000000000e-3");
        let parsed: f64 = fmt_num(1.0 / 3.0).parse().unwrap();
        assert!((parsed - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn angle_labels() {
        assert_eq!(fmt_angle(0.0), "0");
        assert_eq!(fmt_angle(22.5), "22.5");
        assert_eq!(fmt_angle(60.0), "60");
    }
}
