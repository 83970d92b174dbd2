//! CSV and metadata writers.

use std::fmt::Write as _;

use crate::sweep::Row;

pub const CSV_HEADER: &str = "axis,axis_value,analytic,lower_bound,mc_mean,mc_stderr,flags";

/// `x` with 12 significant digits, in positional notation for moderate
/// magnitudes and scientific otherwise. Trailing zeros are trimmed.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // Round first so that e.g. 9.9999999999995 moves to the next decade.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

pub fn write_csv(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.axis.as_str(),
            format_sig(r.axis_value),
            opt(r.analytic),
            opt(r.lower_bound),
            opt(r.mc_mean),
            opt(r.mc_stderr),
            r.flags.join(";")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::AxisName;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(-10.0), "-10");
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig(123456.789), "123456.789");
        assert_eq!(format_sig(1.0e-7), "1e-7");
        assert_eq!(format_sig(1.234567890123456e-7), "1.23456789012e-7");
        assert_eq!(format_sig(9.99999999999999), "10");
        assert_eq!(format_sig(3.0e15), "3e15");
    }

    #[test]
    fn empty_fields_for_missing_columns() {
        let row = Row {
            axis: AxisName::BetaDb,
            axis_value: -5.0,
            analytic: Some(0.25),
            lower_bound: None,
            mc_mean: None,
            mc_stderr: None,
            flags: vec![],
        };
        assert_eq!(write_csv(&[row]), format!("{CSV_HEADER}\nbeta_db,-5,0.25,,,,\n"));
    }
}
