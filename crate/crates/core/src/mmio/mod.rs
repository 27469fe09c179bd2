//! File formats: Matrix Market matrices, newline-separated vector files,
//! and the JSON run report.
//!
//! All floating-point output uses 17 significant digits so values survive a
//! write/read round trip exactly, and writers emit in a fixed order so
//! repeated runs produce byte-identical files.

mod matrix_market;
mod report;
mod vectors;

pub use matrix_market::{read_matrix_market, write_matrix_market};
pub use report::{render_report, write_report};
pub use vectors::{read_vector, write_vector};

/// 17 significant digits in scientific notation; enough to reconstruct the
/// exact double on read.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::fmt_f64;

    #[test]
    fn formatting_round_trips_exactly() {
        for &x in &[
            0.0,
            1.0,
            0.25,
            -7.0 / 11.0,
            1e-300,
            -1.2345678901234567e300,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
