//! Number formatting and table layouts shared by the CSV emitters.

use std::io::Write;

use crate::error::Result;

/// 17 significant digits: enough for any `f64` to parse back bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `k,value` table.
pub fn write_vector_csv<W: Write>(values: &[f64], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["k", "value"])?;
    for (k, v) in values.iter().enumerate() {
        w.write_record([k.to_string(), fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}

/// `row,col,value` table of a square row-major matrix.
pub fn write_matrix_csv<W: Write>(size: usize, values: &[f64], writer: W) -> Result<()> {
    debug_assert_eq!(values.len(), size * size);
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["row", "col", "value"])?;
    for i in 0..size {
        for j in 0..size {
            w.write_record([i.to_string(), j.to_string(), fmt_f64(values[i * size + j])])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 0.0, 123456.789] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }
}
