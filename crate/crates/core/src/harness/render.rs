//! Binary PGM (P5) rendering with linear min-max scaling.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// 8-bit grey levels of `values`; row 0 becomes the top image row.
pub fn grey_levels(values: &Array2<f64>) -> Result<Array2<u8>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("cannot render non-finite values"));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(hi > lo) {
        return Ok(Array2::zeros(values.dim()));
    }
    let scale = 255.0 / (hi - lo);
    Ok(values.mapv(|v| ((v - lo) * scale).round().clamp(0.0, 255.0) as u8))
}

pub fn encode_pgm(values: &Array2<f64>) -> Result<Vec<u8>> {
    let grey = grey_levels(values)?;
    let (rows, cols) = grey.dim();
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend(grey.iter());
    Ok(out)
}

pub fn render(values: &Array2<f64>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(values)?)?;
    Ok(())
}
