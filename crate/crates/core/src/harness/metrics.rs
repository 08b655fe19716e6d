use crate::error::{Error, Result};
use crate::geometry::ImageGrid;

/// Normalised mean squared error `Σ(f - f0)² / N²`.
pub fn nmse(f: &ImageGrid, f0: &ImageGrid) -> Result<f64> {
    if f.values.dim() != f0.values.dim() {
        return Err(Error::Dimension(format!(
            "{:?} vs {:?}",
            f.values.dim(),
            f0.values.dim()
        )));
    }
    let sq: f64 = f
        .values
        .iter()
        .zip(f0.values.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sq / f.values.len() as f64)
}
