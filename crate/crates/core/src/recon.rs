//! Fourier-domain inversion of the double-arc transform.
//!
//! The pipeline filters each radius column along the sensor axis, smears the
//! filtered data back over circles centred on the sensor line, and finishes
//! with a `|σ|` ramp along depth:
//!
//! 1. `Ĝ(ξ, r) = R̂(ξ, r) / (2r) · cos(ξa) / (ε² + cos²(ξa))`, `a = sqrt(r²-1)`
//! 2. `G‡(x, z1) = Δx0 · Σ G(x0, sqrt((x-x0)² + z1²))`
//! 3. `f1 = IFFT2(2π²|σ| · FFT2(G‡))`, scaled by the calibration factor.

use std::f64::consts::PI;

use ndarray::{s, Array2, Zip};

use crate::error::{Error, Result};
use crate::forward::Sinogram;
use crate::geometry::{flip_frame, x_start, Frame, ImageGrid};
use crate::spectral::{
    apply_arc_filter, fourier_2d, fourier_x0, inverse_2d, inverse_x0, weight_sigma,
};

/// Calibration that turns the `2π²|σ|` weighting into an amplitude-exact
/// inverse: with the unnormalised transform convention the back-projection
/// spectrum is `2π` times the Hankel transform of `Ĝ`, so the exact depth
/// weight is `|σ|/(2π)`.
pub const AMPLITUDE_CALIBRATION: f64 = 1.0 / (4.0 * PI * PI * PI);

/// Rows over which the back-projection and the depth ramp are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepthDomain {
    /// Only the `n` object rows.
    Window,
    /// From the detector line down to one image side below the object; the
    /// object rows are cropped out after the ramp.
    #[default]
    FromDetector,
    /// Both signs of depth, `|z1| <= δ + 2n`, using that `G‡` is even in
    /// depth.
    Mirrored,
}

/// Interpolation of the filtered data along the radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadialInterp {
    #[default]
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconConfig {
    pub epsilon: f64,
    pub pad_factor: usize,
    pub interp_r: RadialInterp,
    pub domain: DepthDomain,
    pub calibration: f64,
}

impl Default for ReconConfig {
    fn default() -> Self {
        ReconConfig {
            epsilon: 0.01,
            pad_factor: 2,
            interp_r: RadialInterp::Linear,
            domain: DepthDomain::FromDetector,
            calibration: AMPLITUDE_CALIBRATION,
        }
    }
}

impl ReconConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::config(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        if self.pad_factor == 0 {
            return Err(Error::config("pad factor must be >= 1"));
        }
        if !(self.calibration > 0.0) || !self.calibration.is_finite() {
            return Err(Error::config(format!(
                "calibration must be > 0, got {}",
                self.calibration
            )));
        }
        Ok(())
    }
}

/// The filtered sinogram `G(x0, r)` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSinogram {
    pub values: Array2<f64>,
    pub x0_axis: Vec<f64>,
    pub r_axis: Vec<f64>,
    pub dx0: f64,
    pub dr: f64,
}

/// Steps 1 and 2: regularised arc filter along the sensor axis.
pub fn filter_sinogram(sino: &Sinogram, cfg: &ReconConfig) -> Result<FilteredSinogram> {
    cfg.validate()?;
    let spec = fourier_x0(sino, cfg.pad_factor)?;
    let filtered = apply_arc_filter(&spec, &sino.r_axis, cfg.epsilon)?;
    let field = inverse_x0(&filtered)?;
    Ok(FilteredSinogram {
        values: field.values,
        x0_axis: sino.x0_axis.clone(),
        r_axis: sino.r_axis.clone(),
        dx0: sino.geom.delta_x0,
        dr: sino.geom.delta_r,
    })
}

/// Back-projection onto the `n × n` object window in the reflected frame.
pub fn backproject(g: &FilteredSinogram, n: usize, delta: f64) -> ImageGrid {
    backproject_grid(g, n, n, delta)
}

/// Back-projection onto an `n_x × n_z` reflected-frame grid whose first row
/// sits at `z1 = 1 + delta`; `delta` may be negative.
///
/// Radii outside the measured range contribute nothing.
pub fn backproject_grid(g: &FilteredSinogram, n_x: usize, n_z: usize, delta: f64) -> ImageGrid {
    let mut img = ImageGrid::zeros(n_x, n_z, delta, Frame::Flipped);
    let n_r = g.r_axis.len();
    if n_r == 0 || g.x0_axis.is_empty() {
        return img;
    }
    let r_first = g.r_axis[0];
    let max_idx = (n_r - 1) as f64;
    let inv_dr = 1.0 / g.dr;
    let x0 = x_start(n_x);
    let values = &g.values;
    let x0_axis = &g.x0_axis;

    Zip::indexed(&mut img.values).par_for_each(|(j, i), cell| {
        let x = x0 + i as f64;
        let z1 = 1.0 + delta + j as f64;
        let z2 = z1 * z1;
        let mut sum = 0.0;
        for (k, &xs) in x0_axis.iter().enumerate() {
            let dx = x - xs;
            let t = ((dx * dx + z2).sqrt() - r_first) * inv_dr;
            if t >= 0.0 && t <= max_idx {
                let l = (t as usize).min(n_r.saturating_sub(2));
                let frac = t - l as f64;
                let row = values.row(k);
                sum += if n_r == 1 {
                    row[0]
                } else {
                    row[l] * (1.0 - frac) + row[l + 1] * frac
                };
            }
        }
        *cell = sum * g.dx0;
    });
    img
}

/// Steps 4 and 5: `|σ|` weighting of the 2D spectrum and inverse transform.
pub fn deconvolve(bp: &ImageGrid, cfg: &ReconConfig) -> Result<ImageGrid> {
    cfg.validate()?;
    if !bp.is_finite() {
        return Err(Error::domain("back-projection contains non-finite values"));
    }
    let spec = weight_sigma(&fourier_2d(&bp.values, cfg.pad_factor)?)?;
    let field = inverse_2d(&spec)?;
    let values = field.values.mapv(|v| v * cfg.calibration);
    Ok(ImageGrid::new(values, bp.delta, bp.frame))
}

/// Full inversion of a sinogram into an `n × n` physical-frame image.
pub fn reconstruct(sino: &Sinogram, n: usize, delta: f64, cfg: &ReconConfig) -> Result<ImageGrid> {
    if !delta.is_finite() {
        return Err(Error::config(format!("delta must be finite, got {delta}")));
    }
    let g = filter_sinogram(sino, cfg)?;
    let (bp, skip) = match cfg.domain {
        DepthDomain::Window => (backproject(&g, n, delta), 0),
        DepthDomain::FromDetector => {
            // keep the object rows on the grid: z1 = 1 + start + j
            let skip = delta.max(0.0).floor();
            let start = delta - skip;
            let skip = skip as usize;
            (backproject_grid(&g, n, skip + 2 * n, start), skip)
        }
        DepthDomain::Mirrored => {
            let reach = delta.max(0.0) + 2.0 * n as f64;
            let skip = (1.0 + delta + reach).floor();
            let rows = skip as usize + 2 * n;
            (backproject_grid(&g, n, rows, delta - skip), skip as usize)
        }
    };
    let f1 = deconvolve(&bp, cfg)?;
    let rows = f1.values.slice(s![skip..skip + n, ..]).to_owned();
    Ok(flip_frame(&ImageGrid::new(rows, delta, Frame::Flipped)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ScanGeometry;
    use crate::spectral::hankel_oracle;
    use approx::assert_abs_diff_eq;
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use rustfft::num_complex::Complex64;

    fn exact_cfg(pad: usize) -> ReconConfig {
        ReconConfig {
            pad_factor: pad,
            calibration: 1.0,
            ..ReconConfig::default()
        }
    }

    fn filtered(x0_max: f64, r_max: f64, f: impl Fn(f64, f64) -> f64) -> FilteredSinogram {
        let sino = Sinogram::zeros(&ScanGeometry::new(x0_max, 1.0, r_max, 1.0)).unwrap();
        let values = Array2::from_shape_fn(sino.values.dim(), |(k, l)| {
            f(sino.x0_axis[k], sino.r_axis[l])
        });
        FilteredSinogram {
            values,
            x0_axis: sino.x0_axis,
            r_axis: sino.r_axis,
            dx0: 1.0,
            dr: 1.0,
        }
    }

    #[test]
    fn filter_of_constant_row_keeps_only_dc() {
        let mut sino = Sinogram::zeros(&ScanGeometry::new(31.5, 1.0, 12.0, 1.0)).unwrap();
        assert_eq!(sino.n_sd(), 64);
        let l = 4;
        sino.values.column_mut(l).fill(2.5);
        let cfg = exact_cfg(1);
        let g = filter_sinogram(&sino, &cfg).unwrap();
        let r = sino.r_axis[l];
        let expected = 2.5 / (2.0 * r * (1.0 + cfg.epsilon * cfg.epsilon));
        for (k, row) in g.values.outer_iter().enumerate() {
            for (m, &v) in row.iter().enumerate() {
                let want = if m == l { expected } else { 0.0 };
                assert_abs_diff_eq!(v, want, epsilon = 1e-12);
            }
            assert_eq!(g.x0_axis[k], sino.x0_axis[k]);
        }
    }

    #[test]
    fn filter_is_linear_and_maps_zero_to_zero() {
        let geom = ScanGeometry::new(20.0, 1.0, 20.0, 1.0);
        let cfg = ReconConfig::default();
        let zero = filter_sinogram(&Sinogram::zeros(&geom).unwrap(), &cfg).unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));

        let mut rng = StdRng::seed_from_u64(11);
        let mut a = Sinogram::zeros(&geom).unwrap();
        let mut b = a.clone();
        a.values.mapv_inplace(|_| rng.random_range(-1.0..1.0));
        b.values.mapv_inplace(|_| rng.random_range(-1.0..1.0));
        let mut sum = a.clone();
        sum.values = &a.values * 2.0 - &b.values * 3.0;
        let (ga, gb, gs) = (
            filter_sinogram(&a, &cfg).unwrap(),
            filter_sinogram(&b, &cfg).unwrap(),
            filter_sinogram(&sum, &cfg).unwrap(),
        );
        let combo = &ga.values * 2.0 - &gb.values * 3.0;
        let scale = gs.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in combo.iter().zip(gs.values.iter()) {
            assert!((x - y).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn single_cell_backprojects_to_a_tent_annulus() {
        let g0 = filtered(10.0, 16.0, |_, _| 0.0);
        let l = 5;
        let r_star = g0.r_axis[l];
        let k = g0.x0_axis.iter().position(|&x| x == 0.0).unwrap();
        let mut g = g0.clone();
        g.values[[k, l]] = 1.0;

        let zero = backproject_grid(&g0, 24, 24, -13.0);
        assert!(zero.values.iter().all(|&v| v == 0.0));

        let bp = backproject_grid(&g, 24, 24, -13.0);
        let mut peak_hits = 0;
        for ((j, i), &v) in bp.values.indexed_iter() {
            let rho = bp.x_coord(i).hypot(bp.z1_coord(j));
            let want = (1.0 - (rho - r_star).abs()).max(0.0);
            assert_abs_diff_eq!(v, want, epsilon = 1e-12);
            if (rho - r_star).abs() < 1e-12 {
                assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
                peak_hits += 1;
            }
        }
        assert!(peak_hits >= 4);
    }

    #[test]
    fn interior_columns_are_translation_invariant() {
        let (x0_max, r_max) = (60.0, 20.0);
        let g = filtered(x0_max, r_max, |_, r| (r * 0.37).sin() + 1.0);
        let bp = backproject(&g, 64, 3.0);
        let interior: Vec<usize> = (0..bp.n_x())
            .filter(|&i| bp.x_coord(i).abs() + r_max <= x0_max)
            .collect();
        assert!(interior.len() == bp.n_x());
        for row in bp.values.outer_iter() {
            for &i in &interior {
                assert_abs_diff_eq!(row[i], row[interior[0]], epsilon = 1e-9);
            }
        }
        // truncated sensor range: edge columns lose contributions
        let short = filtered(20.0, r_max, |_, r| (r * 0.37).sin() + 1.0);
        let bp = backproject(&short, 64, 3.0);
        assert!((bp.values[[0, 0]] - bp.values[[0, 31]]).abs() > 1e-3);
    }

    #[test]
    fn single_mode_is_scaled_by_the_ramp() {
        let (nz, nx) = (32usize, 64usize);
        let xi0 = 2.0 * PI * 3.0 / nx as f64;
        let sigma0 = 2.0 * PI * 5.0 / nz as f64;
        let values = Array2::from_shape_fn((nz, nx), |(j, i)| {
            (xi0 * i as f64 + sigma0 * j as f64 + 0.3).cos()
        });
        let bp = ImageGrid::new(values.clone(), 0.0, Frame::Flipped);
        let out = deconvolve(&bp, &exact_cfg(1)).unwrap();
        let w = 2.0 * PI * PI * sigma0;
        for (a, b) in out.values.iter().zip(values.iter()) {
            assert_abs_diff_eq!(*a, w * b, epsilon = 1e-10);
        }
        let zero = deconvolve(
            &ImageGrid::zeros(nx, nz, 0.0, Frame::Flipped),
            &exact_cfg(2),
        )
        .unwrap();
        assert!(zero.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn deconvolve_is_linear_and_rejects_nan() {
        let mut rng = StdRng::seed_from_u64(5);
        let a = Array2::from_shape_fn((20, 24), |_| rng.random_range(-1.0..1.0));
        let b = Array2::from_shape_fn((20, 24), |_| rng.random_range(-1.0..1.0));
        let cfg = ReconConfig::default();
        let run = |v: Array2<f64>| {
            deconvolve(&ImageGrid::new(v, 0.0, Frame::Flipped), &cfg)
                .unwrap()
                .values
        };
        let combo = run(a.clone()) * 0.5 + run(b.clone()) * 4.0;
        let direct = run(&a * 0.5 + &b * 4.0);
        let scale = direct.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (x, y) in combo.iter().zip(direct.iter()) {
            assert!((x - y).abs() <= 1e-12 * scale);
        }
        let mut bad = a;
        bad[[3, 3]] = f64::NAN;
        assert!(deconvolve(&ImageGrid::new(bad, 0.0, Frame::Flipped), &cfg).is_err());
    }

    #[test]
    fn zero_sinogram_reconstructs_to_zero() {
        let sino = Sinogram::zeros(&ScanGeometry::standard(32)).unwrap();
        for domain in [
            DepthDomain::Window,
            DepthDomain::FromDetector,
            DepthDomain::Mirrored,
        ] {
            let cfg = ReconConfig {
                domain,
                ..ReconConfig::default()
            };
            let img = reconstruct(&sino, 32, 4.5, &cfg).unwrap();
            assert_eq!(img.frame, Frame::Physical);
            assert_eq!(img.values.dim(), (32, 32));
            assert!(img.values.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn bad_config_is_rejected() {
        let sino = Sinogram::zeros(&ScanGeometry::standard(16)).unwrap();
        for cfg in [
            ReconConfig {
                epsilon: 0.0,
                ..ReconConfig::default()
            },
            ReconConfig {
                epsilon: -0.1,
                ..ReconConfig::default()
            },
            ReconConfig {
                pad_factor: 0,
                ..ReconConfig::default()
            },
            ReconConfig {
                calibration: f64::NAN,
                ..ReconConfig::default()
            },
        ] {
            assert!(matches!(
                reconstruct(&sino, 16, 0.0, &cfg),
                Err(Error::Config(_))
            ));
        }
    }

    /// Sum of smooth bumps kept away from the sinogram edges.
    fn random_bumps(seed: u64) -> FilteredSinogram {
        let mut rng = StdRng::seed_from_u64(seed);
        let bumps: Vec<(f64, f64, f64)> = (0..8)
            .map(|_| {
                (
                    rng.random_range(-14.0..14.0),
                    rng.random_range(10.0..24.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        filtered(31.5, 33.0, |x0, r| {
            bumps
                .iter()
                .map(|&(cx, cr, a)| {
                    a * (-((x0 - cx).powi(2) + (r - cr).powi(2)) / (2.0 * 2.5 * 2.5)).exp()
                })
                .sum()
        })
    }

    #[test]
    fn backprojection_spectrum_is_2pi_hankel() {
        let g = random_bumps(2024);
        assert_eq!(g.values.dim(), (64, 32));
        // full plane, both signs of depth: |x| <= 31.5 + 33, |z| <= 33
        let (nx, half_z) = (140usize, 34i64);
        let bp = backproject_grid(&g, nx, (2 * half_z + 1) as usize, -(half_z as f64) - 1.0);
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        let steps = 6;
        for a in -steps..=steps {
            for b in -steps..=steps {
                let xi = PI / 4.0 * a as f64 / steps as f64;
                let sigma = PI / 4.0 * b as f64 / steps as f64;
                let mut ft = Complex64::new(0.0, 0.0);
                for ((j, i), &v) in bp.values.indexed_iter() {
                    ft += Complex64::from_polar(v, -(xi * bp.x_coord(i) + sigma * bp.z1_coord(j)));
                }
                let h = hankel_oracle(&g, xi, xi.hypot(sigma)) * (2.0 * PI);
                worst = worst.max((ft - h).norm());
                scale = scale.max(h.norm());
            }
        }
        assert!(worst / scale < 0.02, "{}", worst / scale);
    }
}
