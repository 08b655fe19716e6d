//! Discrete Fourier machinery with physical angular-frequency axes.
//!
//! Spectra are stored in plain DFT order. The frequency of bin `k` of an
//! `M`-point transform with sample spacing `h` is `2π·k'/(M·h)` where `k'` is
//! the signed index in `[-M/2, M/2)`. No shift is applied: the only
//! frequency-dependent factors used by the inversion, `cos(ξ·sqrt(r²-1))`
//! and `|σ|`, are even, so the position of the spatial origin only
//! contributes a phase that cancels on the way back.
//!
//! Forward transforms are unnormalised and inverse transforms carry `1/M`,
//! which is what the Riemann approximations of the continuous pair reduce to.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::forward::Sinogram;
use crate::recon::FilteredSinogram;

/// Sampling description of one axis of a [`SpectralGrid`].
#[derive(Debug, Clone, PartialEq)]
pub enum GridAxis {
    /// Untransformed axis with its sample coordinates.
    Spatial(Vec<f64>),
    /// Transformed axis: signed angular frequency of every bin, plus the
    /// number of spatial samples that were transformed before padding.
    Frequency { freqs: Vec<f64>, samples: usize },
}

impl GridAxis {
    pub fn len(&self) -> usize {
        match self {
            GridAxis::Spatial(v) => v.len(),
            GridAxis::Frequency { freqs, .. } => freqs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn frequencies(&self) -> Option<&[f64]> {
        match self {
            GridAxis::Frequency { freqs, .. } => Some(freqs),
            GridAxis::Spatial(_) => None,
        }
    }
}

/// Complex matrix with a description of both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    pub values: Array2<Complex64>,
    pub axis0: GridAxis,
    pub axis1: GridAxis,
}

/// Signed angular frequencies of an `m`-point DFT with sample spacing `h`.
pub fn signed_frequencies(m: usize, h: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (m as f64 * h);
    (0..m)
        .map(|k| {
            let signed = if k < m.div_ceil(2) {
                k as isize
            } else {
                k as isize - m as isize
            };
            // the Nyquist bin of an even length is taken as -M/2
            let signed = if m.is_multiple_of(2) && k == m / 2 {
                -(k as isize)
            } else {
                signed
            };
            signed as f64 * scale
        })
        .collect()
}

/// Transform length for `n` samples: `pad_factor` times the next power of two.
pub fn padded_len(n: usize, pad_factor: usize) -> usize {
    pad_factor * n.max(1).next_power_of_two()
}

fn check_pad(pad_factor: usize) -> Result<()> {
    if pad_factor == 0 {
        Err(Error::config("pad factor must be >= 1"))
    } else {
        Ok(())
    }
}

/// In-place transform of every lane along `axis`; inverse is `1/M` normalised.
fn fft_along(values: &mut Array2<Complex64>, axis: Axis, inverse: bool) {
    let len = values.len_of(axis);
    if len == 0 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let plan: Arc<dyn Fft<f64>> = if inverse {
        planner.plan_fft_inverse(len)
    } else {
        planner.plan_fft_forward(len)
    };
    let scale = 1.0 / len as f64;
    let lane_axis = Axis(1 - axis.index());
    values
        .axis_iter_mut(lane_axis)
        .into_par_iter()
        .for_each_init(
            || vec![Complex64::new(0.0, 0.0); len],
            |buf, mut lane| {
                for (b, v) in buf.iter_mut().zip(lane.iter()) {
                    *b = *v;
                }
                plan.process(buf);
                for (v, b) in lane.iter_mut().zip(buf.iter()) {
                    *v = if inverse { *b * scale } else { *b };
                }
            },
        );
}

/// Largest imaginary magnitude relative to the largest real magnitude.
fn imaginary_residue(values: &Array2<Complex64>) -> f64 {
    let (re, im) = values.iter().fold((0.0f64, 0.0f64), |(re, im), c| {
        (re.max(c.re.abs()), im.max(c.im.abs()))
    });
    if re == 0.0 {
        if im == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        im / re
    }
}

/// Real part of an inverse transform together with its imaginary residue.
#[derive(Debug, Clone)]
pub struct RealField {
    pub values: Array2<f64>,
    pub imag_residue: f64,
}

/// Transform every radius column of a sinogram along the sensor axis.
pub fn fourier_x0(sino: &Sinogram, pad_factor: usize) -> Result<SpectralGrid> {
    check_pad(pad_factor)?;
    let n = sino.n_sd();
    let m = padded_len(n, pad_factor);
    let mut values = Array2::<Complex64>::zeros((m, sino.n_r()));
    for ((k, l), v) in sino.values.indexed_iter() {
        values[[k, l]] = Complex64::new(*v, 0.0);
    }
    fft_along(&mut values, Axis(0), false);
    Ok(SpectralGrid {
        values,
        axis0: GridAxis::Frequency {
            freqs: signed_frequencies(m, sino.geom.delta_x0),
            samples: n,
        },
        axis1: GridAxis::Spatial(sino.r_axis.clone()),
    })
}

/// Undo [`fourier_x0`] and crop back to the measured sensor positions.
pub fn inverse_x0(spec: &SpectralGrid) -> Result<RealField> {
    let GridAxis::Frequency { samples, .. } = spec.axis0 else {
        return Err(Error::config("axis 0 is not a frequency axis"));
    };
    let mut values = spec.values.clone();
    fft_along(&mut values, Axis(0), true);
    let cropped = values.slice(ndarray::s![..samples, ..]).to_owned();
    Ok(RealField {
        imag_residue: imaginary_residue(&cropped),
        values: cropped.mapv(|c| c.re),
    })
}

/// Regularised arc filter `R̂/(2r) · cos(ξa) / (ε² + cos²(ξa))`, `a = sqrt(r²-1)`.
///
/// Columns with `r <= 1` are zeroed.
pub fn apply_arc_filter(spec: &SpectralGrid, r_axis: &[f64], epsilon: f64) -> Result<SpectralGrid> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::config(format!(
            "regularisation epsilon must be > 0, got {epsilon}"
        )));
    }
    let xi = spec
        .axis0
        .frequencies()
        .ok_or_else(|| Error::config("axis 0 is not a frequency axis"))?;
    if r_axis.len() != spec.values.ncols() {
        return Err(Error::Dimension(format!(
            "{} radii for {} spectrum columns",
            r_axis.len(),
            spec.values.ncols()
        )));
    }
    let eps2 = epsilon * epsilon;
    let mut out = spec.clone();
    out.values
        .axis_iter_mut(Axis(1))
        .into_par_iter()
        .zip(r_axis.par_iter())
        .for_each(|(mut col, &r)| {
            if r <= 1.0 {
                col.fill(Complex64::new(0.0, 0.0));
                return;
            }
            let a = (r * r - 1.0).sqrt();
            for (v, &x) in col.iter_mut().zip(xi) {
                let c = (x * a).cos();
                *v *= c / (eps2 + c * c) / (2.0 * r);
            }
        });
    Ok(out)
}

/// 2D transform of a real image (rows: depth, columns: abscissa), unit pixels.
pub fn fourier_2d(values: &Array2<f64>, pad_factor: usize) -> Result<SpectralGrid> {
    check_pad(pad_factor)?;
    let (rows, cols) = values.dim();
    let (mr, mc) = (padded_len(rows, pad_factor), padded_len(cols, pad_factor));
    let mut spec = Array2::<Complex64>::zeros((mr, mc));
    for ((j, i), v) in values.indexed_iter() {
        spec[[j, i]] = Complex64::new(*v, 0.0);
    }
    fft_along(&mut spec, Axis(1), false);
    fft_along(&mut spec, Axis(0), false);
    Ok(SpectralGrid {
        values: spec,
        axis0: GridAxis::Frequency {
            freqs: signed_frequencies(mr, 1.0),
            samples: rows,
        },
        axis1: GridAxis::Frequency {
            freqs: signed_frequencies(mc, 1.0),
            samples: cols,
        },
    })
}

/// Undo [`fourier_2d`] and crop to the original window.
pub fn inverse_2d(spec: &SpectralGrid) -> Result<RealField> {
    let (GridAxis::Frequency { samples: rows, .. }, GridAxis::Frequency { samples: cols, .. }) =
        (&spec.axis0, &spec.axis1)
    else {
        return Err(Error::config("both axes must be frequency axes"));
    };
    let mut values = spec.values.clone();
    fft_along(&mut values, Axis(0), true);
    fft_along(&mut values, Axis(1), true);
    let cropped = values.slice(ndarray::s![..*rows, ..*cols]).to_owned();
    Ok(RealField {
        imag_residue: imaginary_residue(&cropped),
        values: cropped.mapv(|c| c.re),
    })
}

/// Multiply each depth-frequency row by `2π²|σ|`.
pub fn weight_sigma(spec: &SpectralGrid) -> Result<SpectralGrid> {
    let sigma = spec
        .axis0
        .frequencies()
        .ok_or_else(|| Error::config("axis 0 is not a frequency axis"))?;
    let mut out = spec.clone();
    for (mut row, &s) in out.values.axis_iter_mut(Axis(0)).zip(sigma) {
        let w = 2.0 * PI * PI * s.abs();
        row.mapv_inplace(|v| v * w);
    }
    Ok(out)
}

const J0_SERIES_LIMIT: f64 = 12.0;

/// Bessel function of the first kind, order zero.
///
/// Power series below |x| = 12, Hankel asymptotic expansion above it,
/// truncated at its smallest term.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        let q = -0.25 * x * x;
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut k = 1.0;
        while term.abs() > 1e-17 * sum.abs().max(1e-300) || k < 3.0 {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
            if k > 200.0 {
                break;
            }
        }
        return sum;
    }
    // a_k = prod_{j<=k} (-(2j-1)²) / (k! 8^k x^k); P takes even k, Q odd k.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= -(odd * odd) / (kf * 8.0 * x);
        if term.abs() >= last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        // term = a_k / x^k with alternating sign folded into the recursion
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Direct Riemann quadrature of `∫∫ G(x0, r) J0(η r) r e^{-iξ x0} dr dx0`.
pub fn hankel_oracle(g: &FilteredSinogram, xi: f64, eta: f64) -> Complex64 {
    let kernel: Vec<f64> = g.r_axis.iter().map(|&r| bessel_j0(eta * r) * r).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (row, &x0) in g.values.outer_iter().zip(&g.x0_axis) {
        let radial: f64 = row.iter().zip(&kernel).map(|(v, k)| v * k).sum();
        total += Complex64::from_polar(radial, -xi * x0);
    }
    total * (g.dx0 * g.dr)
}
