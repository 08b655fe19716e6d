//! Coordinate conventions of the translational scanner.
//!
//! Lengths are in pixels. The source travels on `z = 3` and the detector on
//! `z = 1`; every scanning circle is centred on `z = 2`. The object lives
//! below the detector line. Reconstruction works on the reflected object
//! `f1(x, z1) = f(x, 2 - z1)` which is supported in `z1 > 1`, where the arcs
//! become upper half circles centred on `z1 = 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Electron rest energy in keV.
pub const ELECTRON_REST_ENERGY_KEV: f64 = 510.998950;

/// Default spacing between consecutive arc samples, in pixels.
pub const DEFAULT_ARC_STEP: f64 = 0.5;

/// The fixed lines of the modality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalityFrame {
    pub source_line_z: f64,
    pub detector_line_z: f64,
    pub arc_center_z: f64,
}

impl Default for ModalityFrame {
    fn default() -> Self {
        ModalityFrame {
            source_line_z: 3.0,
            detector_line_z: 1.0,
            arc_center_z: 2.0,
        }
    }
}

/// Radius of the scanning circles for a scattering angle `omega`.
pub fn radius_from_scatter_angle(omega: f64) -> Result<f64> {
    if !(FRAC_PI_2..PI).contains(&omega) {
        return Err(Error::domain(format!(
            "scatter angle {omega} outside [pi/2, pi)"
        )));
    }
    Ok(1.0 / (PI - omega).sin())
}

/// Scattering angle whose circles have radius `r`.
pub fn scatter_angle_from_radius(r: f64) -> Result<f64> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius {r} must be >= 1")));
    }
    Ok(PI - (1.0 / r).asin())
}

/// Energy of a photon of initial energy `e0` (keV) after scattering by `omega`.
pub fn compton_energy(e0: f64, omega: f64) -> Result<f64> {
    if !(e0 > 0.0) || !e0.is_finite() {
        return Err(Error::domain(format!("source energy {e0} must be > 0")));
    }
    if !(0.0..=PI).contains(&omega) {
        return Err(Error::domain(format!(
            "scatter angle {omega} outside [0, pi]"
        )));
    }
    Ok(e0 / (1.0 + (e0 / ELECTRON_REST_ENERGY_KEV) * (1.0 - omega.cos())))
}

/// Sensor positions and arc radii of an acquisition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGeometry {
    pub x0_max: f64,
    pub delta_x0: f64,
    pub r_max: f64,
    pub delta_r: f64,
    pub arc_step: f64,
}

impl ScanGeometry {
    pub fn new(x0_max: f64, delta_x0: f64, r_max: f64, delta_r: f64) -> Self {
        ScanGeometry {
            x0_max,
            delta_x0,
            r_max,
            delta_r,
            arc_step: DEFAULT_ARC_STEP,
        }
    }

    /// Geometry used for most studies: `x0_max = r_max = 3N`, unit steps.
    pub fn standard(n: usize) -> Self {
        let n = n as f64;
        Self::new(3.0 * n, 1.0, 3.0 * n, 1.0)
    }

    pub fn with_arc_step(mut self, arc_step: f64) -> Self {
        self.arc_step = arc_step;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("delta_x0", self.delta_x0),
            ("delta_r", self.delta_r),
            ("arc_step", self.arc_step),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.x0_max >= 0.0) || !self.x0_max.is_finite() {
            return Err(Error::config(format!(
                "x0_max must be >= 0, got {}",
                self.x0_max
            )));
        }
        if !(self.r_max > 1.0 + self.delta_r) || !self.r_max.is_finite() {
            return Err(Error::config(format!(
                "r_max = {} leaves no radius above 1 with delta_r = {}",
                self.r_max, self.delta_r
            )));
        }
        Ok(())
    }

    /// Number of sensor positions.
    pub fn n_sd(&self) -> usize {
        (2.0 * self.x0_max / self.delta_x0 + 1e-9).floor() as usize + 1
    }

    /// Number of arc radii.
    pub fn n_r(&self) -> usize {
        let q = (self.r_max - 1.0) / self.delta_r + 1e-9;
        if q >= 1.0 {
            q.floor() as usize
        } else {
            0
        }
    }
}

/// Sampled axes of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanAxes {
    pub x0: Vec<f64>,
    pub r: Vec<f64>,
}

/// Sensor positions (symmetric about zero) and radii `1 + l·Δr`, `l = 1..N_r`.
pub fn build_scan_grid(geom: &ScanGeometry) -> Result<ScanAxes> {
    geom.validate()?;
    let n_sd = geom.n_sd();
    let half = (n_sd - 1) as f64;
    let x0 = (0..n_sd)
        .map(|k| (2.0 * k as f64 - half) * geom.delta_x0 / 2.0)
        .collect();
    let r = (1..=geom.n_r())
        .map(|l| 1.0 + l as f64 * geom.delta_r)
        .collect();
    Ok(ScanAxes { x0, r })
}

/// Uniform angular sampling of one half arc of radius `r`.
///
/// Samples sit at `theta0 + k·dtheta`, `k < count`, covering
/// `[asin(1/r), pi/2]` as left endpoints of steps whose last one is clamped
/// at `pi/2`. Each sample stands for an arc length `r·dtheta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSampling {
    pub theta0: f64,
    pub dtheta: f64,
    pub count: usize,
}

impl ThetaSampling {
    pub fn new(r: f64, arc_step: f64) -> Result<Self> {
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::domain(format!("arc radius {r} must be > 1")));
        }
        if !(arc_step > 0.0) {
            return Err(Error::domain(format!("arc step {arc_step} must be > 0")));
        }
        let theta0 = (1.0 / r).asin();
        let dtheta = arc_step / r;
        let span = FRAC_PI_2 - theta0;
        let count = ((span / dtheta).ceil() as usize).max(1);
        Ok(ThetaSampling {
            theta0,
            dtheta,
            count,
        })
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        self.theta0 + k as f64 * self.dtheta
    }
}

/// One quadrature node on a double circle arc, in `f1` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub x: f64,
    pub z1: f64,
    pub weight: f64,
}

/// Quadrature nodes on the four half arcs of the double arc `(x0, r)`.
///
/// For each angle the four points `x0 ± sqrt(r²-1) ± r·cosθ` at height
/// `r·sinθ` are emitted in that order.
pub fn arc_points(x0: f64, r: f64, arc_step: f64) -> Result<Vec<ArcPoint>> {
    let sampling = ThetaSampling::new(r, arc_step)?;
    let offset = (r * r - 1.0).sqrt();
    let weight = r * sampling.dtheta;
    let mut points = Vec::with_capacity(4 * sampling.count);
    for k in 0..sampling.count {
        let theta = sampling.theta(k);
        let (c, z1) = (r * theta.cos(), r * theta.sin());
        for x in [
            x0 + offset + c,
            x0 + offset - c,
            x0 - offset + c,
            x0 - offset - c,
        ] {
            points.push(ArcPoint { x, z1, weight });
        }
    }
    Ok(points)
}

/// Which vertical convention an [`ImageGrid`] row index follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Physical object `f`: row `j` sits at `z = 1 - δ - j`.
    Physical,
    /// Reflected object `f1`: row `j` sits at `z1 = 1 + δ + j`.
    Flipped,
}

/// Square pixel image with unit pixels, row index along depth.
///
/// Pixel centre columns are `x_i = -n_x/2 + 1 + i`. Both frames store the
/// same rows in the same order, because `z1 = 2 - z` maps row `j` of one
/// frame onto row `j` of the other.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    pub values: Array2<f64>,
    pub delta: f64,
    pub frame: Frame,
}

impl ImageGrid {
    pub fn new(values: Array2<f64>, delta: f64, frame: Frame) -> Self {
        ImageGrid {
            values,
            delta,
            frame,
        }
    }

    pub fn zeros(n_x: usize, n_z: usize, delta: f64, frame: Frame) -> Self {
        Self::new(Array2::zeros((n_z, n_x)), delta, frame)
    }

    pub fn n_x(&self) -> usize {
        self.values.ncols()
    }

    pub fn n_z(&self) -> usize {
        self.values.nrows()
    }

    /// First pixel-centre abscissa.
    pub fn x_start(&self) -> f64 {
        x_start(self.n_x())
    }

    pub fn x_coord(&self, i: usize) -> f64 {
        self.x_start() + i as f64
    }

    /// Depth of row `j` in this grid's own frame.
    pub fn z_coord(&self, j: usize) -> f64 {
        match self.frame {
            Frame::Physical => 1.0 - self.delta - j as f64,
            Frame::Flipped => 1.0 + self.delta + j as f64,
        }
    }

    /// Depth of row `j` in the reflected frame, whatever the storage frame.
    pub fn z1_coord(&self, j: usize) -> f64 {
        1.0 + self.delta + j as f64
    }

    /// Bilinear sample of `f1` at `(x, z1)`; zero outside the pixel-centre hull.
    #[inline]
    pub fn sample_f1(&self, x: f64, z1: f64) -> f64 {
        let u = x - self.x_start();
        let v = z1 - 1.0 - self.delta;
        bilinear(&self.values, u, v)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Reinterpret an image in the other vertical frame; an involution.
pub fn flip_frame(img: &ImageGrid) -> ImageGrid {
    let frame = match img.frame {
        Frame::Physical => Frame::Flipped,
        Frame::Flipped => Frame::Physical,
    };
    ImageGrid::new(img.values.clone(), img.delta, frame)
}

pub(crate) fn x_start(n_x: usize) -> f64 {
    -(n_x as f64) / 2.0 + 1.0
}

/// Physical-frame centre of the pixel-centre hull of an `n × n` object.
pub fn box_center(n: usize, delta: f64) -> (f64, f64) {
    let last = (n - 1) as f64;
    (x_start(n) + last / 2.0, 1.0 - delta - last / 2.0)
}

/// Bilinear interpolation at fractional (column `u`, row `v`) indices.
#[inline]
pub(crate) fn bilinear(values: &Array2<f64>, u: f64, v: f64) -> f64 {
    let (rows, cols) = values.dim();
    let max_u = (cols - 1) as f64;
    let max_v = (rows - 1) as f64;
    if !(u >= 0.0 && u <= max_u && v >= 0.0 && v <= max_v) {
        return 0.0;
    }
    let i = (u.floor() as usize).min(cols.saturating_sub(2));
    let j = (v.floor() as usize).min(rows.saturating_sub(2));
    let fu = u - i as f64;
    let fv = v - j as f64;
    if cols == 1 || rows == 1 {
        return values[[j, i]];
    }
    let a = values[[j, i]];
    let b = values[[j, i + 1]];
    let c = values[[j + 1, i]];
    let d = values[[j + 1, i + 1]];
    (a * (1.0 - fu) + b * fu) * (1.0 - fv) + (c * (1.0 - fu) + d * fu) * fv
}
