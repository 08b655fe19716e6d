//! `ARCG` binary grids.
//!
//! Layout, little-endian: magic `ARCG`, `u32` version 1, `u8` kind
//! (0 image, 1 sinogram), `u32` rows, `u32` cols, four `f64` axis fields
//! (axis 0 start/step, axis 1 start/step), then `rows·cols` `f64` values in
//! row-major order.
//!
//! Images store depth on axis 0 (step -1 in the physical frame, +1 in the
//! reflected one) and abscissa on axis 1. Sinograms store `x0` on axis 0 and
//! `r` on axis 1. The arc step of a sinogram is not stored; reading one back
//! gives the default.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::forward::Sinogram;
use crate::geometry::{build_scan_grid, x_start, Frame, ImageGrid, ScanGeometry};

pub const MAGIC: &[u8; 4] = b"ARCG";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 49;

const KIND_IMAGE: u8 = 0;
const KIND_SINOGRAM: u8 = 1;

/// Contents of a grid file.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Image(ImageGrid),
    Sinogram(Sinogram),
}

impl From<ImageGrid> for Grid {
    fn from(img: ImageGrid) -> Self {
        Grid::Image(img)
    }
}

impl From<Sinogram> for Grid {
    fn from(s: Sinogram) -> Self {
        Grid::Sinogram(s)
    }
}

impl Grid {
    pub fn values(&self) -> &Array2<f64> {
        match self {
            Grid::Image(g) => &g.values,
            Grid::Sinogram(s) => &s.values,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Grid::Image(_) => "image",
            Grid::Sinogram(_) => "sinogram",
        }
    }

    pub fn into_image(self) -> Result<ImageGrid> {
        match self {
            Grid::Image(g) => Ok(g),
            Grid::Sinogram(_) => Err(Error::config("expected an image grid, found a sinogram")),
        }
    }

    pub fn into_sinogram(self) -> Result<Sinogram> {
        match self {
            Grid::Sinogram(s) => Ok(s),
            Grid::Image(_) => Err(Error::config("expected a sinogram, found an image grid")),
        }
    }
}

pub fn encode(grid: &Grid) -> Vec<u8> {
    let (kind, axes) = match grid {
        Grid::Image(img) => {
            let step = match img.frame {
                Frame::Physical => -1.0,
                Frame::Flipped => 1.0,
            };
            (KIND_IMAGE, [img.z_coord(0), step, img.x_start(), 1.0])
        }
        Grid::Sinogram(s) => {
            let x0 = s.x0_axis.first().copied().unwrap_or(0.0);
            let r = s.r_axis.first().copied().unwrap_or(1.0 + s.geom.delta_r);
            (KIND_SINOGRAM, [x0, s.geom.delta_x0, r, s.geom.delta_r])
        }
    };
    let values = grid.values();
    let (rows, cols) = values.dim();
    let mut out = Vec::with_capacity(HEADER_LEN + rows * cols * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(kind);
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    for a in axes {
        out.extend_from_slice(&a.to_le_bytes());
    }
    for v in values.iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset: offset as u64,
        message: message.into(),
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const K: usize>(&mut self, what: &str) -> Result<[u8; K]> {
        let end = self.pos + K;
        let slice = self.bytes.get(self.pos..end).ok_or_else(|| {
            format_err(
                self.bytes.len(),
                format!("truncated {what}: need {K} bytes at offset {}", self.pos),
            )
        })?;
        self.pos = end;
        Ok(slice.try_into().expect("slice length"))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        self.take::<4>(what).map(u32::from_le_bytes)
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        self.take::<8>(what).map(f64::from_le_bytes)
    }
}

pub fn decode(bytes: &[u8]) -> Result<Grid> {
    let mut rd = Reader { bytes, pos: 0 };
    let magic = rd.take::<4>("magic")?;
    if &magic != MAGIC {
        return Err(format_err(
            0,
            format!("bad magic {magic:?}, expected \"ARCG\""),
        ));
    }
    let version = rd.u32("version")?;
    if version != VERSION {
        return Err(format_err(
            4,
            format!("unsupported version {version}, expected {VERSION}"),
        ));
    }
    let kind = rd.take::<1>("kind")?[0];
    if kind > KIND_SINOGRAM {
        return Err(format_err(8, format!("unknown kind {kind}")));
    }
    let rows = rd.u32("rows")? as usize;
    let cols = rd.u32("cols")? as usize;
    let mut axes = [0.0; 4];
    for a in axes.iter_mut() {
        *a = rd.f64("axis field")?;
    }
    if let Some(bad) = axes.iter().position(|a| !a.is_finite()) {
        return Err(format_err(17 + 8 * bad, "non-finite axis field"));
    }

    let payload = rows
        .checked_mul(cols)
        .and_then(|c| c.checked_mul(8))
        .ok_or_else(|| format_err(9, "rows x cols overflows"))?;
    let have = bytes.len() - HEADER_LEN;
    if have < payload {
        return Err(format_err(
            bytes.len(),
            format!("truncated payload: {have} of {payload} bytes"),
        ));
    }
    if have > payload {
        return Err(format_err(
            HEADER_LEN + payload,
            format!("{} trailing bytes after payload", have - payload),
        ));
    }
    let values = Array2::from_shape_fn((rows, cols), |(j, i)| {
        let at = HEADER_LEN + 8 * (j * cols + i);
        f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
    });

    match kind {
        KIND_IMAGE => image_from(values, axes),
        _ => sinogram_from(values, axes),
    }
}

fn image_from(values: Array2<f64>, [z0, dz, x0, dx]: [f64; 4]) -> Result<Grid> {
    let (delta, frame) = match dz {
        -1.0 => (1.0 - z0, Frame::Physical),
        1.0 => (z0 - 1.0, Frame::Flipped),
        _ => {
            return Err(format_err(
                25,
                format!("image depth step must be -1 or +1, got {dz}"),
            ))
        }
    };
    if dx != 1.0 || x0 != x_start(values.ncols()) {
        return Err(format_err(
            33,
            format!(
                "image abscissa axis must start at {} with step 1",
                x_start(values.ncols())
            ),
        ));
    }
    Ok(Grid::Image(ImageGrid::new(values, delta, frame)))
}

fn sinogram_from(values: Array2<f64>, [x0, dx0, r0, dr]: [f64; 4]) -> Result<Grid> {
    let (n_sd, n_r) = values.dim();
    if n_sd == 0 || n_r == 0 {
        return Err(format_err(
            9,
            "sinogram must have at least one row and column",
        ));
    }
    let geom = ScanGeometry::new(
        (n_sd - 1) as f64 * dx0 / 2.0,
        dx0,
        1.0 + n_r as f64 * dr,
        dr,
    );
    let axes = build_scan_grid(&geom).map_err(|e| format_err(17, e.to_string()))?;
    if axes.x0.len() != n_sd || axes.x0[0] != x0 {
        return Err(format_err(17, "sensor axis is not symmetric about zero"));
    }
    if axes.r.len() != n_r || axes.r[0] != r0 {
        return Err(format_err(
            33,
            format!("radius axis must start at 1 + dr = {}", 1.0 + dr),
        ));
    }
    Ok(Grid::Sinogram(Sinogram {
        values,
        x0_axis: axes.x0,
        r_axis: axes.r,
        geom,
    }))
}

pub fn write_grid(grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode(grid))?;
    Ok(())
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<Grid> {
    decode(&fs::read(path)?)
}
