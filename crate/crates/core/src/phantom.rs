//! Deterministic test objects.
//!
//! Disks, points and boxes are given in physical coordinates (`z < 1`).
//! The Derenzo layout is placed relative to the centre of the image box, so
//! the same object can be moved with `delta`.

use std::f64::consts::PI;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::geometry::{box_center, x_start, Frame, ImageGrid};

/// Smallest supported image side.
pub const MIN_SIZE: usize = 16;

/// A filled disk in physical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center_x: f64,
    pub center_z: f64,
    pub radius: f64,
    pub intensity: f64,
}

/// Six 60° sectors of a disk, each filled with equal disks on a triangular
/// lattice. Radii are fractions of the image side.
#[derive(Debug, Clone, PartialEq)]
pub struct DerenzoLayout {
    pub outer_radius_fraction: f64,
    pub sector_disk_radii: [f64; 6],
    pub spacing_factor: f64,
}

impl Default for DerenzoLayout {
    fn default() -> Self {
        DerenzoLayout {
            outer_radius_fraction: 0.42,
            sector_disk_radii: [0.02, 0.025, 0.03, 0.035, 0.045, 0.06],
            spacing_factor: 4.0,
        }
    }
}

impl DerenzoLayout {
    /// Disks of the layout for an `n × n` image, relative to the box centre.
    pub fn disks(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let side = n as f64;
        let outer = self.outer_radius_fraction * side;
        let mut out = Vec::new();
        for (s, frac) in self.sector_disk_radii.iter().enumerate() {
            let radius = frac * side;
            let spacing = self.spacing_factor * radius;
            let bisector = (60.0 * s as f64 + 30.0).to_radians();
            let e1 = unit(bisector - PI / 6.0);
            let e2 = unit(bisector + PI / 6.0);
            // apex disk keeps one pixel of clearance from both sector edges
            let apex = 2.0 * (radius + 1.0);
            let origin = (apex * bisector.cos(), apex * bisector.sin());
            let rows = (outer / spacing).ceil() as usize + 1;
            for i in 0..=rows {
                for j in 0..=rows {
                    let x = origin.0 + spacing * (i as f64 * e1.0 + j as f64 * e2.0);
                    let z = origin.1 + spacing * (i as f64 * e1.1 + j as f64 * e2.1);
                    if x.hypot(z) + radius <= outer {
                        out.push((x, z, radius));
                    }
                }
            }
        }
        out
    }
}

fn unit(angle: f64) -> (f64, f64) {
    (angle.cos(), angle.sin())
}

/// Description of a test object.
#[derive(Debug, Clone, PartialEq)]
pub enum PhantomSpec {
    Derenzo(DerenzoLayout),
    Disks(Vec<Disk>),
    Point {
        x: f64,
        z: f64,
        intensity: f64,
    },
    Box {
        x_lo: f64,
        x_hi: f64,
        z_lo: f64,
        z_hi: f64,
        intensity: f64,
    },
}

impl PhantomSpec {
    pub fn derenzo() -> Self {
        PhantomSpec::Derenzo(DerenzoLayout::default())
    }

    /// One disk centred in the `n × n` image box at offset `delta`.
    pub fn centered_disk(n: usize, delta: f64, radius: f64, intensity: f64) -> Self {
        let (cx, cz) = box_center(n, delta);
        PhantomSpec::Disks(vec![Disk {
            center_x: cx,
            center_z: cz,
            radius,
            intensity,
        }])
    }

    /// Three disks of different sizes and intensities around the box centre.
    pub fn three_disks(n: usize, delta: f64) -> Self {
        let (cx, cz) = box_center(n, delta);
        let side = n as f64;
        let disk = |dx: f64, dz: f64, radius: f64, intensity: f64| Disk {
            center_x: cx + dx * side,
            center_z: cz + dz * side,
            radius: radius * side,
            intensity,
        };
        PhantomSpec::Disks(vec![
            disk(-0.25, 0.125, 0.1, 1.0),
            disk(0.2, 0.0, 0.125, 0.6),
            disk(0.0, -0.25, 0.08, 1.5),
        ])
    }

    /// Named presets: `derenzo`, `disk` (radius n/8), `three-disks`, `point`
    /// (box centre).
    pub fn named(name: &str, n: usize, delta: f64) -> Result<Self> {
        match name {
            "derenzo" => Ok(Self::derenzo()),
            "disk" => Ok(Self::centered_disk(n, delta, n as f64 / 8.0, 1.0)),
            "three-disks" => Ok(Self::three_disks(n, delta)),
            "point" => {
                let (x, z) = box_center(n, delta);
                Ok(PhantomSpec::Point {
                    x,
                    z,
                    intensity: 1.0,
                })
            }
            other => Err(Error::config(format!(
                "unknown phantom type {other:?} (expected derenzo, disk, three-disks or point)"
            ))),
        }
    }
}

/// Rasterise `spec` onto an `n × n` physical-frame grid with gap `delta`.
///
/// A pixel belongs to a disk iff its centre does. Every feature must keep one
/// pixel of clearance from the border of the grid.
pub fn generate_phantom(spec: &PhantomSpec, n: usize, delta: f64) -> Result<ImageGrid> {
    if n < MIN_SIZE {
        return Err(Error::config(format!("image side {n} below {MIN_SIZE}")));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::config(format!("delta must be >= 0, got {delta}")));
    }
    let mut img = ImageGrid::zeros(n, n, delta, Frame::Physical);
    let bounds = Bounds::new(n, delta);

    match spec {
        PhantomSpec::Derenzo(layout) => {
            if !(layout.spacing_factor >= 2.0) {
                return Err(Error::config("derenzo spacing factor must be >= 2"));
            }
            let (cx, cz) = box_center(n, delta);
            for (dx, dz, radius) in layout.disks(n) {
                let disk = Disk {
                    center_x: cx + dx,
                    center_z: cz + dz,
                    radius,
                    intensity: 1.0,
                };
                paint_disk(&mut img.values, &bounds, &disk)?;
            }
        }
        PhantomSpec::Disks(disks) => {
            for disk in disks {
                paint_disk(&mut img.values, &bounds, disk)?;
            }
        }
        &PhantomSpec::Point { x, z, intensity } => {
            check_intensity(intensity)?;
            bounds.check(x, x, z, z, "point")?;
            let i = (x - bounds.x0).round() as usize;
            let j = (bounds.z0 - z).round() as usize;
            img.values[[j, i]] = intensity;
        }
        &PhantomSpec::Box {
            x_lo,
            x_hi,
            z_lo,
            z_hi,
            intensity,
        } => {
            check_intensity(intensity)?;
            if !(x_lo <= x_hi && z_lo <= z_hi) {
                return Err(Error::config("box bounds are inverted"));
            }
            bounds.check(x_lo, x_hi, z_lo, z_hi, "box")?;
            for ((j, i), v) in img.values.indexed_iter_mut() {
                let (x, z) = (bounds.x0 + i as f64, bounds.z0 - j as f64);
                if (x_lo..=x_hi).contains(&x) && (z_lo..=z_hi).contains(&z) {
                    *v = intensity;
                }
            }
        }
    }
    Ok(img)
}

struct Bounds {
    x0: f64,
    z0: f64,
    last: f64,
}

impl Bounds {
    fn new(n: usize, delta: f64) -> Self {
        Bounds {
            x0: x_start(n),
            z0: 1.0 - delta,
            last: (n - 1) as f64,
        }
    }

    fn check(&self, x_lo: f64, x_hi: f64, z_lo: f64, z_hi: f64, what: &str) -> Result<()> {
        let inside = x_lo >= self.x0 + 1.0
            && x_hi <= self.x0 + self.last - 1.0
            && z_hi <= self.z0 - 1.0
            && z_lo >= self.z0 - self.last + 1.0;
        if inside {
            Ok(())
        } else {
            Err(Error::config(format!(
                "{what} [{x_lo}, {x_hi}] x [{z_lo}, {z_hi}] leaves the image box \
                 x in [{}, {}], z in [{}, {}] (1 px margin)",
                self.x0 + 1.0,
                self.x0 + self.last - 1.0,
                self.z0 - self.last + 1.0,
                self.z0 - 1.0
            )))
        }
    }
}

fn check_intensity(intensity: f64) -> Result<()> {
    if intensity >= 0.0 && intensity.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!(
            "intensity must be >= 0, got {intensity}"
        )))
    }
}

fn paint_disk(values: &mut Array2<f64>, bounds: &Bounds, disk: &Disk) -> Result<()> {
    if !(disk.radius > 0.0) {
        return Err(Error::config(format!(
            "disk radius must be > 0, got {}",
            disk.radius
        )));
    }
    check_intensity(disk.intensity)?;
    let Disk {
        center_x: cx,
        center_z: cz,
        radius,
        ..
    } = *disk;
    bounds.check(cx - radius, cx + radius, cz - radius, cz + radius, "disk")?;
    let r2 = radius * radius;
    for ((j, i), v) in values.indexed_iter_mut() {
        let dx = bounds.x0 + i as f64 - cx;
        let dz = bounds.z0 - j as f64 - cz;
        if dx * dx + dz * dz <= r2 {
            *v = disk.intensity;
        }
    }
    Ok(())
}
