//! Parameter sweeps: phantom, projection, reconstruction and NMSE for each
//! point of a Cartesian product of settings.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use super::config::SweepConfig;
use super::metrics::nmse;
use crate::error::{Error, Result};
use crate::forward::project;
use crate::geometry::ScanGeometry;
use crate::phantom::{generate_phantom, PhantomSpec};
use crate::recon::{reconstruct, ReconConfig};

pub const CSV_HEADER: &str = "delta,x0max,dx0,rmax,dr,epsilon,nmse,seconds";

/// One row of sweep output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub delta: f64,
    pub geom: ScanGeometry,
    pub epsilon: f64,
    pub nmse: f64,
    pub seconds: f64,
}

impl SweepRecord {
    /// CSV row; floats use the shortest representation that round-trips.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.delta,
            self.geom.x0_max,
            self.geom.delta_x0,
            self.geom.r_max,
            self.geom.delta_r,
            self.epsilon,
            self.nmse,
            self.seconds
        )
    }
}

fn tuple_error(e: Error, delta: f64, geom: &ScanGeometry, epsilon: Option<f64>) -> Error {
    let eps = epsilon.map(|e| format!(" epsilon={e}")).unwrap_or_default();
    let ctx = format!(
        "run delta={delta} x0max={} dx0={} rmax={} dr={}{eps}",
        geom.x0_max, geom.delta_x0, geom.r_max, geom.delta_r
    );
    match e {
        Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
        Error::Config(m) => Error::Config(format!("{ctx}: {m}")),
        Error::Dimension(m) => Error::Dimension(format!("{ctx}: {m}")),
        other => other,
    }
}

/// Run every combination, outermost list first: δ, x0max, Δx0, rmax, Δr, ε.
///
/// The sinogram of each (δ, geometry) pair is shared by its ε runs; the
/// projection time is charged to each of them. Records come back in sweep
/// order whatever order the runs finish in.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let geoms = cfg.geometries();
    let jobs: Vec<(f64, ScanGeometry)> = cfg
        .delta
        .iter()
        .flat_map(|&d| geoms.iter().map(move |g| (d, *g)))
        .collect();

    let per_job = jobs
        .par_iter()
        .map(|&(delta, geom)| -> Result<Vec<SweepRecord>> {
            let spec = PhantomSpec::named(&cfg.phantom, cfg.n, delta)?;
            let truth = generate_phantom(&spec, cfg.n, delta)
                .map_err(|e| tuple_error(e, delta, &geom, None))?;
            let start = Instant::now();
            let sino = project(&truth, &geom).map_err(|e| tuple_error(e, delta, &geom, None))?;
            let projection = start.elapsed().as_secs_f64();
            cfg.epsilon
                .iter()
                .map(|&epsilon| {
                    let recon_cfg = ReconConfig {
                        epsilon,
                        pad_factor: cfg.pad_factor,
                        ..ReconConfig::default()
                    };
                    let start = Instant::now();
                    let rec = reconstruct(&sino, cfg.n, delta, &recon_cfg)
                        .map_err(|e| tuple_error(e, delta, &geom, Some(epsilon)))?;
                    let seconds = projection + start.elapsed().as_secs_f64();
                    Ok(SweepRecord {
                        delta,
                        geom,
                        epsilon,
                        nmse: nmse(&rec, &truth)?,
                        seconds,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

pub fn write_csv(records: &[SweepRecord], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
