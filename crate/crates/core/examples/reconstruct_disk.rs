//! End-to-end run on a single disk with each depth domain of the inversion.
//!
//!     cargo run --release --example reconstruct_disk

use cst_arcs::geometry::box_center;
use cst_arcs::harness::{nmse, render};
use cst_arcs::recon::DepthDomain;
use cst_arcs::{generate_phantom, project, reconstruct, PhantomSpec, ReconConfig, ScanGeometry};

fn main() -> cst_arcs::Result<()> {
    let (n, delta, radius) = (128, 25.0, 16.0);
    let truth = generate_phantom(&PhantomSpec::centered_disk(n, delta, radius, 1.0), n, delta)?;
    let sino = project(&truth, &ScanGeometry::standard(n))?;
    let (cx, cz) = box_center(n, delta);

    for domain in [
        DepthDomain::Window,
        DepthDomain::FromDetector,
        DepthDomain::Mirrored,
    ] {
        let cfg = ReconConfig {
            domain,
            ..ReconConfig::default()
        };
        let rec = reconstruct(&sino, n, delta, &cfg)?;
        let inner: Vec<f64> = rec
            .values
            .indexed_iter()
            .filter(|((j, i), _)| {
                (rec.x_coord(*i) - cx).hypot(rec.z_coord(*j) - cz) <= radius / 2.0
            })
            .map(|(_, v)| *v)
            .collect();
        let mean = inner.iter().sum::<f64>() / inner.len() as f64;
        println!(
            "{:<14} NMSE {:.4}  inner mean {mean:.3}",
            format!("{domain:?}"),
            nmse(&rec, &truth)?
        );
        render(&rec.values, format!("disk_{domain:?}.pgm").to_lowercase())?;
    }
    Ok(())
}
