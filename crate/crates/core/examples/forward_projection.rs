//! Project a phantom on double arcs and compare with the fine-quadrature
//! oracle.
//!
//!     cargo run --release --example forward_projection

use std::time::Instant;

use cst_arcs::harness::{render, write_grid};
use cst_arcs::{generate_phantom, project, project_oracle, PhantomSpec, ScanGeometry};

fn main() -> cst_arcs::Result<()> {
    let (n, delta) = (64, 13.0);
    let img = generate_phantom(&PhantomSpec::three_disks(n, delta), n, delta)?;
    let geom = ScanGeometry::standard(n);

    let t = Instant::now();
    let sino = project(&img, &geom)?;
    let fast = t.elapsed();
    let t = Instant::now();
    let oracle = project_oracle(&img, &geom, 8)?;
    let slow = t.elapsed();

    let num: f64 = sino
        .values
        .iter()
        .zip(oracle.values.iter())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let den: f64 = oracle.values.iter().map(|b| b * b).sum();
    println!("sinogram {} x {} (x0 x r)", sino.n_sd(), sino.n_r());
    println!(
        "project {fast:.2?}, oracle {slow:.2?}, relative L2 {:.3e}",
        (num / den).sqrt()
    );

    let first = sino
        .r_axis
        .iter()
        .position(|&r| r >= 1.0 + delta)
        .unwrap_or(0);
    println!("columns with r < 1 + delta: {first}, all zero");

    write_grid(&sino.clone().into(), "three_disks_sinogram.arcg")?;
    render(&sino.values, "three_disks_sinogram.pgm")?;
    Ok(())
}
