//! Scattering angle, arc radius and scattered energy for a few detector
//! energies, plus the sample layout of one double arc.
//!
//!     cargo run --release --example arc_geometry

use std::f64::consts::PI;

use cst_arcs::geometry::{arc_points, compton_energy, radius_from_scatter_angle, ThetaSampling};

fn main() -> cst_arcs::Result<()> {
    let e0 = 140.5; // keV, Tc-99m line
    println!("{:>10} {:>10} {:>12}", "omega/deg", "radius", "E_out/keV");
    for deg in [95.0, 110.0, 130.0, 150.0, 170.0] {
        let omega = deg * PI / 180.0;
        let r = radius_from_scatter_angle(omega)?;
        println!("{deg:>10.1} {r:>10.4} {:>12.3}", compton_energy(e0, omega)?);
    }

    let (x0, r, step) = (0.0, 12.0, 0.5);
    let sampling = ThetaSampling::new(r, step)?;
    let points = arc_points(x0, r, step)?;
    let length: f64 = points.iter().map(|p| p.weight).sum();
    println!(
        "\narc x0={x0} r={r}: {} angles from {:.4} rad, {} samples, summed weight {length:.3}",
        sampling.count,
        sampling.theta0,
        points.len()
    );
    println!(
        "four half arcs of length {:.3} each",
        r * (PI / 2.0 - (1.0 / r).asin())
    );
    for p in points.iter().step_by(points.len() / 8) {
        println!("  x={:>8.3} z1={:>7.3}", p.x, p.z1);
    }
    Ok(())
}
