//! Bessel J0, the regularised arc filter and the Hankel identity of the
//! back-projection.
//!
//!     cargo run --release --example spectral_tools

use std::f64::consts::PI;

use ndarray::Array2;
use rustfft::num_complex::Complex64;

use cst_arcs::recon::{backproject_grid, FilteredSinogram};
use cst_arcs::spectral::{bessel_j0, hankel_oracle};
use cst_arcs::{ScanGeometry, Sinogram};

fn main() -> cst_arcs::Result<()> {
    for x in [0.0, 1.0, 2.404825557695773, 10.0, 100.0] {
        println!("J0({x}) = {:+.12}", bessel_j0(x));
    }

    let eps: f64 = 0.01;
    let r: f64 = 5.0;
    let a = (r * r - 1.0).sqrt();
    println!("\nfilter at r = {r}, eps = {eps}:");
    for k in 0..6 {
        let xi = k as f64 * PI / (4.0 * a);
        let c = (xi * a).cos();
        println!(
            "  xi = {xi:.4}: {:+.5}",
            c / (eps * eps + c * c) / (2.0 * r)
        );
    }

    // one smooth bump in (x0, r)
    let sino = Sinogram::zeros(&ScanGeometry::new(31.5, 1.0, 33.0, 1.0))?;
    let values = Array2::from_shape_fn(sino.values.dim(), |(k, l)| {
        let (x0, r) = (sino.x0_axis[k], sino.r_axis[l]);
        (-(x0 * x0 + (r - 16.0).powi(2)) / 12.5).exp()
    });
    let g = FilteredSinogram {
        values,
        x0_axis: sino.x0_axis,
        r_axis: sino.r_axis,
        dx0: 1.0,
        dr: 1.0,
    };
    let bp = backproject_grid(&g, 140, 69, -35.0);
    println!("\n2D transform of the back-projection vs 2pi x Hankel transform:");
    for (xi, sigma) in [(0.0, 0.0), (0.2, 0.1), (0.5, -0.3), (0.7, 0.7)] {
        let mut ft = Complex64::new(0.0, 0.0);
        for ((j, i), &v) in bp.values.indexed_iter() {
            ft += Complex64::from_polar(v, -(xi * bp.x_coord(i) + sigma * bp.z1_coord(j)));
        }
        let h = hankel_oracle(&g, xi, f64::hypot(xi, sigma)) * (2.0 * PI);
        println!("  ({xi:.1}, {sigma:+.1}): {:+.4} vs {:+.4}", ft.re, h.re);
    }
    Ok(())
}
