//! Generate the preset phantoms, write them as grid files and PGM renders.
//!
//!     cargo run --release --example phantoms -- [out_dir]

use std::path::PathBuf;

use cst_arcs::harness::{render, write_grid};
use cst_arcs::{generate_phantom, PhantomSpec};

fn main() -> cst_arcs::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "phantoms".into()));
    std::fs::create_dir_all(&out)?;
    let (n, delta) = (128, 51.0);
    for name in ["derenzo", "disk", "three-disks", "point"] {
        let img = generate_phantom(&PhantomSpec::named(name, n, delta)?, n, delta)?;
        let filled = img.values.iter().filter(|&&v| v > 0.0).count();
        write_grid(&img.clone().into(), out.join(format!("{name}.arcg")))?;
        render(&img.values, out.join(format!("{name}.pgm")))?;
        println!(
            "{name:<12} {filled:>6} nonzero pixels, z in [{}, {}]",
            img.z_coord(n - 1),
            img.z_coord(0)
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}
