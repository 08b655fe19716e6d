//! Gap sweep on the Derenzo phantom, CSV on stdout.
//!
//!     cargo run --release --example parameter_sweep

use cst_arcs::harness::{run_sweep, write_csv, KeyValues, SweepConfig};

fn main() -> cst_arcs::Result<()> {
    let kv = KeyValues::parse(
        "type = derenzo\n\
         n = 128\n\
         delta = 1, 26, 51\n\
         x0max = 3N\n\
         rmax = 3N\n",
    )?;
    let cfg = SweepConfig::from_key_values(&kv)?;
    eprintln!("{} runs", cfg.run_count());
    let records = run_sweep(&cfg)?;
    write_csv(&records, std::io::stdout().lock())
}
