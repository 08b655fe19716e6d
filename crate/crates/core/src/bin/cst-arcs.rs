//! Command-line front end: phantoms, projection, reconstruction, NMSE,
//! rendering and sweeps. Failures print one `error: <kind>: <message>` line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cst_arcs::harness::{self, Grid, KeyValues, SweepConfig};
use cst_arcs::{generate_phantom, project, reconstruct, Error, Result};

#[derive(Parser)]
#[command(
    name = "cst-arcs",
    version,
    about = "Double-arc Radon transform toolkit"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key=value file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Size {
    /// Image side in pixels
    #[arg(long)]
    n: Option<String>,
    /// Gap between the detector line and the object, in pixels
    #[arg(long)]
    delta: Option<String>,
}

#[derive(Args)]
struct Scan {
    /// Sensor half range, e.g. 384 or 3N
    #[arg(long)]
    x0max: Option<String>,
    #[arg(long)]
    dx0: Option<String>,
    /// Largest arc radius, e.g. 384 or 3N
    #[arg(long)]
    rmax: Option<String>,
    #[arg(long)]
    dr: Option<String>,
    #[arg(long = "arc-step")]
    arc_step: Option<String>,
}

#[derive(Args)]
struct Recon {
    #[arg(long)]
    epsilon: Option<String>,
    /// Zero-padding factor of the transforms
    #[arg(long)]
    pad: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterise a test object into an image grid file
    Phantom {
        #[command(flatten)]
        size: Size,
        /// derenzo, disk, three-disks or point
        #[arg(long = "type")]
        kind: Option<String>,
    },
    /// Project an image grid file into a sinogram file
    Forward {
        input: PathBuf,
        #[command(flatten)]
        scan: Scan,
    },
    /// Reconstruct an image grid file from a sinogram file
    Reconstruct {
        input: PathBuf,
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        recon: Recon,
    },
    /// Print the NMSE between two image grid files
    Nmse {
        estimate: PathBuf,
        reference: PathBuf,
    },
    /// Render a grid file as a binary PGM
    Render { input: PathBuf },
    /// Run a parameter sweep and write CSV (stdout without -o)
    Sweep {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        scan: Scan,
        #[command(flatten)]
        recon: Recon,
        #[arg(long = "type")]
        kind: Option<String>,
    },
}

fn overlay(kv: &mut KeyValues, pairs: &[(&str, &Option<String>)]) -> Result<()> {
    for (key, value) in pairs {
        if let Some(v) = value {
            kv.set(key, v.as_str())?;
        }
    }
    Ok(())
}

impl Size {
    fn pairs(&self) -> [(&str, &Option<String>); 2] {
        [("n", &self.n), ("delta", &self.delta)]
    }
}

impl Scan {
    fn pairs(&self) -> [(&str, &Option<String>); 5] {
        [
            ("x0max", &self.x0max),
            ("dx0", &self.dx0),
            ("rmax", &self.rmax),
            ("dr", &self.dr),
            ("arc-step", &self.arc_step),
        ]
    }
}

impl Recon {
    fn pairs(&self) -> [(&str, &Option<String>); 2] {
        [("epsilon", &self.epsilon), ("pad", &self.pad)]
    }
}

fn output_path(common: &Common, kv: &KeyValues) -> Option<PathBuf> {
    common
        .output
        .clone()
        .or_else(|| kv.get("output").map(PathBuf::from))
}

fn require_output(common: &Common, kv: &KeyValues) -> Result<PathBuf> {
    output_path(common, kv).ok_or_else(|| Error::Config("missing -o/--output".into()))
}

fn run(common: Common, command: Command) -> Result<()> {
    let mut kv = match &common.config {
        Some(path) => KeyValues::load(path)?,
        None => KeyValues::default(),
    };
    match command {
        Command::Phantom { size, kind } => {
            overlay(&mut kv, &size.pairs())?;
            overlay(&mut kv, &[("type", &kind)])?;
            let run = SweepConfig::from_key_values(&kv)?.single()?;
            let img = generate_phantom(&run.phantom_spec()?, run.n, run.delta)?;
            harness::write_grid(&img.into(), require_output(&common, &kv)?)
        }
        Command::Forward { input, scan } => {
            let img = harness::read_grid(&input)?.into_image()?;
            overlay(&mut kv, &scan.pairs())?;
            kv.set("n", img.n_x().to_string())?;
            kv.set("delta", img.delta.to_string())?;
            let run = SweepConfig::from_key_values(&kv)?.single()?;
            let physical = match img.frame {
                cst_arcs::Frame::Physical => img,
                cst_arcs::Frame::Flipped => cst_arcs::geometry::flip_frame(&img),
            };
            let sino = project(&physical, &run.geom)?;
            harness::write_grid(&sino.into(), require_output(&common, &kv)?)
        }
        Command::Reconstruct { input, size, recon } => {
            let sino = harness::read_grid(&input)?.into_sinogram()?;
            overlay(&mut kv, &size.pairs())?;
            overlay(&mut kv, &recon.pairs())?;
            let run = SweepConfig::from_key_values(&kv)?.single()?;
            let img = reconstruct(&sino, run.n, run.delta, &run.recon)?;
            harness::write_grid(&img.into(), require_output(&common, &kv)?)
        }
        Command::Nmse {
            estimate,
            reference,
        } => {
            let a = harness::read_grid(estimate)?.into_image()?;
            let b = harness::read_grid(reference)?.into_image()?;
            println!("{}", harness::nmse(&a, &b)?);
            Ok(())
        }
        Command::Render { input } => {
            let grid: Grid = harness::read_grid(&input)?;
            harness::render(grid.values(), require_output(&common, &kv)?)
        }
        Command::Sweep {
            size,
            scan,
            recon,
            kind,
        } => {
            overlay(&mut kv, &size.pairs())?;
            overlay(&mut kv, &scan.pairs())?;
            overlay(&mut kv, &recon.pairs())?;
            overlay(&mut kv, &[("type", &kind)])?;
            let cfg = SweepConfig::from_key_values(&kv)?;
            let records = harness::run_sweep(&cfg)?;
            match output_path(&common, &kv) {
                Some(path) => harness::write_csv(&records, fs::File::create(path)?),
                None => harness::write_csv(&records, io::stdout().lock()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let msg = first.trim_start_matches("error: ");
            let _ = writeln!(io::stderr(), "error: usage: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli.common, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(io::stderr(), "error: {}: {msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}
