//! Simulation and Fourier-domain reconstruction for translational Compton
//! scattering tomography, where data are integrals of the object over double
//! circle arcs.
//!
//! Modules, bottom-up:
//!
//! - [`geometry`]: frames, scan grids and arc sampling
//! - [`phantom`]: deterministic test objects
//! - [`forward`]: the double-arc projector and its quadrature oracle
//! - [`spectral`]: FFTs with physical frequency axes, filters, Bessel J0
//! - [`recon`]: the filter / back-project / ramp pipeline
//! - [`harness`]: NMSE, grid files, PGM rendering, configs and sweeps

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forward;
pub mod geometry;
pub mod harness;
pub mod phantom;
pub mod recon;
pub mod spectral;

pub use error::{Error, Result};
pub use forward::{project, project_oracle, Sinogram};
pub use geometry::{Frame, ImageGrid, ScanGeometry};
pub use phantom::{generate_phantom, PhantomSpec};
pub use recon::{reconstruct, ReconConfig};
