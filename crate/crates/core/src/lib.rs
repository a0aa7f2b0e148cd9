//! Travel-time tomography in a disk-shaped domain with one convex
//! reflecting obstacle.
//!
//! Sound speed is modeled as a known constant background plus an unknown
//! perturbation; measurements are travel times of rays between boundary
//! points. Besides classical unbroken rays, the simulator supports broken
//! rays that reflect once at the obstacle, either specularly or at a
//! Lambertian (randomly chosen) angle, which models a rough reflector.
//! Reconstruction of the slowness field is by Kaczmarz iteration over the
//! ray-pixel intersection system, and the experiment harness compares the
//! three ray models at a matched measurement budget.

pub mod error;
pub mod experiment;
pub mod forward;
pub mod geometry;
pub mod io;
pub mod phantom;
pub mod rays;
pub mod solver;

pub use error::{Error, Result};
pub use experiment::{ExperimentConfig, Mode, TrialReport};
pub use forward::{Grid, RayRow, ScalarField, SpeedModel};
pub use geometry::{Circle, Point2, Scene, Segment};
pub use phantom::Phantom;
pub use rays::{Ray, RaySetConfig};
pub use solver::{ReconResult, SolverConfig, TravelTimeSystem};
