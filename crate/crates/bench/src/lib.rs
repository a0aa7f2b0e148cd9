//! Benchmark-only crate; see the `benches/` targets.

use brt_core::experiment::{ExperimentConfig, Mode};
use brt_core::forward::{assemble_system, travel_time, Grid};
use brt_core::phantom::Phantom;
use brt_core::rays::{self, Ray, RaySetConfig};
use brt_core::solver::TravelTimeSystem;
use brt_core::{Point2, Scene};

/// Benchmark fixture: a reduced Lambertian setup that assembles in well under
/// a second but keeps desk-scale row sparsity.
pub struct Fixture {
    pub scene: Scene,
    pub grid: Grid,
    pub rays: Vec<Ray>,
    pub system: TravelTimeSystem,
}

pub fn fixture(n_rays: usize) -> Fixture {
    let config = ExperimentConfig {
        grid_nx: 32,
        grid_ny: 32,
        total_rays: n_rays,
        ..ExperimentConfig::default()
    };
    let scene = config.scene().expect("bench scene");
    let grid = config.grid();
    let (n_broken, n_unbroken) = config.ray_counts(Mode::BrtLambertian);
    let ray_config = RaySetConfig {
        n_transmitters: config.n_transmitters,
        n_receivers: config.n_receivers,
        n_hits: config.n_hits,
        n_broken,
        n_unbroken,
        seed: config.seed,
    };
    let mut rng = ray_config.rng();
    let mut list = rays::generate_lambertian(&scene, &ray_config, &mut rng).expect("broken rays");
    list.extend(rays::generate_unbroken(&scene, &ray_config, &mut rng).expect("unbroken rays"));
    rays::shuffle_rays(&mut list, &mut rng);

    let midpoint = Point2::new(
        0.5 * (grid.origin.x + grid.max_corner().x),
        0.5 * (grid.origin.y + grid.max_corner().y),
    );
    let phantom = Phantom::new(config.phantom_amplitude, midpoint);
    let step = grid.pixel / 10.0;
    let times: Vec<f64> = list.iter().map(|ray| travel_time(&phantom, ray, step)).collect();
    let system = assemble_system(&grid, &list, &times).expect("assemble");
    Fixture { scene, grid, rays: list, system }
}
