//! Ground-truth slowness phantom, bridges to the speed model, and the
//! reconstruction error metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{Grid, ScalarField, SpeedModel};
use crate::geometry::{Point2, Scene, GEOM_TOL};

/// Radial slowness field `amplitude * |p - center|`, vanishing only at its
/// center.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phantom {
    pub amplitude: f64,
    pub center: Point2,
}

impl Phantom {
    pub fn new(amplitude: f64, center: Point2) -> Self {
        Phantom { amplitude, center }
    }

    pub fn eval(&self, p: Point2) -> f64 {
        self.amplitude * p.dist(self.center)
    }
}

impl ScalarField for Phantom {
    fn eval(&self, p: Point2) -> f64 {
        Phantom::eval(self, p)
    }
}

/// Speed model whose slowness reproduces `slowness` exactly: the
/// perturbation is `1/slowness - background`.
pub fn speed_from_slowness<F: ScalarField>(
    slowness: F,
    background: f64,
) -> SpeedModel<impl ScalarField> {
    SpeedModel {
        background,
        epsilon: move |p: Point2| slowness.eval(p).recip() - background,
    }
}

/// Speed model for a phantom slowness. The phantom must be strictly
/// positive on the reconstruction domain, so its zero has to lie strictly
/// inside the obstacle or outside the observation disk.
pub fn phantom_to_speed(
    phantom: &Phantom,
    background: f64,
    scene: &Scene,
) -> Result<SpeedModel<impl ScalarField>> {
    if phantom.amplitude <= 0.0 {
        return Err(Error::NonPositivePhantom);
    }
    let zero = phantom.center;
    let in_outer = zero.dist(scene.outer.center) <= scene.outer.radius + GEOM_TOL;
    let in_obstacle = zero.dist(scene.obstacle.center) < scene.obstacle.radius - GEOM_TOL;
    if in_outer && !in_obstacle {
        return Err(Error::NonPositivePhantom);
    }
    Ok(speed_from_slowness(*phantom, background))
}

/// Flat indices of the pixels whose centers lie strictly between the
/// obstacle and the observation boundary; the error metric is restricted
/// to these.
pub fn omega_mask(grid: &Grid, scene: &Scene) -> Vec<usize> {
    let mut mask = Vec::new();
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let c = grid.center(ix, iy);
            if scene.outer.contains(c) && !scene.obstacle.contains(c)
                && c.dist(scene.obstacle.center) > scene.obstacle.radius
            {
                mask.push(grid.index(ix, iy));
            }
        }
    }
    mask
}

/// Mean squared deviation of the reconstruction from the phantom over the
/// masked pixel centers.
pub fn recon_error(
    f_hat: &[f64],
    phantom: &Phantom,
    grid: &Grid,
    mask: &[usize],
) -> Result<f64> {
    assert_eq!(f_hat.len(), grid.n_pixels(), "one value per pixel");
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let sum: f64 = mask
        .iter()
        .map(|&i| {
            let d = f_hat[i] - phantom.eval(grid.center_of(i));
            d * d
        })
        .sum();
    Ok(sum / mask.len() as f64)
}
