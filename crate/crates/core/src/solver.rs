//! Kaczmarz iteration over the assembled travel-time system.
//!
//! One iteration projects the estimate onto the hyperplane of a single
//! row; sweeps visit the rows cyclically in their stored (pre-shuffled)
//! order. Projection counts are therefore comparable across runs with the
//! same number of rows.

use crate::forward::RayRow;

/// Sparse linear system pairing traced ray rows with travel times.
#[derive(Clone, Debug, PartialEq)]
pub struct TravelTimeSystem {
    pub rows: Vec<RayRow>,
    pub rhs: Vec<f64>,
    /// Length of the solution vector.
    pub n_pixels: usize,
    /// Rays dropped at assembly because they touched no pixel.
    pub dropped_rows: usize,
}

impl TravelTimeSystem {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Root mean square of the right-hand side.
    pub fn rms_rhs(&self) -> f64 {
        rms(self.rhs.iter().copied())
    }

    /// Root mean square of `b - Ax` over all rows.
    pub fn rms_residual(&self, x: &[f64]) -> f64 {
        rms(self.rows.iter().zip(&self.rhs).map(|(row, &b)| b - row.dot(x)))
    }
}

fn rms(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    if values.len() == 0 {
        return 0.0;
    }
    let n = values.len() as f64;
    (values.map(|v| v * v).sum::<f64>() / n).sqrt()
}

/// Kaczmarz hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    /// Step scale in (0, 2]; 1 projects exactly onto each hyperplane.
    pub relaxation: f64,
    /// Hard cap on the number of row projections.
    pub max_projections: usize,
    /// Absolute threshold on the RMS residual.
    pub residual_tol: f64,
    /// Projections between residual evaluations.
    pub check_every: usize,
}

/// Reconstruction output, with the residual trace at every check point.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconResult {
    pub f_hat: Vec<f64>,
    pub projections_done: usize,
    /// `(projections done, RMS residual)` at each residual evaluation.
    pub residual_history: Vec<(usize, f64)>,
}

/// Project `x` onto the hyperplane `<row, x> = b`, scaled by `relaxation`.
/// The row must have at least one nonzero weight.
pub fn kaczmarz_step(x: &mut [f64], row: &RayRow, b: f64, relaxation: f64) {
    project(x, row, b, relaxation, row.norm_sq());
}

fn project(x: &mut [f64], row: &RayRow, b: f64, relaxation: f64, norm_sq: f64) {
    assert!(norm_sq > 0.0, "cannot project onto a zero row");
    let scale = relaxation * (b - row.dot(x)) / norm_sq;
    for &(i, w) in &row.entries {
        x[i] += scale * w;
    }
}

/// Sweep the rows cyclically from the given initial estimate until the RMS
/// residual reaches `residual_tol` or `max_projections` is exhausted.
///
/// Started from zero on a consistent system, the iteration converges to
/// the minimum-norm solution.
pub fn kaczmarz_solve(
    system: &TravelTimeSystem,
    config: &SolverConfig,
    initial: Vec<f64>,
) -> ReconResult {
    assert!(!system.is_empty(), "system has no rows");
    assert_eq!(initial.len(), system.n_pixels, "initial estimate has the wrong length");
    assert!(
        config.relaxation > 0.0 && config.relaxation <= 2.0,
        "relaxation must lie in (0, 2]"
    );
    let check_every = config.check_every.max(1);
    let norms: Vec<f64> = system.rows.iter().map(RayRow::norm_sq).collect();
    let mut x = initial;
    let mut residual_history = Vec::new();
    let mut projections_done = 0;
    'sweeps: loop {
        for ((row, &b), &norm_sq) in system.rows.iter().zip(&system.rhs).zip(&norms) {
            if projections_done == config.max_projections {
                break 'sweeps;
            }
            project(&mut x, row, b, config.relaxation, norm_sq);
            projections_done += 1;
            if projections_done % check_every == 0 {
                let residual = system.rms_residual(&x);
                residual_history.push((projections_done, residual));
                if residual <= config.residual_tol {
                    break 'sweeps;
                }
            }
        }
    }
    ReconResult { f_hat: x, projections_done, residual_history }
}
