//! Forward model: sparse ray-pixel intersection rows by parametric grid
//! traversal, and travel-time synthesis by composite midpoint quadrature.

use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2, Segment, BOUNDARY_TOL};
use crate::rays::Ray;
use crate::solver::TravelTimeSystem;

/// Parameter intervals at most this long are grazing contacts and carry no
/// pixel weight.
const INTERVAL_TOL: f64 = 1e-12;

/// Uniform grid of square pixels; `origin` is the lower-left corner, and
/// pixel `(ix, iy)` has flat index `iy * nx + ix`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub origin: Point2,
    pub pixel: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, origin: Point2, pixel: f64) -> Self {
        assert!(nx >= 1 && ny >= 1, "grid must have at least one pixel");
        assert!(pixel > 0.0, "pixel size must be positive");
        Grid { nx, ny, origin, pixel }
    }

    /// Smallest `nx` by `ny` grid of square pixels centered on the circle
    /// that covers it (the shorter grid side spans the diameter).
    pub fn covering(circle: &Circle, nx: usize, ny: usize) -> Self {
        let pixel = 2.0 * circle.radius / nx.min(ny) as f64;
        let origin = circle.center
            - Point2::new(0.5 * nx as f64 * pixel, 0.5 * ny as f64 * pixel);
        Grid::new(nx, ny, origin, pixel)
    }

    pub fn n_pixels(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.nx && iy < self.ny);
        iy * self.nx + ix
    }

    /// Center of pixel `(ix, iy)`.
    pub fn center(&self, ix: usize, iy: usize) -> Point2 {
        self.origin + Point2::new((ix as f64 + 0.5) * self.pixel, (iy as f64 + 0.5) * self.pixel)
    }

    /// Center of the pixel with flat index `i`.
    pub fn center_of(&self, i: usize) -> Point2 {
        self.center(i % self.nx, i / self.nx)
    }

    /// Upper-right corner of the grid.
    pub fn max_corner(&self) -> Point2 {
        self.origin + Point2::new(self.nx as f64 * self.pixel, self.ny as f64 * self.pixel)
    }

    /// Pixel containing `p`, clamped to the grid for points on (or within
    /// tolerance of) the boundary.
    pub fn pixel_containing(&self, p: Point2) -> (usize, usize) {
        let fx = ((p.x - self.origin.x) / self.pixel).floor();
        let fy = ((p.y - self.origin.y) / self.pixel).floor();
        let ix = (fx.max(0.0) as usize).min(self.nx - 1);
        let iy = (fy.max(0.0) as usize).min(self.ny - 1);
        (ix, iy)
    }

    /// Whether `p` lies in the grid's bounding box, within [`BOUNDARY_TOL`].
    pub fn contains(&self, p: Point2) -> bool {
        let max = self.max_corner();
        p.x >= self.origin.x - BOUNDARY_TOL
            && p.x <= max.x + BOUNDARY_TOL
            && p.y >= self.origin.y - BOUNDARY_TOL
            && p.y <= max.y + BOUNDARY_TOL
    }

    /// Whether the grid's bounding box covers the circle.
    pub fn covers_circle(&self, circle: &Circle) -> bool {
        let max = self.max_corner();
        circle.center.x - circle.radius >= self.origin.x - BOUNDARY_TOL
            && circle.center.x + circle.radius <= max.x + BOUNDARY_TOL
            && circle.center.y - circle.radius >= self.origin.y - BOUNDARY_TOL
            && circle.center.y + circle.radius <= max.y + BOUNDARY_TOL
    }
}

/// A scalar field over the plane. Implemented by closures, by per-pixel
/// samples ([`GridField`]), and by [`crate::phantom::Phantom`].
pub trait ScalarField {
    fn eval(&self, p: Point2) -> f64;
}

impl<F: Fn(Point2) -> f64> ScalarField for F {
    fn eval(&self, p: Point2) -> f64 {
        self(p)
    }
}

/// Piecewise-constant field given by one sample per pixel.
#[derive(Clone, Copy, Debug)]
pub struct GridField<'a> {
    grid: &'a Grid,
    values: &'a [f64],
}

impl<'a> GridField<'a> {
    pub fn new(grid: &'a Grid, values: &'a [f64]) -> Self {
        assert_eq!(values.len(), grid.n_pixels(), "one value per pixel");
        GridField { grid, values }
    }
}

impl ScalarField for GridField<'_> {
    fn eval(&self, p: Point2) -> f64 {
        let (ix, iy) = self.grid.pixel_containing(p);
        self.values[self.grid.index(ix, iy)]
    }
}

/// Sound speed as a known constant background plus a perturbation field.
#[derive(Clone, Copy, Debug)]
pub struct SpeedModel<E> {
    pub background: f64,
    pub epsilon: E,
}

impl<E: ScalarField> SpeedModel<E> {
    pub fn speed(&self, p: Point2) -> f64 {
        self.background + self.epsilon.eval(p)
    }

    /// Reciprocal speed, the field the reconstruction recovers.
    pub fn slowness(&self, p: Point2) -> f64 {
        self.speed(p).recip()
    }

    pub fn slowness_field(&self) -> impl ScalarField + '_ {
        move |p: Point2| self.slowness(p)
    }
}

/// Sparse system row holding the per-pixel intersection lengths of one ray.
#[derive(Clone, Debug, PartialEq)]
pub struct RayRow {
    /// `(flat pixel index, intersection length)`, sorted by index, with
    /// strictly positive lengths and no repeated index.
    pub entries: Vec<(usize, f64)>,
    /// Sum of the intersection lengths, i.e. the traversed length.
    pub total: f64,
}

impl RayRow {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, w)| w * x[i]).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum()
    }
}

/// Intersection lengths of all legs of `ray` with the pixels of `grid`,
/// merged per pixel. Fails if the ray leaves the grid's bounding box.
pub fn trace_row(grid: &Grid, ray: &Ray) -> Result<RayRow> {
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for seg in ray.segments() {
        segment_entries(grid, &seg, &mut entries)?;
    }
    entries.sort_unstable_by_key(|&(i, _)| i);
    // both legs of a broken ray can cross the same pixel; merge so each
    // pixel appears once
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
    for (i, w) in entries {
        match merged.last_mut() {
            Some(&mut (last, ref mut acc)) if last == i => *acc += w,
            _ => merged.push((i, w)),
        }
    }
    let total = merged.iter().map(|&(_, w)| w).sum();
    Ok(RayRow { entries: merged, total })
}

/// Crossing-parameter traversal of one segment: collect the parameters of
/// all gridline crossings, then attribute each parameter interval to the
/// pixel containing its midpoint.
fn segment_entries(grid: &Grid, seg: &Segment, out: &mut Vec<(usize, f64)>) -> Result<()> {
    if !grid.contains(seg.a) || !grid.contains(seg.b) {
        return Err(Error::RayOutsideGrid);
    }
    let dir = seg.b - seg.a;
    let len = seg.length();
    let mut cuts = vec![0.0, 1.0];
    axis_cuts(seg.a.x, dir.x, grid.origin.x, grid.pixel, grid.nx, &mut cuts);
    axis_cuts(seg.a.y, dir.y, grid.origin.y, grid.pixel, grid.ny, &mut cuts);
    cuts.sort_unstable_by(f64::total_cmp);
    for pair in cuts.windows(2) {
        let dt = pair[1] - pair[0];
        if dt <= INTERVAL_TOL {
            continue;
        }
        let mid = seg.a + dir * (0.5 * (pair[0] + pair[1]));
        let (ix, iy) = grid.pixel_containing(mid);
        out.push((grid.index(ix, iy), dt * len));
    }
    Ok(())
}

/// Parameters in (0, 1) where the segment crosses the gridlines of one axis.
fn axis_cuts(start: f64, delta: f64, origin: f64, pixel: f64, count: usize, out: &mut Vec<f64>) {
    if delta == 0.0 {
        return;
    }
    let (lo, hi) = if delta > 0.0 { (start, start + delta) } else { (start + delta, start) };
    let first = (((lo - origin) / pixel).ceil() as isize).max(0);
    let last = (((hi - origin) / pixel).floor() as isize).min(count as isize);
    for k in first..=last {
        let t = (origin + k as f64 * pixel - start) / delta;
        if t > INTERVAL_TOL && t < 1.0 - INTERVAL_TOL {
            out.push(t);
        }
    }
}

/// Composite midpoint quadrature of `field` along the legs of `ray`. Each
/// leg uses the smallest node count that brings the spacing to `step` or
/// below, so the rule is second order in `step`.
pub fn travel_time<F: ScalarField>(field: &F, ray: &Ray, step: f64) -> f64 {
    assert!(step > 0.0, "quadrature step must be positive");
    ray.segments()
        .map(|seg| {
            let dir = seg.b - seg.a;
            let len = seg.length();
            let n = ((len / step).ceil() as usize).max(1);
            let sum: f64 = (0..n)
                .map(|k| field.eval(seg.a + dir * ((k as f64 + 0.5) / n as f64)))
                .sum();
            sum * (len / n as f64)
        })
        .sum()
}

/// Trace every ray and pair the rows with their travel times, keeping the
/// given order. Rays that touch no pixel are dropped together with their
/// time, and the count is recorded on the system.
pub fn assemble_system(grid: &Grid, rays: &[Ray], times: &[f64]) -> Result<TravelTimeSystem> {
    if rays.len() != times.len() {
        return Err(Error::LengthMismatch { rays: rays.len(), times: times.len() });
    }
    let mut rows = Vec::with_capacity(rays.len());
    let mut rhs = Vec::with_capacity(rays.len());
    let mut dropped_rows = 0usize;
    for (ray, &time) in rays.iter().zip(times) {
        let row = trace_row(grid, ray)?;
        if row.entries.is_empty() {
            dropped_rows += 1;
            continue;
        }
        rows.push(row);
        rhs.push(time);
    }
    Ok(TravelTimeSystem { rows, rhs, n_pixels: grid.n_pixels(), dropped_rows })
}
