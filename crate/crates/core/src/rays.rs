//! Ray lists for the travel-time system: unbroken chords of the
//! observation boundary and broken rays reflecting once at the obstacle,
//! with Lambertian (random) or specular reflection.
//!
//! All generators draw from finite point sets, reject inadmissible
//! combinations, and never emit duplicates, so a seeded rng reproduces a
//! ray list exactly.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    boundary_points, circle_exit, outward_normal, segment_blocked, specular_reflect, Point2,
    Scene, Segment, BOUNDARY_TOL,
};

/// Attempt budget per requested specular ray.
const SPECULAR_RETRY_FACTOR: usize = 100;

/// One measured path: a chord of the observation boundary, or two chords
/// meeting at a reflection point on the obstacle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ray {
    Unbroken {
        transmitter: Point2,
        receiver: Point2,
    },
    Broken {
        transmitter: Point2,
        reflection: Point2,
        receiver: Point2,
    },
}

impl Ray {
    pub fn unbroken(transmitter: Point2, receiver: Point2) -> Self {
        assert!(transmitter != receiver, "transmitter and receiver coincide");
        Ray::Unbroken { transmitter, receiver }
    }

    pub fn broken(transmitter: Point2, reflection: Point2, receiver: Point2) -> Self {
        assert!(transmitter != receiver, "transmitter and receiver coincide");
        assert!(
            reflection != transmitter && reflection != receiver,
            "reflection point coincides with an endpoint"
        );
        Ray::Broken { transmitter, reflection, receiver }
    }

    pub fn transmitter(&self) -> Point2 {
        match *self {
            Ray::Unbroken { transmitter, .. } | Ray::Broken { transmitter, .. } => transmitter,
        }
    }

    pub fn receiver(&self) -> Point2 {
        match *self {
            Ray::Unbroken { receiver, .. } | Ray::Broken { receiver, .. } => receiver,
        }
    }

    pub fn reflection(&self) -> Option<Point2> {
        match *self {
            Ray::Unbroken { .. } => None,
            Ray::Broken { reflection, .. } => Some(reflection),
        }
    }

    pub fn is_broken(&self) -> bool {
        matches!(self, Ray::Broken { .. })
    }

    /// The one or two straight legs of the ray, transmitter first.
    pub fn segments(&self) -> impl Iterator<Item = Segment> {
        let (first, second) = match *self {
            Ray::Unbroken { transmitter, receiver } => {
                (Segment::new(transmitter, receiver), None)
            }
            Ray::Broken { transmitter, reflection, receiver } => (
                Segment::new(transmitter, reflection),
                Some(Segment::new(reflection, receiver)),
            ),
        };
        std::iter::once(first).chain(second)
    }

    /// Total arc length (the sum of the leg lengths).
    pub fn length(&self) -> f64 {
        self.segments().map(|s| s.length()).sum()
    }

    /// Re-check the guarantees of the generators: endpoints on the
    /// observation boundary, reflection point on the obstacle, and no leg
    /// passing through the obstacle.
    pub fn validate(&self, scene: &Scene) -> Result<()> {
        for p in [self.transmitter(), self.receiver()] {
            if !scene.outer.on_boundary(p) {
                return Err(Error::InvalidRay(format!(
                    "endpoint ({}, {}) is off the observation boundary",
                    p.x, p.y
                )));
            }
        }
        if let Some(h) = self.reflection() {
            if !scene.obstacle.on_boundary(h) {
                return Err(Error::InvalidRay(format!(
                    "reflection point ({}, {}) is off the obstacle boundary",
                    h.x, h.y
                )));
            }
        }
        for seg in self.segments() {
            if segment_blocked(&seg, &scene.obstacle, self.reflection()) {
                return Err(Error::InvalidRay(
                    "a leg passes through the obstacle".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Sizes of the equally spaced transmitter/receiver/reflection point sets
/// and the requested ray counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySetConfig {
    /// Transmitters on the observation boundary.
    pub n_transmitters: usize,
    /// Receivers on the observation boundary.
    pub n_receivers: usize,
    /// Candidate reflection points on the obstacle boundary.
    pub n_hits: usize,
    pub n_broken: usize,
    pub n_unbroken: usize,
    pub seed: u64,
}

impl RaySetConfig {
    /// The seeded generator stream for this configuration.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Uniformly random unbroken rays between distinct, mutually visible
/// transmitter and receiver points, without repetition.
pub fn generate_unbroken(
    scene: &Scene,
    config: &RaySetConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if config.n_unbroken == 0 {
        return Ok(Vec::new());
    }
    let transmitters = boundary_points(&scene.outer, config.n_transmitters)?;
    let receivers = boundary_points(&scene.outer, config.n_receivers)?;
    generate_unbroken_between(scene, &transmitters, &receivers, config.n_unbroken, rng)
}

/// [`generate_unbroken`] over explicit point sets.
pub fn generate_unbroken_between(
    scene: &Scene,
    transmitters: &[Point2],
    receivers: &[Point2],
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let (nt, nr) = (transmitters.len(), receivers.len());
    let mut admissible = vec![false; nt * nr];
    let mut count = 0usize;
    for (it, &t) in transmitters.iter().enumerate() {
        for (ir, &r) in receivers.iter().enumerate() {
            if t != r && !segment_blocked(&Segment::new(t, r), &scene.obstacle, None) {
                admissible[it * nr + ir] = true;
                count += 1;
            }
        }
    }
    if count < n {
        return Err(Error::InsufficientPairs { requested: n, admissible: count });
    }
    let mut taken = vec![false; nt * nr];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let it = rng.random_range(0..nt);
        let ir = rng.random_range(0..nr);
        let k = it * nr + ir;
        if admissible[k] && !taken[k] {
            taken[k] = true;
            out.push(Ray::unbroken(transmitters[it], receivers[ir]));
        }
    }
    Ok(out)
}

/// Uniformly random broken rays with a Lambertian (unconstrained) angle of
/// reflection: any triple whose two legs stay on the outward side of the
/// reflection point and clear the obstacle is admissible.
pub fn generate_lambertian(
    scene: &Scene,
    config: &RaySetConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if config.n_broken == 0 {
        return Ok(Vec::new());
    }
    let transmitters = boundary_points(&scene.outer, config.n_transmitters)?;
    let receivers = boundary_points(&scene.outer, config.n_receivers)?;
    let hits = boundary_points(&scene.obstacle, config.n_hits)?;
    generate_lambertian_between(scene, &transmitters, &receivers, &hits, config.n_broken, rng)
}

/// [`generate_lambertian`] over explicit point sets.
pub fn generate_lambertian_between(
    scene: &Scene,
    transmitters: &[Point2],
    receivers: &[Point2],
    hits: &[Point2],
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let normals = hit_normals(scene, hits)?;
    let (vis_t, count_t) = leg_visibility(scene, hits, &normals, transmitters);
    let (vis_r, count_r) = leg_visibility(scene, hits, &normals, receivers);
    let (nt, nr) = (transmitters.len(), receivers.len());

    // exact admissible-triple count; coincident transmitter/receiver pairs
    // visible from the same hit would produce degenerate rays and are not
    // counted
    let mut receiver_at: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (ir, r) in receivers.iter().enumerate() {
        receiver_at.entry(r.bits()).or_default().push(ir);
    }
    let mut total: usize = count_t.iter().zip(&count_r).map(|(a, b)| a * b).sum();
    for (it, t) in transmitters.iter().enumerate() {
        let Some(coincident) = receiver_at.get(&t.bits()) else { continue };
        for &ir in coincident {
            for ih in 0..hits.len() {
                if vis_t[ih * nt + it] && vis_r[ih * nr + ir] {
                    total -= 1;
                }
            }
        }
    }
    if total < n {
        return Err(Error::InsufficientTriples { requested: n, admissible: total });
    }

    let mut taken = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let ih = rng.random_range(0..hits.len());
        let it = rng.random_range(0..nt);
        let ir = rng.random_range(0..nr);
        if vis_t[ih * nt + it]
            && vis_r[ih * nr + ir]
            && transmitters[it] != receivers[ir]
            && taken.insert((ih, it, ir))
        {
            out.push(Ray::broken(transmitters[it], hits[ih], receivers[ir]));
        }
    }
    Ok(out)
}

/// Random specular broken rays: a transmitter-hit launch determines the
/// receiver by the reflection law, so sampling is over launches. Launches
/// whose reflected leg returns into the transmitter or is blocked are
/// rejected; generation fails once the attempt budget is spent.
pub fn generate_specular(
    scene: &Scene,
    config: &RaySetConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if config.n_broken == 0 {
        return Ok(Vec::new());
    }
    let transmitters = boundary_points(&scene.outer, config.n_transmitters)?;
    let hits = boundary_points(&scene.obstacle, config.n_hits)?;
    generate_specular_between(scene, &transmitters, &hits, config.n_broken, rng)
}

/// [`generate_specular`] over explicit point sets.
pub fn generate_specular_between(
    scene: &Scene,
    transmitters: &[Point2],
    hits: &[Point2],
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Ray>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let normals = hit_normals(scene, hits)?;
    let (vis_t, _) = leg_visibility(scene, hits, &normals, transmitters);
    let nt = transmitters.len();
    let budget = SPECULAR_RETRY_FACTOR.saturating_mul(n);
    // launches are marked as tried whether they succeed or not; redrawing
    // one can never produce a new ray
    let mut tried = vec![false; hits.len() * nt];
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        if attempts >= budget {
            return Err(Error::RetryBudgetExhausted {
                requested: n,
                found: out.len(),
                attempts,
            });
        }
        attempts += 1;
        let ih = rng.random_range(0..hits.len());
        let it = rng.random_range(0..nt);
        let k = ih * nt + it;
        if !vis_t[k] || tried[k] {
            continue;
        }
        tried[k] = true;
        let (t, h) = (transmitters[it], hits[ih]);
        let incident = (h - t).normalized();
        let Ok(direction) = specular_reflect(incident, normals[ih].normalized()) else {
            continue;
        };
        let receiver = circle_exit(&scene.outer, h, direction);
        if receiver.dist(t) <= BOUNDARY_TOL {
            continue; // reflected straight back into the transmitter
        }
        if segment_blocked(&Segment::new(h, receiver), &scene.obstacle, Some(h)) {
            continue;
        }
        out.push(Ray::broken(t, h, receiver));
    }
    Ok(out)
}

/// Random permutation of the ray list; run once before assembling the
/// system so that Kaczmarz sweeps visit the rays in random order.
pub fn shuffle_rays(rays: &mut [Ray], rng: &mut impl Rng) {
    rays.shuffle(rng);
}

fn hit_normals(scene: &Scene, hits: &[Point2]) -> Result<Vec<Point2>> {
    hits.iter().map(|&h| outward_normal(&scene.obstacle, h)).collect()
}

/// For each (hit, endpoint) pair, whether the leg from the endpoint to the
/// hit arrives on the outward side and clears the obstacle; also the
/// number of visible endpoints per hit.
fn leg_visibility(
    scene: &Scene,
    hits: &[Point2],
    normals: &[Point2],
    endpoints: &[Point2],
) -> (Vec<bool>, Vec<usize>) {
    let mut mask = vec![false; hits.len() * endpoints.len()];
    let mut counts = vec![0usize; hits.len()];
    for (ih, (&h, &normal)) in hits.iter().zip(normals).enumerate() {
        for (ip, &p) in endpoints.iter().enumerate() {
            // strict inequality rejects tangential arrivals
            if (p - h).dot(normal) > 0.0
                && !segment_blocked(&Segment::new(p, h), &scene.obstacle, Some(h))
            {
                mask[ih * endpoints.len() + ip] = true;
                counts[ih] += 1;
            }
        }
    }
    (mask, counts)
}
