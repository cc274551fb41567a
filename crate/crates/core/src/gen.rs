//! Seeded instance generators.
//!
//! Coordinates are multiples of 1/100 inside `[0, bbox]`, so every generated
//! file holds finite decimals. The RNG is ChaCha8, so output depends only on
//! the arguments.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::PlaneKind;
use crate::error::{Error, Result};
use crate::geom::{Ball, Disk, Plane, Point2, Point3};
use crate::io::InstanceFile;
use crate::scalar::Scalar;

pub const GRID: i64 = 100;

pub fn default_radii() -> Vec<Scalar> {
    ["1", "2", "3.5"].iter().map(|s| s.parse().expect("literal")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Disks,
    UnitDisks,
    Balls(PlaneKind),
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    /// Radius classes drawn from the front of `radii`.
    pub k: usize,
    /// Plane count, balls only.
    pub planes: usize,
    pub seed: u64,
    pub bbox: Scalar,
    pub radii: Vec<Scalar>,
}

impl GenParams {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenParams { kind, n, k: 1, planes: 1, seed, bbox: Scalar::from_int(10), radii: default_radii() }
    }
}

pub fn generate(p: &GenParams) -> Result<InstanceFile> {
    match p.kind {
        GenKind::Disks => Ok(InstanceFile::from_disks(&gen_disks(p.n, p.k, p.seed, &p.bbox, &p.radii)?)),
        GenKind::UnitDisks => {
            let radius = p.radii.first().ok_or_else(|| Error::Invalid("empty radius list".into()))?;
            Ok(InstanceFile::from_disks(&gen_unit_disks(p.n, p.seed, &p.bbox, radius)?))
        }
        GenKind::Balls(kind) => {
            let (planes, balls) = gen_balls(kind, p.planes, p.k, p.n, p.seed, &p.bbox, &p.radii)?;
            Ok(InstanceFile::from_balls(&planes, &balls))
        }
    }
}

fn grid_steps(bbox: &Scalar) -> Result<i64> {
    if !bbox.is_positive() {
        return Err(Error::Invalid("bbox must be positive".into()));
    }
    let scaled = bbox * &Scalar::from_int(GRID);
    let steps = scaled.numer() / scaled.denom();
    i64::try_from(steps).map_err(|_| Error::Invalid("bbox too large".into()))
}

fn check(n: usize, k: usize, radii: &[Scalar]) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    if k == 0 || k > radii.len() {
        return Err(Error::Invalid(format!("k = {k} needs 1..={} radii", radii.len())));
    }
    if radii.iter().any(|r| !r.is_positive()) {
        return Err(Error::Invalid("radii must be positive".into()));
    }
    Ok(())
}

fn coord(rng: &mut ChaCha8Rng, steps: i64) -> Scalar {
    Scalar::ratio(rng.gen_range(0..=steps), GRID)
}

fn id(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len();
    format!("d{i:0width$}")
}

pub fn gen_disks(n: usize, k: usize, seed: u64, bbox: &Scalar, radii: &[Scalar]) -> Result<Vec<Disk>> {
    check(n, k, radii)?;
    let steps = grid_steps(bbox)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let x = coord(&mut rng, steps);
            let y = coord(&mut rng, steps);
            let r = radii[rng.gen_range(0..k)].clone();
            Disk::new(id(i, n), Point2::new(x, y), r)
        })
        .collect()
}

/// Equal radii, pairwise distinct x and pairwise distinct y.
pub fn gen_unit_disks(n: usize, seed: u64, bbox: &Scalar, radius: &Scalar) -> Result<Vec<Disk>> {
    check(n, 1, std::slice::from_ref(radius))?;
    let steps = grid_steps(bbox)?;
    let slots = steps as usize + 1;
    if n > slots {
        return Err(Error::Invalid(format!("bbox has only {slots} distinct grid coordinates for n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = sample(&mut rng, slots, n).into_vec();
    let ys = sample(&mut rng, slots, n).into_vec();
    xs.into_iter()
        .zip(ys)
        .enumerate()
        .map(|(i, (x, y))| {
            let c = Point2::new(Scalar::ratio(x as i64, GRID), Scalar::ratio(y as i64, GRID));
            Disk::new(id(i, n), c, radius.clone())
        })
        .collect()
}

// (alpha, gamma) pairs whose plane equations keep centers on the decimal grid.
const ORIENTATIONS: [(i64, i64); 6] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)];

pub fn gen_planes(kind: PlaneKind, count: usize, rng: &mut ChaCha8Rng, bbox: &Scalar) -> Result<Vec<Plane>> {
    if count == 0 {
        return Err(Error::Invalid("at least one plane is required".into()));
    }
    let span = grid_steps(bbox)? / GRID;
    let mut planes: Vec<Plane> = Vec::with_capacity(count);
    for j in 0..count {
        let plane = match kind {
            PlaneKind::Parallel => Plane::parallel(Scalar::from_int(j as i64)),
            PlaneKind::Perp => {
                let (alpha, gamma) = ORIENTATIONS[rng.gen_range(0..ORIENTATIONS.len())];
                let mut delta = rng.gen_range(0..=span.max(1));
                loop {
                    let p = Plane::perp(alpha.into(), gamma.into(), delta.into())?;
                    if !planes.contains(&p) {
                        break p;
                    }
                    delta += 1;
                }
            }
        };
        planes.push(plane);
    }
    Ok(planes)
}

fn point_on(plane: &Plane, rng: &mut ChaCha8Rng, steps: i64) -> Point3 {
    let y = coord(rng, steps);
    match plane {
        Plane::ParallelXY { z0 } => Point3::new(coord(rng, steps), y, z0.clone()),
        Plane::PerpToXZ { alpha, gamma, delta } => {
            if gamma.is_zero() {
                Point3::new(delta / alpha, y, coord(rng, steps))
            } else {
                let x = coord(rng, steps);
                let z = (delta - &(alpha * &x)) / gamma;
                Point3::new(x, y, z)
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn gen_balls(
    kind: PlaneKind,
    planes: usize,
    k: usize,
    n: usize,
    seed: u64,
    bbox: &Scalar,
    radii: &[Scalar],
) -> Result<(Vec<Plane>, Vec<Ball>)> {
    check(n, k, radii)?;
    let steps = grid_steps(bbox)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planes = gen_planes(kind, planes, &mut rng, bbox)?;
    let balls = (0..n)
        .map(|i| {
            let j = rng.gen_range(0..planes.len());
            let c = point_on(&planes[j], &mut rng, steps);
            let r = radii[rng.gen_range(0..k)].clone();
            Ball::new(id(i, n), c, r, j)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((planes, balls))
}
