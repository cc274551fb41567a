//! Points, disks, balls, planes and the exact predicates the clique
//! algorithms are built on.
//!
//! All regions are closed: tangent objects intersect, and points on a slab
//! or envelope boundary are members.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point2 { x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point3 {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl Point3 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Point3 { x, y, z }
    }
}

/// Build a [`Point2`] from integers. Test and generator convenience.
pub fn p2(x: i64, y: i64) -> Point2 {
    Point2::new(x.into(), y.into())
}

/// Build a [`Point3`] from integers.
pub fn p3(x: i64, y: i64, z: i64) -> Point3 {
    Point3::new(x.into(), y.into(), z.into())
}

/// Squared Euclidean distance, defined per point dimension.
pub trait SquaredDistance {
    fn dist_sq(&self, other: &Self) -> Scalar;
}

impl SquaredDistance for Point2 {
    fn dist_sq(&self, other: &Self) -> Scalar {
        (&self.x - &other.x).square() + (&self.y - &other.y).square()
    }
}

impl SquaredDistance for Point3 {
    fn dist_sq(&self, other: &Self) -> Scalar {
        (&self.x - &other.x).square() + (&self.y - &other.y).square() + (&self.z - &other.z).square()
    }
}

pub fn dist_sq<P: SquaredDistance>(p: &P, q: &P) -> Scalar {
    p.dist_sq(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub id: String,
    pub center: Point2,
    pub radius: Scalar,
}

impl Disk {
    pub fn new(id: impl Into<String>, center: Point2, radius: Scalar) -> Result<Self> {
        let id = id.into();
        if !radius.is_positive() {
            return Err(Error::Invalid(format!("disk {id}: radius {radius} is not positive")));
        }
        Ok(Disk { id, center, radius })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub id: String,
    pub center: Point3,
    pub radius: Scalar,
    pub plane_index: usize,
}

impl Ball {
    pub fn new(id: impl Into<String>, center: Point3, radius: Scalar, plane_index: usize) -> Result<Self> {
        let id = id.into();
        if !radius.is_positive() {
            return Err(Error::Invalid(format!("ball {id}: radius {radius} is not positive")));
        }
        Ok(Ball { id, center, radius, plane_index })
    }
}

fn closed_intersect(dist_sq: Scalar, r1: &Scalar, r2: &Scalar) -> bool {
    dist_sq <= (r1 + r2).square()
}

pub fn disks_intersect(d1: &Disk, d2: &Disk) -> bool {
    closed_intersect(d1.center.dist_sq(&d2.center), &d1.radius, &d2.radius)
}

pub fn balls_intersect(b1: &Ball, b2: &Ball) -> bool {
    closed_intersect(b1.center.dist_sq(&b2.center), &b1.radius, &b2.radius)
}

/// Which half of a slab (or which extended envelope) a region refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Upper,
    Lower,
}

/// Sign of the turn `a -> b -> q`: positive when `q` is left of the directed line.
fn orient(a: &Point2, b: &Point2, q: &Point2) -> i32 {
    let lhs = (&b.x - &a.x) * (&q.y - &a.y);
    let rhs = (&b.y - &a.y) * (&q.x - &a.x);
    (lhs - rhs).signum()
}

/// Membership of `q` in the closed upper (or lower) slab of segment `ab`.
///
/// For a vertical segment, or `a == b`, the slab degenerates to the vertical
/// ray above the top endpoint (below the bottom endpoint).
pub fn in_slab(a: &Point2, b: &Point2, q: &Point2, side: Side) -> bool {
    if a.x == b.x {
        if q.x != a.x {
            return false;
        }
        return match side {
            Side::Upper => q.y >= a.y.clone().max(b.y.clone()),
            Side::Lower => q.y <= a.y.clone().min(b.y.clone()),
        };
    }
    let (left, right) = if a.x < b.x { (a, b) } else { (b, a) };
    if q.x < left.x || q.x > right.x {
        return false;
    }
    let turn = orient(left, right, q);
    match side {
        Side::Upper => turn >= 0,
        Side::Lower => turn <= 0,
    }
}

fn same_z(points: [&Point3; 3]) -> bool {
    points[0].z == points[1].z && points[1].z == points[2].z
}

fn xy(p: &Point3) -> Point2 {
    Point2::new(p.x.clone(), p.y.clone())
}

/// [`in_slab`] on a plane parallel to the xy-plane. All three points must
/// share the plane's z.
pub fn in_slab_on_plane(a: &Point3, b: &Point3, q: &Point3, side: Side) -> Result<bool> {
    if !same_z([a, b, q]) {
        return Err(Error::Precondition(format!(
            "points not on one xy-parallel plane (z = {}, {}, {})",
            a.z, b.z, q.z
        )));
    }
    Ok(in_slab(&xy(a), &xy(b), &xy(q), side))
}

/// Evaluates `|pq| <= max(|pa|, |pb|)` for `q` in the upper slab of `ab`
/// and `p` no lower than `q`. The inequality always holds under those
/// preconditions; this exists so tests can hammer on it.
pub fn slab_bound_holds(a: &Point2, b: &Point2, q: &Point2, p: &Point2) -> Result<bool> {
    if !in_slab(a, b, q, Side::Upper) {
        return Err(Error::Precondition("q is not in the upper slab of ab".into()));
    }
    if p.y < q.y {
        return Err(Error::Precondition("p lies below q".into()));
    }
    Ok(p.dist_sq(q) <= p.dist_sq(a).max(p.dist_sq(b)))
}

/// 3D form of [`slab_bound_holds`]: `a`, `b`, `q` on one xy-parallel plane,
/// `p` anywhere with `y_p >= y_q`.
pub fn slab_bound_holds_3d(a: &Point3, b: &Point3, q: &Point3, p: &Point3) -> Result<bool> {
    if !in_slab_on_plane(a, b, q, Side::Upper)? {
        return Err(Error::Precondition("q is not in the upper slab of ab on its plane".into()));
    }
    if p.y < q.y {
        return Err(Error::Precondition("p lies below q".into()));
    }
    Ok(p.dist_sq(q) <= p.dist_sq(a).max(p.dist_sq(b)))
}

pub fn project_xz(p: &Point3) -> Point2 {
    Point2::new(p.x.clone(), p.z.clone())
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Scalar {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn dot(o: &Point2, a: &Point2, b: &Point2) -> Scalar {
    (&a.x - &o.x) * (&b.x - &o.x) + (&a.y - &o.y) * (&b.y - &o.y)
}

/// Range of `y` values of `conv(points)` above the xz-location `target`,
/// or `None` when `target` is outside the projected hull.
///
/// Enumerates every singleton, segment and non-degenerate triangle of the
/// projected points that contains `target`; the lower and upper envelopes
/// are attained on one of them.
fn envelope_span(points: &[Point3], target: &Point2) -> Option<(Scalar, Scalar)> {
    let proj: Vec<Point2> = points.iter().map(project_xz).collect();
    let mut span: Option<(Scalar, Scalar)> = None;
    let mut offer = |y: Scalar| {
        span = Some(match span.take() {
            None => (y.clone(), y),
            Some((lo, hi)) => (lo.min(y.clone()), hi.max(y)),
        });
    };

    for (i, pi) in proj.iter().enumerate() {
        if pi == target {
            offer(points[i].y.clone());
        }
    }
    for i in 0..proj.len() {
        for j in i + 1..proj.len() {
            let (pi, pj) = (&proj[i], &proj[j]);
            if pi == pj || !cross(pi, pj, target).is_zero() {
                continue;
            }
            let along = dot(pi, target, pj);
            let len_sq = pi.dist_sq(pj);
            if along.is_negative() || along > len_sq {
                continue;
            }
            let t = &along / &len_sq;
            offer(&points[i].y + &t * (&points[j].y - &points[i].y));
        }
    }
    for i in 0..proj.len() {
        for j in i + 1..proj.len() {
            for l in j + 1..proj.len() {
                let (pi, pj, pl) = (&proj[i], &proj[j], &proj[l]);
                let area = cross(pi, pj, pl);
                if area.is_zero() {
                    continue;
                }
                let wj = &cross(pi, target, pl) / &area;
                let wl = &cross(pi, pj, target) / &area;
                let wi = Scalar::one() - &wj - &wl;
                if wi.is_negative() || wj.is_negative() || wl.is_negative() {
                    continue;
                }
                offer(wi * &points[i].y + wj * &points[j].y + wl * &points[l].y);
            }
        }
    }
    span
}

/// Membership of `q` in the extended lower envelope of `hull_points`
/// (`conv(Q)` swept along +y) for [`Side::Lower`], or in the extended upper
/// envelope (`conv(Q)` swept along -y) for [`Side::Upper`].
pub fn in_extended_envelope(hull_points: &[Point3], q: &Point3, side: Side) -> Result<bool> {
    if hull_points.is_empty() {
        return Err(Error::Precondition("envelope of an empty point set".into()));
    }
    let Some((lowest, highest)) = envelope_span(hull_points, &project_xz(q)) else {
        return Ok(false);
    };
    Ok(match side {
        Side::Lower => q.y >= lowest,
        Side::Upper => q.y <= highest,
    })
}

/// A plane carrying ball centers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plane {
    /// `z = z0`.
    ParallelXY { z0: Scalar },
    /// `alpha * x + gamma * z = delta`; contains the y direction.
    PerpToXZ { alpha: Scalar, gamma: Scalar, delta: Scalar },
}

impl Plane {
    pub fn parallel(z0: Scalar) -> Self {
        Plane::ParallelXY { z0 }
    }

    /// Perpendicular-to-xz plane in canonical orientation (first nonzero of
    /// `alpha`, `gamma` positive).
    pub fn perp(alpha: Scalar, gamma: Scalar, delta: Scalar) -> Result<Self> {
        if alpha.is_zero() && gamma.is_zero() {
            return Err(Error::Invalid("plane normal (alpha, gamma) is zero".into()));
        }
        let flip = alpha.is_negative() || (alpha.is_zero() && gamma.is_negative());
        Ok(if flip {
            Plane::PerpToXZ { alpha: -alpha, gamma: -gamma, delta: -delta }
        } else {
            Plane::PerpToXZ { alpha, gamma, delta }
        })
    }

    pub fn contains(&self, p: &Point3) -> bool {
        match self {
            Plane::ParallelXY { z0 } => &p.z == z0,
            Plane::PerpToXZ { alpha, gamma, delta } => &(alpha * &p.x + gamma * &p.z) == delta,
        }
    }

    /// Coordinate of `p` along the plane's "left to right" axis: `x` for an
    /// xy-parallel plane, the position along the xz-trace line otherwise.
    pub fn axis_position(&self, p: &Point3) -> Scalar {
        match self {
            Plane::ParallelXY { .. } => p.x.clone(),
            Plane::PerpToXZ { alpha, gamma, .. } => {
                // Trace direction (gamma, -alpha) in (x, z), first nonzero positive.
                let (mut dx, mut dz) = (gamma.clone(), -alpha);
                if dx.is_negative() || (dx.is_zero() && dz.is_negative()) {
                    dx = -dx;
                    dz = -dz;
                }
                dx * &p.x + dz * &p.z
            }
        }
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self, Plane::ParallelXY { .. })
    }
}

/// Distinct radii in increasing order; the position of a radius in this list
/// is its class index.
pub fn radius_classes<'a>(radii: impl IntoIterator<Item = &'a Scalar>) -> Vec<Scalar> {
    let mut classes: Vec<Scalar> = radii.into_iter().cloned().collect();
    classes.sort();
    classes.dedup();
    classes
}
