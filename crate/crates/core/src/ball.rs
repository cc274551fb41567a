//! Maximum clique for balls whose centers lie on a few planes.
//!
//! Slots are (radius class, plane) pairs. With xy-parallel planes each slot
//! guess spans an in-plane slab; with planes perpendicular to the xz-plane,
//! the guessed centers of a class span a convex hull whose extended lower
//! envelope feeds side X and extended upper envelope feeds side Y.

use crate::cobipartite::{self, Adjacency, CliqueResult, Guess, GuessInstance, Slot, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::geom::{balls_intersect, in_extended_envelope, in_slab, radius_classes, Ball, Plane, Point2, Point3, Side};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    /// All planes parallel to the xy-plane.
    Parallel,
    /// All planes perpendicular to the xz-plane.
    Perp,
}

#[derive(Clone, Debug)]
pub struct BallInstance {
    planes: Vec<Plane>,
    kind: PlaneKind,
    balls: Vec<Ball>,
    classes: Vec<Scalar>,
    class_of: Vec<usize>,
    axis: Vec<Scalar>,
    adjacency: Adjacency,
}

impl BallInstance {
    pub fn new(planes: Vec<Plane>, mut balls: Vec<Ball>) -> Result<Self> {
        let Some(first) = planes.first() else {
            return Err(Error::Invalid("no planes".into()));
        };
        let kind = if first.is_parallel() { PlaneKind::Parallel } else { PlaneKind::Perp };
        if planes.iter().any(|p| p.is_parallel() != (kind == PlaneKind::Parallel)) {
            return Err(Error::Invalid("planes mix parallel and perpendicular kinds".into()));
        }
        balls.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = balls.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Invalid(format!("duplicate ball id {:?}", w[0].id)));
        }
        for b in &balls {
            if !b.radius.is_positive() {
                return Err(Error::Invalid(format!("ball {}: radius must be positive", b.id)));
            }
            let plane = planes
                .get(b.plane_index)
                .ok_or_else(|| Error::Invalid(format!("ball {}: no plane {}", b.id, b.plane_index)))?;
            if !plane.contains(&b.center) {
                return Err(Error::Invalid(format!("ball {}: center is not on plane {}", b.id, b.plane_index)));
            }
        }
        let classes = radius_classes(balls.iter().map(|b| &b.radius));
        let class_of = balls.iter().map(|b| classes.binary_search(&b.radius).expect("radius has a class")).collect();
        let axis = balls.iter().map(|b| planes[b.plane_index].axis_position(&b.center)).collect();
        let adjacency = Adjacency::from_fn(balls.len(), |i, j| balls_intersect(&balls[i], &balls[j]));
        Ok(BallInstance { planes, kind, balls, classes, class_of, axis, adjacency })
    }

    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn classes(&self) -> &[Scalar] {
        &self.classes
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.balls.binary_search_by(|b| b.id.as_str().cmp(id)).ok()
    }

    pub fn slot(&self, class: usize, plane: usize) -> usize {
        class * self.planes.len() + plane
    }

    fn xy(&self, i: usize) -> Point2 {
        let c = &self.balls[i].center;
        Point2::new(c.x.clone(), c.y.clone())
    }

    /// Guessed centers of `class` across all planes.
    fn guessed_centers(&self, class: usize, guess: &Guess) -> Vec<Point3> {
        let mut out = Vec::new();
        for plane in 0..self.planes.len() {
            if let Slot::Pair(a, b) = guess.slots[self.slot(class, plane)] {
                out.push(self.balls[a].center.clone());
                if a != b {
                    out.push(self.balls[b].center.clone());
                }
            }
        }
        out
    }
}

impl GuessInstance for BallInstance {
    fn len(&self) -> usize {
        self.balls.len()
    }

    fn id(&self, i: usize) -> &str {
        &self.balls[i].id
    }

    fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    fn slot_count(&self) -> usize {
        self.classes.len() * self.planes.len()
    }

    fn slot_of(&self, i: usize) -> usize {
        self.slot(self.class_of[i], self.balls[i].plane_index)
    }

    fn axis_position(&self, i: usize) -> &Scalar {
        &self.axis[i]
    }

    fn region(&self, i: usize, guess: &Guess) -> Option<Side> {
        match self.kind {
            PlaneKind::Parallel => {
                let Slot::Pair(a, b) = guess.slots[self.slot_of(i)] else {
                    return None;
                };
                let (a, b, q) = (self.xy(a), self.xy(b), self.xy(i));
                if in_slab(&a, &b, &q, Side::Upper) {
                    Some(Side::Upper)
                } else if in_slab(&a, &b, &q, Side::Lower) {
                    Some(Side::Lower)
                } else {
                    None
                }
            }
            PlaneKind::Perp => {
                let hull = self.guessed_centers(self.class_of[i], guess);
                if hull.is_empty() {
                    return None;
                }
                let q = &self.balls[i].center;
                // Extended lower envelope (swept upward) feeds X.
                if in_extended_envelope(&hull, q, Side::Lower).ok()? {
                    Some(Side::Upper)
                } else if in_extended_envelope(&hull, q, Side::Upper).ok()? {
                    Some(Side::Lower)
                } else {
                    None
                }
            }
        }
    }
}

pub fn enumerate_ball_guesses(inst: &BallInstance) -> Vec<Guess> {
    cobipartite::enumerate_guesses(inst)
}

fn require(inst: &BallInstance, kind: PlaneKind) -> Result<()> {
    if inst.kind != kind {
        return Err(Error::Invalid(format!("expected {kind:?} planes, instance has {:?}", inst.kind)));
    }
    Ok(())
}

pub fn max_clique_balls_with(inst: &BallInstance, opts: &SolveOptions) -> Result<SolveReport> {
    cobipartite::max_clique_over_guesses(inst, opts)
}

/// Centers on xy-parallel planes.
pub fn max_clique_balls_parallel(inst: &BallInstance) -> Result<CliqueResult> {
    require(inst, PlaneKind::Parallel)?;
    Ok(max_clique_balls_with(inst, &SolveOptions::default())?.result)
}

/// Centers on planes perpendicular to the xz-plane.
pub fn max_clique_balls_perp(inst: &BallInstance) -> Result<CliqueResult> {
    require(inst, PlaneKind::Perp)?;
    Ok(max_clique_balls_with(inst, &SolveOptions::default())?.result)
}
