//! Maximum clique in a disk graph with `k` distinct radii.
//!
//! One slot per radius class; a slot guess is the leftmost/rightmost pair of
//! that class in the clique, and its candidates are the class members in the
//! upper or lower slab of the pair. `O(n^(2k))` guesses, each solved by one
//! bipartite matching.

use crate::cobipartite::{self, Adjacency, CliqueResult, Guess, GuessInstance, Slot, SolveOptions, SolveReport};
use crate::error::{Error, Result};
use crate::geom::{disks_intersect, in_slab, radius_classes, Disk, Side};
use crate::scalar::Scalar;

/// Disks sorted by id with radius classes and a precomputed intersection
/// matrix.
#[derive(Clone, Debug)]
pub struct DiskInstance {
    disks: Vec<Disk>,
    classes: Vec<Scalar>,
    class_of: Vec<usize>,
    adjacency: Adjacency,
}

impl DiskInstance {
    pub fn new(mut disks: Vec<Disk>) -> Result<Self> {
        disks.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = disks.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Invalid(format!("duplicate disk id {:?}", w[0].id)));
        }
        if let Some(d) = disks.iter().find(|d| !d.radius.is_positive()) {
            return Err(Error::Invalid(format!("disk {}: radius must be positive", d.id)));
        }
        let classes = radius_classes(disks.iter().map(|d| &d.radius));
        let class_of = disks.iter().map(|d| classes.binary_search(&d.radius).expect("radius has a class")).collect();
        let adjacency = Adjacency::from_fn(disks.len(), |i, j| disks_intersect(&disks[i], &disks[j]));
        Ok(DiskInstance { disks, classes, class_of, adjacency })
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Radius classes `r_1 < ... < r_k`.
    pub fn classes(&self) -> &[Scalar] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.disks.binary_search_by(|d| d.id.as_str().cmp(id)).ok()
    }

    /// Same disks with all coordinates and radii multiplied by `factor`.
    pub fn scaled(&self, factor: &Scalar) -> Result<Self> {
        let disks = self
            .disks
            .iter()
            .map(|d| {
                Disk::new(
                    d.id.clone(),
                    crate::geom::Point2::new(&d.center.x * factor, &d.center.y * factor),
                    &d.radius * factor,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        DiskInstance::new(disks)
    }
}

impl GuessInstance for DiskInstance {
    fn len(&self) -> usize {
        self.disks.len()
    }

    fn id(&self, i: usize) -> &str {
        &self.disks[i].id
    }

    fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    fn slot_count(&self) -> usize {
        self.classes.len()
    }

    fn slot_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    fn axis_position(&self, i: usize) -> &Scalar {
        &self.disks[i].center.x
    }

    fn region(&self, i: usize, guess: &Guess) -> Option<Side> {
        let Slot::Pair(a, b) = guess.slots[self.class_of[i]] else {
            return None;
        };
        let (a, b, q) = (&self.disks[a].center, &self.disks[b].center, &self.disks[i].center);
        if in_slab(a, b, q, Side::Upper) {
            Some(Side::Upper)
        } else if in_slab(a, b, q, Side::Lower) {
            Some(Side::Lower)
        } else {
            None
        }
    }
}

/// All valid guesses, in enumeration order.
pub fn enumerate_guesses(inst: &DiskInstance) -> Vec<Guess> {
    cobipartite::enumerate_guesses(inst)
}

pub fn max_clique_kradii_with(inst: &DiskInstance, opts: &SolveOptions) -> Result<SolveReport> {
    cobipartite::max_clique_over_guesses(inst, opts)
}

/// Maximum clique with the default guess budget.
pub fn max_clique_kradii(inst: &DiskInstance) -> Result<CliqueResult> {
    Ok(max_clique_kradii_with(inst, &SolveOptions::default())?.result)
}
