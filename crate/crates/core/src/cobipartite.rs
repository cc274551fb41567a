//! Guess-driven maximum clique via a cobipartite split.
//!
//! A guess fixes, for every slot (radius class, or class and plane), either
//! nothing or the two extreme members `a`, `b` of the slot's part of an
//! optimal clique. Every object that intersects all guessed objects and lies
//! in the "upper" region of its slot goes to side X, the "lower" region to
//! side Y. Each side is a clique, so the maximum clique of `X ∪ Y` is a
//! maximum independent set of the bipartite graph of non-intersecting cross
//! pairs.
//!
//! The drivers ([`crate::kradii`], [`crate::ball`]) only supply the object
//! model through [`GuessInstance`]; enumeration, assembly, solving and the
//! parallel reduction live here.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Side;
use crate::matching::ConflictGraph;
use crate::scalar::Scalar;

/// Default guess budget for the drivers.
pub const DEFAULT_GUESS_BUDGET: u128 = 100_000_000;

/// Symmetric adjacency matrix over object indices.
#[derive(Clone, Debug)]
pub struct Adjacency {
    rows: Vec<FixedBitSet>,
}

impl Adjacency {
    pub fn from_fn(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            rows[i].insert(i);
            for j in i + 1..n {
                if adjacent(i, j) {
                    rows[i].insert(j);
                    rows[j].insert(i);
                }
            }
        }
        Adjacency { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(k, &u)| members[k + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Absent,
    /// Extreme members along the slot axis, `a` first. `a == b` allowed.
    Pair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guess {
    pub slots: Vec<Slot>,
}

impl Guess {
    /// The guessed objects, sorted and deduplicated.
    pub fn members(&self) -> Vec<usize> {
        let mut psi: Vec<usize> = self
            .slots
            .iter()
            .flat_map(|s| match *s {
                Slot::Absent => vec![],
                Slot::Pair(a, b) => vec![a, b],
            })
            .collect();
        psi.sort_unstable();
        psi.dedup();
        psi
    }

    pub fn is_empty(&self) -> bool {
        self.slots.iter().all(|s| *s == Slot::Absent)
    }
}

/// Object model the engine runs on. Object indices must be ordered like the
/// object ids so that index order doubles as id order.
pub trait GuessInstance: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn id(&self, i: usize) -> &str;

    fn adjacency(&self) -> &Adjacency;

    fn slot_count(&self) -> usize;

    /// Slot of object `i`.
    fn slot_of(&self, i: usize) -> usize;

    /// Position of object `i` along its slot's left-to-right axis.
    fn axis_position(&self, i: usize) -> &Scalar;

    /// Region of object `i` under `guess`, before the intersect-all-of-Ψ
    /// filter: `Some(Upper)` for side X, `Some(Lower)` for side Y, `None`
    /// when outside both (or its slot is absent). Objects in both regions
    /// must report `Upper`.
    fn region(&self, i: usize, guess: &Guess) -> Option<Side>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidates {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    /// Object indices, sorted.
    pub members: Vec<usize>,
    pub ids: Vec<String>,
    pub size: usize,
    pub witness_guess: Guess,
}

impl CliqueResult {
    /// Total order used by every reduction: larger cliques first, then the
    /// lexicographically smallest id list, then the smallest guess.
    pub fn preference(&self, other: &CliqueResult) -> Ordering {
        other
            .size
            .cmp(&self.size)
            .then_with(|| self.members.cmp(&other.members))
            .then_with(|| self.witness_guess.cmp(&other.witness_guess))
    }

    fn better(self, other: CliqueResult) -> CliqueResult {
        if other.preference(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

fn before<I: GuessInstance + ?Sized>(inst: &I, a: usize, b: usize) -> bool {
    (inst.axis_position(a), a) <= (inst.axis_position(b), b)
}

/// Checks slot membership, pair order, pair adjacency and that Ψ is
/// pairwise intersecting.
pub fn validate_guess<I: GuessInstance + ?Sized>(inst: &I, guess: &Guess) -> Result<()> {
    if guess.slots.len() != inst.slot_count() {
        return Err(Error::InvalidGuess(format!(
            "{} slots given, instance has {}",
            guess.slots.len(),
            inst.slot_count()
        )));
    }
    if guess.is_empty() {
        return Err(Error::InvalidGuess("all slots absent".into()));
    }
    for (s, slot) in guess.slots.iter().enumerate() {
        if let Slot::Pair(a, b) = *slot {
            if a >= inst.len() || b >= inst.len() {
                return Err(Error::InvalidGuess(format!("slot {s}: object index out of range")));
            }
            if inst.slot_of(a) != s || inst.slot_of(b) != s {
                return Err(Error::InvalidGuess(format!("slot {s}: pair members belong to another slot")));
            }
            if !before(inst, a, b) {
                return Err(Error::InvalidGuess(format!("slot {s}: pair out of axis order")));
            }
        }
    }
    let psi = guess.members();
    if !inst.adjacency().is_clique(&psi) {
        return Err(Error::InvalidGuess("guessed objects are not pairwise intersecting".into()));
    }
    Ok(())
}

/// Splits the objects that intersect every guessed object into the upper
/// side X and lower side Y.
pub fn assemble_candidates<I: GuessInstance + ?Sized>(inst: &I, guess: &Guess) -> Result<Candidates> {
    validate_guess(inst, guess)?;
    let adjacency = inst.adjacency();
    let mut common = FixedBitSet::with_capacity(inst.len());
    common.insert_range(..);
    for a in guess.members() {
        common.intersect_with(adjacency.row(a));
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for i in common.ones() {
        match inst.region(i, guess) {
            Some(Side::Upper) => x.push(i),
            Some(Side::Lower) => y.push(i),
            None => {}
        }
    }
    Ok(Candidates { x, y })
}

/// Whether `side` is pairwise intersecting. The slab covering guarantees
/// this for every assembled side; a `false` is a bug.
pub fn assert_side_clique<I: GuessInstance + ?Sized>(inst: &I, side: &[usize]) -> bool {
    inst.adjacency().is_clique(side)
}

/// Maximum clique among the candidates of one guess.
pub fn solve_guess<I: GuessInstance + ?Sized>(inst: &I, guess: &Guess) -> Result<CliqueResult> {
    let candidates = assemble_candidates(inst, guess)?;
    solve_candidates(inst, guess, &candidates)
}

fn solve_candidates<I: GuessInstance + ?Sized>(inst: &I, guess: &Guess, c: &Candidates) -> Result<CliqueResult> {
    let adjacency = inst.adjacency();
    if cfg!(debug_assertions) {
        for (name, side) in [("X", &c.x), ("Y", &c.y)] {
            if !assert_side_clique(inst, side) {
                return Err(Error::Internal(format!("side {name} of guess {guess:?} is not a clique")));
            }
        }
    }
    let mut graph = ConflictGraph::build(&c.x, &c.y, |u, v| adjacency.adjacent(u, v))?;
    graph.max_matching();
    let members = graph.max_independent_set()?;
    let ids = members.iter().map(|&i| inst.id(i).to_owned()).collect();
    Ok(CliqueResult { size: members.len(), members, ids, witness_guess: guess.clone() })
}

/// Objects of each slot sorted along the slot axis.
fn slot_objects<I: GuessInstance + ?Sized>(inst: &I) -> Vec<Vec<usize>> {
    let mut by_slot = vec![Vec::new(); inst.slot_count()];
    for i in 0..inst.len() {
        by_slot[inst.slot_of(i)].push(i);
    }
    for objs in &mut by_slot {
        objs.sort_by(|&a, &b| (inst.axis_position(a), a).cmp(&(inst.axis_position(b), b)));
    }
    by_slot
}

/// Options for every slot: `Absent` followed by the ordered pairs. With
/// `prune`, pairs whose members do not intersect are dropped.
pub fn slot_options<I: GuessInstance + ?Sized>(inst: &I, prune: bool) -> Vec<Vec<Slot>> {
    let adjacency = inst.adjacency();
    slot_objects(inst)
        .into_iter()
        .map(|objs| {
            let mut options = vec![Slot::Absent];
            for (k, &a) in objs.iter().enumerate() {
                for &b in &objs[k..] {
                    if !prune || adjacency.adjacent(a, b) {
                        options.push(Slot::Pair(a, b));
                    }
                }
            }
            options
        })
        .collect()
}

/// Closed-form number of guesses before pruning:
/// `prod(1 + n_s + n_s (n_s - 1) / 2) - 1`.
pub fn guess_count_estimate<I: GuessInstance + ?Sized>(inst: &I) -> u128 {
    let mut sizes = vec![0u128; inst.slot_count()];
    for i in 0..inst.len() {
        sizes[inst.slot_of(i)] += 1;
    }
    sizes.iter().map(|&n| 1 + n + n * n.saturating_sub(1) / 2).product::<u128>() - 1
}

/// Depth-first walk over slot options, skipping any choice that breaks
/// pairwise intersection of Ψ. Calls `visit` for every non-empty guess.
fn walk<I: GuessInstance + ?Sized>(
    inst: &I,
    options: &[Vec<Slot>],
    slots: &mut Vec<Slot>,
    psi: &mut Vec<usize>,
    visit: &mut dyn FnMut(&Guess),
) {
    if slots.len() == options.len() {
        if psi.is_empty() {
            return;
        }
        visit(&Guess { slots: slots.clone() });
        return;
    }
    let adjacency = inst.adjacency();
    for &slot in &options[slots.len()] {
        let added: &[usize] = match slot {
            Slot::Absent => &[],
            Slot::Pair(a, b) if a == b => &[a],
            Slot::Pair(a, b) => &[a, b],
        };
        let added = added.to_vec();
        if !added.iter().all(|&u| psi.iter().all(|&v| adjacency.adjacent(u, v))) {
            continue;
        }
        psi.extend_from_slice(&added);
        slots.push(slot);
        walk(inst, options, slots, psi, visit);
        slots.pop();
        psi.truncate(psi.len() - added.len());
    }
}

/// Every valid guess in enumeration order.
pub fn enumerate_guesses<I: GuessInstance + ?Sized>(inst: &I) -> Vec<Guess> {
    let options = slot_options(inst, true);
    let mut out = Vec::new();
    walk(inst, &options, &mut Vec::new(), &mut Vec::new(), &mut |g| out.push(g.clone()));
    out
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Refuse instances whose closed-form guess count exceeds this.
    pub budget: Option<u128>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { budget: Some(DEFAULT_GUESS_BUDGET) }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub result: CliqueResult,
    /// Closed-form guess count before pruning.
    pub guesses_estimated: u128,
    /// Guesses that survived pruning and were solved.
    pub guesses_solved: u64,
}

/// Maximum clique over all guesses, reduced in parallel with the total order
/// of [`CliqueResult::preference`].
pub fn max_clique_over_guesses<I: GuessInstance + ?Sized>(inst: &I, opts: &SolveOptions) -> Result<SolveReport> {
    if inst.is_empty() {
        return Err(Error::Invalid("empty instance".into()));
    }
    let estimate = guess_count_estimate(inst);
    if let Some(budget) = opts.budget {
        if estimate > budget {
            log::warn!("guess count estimate {estimate} exceeds budget {budget}");
            return Err(Error::BudgetExceeded { estimate, budget });
        }
    }
    let options = slot_options(inst, true);
    let (first, rest) = options.split_first().expect("at least one slot");

    let partial: Vec<Result<(Option<CliqueResult>, u64)>> = first
        .par_iter()
        .map(|&head| {
            let mut best: Option<CliqueResult> = None;
            let mut solved = 0u64;
            let mut failure = None;
            let mut sub_options = vec![vec![head]];
            sub_options.extend(rest.iter().cloned());
            walk(inst, &sub_options, &mut Vec::new(), &mut Vec::new(), &mut |guess| {
                if failure.is_some() {
                    return;
                }
                match solve_guess(inst, guess) {
                    Ok(r) => {
                        solved += 1;
                        best = Some(match best.take() {
                            None => r,
                            Some(b) => b.better(r),
                        });
                    }
                    Err(e) => failure = Some(e),
                }
            });
            match failure {
                Some(e) => Err(e),
                None => Ok((best, solved)),
            }
        })
        .collect();

    let mut best: Option<CliqueResult> = None;
    let mut solved = 0;
    for part in partial {
        let (candidate, count) = part?;
        solved += count;
        if let Some(c) = candidate {
            best = Some(match best.take() {
                None => c,
                Some(b) => b.better(c),
            });
        }
    }
    let result = best.ok_or_else(|| Error::Internal("no valid guess for a nonempty instance".into()))?;
    if !inst.adjacency().is_clique(&result.members) {
        return Err(Error::Internal("reported clique is not pairwise intersecting".into()));
    }
    Ok(SolveReport { result, guesses_estimated: estimate, guesses_solved: solved })
}
