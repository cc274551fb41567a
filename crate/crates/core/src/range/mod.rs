//! Maximum cliques for every axis-aligned rectangle spanned by unit-disk
//! centers.
//!
//! Rectangles are addressed by four positions: left `l` and right `r` in the
//! x-sorted order, top `t` and bottom `b` in the y-sorted order, so the
//! rectangle `(l, r, t, b)` is `[x_l, x_r] × [y_b, y_t]`.
//!
//! * `S[l, r, t, b]` is the largest clique among disks adjacent to both `p_l`
//!   and `p_r` (the x-extremes) centered in the rectangle, or 0 unless both
//!   extremes are inside it. It is filled by sweeping each slab `(l, r)`
//!   upward while maintaining a conflict-graph matching under insertions and
//!   deletions.
//! * `M[l, r, t, b]` is the maximum clique in the rectangle, by a DP that
//!   either takes `S` or shrinks one side by one position.
//!
//! Both tables are dense `n^4` arrays of `u32`.

mod file;

pub use file::{read_tables, write_tables, TableFile, TABLE_MAGIC, TABLE_VERSION};

use rayon::prelude::*;

use crate::cobipartite::Adjacency;
use crate::error::{Error, Result};
use crate::geom::{disks_intersect, in_slab, Disk, Point2, Side};
use crate::matching::{ConflictGraph, Part};
use crate::scalar::Scalar;

/// Default cap on instance size; `n^4` entries per table.
pub const DEFAULT_MAX_N: usize = 64;

/// Closed axis-aligned rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x1: Scalar,
    pub y1: Scalar,
    pub x2: Scalar,
    pub y2: Scalar,
}

impl Rect {
    pub fn new(x1: Scalar, y1: Scalar, x2: Scalar, y2: Scalar) -> Result<Self> {
        if x1 > x2 || y1 > y2 {
            return Err(Error::Invalid(format!("malformed rectangle [{x1}, {x2}] x [{y1}, {y2}]")));
        }
        Ok(Rect { x1, y1, x2, y2 })
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.x1 <= p.x && p.x <= self.x2 && self.y1 <= p.y && p.y <= self.y2
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x1 <= other.x1 && other.x2 <= self.x2 && self.y1 <= other.y1 && other.y2 <= self.y2
    }
}

/// Equal-radius disks in general position (distinct x, distinct y).
#[derive(Clone, Debug)]
pub struct UnitInstance {
    disks: Vec<Disk>,
    by_x: Vec<usize>,
    by_y: Vec<usize>,
    y_rank: Vec<usize>,
    adjacency: Adjacency,
}

impl UnitInstance {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        Self::with_cap(disks, DEFAULT_MAX_N)
    }

    pub fn with_cap(mut disks: Vec<Disk>, max_n: usize) -> Result<Self> {
        let n = disks.len();
        if n == 0 {
            return Err(Error::Invalid("no disks".into()));
        }
        if n > max_n {
            return Err(Error::TooLarge { n, cap: max_n });
        }
        disks.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = disks.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Invalid(format!("duplicate disk id {:?}", w[0].id)));
        }
        if let Some(d) = disks.iter().find(|d| d.radius != disks[0].radius) {
            return Err(Error::Invalid(format!(
                "disk {} has radius {}, expected {} for all disks",
                d.id, d.radius, disks[0].radius
            )));
        }
        let mut by_x: Vec<usize> = (0..n).collect();
        by_x.sort_by(|&a, &b| disks[a].center.x.cmp(&disks[b].center.x));
        let mut by_y: Vec<usize> = (0..n).collect();
        by_y.sort_by(|&a, &b| disks[a].center.y.cmp(&disks[b].center.y));
        for (order, axis) in [(&by_x, "x"), (&by_y, "y")] {
            for w in order.windows(2) {
                let (a, b) = (&disks[w[0]], &disks[w[1]]);
                let same = if axis == "x" { a.center.x == b.center.x } else { a.center.y == b.center.y };
                if same {
                    return Err(Error::Invalid(format!(
                        "disks {} and {} share a {axis}-coordinate (general position required)",
                        a.id, b.id
                    )));
                }
            }
        }
        let mut y_rank = vec![0; n];
        for (rank, &i) in by_y.iter().enumerate() {
            y_rank[i] = rank;
        }
        let adjacency = Adjacency::from_fn(n, |i, j| disks_intersect(&disks[i], &disks[j]));
        Ok(UnitInstance { disks, by_x, by_y, y_rank, adjacency })
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Disk indices in increasing x.
    pub fn by_x(&self) -> &[usize] {
        &self.by_x
    }

    /// Disk indices in increasing y.
    pub fn by_y(&self) -> &[usize] {
        &self.by_y
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    /// Rectangle spanned by positions `(l, r, t, b)`.
    pub fn rect_of(&self, l: usize, r: usize, t: usize, b: usize) -> Result<Rect> {
        let c = |i: usize| &self.disks[i].center;
        Rect::new(
            c(self.by_x[l]).x.clone(),
            c(self.by_y[b]).y.clone(),
            c(self.by_x[r]).x.clone(),
            c(self.by_y[t]).y.clone(),
        )
    }

    /// Candidates of slab `(l, r)`: disks within its x-range adjacent to
    /// both extremes, tagged with their side (segment points go left/upper).
    fn slab_candidates(&self, l: usize, r: usize) -> Vec<(usize, Part)> {
        let (pl, pr) = (self.by_x[l], self.by_x[r]);
        if !self.adjacency.adjacent(pl, pr) {
            return Vec::new();
        }
        let (a, b) = (&self.disks[pl].center, &self.disks[pr].center);
        self.by_x[l..=r]
            .iter()
            .filter(|&&q| self.adjacency.adjacent(q, pl) && self.adjacency.adjacent(q, pr))
            .map(|&q| {
                let part = if in_slab(a, b, &self.disks[q].center, Side::Upper) { Part::Left } else { Part::Right };
                (q, part)
            })
            .collect()
    }
}

fn table_index(n: usize, l: usize, r: usize, t: usize, b: usize) -> usize {
    ((l * n + r) * n + t) * n + b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct STable {
    n: usize,
    sizes: Vec<u32>,
}

impl STable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: usize, r: usize, t: usize, b: usize) -> u32 {
        self.sizes[table_index(self.n, l, r, t, b)]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.sizes
    }

    pub fn from_raw(n: usize, sizes: Vec<u32>) -> Result<Self> {
        if sizes.len() != n.pow(4) {
            return Err(Error::Parse(format!("S table has {} entries, expected {}", sizes.len(), n.pow(4))));
        }
        Ok(STable { n, sizes })
    }
}

/// How an `M` entry was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Equal to the `S` entry of the same rectangle.
    Slab = 0,
    /// Left side moved one position right.
    ShrinkLeft = 1,
    /// Right side moved one position left.
    ShrinkRight = 2,
    /// Top side moved one position down.
    ShrinkTop = 3,
    /// Bottom side moved one position up.
    ShrinkBottom = 4,
}

impl Witness {
    pub fn code(self) -> u32 {
        self as u32
    }

    pub fn from_code(code: u32) -> Result<Self> {
        Ok(match code {
            0 => Witness::Slab,
            1 => Witness::ShrinkLeft,
            2 => Witness::ShrinkRight,
            3 => Witness::ShrinkTop,
            4 => Witness::ShrinkBottom,
            other => return Err(Error::Parse(format!("bad witness code {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTable {
    n: usize,
    sizes: Vec<u32>,
    witness: Vec<Witness>,
}

impl MTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: usize, r: usize, t: usize, b: usize) -> u32 {
        self.sizes[table_index(self.n, l, r, t, b)]
    }

    pub fn witness(&self, l: usize, r: usize, t: usize, b: usize) -> Witness {
        self.witness[table_index(self.n, l, r, t, b)]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.sizes
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witness
    }

    pub fn from_raw(n: usize, sizes: Vec<u32>, witness: Vec<Witness>) -> Result<Self> {
        if sizes.len() != n.pow(4) || witness.len() != n.pow(4) {
            return Err(Error::Parse("M table size mismatch".into()));
        }
        Ok(MTable { n, sizes, witness })
    }
}

fn insert_candidate(g: &mut ConflictGraph, adjacency: &Adjacency, q: usize, part: Part) -> Result<()> {
    let conflicts: Vec<usize> =
        g.vertices(part.opposite()).into_iter().filter(|&w| !adjacency.adjacent(q, w)).collect();
    g.insert_vertex(q, part, &conflicts)
}

/// Fills `S[l, r, ·, ·]` (one contiguous `n^3` block) for every `r >= l`.
fn sweep_left_block(inst: &UnitInstance, l: usize, block: &mut [u32]) -> Result<()> {
    let n = inst.len();
    let at = |r: usize, t: usize, b: usize| (r * n + t) * n + b;
    for r in l..n {
        let candidates = inst.slab_candidates(l, r);
        if candidates.is_empty() {
            continue;
        }
        let mut part_of = vec![None; n];
        for &(q, part) in &candidates {
            part_of[q] = Some(part);
        }
        let (yl, yr) = (inst.y_rank[inst.by_x[l]], inst.y_rank[inst.by_x[r]]);
        let (lo, hi) = (yl.min(yr), yl.max(yr));

        // Phase 1: bottom line at the lowest center, top line moves up.
        let mut graph = ConflictGraph::new();
        let mut strips: Vec<ConflictGraph> = Vec::with_capacity(n - hi);
        for t in 0..n {
            let q = inst.by_y[t];
            if let Some(part) = part_of[q] {
                insert_candidate(&mut graph, &inst.adjacency, q, part)?;
            }
            if t >= hi {
                block[at(r, t, 0)] = (graph.vertex_count() - graph.matching_size()) as u32;
                strips.push(graph.clone());
            }
        }
        // Phase 2: bottom line moves up; each recorded strip loses the center
        // it passes.
        for b in 1..=lo {
            let q = inst.by_y[b - 1];
            if part_of[q].is_none() {
                for (k, strip) in strips.iter().enumerate() {
                    block[at(r, hi + k, b)] = (strip.vertex_count() - strip.matching_size()) as u32;
                }
                continue;
            }
            for (k, strip) in strips.iter_mut().enumerate() {
                strip.delete_vertex(q)?;
                block[at(r, hi + k, b)] = (strip.vertex_count() - strip.matching_size()) as u32;
            }
        }
    }
    Ok(())
}

pub fn build_s_table(inst: &UnitInstance) -> Result<STable> {
    let n = inst.len();
    let block = n.pow(3);
    let mut sizes = vec![0u32; n.pow(4)];
    sizes.par_chunks_mut(block).enumerate().try_for_each(|(l, chunk)| sweep_left_block(inst, l, chunk))?;
    Ok(STable { n, sizes })
}

pub fn build_m_table(inst: &UnitInstance, s: &STable) -> Result<MTable> {
    let n = inst.len();
    if s.n != n {
        return Err(Error::Precondition(format!("S table is for n = {}, instance has {n}", s.n)));
    }
    let mut sizes = vec![0u32; n.pow(4)];
    let mut witness = vec![Witness::Slab; n.pow(4)];
    let idx = |l, r, t, b| table_index(n, l, r, t, b);
    for width in 0..n {
        for height in 0..n {
            for l in 0..n - width {
                let r = l + width;
                let (yl, yr) = (inst.y_rank[inst.by_x[l]], inst.y_rank[inst.by_x[r]]);
                for b in 0..n - height {
                    let t = b + height;
                    let mut best = (0u32, Witness::Slab);
                    let mut offer = |value: u32, w: Witness| {
                        if value > best.0 {
                            best = (value, w);
                        }
                    };
                    if (b..=t).contains(&yl) && (b..=t).contains(&yr) {
                        offer(s.sizes[idx(l, r, t, b)], Witness::Slab);
                    }
                    if l < r {
                        offer(sizes[idx(l + 1, r, t, b)], Witness::ShrinkLeft);
                        offer(sizes[idx(l, r - 1, t, b)], Witness::ShrinkRight);
                    }
                    if b < t {
                        offer(sizes[idx(l, r, t - 1, b)], Witness::ShrinkTop);
                        offer(sizes[idx(l, r, t, b + 1)], Witness::ShrinkBottom);
                    }
                    sizes[idx(l, r, t, b)] = best.0;
                    witness[idx(l, r, t, b)] = best.1;
                }
            }
        }
    }
    Ok(MTable { n, sizes, witness })
}

/// Both tables for an instance.
#[derive(Clone, Debug)]
pub struct RangeTables {
    pub s: STable,
    pub m: MTable,
}

pub fn build_tables(inst: &UnitInstance) -> Result<RangeTables> {
    let s = build_s_table(inst)?;
    let m = build_m_table(inst, &s)?;
    Ok(RangeTables { s, m })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeAnswer {
    pub size: usize,
    /// Disk indices, sorted.
    pub members: Vec<usize>,
    pub ids: Vec<String>,
    /// Positions `(l, r, t, b)` of the smallest enclosing table rectangle.
    pub cell: Option<(usize, usize, usize, usize)>,
}

/// Positions of the extreme centers inside `rect`, if any.
pub fn locate(inst: &UnitInstance, rect: &Rect) -> Option<(usize, usize, usize, usize)> {
    let xs = |i: usize| &inst.disks[inst.by_x[i]].center.x;
    let ys = |i: usize| &inst.disks[inst.by_y[i]].center.y;
    let n = inst.len();
    let l = partition(n, |i| xs(i) < &rect.x1);
    let r_end = partition(n, |i| xs(i) <= &rect.x2);
    let b = partition(n, |i| ys(i) < &rect.y1);
    let t_end = partition(n, |i| ys(i) <= &rect.y2);
    (l < r_end && b < t_end).then(|| (l, r_end - 1, t_end - 1, b))
}

/// First index in `0..n` where `pred` turns false (`pred` monotone).
fn partition(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Maximum clique among disks centered in `rect`, with a witness recovered
/// by re-solving the slab rectangle the DP pointers lead to.
pub fn query_rect(inst: &UnitInstance, m: &MTable, rect: &Rect) -> Result<RangeAnswer> {
    if m.n != inst.len() {
        return Err(Error::Precondition("table does not belong to this instance".into()));
    }
    let Some(cell) = locate(inst, rect) else {
        return Ok(RangeAnswer { size: 0, members: vec![], ids: vec![], cell: None });
    };
    let (mut l, mut r, mut t, mut b) = cell;
    let size = m.get(l, r, t, b) as usize;
    if size == 0 {
        return Ok(RangeAnswer { size: 0, members: vec![], ids: vec![], cell: Some(cell) });
    }
    loop {
        match m.witness(l, r, t, b) {
            Witness::Slab => break,
            Witness::ShrinkLeft => l += 1,
            Witness::ShrinkRight => r -= 1,
            Witness::ShrinkTop => t -= 1,
            Witness::ShrinkBottom => b += 1,
        }
    }
    let members = solve_slab_rect(inst, l, r, t, b)?;
    if members.len() != size {
        return Err(Error::Internal(format!(
            "witness for cell {cell:?} has {} members, table says {size}",
            members.len()
        )));
    }
    if !inst.adjacency.is_clique(&members) || !members.iter().all(|&i| rect.contains(&inst.disks[i].center)) {
        return Err(Error::Internal(format!("witness for cell {cell:?} is not a clique inside the query")));
    }
    let ids = members.iter().map(|&i| inst.disks[i].id.clone()).collect();
    Ok(RangeAnswer { size, members, ids, cell: Some(cell) })
}

/// Maximum clique of one slab rectangle from scratch (the `S` definition).
pub fn solve_slab_rect(inst: &UnitInstance, l: usize, r: usize, t: usize, b: usize) -> Result<Vec<usize>> {
    let inside = |q: usize| (b..=t).contains(&inst.y_rank[q]);
    let (pl, pr) = (inst.by_x[l], inst.by_x[r]);
    if !inside(pl) || !inside(pr) {
        return Ok(Vec::new());
    }
    let candidates = inst.slab_candidates(l, r);
    let left: Vec<usize> = candidates.iter().filter(|c| c.1 == Part::Left && inside(c.0)).map(|c| c.0).collect();
    let right: Vec<usize> = candidates.iter().filter(|c| c.1 == Part::Right && inside(c.0)).map(|c| c.0).collect();
    let mut g = ConflictGraph::build(&left, &right, |u, v| inst.adjacency.adjacent(u, v))?;
    g.max_matching();
    g.max_independent_set()
}

/// Whether the disks already satisfy general position (distinct x and y).
pub fn in_general_position(disks: &[Disk]) -> bool {
    let distinct = |mut v: Vec<&Scalar>| {
        v.sort();
        v.windows(2).all(|w| w[0] != w[1])
    };
    distinct(disks.iter().map(|d| &d.center.x).collect()) && distinct(disks.iter().map(|d| &d.center.y).collect())
}

/// Deterministic nudge into general position.
///
/// The disk with the `i`-th smallest id moves by `g (i + 1) / (2 (n + 1))` in
/// both x and y, where `g` is the smallest nonzero gap between coordinate
/// values (the radius if there is none). Every shift is below `g / 2`, so
/// strict coordinate orders are preserved and ties are broken by id.
/// Returns the input unchanged when already in general position.
pub fn perturb(disks: &[Disk]) -> (Vec<Disk>, bool) {
    if in_general_position(disks) {
        return (disks.to_vec(), false);
    }
    let mut sorted: Vec<Disk> = disks.to_vec();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut gap: Option<Scalar> = None;
    for coords in [
        sorted.iter().map(|d| d.center.x.clone()).collect::<Vec<_>>(),
        sorted.iter().map(|d| d.center.y.clone()).collect::<Vec<_>>(),
    ] {
        let mut coords = coords;
        coords.sort();
        coords.dedup();
        for w in coords.windows(2) {
            let d = &w[1] - &w[0];
            if gap.as_ref().is_none_or(|g| &d < g) {
                gap = Some(d);
            }
        }
    }
    let gap = gap.unwrap_or_else(|| sorted[0].radius.clone());
    let denom = 2 * (sorted.len() as i64 + 1);
    for (i, d) in sorted.iter_mut().enumerate() {
        let shift = &gap * &Scalar::ratio(i as i64 + 1, denom);
        d.center.x = &d.center.x + &shift;
        d.center.y = &d.center.y + &shift;
    }
    (sorted, true)
}
