//! Brute-force baselines: explicit intersection graphs and Bron-Kerbosch.
//!
//! Nothing here shares code with the slab algorithms beyond the exact
//! pairwise predicates, so the two can check each other.

use crate::error::{Error, Result};
use crate::geom::{balls_intersect, disks_intersect, Ball, Disk};
use crate::range::Rect;

/// Hard cap for plain (non-pivoting) Bron-Kerbosch.
pub const PLAIN_CAP: usize = 25;
/// Hard cap for pivoting Bron-Kerbosch. Must stay <= 64 (bitmask rows).
pub const PIVOT_CAP: usize = 60;

/// Undirected graph on at most 64 vertices, vertices ordered by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleGraph {
    ids: Vec<String>,
    rows: Vec<u64>,
}

impl OracleGraph {
    /// Graph from ids and a symmetric predicate over the given order. Ids are
    /// re-sorted; `adjacent` sees the caller's original indices.
    pub fn new(ids: Vec<String>, adjacent: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = ids.len();
        if n > 64 {
            return Err(Error::TooLarge { n, cap: 64 });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(order[i], order[j]) {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        let ids = order.into_iter().map(|i| ids[i].clone()).collect();
        Ok(OracleGraph { ids, rows })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(k, &u)| members[k + 1..].iter().all(|&v| self.adjacent(u, v)))
    }
}

pub fn disk_graph(disks: &[Disk]) -> Result<OracleGraph> {
    OracleGraph::new(disks.iter().map(|d| d.id.clone()).collect(), |i, j| disks_intersect(&disks[i], &disks[j]))
}

pub fn ball_graph(balls: &[Ball]) -> Result<OracleGraph> {
    OracleGraph::new(balls.iter().map(|b| b.id.clone()).collect(), |i, j| balls_intersect(&balls[i], &balls[j]))
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (set != 0).then(|| {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            i
        })
    })
}

fn members_of(set: u64) -> Vec<usize> {
    bits(set).collect()
}

/// Keeps the largest clique; among equal sizes the smallest sorted index
/// list, which is also the smallest id list.
struct Best(Vec<usize>);

impl Best {
    fn offer(&mut self, clique: u64) {
        let cand = members_of(clique);
        if cand.len() > self.0.len() || (cand.len() == self.0.len() && cand < self.0) {
            self.0 = cand;
        }
    }
}

fn plain(g: &OracleGraph, r: u64, mut p: u64, mut x: u64, best: &mut Best) {
    if p == 0 {
        if x == 0 {
            best.offer(r);
        }
        return;
    }
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        plain(g, r | 1 << v, p & g.rows[v], x & g.rows[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

fn pivoting(g: &OracleGraph, r: u64, mut p: u64, mut x: u64, best: &mut Best) {
    if p == 0 {
        if x == 0 {
            best.offer(r);
        }
        return;
    }
    let pivot =
        bits(p | x).max_by_key(|&u| ((p & g.rows[u]).count_ones(), std::cmp::Reverse(u))).expect("p is nonempty");
    for v in bits(p & !g.rows[pivot]) {
        pivoting(g, r | 1 << v, p & g.rows[v], x & g.rows[v], best);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Vertices in degeneracy order (repeatedly remove a minimum-degree vertex,
/// smallest index on ties).
fn degeneracy_order(g: &OracleGraph) -> Vec<usize> {
    let n = g.len();
    let mut alive: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while alive != 0 {
        let v = bits(alive)
            .min_by_key(|&u| (((g.rows[u] & !(1 << u)) & alive).count_ones(), u))
            .expect("alive is nonempty");
        order.push(v);
        alive &= !(1 << v);
    }
    order
}

fn self_free(g: &OracleGraph) -> OracleGraph {
    OracleGraph { ids: g.ids.clone(), rows: g.rows.iter().enumerate().map(|(i, r)| r & !(1 << i)).collect() }
}

/// Maximum clique by pivoting Bron-Kerbosch over a degeneracy ordering.
/// Returns sorted vertex indices (equivalently sorted ids).
pub fn bron_kerbosch_max_clique(g: &OracleGraph) -> Result<Vec<usize>> {
    bron_kerbosch_max_clique_capped(g, PIVOT_CAP)
}

pub fn bron_kerbosch_max_clique_capped(g: &OracleGraph, cap: usize) -> Result<Vec<usize>> {
    if g.len() > cap.min(64) {
        return Err(Error::TooLarge { n: g.len(), cap });
    }
    let g = self_free(g);
    let mut best = Best(Vec::new());
    let mut earlier = 0u64;
    for v in degeneracy_order(&g) {
        let later = g.rows[v] & !earlier;
        pivoting(&g, 1 << v, later, g.rows[v] & earlier, &mut best);
        earlier |= 1 << v;
    }
    verified(&g, best.0)
}

/// Maximum clique by plain Bron-Kerbosch (no pivot).
pub fn bron_kerbosch_plain(g: &OracleGraph) -> Result<Vec<usize>> {
    if g.len() > PLAIN_CAP {
        return Err(Error::TooLarge { n: g.len(), cap: PLAIN_CAP });
    }
    let g = self_free(g);
    let n = g.len();
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let mut best = Best(Vec::new());
    plain(&g, 0, all, 0, &mut best);
    verified(&g, best.0)
}

fn verified(g: &OracleGraph, clique: Vec<usize>) -> Result<Vec<usize>> {
    if !g.is_clique(&clique) {
        return Err(Error::Internal("oracle produced a non-clique".into()));
    }
    Ok(clique)
}

/// Ids of a maximum clique of the disk intersection graph.
pub fn max_clique_disks(disks: &[Disk]) -> Result<Vec<String>> {
    let g = disk_graph(disks)?;
    Ok(bron_kerbosch_max_clique(&g)?.into_iter().map(|i| g.ids[i].clone()).collect())
}

/// Ids of a maximum clique of the ball intersection graph.
pub fn max_clique_balls(balls: &[Ball]) -> Result<Vec<String>> {
    let g = ball_graph(balls)?;
    Ok(bron_kerbosch_max_clique(&g)?.into_iter().map(|i| g.ids[i].clone()).collect())
}

/// Disks whose centers lie in the closed rectangle.
pub fn disks_in_rect<'a>(disks: &'a [Disk], rect: &Rect) -> Vec<&'a Disk> {
    disks.iter().filter(|d| rect.contains(&d.center)).collect()
}

/// Maximum clique size among the disks centered in `rect`.
pub fn naive_rect_clique(disks: &[Disk], rect: &Rect) -> Result<usize> {
    let inside: Vec<Disk> = disks_in_rect(disks, rect).into_iter().cloned().collect();
    Ok(bron_kerbosch_max_clique(&disk_graph(&inside)?)?.len())
}
