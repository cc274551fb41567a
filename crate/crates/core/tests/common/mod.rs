//! Brute-force baselines shared by the integration tests. Nothing here calls
//! the library's predicates or solvers.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slabclique::geom::{Ball, Disk, Point2};
use slabclique::Scalar;

pub fn sq(v: &Scalar) -> Scalar {
    v * v
}

pub fn meet2(a: &Disk, b: &Disk) -> bool {
    let d = sq(&(&a.center.x - &b.center.x)) + sq(&(&a.center.y - &b.center.y));
    d <= sq(&(&a.radius + &b.radius))
}

pub fn meet3(a: &Ball, b: &Ball) -> bool {
    let d = sq(&(&a.center.x - &b.center.x)) + sq(&(&a.center.y - &b.center.y)) + sq(&(&a.center.z - &b.center.z));
    d <= sq(&(&a.radius + &b.radius))
}

/// Neighbour bitmasks (no self bits). At most 64 objects.
pub fn masks<T>(objs: &[T], meet: impl Fn(&T, &T) -> bool) -> Vec<u64> {
    assert!(objs.len() <= 64);
    let mut adj = vec![0u64; objs.len()];
    for i in 0..objs.len() {
        for j in i + 1..objs.len() {
            if meet(&objs[i], &objs[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn grow(adj: &[u64], r: u64, p: u64, best: &mut u64) {
    if p == 0 {
        if r.count_ones() > best.count_ones() {
            *best = r;
        }
        return;
    }
    if r.count_ones() + p.count_ones() <= best.count_ones() {
        return;
    }
    let v = p.trailing_zeros() as usize;
    grow(adj, r | 1 << v, p & adj[v], best);
    grow(adj, r, p & !(1 << v), best);
}

/// Largest clique inside `candidates`, as a bitmask.
pub fn max_clique_in(adj: &[u64], candidates: u64) -> u64 {
    let mut best = 0;
    grow(adj, 0, candidates, &mut best);
    best
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn brute_disks(disks: &[Disk]) -> usize {
    max_clique_in(&masks(disks, meet2), full(disks.len())).count_ones() as usize
}

pub fn brute_balls(balls: &[Ball]) -> usize {
    max_clique_in(&masks(balls, meet3), full(balls.len())).count_ones() as usize
}

pub fn pairwise<T>(objs: &[&T], meet: impl Fn(&T, &T) -> bool) -> bool {
    objs.iter().enumerate().all(|(k, a)| objs[k + 1..].iter().all(|b| meet(a, b)))
}

/// Looks the ids up and checks they are distinct and pairwise intersecting.
pub fn is_disk_clique(disks: &[Disk], ids: &[String]) -> bool {
    let picked: Option<Vec<&Disk>> = ids.iter().map(|id| disks.iter().find(|d| &d.id == id)).collect();
    let mut sorted = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    sorted.len() == ids.len() && picked.is_some_and(|p| pairwise(&p, meet2))
}

pub fn is_ball_clique(balls: &[Ball], ids: &[String]) -> bool {
    let picked: Option<Vec<&Ball>> = ids.iter().map(|id| balls.iter().find(|b| &b.id == id)).collect();
    let mut sorted = ids.to_vec();
    sorted.sort();
    sorted.dedup();
    sorted.len() == ids.len() && picked.is_some_and(|p| pairwise(&p, meet3))
}

/// Axis-parallel closed rectangle membership.
pub fn inside(p: &Point2, x1: &Scalar, y1: &Scalar, x2: &Scalar, y2: &Scalar) -> bool {
    x1 <= &p.x && &p.x <= x2 && y1 <= &p.y && &p.y <= y2
}

/// Maximum clique among disks centered in the rectangle.
pub fn brute_rect(disks: &[Disk], adj: &[u64], x1: &Scalar, y1: &Scalar, x2: &Scalar, y2: &Scalar) -> usize {
    let mut cand = 0u64;
    for (i, d) in disks.iter().enumerate() {
        if inside(&d.center, x1, y1, x2, y2) {
            cand |= 1 << i;
        }
    }
    max_clique_in(adj, cand).count_ones() as usize
}

/// Maximum bipartite matching by simple augmenting paths.
pub fn kuhn(left: &[usize], adj: impl Fn(usize) -> Vec<usize>) -> usize {
    fn go(
        u: usize,
        adj: &dyn Fn(usize) -> Vec<usize>,
        seen: &mut Vec<usize>,
        owner: &mut std::collections::HashMap<usize, usize>,
    ) -> bool {
        for v in adj(u) {
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            let free = match owner.get(&v) {
                None => true,
                Some(&w) => go(w, adj, seen, owner),
            };
            if free {
                owner.insert(v, u);
                return true;
            }
        }
        false
    }
    let mut owner = std::collections::HashMap::new();
    let mut size = 0;
    for &u in left {
        if go(u, &adj, &mut Vec::new(), &mut owner) {
            size += 1;
        }
    }
    size
}

/// Random rational `num / den` with `|num| <= span * den`.
pub fn rat(rng: &mut ChaCha8Rng, span: i64, den: i64) -> Scalar {
    Scalar::ratio(rng.gen_range(-span * den..=span * den), den)
}

/// Random rational in `[0, 1]`.
pub fn unit(rng: &mut ChaCha8Rng, den: i64) -> Scalar {
    Scalar::ratio(rng.gen_range(0..=den), den)
}
