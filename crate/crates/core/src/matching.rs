//! Bipartite conflict graphs with a maintained maximum matching.
//!
//! Vertices are small integer keys (object indices). The two sides are two
//! candidate cliques; an edge joins a pair of objects that do NOT intersect.
//! A maximum independent set of this graph is therefore a maximum clique of
//! the union, and König's theorem gives its size as `|V| - |matching|`.
//!
//! Neighbour lists are kept sorted so every search visits vertices in key
//! order, which makes matchings and independent sets reproducible.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Left,
    Right,
}

impl Part {
    pub fn opposite(self) -> Part {
        match self {
            Part::Left => Part::Right,
            Part::Right => Part::Left,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConflictGraph {
    part: Vec<Option<Part>>,
    adj: Vec<Vec<usize>>,
    mate: Vec<Option<usize>>,
    matching_size: usize,
    vertices: usize,
}

impl ConflictGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Conflict graph of `left` against `right`: `(u, v)` is an edge iff
    /// `!intersects(u, v)`. The matching starts empty.
    pub fn build(left: &[usize], right: &[usize], intersects: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut g = ConflictGraph::new();
        for &u in left {
            g.add_vertex(u, Part::Left)?;
        }
        for &v in right {
            g.add_vertex(v, Part::Right)?;
        }
        for &u in left {
            for &v in right {
                if !intersects(u, v) {
                    g.adj[u].push(v);
                    g.adj[v].push(u);
                }
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    /// Graph from an explicit edge list, `(left, right)` pairs.
    pub fn from_edges(left: &[usize], right: &[usize], edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = ConflictGraph::new();
        for &u in left {
            g.add_vertex(u, Part::Left)?;
        }
        for &v in right {
            g.add_vertex(v, Part::Right)?;
        }
        for &(u, v) in edges {
            if g.part_of(u) != Some(Part::Left) {
                return Err(Error::UnknownVertex(u));
            }
            if g.part_of(v) != Some(Part::Right) {
                return Err(Error::UnknownVertex(v));
            }
            if !g.adj[u].contains(&v) {
                g.adj[u].push(v);
                g.adj[v].push(u);
            }
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    fn add_vertex(&mut self, v: usize, part: Part) -> Result<()> {
        if v >= self.part.len() {
            self.part.resize(v + 1, None);
            self.adj.resize_with(v + 1, Vec::new);
            self.mate.resize(v + 1, None);
        }
        if self.part[v].is_some() {
            return Err(Error::DuplicateVertex(v));
        }
        self.part[v] = Some(part);
        self.vertices += 1;
        Ok(())
    }

    pub fn part_of(&self, v: usize) -> Option<Part> {
        self.part.get(v).copied().flatten()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.part_of(v).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn vertices(&self, part: Part) -> Vec<usize> {
        (0..self.part.len()).filter(|&v| self.part[v] == Some(part)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices(Part::Left).iter().map(|&u| self.adj[u].len()).sum()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.adj.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn matching_size(&self) -> usize {
        self.matching_size
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate.get(v).copied().flatten()
    }

    /// Current matching as `(left, right)` pairs in left-key order.
    pub fn matching(&self) -> Vec<(usize, usize)> {
        self.vertices(Part::Left).into_iter().filter_map(|u| self.mate[u].map(|v| (u, v))).collect()
    }

    /// Recomputes a maximum matching from scratch (Hopcroft-Karp) and returns
    /// its size.
    pub fn max_matching(&mut self) -> usize {
        self.mate.iter_mut().for_each(|m| *m = None);
        self.matching_size = 0;
        let left = self.vertices(Part::Left);
        let mut dist = vec![usize::MAX; self.part.len()];
        loop {
            // Layer the left side by alternating BFS from free left vertices.
            let mut queue = VecDeque::new();
            for &u in &left {
                if self.mate[u].is_none() {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = usize::MAX;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    match self.mate[v] {
                        None => found = true,
                        Some(w) if dist[w] == usize::MAX => {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                        Some(_) => {}
                    }
                }
            }
            if !found {
                break;
            }
            for &u in &left {
                if self.mate[u].is_none() && self.layered_augment(u, &mut dist) {
                    self.matching_size += 1;
                }
            }
        }
        self.matching_size
    }

    fn layered_augment(&mut self, u: usize, dist: &mut [usize]) -> bool {
        let level = std::mem::replace(&mut dist[u], usize::MAX);
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            let advance = match self.mate[v] {
                None => true,
                Some(w) => dist[w] == level + 1 && self.layered_augment(w, dist),
            };
            if advance {
                self.mate[u] = Some(v);
                self.mate[v] = Some(u);
                return true;
            }
        }
        false
    }

    /// One BFS for an augmenting path starting at the free vertex `source`;
    /// flips it when found.
    fn augment_from(&mut self, source: usize) -> bool {
        if self.mate[source].is_some() {
            return false;
        }
        // `via[w]` is the vertex on the source's side that discovered `w`.
        let mut via = vec![usize::MAX; self.part.len()];
        let mut seen = vec![false; self.part.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if via[w] != usize::MAX {
                    continue;
                }
                via[w] = u;
                match self.mate[w] {
                    None => {
                        self.flip_path(source, w, &via);
                        return true;
                    }
                    Some(next) if !seen[next] => {
                        seen[next] = true;
                        queue.push_back(next);
                    }
                    Some(_) => {}
                }
            }
        }
        false
    }

    fn flip_path(&mut self, source: usize, end: usize, via: &[usize]) {
        let mut w = end;
        loop {
            let u = via[w];
            let previous = self.mate[u];
            self.mate[u] = Some(w);
            self.mate[w] = Some(u);
            if u == source {
                break;
            }
            w = previous.expect("inner path vertex is matched");
        }
        self.matching_size += 1;
    }

    /// Adds `v` with conflict edges to `conflict_neighbors` (which must be on
    /// the opposite part) and restores maximality with one augmenting search.
    pub fn insert_vertex(&mut self, v: usize, part: Part, conflict_neighbors: &[usize]) -> Result<()> {
        for &w in conflict_neighbors {
            if self.part_of(w) != Some(part.opposite()) {
                return Err(Error::UnknownVertex(w));
            }
        }
        self.add_vertex(v, part)?;
        let mut list = conflict_neighbors.to_vec();
        list.sort_unstable();
        list.dedup();
        for &w in &list {
            let pos = self.adj[w].binary_search(&v).unwrap_err();
            self.adj[w].insert(pos, v);
        }
        self.adj[v] = list;
        self.augment_from(v);
        Ok(())
    }

    /// Removes `v` and its edges. If `v` was matched its partner is freed and
    /// one augmenting search from the partner restores maximality.
    pub fn delete_vertex(&mut self, v: usize) -> Result<()> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        for w in std::mem::take(&mut self.adj[v]) {
            if let Ok(pos) = self.adj[w].binary_search(&v) {
                self.adj[w].remove(pos);
            }
        }
        self.part[v] = None;
        self.vertices -= 1;
        if let Some(partner) = self.mate[v].take() {
            self.mate[partner] = None;
            self.matching_size -= 1;
            self.augment_from(partner);
        }
        Ok(())
    }

    /// Vertices reachable from free left vertices by alternating paths.
    /// Errors if an augmenting path exists.
    fn alternating_reach(&self) -> Result<Vec<bool>> {
        let mut reached = vec![false; self.part.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in self.vertices(Part::Left) {
            if self.mate[u].is_none() {
                reached[u] = true;
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if reached[v] {
                    continue;
                }
                reached[v] = true;
                match self.mate[v] {
                    None => return Err(Error::StaleMatching(v)),
                    Some(w) if !reached[w] => {
                        reached[w] = true;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(reached)
    }

    pub fn is_maximum(&self) -> bool {
        self.alternating_reach().is_ok()
    }

    /// Maximum independent set via König's theorem, sorted by key. Its size
    /// is `vertex_count() - matching_size()`.
    pub fn max_independent_set(&self) -> Result<Vec<usize>> {
        let reached = self.alternating_reach()?;
        Ok((0..self.part.len())
            .filter(|&v| match self.part[v] {
                Some(Part::Left) => reached[v],
                Some(Part::Right) => !reached[v],
                None => false,
            })
            .collect())
    }
}
