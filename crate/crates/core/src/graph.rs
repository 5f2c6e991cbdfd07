//! Simple undirected graphs on dense vertex ids `0..n`.

use crate::error::{Error, Result};
use std::collections::{BTreeSet, VecDeque};

/// A simple undirected graph. Edges are stored as sorted `(u, v)` pairs with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) out of range for n={n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
            }
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Like [`Graph::new`] but silently drops loops and duplicates.
    pub fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let set: BTreeSet<(usize, usize)> = edges
            .into_iter()
            .filter(|&(a, b)| a != b && a < n && b < n)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Self::from_sorted(n, set.into_iter().collect())
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                e.push((a, b));
            }
        }
        Self::from_sorted(n, e)
    }

    pub fn path(n: usize) -> Graph {
        Self::from_sorted(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::from_edges_lossy(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star with centre 0 and `k` leaves.
    pub fn star(k: usize) -> Graph {
        Self::from_sorted(k + 1, (1..=k).map(|i| (0, i)).collect())
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        Self::from_sorted(a + b, e)
    }

    /// `rows x cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Graph {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::from_edges_lossy(rows * cols, e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Index of edge `ab` in [`Graph::edges`].
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if a == b || !self.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Component id per vertex, ids assigned in order of smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        q.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    /// Induced subgraph on `vs` (in the given order); returns the graph and
    /// the map from new ids to old ids.
    pub fn induced(&self, vs: &[usize]) -> (Graph, Vec<usize>) {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let mut e = Vec::new();
        for &(a, b) in &self.edges {
            if pos[a] != usize::MAX && pos[b] != usize::MAX {
                e.push((pos[a], pos[b]));
            }
        }
        (Self::from_edges_lossy(vs.len(), e), vs.to_vec())
    }

    pub fn without_edges(&self, drop: &[(usize, usize)]) -> Graph {
        let gone: BTreeSet<(usize, usize)> =
            drop.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        Self::from_sorted(
            self.n,
            self.edges
                .iter()
                .copied()
                .filter(|e| !gone.contains(e))
                .collect(),
        )
    }

    pub fn with_edges(&self, extra: &[(usize, usize)]) -> Graph {
        Self::from_edges_lossy(
            self.n,
            self.edges.iter().copied().chain(extra.iter().copied()),
        )
    }

    /// Relabel vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Self::from_edges_lossy(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let e = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        Self::from_sorted_checked(self.n + other.n, e.collect())
    }

    fn from_sorted_checked(n: usize, mut e: Vec<(usize, usize)>) -> Graph {
        e.sort_unstable();
        Self::from_sorted(n, e)
    }

    /// Vertices sorted in a degeneracy order (repeatedly remove a minimum-degree
    /// vertex, lowest id on ties).
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg = self.degrees();
        let mut removed = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.max_degree() + 1];
        for v in 0..self.n {
            buckets[deg[v]].insert(v);
        }
        for _ in 0..self.n {
            let d = buckets
                .iter()
                .position(|b| !b.is_empty())
                .expect("vertices left");
            let v = *buckets[d].iter().next().unwrap();
            buckets[d].remove(&v);
            removed[v] = true;
            order.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    buckets[deg[w]].remove(&w);
                    deg[w] -= 1;
                    buckets[deg[w]].insert(w);
                }
            }
        }
        order
    }

    /// Shortest path from `s` to `t` avoiding vertices flagged in `blocked`;
    /// neighbours explored in increasing id order.
    pub fn shortest_path_avoiding(
        &self,
        s: usize,
        t: usize,
        blocked: &[bool],
    ) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.n];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if v == t {
                let mut path = vec![t];
                let mut c = t;
                while c != s {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[v] {
                if prev[w] == usize::MAX && !blocked[w] {
                    prev[w] = v;
                    q.push_back(w);
                }
            }
        }
        None
    }
}

/// Per-vertex degrees plus maximum and minimum degree (the minimum ignores
/// isolated vertices and is `None` for edgeless graphs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub max: usize,
    pub min_nonisolated: Option<usize>,
}

pub fn degree_stats(g: &Graph) -> DegreeStats {
    let degrees = g.degrees();
    let max = degrees.iter().copied().max().unwrap_or(0);
    let min_nonisolated = degrees.iter().copied().filter(|&d| d > 0).min();
    DegreeStats {
        degrees,
        max,
        min_nonisolated,
    }
}

/// Subdivide every edge once. Edge `i` (in sorted order) gets the new vertex `n + i`.
pub fn subdivide_all(g: &Graph) -> Graph {
    let n = g.n();
    let mut e = Vec::with_capacity(2 * g.m());
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        e.push((a, n + i));
        e.push((b, n + i));
    }
    Graph::from_sorted_checked(n + g.m(), e)
}

/// Result of [`clique_sum`]: the glued graph and where each vertex of `g2` went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSum {
    pub graph: Graph,
    pub g2_map: Vec<usize>,
}

/// Glue `g2` onto `g1` by identifying `c2[i]` with `c1[i]`, then delete the
/// listed edges (given in `g1` ids) of the identified clique. Non-clique
/// vertices of `g2` are numbered after `g1`'s in increasing order.
pub fn clique_sum(
    g1: &Graph,
    g2: &Graph,
    c1: &[usize],
    c2: &[usize],
    drop: &[(usize, usize)],
) -> Result<CliqueSum> {
    if c1.len() != c2.len() {
        return Err(Error::InvalidParameter(format!(
            "clique sizes differ: {} vs {}",
            c1.len(),
            c2.len()
        )));
    }
    if c1.iter().any(|&v| v >= g1.n()) || c2.iter().any(|&v| v >= g2.n()) {
        return Err(Error::InvalidParameter("clique vertex out of range".into()));
    }
    if !g1.is_clique(c1) {
        return Err(Error::InvalidParameter(format!(
            "{c1:?} is not a clique of the first graph"
        )));
    }
    if !g2.is_clique(c2) {
        return Err(Error::InvalidParameter(format!(
            "{c2:?} is not a clique of the second graph"
        )));
    }
    let in_c1: BTreeSet<usize> = c1.iter().copied().collect();
    for &(a, b) in drop {
        if a == b || !in_c1.contains(&a) || !in_c1.contains(&b) {
            return Err(Error::InvalidParameter(format!(
                "dropped edge ({a},{b}) is not inside the identified clique"
            )));
        }
    }
    let mut map = vec![usize::MAX; g2.n()];
    for (i, &v) in c2.iter().enumerate() {
        map[v] = c1[i];
    }
    let mut next = g1.n();
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    let edges = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(a, b)| (map[a], map[b])));
    let glued = Graph::from_edges_lossy(next, edges).without_edges(drop);
    Ok(CliqueSum {
        graph: glued,
        g2_map: map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn degree_examples() {
        let k5 = degree_stats(&Graph::complete(5));
        assert_eq!((k5.max, k5.min_nonisolated), (4, Some(4)));
        assert!(degree_stats(&Graph::cycle(5))
            .degrees
            .iter()
            .all(|&d| d == 2));
        let s = degree_stats(&Graph::star(3));
        assert_eq!(s.degrees, vec![3, 1, 1, 1]);
        assert_eq!((s.max, s.min_nonisolated), (3, Some(1)));
        let iso = degree_stats(&Graph::new(4, [(0, 1)]).unwrap());
        assert_eq!(iso.min_nonisolated, Some(1));
    }

    #[test]
    fn subdivision_examples() {
        let k3 = subdivide_all(&Graph::complete(3));
        assert_eq!((k3.n(), k3.m()), (6, 6));
        assert!(k3.degrees().iter().all(|&d| d == 2));
        let e = subdivide_all(&Graph::path(2));
        assert_eq!((e.n(), e.m()), (3, 2));
        let k4 = subdivide_all(&Graph::complete(4));
        assert_eq!((k4.n(), k4.m()), (10, 12));
    }

    #[test]
    fn clique_sum_examples() {
        let k5 = Graph::complete(5);
        let s = clique_sum(&k5, &k5, &[0], &[0], &[]).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (9, 20));

        let t = Graph::complete(3);
        let s = clique_sum(&t, &t, &[0, 1], &[0, 1], &[(0, 1)]).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (4, 4));
        assert!(s.graph.degrees().iter().all(|&d| d == 2));

        let s = clique_sum(&t, &Graph::empty(1), &[], &[], &[]).unwrap();
        assert_eq!(s.graph.component_count(), 2);
    }

    #[test]
    fn clique_sum_errors() {
        let p = Graph::path(3);
        assert!(clique_sum(&p, &p, &[0, 2], &[0, 1], &[]).is_err());
        assert!(clique_sum(&p, &p, &[0], &[0, 1], &[]).is_err());
        let t = Graph::complete(3);
        assert!(clique_sum(&t, &t, &[0, 1], &[0, 1], &[(0, 2)]).is_err());
    }
}
