//! Decompositions (a host graph whose vertices are bags), their validation,
//! and the chordal / interval / path-decomposition machinery.

use crate::error::{Error, Result};
use crate::graph::Graph;
use std::collections::{BTreeMap, VecDeque};

/// Host graph over bag indices plus the bags themselves (sorted vertex lists).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub host: Graph,
    pub bags: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn new(host: Graph, bags: Vec<Vec<usize>>) -> Result<Decomposition> {
        if host.n() != bags.len() {
            return Err(Error::InvalidCertificate(format!(
                "host has {} vertices but there are {} bags",
                host.n(),
                bags.len()
            )));
        }
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Ok(Decomposition { host, bags })
    }

    /// Bags on a path host `0 - 1 - ... - k-1`.
    pub fn path(bags: Vec<Vec<usize>>) -> Decomposition {
        let k = bags.len();
        Decomposition::new(Graph::path(k), bags).expect("sizes agree")
    }

    /// Every vertex of `g` in its own bag, host = `g`.
    pub fn singletons(g: &Graph) -> Decomposition {
        Decomposition::new(g.clone(), (0..g.n()).map(|v| vec![v]).collect()).expect("sizes agree")
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// For every target vertex, the sorted list of bags containing it.
    pub fn bags_of(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n];
        for (i, b) in self.bags.iter().enumerate() {
            for &v in b {
                if v < n {
                    out[v].push(i);
                }
            }
        }
        out
    }

    pub fn bag_contains(&self, bag: usize, v: usize) -> bool {
        self.bags[bag].binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub is_decomposition: bool,
    pub is_strong: bool,
    pub is_partition: bool,
    pub width: usize,
    pub spread: Vec<usize>,
    pub order: usize,
    /// First problem found, if any.
    pub reason: Option<String>,
}

impl Validation {
    pub fn max_spread(&self) -> usize {
        self.spread.iter().copied().max().unwrap_or(0)
    }
}

fn connected_within(host: &Graph, members: &[usize]) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut inside = vec![false; host.n()];
    for &b in members {
        inside[b] = true;
    }
    let mut seen = vec![false; host.n()];
    let mut q = VecDeque::from([members[0]]);
    seen[members[0]] = true;
    let mut count = 1;
    while let Some(x) = q.pop_front() {
        for &y in host.neighbors(x) {
            if inside[y] && !seen[y] {
                seen[y] = true;
                count += 1;
                q.push_back(y);
            }
        }
    }
    count == members.len()
}

/// Two bag sets touch: they share a bag, or a host edge joins them.
pub fn touch(host: &Graph, a: &[usize], b: &[usize]) -> bool {
    intersect(a, b)
        || a.iter()
            .any(|&x| host.neighbors(x).iter().any(|y| b.binary_search(y).is_ok()))
}

pub fn intersect(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Check the decomposition conditions. Only out-of-range bag entries are an
/// error; everything else is reported in the verdict.
pub fn validate(g: &Graph, d: &Decomposition) -> Result<Validation> {
    for b in &d.bags {
        if let Some(&v) = b.iter().find(|&&v| v >= g.n()) {
            return Err(Error::InvalidCertificate(format!(
                "bag mentions vertex {v} but n = {}",
                g.n()
            )));
        }
    }
    let of = d.bags_of(g.n());
    let spread: Vec<usize> = of.iter().map(Vec::len).collect();
    let mut reason = None;
    for (v, bs) in of.iter().enumerate() {
        if !connected_within(&d.host, bs) {
            reason = Some(format!("D({v}) is empty or disconnected"));
            break;
        }
    }
    let mut is_strong = true;
    for &(v, w) in g.edges() {
        if !intersect(&of[v], &of[w]) {
            is_strong = false;
            if reason.is_none() && !touch(&d.host, &of[v], &of[w]) {
                reason = Some(format!("D({v}) and D({w}) do not touch"));
            }
        }
    }
    let is_decomposition = reason.is_none();
    Ok(Validation {
        is_decomposition,
        is_strong: is_decomposition && is_strong,
        is_partition: is_decomposition && spread.iter().all(|&s| s == 1),
        width: d.width(),
        spread,
        order: d.len(),
        reason,
    })
}

pub fn is_forest(g: &Graph) -> bool {
    g.m() + g.component_count() == g.n()
}

/// Connected, acyclic, maximum degree at most 2.
pub fn is_path_graph(g: &Graph) -> bool {
    g.n() == 0 || (is_forest(g) && g.component_count() == 1 && g.max_degree() <= 2)
}

/// Vertex sequence of a path graph starting from its lowest-id end.
pub fn path_sequence(g: &Graph) -> Result<Vec<usize>> {
    if !is_path_graph(g) {
        return Err(Error::InvalidCertificate("host is not a path".into()));
    }
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let start = (0..g.n())
        .find(|&v| g.degree(v) <= 1)
        .expect("paths have ends");
    let mut seq = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&nx) = g.neighbors(cur).iter().find(|&&w| w != prev) {
        seq.push(nx);
        prev = cur;
        cur = nx;
    }
    Ok(seq)
}

/// Lexicographic breadth-first search by partition refinement; ties go to
/// the lowest vertex id. Returns the visit order.
pub fn lex_bfs(g: &Graph) -> Vec<usize> {
    let mut parts: Vec<Vec<usize>> = if g.n() == 0 {
        Vec::new()
    } else {
        vec![(0..g.n()).collect()]
    };
    let mut visited = vec![false; g.n()];
    let mut out = Vec::with_capacity(g.n());
    while let Some(first) = parts.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            parts.remove(0);
        }
        visited[v] = true;
        out.push(v);
        let mut next = Vec::with_capacity(parts.len() + 8);
        for p in parts {
            let (inn, outn): (Vec<usize>, Vec<usize>) =
                p.into_iter().partition(|&u| g.has_edge(u, v));
            if !inn.is_empty() {
                next.push(inn);
            }
            if !outn.is_empty() {
                next.push(outn);
            }
        }
        parts = next;
    }
    out
}

fn positions(n: usize, order: &[usize]) -> Result<Vec<usize>> {
    crate::geometry::order_positions(n, order)
}

/// Later neighbours of `v` under the order with positions `pos`, sorted by position.
pub fn later_neighbors(g: &Graph, pos: &[usize], v: usize) -> Vec<usize> {
    let mut l: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| pos[w] > pos[v])
        .collect();
    l.sort_by_key(|&w| pos[w]);
    l
}

/// First vertex whose later neighbourhood is not a clique, with a
/// non-adjacent pair inside it.
fn peo_violation(g: &Graph, order: &[usize]) -> Result<Option<(usize, usize, usize)>> {
    let pos = positions(g.n(), order)?;
    for &v in order {
        let l = later_neighbors(g, &pos, v);
        if let Some((&p, rest)) = l.split_first() {
            for &w in rest {
                if !g.has_edge(p, w) {
                    return Ok(Some((v, p, w)));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    matches!(peo_violation(g, order), Ok(None))
}

fn chordless_cycle_at(g: &Graph, v: usize, u: usize, w: usize) -> Option<Vec<usize>> {
    let mut blocked = vec![false; g.n()];
    blocked[v] = true;
    for &x in g.neighbors(v) {
        blocked[x] = true;
    }
    blocked[u] = false;
    blocked[w] = false;
    // forbid the direct hop so the path has an interior
    let path = g
        .without_edges(&[(u, w)])
        .shortest_path_avoiding(u, w, &blocked)?;
    let mut cyc = vec![v];
    cyc.extend(path);
    Some(cyc)
}

/// Chordless cycle of length at least four, if any.
pub fn chordless_cycle(g: &Graph, hint: Option<(usize, usize, usize)>) -> Option<Vec<usize>> {
    if let Some((v, u, w)) = hint {
        if let Some(c) = chordless_cycle_at(g, v, u, w) {
            return Some(c);
        }
    }
    for v in 0..g.n() {
        let nb = g.neighbors(v);
        for (i, &u) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                if !g.has_edge(u, w) {
                    if let Some(c) = chordless_cycle_at(g, v, u, w) {
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Perfect elimination order (reverse lexicographic BFS), verified; on
/// failure the error carries a chordless cycle.
pub fn chordal_certificate(g: &Graph) -> Result<Vec<usize>> {
    let mut order = lex_bfs(g);
    order.reverse();
    match peo_violation(g, &order)? {
        None => Ok(order),
        Some(hint) => {
            let cycle = chordless_cycle(g, Some(hint))
                .expect("graphs without a perfect elimination order have a chordless cycle");
            Err(Error::NotChordal { cycle })
        }
    }
}

/// Clique number from a perfect elimination order.
pub fn omega_from_peo(g: &Graph, order: &[usize]) -> Result<usize> {
    let pos = positions(g.n(), order)?;
    Ok((0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count() + 1)
        .max()
        .unwrap_or(0))
}

/// Strong tree decomposition whose bags are the maximal cliques.
pub fn clique_tree(g: &Graph, peo: &[usize]) -> Result<Decomposition> {
    if peo_violation(g, peo)?.is_some() {
        return Err(Error::InvalidCertificate(
            "order is not a perfect elimination order".into(),
        ));
    }
    let pos = positions(g.n(), peo)?;
    let later: Vec<Vec<usize>> = (0..g.n()).map(|v| later_neighbors(g, &pos, v)).collect();
    // C(v) = {v} + later(v) is maximal unless it is swallowed by C(u) of some
    // u whose parent is v and |later(u)| = |later(v)| + 1
    let mut swallowed = vec![false; g.n()];
    for u in 0..g.n() {
        if let Some(&p) = later[u].first() {
            if later[u].len() == later[p].len() + 1 {
                swallowed[p] = true;
            }
        }
    }
    let mut bags: Vec<Vec<usize>> = (0..g.n())
        .filter(|&v| !swallowed[v])
        .map(|v| {
            let mut b = later[v].clone();
            b.push(v);
            b.sort_unstable();
            b
        })
        .collect();
    bags.sort();
    let host = max_weight_spanning_tree(g.n(), &bags);
    Decomposition::new(host, bags)
}

/// Maximum-weight spanning tree of the bag intersection graph (weight = size of
/// the intersection; zero-weight edges join separate pieces). Deterministic.
pub fn max_weight_spanning_tree(n: usize, bags: &[Vec<usize>]) -> Graph {
    let k = bags.len();
    let mut of = vec![Vec::new(); n];
    for (i, b) in bags.iter().enumerate() {
        for &v in b {
            of[v].push(i);
        }
    }
    let mut weight: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for list in &of {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                *weight.entry((i, j)).or_insert(0) += 1;
            }
        }
    }
    let mut cand: Vec<(usize, usize, usize)> =
        weight.into_iter().map(|((i, j), w)| (w, i, j)).collect();
    cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut uf = UnionFind::new(k);
    let mut tree = Vec::new();
    for (_, i, j) in cand {
        if uf.union(i, j) {
            tree.push((i, j));
        }
    }
    for j in 1..k {
        if uf.union(0, j) {
            tree.push((0, j));
        }
    }
    Graph::new(k, tree).expect("tree edges are distinct")
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let nx = self.parent[c];
            self.parent[c] = r;
            c = nx;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// `u < v < w` with `uw` an edge forces `uv` to be an edge.
pub fn is_interval_order(g: &Graph, order: &[usize]) -> bool {
    let Ok(pos) = positions(g.n(), order) else {
        return false;
    };
    // later neighbours of u must fill the positions right after u
    (0..g.n()).all(|u| {
        let later: Vec<usize> = g
            .neighbors(u)
            .iter()
            .map(|&w| pos[w])
            .filter(|&p| p > pos[u])
            .collect();
        match later.iter().max() {
            None => true,
            Some(&far) => far - pos[u] == later.len(),
        }
    })
}

/// Transitive orientation of the complement of `g` by implication classes,
/// peeled off one at a time. `None` if the complement is not a comparability graph.
fn orient_complement(g: &Graph) -> Option<Vec<Vec<bool>>> {
    let n = g.n();
    let mut rem = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            rem[a][b] = a != b && !g.has_edge(a, b);
        }
    }
    let mut arc = vec![vec![false; n]; n];
    loop {
        let Some((a, b)) = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| rem[a][b])
        else {
            break;
        };
        let mut in_class = vec![vec![false; n]; n];
        in_class[a][b] = true;
        let mut q = VecDeque::from([(a, b)]);
        let mut members = Vec::new();
        while let Some((x, y)) = q.pop_front() {
            if in_class[y][x] {
                return None;
            }
            members.push((x, y));
            for z in 0..n {
                // xy forces xz when y and z are not joined in the remaining graph
                if z != y && z != x && rem[x][z] && !rem[y][z] && !in_class[x][z] {
                    in_class[x][z] = true;
                    q.push_back((x, z));
                }
                if z != x && z != y && rem[z][y] && !rem[x][z] && !in_class[z][y] {
                    in_class[z][y] = true;
                    q.push_back((z, y));
                }
            }
        }
        for (x, y) in members {
            arc[x][y] = true;
            rem[x][y] = false;
            rem[y][x] = false;
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !arc[a][b] {
                continue;
            }
            for c in 0..n {
                if arc[b][c] && !arc[a][c] {
                    return None;
                }
            }
        }
    }
    Some(arc)
}

/// Order with the interval closure property, or `NotInterval`.
pub fn interval_order(g: &Graph) -> Result<Vec<usize>> {
    match chordal_certificate(g) {
        Ok(_) => {}
        Err(Error::NotChordal { .. }) => return Err(Error::NotInterval),
        Err(e) => return Err(e),
    }
    let n = g.n();
    let arc = orient_complement(g).ok_or(Error::NotInterval)?;
    // predecessor sets of an interval order form a chain
    let pred: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| arc[y][x]).collect())
        .collect();
    let mut chain: Vec<&Vec<usize>> = pred.iter().collect();
    chain.sort_by_key(|p| p.len());
    chain.dedup();
    for w in chain.windows(2) {
        if !w[0].iter().all(|x| w[1].binary_search(x).is_ok()) {
            return Err(Error::NotInterval);
        }
    }
    let left: Vec<usize> = pred
        .iter()
        .map(|p| chain.iter().position(|c| *c == p).expect("present"))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (left[v], v));
    if !is_interval_order(g, &order) {
        return Err(Error::NotInterval);
    }
    Ok(order)
}

/// Union of bag cliques of a strong path decomposition, with the order of
/// first bags (ties by id), which is an interval order of the union.
pub fn interval_supergraph(g: &Graph, pd: &Decomposition) -> Result<(Graph, Vec<usize>)> {
    let seq = path_sequence(&pd.host)?;
    let val = validate(g, pd)?;
    if !val.is_strong {
        return Err(Error::InvalidCertificate(
            val.reason
                .unwrap_or_else(|| "path decomposition is not strong".into()),
        ));
    }
    let mut first = vec![usize::MAX; g.n()];
    let mut edges = Vec::new();
    for (i, &b) in seq.iter().enumerate() {
        let bag = &pd.bags[b];
        for (a, &v) in bag.iter().enumerate() {
            first[v] = first[v].min(i);
            for &w in &bag[a + 1..] {
                edges.push((v, w));
            }
        }
    }
    let sup = Graph::from_edges_lossy(g.n(), edges);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (first[v], v));
    Ok((sup, order))
}
