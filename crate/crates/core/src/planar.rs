//! Planarity testing, crossing-free straight-line layouts and convex layouts
//! of outerplanar graphs.
//!
//! Embedding uses the path-addition method of Demoucron, Malgrange and
//! Pertuiset on each biconnected block; layouts use a canonical ordering of a
//! triangulation followed by the shift method, giving integer coordinates.

use crate::error::{Error, Result};
use crate::geometry::{self, perturb_general_position, q, qr, Drawing, Point, Style, Q};
use crate::graph::Graph;
use num_traits::One;
use std::collections::{HashMap, HashSet, VecDeque};

/// Rotation system: `rotation[v]` lists the neighbours of `v` in cyclic order.
/// A face walk leaves `v` (entered from `u`) towards the successor of `u` in
/// `rotation[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub rotation: Vec<Vec<usize>>,
}

impl Embedding {
    fn index(&self) -> Vec<HashMap<usize, usize>> {
        self.rotation
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, &w)| (w, i)).collect())
            .collect()
    }

    /// Face walks as vertex sequences (each dart used once).
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let idx = self.index();
        let mut used: Vec<Vec<bool>> = self.rotation.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for v in 0..self.rotation.len() {
            for i in 0..self.rotation[v].len() {
                if used[v][i] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut ai) = (v, i);
                while !used[a][ai] {
                    used[a][ai] = true;
                    face.push(a);
                    let b = self.rotation[a][ai];
                    let back = idx[b][&a];
                    let bi = (back + 1) % self.rotation[b].len();
                    a = b;
                    ai = bi;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Euler's formula for every component (isolated vertices count one face).
    pub fn satisfies_euler(&self, g: &Graph) -> bool {
        let comp = g.components();
        let k = g.component_count();
        let mut v = vec![0i64; k];
        let mut e = vec![0i64; k];
        let mut f = vec![0i64; k];
        for x in 0..g.n() {
            v[comp[x]] += 1;
            if g.degree(x) == 0 {
                f[comp[x]] += 1;
            }
        }
        for &(a, _) in g.edges() {
            e[comp[a]] += 1;
        }
        for face in self.faces() {
            f[comp[face[0]]] += 1;
        }
        (0..k).all(|c| v[c] - e[c] + f[c] == 2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A subdivision of K5 or K3,3 inside the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kuratowski {
    pub kind: KuratowskiKind,
    pub branch: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planarity {
    Planar(Embedding),
    NonPlanar(Kuratowski),
}

/// Edge sets of the biconnected blocks (bridges are blocks of one edge).
pub fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    const UNSET: usize = usize::MAX;
    let n = g.n();
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut parent = vec![UNSET; n];
    let mut it = vec![0; n];
    let mut t = 0;
    let mut estack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != UNSET || g.degree(root) == 0 {
            continue;
        }
        disc[root] = t;
        low[root] = t;
        t += 1;
        let mut st = vec![root];
        while let Some(&v) = st.last() {
            if it[v] < g.degree(v) {
                let w = g.neighbors(v)[it[v]];
                it[v] += 1;
                if disc[w] == UNSET {
                    parent[w] = v;
                    disc[w] = t;
                    low[w] = t;
                    t += 1;
                    estack.push((v, w));
                    st.push(w);
                } else if w != parent[v] && disc[w] < disc[v] {
                    low[v] = low[v].min(disc[w]);
                    estack.push((v, w));
                }
            } else {
                st.pop();
                if let Some(&u) = st.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push((e.0.min(e.1), e.0.max(e.1)));
                            if e == (u, v) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Faces (as simple oriented cycles) of a planar embedding of a 2-connected
/// graph, or `None` if it is not planar.
fn embed_biconnected(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    let cycle = find_cycle(g);
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for (i, &v) in cycle.iter().enumerate() {
        in_h[v] = true;
        let w = cycle[(i + 1) % cycle.len()];
        h_edges.insert((v.min(w), v.max(w)));
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces = vec![cycle, rev];
    while h_edges.len() < g.m() {
        let frags = fragments(g, &in_h, &h_edges);
        let mut face_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (fi, f) in faces.iter().enumerate() {
            for &v in f {
                face_of[v].push(fi);
            }
        }
        let mut choice: Option<(usize, usize)> = None;
        for (k, fr) in frags.iter().enumerate() {
            let mut adm: Vec<usize> = face_of[fr.attach[0]].clone();
            for &a in &fr.attach[1..] {
                adm.retain(|f| face_of[a].contains(f));
            }
            match adm.len() {
                0 => return None,
                1 => {
                    choice = Some((k, adm[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((k, adm[0]));
                    }
                }
            }
        }
        let (k, fi) = choice.expect("an unembedded edge implies a fragment");
        let path = frags[k].path(g, &in_h);
        for w in path.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = faces.swap_remove(fi);
        let (a1, a2) = (path[0], path[path.len() - 1]);
        let i = face
            .iter()
            .position(|&v| v == a1)
            .expect("attachment on face");
        let j = face
            .iter()
            .position(|&v| v == a2)
            .expect("attachment on face");
        let interior = &path[1..path.len() - 1];
        let walk = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut x = from;
            loop {
                out.push(face[x]);
                if x == to {
                    break;
                }
                x = (x + 1) % face.len();
            }
            out
        };
        let mut f1 = walk(i, j);
        f1.extend(interior.iter().rev());
        let mut f2 = walk(j, i);
        f2.extend(interior.iter());
        faces.push(f1);
        faces.push(f2);
    }
    Some(faces)
}

struct Fragment {
    attach: Vec<usize>,
    /// Interior vertices (empty for a single chord edge).
    inner: Vec<usize>,
}

impl Fragment {
    /// Path through the fragment between its two lowest attachments it can
    /// reach: starts at the smallest attachment.
    fn path(&self, g: &Graph, in_h: &[bool]) -> Vec<usize> {
        if self.inner.is_empty() {
            return vec![self.attach[0], self.attach[1]];
        }
        let a1 = self.attach[0];
        let inside: HashSet<usize> = self.inner.iter().copied().collect();
        let start = *g
            .neighbors(a1)
            .iter()
            .find(|w| inside.contains(w))
            .expect("attachment touches fragment");
        let mut prev: HashMap<usize, usize> = HashMap::from([(start, usize::MAX)]);
        let mut q = VecDeque::from([start]);
        while let Some(x) = q.pop_front() {
            if let Some(&a2) = g.neighbors(x).iter().find(|&&w| in_h[w] && w != a1) {
                let mut p = vec![a2, x];
                let mut c = x;
                while prev[&c] != usize::MAX {
                    c = prev[&c];
                    p.push(c);
                }
                p.push(a1);
                p.reverse();
                return p;
            }
            for &w in g.neighbors(x) {
                if inside.contains(&w) && !prev.contains_key(&w) {
                    prev.insert(w, x);
                    q.push_back(w);
                }
            }
        }
        unreachable!("fragments of a 2-connected graph have two attachments")
    }
}

fn fragments(g: &Graph, in_h: &[bool], h_edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        if in_h[a] && in_h[b] && !h_edges.contains(&(a, b)) {
            out.push(Fragment {
                attach: vec![a, b],
                inner: Vec::new(),
            });
        }
    }
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        let mut attach = Vec::new();
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &w in g.neighbors(x) {
                if in_h[w] {
                    attach.push(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                    q.push_back(w);
                }
            }
        }
        attach.sort_unstable();
        attach.dedup();
        out.push(Fragment { attach, inner });
    }
    out
}

fn find_cycle(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut q = VecDeque::from([0]);
    let mut order = Vec::new();
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                depth[w] = depth[v] + 1;
                q.push_back(w);
            }
        }
    }
    for &(a, b) in g.edges() {
        if parent[a] == b || parent[b] == a {
            continue;
        }
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while x != y {
            if depth[x] >= depth[y] {
                x = parent[x];
                left.push(x);
            } else {
                y = parent[y];
                right.push(y);
            }
        }
        right.pop();
        right.reverse();
        left.extend(right);
        return left;
    }
    panic!("2-connected blocks contain a cycle")
}

/// Rotation system of a planar graph, or `None`.
fn embed(g: &Graph) -> Option<Embedding> {
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for block in blocks(g) {
        if block.len() == 1 {
            let (a, b) = block[0];
            rotation[a].push(b);
            rotation[b].push(a);
            continue;
        }
        let mut verts: Vec<usize> = block.iter().flat_map(|&(a, b)| [a, b]).collect();
        verts.sort_unstable();
        verts.dedup();
        let local: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let bg = Graph::new(
            verts.len(),
            block.iter().map(|&(a, b)| (local[&a], local[&b])),
        )
        .expect("block edges valid");
        let faces = embed_biconnected(&bg)?;
        let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); verts.len()];
        for f in &faces {
            let k = f.len();
            for i in 0..k {
                let (u, v, w) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
                succ[v].insert(u, w);
            }
        }
        for (lv, s) in succ.iter().enumerate() {
            let first = bg.neighbors(lv)[0];
            let mut cur = first;
            loop {
                rotation[verts[lv]].push(verts[cur]);
                cur = s[&cur];
                if cur == first {
                    break;
                }
            }
        }
    }
    Some(Embedding { rotation })
}

fn is_planar(g: &Graph) -> bool {
    embed(g).is_some()
}

/// Planar embedding verified by Euler's formula, or a Kuratowski subgraph.
pub fn planarity(g: &Graph) -> Result<Planarity> {
    if let Some(e) = embed(g) {
        if !e.satisfies_euler(g) {
            return Err(Error::InvalidGraph(
                "internal embedding failed the Euler check".into(),
            ));
        }
        return Ok(Planarity::Planar(e));
    }
    Ok(Planarity::NonPlanar(kuratowski(g)))
}

fn kuratowski(g: &Graph) -> Kuratowski {
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut i = 0;
    while i < edges.len() {
        let mut trial = edges.clone();
        trial.remove(i);
        if !is_planar(&Graph::new(g.n(), trial.iter().copied()).expect("subset of edges")) {
            edges = trial;
        } else {
            i += 1;
        }
    }
    let h = Graph::new(g.n(), edges.iter().copied()).expect("subset of edges");
    let branch: Vec<usize> = (0..g.n()).filter(|&v| h.degree(v) >= 3).collect();
    let kind = if branch.len() == 5 && branch.iter().all(|&v| h.degree(v) == 4) {
        KuratowskiKind::K5
    } else {
        KuratowskiKind::K33
    };
    Kuratowski {
        kind,
        branch,
        edges,
    }
}

/// Planar embedding or `NotPlanar`.
pub fn embedding(g: &Graph) -> Result<Embedding> {
    match planarity(g)? {
        Planarity::Planar(e) => Ok(e),
        Planarity::NonPlanar(k) => Err(Error::NotPlanar(format!(
            "contains a {:?} subdivision",
            k.kind
        ))),
    }
}

fn rot_pos(r: &[usize], x: usize) -> usize {
    r.iter()
        .position(|&w| w == x)
        .expect("neighbour in rotation")
}

/// Add edges inside faces until every face is a triangle (connected, n >= 3).
fn triangulate(rot: &mut [Vec<usize>]) {
    let mut adj: HashSet<(usize, usize)> = HashSet::new();
    for (v, r) in rot.iter().enumerate() {
        for &w in r {
            adj.insert((v, w));
        }
    }
    loop {
        let emb = Embedding {
            rotation: rot.to_vec(),
        };
        let Some(face) = emb.faces().into_iter().find(|f| f.len() > 3) else {
            return;
        };
        let k = face.len();
        let i = (0..k)
            .find(|&i| {
                let (a, c) = (face[i], face[(i + 2) % k]);
                a != c && !adj.contains(&(a, c))
            })
            .expect("a face of length > 3 admits a new diagonal");
        let (p, a, b, c) = (
            face[(i + k - 1) % k],
            face[i],
            face[(i + 1) % k],
            face[(i + 2) % k],
        );
        let at = rot_pos(&rot[a], p);
        rot[a].insert(at + 1, c);
        let at = rot_pos(&rot[c], b);
        rot[c].insert(at + 1, a);
        adj.insert((a, c));
        adj.insert((c, a));
    }
}

/// Integer straight-line coordinates for a connected planar rotation system
/// with at least three vertices.
fn shift_layout(rotation: &[Vec<usize>]) -> Vec<(i64, i64)> {
    let n = rotation.len();
    let mut rot = rotation.to_vec();
    triangulate(&mut rot);
    let outer = Embedding {
        rotation: rot.clone(),
    }
    .faces()
    .into_iter()
    .next()
    .expect("faces exist");
    let (v1, v2, vn) = (outer[0], outer[1], outer[2]);

    // canonical order by peeling chord-free contour vertices
    let mut removed = vec![false; n];
    let mut contour = vec![v1, vn, v2];
    let mut record: Vec<(usize, usize)> = vec![(0, 0); n];
    let mut peeled = Vec::new();
    while peeled.len() + 3 < n {
        let mut at = vec![usize::MAX; n];
        for (i, &c) in contour.iter().enumerate() {
            at[c] = i;
        }
        let i = (1..contour.len() - 1)
            .find(|&i| {
                rot[contour[i]]
                    .iter()
                    .all(|&w| removed[w] || at[w] == usize::MAX || at[w] + 1 == i || at[w] == i + 1)
            })
            .expect("a chord-free contour vertex exists");
        let v = contour[i];
        let (l, r) = (contour[i - 1], contour[i + 1]);
        let rv = &rot[v];
        let k = rv.len();
        let (il, ir) = (rot_pos(rv, l), rot_pos(rv, r));
        let arc = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut x = (from + 1) % k;
            while x != to {
                out.push(rv[x]);
                x = (x + 1) % k;
            }
            out
        };
        let fwd = arc(il, ir);
        let mut bwd = arc(ir, il);
        let fwd_ok = fwd.iter().all(|&w| !removed[w]);
        let bwd_ok = bwd.iter().all(|&w| !removed[w]);
        let inner = if fwd_ok && (!bwd_ok || fwd.len() >= bwd.len()) {
            fwd
        } else {
            bwd.reverse();
            bwd
        };
        record[v] = (l, r);
        removed[v] = true;
        peeled.push(v);
        let mut next = contour[..i].to_vec();
        next.extend(inner);
        next.extend_from_slice(&contour[i + 1..]);
        contour = next;
    }
    debug_assert_eq!(contour.len(), 3);
    let v3 = contour[1];

    let mut pos = vec![(0i64, 0i64); n];
    pos[v1] = (0, 0);
    pos[v2] = (2, 0);
    pos[v3] = (1, 1);
    let mut under: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut contour = vec![v1, v3, v2];
    for &v in peeled.iter().rev() {
        let (wp, wq) = record[v];
        let p = contour
            .iter()
            .position(|&x| x == wp)
            .expect("w_p on contour");
        let q = contour
            .iter()
            .position(|&x| x == wq)
            .expect("w_q on contour");
        for &c in &contour[p + 1..q] {
            for &u in &under[c] {
                pos[u].0 += 1;
            }
        }
        for &c in &contour[q..] {
            for &u in &under[c] {
                pos[u].0 += 2;
            }
        }
        let (xp, yp) = pos[wp];
        let (xq, yq) = pos[wq];
        pos[v] = ((xp - yp + xq + yq) / 2, (-xp + yp + xq + yq) / 2);
        let mut mine = vec![v];
        for &c in &contour[p + 1..q] {
            mine.extend(under[c].iter().copied());
        }
        under[v] = mine;
        let mut next = contour[..=p].to_vec();
        next.push(v);
        next.extend_from_slice(&contour[q..]);
        contour = next;
    }
    pos
}

/// Integer coordinates of a crossing-free straight-line drawing; components
/// are laid out separately and placed side by side.
pub fn grid_layout(g: &Graph) -> Result<Vec<(i64, i64)>> {
    let emb = embedding(g)?;
    let comp = g.components();
    let k = g.component_count();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in 0..g.n() {
        members[comp[v]].push(v);
    }
    let mut out = vec![(0i64, 0i64); g.n()];
    let mut x0 = 0i64;
    for vs in members {
        let local: HashMap<usize, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let pts: Vec<(i64, i64)> = match vs.len() {
            1 => vec![(0, 0)],
            2 => vec![(0, 0), (1, 0)],
            _ => {
                let rot: Vec<Vec<usize>> = vs
                    .iter()
                    .map(|&v| emb.rotation[v].iter().map(|w| local[w]).collect())
                    .collect();
                shift_layout(&rot)
            }
        };
        let width = pts.iter().map(|p| p.0).max().unwrap_or(0);
        for (i, &v) in vs.iter().enumerate() {
            out[v] = (pts[i].0 + x0, pts[i].1);
        }
        x0 += width + 2;
    }
    Ok(out)
}

/// Crossing-free rectilinear drawing (no three vertices collinear).
///
/// The grid layout is nudged into general position inside discs of radius
/// `r` with `3r <= 1/diag`: on an integer grid every vertex is at distance at
/// least `1/len(e)` from a non-incident edge `e`, so such moves cannot create
/// crossings or contacts.
pub fn straight_line_layout(g: &Graph) -> Result<Drawing> {
    let grid = grid_layout(g)?;
    let (mut w, mut h) = (0i64, 0i64);
    for &(x, y) in &grid {
        w = w.max(x);
        h = h.max(y);
    }
    let diag2 = Q::from_integer((w * w + h * h + 1).into());
    let mut r = qr(1, 4);
    while &r * &r * q(9) * &diag2 > Q::one() {
        r /= q(2);
    }
    let cands: Vec<Point> = grid.iter().map(|&(x, y)| Point::int(x, y)).collect();
    let pts = perturb_general_position(&cands, &vec![r; g.n()], 0)?;
    Ok(Drawing::straight(g, pts, Style::Rectilinear))
}

/// Circular order with no convex crossings, or `NotOuterplanar`. The order is
/// the rotation around an added apex adjacent to every vertex, starting at 0.
pub fn outerplanar_convex_layout(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    if n <= 2 {
        return Ok((0..n).collect());
    }
    let plus = Graph::new(
        n + 1,
        g.edges().iter().copied().chain((0..n).map(|v| (v, n))),
    )
    .expect("valid");
    let emb = embed(&plus).ok_or(Error::NotOuterplanar)?;
    let r = &emb.rotation[n];
    let s = rot_pos(r, 0);
    let order: Vec<usize> = (0..n).map(|i| r[(s + i) % n]).collect();
    debug_assert_eq!(
        geometry::convex_crossings(g, &order).map(|c| c.total),
        Ok(0)
    );
    Ok(order)
}
