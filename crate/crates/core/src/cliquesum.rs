//! Drawings of graphs built by clique-sums of almost-embeddable planar pieces.
//!
//! Each piece `i` contributes the auxiliary graph `K_i`: the piece minus its
//! parent clique, one hub `c_j` per child and one subdivision vertex per edge
//! leaving into the child's subtree. `K_i` is drawn with a square `D_j` below
//! every hub; children are drawn first and nested into their squares, hubs
//! are removed and every leaving edge drops a near-vertical segment from the
//! top of `D_j` to its target.

use crate::decomposition::{interval_supergraph, Decomposition};
use crate::error::{Error, Result};
use crate::geometry::{
    crossing_hits, hit_point, on_segment, q, q_from_f64, q_to_f64, segment_meets_convex,
    BoundCheck, CrossingReport, Drawing, Point, Style, Q,
};
use crate::graph::Graph;
use crate::par::Exec;
use crate::planar::straight_line_layout;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// A vortex: face vertices in order around the face and a path
/// decomposition whose `j`-th bag holds the `j`-th face vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VortexSpec {
    pub face: Vec<usize>,
    pub bags: Vec<Vec<usize>>,
}

/// One almost-embeddable piece with local vertex ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub apices: Vec<usize>,
    #[serde(default)]
    pub vortices: Vec<VortexSpec>,
    #[serde(default)]
    pub genus: u32,
    /// Index of the parent piece (smaller than this piece's index).
    #[serde(default)]
    pub parent: Option<usize>,
    /// Local ids of the clique shared with the parent.
    #[serde(default)]
    pub parent_clique: Vec<usize>,
    /// `parent_clique[k]` is identified with the parent's `parent_map[k]`.
    #[serde(default)]
    pub parent_map: Vec<usize>,
    /// Clique edges (local ids) deleted from the sum.
    #[serde(default)]
    pub drop: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSumTree {
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Planar,
    Apex,
    /// Face vertex of the given vortex.
    Face(usize),
    /// Vortex vertex off the face.
    Inner(usize),
}

#[derive(Clone, Debug)]
struct PieceInfo {
    graph: Graph,
    roles: Vec<Role>,
}

/// The composed graph with global ids.
#[derive(Clone, Debug)]
pub struct Composed {
    pub graph: Graph,
    /// Topmost piece of each vertex; `owner == i` is the part `G_i - P_i`.
    pub owner: Vec<usize>,
    /// Local-to-global id map of every piece.
    pub global: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Largest clique, apex count, vortex count or vortex bag.
    pub h: usize,
    specs: Vec<PieceSpec>,
    infos: Vec<PieceInfo>,
    local: Vec<HashMap<usize, usize>>,
}

impl Composed {
    /// Global ids of the parent clique of piece `i`.
    pub fn parent_clique(&self, i: usize) -> Vec<usize> {
        self.specs[i]
            .parent_clique
            .iter()
            .map(|&v| self.global[i][v])
            .collect()
    }

    pub fn depth(&self, i: usize) -> usize {
        let mut d = 0;
        let mut c = i;
        while let Some(p) = self.parent[c] {
            d += 1;
            c = p;
        }
        d
    }

    /// `a` is `b` or one of its ancestors.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut c = b;
        loop {
            if c == a {
                return true;
            }
            match self.parent[c] {
                Some(p) => c = p,
                None => return false,
            }
        }
    }

    /// Tree path from ancestor `a` down to `b`.
    pub fn tree_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut p = vec![b];
        let mut c = b;
        while c != a {
            c = self.parent[c].expect("a is an ancestor of b");
            p.push(c);
        }
        p.reverse();
        p
    }

    fn role(&self, piece: usize, v: usize) -> Role {
        self.infos[piece].roles[self.local[piece][&v]]
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidCertificate(msg.into())
}

fn analyse_piece(i: usize, p: &PieceSpec) -> Result<PieceInfo> {
    if p.genus != 0 {
        return Err(bad(format!(
            "piece {i} has genus {}; only the plane is supported",
            p.genus
        )));
    }
    let graph =
        Graph::new(p.n, p.edges.iter().copied()).map_err(|e| bad(format!("piece {i}: {e}")))?;
    let mut roles = vec![Role::Planar; p.n];
    for &a in &p.apices {
        if a >= p.n || roles[a] != Role::Planar {
            return Err(bad(format!("piece {i}: bad apex {a}")));
        }
        roles[a] = Role::Apex;
    }
    for (l, vx) in p.vortices.iter().enumerate() {
        if vx.face.is_empty() || vx.face.len() != vx.bags.len() {
            return Err(bad(format!(
                "piece {i} vortex {l}: need one bag per face vertex"
            )));
        }
        for &u in &vx.face {
            if u >= p.n || roles[u] != Role::Planar {
                return Err(bad(format!(
                    "piece {i} vortex {l}: face vertex {u} is reused"
                )));
            }
            roles[u] = Role::Face(l);
        }
        let mut span: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
        for (j, bag) in vx.bags.iter().enumerate() {
            if !bag.contains(&vx.face[j]) {
                return Err(bad(format!(
                    "piece {i} vortex {l}: bag {j} misses its face vertex"
                )));
            }
            for &v in bag {
                if v >= p.n {
                    return Err(bad(format!(
                        "piece {i} vortex {l}: vertex {v} out of range"
                    )));
                }
                let e = span.entry(v).or_insert((j, j, 0));
                e.1 = j;
                e.2 += 1;
            }
        }
        for (&v, &(a, b, c)) in &span {
            if b - a + 1 != c {
                return Err(bad(format!(
                    "piece {i} vortex {l}: bags of {v} are not consecutive"
                )));
            }
            match roles[v] {
                Role::Face(k) if k == l => {}
                Role::Planar => roles[v] = Role::Inner(l),
                _ => {
                    return Err(bad(format!(
                        "piece {i}: vortex {l} meets another part at {v}"
                    )))
                }
            }
        }
    }
    for &(a, b) in graph.edges() {
        match (roles[a], roles[b]) {
            (Role::Apex, _) | (_, Role::Apex) => {}
            (ra, rb) => {
                let la = vortex_of(ra);
                let lb = vortex_of(rb);
                let inner = matches!(ra, Role::Inner(_)) || matches!(rb, Role::Inner(_));
                if inner && la != lb {
                    return Err(bad(format!(
                        "piece {i}: vortex vertex joined outside its vortex by ({a},{b})"
                    )));
                }
                if let (Some(l), true) = (la, la == lb) {
                    let vx = &p.vortices[l];
                    if !face_consecutive(&vx.face, a, b)
                        && !vx.bags.iter().any(|bg| bg.contains(&a) && bg.contains(&b))
                    {
                        return Err(bad(format!(
                            "piece {i} vortex {l}: edge ({a},{b}) in no bag"
                        )));
                    }
                }
            }
        }
    }
    Ok(PieceInfo { graph, roles })
}

fn vortex_of(r: Role) -> Option<usize> {
    match r {
        Role::Face(l) | Role::Inner(l) => Some(l),
        _ => None,
    }
}

fn face_consecutive(face: &[usize], a: usize, b: usize) -> bool {
    let k = face.len();
    if k < 2 {
        return false;
    }
    (0..k).any(|j| {
        let (x, y) = (face[j], face[(j + 1) % k]);
        (x == a && y == b) || (x == b && y == a)
    })
}

/// Glue the pieces: global ids, the composed graph (clique edges listed in
/// some `drop` are deleted) and the owner partition.
pub fn compose(t: &CliqueSumTree) -> Result<Composed> {
    if t.pieces.is_empty() {
        return Err(bad("no pieces"));
    }
    let infos: Vec<PieceInfo> = t
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| analyse_piece(i, p))
        .collect::<Result<_>>()?;
    let k = t.pieces.len();
    let mut global: Vec<Vec<usize>> = Vec::with_capacity(k);
    let mut parent = vec![None; k];
    let mut children = vec![Vec::new(); k];
    let mut next = 0;
    let mut dropped = HashSet::new();
    let mut h = 0;
    for (i, p) in t.pieces.iter().enumerate() {
        match (i, p.parent) {
            (0, None) if p.parent_clique.is_empty() => {}
            (0, _) => return Err(bad("piece 0 is the root and has no parent clique")),
            (_, Some(par)) if par < i => {
                parent[i] = Some(par);
                children[par].push(i);
            }
            _ => {
                return Err(bad(format!(
                    "piece {i} needs a parent with a smaller index"
                )))
            }
        }
        if p.parent_clique.len() != p.parent_map.len() {
            return Err(bad(format!(
                "piece {i}: clique and identification map differ in length"
            )));
        }
        let mut map = vec![usize::MAX; p.n];
        if let Some(par) = p.parent {
            let pn = t.pieces[par].n;
            if p.parent_clique.iter().any(|&v| v >= p.n) || p.parent_map.iter().any(|&v| v >= pn) {
                return Err(bad(format!("piece {i}: identification map out of range")));
            }
            if !infos[i].graph.is_clique(&p.parent_clique) {
                return Err(bad(format!("piece {i}: parent clique is not a clique")));
            }
            if !infos[par].graph.is_clique(&p.parent_map) {
                return Err(bad(format!(
                    "piece {i}: image of the parent clique is not a clique in piece {par}"
                )));
            }
            for (&c, &m) in p.parent_clique.iter().zip(&p.parent_map) {
                map[c] = global[par][m];
            }
        }
        for &(a, b) in &p.drop {
            if !p.parent_clique.contains(&a) || !p.parent_clique.contains(&b) || a == b {
                return Err(bad(format!(
                    "piece {i}: dropped edge ({a},{b}) is not a clique edge"
                )));
            }
            let (x, y) = (map[a], map[b]);
            dropped.insert((x.min(y), x.max(y)));
        }
        for v in map.iter_mut() {
            if *v == usize::MAX {
                *v = next;
                next += 1;
            }
        }
        h = h
            .max(p.parent_clique.len())
            .max(p.apices.len())
            .max(p.vortices.len())
            .max(
                p.vortices
                    .iter()
                    .flat_map(|v| v.bags.iter().map(|b| b.len()))
                    .max()
                    .unwrap_or(0),
            );
        global.push(map);
    }
    let mut edges = BTreeSet::new();
    for (i, p) in t.pieces.iter().enumerate() {
        for &(a, b) in &p.edges {
            let (x, y) = (global[i][a], global[i][b]);
            let e = (x.min(y), x.max(y));
            if !dropped.contains(&e) {
                edges.insert(e);
            }
        }
    }
    let graph = Graph::new(next, edges)?;
    let mut owner = vec![usize::MAX; next];
    for (i, map) in global.iter().enumerate() {
        for &g in map {
            if owner[g] == usize::MAX {
                owner[g] = i;
            }
        }
    }
    let local = global
        .iter()
        .map(|m| m.iter().enumerate().map(|(l, &g)| (g, l)).collect())
        .collect();
    Ok(Composed {
        graph,
        owner,
        global,
        parent,
        children,
        h,
        specs: t.pieces.clone(),
        infos,
        local,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hub {
    pub child: usize,
    pub local: usize,
}

/// Subdivision vertex `(v, w, path)` on the edge `v c_j` of `K_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdiv {
    pub local: usize,
    pub v: usize,
    pub w: usize,
    /// Tree path from this piece to the owner of `w`.
    pub path: Vec<usize>,
    /// Index into `hubs`.
    pub hub: usize,
}

/// `K_i`: local ids are the owned vertices (sorted global ids), then hubs,
/// then subdivision vertices.
#[derive(Clone, Debug)]
pub struct AuxiliaryGraph {
    pub piece: usize,
    pub graph: Graph,
    pub base: Vec<usize>,
    pub hubs: Vec<Hub>,
    pub subdivs: Vec<Subdiv>,
}

pub fn build_ki(c: &Composed, i: usize) -> Result<AuxiliaryGraph> {
    if i >= c.specs.len() {
        return Err(Error::InvalidParameter(format!("piece {i} out of range")));
    }
    let g = &c.graph;
    let base: Vec<usize> = (0..g.n()).filter(|&v| c.owner[v] == i).collect();
    let idx: HashMap<usize, usize> = base.iter().enumerate().map(|(l, &v)| (v, l)).collect();
    let hubs: Vec<Hub> = c.children[i]
        .iter()
        .enumerate()
        .map(|(k, &j)| Hub {
            child: j,
            local: base.len() + k,
        })
        .collect();
    let mut edges = Vec::new();
    let mut subdivs = Vec::new();
    let mut next = base.len() + hubs.len();
    for &(a, b) in g.edges() {
        let (oa, ob) = (c.owner[a], c.owner[b]);
        if oa == i && ob == i {
            edges.push((idx[&a], idx[&b]));
            continue;
        }
        let (v, w) = if oa == i && ob != i && c.is_ancestor(i, ob) {
            (a, b)
        } else if ob == i && oa != i && c.is_ancestor(i, oa) {
            (b, a)
        } else {
            continue;
        };
        let path = c.tree_path(i, c.owner[w]);
        let j = path[1];
        if !c.parent_clique(j).contains(&v) {
            return Err(bad(format!(
                "edge ({v},{w}) leaves piece {i} outside the clique of piece {j}"
            )));
        }
        let hub = c.children[i]
            .iter()
            .position(|&x| x == j)
            .expect("j is a child");
        edges.push((idx[&v], next));
        edges.push((hubs[hub].local, next));
        subdivs.push(Subdiv {
            local: next,
            v,
            w,
            path,
            hub,
        });
        next += 1;
    }
    let graph = Graph::new(next, edges)?;
    let pi: HashSet<usize> = if i == 0 {
        HashSet::new()
    } else {
        c.parent_clique(i).into_iter().collect()
    };
    let mut budget = 0usize;
    for (l, &v) in base.iter().enumerate() {
        let want = g.neighbors(v).iter().filter(|w| !pi.contains(w)).count();
        if graph.degree(l) != want {
            return Err(bad(format!(
                "degree of {v} in K_{i} differs from G - P_{i}"
            )));
        }
        budget += g.degree(v);
    }
    if graph.m() > 2 * budget {
        return Err(bad(format!("K_{i} has too many edges")));
    }
    Ok(AuxiliaryGraph {
        piece: i,
        graph,
        base,
        hubs,
        subdivs,
    })
}

/// Removing hubs and contracting every subdivision vertex into an edge to its
/// target gives back the composed graph.
pub fn check_subdivision(c: &Composed, aux: &[AuxiliaryGraph]) -> Result<()> {
    let mut got = Vec::new();
    for k in aux {
        let nb = k.base.len();
        for &(a, b) in k.graph.edges() {
            if a < nb && b < nb {
                let (x, y) = (k.base[a], k.base[b]);
                got.push((x.min(y), x.max(y)));
            }
        }
        for s in &k.subdivs {
            got.push((s.v.min(s.w), s.v.max(s.w)));
        }
    }
    got.sort_unstable();
    if got != c.graph.edges() {
        return Err(bad("hub contraction does not give back the composed graph"));
    }
    Ok(())
}

/// Closed axis-parallel rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub x0: Q,
    pub x1: Q,
    pub y0: Q,
    pub y1: Q,
}

impl Square {
    pub fn contains(&self, p: &Point) -> bool {
        self.x0 <= p.x && p.x <= self.x1 && self.y0 <= p.y && p.y <= self.y1
    }

    fn corners(&self) -> Vec<Point> {
        vec![
            Point::new(self.x0.clone(), self.y0.clone()),
            Point::new(self.x1.clone(), self.y0.clone()),
            Point::new(self.x1.clone(), self.y1.clone()),
            Point::new(self.x0.clone(), self.y1.clone()),
        ]
    }

    fn map(&self, s: &Q, t: &Point) -> Square {
        Square {
            x0: &self.x0 * s + &t.x,
            x1: &self.x1 * s + &t.x,
            y0: &self.y0 * s + &t.y,
            y1: &self.y1 * s + &t.y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Planar,
    Apex,
    /// Vortex edge or edge from a clique vertex to a subdivision vertex.
    Group(usize),
    /// Edge from a hub to a subdivision vertex.
    Star(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStat {
    /// Vertices of the face subgraph: vortex, hubs and their stars.
    pub vertices: usize,
    pub crossings: usize,
    /// `(h+3)^2 Delta |V(F')|`.
    pub pathwidth_bound: BigInt,
}

#[derive(Clone, Debug)]
pub struct KiDrawing {
    pub drawing: Drawing,
    pub kinds: Vec<EdgeKind>,
    /// Square below each hub, same order as `hubs`.
    pub squares: Vec<Square>,
    /// Subdivision indices around each hub, left to right.
    pub sigma: Vec<Vec<usize>>,
    pub report: CrossingReport,
    /// A priori bound on the crossings of this drawing.
    pub stage_bound: BigInt,
    pub groups: Vec<GroupStat>,
}

struct Group {
    /// Circle order; vortex vertices only.
    members: Vec<usize>,
    hubs: Vec<usize>,
    attach: Vec<usize>,
    vortex: bool,
}

fn pow2_floor(v: &Q) -> Q {
    assert!(v.is_positive());
    let mut p = Q::one();
    while &p > v {
        p /= q(2);
    }
    while &(&p * q(2)) <= v {
        p *= q(2);
    }
    p
}

fn pow2_ceil(v: &Q) -> Q {
    let f = pow2_floor(v);
    if &f == v {
        f
    } else {
        f * q(2)
    }
}

fn unit(theta: f64) -> Point {
    Point::new(q_from_f64(theta.cos(), 30), q_from_f64(theta.sin(), 30))
}

struct Layout<'a> {
    c: &'a Composed,
    aux: &'a AuxiliaryGraph,
    keys: &'a [Q],
    kinds: Vec<EdgeKind>,
    groups: Vec<Group>,
    hub_group: Vec<usize>,
    /// Planar part plus one dummy per group.
    q0: Vec<usize>,
    plus: Vec<Point>,
    apices: Vec<usize>,
    r0: Q,
}

/// Draw `K_i`. `keys[k]` orders the subdivision vertices around their hub
/// (the x-coordinate of the target in the child's drawing); ties go by the
/// x-coordinate of `v`, then by id.
pub fn draw_ki(c: &Composed, aux: &AuxiliaryGraph, keys: &[Q]) -> Result<KiDrawing> {
    if keys.len() != aux.subdivs.len() {
        return Err(Error::InvalidParameter(
            "one key per subdivision vertex".into(),
        ));
    }
    let lay = Layout::new(c, aux, keys)?;
    let mut last = None;
    for attempt in 0..24 {
        match lay.attempt(attempt) {
            Ok(Some(d)) => return Ok(d),
            Ok(None) => {}
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::InvalidDrawing(format!("could not separate the parts of K_{}", aux.piece))
    }))
}

/// Keys from target ids, for drawing `K_i` on its own.
pub fn default_keys(aux: &AuxiliaryGraph) -> Vec<Q> {
    aux.subdivs.iter().map(|s| q(s.w as i64)).collect()
}

impl<'a> Layout<'a> {
    fn new(c: &'a Composed, aux: &'a AuxiliaryGraph, keys: &'a [Q]) -> Result<Layout<'a>> {
        let i = aux.piece;
        let nb = aux.base.len();
        let spec = &c.specs[i];
        let role = |l: usize| c.role(i, aux.base[l]);
        let apices: Vec<usize> = (0..nb).filter(|&l| role(l) == Role::Apex).collect();
        let mut groups: Vec<Group> = Vec::new();
        let mut vortex_group: HashMap<usize, usize> = HashMap::new();
        for (l, vx) in spec.vortices.iter().enumerate() {
            let present: Vec<usize> = (0..nb).filter(|&x| vortex_of(role(x)) == Some(l)).collect();
            if present.is_empty() {
                continue;
            }
            let at: HashMap<usize, usize> = present
                .iter()
                .enumerate()
                .map(|(k, &x)| (aux.base[x], k))
                .collect();
            let bags: Vec<Vec<usize>> = vx
                .bags
                .iter()
                .map(|b| {
                    b.iter()
                        .filter_map(|&v| at.get(&c.global[i][v]).copied())
                        .collect::<Vec<usize>>()
                })
                .filter(|b| !b.is_empty())
                .collect();
            let mut ve = Vec::new();
            for (ka, &xa) in present.iter().enumerate() {
                for (kb, &xb) in present.iter().enumerate().skip(ka + 1) {
                    let (la, lb) = (c.local[i][&aux.base[xa]], c.local[i][&aux.base[xb]]);
                    let rim = matches!(role(xa), Role::Face(_))
                        && matches!(role(xb), Role::Face(_))
                        && face_consecutive(&vx.face, la, lb);
                    if aux.graph.has_edge(xa, xb) && !rim {
                        ve.push((ka, kb));
                    }
                }
            }
            let vg = Graph::new(present.len(), ve)?;
            let (_, order) = interval_supergraph(&vg, &Decomposition::path(bags))?;
            vortex_group.insert(l, groups.len());
            groups.push(Group {
                members: order.iter().map(|&k| present[k]).collect(),
                hubs: Vec::new(),
                attach: present
                    .iter()
                    .copied()
                    .filter(|&x| matches!(role(x), Role::Face(_)))
                    .collect(),
                vortex: true,
            });
        }
        let mut hub_group = Vec::with_capacity(aux.hubs.len());
        for (k, hb) in aux.hubs.iter().enumerate() {
            let pj = c.parent_clique(hb.child);
            let cl: Vec<usize> = pj
                .iter()
                .filter(|&&v| c.owner[v] == i)
                .map(|v| aux.base.binary_search(v).expect("owned"))
                .filter(|&l| role(l) != Role::Apex)
                .collect();
            let ls: BTreeSet<Option<usize>> = cl.iter().map(|&l| vortex_of(role(l))).collect();
            let g = if ls.iter().any(|x| x.is_some()) {
                if ls.len() != 1 {
                    return Err(bad(format!(
                        "join clique of piece {} meets a vortex and more",
                        hb.child
                    )));
                }
                let l = ls.into_iter().next().flatten().expect("one vortex");
                vortex_group[&l]
            } else {
                if cl.len() > 3 {
                    return Err(bad(format!(
                        "join clique of piece {} has more than 3 planar vertices",
                        hb.child
                    )));
                }
                groups.push(Group {
                    members: Vec::new(),
                    hubs: Vec::new(),
                    attach: cl,
                    vortex: false,
                });
                groups.len() - 1
            };
            groups[g].hubs.push(k);
            hub_group.push(g);
        }
        // edge kinds
        let kinds: Vec<EdgeKind> = aux
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                if b >= nb {
                    // (v, s) or (c, s)
                    let s = &aux.subdivs[b - nb - aux.hubs.len()];
                    let g = hub_group[s.hub];
                    if a >= nb {
                        EdgeKind::Star(g)
                    } else if role(a) == Role::Apex {
                        EdgeKind::Apex
                    } else {
                        EdgeKind::Group(g)
                    }
                } else if role(a) == Role::Apex || role(b) == Role::Apex {
                    EdgeKind::Apex
                } else {
                    match (vortex_of(role(a)), vortex_of(role(b))) {
                        (Some(la), Some(lb))
                            if la == lb
                                && !(matches!(role(a), Role::Face(_))
                                    && matches!(role(b), Role::Face(_))
                                    && face_consecutive(
                                        &spec.vortices[la].face,
                                        c.local[i][&aux.base[a]],
                                        c.local[i][&aux.base[b]],
                                    )) =>
                        {
                            EdgeKind::Group(vortex_group[&la])
                        }
                        _ => EdgeKind::Planar,
                    }
                }
            })
            .collect();
        // planar part plus dummies
        let q0: Vec<usize> = (0..nb)
            .filter(|&l| matches!(role(l), Role::Planar | Role::Face(_)))
            .collect();
        let at: HashMap<usize, usize> = q0.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        let mut pe = Vec::new();
        for (e, &(a, b)) in aux.graph.edges().iter().enumerate() {
            if kinds[e] == EdgeKind::Planar {
                pe.push((at[&a], at[&b]));
            }
        }
        for (g, gr) in groups.iter().enumerate() {
            for &x in &gr.attach {
                pe.push((at[&x], q0.len() + g));
            }
        }
        let plus_graph = Graph::new(q0.len() + groups.len(), pe)?;
        let plus = match straight_line_layout(&plus_graph) {
            Ok(d) => d.positions,
            Err(Error::NotPlanar(m)) => {
                return Err(bad(format!(
                    "piece {i}: planar part with vortex faces and join cliques is not planar ({m})"
                )))
            }
            Err(e) => return Err(e),
        };
        // start radius: a quarter of the smallest gap around a dummy
        let mut gap: Option<Q> = None;
        for g in 0..groups.len() {
            let d = q0.len() + g;
            let p = &plus[d];
            for (k, o) in plus.iter().enumerate() {
                if k != d {
                    let v = p.dist2(o);
                    if gap.as_ref().is_none_or(|x| v < *x) {
                        gap = Some(v);
                    }
                }
            }
            for &(a, b) in plus_graph.edges() {
                if a != d && b != d {
                    let v = crate::geometry::dist2_point_segment(p, &plus[a], &plus[b]);
                    if gap.as_ref().is_none_or(|x| v < *x) {
                        gap = Some(v);
                    }
                }
            }
        }
        let r0 = match gap {
            Some(g2) if g2.is_positive() => pow2_floor(
                &q_from_f64(q_to_f64(&g2).sqrt() / 4.0, 40)
                    .max(Q::new(1.into(), BigInt::one() << 40)),
            ),
            _ => Q::new(1.into(), 8.into()),
        };
        Ok(Layout {
            c,
            aux,
            keys,
            kinds,
            groups,
            hub_group,
            q0,
            plus,
            apices,
            r0,
        })
    }

    fn attempt(&self, attempt: u32) -> Result<Option<KiDrawing>> {
        let aux = self.aux;
        let nh = aux.hubs.len();
        let total = aux.graph.n();
        let edges = aux.graph.edges();
        let r = &self.r0 / Q::from_integer(BigInt::one() << attempt);
        let mut pos: Vec<Option<Point>> = vec![None; total];
        for (k, &l) in self.q0.iter().enumerate() {
            pos[l] = Some(self.plus[k].clone());
        }
        // Face slots fan out towards their vertex so the segment into the
        // circle stays outside it; vortex-only vertices spread over the rest.
        let mut slot: HashMap<(usize, usize), Point> = HashMap::new();
        let rot = 0.37 * attempt as f64;
        for (g, gr) in self.groups.iter().enumerate() {
            let p = self.plus[self.q0.len() + g].clone();
            let mut fans: Vec<(f64, usize, Vec<usize>)> = Vec::new();
            let mut inner = Vec::new();
            for &u in &gr.members {
                if matches!(self.c.role(aux.piece, aux.base[u]), Role::Inner(_)) {
                    inner.push(u);
                    continue;
                }
                let es: Vec<usize> = (0..edges.len())
                    .filter(|&e| {
                        self.kinds[e] == EdgeKind::Group(g) && (edges[e].0 == u || edges[e].1 == u)
                    })
                    .collect();
                let pu = pos[u].as_ref().expect("face vertices are laid out");
                let phi = q_to_f64(&(&pu.y - &p.y)).atan2(q_to_f64(&(&pu.x - &p.x)));
                fans.push((phi, u, es));
            }
            let mut phis: Vec<f64> = fans.iter().map(|f| f.0).collect();
            phis.sort_by(f64::total_cmp);
            let mut gap = std::f64::consts::TAU;
            for (k, x) in phis.iter().enumerate() {
                let next = if k + 1 < phis.len() {
                    phis[k + 1]
                } else {
                    phis[0] + std::f64::consts::TAU
                };
                if phis.len() > 1 {
                    gap = gap.min(next - x);
                }
            }
            let widest = fans.iter().map(|f| f.2.len()).max().unwrap_or(1).max(1) as f64;
            let eps = (gap / (2.0 * widest + 2.0)).min(0.2) * (1.0 - 0.05 * (attempt % 4) as f64);
            for (phi, u, es) in &fans {
                let k = es.len() as f64;
                for (t, &e) in es.iter().enumerate() {
                    let theta = phi + (t as f64 - (k - 1.0) / 2.0) * eps;
                    slot.insert((e, *u), p.add(&unit(theta).scale(&r)));
                }
            }
            let k = inner.len();
            for (t, &u) in inner.iter().enumerate() {
                let theta = std::f64::consts::TAU * (t as f64 + 0.5) / k as f64 + rot + 0.5 * eps;
                pos[u] = Some(p.add(&unit(theta).scale(&r)));
            }
            // hubs of a vortex group sit inside its circle
            let nhub = gr.hubs.len();
            if nhub > 0 {
                let sp = pow2_floor(&(&r / q(2 * nhub as i64)));
                let y = if gr.vortex {
                    &p.y - &r * q(2 + (attempt % 3) as i64) / q(8)
                } else {
                    p.y.clone()
                };
                for (t, &hb) in gr.hubs.iter().enumerate() {
                    let off = &sp * (q(2 * t as i64 + 1 - nhub as i64) / q(2));
                    pos[aux.hubs[hb].local] = Some(Point::new(&p.x + off, y.clone()));
                }
            }
        }
        // apices above everything drawn so far
        let mut known: Vec<Point> = pos
            .iter()
            .flatten()
            .cloned()
            .chain(slot.values().cloned())
            .collect();
        if known.is_empty() {
            known.push(Point::int(0, 0));
        }
        let xmin = known.iter().map(|p| p.x.clone()).min().expect("nonempty");
        let xmax = known.iter().map(|p| p.x.clone()).max().expect("nonempty");
        let ymin = known.iter().map(|p| p.y.clone()).min().expect("nonempty");
        let ymax = known.iter().map(|p| p.y.clone()).max().expect("nonempty");
        let w = pow2_ceil(&(&xmax - &xmin + q(1)));
        let hgt = pow2_ceil(&(&ymax - &ymin + q(1)));
        for (k, &a) in self.apices.iter().enumerate() {
            let y = &ymax + &hgt * q(k as i64 + 1);
            let mut chosen = None;
            for cand in 0..64u64 {
                let num = ((cand * 37 + attempt as u64 * 11 + k as u64 * 5) % 256) as i64;
                let x = &xmin + &w * Q::new(BigInt::from(2 * num + 1), BigInt::from(512));
                let p = Point::new(x, y.clone());
                if pos.iter().flatten().any(|o| o.x == p.x) {
                    continue;
                }
                let clear = aux
                    .graph
                    .neighbors(a)
                    .iter()
                    .filter_map(|&u| pos[u].clone())
                    .all(|u| {
                        !pos.iter()
                            .flatten()
                            .chain(slot.values())
                            .any(|o| *o != u && on_segment(&p, &u, o))
                    });
                if clear {
                    chosen = Some(p);
                    break;
                }
            }
            pos[a] = Some(chosen.unwrap_or_else(|| Point::new(&xmin + &w * q(k as i64 + 1), y)));
        }
        // shear until the x-coordinates are distinct
        let placed: Vec<&Point> = pos.iter().flatten().collect();
        let mut lambda = Q::zero();
        let distinct = |lam: &Q| {
            let mut xs: Vec<Q> = placed.iter().map(|p| &p.x + lam * &p.y).collect();
            xs.sort();
            xs.windows(2).all(|w| w[0] != w[1])
        };
        if !distinct(&lambda) {
            let mut k = 20u32;
            loop {
                let lam = Q::new(BigInt::one(), BigInt::one() << k);
                if distinct(&lam) {
                    lambda = lam;
                    break;
                }
                k += 1;
                if k > 80 {
                    return Ok(None);
                }
            }
        }
        let shear = |p: &Point| Point::new(&p.x + &lambda * &p.y, p.y.clone());
        let mut pos: Vec<Option<Point>> = pos.iter().map(|p| p.as_ref().map(shear)).collect();
        let slot: HashMap<(usize, usize), Point> =
            slot.iter().map(|(k, p)| (*k, shear(p))).collect();
        // sigma and stars
        let mut sigma: Vec<Vec<usize>> = vec![Vec::new(); nh];
        for (k, s) in aux.subdivs.iter().enumerate() {
            sigma[s.hub].push(k);
        }
        for list in sigma.iter_mut() {
            list.sort_by(|&x, &y| {
                let (sx, sy) = (&aux.subdivs[x], &aux.subdivs[y]);
                let vx = aux.base.binary_search(&sx.v).expect("owned");
                let vy = aux.base.binary_search(&sy.v).expect("owned");
                let px = &pos[vx].as_ref().expect("placed").x;
                let py = &pos[vy].as_ref().expect("placed").x;
                (&self.keys[x], px, sx.v, x).cmp(&(&self.keys[y], py, sy.v, y))
            });
        }
        for (hb, list) in sigma.iter().enumerate() {
            let g = self.hub_group[hb];
            let nhub = self.groups[g].hubs.len();
            let rho = pow2_floor(&(&r / q(8 * nhub as i64)));
            let cpos = pos[aux.hubs[hb].local].clone().expect("hub placed");
            let m = list.len();
            for (t, &k) in list.iter().enumerate() {
                let mut deg = if m == 1 {
                    80.0
                } else {
                    115.0 - 50.0 * t as f64 / (m - 1) as f64
                };
                if (deg - 90.0f64).abs() < 0.5 {
                    deg -= 1.0;
                }
                pos[aux.subdivs[k].local] = Some(cpos.add(&unit(deg.to_radians()).scale(&rho)));
            }
        }
        let pos: Vec<Point> = pos
            .into_iter()
            .map(|p| p.expect("every vertex placed"))
            .collect();
        {
            let mut xs: Vec<&Q> = pos.iter().map(|p| &p.x).collect();
            xs.sort();
            if xs.windows(2).any(|w| w[0] == w[1]) {
                return Ok(None);
            }
        }
        // routes
        let routes: Vec<Vec<Point>> = edges
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| {
                let mut r = vec![pos[a].clone()];
                if let EdgeKind::Group(_) = self.kinds[e] {
                    if let Some(p) = slot.get(&(e, a)) {
                        r.push(p.clone());
                    }
                    if let Some(p) = slot.get(&(e, b)) {
                        r.push(p.clone());
                    }
                }
                r.push(pos[b].clone());
                r
            })
            .collect();
        let drawing = Drawing {
            style: Style::Polyline,
            positions: pos.clone(),
            edges: edges.to_vec(),
            routes,
        };
        // squares
        let mut squares = Vec::with_capacity(nh);
        for hb in &aux.hubs {
            let cp = &pos[hb.local];
            let gap = pos
                .iter()
                .enumerate()
                .filter(|&(v, _)| v != hb.local)
                .map(|(_, p)| (&p.x - &cp.x).abs())
                .min()
                .unwrap_or_else(Q::one);
            let mut a = pow2_floor(&(gap / q(4)));
            let mut ok = false;
            for _ in 0..60 {
                let sq = Square {
                    x0: &cp.x - &a,
                    x1: &cp.x + &a,
                    y0: &cp.y - &a * q(2),
                    y1: cp.y.clone(),
                };
                let corners = sq.corners();
                let hit = drawing
                    .edges
                    .iter()
                    .zip(&drawing.routes)
                    .any(|(&(u, v), rt)| {
                        u != hb.local
                            && v != hb.local
                            && rt
                                .windows(2)
                                .any(|s| segment_meets_convex(&s[0], &s[1], &corners))
                    });
                if !hit {
                    squares.push(sq);
                    ok = true;
                    break;
                }
                a /= q(2);
            }
            if !ok {
                return Ok(None);
            }
        }
        let hits = match crossing_hits(&drawing, Exec::default()) {
            Ok(h) => h,
            Err(_) if attempt < 23 => return Ok(None),
            Err(e) => return Err(e),
        };
        let group_of = |e: usize| match self.kinds[e] {
            EdgeKind::Group(g) | EdgeKind::Star(g) => Some(g),
            _ => None,
        };
        for h in &hits {
            let (ke, kf) = (self.kinds[h.e], self.kinds[h.f]);
            let apex = ke == EdgeKind::Apex || kf == EdgeKind::Apex;
            let same = group_of(h.e).is_some() && group_of(h.e) == group_of(h.f);
            if !(apex || same) {
                return Ok(None);
            }
        }
        let segs: Vec<usize> = drawing.routes.iter().map(|r| r.len() - 1).collect();
        let all: usize = segs.iter().sum();
        let mut stage = BigInt::zero();
        let mut groups = Vec::with_capacity(self.groups.len());
        let delta = BigInt::from(self.c.graph.max_degree());
        let hh = BigInt::from(self.c.h + 3);
        for (g, gr) in self.groups.iter().enumerate() {
            let mine: Vec<usize> = (0..edges.len())
                .filter(|&e| group_of(e) == Some(g))
                .collect();
            let s: usize = mine.iter().map(|&e| segs[e]).sum();
            let sq: usize = mine.iter().map(|&e| segs[e] * segs[e]).sum();
            stage += BigInt::from((s * s - sq) / 2);
            let stars: usize = aux
                .subdivs
                .iter()
                .filter(|sd| self.hub_group[sd.hub] == g)
                .count();
            let vertices = gr.members.len()
                + gr.attach.iter().filter(|x| !gr.members.contains(x)).count()
                + gr.hubs.len()
                + stars;
            let crossings = hits
                .iter()
                .filter(|h| group_of(h.e) == Some(g) && group_of(h.f) == Some(g))
                .count();
            groups.push(GroupStat {
                vertices,
                crossings,
                pathwidth_bound: &hh * &hh * &delta * BigInt::from(vertices),
            });
        }
        let apex_edges: Vec<usize> = (0..edges.len())
            .filter(|&e| self.kinds[e] == EdgeKind::Apex)
            .collect();
        for &e in &apex_edges {
            stage += BigInt::from(segs[e] * (all - segs[e]));
        }
        let mut report = CrossingReport::from_hits(&drawing.edges, &hits);
        report
            .bounds
            .push(BoundCheck::int("stage_bound", stage.clone(), report.total));
        let apex_hits = hits
            .iter()
            .filter(|h| self.kinds[h.e] == EdgeKind::Apex || self.kinds[h.f] == EdgeKind::Apex)
            .count();
        let apex_budget: usize = self
            .apices
            .iter()
            .map(|&a| aux.graph.degree(a))
            .sum::<usize>()
            * all;
        report.bounds.push(BoundCheck::int(
            "apex_degree_times_segments",
            apex_budget,
            apex_hits,
        ));
        Ok(Some(KiDrawing {
            drawing,
            kinds: self.kinds.clone(),
            squares,
            sigma,
            report,
            stage_bound: stage,
            groups,
        }))
    }
}

/// Per-region statistics of the joined drawing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionStat {
    pub piece: usize,
    /// Crossings inside `D_i` minus the child squares.
    pub crossings: usize,
    pub ki_edges: usize,
    pub ki_segments: usize,
    /// Vertical segments meeting the region.
    pub verticals: usize,
    /// `stage bound + verticals * ki_segments`.
    pub bound: BigInt,
    /// `bound / (Delta |E(K_i)|)`.
    pub constant: Q,
}

#[derive(Clone, Debug)]
pub struct CliqueSumDrawing {
    pub graph: Graph,
    pub drawing: Drawing,
    pub report: CrossingReport,
    pub regions: Vec<RegionStat>,
    /// Largest per-region constant.
    pub constant: Q,
    /// `crossings / (Delta n)`.
    pub ratio: Q,
    pub vertical_pairs: usize,
    pub h: usize,
}

#[derive(Clone, Debug)]
struct Vertical {
    edge: (usize, usize),
    seg: usize,
    land: usize,
    w: usize,
}

#[derive(Clone, Debug, Default)]
struct Sub {
    pos: BTreeMap<usize, Point>,
    routes: BTreeMap<(usize, usize), Vec<Point>>,
    squares: Vec<(usize, Square)>,
    verticals: Vec<Vertical>,
}

impl Sub {
    fn points(&self) -> impl Iterator<Item = &Point> {
        self.pos.values().chain(self.routes.values().flatten())
    }

    fn bbox(&self) -> Option<Square> {
        let mut it = self.points().chain(std::iter::empty());
        let first = it.next()?.clone();
        let mut b = Square {
            x0: first.x.clone(),
            x1: first.x.clone(),
            y0: first.y.clone(),
            y1: first.y,
        };
        let mut grow = |p: &Point| {
            if p.x < b.x0 {
                b.x0 = p.x.clone();
            }
            if p.x > b.x1 {
                b.x1 = p.x.clone();
            }
            if p.y < b.y0 {
                b.y0 = p.y.clone();
            }
            if p.y > b.y1 {
                b.y1 = p.y.clone();
            }
        };
        for p in it {
            grow(p);
        }
        for (_, s) in &self.squares {
            for p in s.corners() {
                grow(&p);
            }
        }
        Some(b)
    }

    fn map(self, s: &Q, t: &Point) -> Sub {
        let f = |p: &Point| Point::new(&p.x * s + &t.x, &p.y * s + &t.y);
        Sub {
            pos: self.pos.iter().map(|(&k, p)| (k, f(p))).collect(),
            routes: self
                .routes
                .iter()
                .map(|(&k, r)| (k, r.iter().map(f).collect()))
                .collect(),
            squares: self
                .squares
                .iter()
                .map(|(j, q)| (*j, q.map(s, t)))
                .collect(),
            verticals: self.verticals,
        }
    }
}

/// Draw the whole clique-sum: children first, nested into their squares.
pub fn join(t: &CliqueSumTree) -> Result<CliqueSumDrawing> {
    let c = compose(t)?;
    let aux: Vec<AuxiliaryGraph> = (0..t.pieces.len())
        .map(|i| build_ki(&c, i))
        .collect::<Result<_>>()?;
    check_subdivision(&c, &aux)?;
    let mut last = None;
    for attempt in 0..6 {
        match join_attempt(&c, &aux, attempt) {
            Ok(d) => return Ok(d),
            Err(e @ (Error::InvalidDrawing(_) | Error::Overlap(..))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn join_attempt(c: &Composed, aux: &[AuxiliaryGraph], attempt: u32) -> Result<CliqueSumDrawing> {
    let k = aux.len();
    let shrink = Q::new(BigInt::one(), BigInt::one() << (2 * attempt));
    let mut subs: Vec<Option<Sub>> = vec![None; k];
    let mut kds: Vec<Option<KiDrawing>> = vec![None; k];
    for i in (0..k).rev() {
        let a = &aux[i];
        let keys: Vec<Q> = a
            .subdivs
            .iter()
            .map(|s| {
                subs[s.path[1]].as_ref().expect("children first").pos[&s.w]
                    .x
                    .clone()
            })
            .collect();
        let kd = draw_ki(c, a, &keys)?;
        let nb = a.base.len();
        let mut sub = Sub::default();
        for (l, &v) in a.base.iter().enumerate() {
            sub.pos.insert(v, kd.drawing.positions[l].clone());
        }
        for (e, &(x, y)) in a.graph.edges().iter().enumerate() {
            if x < nb && y < nb {
                let (gx, gy) = (a.base[x], a.base[y]);
                let mut r = kd.drawing.routes[e].clone();
                if gx > gy {
                    r.reverse();
                }
                sub.routes.insert((gx.min(gy), gx.max(gy)), r);
            }
        }
        for (hb, h) in a.hubs.iter().enumerate() {
            let child = subs[h.child].take().expect("children first");
            let sq = &kd.squares[hb];
            let side = &sq.x1 - &sq.x0;
            let m = &side / q(8);
            let (iw, ih) = (&side - &m * q(2), &side - &m * q(2));
            let bb = child.bbox().expect("child has vertices");
            let (bw, bh) = (&bb.x1 - &bb.x0, &bb.y1 - &bb.y0);
            let mut s = Q::one();
            if bw.is_positive() {
                s = s.min(&iw / &bw);
            }
            if bh.is_positive() {
                s = s.min(&ih / &bh);
            }
            let s = pow2_floor(&s);
            let tx = (&sq.x0 + &sq.x1) / q(2) - &s * (&bb.x0 + &bb.x1) / q(2);
            let ty = (&sq.y0 + &sq.y1) / q(2) - &s * (&bb.y0 + &bb.y1) / q(2);
            let child = child.map(&s, &Point::new(tx, ty));
            // landing points
            let mut xs: Vec<&Q> = child.points().map(|p| &p.x).collect();
            xs.sort();
            xs.dedup();
            let mut gap = m.clone();
            for w in xs.windows(2) {
                let d = w[1] - w[0];
                if d < gap {
                    gap = d;
                }
            }
            let mut per_w: HashMap<usize, usize> = HashMap::new();
            for &sk in &kd.sigma[hb] {
                *per_w.entry(a.subdivs[sk].w).or_insert(0) += 1;
            }
            let tmax = per_w.values().copied().max().unwrap_or(0);
            let delta = pow2_floor(&(&gap / q(2 * tmax as i64 + 2))) * &shrink;
            let mut used: HashMap<usize, usize> = HashMap::new();
            let sl = a.graph.edges();
            for &sk in &kd.sigma[hb] {
                let sd = &a.subdivs[sk];
                let tk = used.entry(sd.w).or_insert(0);
                *tk += 1;
                let wp = child.pos[&sd.w].clone();
                let land = Point::new(&wp.x + &delta * q(*tk as i64), sq.y1.clone());
                let vl = a.base.binary_search(&sd.v).expect("owned");
                let e = sl.binary_search(&(vl, sd.local)).expect("v-s edge");
                let mut r = kd.drawing.routes[e].clone();
                r.push(land);
                r.push(wp);
                let key = (sd.v.min(sd.w), sd.v.max(sd.w));
                let seg = if sd.v < sd.w {
                    r.len() - 2
                } else {
                    r.reverse();
                    0
                };
                sub.routes.insert(key, r);
                sub.verticals.push(Vertical {
                    edge: key,
                    seg,
                    land: h.child,
                    w: sd.w,
                });
            }
            sub.squares.push((h.child, sq.clone()));
            sub.pos.extend(child.pos);
            sub.routes.extend(child.routes);
            sub.squares.extend(child.squares);
            sub.verticals.extend(child.verticals);
        }
        subs[i] = Some(sub);
        kds[i] = Some(kd);
    }
    let root = subs[0].take().expect("root drawn");
    let g = &c.graph;
    let positions: Vec<Point> = (0..g.n()).map(|v| root.pos[&v].clone()).collect();
    let routes: Vec<Vec<Point>> = g.edges().iter().map(|e| root.routes[e].clone()).collect();
    let drawing = Drawing {
        style: Style::Polyline,
        positions,
        edges: g.edges().to_vec(),
        routes,
    };
    let hits = crossing_hits(&drawing, Exec::default())?;
    let vertical: HashSet<(usize, usize)> = root
        .verticals
        .iter()
        .map(|v| (g.edge_index(v.edge.0, v.edge.1).expect("edge"), v.seg))
        .collect();
    let vertical_pairs = hits
        .iter()
        .filter(|h| vertical.contains(&(h.e, h.si)) && vertical.contains(&(h.f, h.sj)))
        .count();
    // attribute crossings to the deepest square
    let mut region = vec![0usize; k];
    for h in &hits {
        let p = hit_point(&drawing, h);
        let best = root
            .squares
            .iter()
            .filter(|(_, s)| s.contains(&p))
            .max_by_key(|(j, _)| c.depth(*j))
            .map(|(j, _)| *j);
        region[best.unwrap_or(0)] += 1;
    }
    let delta = BigInt::from(g.max_degree());
    let mut regions = Vec::with_capacity(k);
    let mut report = CrossingReport::from_hits(&drawing.edges, &hits);
    let mut constant = Q::zero();
    for i in 0..k {
        let kd = kds[i].as_ref().expect("drawn");
        let verticals = root
            .verticals
            .iter()
            .filter(|v| c.is_ancestor(v.land, i) && c.is_ancestor(i, c.owner[v.w]))
            .count();
        let segs = kd.drawing.segment_count();
        let bound = &kd.stage_bound + BigInt::from(verticals * segs);
        let ke = aux[i].graph.m();
        let denom = &delta * BigInt::from(ke);
        let ci = if denom.is_zero() {
            Q::zero()
        } else {
            Q::new(bound.clone(), denom)
        };
        if ci > constant {
            constant = ci.clone();
        }
        report.bounds.push(BoundCheck::new(
            format!("stage_{i}"),
            Q::from_integer(kd.stage_bound.clone()),
            q(kd.report.total as i64),
        ));
        report.bounds.push(BoundCheck::int(
            format!("region_{i}"),
            bound.clone(),
            region[i],
        ));
        regions.push(RegionStat {
            piece: i,
            crossings: region[i],
            ki_edges: ke,
            ki_segments: segs,
            verticals,
            bound,
            constant: ci,
        });
    }
    report
        .bounds
        .push(BoundCheck::int("vertical_pairs", 0, vertical_pairs));
    let nd = &delta * BigInt::from(g.n());
    let ratio = if nd.is_zero() {
        Q::zero()
    } else {
        Q::new(BigInt::from(report.total), nd)
    };
    Ok(CliqueSumDrawing {
        graph: g.clone(),
        drawing,
        report,
        regions,
        constant,
        ratio,
        vertical_pairs,
        h: c.h,
    })
}

// ---------------------------------------------------------------- fixtures

fn k5_piece() -> PieceSpec {
    PieceSpec {
        n: 5,
        edges: Graph::complete(5).edges().to_vec(),
        apices: vec![4],
        vortices: Vec::new(),
        genus: 0,
        parent: None,
        parent_clique: Vec::new(),
        parent_map: Vec::new(),
        drop: Vec::new(),
    }
}

fn plain(g: &Graph) -> PieceSpec {
    PieceSpec {
        n: g.n(),
        edges: g.edges().to_vec(),
        apices: Vec::new(),
        vortices: Vec::new(),
        genus: 0,
        parent: None,
        parent_clique: Vec::new(),
        parent_map: Vec::new(),
        drop: Vec::new(),
    }
}

fn attach(mut child: PieceSpec, parent: usize, clique: Vec<usize>, map: Vec<usize>) -> PieceSpec {
    child.parent = Some(parent);
    child.parent_clique = clique;
    child.parent_map = map;
    child
}

/// Two copies of K5 (one apex over K4 each) sharing a vertex.
pub fn two_k5() -> CliqueSumTree {
    CliqueSumTree {
        pieces: vec![k5_piece(), attach(k5_piece(), 0, vec![0], vec![0])],
    }
}

/// Triangles glued along edges, each shared edge deleted: a 5-cycle.
pub fn triangle_chain() -> CliqueSumTree {
    let t = plain(&Graph::complete(3));
    let mut b = attach(t.clone(), 0, vec![0, 1], vec![1, 2]);
    b.drop = vec![(0, 1)];
    let mut c = attach(t.clone(), 1, vec![0, 1], vec![1, 2]);
    c.drop = vec![(0, 1)];
    CliqueSumTree {
        pieces: vec![t, b, c],
    }
}

/// Random grid piece with up to `vortices` vortices on unit cells and up to
/// `apices` apices.
fn random_piece(r: &mut ChaCha8Rng, vortices: usize, apices: usize) -> PieceSpec {
    let (rows, cols) = (r.gen_range(2..=4), r.gen_range(2..=4));
    let grid = Graph::grid(rows, cols);
    let mut p = plain(&grid);
    let id = |a: usize, b: usize| a * cols + b;
    let mut cells: Vec<(usize, usize)> = (0..rows - 1)
        .flat_map(|a| (0..cols - 1).map(move |b| (a, b)))
        .collect();
    cells.shuffle(r);
    let mut used: HashSet<usize> = HashSet::new();
    let mut edges: BTreeSet<(usize, usize)> = p.edges.iter().copied().collect();
    for &(a, b) in &cells {
        if p.vortices.len() >= vortices {
            break;
        }
        let face = vec![id(a, b), id(a, b + 1), id(a + 1, b + 1), id(a + 1, b)];
        if face.iter().any(|v| used.contains(v)) {
            continue;
        }
        used.extend(face.iter().copied());
        let mut bags: Vec<Vec<usize>> = face.iter().map(|&u| vec![u]).collect();
        let inner = r.gen_range(1..=3);
        for _ in 0..inner {
            let s = r.gen_range(0..4);
            let e = r.gen_range(s..4);
            if (s..=e).any(|j| bags[j].len() >= 3) {
                continue;
            }
            let x = p.n;
            p.n += 1;
            for (j, bag) in bags.iter_mut().enumerate().take(e + 1).skip(s) {
                for &y in bag.iter() {
                    if y == face[j] || r.gen_bool(0.6) {
                        edges.insert((y.min(x), y.max(x)));
                    }
                }
                bag.push(x);
            }
        }
        p.vortices.push(VortexSpec { face, bags });
    }
    for _ in 0..apices {
        let x = p.n;
        p.n += 1;
        for v in 0..x {
            if r.gen_bool(0.3) {
                edges.insert((v, x));
            }
        }
        edges.insert((r.gen_range(0..x), x));
        p.apices.push(x);
    }
    p.edges = edges.into_iter().collect();
    p
}

/// Cliques of size 1 to 3 of a piece usable as a join clique in it: at most
/// two planar vertices, or all inside one vortex, plus apices.
fn join_cliques(p: &PieceSpec, avoid: &[usize]) -> Vec<Vec<usize>> {
    let info = analyse_piece(0, p).expect("fixture pieces are valid");
    let g = &info.graph;
    let mut out = Vec::new();
    let ok = |c: &[usize]| {
        if c.iter().any(|v| avoid.contains(v)) {
            return false;
        }
        let rest: Vec<Role> = c
            .iter()
            .map(|&v| info.roles[v])
            .filter(|&r| r != Role::Apex)
            .collect();
        let vs: BTreeSet<Option<usize>> = rest.iter().map(|&r| vortex_of(r)).collect();
        if vs.iter().any(|x| x.is_some()) {
            vs.len() == 1
        } else {
            rest.len() <= 2
        }
    };
    for a in 0..g.n() {
        if ok(&[a]) {
            out.push(vec![a]);
        }
        for &b in g.neighbors(a) {
            if b > a {
                if ok(&[a, b]) {
                    out.push(vec![a, b]);
                }
                for &c in g.neighbors(b) {
                    if c > b && g.has_edge(a, c) && ok(&[a, b, c]) {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
    }
    out
}

/// A random tree of pieces with `pieces` pieces.
pub fn random_tree(pieces: usize, seed: u64) -> CliqueSumTree {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<PieceSpec> = Vec::new();
    for i in 0..pieces.max(1) {
        let mut p = if r.gen_bool(0.2) {
            k5_piece()
        } else {
            let (vx, ap) = (r.gen_range(0..=2), r.gen_range(0..=2));
            random_piece(&mut r, vx, ap)
        };
        if i > 0 {
            let par = r.gen_range(0..i);
            let pc = join_cliques(&out[par], &[]);
            let size = pc.choose(&mut r).map(|c| c.len()).unwrap_or(1);
            let theirs: Vec<&Vec<usize>> = pc.iter().filter(|c| c.len() == size).collect();
            let mine_all = join_cliques(&p, &[]);
            let mine: Vec<&Vec<usize>> = mine_all.iter().filter(|c| c.len() == size).collect();
            let (Some(t), Some(m)) = (theirs.choose(&mut r), mine.choose(&mut r)) else {
                p = attach(p, par, vec![0], vec![0]);
                out.push(p);
                continue;
            };
            let (t, m) = ((*t).clone(), (*m).clone());
            p = attach(p, par, m.clone(), t);
            if m.len() >= 2 && r.gen_bool(0.3) {
                p.drop = vec![(m[0], m[1])];
            }
        }
        out.push(p);
    }
    CliqueSumTree { pieces: out }
}

/// The fixture suite: the two-K5 sum, the triangle chain and random trees.
pub fn fixture_trees() -> Vec<(String, CliqueSumTree)> {
    let mut v = vec![
        ("two-k5".to_string(), two_k5()),
        ("triangle-chain".to_string(), triangle_chain()),
    ];
    let mut seed = 0u64;
    while v.len() < 20 {
        let pieces = 1 + (seed as usize % 10);
        let t = random_tree(pieces, seed);
        if compose(&t).map(|c| c.graph.n() <= 200).unwrap_or(false) {
            v.push((format!("random-{seed}"), t));
        }
        seed += 1;
    }
    v
}
