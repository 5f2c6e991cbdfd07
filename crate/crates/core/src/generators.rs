//! Hard instances with known crossing numbers, their witness drawings, and
//! random graphs that come with structural certificates.

use crate::decomposition::Decomposition;
use crate::drawers::Certified;
use crate::error::{Error, Result};
use crate::geometry::{
    count_crossings, dist2_point_segment, q, qr, BoundCheck, Drawing, Point, Style, Q,
};
use crate::graph::Graph;
use crate::planar::{embedding, Embedding};
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap};

/// Copies of K5 in which every edge `vw` gets `Delta/4 - 1` extra common
/// neighbours, plus a width-2 planar partition.
#[derive(Clone, Debug)]
pub struct K33FreeInstance {
    pub graph: Graph,
    pub partition: Decomposition,
    pub delta: usize,
    pub copies: usize,
    /// Known crossing number `copies * (Delta/4)^2`.
    pub crossing_number: u64,
    /// `Delta n / 40 * (1 + 2/(Delta-2))`, equal to `crossing_number`.
    pub formula: Q,
}

fn check_delta(delta: usize) -> Result<()> {
    if delta < 4 || !delta.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "Delta = {delta} must be a positive multiple of 4"
        )));
    }
    Ok(())
}

/// Vertices per copy: `5 (Delta/2 - 1)`.
pub fn k33_free_copy_size(delta: usize) -> usize {
    5 * (delta / 2 - 1)
}

/// Inflate `base`: every edge gets `extra` fresh vertices adjacent to both
/// endpoints. Fresh vertices follow the base vertices, grouped by edge in
/// sorted edge order.
fn inflate(base: &Graph, extra: usize) -> Graph {
    let mut edges = base.edges().to_vec();
    let mut next = base.n();
    for &(a, b) in base.edges() {
        for _ in 0..extra {
            edges.push((a, next));
            edges.push((b, next));
            next += 1;
        }
    }
    Graph::new(next, edges).expect("inflation is simple")
}

pub fn gen_k33_free(delta: usize, copies: usize) -> Result<K33FreeInstance> {
    check_delta(delta)?;
    if copies == 0 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    let one = inflate(&Graph::complete(5), delta / 4 - 1);
    let per = one.n();
    let mut graph = Graph::empty(0);
    for _ in 0..copies {
        graph = graph.disjoint_union(&one);
    }
    // bags {0,1}, {2,3}, {4} of each K5, every fresh vertex alone
    let k5_bag = [0, 0, 1, 1, 2];
    let per_bags = 3 + (per - 5);
    let mut bags = Vec::with_capacity(copies * per_bags);
    let mut bag_of = vec![0; graph.n()];
    for c in 0..copies {
        let off = c * per;
        let boff = c * per_bags;
        bags.push(vec![off, off + 1]);
        bags.push(vec![off + 2, off + 3]);
        bags.push(vec![off + 4]);
        for (i, &b) in k5_bag.iter().enumerate() {
            bag_of[off + i] = boff + b;
        }
        for f in 5..per {
            bag_of[off + f] = bags.len();
            bags.push(vec![off + f]);
        }
    }
    let host = Graph::from_edges_lossy(
        bags.len(),
        graph.edges().iter().map(|&(a, b)| (bag_of[a], bag_of[b])),
    );
    let partition = Decomposition::new(host, bags)?;
    let n = graph.n() as i64;
    let d = delta as i64;
    let formula = qr(d * n, 40) * (q(1) + qr(2, d - 2));
    let crossing_number = copies as u64 * (delta as u64 / 4).pow(2);
    Ok(K33FreeInstance {
        graph,
        partition,
        delta,
        copies,
        crossing_number,
        formula,
    })
}

/// K5 with exactly one crossing: triangle `a b c` around `d`, `e`; the
/// edges `ae` and `bd` cross at (5, 5/2).
pub fn k5_one_crossing() -> Vec<Point> {
    vec![
        Point::int(0, 0),
        Point::int(10, 0),
        Point::int(5, 10),
        Point::int(4, 3),
        Point::int(6, 3),
    ]
}

/// Drawing of [`gen_k33_free`] with exactly `copies * (Delta/4)^2` crossings:
/// the bundle of each K5 edge (the edge plus its two-paths) hugs that edge,
/// fresh vertices alternating sides at growing offsets.
pub fn witness_drawing_k33_free(delta: usize, copies: usize) -> Result<Certified> {
    let inst = gen_k33_free(delta, copies)?;
    let base = k5_one_crossing();
    let k5 = Graph::complete(5);
    let bundle = delta / 4;
    // smallest distance between a K5 vertex and a K5 edge not at it
    let mut feat: Option<Q> = None;
    for &(a, b) in k5.edges() {
        for (v, p) in base.iter().enumerate() {
            if v != a && v != b {
                let d = dist2_point_segment(p, &base[a], &base[b]);
                if feat.as_ref().is_none_or(|f| d < *f) {
                    feat = Some(d);
                }
            }
        }
    }
    let feat = feat.expect("K5 has such pairs");
    let mut step = q(1);
    while &step * &step * q((4 * bundle * bundle) as i64).pow(2) > feat {
        step /= q(2);
    }
    let per = inst.graph.n() / copies;
    let mut pos = vec![Point::int(0, 0); inst.graph.n()];
    for c in 0..copies {
        let shift = Point::int(20 * c as i64, 0);
        let off = c * per;
        for (i, p) in base.iter().enumerate() {
            pos[off + i] = p.add(&shift);
        }
        let mut next = off + 5;
        for &(a, b) in k5.edges() {
            let (pa, pb) = (&base[a], &base[b]);
            let mid = pa.add(pb).scale(&qr(1, 2));
            let dir = pb.sub(pa);
            let l1 = dir.x.abs() + dir.y.abs();
            let normal = Point::new(-&dir.y / &l1, &dir.x / &l1);
            for k in 0..bundle - 1 {
                let mag = q((k / 2 + 1) as i64) * &step;
                let sign = if k % 2 == 0 { q(1) } else { q(-1) };
                pos[next] = mid.add(&normal.scale(&(mag * sign))).add(&shift);
                next += 1;
            }
        }
    }
    let drawing = Drawing::straight(&inst.graph, pos, Style::Polyline);
    let mut report = count_crossings(&drawing)?;
    let expect = inst.crossing_number;
    report.bounds.push(BoundCheck::new(
        "equals_known_crossing_number",
        q(expect as i64),
        q(report.total as i64),
    ));
    report.bounds.push(BoundCheck::new(
        "at_least_known_crossing_number",
        q(report.total as i64),
        q(expect as i64),
    ));
    Ok(Certified { drawing, report })
}

/// Disjoint copies of the K5 inflations for each `d_i` of a degree set `{2, d_1, ..}`.
#[derive(Clone, Debug)]
pub struct DegreeSetInstance {
    pub graph: Graph,
    pub degree_set: Vec<usize>,
    pub sum_deg_sq: u64,
    /// Known crossing number of the graph.
    pub crossing_number: u64,
    /// `crossing_number > sum deg^2 / 200`.
    pub exceeds_fraction: bool,
}

pub fn gen_degree_set(set: &[usize], copies: usize) -> Result<DegreeSetInstance> {
    let mut ds: Vec<usize> = set.to_vec();
    ds.sort_unstable();
    ds.dedup();
    if ds.first() != Some(&2) {
        return Err(Error::InvalidParameter(
            "the degree set must contain 2".into(),
        ));
    }
    let big: Vec<usize> = ds[1..].to_vec();
    if big.is_empty() {
        return Err(Error::InvalidParameter(
            "the degree set needs some d_i besides 2".into(),
        ));
    }
    for &d in &big {
        check_delta(d)?;
    }
    if !big.iter().any(|&d| d >= 8) {
        return Err(Error::InvalidParameter(
            "degree 2 only appears when some d_i >= 8".into(),
        ));
    }
    if copies == 0 {
        return Err(Error::InvalidParameter("need at least one copy".into()));
    }
    let mut graph = Graph::empty(0);
    let mut cr = 0u64;
    for &d in &big {
        let inst = gen_k33_free(d, copies)?;
        cr += inst.crossing_number;
        graph = graph.disjoint_union(&inst.graph);
    }
    let mut found: Vec<usize> = graph.degrees();
    found.sort_unstable();
    found.dedup();
    if found != ds {
        return Err(Error::InvalidParameter(format!(
            "degree set {found:?} differs from {ds:?}"
        )));
    }
    let sum_deg_sq: u64 = graph.degrees().iter().map(|&d| (d * d) as u64).sum();
    Ok(DegreeSetInstance {
        graph,
        degree_set: ds,
        sum_deg_sq,
        crossing_number: cr,
        exceeds_fraction: 200 * cr > sum_deg_sq,
    })
}

/// K3,3 (h = 5) or K_{h-1} (h >= 6) with every edge inflated so the maximum
/// degree is `Delta`. K_h-minor-freeness is not checked.
pub fn gen_kh_based(h: usize, delta: usize) -> Result<Graph> {
    if h < 5 {
        return Err(Error::InvalidParameter("h must be at least 5".into()));
    }
    let (base, d0) = if h == 5 {
        (Graph::complete_bipartite(3, 3), 3)
    } else {
        (Graph::complete(h - 1), h - 2)
    };
    if delta < d0 || !delta.is_multiple_of(d0) {
        return Err(Error::InvalidParameter(format!(
            "Delta = {delta} must be a positive multiple of {d0}"
        )));
    }
    Ok(inflate(&base, delta / d0 - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    KTree { k: usize },
    Interval,
    Planar,
    Pathwidth { k: usize },
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// Strong tree decomposition whose bags are cliques.
    CliqueTree(Decomposition),
    IntervalOrder(Vec<usize>),
    Embedding(Embedding),
    PathDecomposition(Decomposition),
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph of the given kind on `n` vertices with its certificate.
pub fn gen_random_certified(kind: RandomKind, n: usize, seed: u64) -> Result<(Graph, Certificate)> {
    let mut r = rng(seed);
    match kind {
        RandomKind::KTree { k } => {
            if k == 0 {
                return Err(Error::InvalidParameter("k must be positive".into()));
            }
            let first: Vec<usize> = (0..n.min(k + 1)).collect();
            let mut edges = Vec::new();
            for (i, &a) in first.iter().enumerate() {
                for &b in &first[i + 1..] {
                    edges.push((a, b));
                }
            }
            let mut bags = vec![first];
            let mut tree = Vec::new();
            for v in k + 1..n {
                let p = r.gen_range(0..bags.len());
                let mut s = bags[p].clone();
                s.remove(r.gen_range(0..s.len()));
                for &u in &s {
                    edges.push((u, v));
                }
                s.push(v);
                tree.push((p, bags.len()));
                bags.push(s);
            }
            let g = Graph::new(n, edges)?;
            let host = Graph::new(bags.len(), tree)?;
            Ok((g, Certificate::CliqueTree(Decomposition::new(host, bags)?)))
        }
        RandomKind::Interval => {
            let span = (2 * n).max(1) as i64;
            let iv: Vec<(i64, i64)> = (0..n)
                .map(|_| {
                    let l = r.gen_range(0..span);
                    (l, l + r.gen_range(0..=(n as i64 / 3).max(1)))
                })
                .collect();
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if iv[a].0 <= iv[b].1 && iv[b].0 <= iv[a].1 {
                        edges.push((a, b));
                    }
                }
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| (iv[v].0, v));
            Ok((Graph::new(n, edges)?, Certificate::IntervalOrder(order)))
        }
        RandomKind::Planar => {
            let g = random_planar(n, &mut r, 0.25);
            let e = embedding(&g)?;
            Ok((g, Certificate::Embedding(e)))
        }
        RandomKind::Pathwidth { k } => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut r);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n.min(i + k + 1) {
                    if j == i + 1 || r.gen_bool(0.5) {
                        edges.push((perm[i], perm[j]));
                    }
                }
            }
            let bags: Vec<Vec<usize>> = if n <= k + 1 {
                vec![perm.clone()]
            } else {
                (0..n - k).map(|i| perm[i..=i + k].to_vec()).collect()
            };
            let bags = if n == 0 { Vec::new() } else { bags };
            Ok((
                Graph::new(n, edges)?,
                Certificate::PathDecomposition(Decomposition::path(bags)),
            ))
        }
    }
}

/// Random stacked triangulation (insert each vertex into a random triangular
/// face) with each edge then kept with probability `1 - drop`.
pub fn random_planar(n: usize, r: &mut ChaCha8Rng, drop: f64) -> Graph {
    if n < 3 {
        return Graph::path(n);
    }
    let mut edges: BTreeSet<(usize, usize)> = [(0, 1), (1, 2), (0, 2)].into_iter().collect();
    let mut faces = vec![[0, 1, 2], [0, 1, 2]];
    for v in 3..n {
        let i = r.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        for u in [a, b, c] {
            edges.insert((u, v));
        }
        faces.extend([[a, b, v], [b, c, v], [a, c, v]]);
    }
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|_| !r.gen_bool(drop)).collect();
    Graph::new(n, kept).expect("stacked triangulations are simple")
}

/// Random graph with a planar decomposition of bounded width and spread.
/// The host is a stacked triangulation on `bags` bags; each vertex occupies a
/// random connected set of at most `max_spread` bags (grown by a random walk)
/// and edges join only vertices whose bag sets touch.
pub fn random_planar_decomposition(
    n: usize,
    bags: usize,
    width: usize,
    max_spread: usize,
    seed: u64,
) -> Result<(Graph, Decomposition)> {
    if width == 0 || max_spread == 0 || bags == 0 || n > bags * width {
        return Err(Error::InvalidParameter(
            "not enough room in the bags".into(),
        ));
    }
    let mut r = rng(seed);
    let host = random_planar(bags, &mut r, 0.0);
    let mut content: Vec<Vec<usize>> = vec![Vec::new(); bags];
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let free: Vec<usize> = (0..bags).filter(|&b| content[b].len() < width).collect();
        let mut cur = *free.choose(&mut r).expect("room checked above");
        let mut set = vec![cur];
        content[cur].push(v);
        let slots: usize = content.iter().map(|c| width - c.len()).sum();
        // leave one slot for every vertex still to come
        let spare = slots - (n - v - 1);
        let want = r.gen_range(1..=max_spread).min(spare + 1);
        while set.len() < want {
            let opts: Vec<usize> = host
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&b| content[b].len() < width && !set.contains(&b))
                .collect();
            let Some(&nx) = opts.choose(&mut r) else {
                break;
            };
            content[nx].push(v);
            set.push(nx);
            cur = nx;
        }
        set.sort_unstable();
        sets.push(set);
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if crate::decomposition::touch(&host, &sets[a], &sets[b]) && r.gen_bool(0.3) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::new(n, edges)?;
    Ok((g, Decomposition::new(host, content)?))
}

/// Erdos-Renyi graph `G(n, p)`.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).expect("simple")
}

/// Uniformly random circular order of `0..n`.
pub fn random_order(n: usize, seed: u64) -> Vec<usize> {
    let mut o: Vec<usize> = (0..n).collect();
    o.shuffle(&mut rng(seed));
    o
}

/// Degree multiset as (degree, count) pairs.
pub fn degree_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut h: HashMap<usize, usize> = HashMap::new();
    for d in g.degrees() {
        *h.entry(d).or_insert(0) += 1;
    }
    let mut v: Vec<(usize, usize)> = h.into_iter().collect();
    v.sort_unstable();
    v
}
