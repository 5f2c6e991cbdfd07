//! Drawings from planar partitions and planar decompositions, each returned
//! with the crossing bounds it is guaranteed to meet.

use crate::decomposition::{validate, Decomposition};
use crate::error::{Error, Result};
use crate::geometry::{
    circle_points, count_crossings, perturb_general_position, q, BoundCheck, CrossingReport,
    Drawing, Point, Style, Q,
};
use crate::graph::Graph;
use crate::planar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::VecDeque;

/// A drawing together with its crossing report and bound checks.
#[derive(Clone, Debug)]
pub struct Certified {
    pub drawing: Drawing,
    pub report: CrossingReport,
}

type IP = (i128, i128);

fn cross(o: IP, a: IP, b: IP) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn hull(mut p: Vec<IP>) -> Vec<IP> {
    p.sort_unstable();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lo: Vec<IP> = Vec::new();
    for &x in &p {
        while lo.len() >= 2 && cross(lo[lo.len() - 2], lo[lo.len() - 1], x) <= 0 {
            lo.pop();
        }
        lo.push(x);
    }
    let mut hi: Vec<IP> = Vec::new();
    for &x in p.iter().rev() {
        while hi.len() >= 2 && cross(hi[hi.len() - 2], hi[hi.len() - 1], x) <= 0 {
            hi.pop();
        }
        hi.push(x);
    }
    lo.pop();
    hi.pop();
    lo.extend(hi);
    lo
}

fn bbox(p: &[IP]) -> (i128, i128, i128, i128) {
    let xs = p.iter().map(|a| a.0);
    let ys = p.iter().map(|a| a.1);
    (
        xs.clone().min().unwrap(),
        xs.max().unwrap(),
        ys.clone().min().unwrap(),
        ys.max().unwrap(),
    )
}

/// Closed convex polygons meet (separating axis test).
fn polys_meet(a: &[IP], b: &[IP]) -> bool {
    let (ax0, ax1, ay0, ay1) = bbox(a);
    let (bx0, bx1, by0, by1) = bbox(b);
    if ax1 < bx0 || bx1 < ax0 || ay1 < by0 || by1 < ay0 {
        return false;
    }
    for poly in [a, b] {
        for i in 0..poly.len() {
            let (s, t) = (poly[i], poly[(i + 1) % poly.len()]);
            let (nx, ny) = (t.1 - s.1, s.0 - t.0);
            let proj = |p: &IP| nx * p.0 + ny * p.1;
            let amin = a.iter().map(proj).min().unwrap();
            let amax = a.iter().map(proj).max().unwrap();
            let bmin = b.iter().map(proj).min().unwrap();
            let bmax = b.iter().map(proj).max().unwrap();
            if amax < bmin || bmax < amin {
                return false;
            }
        }
    }
    true
}

/// Squares of half-width 1 around centres scaled by `scale` are pairwise
/// disjoint, corridors of independent host edges are disjoint, and no
/// corridor meets a square of a bag it does not join.
fn separation_holds(host: &Graph, centres: &[(i64, i64)], scale: i128) -> bool {
    let sq: Vec<Vec<IP>> = centres
        .iter()
        .map(|&(x, y)| {
            let (cx, cy) = (x as i128 * scale, y as i128 * scale);
            vec![
                (cx - 1, cy - 1),
                (cx + 1, cy - 1),
                (cx + 1, cy + 1),
                (cx - 1, cy + 1),
            ]
        })
        .collect();
    for i in 0..sq.len() {
        for j in i + 1..sq.len() {
            if polys_meet(&sq[i], &sq[j]) {
                return false;
            }
        }
    }
    let edges = host.edges();
    let corr: Vec<Vec<IP>> = edges
        .iter()
        .map(|&(a, b)| hull([sq[a].clone(), sq[b].clone()].concat()))
        .collect();
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (x, s) in sq.iter().enumerate() {
            if x != a && x != b && polys_meet(&corr[i], s) {
                return false;
            }
        }
        for (j, &(c, d)) in edges.iter().enumerate().skip(i + 1) {
            if a != c && a != d && b != c && b != d && polys_meet(&corr[i], &corr[j]) {
                return false;
            }
        }
    }
    true
}

/// Vertex positions for a planar partition: bag squares around a crossing-free
/// host layout, vertices on a small circle inside their bag's square (sorted
/// by degree, then id), then nudged into general position.
fn place_partition(g: &Graph, d: &Decomposition, seed: u64) -> Result<Vec<Point>> {
    let val = validate(g, d)?;
    if !val.is_partition {
        return Err(Error::InvalidCertificate(
            val.reason
                .unwrap_or_else(|| "decomposition is not a partition".into()),
        ));
    }
    let centres = planar::grid_layout(&d.host)?;
    // grid points are at distance >= 1, so 1/4 satisfies (4 eps)^2 <= min distance^2
    let mut scale: i128 = 4;
    while !separation_holds(&d.host, &centres, scale) {
        scale *= 2;
        if scale > 1 << 60 {
            return Err(Error::InvalidDrawing(
                "no separating bag radius found".into(),
            ));
        }
    }
    let eps = Q::new(BigInt::one(), BigInt::from(scale));
    let half = &eps / q(2);
    let mut cands = vec![Point::int(0, 0); g.n()];
    let mut radii = vec![Q::zero(); g.n()];
    for (b, bag) in d.bags.iter().enumerate() {
        let c = Point::int(centres[b].0, centres[b].1);
        let mut vs = bag.clone();
        vs.sort_by_key(|&v| (g.degree(v), v));
        if vs.is_empty() {
            continue;
        }
        if vs.len() == 1 {
            cands[vs[0]] = c;
            radii[vs[0]] = &eps / q(4);
            continue;
        }
        let pts: Vec<Point> = circle_points(vs.len())
            .iter()
            .map(|p| c.add(&p.scale(&half)))
            .collect();
        let mut min_d2: Option<Q> = None;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let dd = pts[i].dist2(&pts[j]);
                if min_d2.as_ref().is_none_or(|m| dd < *m) {
                    min_d2 = Some(dd);
                }
            }
        }
        let min_d2 = min_d2.expect("two or more points");
        let mut r = &eps / q(4);
        while &r * &r * q(4) >= min_d2 {
            r /= q(2);
        }
        for (v, p) in vs.into_iter().zip(pts) {
            cands[v] = p;
            radii[v] = r.clone();
        }
    }
    perturb_general_position(&cands, &radii, seed)
}

/// Straight-line drawing from a planar partition of width `p`; each edge
/// crosses at most `2 Delta (p-1)` edges and the total is at most
/// `(p-1) sum deg^2`.
pub fn draw_planar_partition(g: &Graph, d: &Decomposition) -> Result<Certified> {
    let pos = place_partition(g, d, 0)?;
    let drawing = Drawing::straight(g, pos, Style::Rectilinear);
    let mut report = count_crossings(&drawing)?;
    let p = d.width().max(1) as u64 - 1;
    let delta = g.max_degree() as u64;
    let sum_sq: u64 = g.degrees().iter().map(|&x| (x * x) as u64).sum();
    report.bounds.push(BoundCheck::int(
        "edge_crossings_2delta_pm1",
        2 * delta * p,
        report.max_per_edge(),
    ));
    report.bounds.push(BoundCheck::int(
        "total_pm1_sum_deg_sq",
        p * sum_sq,
        report.total,
    ));
    Ok(Certified { drawing, report })
}

/// Home bag of each vertex and, for each edge `(a, b)` (in `g.edges()` order),
/// a shortest host path from `home[a]` to `home[b]` through bags containing
/// `a` or `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomeAssignment {
    pub home: Vec<usize>,
    pub paths: Vec<Vec<usize>>,
}

fn restricted_bfs(
    d: &Decomposition,
    allowed: &[bool],
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; d.len()];
    prev[from] = from;
    let mut q = VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut c = to;
            while c != from {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        for &y in d.host.neighbors(x) {
            if allowed[y] && prev[y] == usize::MAX {
                prev[y] = x;
                q.push_back(y);
            }
        }
    }
    None
}

fn allowed_for(d: &Decomposition, of: &[Vec<usize>], a: usize, b: usize) -> Vec<bool> {
    let mut allowed = vec![false; d.len()];
    for &x in of[a].iter().chain(&of[b]) {
        allowed[x] = true;
    }
    allowed
}

pub fn make_home_assignment(g: &Graph, d: &Decomposition) -> Result<HomeAssignment> {
    let val = validate(g, d)?;
    if !val.is_decomposition {
        return Err(Error::InvalidCertificate(val.reason.unwrap_or_default()));
    }
    let of = d.bags_of(g.n());
    let home: Vec<usize> = of.iter().map(|b| b[0]).collect();
    let paths = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            restricted_bfs(d, &allowed_for(d, &of, a, b), home[a], home[b])
                .expect("touching connected bag sets are joined")
        })
        .collect();
    Ok(HomeAssignment { home, paths })
}

/// Reject assignments that break the home-bag contract, including paths that
/// are valid but not of minimum length.
pub fn check_home_assignment(g: &Graph, d: &Decomposition, h: &HomeAssignment) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidCertificate(m));
    let val = validate(g, d)?;
    if !val.is_decomposition {
        return bad(val.reason.unwrap_or_default());
    }
    if h.home.len() != g.n() || h.paths.len() != g.m() {
        return bad("home assignment has the wrong size".into());
    }
    for (v, &b) in h.home.iter().enumerate() {
        if b >= d.len() || !d.bag_contains(b, v) {
            return bad(format!("home bag of {v} does not contain it"));
        }
    }
    let of = d.bags_of(g.n());
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        let p = &h.paths[i];
        if p.first() != Some(&h.home[a]) || p.last() != Some(&h.home[b]) {
            return bad(format!(
                "path of edge ({a},{b}) does not join the home bags"
            ));
        }
        for w in p.windows(2) {
            if !d.host.has_edge(w[0], w[1]) {
                return bad(format!(
                    "path of edge ({a},{b}) uses a non-edge of the host"
                ));
            }
        }
        if p.iter()
            .any(|&x| x >= d.len() || !(d.bag_contains(x, a) || d.bag_contains(x, b)))
        {
            return bad(format!(
                "path of edge ({a},{b}) leaves the bags of its endpoints"
            ));
        }
        let best =
            restricted_bfs(d, &allowed_for(d, &of, a, b), h.home[a], h.home[b]).expect("reachable");
        if best.len() != p.len() {
            return bad(format!("path of edge ({a},{b}) is not a shortest one"));
        }
    }
    Ok(())
}

/// Output of the decomposition drawer.
#[derive(Clone, Debug)]
pub struct DecompositionDrawing {
    pub drawing: Drawing,
    pub report: CrossingReport,
    /// `max(|P(vw)| - 2, 0)` per edge (equals the bends drawn).
    pub bends_sharp: Vec<usize>,
    /// `s(v) + s(w) - 2` per edge.
    pub bends_relaxed: Vec<usize>,
    /// The subdivision that was drawn with straight edges, and its partition.
    pub subdivided: Graph,
    pub partition: Decomposition,
    /// Owner (a vertex of `g`) of each division vertex, indexed from `g.n()`.
    pub owner: Vec<usize>,
}

/// Polyline drawing from a planar decomposition of width `p` with at most
/// `4p sum s(v) deg(v)^2` crossings. Each edge `vw` is subdivided once per
/// internal bag of its path, the subdivision is drawn from the induced
/// partition, and the division vertices become bends.
pub fn draw_planar_decomposition(
    g: &Graph,
    d: &Decomposition,
    h: &HomeAssignment,
) -> Result<DecompositionDrawing> {
    check_home_assignment(g, d, h)?;
    let n = g.n();
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); d.len()];
    for (v, &b) in h.home.iter().enumerate() {
        bags[b].push(v);
    }
    let mut sub_edges = Vec::new();
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(g.m());
    let mut owner = Vec::new();
    let mut next = n;
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        let p = &h.paths[i];
        let mut chain = vec![a];
        for &bag in p.iter().skip(1).take(p.len().saturating_sub(2)) {
            let (ha, hb) = (d.bag_contains(bag, a), d.bag_contains(bag, b));
            owner.push(if ha && (!hb || a < b) { a } else { b });
            bags[bag].push(next);
            chain.push(next);
            next += 1;
        }
        chain.push(b);
        for w in chain.windows(2) {
            sub_edges.push((w[0], w[1]));
        }
        chains.push(chain);
    }
    let sub = Graph::new(next, sub_edges).expect("subdivision is simple");
    let part = Decomposition::new(d.host.clone(), bags)?;
    let pos = place_partition(&sub, &part, 0)?;
    let drawing = Drawing {
        style: Style::Polyline,
        positions: pos[..n].to_vec(),
        edges: g.edges().to_vec(),
        routes: chains
            .iter()
            .map(|c| c.iter().map(|&x| pos[x].clone()).collect())
            .collect(),
    };
    let mut report = count_crossings(&drawing)?;
    let val = validate(g, d)?;
    let s = &val.spread;
    let bends_sharp: Vec<usize> = h.paths.iter().map(|p| p.len().saturating_sub(2)).collect();
    let bends_relaxed: Vec<usize> = g.edges().iter().map(|&(a, b)| s[a] + s[b] - 2).collect();
    let over = bends_sharp
        .iter()
        .zip(&bends_relaxed)
        .filter(|(x, y)| x > y)
        .count();
    let drawn_ok = drawing.bends() == bends_sharp;
    report.bounds.push(BoundCheck::int(
        "edges_over_bend_budget",
        0,
        over + usize::from(!drawn_ok),
    ));
    let p = d.width() as u64;
    let total: BigInt = (0..n)
        .map(|v| BigInt::from(4 * p) * BigInt::from(s[v]) * BigInt::from(g.degree(v).pow(2)))
        .sum();
    report.bounds.push(BoundCheck::int(
        "total_4p_sum_spread_deg_sq",
        total,
        report.total,
    ));
    Ok(DecompositionDrawing {
        drawing,
        report,
        bends_sharp,
        bends_relaxed,
        subdivided: sub,
        partition: part,
        owner,
    })
}

/// Decomposition drawing for decompositions whose bags are cliques and where
/// adjacent vertices share at most `c` bags: the number of crossings between
/// edges with no common endpoint is at most `c sum_{vw} deg(v) deg(w)`.
pub fn draw_clique_decomposition(
    g: &Graph,
    d: &Decomposition,
    c: u64,
) -> Result<DecompositionDrawing> {
    for (i, b) in d.bags.iter().enumerate() {
        if b.iter().any(|&v| v >= g.n()) || !g.is_clique(b) {
            return Err(Error::InvalidCertificate(format!(
                "bag {i} is not a clique"
            )));
        }
    }
    let of = d.bags_of(g.n());
    for &(a, b) in g.edges() {
        let common = of[a]
            .iter()
            .filter(|x| of[b].binary_search(x).is_ok())
            .count() as u64;
        if common > c {
            return Err(Error::InvalidCertificate(format!(
                "{a} and {b} share {common} > {c} bags"
            )));
        }
    }
    let h = make_home_assignment(g, d)?;
    let mut out = draw_planar_decomposition(g, d, &h)?;
    let sum: BigInt = g
        .edges()
        .iter()
        .map(|&(a, b)| BigInt::from(g.degree(a) * g.degree(b)))
        .sum();
    let na = out.report.non_adjacent;
    out.report.bounds.push(BoundCheck::int(
        "non_adjacent_c_sum_edge_deg_prod",
        BigInt::from(c) * sum,
        na,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{chordal_certificate, clique_tree};

    #[test]
    fn partition_examples() {
        let c5 = Graph::cycle(5);
        let r = draw_planar_partition(&c5, &Decomposition::singletons(&c5)).unwrap();
        assert_eq!(r.report.total, 0);
        assert!(r.report.all_satisfied());

        let k5 = Graph::complete(5);
        let d =
            Decomposition::new(Graph::complete(3), vec![vec![0, 1], vec![2, 3], vec![4]]).unwrap();
        let r = draw_planar_partition(&k5, &d).unwrap();
        assert_eq!(r.report.bound("total_pm1_sum_deg_sq").unwrap().value, q(80));
        assert!(r.report.all_satisfied());
        assert!(r.report.total >= 1);
    }

    #[test]
    fn home_assignment_examples() {
        let k3 = Graph::complete(3);
        let d = Decomposition::new(Graph::complete(3), vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap();
        let h = make_home_assignment(&k3, &d).unwrap();
        assert!(h.paths.iter().all(|p| p.len() <= 2));
        check_home_assignment(&k3, &d, &h).unwrap();

        let one = Decomposition::new(Graph::empty(1), vec![vec![0, 1, 2]]).unwrap();
        let h = make_home_assignment(&k3, &one).unwrap();
        assert!(h.paths.iter().all(|p| p == &vec![0]));
    }

    #[test]
    fn non_minimum_paths_are_rejected() {
        let p3 = Graph::path(2);
        // vertex 0 in bags 0,1,2 along a path host; 1 only in bag 2; host also has edge 0-2
        let host = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let d = Decomposition::new(host, vec![vec![0], vec![0], vec![0, 1]]).unwrap();
        let good = make_home_assignment(&p3, &d).unwrap();
        assert_eq!(good.paths[0], vec![0, 2]);
        let long = HomeAssignment {
            home: good.home.clone(),
            paths: vec![vec![0, 1, 2]],
        };
        assert!(matches!(
            check_home_assignment(&p3, &d, &long),
            Err(Error::InvalidCertificate(_))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let c4 = Graph::cycle(4);
        let d = Decomposition::new(
            Graph::cycle(4),
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap();
        let h = make_home_assignment(&c4, &d).unwrap();
        let r = draw_planar_decomposition(&c4, &d, &h).unwrap();
        // lowest-index homes put 0 and 1 in bag 0 and 3 in bag 2, so edge 03
        // detours through bag 3
        assert_eq!(r.bends_sharp, vec![0, 1, 0, 0]);
        assert_eq!(r.drawing.bends(), r.bends_sharp);
        assert!(r.report.total <= 1);
        assert!(r.report.all_satisfied());

        let k4 = Graph::complete(4);
        let part = Decomposition::new(Graph::path(2), vec![vec![0, 1], vec![2, 3]]).unwrap();
        let h = make_home_assignment(&k4, &part).unwrap();
        let r = draw_planar_decomposition(&k4, &part, &h).unwrap();
        assert!(r.bends_sharp.iter().all(|&b| b == 0));
        let direct = draw_planar_partition(&k4, &part).unwrap();
        assert_eq!(direct.report.total, r.report.total);
    }

    #[test]
    fn clique_examples() {
        let k4 = Graph::complete(4);
        let one = Decomposition::new(Graph::empty(1), vec![vec![0, 1, 2, 3]]).unwrap();
        let r = draw_clique_decomposition(&k4, &one, 1).unwrap();
        assert_eq!(
            r.report
                .bound("non_adjacent_c_sum_edge_deg_prod")
                .unwrap()
                .value,
            q(54)
        );
        assert!(r.report.non_adjacent <= 1);

        let k3 = Graph::complete(3);
        let tri = Decomposition::new(Graph::complete(3), vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap();
        let r = draw_clique_decomposition(&k3, &tri, 1).unwrap();
        assert_eq!(r.report.total, 0);

        let bow = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let ct = clique_tree(&bow, &chordal_certificate(&bow).unwrap()).unwrap();
        let r = draw_clique_decomposition(&bow, &ct, 1).unwrap();
        assert!(r.report.all_satisfied());
        assert!(draw_clique_decomposition(
            &Graph::cycle(4),
            &Decomposition::new(Graph::empty(1), vec![vec![0, 1, 2, 3]]).unwrap(),
            1
        )
        .is_err());
    }
}
