//! Exact planar geometry over arbitrary-precision rationals.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Exec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::HashSet;

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Closest rational with denominator `2^bits` to a float (used only to pick
/// nice-looking positions, never for decisions).
pub fn q_from_f64(v: f64, bits: u32) -> Q {
    let scale = (1u64 << bits) as f64;
    Q::new(
        BigInt::from((v * scale).round() as i64),
        BigInt::from(1u64 << bits),
    )
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or_else(|| {
        // fall back for huge numerators/denominators
        let n = v.numer().to_f64().unwrap_or(f64::NAN);
        let d = v.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Point {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Point {
        Point { x: q(x), y: q(y) }
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dist2(&self, o: &Point) -> Q {
        let dx = &self.x - &o.x;
        let dy = &self.y - &o.y;
        &dx * &dx + &dy * &dy
    }

    pub fn lerp(&self, o: &Point, t: &Q) -> Point {
        self.add(&o.sub(self).scale(t))
    }
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    v.cmp(&Q::zero())
}

/// Closed-segment membership for a point known to be collinear.
fn within(a: &Point, b: &Point, p: &Point) -> bool {
    a.x.clone().min(b.x.clone()) <= p.x
        && p.x <= a.x.clone().max(b.x.clone())
        && a.y.clone().min(b.y.clone()) <= p.y
        && p.y <= a.y.clone().max(b.y.clone())
}

pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == Ordering::Equal && within(a, b, p)
}

/// True iff the open segments meet in exactly one point interior to both.
pub fn segments_properly_cross(a: (&Point, &Point), b: (&Point, &Point)) -> Result<bool> {
    if a.0 == a.1 || b.0 == b.1 {
        return Err(Error::DegenerateSegment);
    }
    let o1 = orient(a.0, a.1, b.0);
    let o2 = orient(a.0, a.1, b.1);
    let o3 = orient(b.0, b.1, a.0);
    let o4 = orient(b.0, b.1, a.1);
    Ok(o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
        && o1 != o2
        && o3 != o4)
}

/// Intersection point of the lines through two non-parallel segments.
pub fn line_intersection(a: (&Point, &Point), b: (&Point, &Point)) -> Option<Point> {
    let d1 = a.1.sub(a.0);
    let d2 = b.1.sub(b.0);
    let den = &d1.x * &d2.y - &d1.y * &d2.x;
    if den.is_zero() {
        return None;
    }
    let w = b.0.sub(a.0);
    let t = (&w.x * &d2.y - &w.y * &d2.x) / den;
    Some(a.0.add(&d1.scale(&t)))
}

/// `k` distinct rational points on the unit circle in counter-clockwise order,
/// from the tangent half-angle map `t -> ((1-t^2)/(1+t^2), 2t/(1+t^2))`.
pub fn circle_points(k: usize) -> Vec<Point> {
    let mut ts: Vec<Q> = Vec::with_capacity(k);
    for i in 0..k {
        let theta =
            -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / k as f64;
        let mut t = q_from_f64((theta / 2.0).tan(), 24);
        if let Some(prev) = ts.last() {
            if t <= *prev {
                t = prev + qr(1, 1 << 24);
            }
        }
        ts.push(t);
    }
    ts.iter().map(circle_point).collect()
}

pub fn circle_point(t: &Q) -> Point {
    let t2 = t * t;
    let den = Q::one() + &t2;
    Point::new((Q::one() - &t2) / &den, (t * q(2)) / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Rectilinear,
    Convex,
    Polyline,
}

/// Vertex points plus one polyline per edge. `routes[i]` draws `edges[i]` and
/// starts and ends at the endpoints' positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    pub style: Style,
    pub positions: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
    pub routes: Vec<Vec<Point>>,
}

impl Drawing {
    /// Straight-line drawing of `g` with the given points.
    pub fn straight(g: &Graph, positions: Vec<Point>, style: Style) -> Drawing {
        let routes = g
            .edges()
            .iter()
            .map(|&(a, b)| vec![positions[a].clone(), positions[b].clone()])
            .collect();
        Drawing {
            style,
            positions,
            edges: g.edges().to_vec(),
            routes,
        }
    }

    /// Vertices on the unit circle in the circular `order` (position `i` holds `order[i]`).
    pub fn convex(g: &Graph, order: &[usize]) -> Drawing {
        let pts = circle_points(order.len());
        let mut positions = vec![Point::int(0, 0); g.n()];
        for (i, &v) in order.iter().enumerate() {
            positions[v] = pts[i].clone();
        }
        Drawing::straight(g, positions, Style::Convex)
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.positions.len(), self.edges.iter().copied())
    }

    /// Number of bends on each route.
    pub fn bends(&self) -> Vec<usize> {
        self.routes
            .iter()
            .map(|r| r.len().saturating_sub(2))
            .collect()
    }

    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Drawing {
        Drawing {
            style: self.style,
            positions: self.positions.iter().map(&f).collect(),
            edges: self.edges.clone(),
            routes: self
                .routes
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn segment_count(&self) -> usize {
        self.routes.iter().map(|r| r.len().saturating_sub(1)).sum()
    }
}

/// One bound attached to a report: `actual <= value` must hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub value: Q,
    pub actual: Q,
    pub satisfied: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, value: Q, actual: Q) -> BoundCheck {
        let satisfied = actual <= value;
        BoundCheck {
            name: name.into(),
            value,
            actual,
            satisfied,
        }
    }

    pub fn int(name: impl Into<String>, value: impl Into<BigInt>, actual: usize) -> BoundCheck {
        Self::new(name, Q::from_integer(value.into()), q(actual as i64))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    pub total: usize,
    pub non_adjacent: usize,
    pub per_edge: Vec<usize>,
    /// One entry per crossing point, as a pair of edge indices `(e, f)` with `e < f`.
    pub pairs: Vec<(usize, usize)>,
    pub bounds: Vec<BoundCheck>,
}

impl CrossingReport {
    fn from_pairs(edges: &[(usize, usize)], pairs: Vec<(usize, usize)>) -> CrossingReport {
        let mut per_edge = vec![0; edges.len()];
        let mut non_adjacent = 0;
        for &(e, f) in &pairs {
            per_edge[e] += 1;
            per_edge[f] += 1;
            let (a, b) = edges[e];
            let (c, d) = edges[f];
            if a != c && a != d && b != c && b != d {
                non_adjacent += 1;
            }
        }
        CrossingReport {
            total: pairs.len(),
            non_adjacent,
            per_edge,
            pairs,
            bounds: Vec::new(),
        }
    }

    pub fn from_hits(edges: &[(usize, usize)], hits: &[Hit]) -> CrossingReport {
        Self::from_pairs(edges, hits.iter().map(|h| (h.e, h.f)).collect())
    }

    pub fn all_satisfied(&self) -> bool {
        self.bounds.iter().all(|b| b.satisfied)
    }

    pub fn bound(&self, name: &str) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn max_per_edge(&self) -> usize {
        self.per_edge.iter().copied().max().unwrap_or(0)
    }
}

/// A crossing between segment `si` of edge `e` and segment `sj` of edge `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hit {
    pub e: usize,
    pub si: usize,
    pub f: usize,
    pub sj: usize,
}

#[derive(Clone, Debug)]
struct IPt {
    x: BigInt,
    y: BigInt,
}

#[derive(Clone, Debug)]
struct Seg {
    edge: usize,
    idx: usize,
    a: IPt,
    b: IPt,
    lo_x: BigInt,
    hi_x: BigInt,
    lo_y: BigInt,
    hi_y: BigInt,
}

fn iorient(a: &IPt, b: &IPt, c: &IPt) -> Ordering {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    v.sign().cmp(&num_bigint::Sign::NoSign)
}

fn iwithin(s: &Seg, p: &IPt) -> bool {
    s.lo_x <= p.x && p.x <= s.hi_x && s.lo_y <= p.y && p.y <= s.hi_y
}

fn ieq(a: &IPt, b: &IPt) -> bool {
    a.x == b.x && a.y == b.y
}

enum Contact {
    None,
    Proper,
    Touch(IPt),
    Overlap,
}

fn contact(s: &Seg, t: &Seg) -> Contact {
    if s.hi_x < t.lo_x || t.hi_x < s.lo_x || s.hi_y < t.lo_y || t.hi_y < s.lo_y {
        return Contact::None;
    }
    let o1 = iorient(&s.a, &s.b, &t.a);
    let o2 = iorient(&s.a, &s.b, &t.b);
    let o3 = iorient(&t.a, &t.b, &s.a);
    let o4 = iorient(&t.a, &t.b, &s.b);
    use Ordering::Equal;
    if o1 == Equal && o2 == Equal {
        // collinear: compare projections on the dominant axis
        let on: Vec<&IPt> = [&t.a, &t.b].into_iter().filter(|p| iwithin(s, p)).collect();
        let on2: Vec<&IPt> = [&s.a, &s.b].into_iter().filter(|p| iwithin(t, p)).collect();
        let mut pts: Vec<&IPt> = on.into_iter().chain(on2).collect();
        if pts.is_empty() {
            return Contact::None;
        }
        pts.dedup_by(|a, b| ieq(a, b));
        let first = pts[0];
        if pts.iter().all(|p| ieq(p, first)) {
            return Contact::Touch(first.clone());
        }
        return Contact::Overlap;
    }
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        return if o1 != o2 && o3 != o4 {
            Contact::Proper
        } else {
            Contact::None
        };
    }
    if o1 == Equal && iwithin(s, &t.a) {
        return Contact::Touch(t.a.clone());
    }
    if o2 == Equal && iwithin(s, &t.b) {
        return Contact::Touch(t.b.clone());
    }
    if o3 == Equal && iwithin(t, &s.a) {
        return Contact::Touch(s.a.clone());
    }
    if o4 == Equal && iwithin(t, &s.b) {
        return Contact::Touch(s.b.clone());
    }
    Contact::None
}

fn to_ints(d: &Drawing) -> (Vec<IPt>, Vec<Vec<IPt>>) {
    let mut l = BigInt::one();
    let mut fold = |v: &Q| {
        let dn = v.denom();
        if !dn.is_one() {
            l = l.lcm(dn);
        }
    };
    for p in d.positions.iter().chain(d.routes.iter().flatten()) {
        fold(&p.x);
        fold(&p.y);
    }
    let conv = |v: &Q| -> BigInt { v.numer() * (&l / v.denom()) };
    let cp = |p: &Point| IPt {
        x: conv(&p.x),
        y: conv(&p.y),
    };
    (
        d.positions.iter().map(cp).collect(),
        d.routes
            .iter()
            .map(|r| r.iter().map(cp).collect())
            .collect(),
    )
}

fn make_seg(edge: usize, idx: usize, a: IPt, b: IPt) -> Seg {
    let (lo_x, hi_x) = if a.x <= b.x {
        (a.x.clone(), b.x.clone())
    } else {
        (b.x.clone(), a.x.clone())
    };
    let (lo_y, hi_y) = if a.y <= b.y {
        (a.y.clone(), b.y.clone())
    } else {
        (b.y.clone(), a.y.clone())
    };
    Seg {
        edge,
        idx,
        a,
        b,
        lo_x,
        hi_x,
        lo_y,
        hi_y,
    }
}

fn check_general_position(pts: &[IPt]) -> Result<()> {
    for (i, p) in pts.iter().enumerate() {
        let mut seen = HashSet::new();
        for (j, r) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut dx = &r.x - &p.x;
            let mut dy = &r.y - &p.y;
            let g = dx.gcd(&dy);
            dx /= &g;
            dy /= &g;
            if dx.is_negative() || (dx.is_zero() && dy.is_negative()) {
                dx = -dx;
                dy = -dy;
            }
            if !seen.insert((dx, dy)) {
                return Err(Error::InvalidDrawing(format!(
                    "three vertex positions collinear (through vertex {i})"
                )));
            }
        }
    }
    Ok(())
}

fn check_concyclic(pts: &[Point]) -> Result<()> {
    if pts.len() <= 3 {
        return Ok(());
    }
    let (a, b, c) = (&pts[0], &pts[1], &pts[2]);
    // in-circle determinant relative to the circle through a, b, c
    let incircle = |d: &Point| -> Q {
        let rows = [a, b, c].map(|p| {
            let dx = &p.x - &d.x;
            let dy = &p.y - &d.y;
            let s = &dx * &dx + &dy * &dy;
            (dx, dy, s)
        });
        let (a0, a1, a2) = &rows[0];
        let (b0, b1, b2) = &rows[1];
        let (c0, c1, c2) = &rows[2];
        a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
    };
    if orient(a, b, c) == Ordering::Equal {
        return Err(Error::InvalidDrawing(
            "convex drawing has collinear vertices".into(),
        ));
    }
    for d in &pts[3..] {
        if !incircle(d).is_zero() {
            return Err(Error::InvalidDrawing(
                "convex drawing vertices are not on one circle".into(),
            ));
        }
    }
    Ok(())
}

/// Validate the drawing invariants and return every crossing between
/// segments of distinct edges.
pub fn crossing_hits(d: &Drawing, exec: Exec) -> Result<Vec<Hit>> {
    let n = d.positions.len();
    if d.routes.len() != d.edges.len() {
        return Err(Error::InvalidDrawing(
            "route count differs from edge count".into(),
        ));
    }
    {
        let mut seen = HashSet::new();
        for (v, p) in d.positions.iter().enumerate() {
            if !seen.insert(p) {
                return Err(Error::InvalidDrawing(format!(
                    "vertex {v} shares its position with another vertex"
                )));
            }
        }
    }
    let mut seen_edges = HashSet::new();
    for (i, (&(a, b), r)) in d.edges.iter().zip(&d.routes).enumerate() {
        if a >= n || b >= n || a == b {
            return Err(Error::InvalidDrawing(format!(
                "edge {i} has bad endpoints ({a},{b})"
            )));
        }
        if !seen_edges.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidDrawing(format!(
                "edge ({a},{b}) listed twice"
            )));
        }
        if r.len() < 2 || r[0] != d.positions[a] || r[r.len() - 1] != d.positions[b] {
            return Err(Error::InvalidDrawing(format!(
                "route of edge {i} does not join its endpoints"
            )));
        }
    }
    let (pos, routes) = to_ints(d);
    match d.style {
        Style::Rectilinear => {
            if d.routes.iter().any(|r| r.len() != 2) {
                return Err(Error::InvalidDrawing(
                    "rectilinear drawing has bent edges".into(),
                ));
            }
            check_general_position(&pos)?;
        }
        Style::Convex => {
            if d.routes.iter().any(|r| r.len() != 2) {
                return Err(Error::InvalidDrawing(
                    "convex drawing has bent edges".into(),
                ));
            }
            check_concyclic(&d.positions)?;
        }
        Style::Polyline => {}
    }
    let mut segs = Vec::new();
    for (e, r) in routes.iter().enumerate() {
        for k in 0..r.len() - 1 {
            if ieq(&r[k], &r[k + 1]) {
                return Err(Error::DegenerateSegment);
            }
            segs.push(make_seg(e, k, r[k].clone(), r[k + 1].clone()));
        }
    }
    // routes must be simple curves avoiding foreign vertices
    let mut first = vec![0usize; routes.len() + 1];
    for (e, r) in routes.iter().enumerate() {
        first[e + 1] = first[e] + r.len() - 1;
    }
    let per_route: Vec<Result<()>> = par::map_range(exec, routes.len(), |e| {
        let (a, b) = d.edges[e];
        let mine: Vec<&Seg> = segs[first[e]..first[e + 1]].iter().collect();
        for s in &mine {
            for (v, p) in pos.iter().enumerate() {
                if v == a || v == b {
                    continue;
                }
                if iwithin(s, p) && iorient(&s.a, &s.b, p) == Ordering::Equal {
                    return Err(Error::InvalidDrawing(format!(
                        "edge {e} passes through vertex {v}"
                    )));
                }
            }
        }
        for i in 0..mine.len() {
            for j in i + 1..mine.len() {
                match contact(mine[i], mine[j]) {
                    Contact::None => {}
                    Contact::Touch(p) if j == i + 1 && ieq(&p, &mine[i].b) => {}
                    Contact::Overlap => return Err(Error::Overlap(e, e)),
                    _ => {
                        return Err(Error::InvalidDrawing(format!(
                            "route of edge {e} is not simple"
                        )))
                    }
                }
            }
        }
        Ok(())
    });
    per_route.into_iter().collect::<Result<Vec<()>>>()?;

    // sweep in x: only segments whose x-ranges overlap are compared
    segs.sort_by(|a, b| {
        a.lo_x
            .cmp(&b.lo_x)
            .then(a.edge.cmp(&b.edge))
            .then(a.idx.cmp(&b.idx))
    });
    let rows: Vec<Result<Vec<Hit>>> = par::map_range(exec, segs.len(), |i| {
        let s = &segs[i];
        let mut out = Vec::new();
        for t in &segs[i + 1..] {
            if t.lo_x > s.hi_x {
                break;
            }
            if t.edge == s.edge {
                continue;
            }
            match contact(s, t) {
                Contact::None => {}
                Contact::Proper => out.push(Hit {
                    e: s.edge,
                    si: s.idx,
                    f: t.edge,
                    sj: t.idx,
                }),
                Contact::Overlap => {
                    return Err(Error::Overlap(s.edge.min(t.edge), s.edge.max(t.edge)))
                }
                Contact::Touch(p) => {
                    let (a, b) = d.edges[s.edge];
                    let (c, dd) = d.edges[t.edge];
                    let shared = [a, b]
                        .into_iter()
                        .any(|v| (v == c || v == dd) && ieq(&pos[v], &p));
                    if !shared {
                        return Err(Error::InvalidDrawing(format!(
                            "edges {} and {} touch without crossing",
                            s.edge, t.edge
                        )));
                    }
                }
            }
        }
        Ok(out)
    });
    let mut hits = Vec::new();
    for r in rows {
        hits.extend(r?);
    }
    for h in &mut hits {
        if h.e > h.f {
            std::mem::swap(&mut h.e, &mut h.f);
            std::mem::swap(&mut h.si, &mut h.sj);
        }
    }
    hits.sort_by_key(|h| (h.e, h.f, h.si, h.sj));
    Ok(hits)
}

pub fn count_crossings(d: &Drawing) -> Result<CrossingReport> {
    count_crossings_with(d, Exec::default())
}

pub fn count_crossings_with(d: &Drawing, exec: Exec) -> Result<CrossingReport> {
    let hits = crossing_hits(d, exec)?;
    Ok(CrossingReport::from_pairs(
        &d.edges,
        hits.into_iter().map(|h| (h.e, h.f)).collect(),
    ))
}

/// Exact location of a crossing.
pub fn hit_point(d: &Drawing, h: &Hit) -> Point {
    let r = &d.routes[h.e];
    let s = &d.routes[h.f];
    line_intersection((&r[h.si], &r[h.si + 1]), (&s[h.sj], &s[h.sj + 1]))
        .expect("proper crossings are not parallel")
}

/// Crossings of the straight convex drawing with vertices in circular `order`:
/// pairs of edges whose endpoints interleave.
pub fn convex_crossings(g: &Graph, order: &[usize]) -> Result<CrossingReport> {
    convex_crossings_with(g, order, Exec::default())
}

pub fn convex_crossings_with(g: &Graph, order: &[usize], exec: Exec) -> Result<CrossingReport> {
    let pos = order_positions(g.n(), order)?;
    let spans: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
        .collect();
    let rows = par::map_range(exec, spans.len(), |i| {
        let (a, b) = spans[i];
        let mut out = Vec::new();
        for (j, &(c, d)) in spans.iter().enumerate().skip(i + 1) {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                out.push((i, j));
            }
        }
        out
    });
    Ok(CrossingReport::from_pairs(
        g.edges(),
        rows.into_iter().flatten().collect(),
    ))
}

/// Inverse of a permutation given as a circular order.
pub fn order_positions(n: usize, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::InvalidParameter(format!(
            "order has {} entries for {n} vertices",
            order.len()
        )));
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidParameter("order is not a permutation".into()));
        }
        pos[v] = i;
    }
    Ok(pos)
}

fn primitive_dir(p: &Point, r: &Point) -> Option<(BigInt, BigInt)> {
    let dx = &r.x - &p.x;
    let dy = &r.y - &p.y;
    if dx.is_zero() && dy.is_zero() {
        return None;
    }
    let l = dx.denom().lcm(dy.denom());
    let mut ix = dx.numer() * (&l / dx.denom());
    let mut iy = dy.numer() * (&l / dy.denom());
    let g = ix.gcd(&iy);
    ix /= &g;
    iy /= &g;
    if ix.is_negative() || (ix.is_zero() && iy.is_negative()) {
        ix = -ix;
        iy = -iy;
    }
    Some((ix, iy))
}

/// True iff `p` is collinear with two of `placed` or coincides with one of them.
pub fn collinear_with_any(placed: &[Point], p: &Point) -> bool {
    let mut seen = HashSet::with_capacity(placed.len());
    for r in placed {
        match primitive_dir(p, r) {
            None => return true,
            Some(d) => {
                if !seen.insert(d) {
                    return true;
                }
            }
        }
    }
    false
}

const SPIRAL_RINGS: i64 = 16;

/// Move each candidate inside its own disc so that no three outputs are
/// collinear. Candidates are handled in order; each keeps its position when
/// possible and otherwise takes the first acceptable offset on a square
/// spiral of rational steps. The seed fixes the direction order of the spiral.
pub fn perturb_general_position(cands: &[Point], radii: &[Q], seed: u64) -> Result<Vec<Point>> {
    if cands.len() != radii.len() {
        return Err(Error::InvalidParameter(
            "one radius per candidate required".into(),
        ));
    }
    if radii.iter().any(|r| !r.is_positive()) {
        return Err(Error::InvalidParameter(
            "disc radii must be positive".into(),
        ));
    }
    if let Some(grid) = Grid::new(cands, radii) {
        return grid.perturb(seed);
    }
    perturb_rational(cands, radii, seed)
}

fn perturb_rational(cands: &[Point], radii: &[Q], seed: u64) -> Result<Vec<Point>> {
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            let s = &radii[i] + &radii[j];
            if cands[i].dist2(&cands[j]) <= &s * &s {
                return Err(disc_overlap(i, j));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Point> = Vec::with_capacity(cands.len());
    for (c, r) in cands.iter().zip(radii) {
        let step = r / q(2 * SPIRAL_RINGS);
        let at = |ox: i64, oy: i64| Point::new(&c.x + &step * q(ox), &c.y + &step * q(oy));
        let (ox, oy) = spiral_pick(&mut rng, |ox, oy| !collinear_with_any(&out, &at(ox, oy)))?;
        out.push(at(ox, oy));
    }
    Ok(out)
}

fn disc_overlap(i: usize, j: usize) -> Error {
    Error::InvalidParameter(format!("discs {i} and {j} are not disjoint"))
}

/// Offset (in steps) of the first accepted spot: the centre, then the rings
/// of the square spiral, each in shuffled order.
fn spiral_pick(rng: &mut ChaCha8Rng, mut ok: impl FnMut(i64, i64) -> bool) -> Result<(i64, i64)> {
    if ok(0, 0) {
        return Ok((0, 0));
    }
    for ring in 1..=SPIRAL_RINGS {
        let mut offs: Vec<(i64, i64)> = Vec::with_capacity(8 * ring as usize);
        for ox in -ring..=ring {
            for oy in -ring..=ring {
                if ox.abs().max(oy.abs()) == ring {
                    offs.push((ox, oy));
                }
            }
        }
        offs.shuffle(rng);
        if let Some(&o) = offs.iter().find(|&&(ox, oy)| ok(ox, oy)) {
            return Ok(o);
        }
    }
    Err(Error::InvalidParameter(
        "no general-position offset found inside a disc".into(),
    ))
}

/// The same search on an integer grid: every candidate and step scaled by the
/// common denominator. Used whenever the scaled values fit comfortably in i128.
struct Grid {
    scale: BigInt,
    pts: Vec<(i128, i128)>,
    steps: Vec<i128>,
}

const GRID_LIMIT: i128 = 1 << 60;

impl Grid {
    fn new(cands: &[Point], radii: &[Q]) -> Option<Grid> {
        let steps: Vec<Q> = radii.iter().map(|r| r / q(2 * SPIRAL_RINGS)).collect();
        let mut scale = BigInt::one();
        for v in cands.iter().flat_map(|c| [&c.x, &c.y]).chain(&steps) {
            scale = scale.lcm(v.denom());
        }
        let int = |v: &Q| -> Option<i128> {
            let x = (v.numer() * (&scale / v.denom())).to_i128()?;
            (x.abs() < GRID_LIMIT).then_some(x)
        };
        let pts = cands
            .iter()
            .map(|c| Some((int(&c.x)?, int(&c.y)?)))
            .collect::<Option<Vec<_>>>()?;
        let steps = steps.iter().map(int).collect::<Option<Vec<_>>>()?;
        if steps
            .iter()
            .any(|s| s.abs() * SPIRAL_RINGS as i128 >= GRID_LIMIT)
        {
            return None;
        }
        Some(Grid { scale, pts, steps })
    }

    fn perturb(&self, seed: u64) -> Result<Vec<Point>> {
        let n = self.pts.len();
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (self.pts[i].0 - self.pts[j].0, self.pts[i].1 - self.pts[j].1);
                let s = 2 * SPIRAL_RINGS as i128 * (self.steps[i] + self.steps[j]);
                if dx * dx + dy * dy <= s * s {
                    return Err(disc_overlap(i, j));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<(i128, i128)> = Vec::with_capacity(n);
        let mut seen = HashSet::with_capacity(n);
        for (&(cx, cy), &st) in self.pts.iter().zip(&self.steps) {
            let at = |ox: i64, oy: i64| (cx + st * ox as i128, cy + st * oy as i128);
            let (ox, oy) = spiral_pick(&mut rng, |ox, oy| {
                let p = at(ox, oy);
                seen.clear();
                out.iter().all(|r| match int_dir(p, *r) {
                    None => false,
                    Some(d) => seen.insert(d),
                })
            })?;
            out.push(at(ox, oy));
        }
        Ok(out
            .into_iter()
            .map(|(x, y)| {
                Point::new(
                    Q::new(BigInt::from(x), self.scale.clone()),
                    Q::new(BigInt::from(y), self.scale.clone()),
                )
            })
            .collect())
    }
}

fn int_dir(p: (i128, i128), r: (i128, i128)) -> Option<(i128, i128)> {
    let (mut dx, mut dy) = (r.0 - p.0, r.1 - p.1);
    if dx == 0 && dy == 0 {
        return None;
    }
    let g = dx.gcd(&dy);
    dx /= g;
    dy /= g;
    if dx < 0 || (dx == 0 && dy < 0) {
        dx = -dx;
        dy = -dy;
    }
    Some((dx, dy))
}

/// Squared distance from `p` to the closed segment `ab`.
pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Q {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let len2 = &ab.x * &ab.x + &ab.y * &ab.y;
    if len2.is_zero() {
        return p.dist2(a);
    }
    let t = (&ap.x * &ab.x + &ap.y * &ab.y) / &len2;
    if !t.is_positive() {
        p.dist2(a)
    } else if t >= Q::one() {
        p.dist2(b)
    } else {
        p.dist2(&a.add(&ab.scale(&t)))
    }
}

/// Convex polygons (vertex lists in any order of a convex hull) intersect?
/// Exact separating-axis test; touching counts as intersecting.
pub fn convex_polygons_intersect(p: &[Point], r: &[Point]) -> bool {
    for poly in [p, r] {
        let k = poly.len();
        for i in 0..k {
            let a = &poly[i];
            let b = &poly[(i + 1) % k];
            if a == b {
                continue;
            }
            let nx = &b.y - &a.y;
            let ny = &a.x - &b.x;
            let proj = |s: &Point| &nx * &s.x + &ny * &s.y;
            let (pmin, pmax) = min_max(p.iter().map(proj));
            let (rmin, rmax) = min_max(r.iter().map(proj));
            if pmax < rmin || rmax < pmin {
                return false;
            }
        }
    }
    true
}

fn min_max(it: impl Iterator<Item = Q>) -> (Q, Q) {
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for v in it {
        if lo.as_ref().is_none_or(|l| v < *l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| v > *h) {
            hi = Some(v);
        }
    }
    (lo.unwrap_or_else(Q::zero), hi.unwrap_or_else(Q::zero))
}

/// Convex hull (counter-clockwise, no collinear points) by monotone chain.
pub fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut p: Vec<Point> = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let mut lower: Vec<Point> = Vec::new();
    for x in &p {
        while lower.len() >= 2
            && orient(&lower[lower.len() - 2], &lower[lower.len() - 1], x) != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2
            && orient(&upper[upper.len() - 2], &upper[upper.len() - 1], x) != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Axis-parallel square of half-width `h` around `c`, corners counter-clockwise.
pub fn square_around(c: &Point, h: &Q) -> Vec<Point> {
    vec![
        Point::new(&c.x - h, &c.y - h),
        Point::new(&c.x + h, &c.y - h),
        Point::new(&c.x + h, &c.y + h),
        Point::new(&c.x - h, &c.y + h),
    ]
}

/// Closed segment meets closed convex polygon?
pub fn segment_meets_convex(a: &Point, b: &Point, poly: &[Point]) -> bool {
    convex_polygons_intersect(&[a.clone(), b.clone()], poly)
}
