//! Convex drawings (vertices on a circle, straight edges) from interval
//! orders, path decompositions, clique trees and outerplanar decompositions.

use crate::decomposition::{
    chordal_certificate, clique_tree, intersect, interval_supergraph, is_interval_order,
    omega_from_peo, path_sequence, validate, Decomposition,
};
use crate::error::{Error, Result};
use crate::geometry::{convex_crossings, order_positions, q, BoundCheck, CrossingReport, Q};
use crate::graph::Graph;
use crate::planar::outerplanar_convex_layout;
use num_bigint::BigInt;

/// A circular vertex order and the crossings of its convex drawing.
#[derive(Clone, Debug)]
pub struct ConvexDrawing {
    pub order: Vec<usize>,
    pub report: CrossingReport,
}

/// Crossings charged to each vertex when edges are oriented along `order`: a
/// crossing of `xy` and `vw` with `x < v < y < w` is charged to `v`.
pub fn charges_by_tail(g: &Graph, order: &[usize], report: &CrossingReport) -> Result<Vec<usize>> {
    let pos = order_positions(g.n(), order)?;
    let mut charge = vec![0; g.n()];
    for &(e, f) in &report.pairs {
        let span = |i: usize| {
            let (a, b) = g.edges()[i];
            (pos[a].min(pos[b]), pos[a].max(pos[b]))
        };
        let (s, t) = (span(e), span(f));
        let inner = if s.0 < t.0 { t.0 } else { s.0 };
        charge[order[inner]] += 1;
    }
    Ok(charge)
}

/// Vertices on a circle in an interval order. At most
/// `1/2 (omega-2) sum deg(v)(deg(v)-1)` crossings, hence at most
/// `(omega-2)(omega-1)(Delta-1) n`; the per-vertex charges are checked too.
pub fn convex_draw_interval(g: &Graph, order: &[usize]) -> Result<ConvexDrawing> {
    if !is_interval_order(g, order) {
        return Err(Error::InvalidCertificate(
            "order violates the interval closure property".into(),
        ));
    }
    let pos = order_positions(g.n(), order)?;
    let back = |v: usize| g.neighbors(v).iter().filter(|&&w| pos[w] < pos[v]).count();
    let out = |v: usize| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count();
    let omega = (0..g.n()).map(|v| back(v) + 1).max().unwrap_or(0) as i64;
    let om2 = (omega - 2).max(0);
    let mut report = convex_crossings(g, order)?;
    let sum: i64 = g
        .degrees()
        .iter()
        .map(|&d| (d * d.saturating_sub(1)) as i64)
        .sum();
    report.bounds.push(BoundCheck::new(
        "half_omega_sum_deg_deg_minus_1",
        q(om2 * sum) / q(2),
        q(report.total as i64),
    ));
    let delta1 = (g.max_degree() as i64 - 1).max(0);
    let coarse = BigInt::from(om2)
        * BigInt::from((omega - 1).max(0))
        * BigInt::from(delta1)
        * BigInt::from(g.n());
    report
        .bounds
        .push(BoundCheck::int("omega_omega_delta_n", coarse, report.total));
    let charge = charges_by_tail(g, order, &report)?;
    let over = (0..g.n())
        .filter(|&v| {
            let d = out(v) as i64;
            Q::from_integer((charge[v] as i64 * 2).into()) > q(om2 * (d - 1).max(0) * d)
        })
        .count();
    report
        .bounds
        .push(BoundCheck::int("vertices_over_charge", 0, over));
    Ok(ConvexDrawing {
        order: order.to_vec(),
        report,
    })
}

/// Order from the interval supergraph of a strong path decomposition with bags
/// of size at most `k+1`; only `g`'s edges are drawn. At most `k^2 Delta n`.
pub fn convex_draw_pathwidth(g: &Graph, pd: &Decomposition, k: usize) -> Result<ConvexDrawing> {
    path_sequence(&pd.host)?;
    if pd.width() > k + 1 {
        return Err(Error::InvalidCertificate(format!(
            "bag of size {} exceeds k+1 = {}",
            pd.width(),
            k + 1
        )));
    }
    let (_, order) = interval_supergraph(g, pd)?;
    let mut report = convex_crossings(g, &order)?;
    let bound = BigInt::from(k * k) * BigInt::from(g.max_degree()) * BigInt::from(g.n());
    report
        .bounds
        .push(BoundCheck::int("k_sq_delta_n", bound, report.total));
    Ok(ConvexDrawing { order, report })
}

/// Circular order from a decomposition with an outerplanar host: bags in the
/// host's crossing-free circular order, each vertex in its lowest-index bag,
/// vertices of one bag by id.
pub fn outerplanar_decomposition_order(g: &Graph, d: &Decomposition) -> Result<Vec<usize>> {
    let val = validate(g, d)?;
    if !val.is_decomposition {
        return Err(Error::InvalidCertificate(val.reason.unwrap_or_default()));
    }
    let bag_order = outerplanar_convex_layout(&d.host)?;
    let of = d.bags_of(g.n());
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); d.len()];
    for (v, bs) in of.iter().enumerate() {
        assigned[bs[0]].push(v);
    }
    Ok(bag_order
        .into_iter()
        .flat_map(|b| assigned[b].clone())
        .collect())
}

/// Crossing pairs of the convex drawing with no bag meeting both edges.
pub fn uncovered_crossings(
    g: &Graph,
    d: &Decomposition,
    order: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let report = convex_crossings(g, order)?;
    let of = d.bags_of(g.n());
    let ends = |i: usize| {
        let (a, b) = g.edges()[i];
        let mut u: Vec<usize> = of[a].iter().chain(&of[b]).copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    Ok(report
        .pairs
        .into_iter()
        .filter(|&(e, f)| !intersect(&ends(e), &ends(f)))
        .collect())
}

/// Order in which every crossing pair has endpoints sharing a bag, checked
/// over all crossing pairs.
pub fn crossing_free_convex_certify(g: &Graph, d: &Decomposition) -> Result<Vec<usize>> {
    let order = outerplanar_decomposition_order(g, d)?;
    let bad = uncovered_crossings(g, d, &order)?;
    if let Some(&(e, f)) = bad.first() {
        return Err(Error::InvalidDrawing(format!(
            "edges {e} and {f} cross without a common bag"
        )));
    }
    Ok(order)
}

/// Convex drawing of a chordal graph through its clique tree. At most
/// `sum_{vw} deg(v) deg(w)`; with `k = omega - 1` (so no `(k+2)`-clique) also
/// at most `16 k^2 Delta n`.
pub fn convex_draw_chordal(g: &Graph) -> Result<ConvexDrawing> {
    let peo = chordal_certificate(g)?;
    let tree = clique_tree(g, &peo)?;
    let order = crossing_free_convex_certify(g, &tree)?;
    let mut report = convex_crossings(g, &order)?;
    let sum: BigInt = g
        .edges()
        .iter()
        .map(|&(a, b)| BigInt::from(g.degree(a) * g.degree(b)))
        .sum();
    report
        .bounds
        .push(BoundCheck::int("sum_edge_deg_prod", sum, report.total));
    let k = omega_from_peo(g, &peo)?.saturating_sub(1);
    let coarse = BigInt::from(16 * k * k) * BigInt::from(g.max_degree()) * BigInt::from(g.n());
    report
        .bounds
        .push(BoundCheck::int("16_k_sq_delta_n", coarse, report.total));
    Ok(ConvexDrawing { order, report })
}
