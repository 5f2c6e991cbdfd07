//! Degree-based bounding functions and the inequalities relating them.

use crate::error::{Error, Result};
use crate::geometry::{q, Q};
use crate::graph::{degree_stats, subdivide_all, Graph};
use num_bigint::BigInt;

/// Exact values of the five degree functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundFunctions {
    pub sum_deg_sq: BigInt,
    pub sum_edge_deg_prod: BigInt,
    pub sum_deg_cubed: BigInt,
    pub two_delta_m: BigInt,
    pub two_delta_sq_m: BigInt,
}

impl BoundFunctions {
    /// Named values, in a fixed order.
    pub fn named(&self) -> [(&'static str, &BigInt); 5] {
        [
            ("sum_deg_sq", &self.sum_deg_sq),
            ("sum_edge_deg_prod", &self.sum_edge_deg_prod),
            ("sum_deg_cubed", &self.sum_deg_cubed),
            ("two_delta_m", &self.two_delta_m),
            ("two_delta_sq_m", &self.two_delta_sq_m),
        ]
    }

    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.named()
            .into_iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| v)
    }
}

pub fn bound_functions(g: &Graph) -> BoundFunctions {
    let deg: Vec<BigInt> = g.degrees().into_iter().map(BigInt::from).collect();
    let delta = BigInt::from(g.max_degree());
    let m = BigInt::from(g.m());
    BoundFunctions {
        sum_deg_sq: deg.iter().map(|d| d * d).sum(),
        sum_edge_deg_prod: edge_deg_prod(g),
        sum_deg_cubed: deg.iter().map(|d| d * d * d).sum(),
        two_delta_m: BigInt::from(2) * &delta * &m,
        two_delta_sq_m: BigInt::from(2) * &delta * &delta * &m,
    }
}

fn edge_deg_prod(g: &Graph) -> BigInt {
    g.edges()
        .iter()
        .map(|&(a, b)| BigInt::from(g.degree(a)) * BigInt::from(g.degree(b)))
        .sum()
}

/// `lhs <= rhs`, plus whether equality holds and whether equality is expected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
    pub equality: bool,
    pub equality_predicted: bool,
}

impl Inequality {
    fn new(lhs: Q, rhs: Q, equality_predicted: bool) -> Inequality {
        Inequality {
            holds: lhs <= rhs,
            equality: lhs == rhs,
            lhs,
            rhs,
            equality_predicted,
        }
    }

    /// The inequality holds and equality occurs exactly when predicted.
    pub fn consistent(&self) -> bool {
        self.holds && self.equality == self.equality_predicted
    }
}

/// `delta * sum deg^2 <= 2 * sum_{vw} deg(v) deg(w)` with `delta` the minimum
/// degree over non-isolated vertices; tight for regular graphs.
pub fn check_degree_inequality(g: &Graph) -> Result<Inequality> {
    let st = degree_stats(g);
    let delta = st
        .min_nonisolated
        .ok_or_else(|| Error::InvalidParameter("graph has no edges".into()))?;
    let f = bound_functions(g);
    let regular = st.degrees.iter().all(|&d| d == 0 || d == st.max);
    Ok(Inequality::new(
        Q::from_integer(BigInt::from(delta) * f.sum_deg_sq),
        Q::from_integer(BigInt::from(2) * f.sum_edge_deg_prod),
        regular,
    ))
}

/// `sum_{vw} deg(v) deg(w) <= 1/2 sum deg^3`. Equality exactly when every
/// edge joins vertices of equal degree (in particular for regular graphs).
pub fn check_second_degree_inequality(g: &Graph) -> Inequality {
    let f = bound_functions(g);
    let balanced = g.edges().iter().all(|&(a, b)| g.degree(a) == g.degree(b));
    Inequality::new(
        Q::from_integer(f.sum_edge_deg_prod),
        Q::from_integer(f.sum_deg_cubed) / q(2),
        balanced,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArboricityCheck {
    pub sum_edge_deg_prod: BigInt,
    pub middle: BigInt,
    pub upper: BigInt,
    pub holds: bool,
    /// How the density hypothesis was checked.
    pub density_note: &'static str,
}

/// `sum_{vw} deg deg <= 16 k Delta m <= 16 k^2 Delta n` for graphs whose
/// subgraphs on `n'` vertices have at most `k n'` edges. The hypothesis is
/// checked on the whole graph and on every suffix of a degeneracy order.
pub fn check_arboricity_bound(g: &Graph, k: u64) -> Result<ArboricityCheck> {
    let order = g.degeneracy_order();
    let mut inside = vec![false; g.n()];
    let mut edges = 0u64;
    for (added, &v) in order.iter().rev().enumerate() {
        inside[v] = true;
        edges += g.neighbors(v).iter().filter(|&&w| inside[w]).count() as u64;
        let verts = added as u64 + 1;
        if edges > k * verts {
            return Err(Error::InvalidParameter(format!(
                "subgraph on {verts} vertices has {edges} > {k}*{verts} edges"
            )));
        }
    }
    let delta = BigInt::from(g.max_degree());
    let kk = BigInt::from(k);
    let lhs = edge_deg_prod(g);
    let middle = BigInt::from(16) * &kk * &delta * BigInt::from(g.m());
    let upper = BigInt::from(16) * &kk * &kk * &delta * BigInt::from(g.n());
    Ok(ArboricityCheck {
        holds: lhs <= middle && middle <= upper,
        sum_edge_deg_prod: lhs,
        middle,
        upper,
        density_note: "density checked on the graph and all degeneracy-order suffixes",
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingLemma {
    pub value: Q,
    /// False when `m < 4n`; the value is then 0.
    pub applicable: bool,
}

/// `m^3 / (64 n^2)` when `m >= 4n`.
pub fn crossing_lemma_lower(g: &Graph) -> CrossingLemma {
    let (n, m) = (g.n() as i64, g.m() as i64);
    if n == 0 || m < 4 * n {
        return CrossingLemma {
            value: q(0),
            applicable: false,
        };
    }
    let mm = BigInt::from(m);
    let nn = BigInt::from(n);
    CrossingLemma {
        value: Q::new(&mm * &mm * &mm, BigInt::from(64) * &nn * &nn),
        applicable: true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivTransfer {
    pub subdivided: Graph,
    pub edge_sum: BigInt,
    pub twice_sum_deg_sq: BigInt,
    pub holds: bool,
}

/// For the full subdivision `G'`: `sum_{vw in E(G')} deg deg = 2 sum_{v in G} deg(v)^2`.
pub fn subdiv_trick_transfer(g: &Graph) -> SubdivTransfer {
    let s = subdivide_all(g);
    let edge_sum = edge_deg_prod(&s);
    let twice = BigInt::from(2) * bound_functions(g).sum_deg_sq;
    SubdivTransfer {
        holds: edge_sum == twice,
        subdivided: s,
        edge_sum,
        twice_sum_deg_sq: twice,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn function_examples() {
        let f = bound_functions(&Graph::complete(3));
        assert_eq!(
            (f.sum_deg_sq, f.sum_edge_deg_prod, f.sum_deg_cubed),
            (b(12), b(12), b(24))
        );
        let f = bound_functions(&Graph::star(3));
        assert_eq!(
            (f.sum_deg_sq, f.sum_edge_deg_prod, f.sum_deg_cubed),
            (b(12), b(9), b(30))
        );
        let f = bound_functions(&Graph::empty(4));
        assert!(f.named().iter().all(|(_, v)| **v == b(0)));
    }

    #[test]
    fn inequality_examples() {
        let k3 = check_degree_inequality(&Graph::complete(3)).unwrap();
        assert_eq!((k3.lhs.clone(), k3.rhs.clone()), (q(24), q(24)));
        assert!(k3.equality && k3.consistent());
        let s = check_degree_inequality(&Graph::star(3)).unwrap();
        assert_eq!((s.lhs, s.rhs), (q(12), q(18)));
        assert!(check_degree_inequality(&Graph::empty(3)).is_err());

        let k3 = check_second_degree_inequality(&Graph::complete(3));
        assert_eq!((k3.lhs.clone(), k3.rhs.clone()), (q(12), q(12)));
        assert!(k3.consistent());
        let s = check_second_degree_inequality(&Graph::star(3));
        assert_eq!((s.lhs, s.rhs), (q(9), q(15)));
        let e = check_second_degree_inequality(&Graph::empty(2));
        assert!(e.equality && e.consistent());
    }

    #[test]
    fn arboricity_examples() {
        let tree = Graph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(check_arboricity_bound(&tree, 1).unwrap().holds);
        assert!(check_arboricity_bound(&Graph::complete(6), 1).is_err());
        assert!(check_arboricity_bound(&Graph::grid(5, 5), 2).unwrap().holds);
    }

    #[test]
    fn crossing_lemma_examples() {
        let k10 = crossing_lemma_lower(&Graph::complete(10));
        assert!(k10.applicable);
        assert_eq!(k10.value, Q::new(b(45 * 45 * 45), b(6400)));
        let k16 = crossing_lemma_lower(&Graph::complete(16));
        assert_eq!(k16.value, Q::new(b(120 * 120 * 120), b(64 * 256)));
        let c = crossing_lemma_lower(&Graph::cycle(6));
        assert!(!c.applicable);
        assert_eq!(c.value, q(0));
    }

    #[test]
    fn subdiv_examples() {
        let t = subdiv_trick_transfer(&Graph::complete(3));
        assert_eq!((t.edge_sum.clone(), t.holds), (b(24), true));
        let t = subdiv_trick_transfer(&Graph::path(2));
        assert_eq!((t.edge_sum.clone(), t.holds), (b(4), true));
        assert!(subdiv_trick_transfer(&Graph::empty(0)).holds);
    }
}
