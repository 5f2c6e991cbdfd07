//! Brute-force ground truth for tiny graphs.

use crate::error::{Error, Result};
use crate::geometry::{convex_crossings_with, order_positions};
use crate::graph::Graph;
use crate::par::{self, Exec};

/// Largest graph the exhaustive search accepts.
pub const ORACLE_MAX_N: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexOptimum {
    pub crossings: usize,
    /// Lexicographically least optimal order starting at vertex 0.
    pub order: Vec<usize>,
}

/// Circular orders of `0..n` with 0 first, one per reflection pair, in
/// lexicographic order.
pub fn circular_orders(n: usize) -> Vec<Vec<usize>> {
    if n <= 3 {
        return vec![(0..n).collect()];
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    loop {
        if rest[0] < rest[rest.len() - 1] {
            let mut o = vec![0];
            o.extend_from_slice(&rest);
            out.push(o);
        }
        if !next_permutation(&mut rest) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn convex_optimum(g: &Graph) -> Result<ConvexOptimum> {
    convex_optimum_with(g, Exec::default())
}

/// Minimum convex crossings over all circular orders.
pub fn convex_optimum_with(g: &Graph, exec: Exec) -> Result<ConvexOptimum> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge(format!(
            "oracle handles n <= {ORACLE_MAX_N}, got {}",
            g.n()
        )));
    }
    let orders = circular_orders(g.n());
    let counts = par::map_slice(exec, &orders, |o| {
        convex_crossings_with(g, o, Exec::Sequential)
            .map(|r| r.total)
            .expect("orders are permutations")
    });
    let (best, _) = counts
        .iter()
        .enumerate()
        .min_by_key(|&(i, &c)| (c, i))
        .expect("at least one order");
    Ok(ConvexOptimum {
        crossings: counts[best],
        order: orders[best].clone(),
    })
}

/// Independent crossing count for a circular order: edge `ab` and `cd` cross
/// iff exactly one of `c`, `d` lies on the arc strictly between `a` and `b`.
pub fn naive_convex_crossings(g: &Graph, order: &[usize]) -> Result<usize> {
    let pos = order_positions(g.n(), order)?;
    let n = g.n();
    let inside = |a: usize, b: usize, x: usize| {
        // walking forward from a, do we meet x before b?
        let (pa, pb, px) = (pos[a], pos[b], pos[x]);
        let db = (pb + n - pa) % n;
        let dx = (px + n - pa) % n;
        dx > 0 && dx < db
    };
    let e = g.edges();
    let mut count = 0;
    for i in 0..e.len() {
        for j in 0..e.len() {
            if i == j {
                continue;
            }
            let (a, b) = e[i];
            let (c, d) = e[j];
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if inside(a, b, c) != inside(a, b, d) {
                count += 1;
            }
        }
    }
    Ok(count / 2)
}

/// Crossing numbers known exactly.
pub fn known_crossing_values() -> &'static [(&'static str, u64)] {
    &[("K5", 1), ("K3,3", 1)]
}

/// Crossing number of `g` if it is K5 or K3,3.
pub fn known_crossing_number(g: &Graph) -> Option<u64> {
    let name = if g.n() == 5 && g.m() == 10 {
        "K5"
    } else if g.n() == 6 && g.m() == 9 && g.degrees().iter().all(|&d| d == 3) && is_bipartite(g) {
        // the only cubic bipartite graph on six vertices
        "K3,3"
    } else {
        return None;
    };
    known_crossing_values()
        .iter()
        .find(|(k, _)| *k == name)
        .map(|&(_, v)| v)
}

fn is_bipartite(g: &Graph) -> bool {
    let mut side = vec![usize::MAX; g.n()];
    for s in 0..g.n() {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if side[w] == usize::MAX {
                    side[w] = 1 - side[v];
                    stack.push(w);
                } else if side[w] == side[v] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optimum_examples() {
        assert_eq!(convex_optimum(&Graph::complete(4)).unwrap().crossings, 1);
        assert_eq!(convex_optimum(&Graph::complete(5)).unwrap().crossings, 5);
        assert_eq!(convex_optimum(&Graph::complete(6)).unwrap().crossings, 15);
        let c5 = convex_optimum(&Graph::cycle(5)).unwrap();
        assert_eq!(
            c5,
            ConvexOptimum {
                crossings: 0,
                order: vec![0, 1, 2, 3, 4]
            }
        );
        assert!(matches!(
            convex_optimum(&Graph::empty(10)),
            Err(Error::TooLarge(_))
        ));
        assert_eq!(convex_optimum(&Graph::empty(0)).unwrap().crossings, 0);
    }

    #[test]
    fn enumeration_size() {
        assert_eq!(circular_orders(4).len(), 3);
        assert_eq!(circular_orders(7).len(), 360);
        assert_eq!(circular_orders(9).len(), 20160);
    }

    #[test]
    fn naive_agrees_on_complete() {
        let k6 = Graph::complete(6);
        let o: Vec<usize> = (0..6).collect();
        assert_eq!(naive_convex_crossings(&k6, &o).unwrap(), 15);
    }

    #[test]
    fn known_table() {
        assert_eq!(known_crossing_number(&Graph::complete(5)), Some(1));
        assert_eq!(
            known_crossing_number(&Graph::complete_bipartite(3, 3)),
            Some(1)
        );
        assert_eq!(known_crossing_number(&Graph::cycle(6)), None);
        // the prism is cubic on six vertices but not bipartite
        let prism = Graph::new(
            6,
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap();
        assert_eq!(known_crossing_number(&prism), None);
    }
}
