//! JSON formats. Rationals travel as `"num/den"` strings so nothing is lost.

use crate::cliquesum::CliqueSumTree;
use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::geometry::{BoundCheck, CrossingReport, Drawing, Point, Style, Q};
use crate::graph::Graph;
use serde::{Deserialize, Serialize};
use serde_json::Value;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn q_to_string(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn q_from_str(s: &str) -> Result<Q> {
    let v: Q = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))
    }
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("plain data")
}

/// Graph JSON, or a `generate` bundle holding one under `graph`.
pub fn graph_from_json(s: &str) -> Result<Graph> {
    let mut v: Value = serde_json::from_str(s).map_err(parse_err)?;
    if let Some(inner) = v.get_mut("graph") {
        v = inner.take();
    }
    let j: GraphJson = serde_json::from_value(v).map_err(parse_err)?;
    j.to_graph()
}

/// Plain edge list: one `u v` pair per line, `#` comments, and an optional
/// `n <count>` line for isolated vertices.
pub fn graph_from_edge_list(s: &str) -> Result<Graph> {
    let mut n = 0;
    let mut edges = Vec::new();
    for (k, line) in s.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: bad number {t:?}", k + 1)))
        };
        match parts.as_slice() {
            ["n", c] => n = n.max(num(c)?),
            [a, b] => {
                let (a, b) = (num(a)?, num(b)?);
                n = n.max(a.max(b) + 1);
                edges.push((a, b));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected two vertex ids",
                    k + 1
                )))
            }
        }
    }
    Graph::new(n, edges)
}

/// JSON if the text starts with `{`, otherwise an edge list.
pub fn read_graph(s: &str) -> Result<Graph> {
    if s.trim_start().starts_with('{') {
        graph_from_json(s)
    } else {
        graph_from_edge_list(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub bags: Vec<Vec<usize>>,
    #[serde(default)]
    pub host_edges: Vec<[usize; 2]>,
}

impl From<&Decomposition> for DecompositionJson {
    fn from(d: &Decomposition) -> Self {
        DecompositionJson {
            bags: d.bags.clone(),
            host_edges: d.host.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl DecompositionJson {
    pub fn to_decomposition(&self) -> Result<Decomposition> {
        let host = Graph::new(
            self.bags.len(),
            self.host_edges.iter().map(|e| (e[0], e[1])),
        )?;
        Decomposition::new(host, self.bags.clone())
    }
}

type PointJson = [String; 2];

fn point_json(p: &Point) -> PointJson {
    [q_to_string(&p.x), q_to_string(&p.y)]
}

fn point_from(p: &PointJson) -> Result<Point> {
    Ok(Point::new(q_from_str(&p[0])?, q_from_str(&p[1])?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawingJson {
    pub style: Style,
    pub positions: Vec<PointJson>,
    pub edges: Vec<[usize; 2]>,
    pub routes: Vec<Vec<PointJson>>,
}

impl From<&Drawing> for DrawingJson {
    fn from(d: &Drawing) -> Self {
        DrawingJson {
            style: d.style,
            positions: d.positions.iter().map(point_json).collect(),
            edges: d.edges.iter().map(|&(a, b)| [a, b]).collect(),
            routes: d
                .routes
                .iter()
                .map(|r| r.iter().map(point_json).collect())
                .collect(),
        }
    }
}

impl DrawingJson {
    pub fn to_drawing(&self) -> Result<Drawing> {
        if self.routes.len() != self.edges.len() {
            return Err(Error::Parse("one route per edge expected".into()));
        }
        Ok(Drawing {
            style: self.style,
            positions: self
                .positions
                .iter()
                .map(point_from)
                .collect::<Result<_>>()?,
            edges: self.edges.iter().map(|e| (e[0], e[1])).collect(),
            routes: self
                .routes
                .iter()
                .map(|r| r.iter().map(point_from).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        })
    }
}

pub fn drawing_to_json(d: &Drawing) -> String {
    serde_json::to_string(&DrawingJson::from(d)).expect("plain data")
}

pub fn drawing_from_json(s: &str) -> Result<Drawing> {
    let j: DrawingJson = serde_json::from_str(s).map_err(parse_err)?;
    j.to_drawing()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundJson {
    pub name: String,
    pub value: String,
    pub actual: String,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub total: usize,
    pub non_adjacent: usize,
    pub max_per_edge: usize,
    pub per_edge: Vec<usize>,
    pub pairs: Vec<[usize; 2]>,
    pub bounds: Vec<BoundJson>,
}

impl From<&CrossingReport> for ReportJson {
    fn from(r: &CrossingReport) -> Self {
        ReportJson {
            total: r.total,
            non_adjacent: r.non_adjacent,
            max_per_edge: r.max_per_edge(),
            per_edge: r.per_edge.clone(),
            pairs: r.pairs.iter().map(|&(a, b)| [a, b]).collect(),
            bounds: r.bounds.iter().map(bound_json).collect(),
        }
    }
}

pub fn bound_json(b: &BoundCheck) -> BoundJson {
    BoundJson {
        name: b.name.clone(),
        value: q_to_string(&b.value),
        actual: q_to_string(&b.actual),
        satisfied: b.satisfied,
    }
}

pub fn report_to_json(r: &CrossingReport) -> String {
    serde_json::to_string(&ReportJson::from(r)).expect("plain data")
}

pub fn tree_from_json(s: &str) -> Result<CliqueSumTree> {
    serde_json::from_str(s).map_err(parse_err)
}

pub fn tree_to_json(t: &CliqueSumTree) -> String {
    serde_json::to_string(t).expect("plain data")
}

/// Certificate file: whichever of the fields the method needs. A bundle
/// written by `generate` (with a `certificate` member) is unwrapped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bags: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    /// Pathwidth bound or clique-bag sharing bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Value>,
}

impl CertificateJson {
    pub fn parse(s: &str) -> Result<CertificateJson> {
        let mut v: Value = serde_json::from_str(s).map_err(parse_err)?;
        if let Some(inner) = v.get_mut("certificate") {
            v = inner.take();
        }
        serde_json::from_value(v).map_err(parse_err)
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        let bags = self
            .bags
            .clone()
            .ok_or_else(|| Error::InvalidCertificate("certificate has no bags".into()))?;
        DecompositionJson {
            bags,
            host_edges: self.host_edges.clone().unwrap_or_default(),
        }
        .to_decomposition()
    }

    pub fn tree(&self) -> Result<CliqueSumTree> {
        let pieces = self
            .pieces
            .clone()
            .ok_or_else(|| Error::InvalidCertificate("certificate has no pieces".into()))?;
        serde_json::from_value(serde_json::json!({ "pieces": pieces })).map_err(parse_err)
    }
}

impl From<&Decomposition> for CertificateJson {
    fn from(d: &Decomposition) -> Self {
        let j = DecompositionJson::from(d);
        CertificateJson {
            bags: Some(j.bags),
            host_edges: Some(j.host_edges),
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{q, qr};

    #[test]
    fn graph_round_trip() {
        let g = Graph::new(5, [(3, 1), (0, 4), (1, 2)]).unwrap();
        let s = graph_to_json(&g);
        assert_eq!(s, r#"{"n":5,"edges":[[0,4],[1,2],[1,3]]}"#);
        assert_eq!(graph_from_json(&s).unwrap(), g);
        assert_eq!(
            read_graph("# path\n0 1\n1 2\nn 4\n").unwrap(),
            Graph::new(4, [(0, 1), (1, 2)]).unwrap()
        );
        assert!(read_graph("0 x").is_err());
        assert!(graph_from_json(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn rationals_survive() {
        let d = Drawing {
            style: Style::Polyline,
            positions: vec![
                Point::new(qr(1, 3), q(0)),
                Point::new(qr(-7, 2), qr(1, 1 << 40)),
            ],
            edges: vec![(0, 1)],
            routes: vec![vec![
                Point::new(qr(1, 3), q(0)),
                Point::new(qr(5, 9), q(1)),
                Point::new(qr(-7, 2), qr(1, 1 << 40)),
            ]],
        };
        let s = drawing_to_json(&d);
        assert!(s.contains("\"1/3\"") && s.contains("\"0/1\""));
        assert_eq!(drawing_from_json(&s).unwrap(), d);
        assert_eq!(q_from_str("6").unwrap(), q(6));
        assert!(q_from_str("1/0").is_err() || q_from_str("x").is_err());
    }

    #[test]
    fn certificate_bundle() {
        let c =
            CertificateJson::parse(r#"{"family":"x","certificate":{"order":[2,0,1]}}"#).unwrap();
        assert_eq!(c.order, Some(vec![2, 0, 1]));
        let d = Decomposition::path(vec![vec![0, 1], vec![1, 2]]);
        let c = CertificateJson::from(&d);
        assert_eq!(c.decomposition().unwrap(), d);
        assert!(CertificateJson::default().decomposition().is_err());
    }
}
