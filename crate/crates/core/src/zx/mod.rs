//! ZX diagrams as open multigraphs.
//!
//! Text format:
//!
//! ```text
//! node 0 in 0
//! node 1 Z phase 1
//! node 2 out 0
//! edge 0 1
//! edge 1 2
//! ```
//!
//! Vertex kinds are `Z`, `X`, `H`, `in <idx>` and `out <idx>`; spiders take an
//! optional `phase <k>` in quarter turns. A repeated `edge` line adds a
//! parallel edge.

mod eval;
mod iso;
mod translate;

pub use eval::{zx_to_matrix, zx_to_matrix_with, ContractionOrder};
pub use iso::{zx_iso, zx_iso_map};
pub use translate::{circuit_to_zx, circuit_to_zx_mapped};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Input(usize),
    Output(usize),
    Z(Phase),
    X(Phase),
    H,
}

impl VertexKind {
    pub fn is_boundary(self) -> bool {
        matches!(self, VertexKind::Input(_) | VertexKind::Output(_))
    }

    pub fn is_spider(self) -> bool {
        matches!(self, VertexKind::Z(_) | VertexKind::X(_))
    }

    pub fn phase(self) -> Option<Phase> {
        match self {
            VertexKind::Z(p) | VertexKind::X(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Input(i) => write!(f, "in {i}"),
            VertexKind::Output(i) => write!(f, "out {i}"),
            VertexKind::Z(p) if p.is_zero() => write!(f, "Z"),
            VertexKind::X(p) if p.is_zero() => write!(f, "X"),
            VertexKind::Z(p) => write!(f, "Z phase {p}"),
            VertexKind::X(p) => write!(f, "X phase {p}"),
            VertexKind::H => write!(f, "H"),
        }
    }
}

/// An undirected multigraph with typed vertices. Self-loops are stored as
/// `adj[v][v]` and count twice towards the degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZxDiagram {
    kinds: BTreeMap<usize, VertexKind>,
    adj: BTreeMap<usize, BTreeMap<usize, usize>>,
    next_id: usize,
}

impl ZxDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> usize {
        let id = self.next_id;
        self.insert_vertex(id, kind);
        id
    }

    /// Inserts a vertex with a chosen id, replacing nothing.
    ///
    /// Panics if the id is taken.
    pub fn insert_vertex(&mut self, id: usize, kind: VertexKind) {
        assert!(!self.kinds.contains_key(&id), "vertex {id} exists");
        self.kinds.insert(id, kind);
        self.adj.insert(id, BTreeMap::new());
        self.next_id = self.next_id.max(id + 1);
    }

    pub fn remove_vertex(&mut self, v: usize) {
        if let Some(nb) = self.adj.remove(&v) {
            for u in nb.keys() {
                if *u != v {
                    self.adj.get_mut(u).unwrap().remove(&v);
                }
            }
        }
        self.kinds.remove(&v);
    }

    pub fn set_kind(&mut self, v: usize, kind: VertexKind) {
        *self.kinds.get_mut(&v).expect("vertex exists") = kind;
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(self.kinds.contains_key(&a) && self.kinds.contains_key(&b), "edge endpoints exist");
        *self.adj.get_mut(&a).unwrap().entry(b).or_insert(0) += 1;
        if a != b {
            *self.adj.get_mut(&b).unwrap().entry(a).or_insert(0) += 1;
        }
    }

    /// Removes one edge between `a` and `b`; returns whether one existed.
    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        let dec = |adj: &mut BTreeMap<usize, BTreeMap<usize, usize>>, x: usize, y: usize| {
            let m = adj.get_mut(&x).unwrap();
            let c = m.get_mut(&y).unwrap();
            *c -= 1;
            if *c == 0 {
                m.remove(&y);
            }
        };
        if self.edge_count(a, b) == 0 {
            return false;
        }
        dec(&mut self.adj, a, b);
        if a != b {
            dec(&mut self.adj, b, a);
        }
        true
    }

    pub fn contains(&self, v: usize) -> bool {
        self.kinds.contains_key(&v)
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[&v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.kinds.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn next_id(&self) -> usize {
        self.next_id
    }

    pub fn edge_count(&self, a: usize, b: usize) -> usize {
        self.adj.get(&a).and_then(|m| m.get(&b)).copied().unwrap_or(0)
    }

    /// Neighbours with edge multiplicities, including `v` itself for loops.
    pub fn neighbors(&self, v: usize) -> &BTreeMap<usize, usize> {
        &self.adj[&v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[&v].iter().map(|(&u, &c)| if u == v { 2 * c } else { c }).sum()
    }

    pub fn self_loops(&self, v: usize) -> usize {
        self.edge_count(v, v)
    }

    /// Every edge once as `(a, b)` with `a <= b`, repeated per multiplicity.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&a, nb) in &self.adj {
            for (&b, &c) in nb.range(a..) {
                out.extend(std::iter::repeat((a, b)).take(c));
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    fn boundary(&self, want_input: bool) -> Vec<usize> {
        let mut v: Vec<(usize, usize)> = self
            .kinds
            .iter()
            .filter_map(|(&id, k)| match (k, want_input) {
                (VertexKind::Input(i), true) | (VertexKind::Output(i), false) => Some((*i, id)),
                _ => None,
            })
            .collect();
        v.sort();
        v.into_iter().map(|(_, id)| id).collect()
    }

    /// Input boundary vertices ordered by index.
    pub fn inputs(&self) -> Vec<usize> {
        self.boundary(true)
    }

    /// Output boundary vertices ordered by index.
    pub fn outputs(&self) -> Vec<usize> {
        self.boundary(false)
    }

    /// Checks the degree and indexing invariants.
    pub fn validate(&self) -> Result<()> {
        for (&v, &k) in &self.kinds {
            let d = self.degree(v);
            match k {
                VertexKind::Input(_) | VertexKind::Output(_) if d != 1 || self.self_loops(v) > 0 => {
                    return Err(Error::InvalidDiagram(format!("boundary vertex {v} has degree {d}")));
                }
                VertexKind::H if d != 2 => {
                    return Err(Error::InvalidDiagram(format!("H box {v} has degree {d}")));
                }
                _ => {}
            }
        }
        for (want, name) in [(true, "input"), (false, "output")] {
            let idx: Vec<usize> = self
                .boundary(want)
                .iter()
                .map(|v| match self.kind(*v) {
                    VertexKind::Input(i) | VertexKind::Output(i) => i,
                    _ => unreachable!(),
                })
                .collect();
            if idx.iter().enumerate().any(|(n, &i)| n != i) {
                return Err(Error::InvalidDiagram(format!("{name} indices are not 0..{}", idx.len())));
            }
        }
        Ok(())
    }

    /// Validates and removes every spider self-loop.
    pub fn normalize(&self) -> Result<ZxDiagram> {
        self.validate()?;
        let mut d = self.clone();
        for (&v, &k) in &self.kinds {
            if k.is_spider() {
                d.adj.get_mut(&v).unwrap().remove(&v);
            }
        }
        Ok(d)
    }

    /// Parses the text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = ZxDiagram::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<(usize, &str)> = body
                .split_whitespace()
                .map(|t| (t.as_ptr() as usize - body.as_ptr() as usize + 1, t))
                .collect();
            let Some(&(col, head)) = toks.first() else { continue };
            let num = |i: usize| -> Result<usize> {
                match toks.get(i) {
                    Some(&(c, t)) => t.parse().or_else(|_| parse_err(line, c, format!("expected a number, got {t}"))),
                    None => parse_err(line, body.len() + 1, "missing number"),
                }
            };
            match head {
                "node" => {
                    let id = num(1)?;
                    let Some(&(kc, kt)) = toks.get(2) else {
                        return parse_err(line, body.len() + 1, "missing vertex kind");
                    };
                    let (kind, used) = match kt {
                        "in" => (VertexKind::Input(num(3)?), 4),
                        "out" => (VertexKind::Output(num(3)?), 4),
                        "H" => (VertexKind::H, 3),
                        "Z" | "X" => {
                            let mut p = Phase::ZERO;
                            let mut used = 3;
                            if let Some(&(pc, pt)) = toks.get(3) {
                                if pt != "phase" {
                                    return parse_err(line, pc, format!("unexpected {pt}"));
                                }
                                let Some(&(vc, vt)) = toks.get(4) else {
                                    return parse_err(line, body.len() + 1, "missing phase");
                                };
                                let Ok(k) = vt.parse::<i64>() else {
                                    return parse_err(line, vc, format!("bad phase {vt}"));
                                };
                                p = Phase::new(k);
                                used = 5;
                            }
                            (if kt == "Z" { VertexKind::Z(p) } else { VertexKind::X(p) }, used)
                        }
                        other => return parse_err(line, kc, format!("unknown vertex kind {other}")),
                    };
                    if let Some(&(c, t)) = toks.get(used) {
                        return parse_err(line, c, format!("unexpected {t}"));
                    }
                    if d.contains(id) {
                        return parse_err(line, toks[1].0, format!("duplicate node {id}"));
                    }
                    d.insert_vertex(id, kind);
                }
                "edge" => {
                    let a = num(1)?;
                    let b = num(2)?;
                    if let Some(&(c, t)) = toks.get(3) {
                        return parse_err(line, c, format!("unexpected {t}"));
                    }
                    for (i, v) in [(1, a), (2, b)] {
                        if !d.contains(v) {
                            return parse_err(line, toks[i].0, format!("unknown node {v}"));
                        }
                    }
                    d.add_edge(a, b);
                }
                other => return parse_err(line, col, format!("unknown statement {other}")),
            }
        }
        d.validate()?;
        Ok(d)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, k) in &self.kinds {
            s.push_str(&format!("node {v} {k}\n"));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("edge {a} {b}\n"));
        }
        s
    }

    /// Renumbers vertices to `0..n` in id order.
    pub fn compact(&self) -> ZxDiagram {
        let map: BTreeMap<usize, usize> = self.kinds.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut d = ZxDiagram::new();
        for (v, k) in &self.kinds {
            d.insert_vertex(map[v], *k);
        }
        for (a, b) in self.edges() {
            d.add_edge(map[&a], map[&b]);
        }
        d
    }
}

impl fmt::Display for ZxDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn parse_zx(text: &str) -> Result<ZxDiagram> {
    ZxDiagram::parse(text)
}

pub fn zx_normalize(d: &ZxDiagram) -> Result<ZxDiagram> {
    d.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let t = "node 0 in 0\nnode 1 Z phase 1\nnode 2 X\nnode 3 out 0\nedge 0 1\nedge 1 2\nedge 1 2\nedge 2 3\n";
        let d = ZxDiagram::parse(t).unwrap();
        assert_eq!(d.to_text(), t);
        assert_eq!(d.edge_count(1, 2), 2);
        assert_eq!(d.degree(1), 3);
    }

    #[test]
    fn parse_errors() {
        let e = ZxDiagram::parse("node 0 Y").unwrap_err();
        assert_eq!(e, Error::Parse { line: 1, col: 8, msg: "unknown vertex kind Y".into() });
        assert!(ZxDiagram::parse("node 0 in 0").is_err());
        assert!(ZxDiagram::parse("node 0 Z\nedge 0 1").is_err());
        assert!(matches!(ZxDiagram::parse("node 0 H\nnode 1 Z\nedge 0 1"), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn normalize_drops_loops() {
        let mut d = ZxDiagram::new();
        let a = d.add_vertex(VertexKind::Input(0));
        let z = d.add_vertex(VertexKind::Z(Phase::HALF));
        let b = d.add_vertex(VertexKind::Output(0));
        d.add_edge(a, z);
        d.add_edge(z, z);
        d.add_edge(z, b);
        assert_eq!(d.degree(z), 4);
        let n = d.normalize().unwrap();
        assert_eq!(n.degree(z), 2);
        assert_eq!(n.normalize().unwrap(), n);
    }

    #[test]
    fn hbox_degree_checked() {
        let mut d = ZxDiagram::new();
        let h = d.add_vertex(VertexKind::H);
        for _ in 0..3 {
            let z = d.add_vertex(VertexKind::Z(Phase::ZERO));
            d.add_edge(h, z);
        }
        assert!(d.normalize().is_err());
    }
}
