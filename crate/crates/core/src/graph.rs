//! Levi (incidence) graphs and Menger (collinearity) graphs.
//!
//! The Levi graph is bipartite: black point nodes, white line nodes, one edge
//! per incidence. For orbiconfigurations nodes carry their weight, a line of
//! multiplicity `d` appears as `d` line nodes, and an incidence of
//! multiplicity `c` is `c` parallel edges. Weights equal to 1 are not drawn.
//!
//! The Menger graph has only point nodes and an edge for each collinear pair.
//! Different configurations can share a Menger graph, so it is for display.

use std::fmt::Write as _;

use crate::incidence::{IncidenceStructure, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviGraph {
    /// Weight `a(i)` of each point node (1 for plain configurations).
    pub point_labels: Vec<u64>,
    /// Weight `b(j)` of each line node.
    pub line_labels: Vec<u64>,
    /// Which source line each line node replicates.
    pub line_origin: Vec<usize>,
    /// `(point node, line node, multiplicity)`.
    pub edges: Vec<(usize, usize, u64)>,
}

impl LeviGraph {
    pub fn of_structure(s: &IncidenceStructure) -> Self {
        let mut edges = Vec::new();
        for (j, line) in s.lines().iter().enumerate() {
            for &p in line {
                edges.push((p, j, 1));
            }
        }
        Self {
            point_labels: vec![1; s.point_count()],
            line_labels: vec![1; s.line_count()],
            line_origin: (0..s.line_count()).collect(),
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.point_labels.len() + self.line_labels.len()
    }

    /// Edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn point_degree(&self, p: usize) -> u64 {
        self.edges.iter().filter(|e| e.0 == p).map(|e| e.2).sum()
    }

    pub fn line_degree(&self, l: usize) -> u64 {
        self.edges.iter().filter(|e| e.1 == l).map(|e| e.2).sum()
    }

    pub fn is_connected(&self) -> bool {
        let np = self.point_labels.len();
        let total = self.node_count();
        if total == 0 {
            return false;
        }
        let mut uf = UnionFind::new(total);
        for &(p, l, _) in &self.edges {
            uf.union(p, np + l);
        }
        (0..total).filter(|&x| uf.find(x) == x).count() == 1
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", escape(name));
        out.push_str("  node [shape=circle];\n");
        for (i, &a) in self.point_labels.iter().enumerate() {
            let label = if a == 1 { String::new() } else { a.to_string() };
            let _ = writeln!(
                out,
                "  p{} [style=filled, fillcolor=black, fontcolor=white, label=\"{}\", tooltip=\"point {}\"];",
                i + 1,
                label,
                i + 1
            );
        }
        for (k, &b) in self.line_labels.iter().enumerate() {
            let label = if b == 1 { String::new() } else { b.to_string() };
            let _ = writeln!(
                out,
                "  l{} [style=filled, fillcolor=white, label=\"{}\", tooltip=\"line {}\"];",
                k + 1,
                label,
                self.line_origin[k] + 1
            );
        }
        for &(p, l, c) in &self.edges {
            for _ in 0..c {
                let _ = writeln!(out, "  p{} -- l{};", p + 1, l + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `(p, q, line)` with `p < q`, one edge per collinear pair and line.
pub fn menger_edges(s: &IncidenceStructure) -> Vec<(usize, usize, usize)> {
    let mut edges = Vec::new();
    for (j, line) in s.lines().iter().enumerate() {
        for (a, &p) in line.iter().enumerate() {
            for &q in &line[a + 1..] {
                edges.push((p, q, j));
            }
        }
    }
    edges
}

pub fn menger_dot(s: &IncidenceStructure, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", escape(name));
    out.push_str("  node [shape=circle, style=filled, fillcolor=black, fontcolor=white];\n");
    for p in 0..s.point_count() {
        let _ = writeln!(out, "  p{} [label=\"{}\"];", p + 1, p + 1);
    }
    for (p, q, j) in menger_edges(s) {
        let _ = writeln!(out, "  p{} -- p{} [label=\"{}\"];", p + 1, q + 1, j + 1);
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
