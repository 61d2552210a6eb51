//! Simple undirected labelled graphs used as search patterns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple graph on vertices `0..n`, each carrying a display label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, normalising each edge to `(min, max)` and rejecting
    /// loops, repeated edges and out-of-range endpoints. Edge order is kept.
    pub fn new(labels: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::MalformedGraph(format!("edge ({u}, {v}) outside {n} vertices")));
            }
            if u == v {
                return Err(Error::MalformedGraph(format!("loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::MalformedGraph(format!("repeated edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
            out.push((u.min(v), u.max(v)));
        }
        Ok(Graph { labels, edges: out, adj })
    }

    /// Graph on `0..n` labelled by index.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Graph::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::from_edges(n, edges).expect("complete graph is simple")
    }

    /// Path with `len` edges.
    pub fn path(len: usize) -> Self {
        Graph::from_edges(len + 1, (0..len).map(|i| (i, i + 1))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("cycle needs at least 3 vertices, got {n}")));
        }
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Star `K_{1,k}` with centre `0`.
    pub fn star(k: usize) -> Self {
        Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).expect("star is simple")
    }

    pub fn complete_bipartite(s: usize, t: usize) -> Self {
        let edges = (0..s).flat_map(|i| (0..t).map(move |j| (i, s + j)));
        Graph::from_edges(s + t, edges).expect("complete bipartite graph is simple")
    }

    /// Parses a pattern name: `K<n>`, `P<len>` (path with `len` edges),
    /// `C<n>`, `S<k>` (star), `K<s>,<t>`, or `sub<s>,<t>` (1-subdivided
    /// `K_{s,t}`).
    pub fn from_pattern_name(name: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("unknown pattern '{name}'"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        let pair = |s: &str| -> Result<(usize, usize)> {
            let (a, b) = s.split_once(',').ok_or_else(bad)?;
            Ok((num(a)?, num(b)?))
        };
        if let Some(rest) = name.strip_prefix("sub") {
            let (s, t) = pair(rest)?;
            return crate::trees::subdivision_kst(s, t);
        }
        let (head, rest) = name.split_at(name.chars().next().map_or(0, |c| c.len_utf8()));
        match head {
            "K" if rest.contains(',') => {
                let (s, t) = pair(rest)?;
                Ok(Graph::complete_bipartite(s, t))
            }
            "K" => Ok(Graph::complete(num(rest)?)),
            "P" => Ok(Graph::path(num(rest)?)),
            "C" => Graph::cycle(num(rest)?),
            "S" => Ok(Graph::star(num(rest)?)),
            _ => Err(bad()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord { labels: self.labels.clone(), edges: self.edges.iter().map(|&(u, v)| [u, v]).collect() }
    }

    pub fn from_record(rec: &GraphRecord) -> Result<Self> {
        Graph::new(rec.labels.clone(), rec.edges.iter().map(|e| (e[0], e[1])))
    }
}

/// Edge-list serialization with label metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub labels: Vec<String>,
    pub edges: Vec<[usize; 2]>,
}
