//! Rooted trees, their density and balancedness, rooted powers, and the
//! 1-subdivided complete bipartite graphs.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of unrooted vertices for exhaustive balance checks.
pub const DEFAULT_BALANCE_CAP: usize = 20;

/// A tree with an ordered, independent set of roots `u_1, ..., u_r`.
///
/// The edge order fixes the labelling `e_1, ..., e_b` used when two copies of
/// the tree are put in correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    roots: Vec<usize>,
    is_root: Vec<bool>,
}

impl RootedTree {
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>, roots: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::MalformedTree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::MalformedTree(format!("{} edges on {n} vertices cannot form a tree", edges.len())));
        }
        let graph =
            Graph::new(labels.clone(), edges.iter().copied()).map_err(|e| Error::MalformedTree(e.to_string()))?;
        if !graph.is_connected() {
            return Err(Error::MalformedTree("edges do not connect the vertices".into()));
        }
        let mut is_root = vec![false; n];
        for &r in &roots {
            if r >= n {
                return Err(Error::MalformedTree(format!("root {r} is not a vertex")));
            }
            if is_root[r] {
                return Err(Error::MalformedTree(format!("root '{}' listed twice", labels[r])));
            }
            is_root[r] = true;
        }
        for &(u, v) in &edges {
            if is_root[u] && is_root[v] {
                return Err(Error::MalformedTree(format!("roots '{}' and '{}' are adjacent", labels[u], labels[v])));
            }
        }
        Ok(RootedTree { labels, edges: graph.edges().to_vec(), roots, is_root })
    }

    /// Tree on `0..n` labelled by index.
    pub fn from_indices(n: usize, edges: Vec<(usize, usize)>, roots: Vec<usize>) -> Result<Self> {
        RootedTree::new((0..n).map(|i| i.to_string()).collect(), edges, roots)
    }

    /// Path with `len` edges rooted at both leaves.
    pub fn path_rooted_at_ends(len: usize) -> Result<Self> {
        RootedTree::from_indices(len + 1, (0..len).map(|i| (i, i + 1)).collect(), vec![0, len])
    }

    /// Star `K_{1,k}` rooted at its leaves.
    pub fn star_rooted_at_leaves(k: usize) -> Result<Self> {
        RootedTree::from_indices(k + 1, (1..=k).map(|i| (0, i)).collect(), (1..=k).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// `b`, the number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `r`, the number of roots.
    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    /// `a`, the number of unrooted vertices.
    pub fn unrooted_count(&self) -> usize {
        self.labels.len() - self.roots.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.is_root[v]
    }

    pub fn unrooted(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.is_root[v])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The underlying unrooted graph.
    pub fn as_graph(&self) -> Graph {
        Graph::new(self.labels.clone(), self.edges.iter().copied()).expect("tree is simple")
    }

    pub fn to_record(&self) -> TreeRecord {
        let l = |v: usize| Label::Text(self.labels[v].clone());
        TreeRecord {
            vertices: (0..self.vertex_count()).map(l).collect(),
            edges: self.edges.iter().map(|&(u, v)| [l(u), l(v)]).collect(),
            roots: self.roots.iter().map(|&v| l(v)).collect(),
        }
    }

    pub fn from_record(rec: &TreeRecord) -> Result<Self> {
        let labels: Vec<String> = rec.vertices.iter().map(Label::text).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::MalformedTree(format!("vertex '{l}' listed twice")));
            }
        }
        let lookup = |l: &Label| {
            index.get(&l.text()).copied().ok_or_else(|| Error::MalformedTree(format!("unknown vertex '{}'", l.text())))
        };
        let edges = rec.edges.iter().map(|[u, v]| Ok((lookup(u)?, lookup(v)?))).collect::<Result<Vec<_>>>()?;
        let roots = rec.roots.iter().map(lookup).collect::<Result<Vec<_>>>()?;
        RootedTree::new(labels, edges, roots)
    }
}

/// A vertex label as written in JSON: either a string or a number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(u64),
}

impl Label {
    pub fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

/// Tree JSON: `{vertices: [labels], edges: [[u, v], ...], roots: [labels]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub vertices: Vec<Label>,
    pub edges: Vec<[Label; 2]>,
    pub roots: Vec<Label>,
}

/// `rho_T = b / a`, kept exact.
pub fn density(t: &RootedTree) -> Result<Ratio<u64>> {
    let a = t.unrooted_count();
    if a == 0 {
        return Err(Error::AllRoots);
    }
    Ok(Ratio::new(t.edge_count() as u64, a as u64))
}

/// Result of a balance check. When unbalanced, `witness` is a subset `S` of
/// unrooted vertices minimising `e(S)/|S|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balance {
    pub balanced: bool,
    pub density: Ratio<u64>,
    pub witness: Option<Vec<usize>>,
    pub witness_edges: usize,
}

impl Balance {
    pub fn into_result(self, t: &RootedTree) -> Result<()> {
        match self.witness {
            Some(s) if !self.balanced => Err(Error::Unbalanced {
                size: s.len(),
                witness: s.iter().map(|&v| t.labels[v].clone()).collect(),
                edges: self.witness_edges,
            }),
            _ => Ok(()),
        }
    }
}

/// Checks `e(S)/|S| >= rho_T` over every nonempty subset `S` of unrooted
/// vertices, where `e(S)` counts edges meeting `S`.
pub fn is_balanced(t: &RootedTree) -> Result<Balance> {
    is_balanced_capped(t, DEFAULT_BALANCE_CAP)
}

pub fn is_balanced_capped(t: &RootedTree, cap: usize) -> Result<Balance> {
    let rho = density(t)?;
    let unrooted: Vec<usize> = t.unrooted().collect();
    let a = unrooted.len();
    if a > cap || a >= 63 {
        return Err(Error::BudgetExceeded {
            what: "balance subsets (2^a)",
            needed: 1u128 << a.min(127),
            cap: 1u128 << cap.min(127),
        });
    }
    let mut bit = vec![0u64; t.vertex_count()];
    for (i, &v) in unrooted.iter().enumerate() {
        bit[v] = 1 << i;
    }
    let edge_masks: Vec<u64> = t.edges().iter().map(|&(u, v)| bit[u] | bit[v]).collect();
    let (b, a64) = (*rho.numer(), *rho.denom());
    let mut worst: Option<(u64, usize, usize)> = None;
    for s in 1u64..(1u64 << a) {
        let size = s.count_ones() as usize;
        let e = edge_masks.iter().filter(|&&m| m & s != 0).count();
        // e/size < b/a  <=>  e*a < b*size
        if (e as u64) * a64 < b * size as u64 {
            let better = match worst {
                None => true,
                Some((_, we, ws)) => e * ws < we * size,
            };
            if better {
                worst = Some((s, e, size));
            }
        }
    }
    Ok(match worst {
        None => Balance { balanced: true, density: rho, witness: None, witness_edges: 0 },
        Some((s, e, _)) => Balance {
            balanced: false,
            density: rho,
            witness: Some(unrooted.iter().enumerate().filter(|&(i, _)| s >> i & 1 == 1).map(|(_, &v)| v).collect()),
            witness_edges: e,
        },
    })
}

/// The `k`-th rooted power with the vertex map of each copy.
#[derive(Debug, Clone)]
pub struct Power {
    pub graph: Graph,
    /// `copies[c][v]` is the power-graph vertex of tree vertex `v` in copy `c`.
    pub copies: Vec<Vec<usize>>,
}

/// Union of `k` copies of `t` sharing the roots, unrooted parts disjoint.
/// Roots come first (in root order), then the unrooted vertices of copy 0,
/// copy 1, and so on.
pub fn power(t: &RootedTree, k: usize) -> Result<Power> {
    if k == 0 {
        return Err(Error::Parameter("power needs k >= 1".into()));
    }
    let mut labels: Vec<String> = t.roots().iter().map(|&v| t.labels[v].clone()).collect();
    let mut copies = Vec::with_capacity(k);
    for c in 0..k {
        let mut map = vec![usize::MAX; t.vertex_count()];
        for (i, &r) in t.roots().iter().enumerate() {
            map[r] = i;
        }
        for v in t.unrooted() {
            map[v] = labels.len();
            labels.push(format!("{}#{c}", t.labels[v]));
        }
        copies.push(map);
    }
    let edges = copies.iter().flat_map(|map| t.edges().iter().map(move |&(u, v)| (map[u], map[v]))).collect::<Vec<_>>();
    let graph = Graph::new(labels, edges)?;
    Ok(Power { graph, copies })
}

/// `K_{s,t}` with every edge subdivided once. Vertices: `a0..`, `b0..`, then
/// the subdivision vertices `m{i}.{j}`.
pub fn subdivision_kst(s: usize, t: usize) -> Result<Graph> {
    if s < 2 || t < s {
        return Err(Error::Parameter(format!("need 2 <= s <= t, got s={s}, t={t}")));
    }
    let mut labels: Vec<String> = (0..s).map(|i| format!("a{i}")).collect();
    labels.extend((0..t).map(|j| format!("b{j}")));
    let mut edges = Vec::with_capacity(2 * s * t);
    for i in 0..s {
        for j in 0..t {
            let m = labels.len();
            labels.push(format!("m{i}.{j}"));
            edges.push((i, m));
            edges.push((m, s + j));
        }
    }
    Graph::new(labels, edges)
}

/// Uniform labelled tree on `n` vertices (Prüfer decoding) with a random
/// nonempty independent root set leaving at least one vertex unrooted.
pub fn random_rooted_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RootedTree> {
    if n < 2 {
        return Err(Error::Parameter("random rooted tree needs at least 2 vertices".into()));
    }
    let edges = if n == 2 {
        vec![(0, 1)]
    } else {
        let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        prufer_decode(n, &seq)
    };
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut roots = Vec::new();
    let mut is_root = vec![false; n];
    for &v in &order {
        if roots.len() + 1 < n && !adj[v].iter().any(|&w| is_root[w]) && (roots.is_empty() || rng.gen_bool(0.5)) {
            is_root[v] = true;
            roots.push(v);
        }
    }
    RootedTree::from_indices(n, edges, roots)
}

/// Tree with Prüfer sequence `seq` on `seq.len() + 2` vertices.
pub fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn r(a: u64, b: u64) -> Ratio<u64> {
        Ratio::new(a, b)
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&RootedTree::path_rooted_at_ends(2).unwrap()).unwrap(), r(2, 1));
        let edge = RootedTree::from_indices(2, vec![(0, 1)], vec![0]).unwrap();
        assert_eq!(density(&edge).unwrap(), r(1, 1));
        assert_eq!(density(&RootedTree::path_rooted_at_ends(4).unwrap()).unwrap(), r(4, 3));
        let lone = RootedTree::from_indices(1, vec![], vec![0]).unwrap();
        assert!(matches!(density(&lone), Err(Error::AllRoots)));
    }

    #[test]
    fn malformed_trees_rejected() {
        assert!(RootedTree::from_indices(3, vec![(0, 1)], vec![]).is_err());
        assert!(RootedTree::from_indices(3, vec![(0, 1), (1, 2)], vec![0, 1]).is_err());
        assert!(RootedTree::from_indices(4, vec![(0, 1), (1, 0), (2, 3)], vec![]).is_err());
        assert!(RootedTree::from_indices(3, vec![(0, 1), (1, 2)], vec![0, 0]).is_err());
    }

    #[test]
    fn balanced_examples() {
        assert!(is_balanced(&RootedTree::path_rooted_at_ends(2).unwrap()).unwrap().balanced);
        assert!(is_balanced(&RootedTree::star_rooted_at_leaves(3).unwrap()).unwrap().balanced);
        // x - u - v rooted at x
        let t = RootedTree::from_indices(3, vec![(0, 1), (1, 2)], vec![0]).unwrap();
        assert!(is_balanced(&t).unwrap().balanced);
    }

    #[test]
    fn unbalanced_tree_has_witness() {
        // r0 - u - r1 with a pendant w on u: rho = 3/2, S = {w} gives 1/1
        let t = RootedTree::from_indices(4, vec![(0, 1), (1, 2), (1, 3)], vec![0, 2]).unwrap();
        let bal = is_balanced(&t).unwrap();
        assert!(!bal.balanced);
        assert_eq!(bal.witness, Some(vec![3]));
        assert!(bal.into_result(&t).is_err());
    }

    #[test]
    fn balance_cap() {
        let t = RootedTree::path_rooted_at_ends(8).unwrap();
        assert!(matches!(is_balanced_capped(&t, 4), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn power_counts() {
        let p2 = RootedTree::path_rooted_at_ends(2).unwrap();
        let p = power(&p2, 3).unwrap();
        assert_eq!(p.graph.vertex_count(), 5);
        assert_eq!(p.graph.edge_count(), 6);
        // K_{2,3}: both roots adjacent to every middle vertex
        assert_eq!(p.graph.degree(0), 3);
        assert_eq!(p.graph.degree(1), 3);
        let one = power(&p2, 1).unwrap();
        assert_eq!(one.graph.edge_count(), p2.edge_count());
        assert!(power(&p2, 0).is_err());
    }

    #[test]
    fn subdivision_counts() {
        let c8 = subdivision_kst(2, 2).unwrap();
        assert_eq!((c8.vertex_count(), c8.edge_count()), (8, 8));
        assert!(c8.is_connected() && (0..8).all(|v| c8.degree(v) == 2));
        let g = subdivision_kst(2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (11, 12));
        let g = subdivision_kst(3, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (15, 18));
        assert!(subdivision_kst(1, 3).is_err());
        assert!(subdivision_kst(3, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"vertices":["u","v","w"],"edges":[["u","v"],["v","w"]],"roots":["u","w"]}"#;
        let rec: TreeRecord = serde_json::from_str(json).unwrap();
        let t = RootedTree::from_record(&rec).unwrap();
        assert_eq!(density(&t).unwrap(), r(2, 1));
        let numeric = r#"{"vertices":[0,1],"edges":[[0,1]],"roots":[0]}"#;
        let t2 = RootedTree::from_record(&serde_json::from_str(numeric).unwrap()).unwrap();
        assert_eq!(t2.unrooted_count(), 1);
        assert_eq!(RootedTree::from_record(&t.to_record()).unwrap(), t);
    }

    #[test]
    fn random_trees_are_valid() {
        let mut rng = stream_rng(11, 0);
        for n in 2..10 {
            for _ in 0..20 {
                let t = random_rooted_tree(n, &mut rng).unwrap();
                assert!(t.root_count() >= 1 && t.unrooted_count() >= 1);
            }
        }
    }
}
