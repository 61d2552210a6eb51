//! Glued pairs of rooted tree copies and their edge correspondence.
//!
//! `p` pairs `(T1_j, T2_j)` of vertex-disjoint labelled copies of a rooted
//! tree, all rooted at the same `(X, Y)`, glue into graphs `H1 = ∪ T1_j` and
//! `H2 = ∪ T2_j`. Corresponding tree edges generate an equivalence relation on
//! host edges; the constraint number is the fewest generator pairs that still
//! express that relation, i.e. the size of a spanning forest of the generator
//! graph.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::trees::{density, is_balanced, RootedTree, TreeRecord};
use crate::union_find::DisjointSets;

/// An unordered host edge stored as `(min, max)`.
pub type HostEdge = (usize, usize);

fn host_edge(u: usize, v: usize) -> HostEdge {
    (u.min(v), u.max(v))
}

/// An injective placement of a rooted tree into host vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledCopy {
    source: Arc<RootedTree>,
    embedding: Vec<usize>,
}

impl LabelledCopy {
    pub fn new(source: Arc<RootedTree>, embedding: Vec<usize>) -> Result<Self> {
        if embedding.len() != source.vertex_count() {
            return Err(Error::DimensionMismatch { expected: source.vertex_count(), got: embedding.len() });
        }
        let distinct: BTreeSet<usize> = embedding.iter().copied().collect();
        if distinct.len() != embedding.len() {
            return Err(Error::Parameter(format!("embedding {embedding:?} is not injective")));
        }
        Ok(LabelledCopy { source, embedding })
    }

    pub fn source(&self) -> &Arc<RootedTree> {
        &self.source
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    /// Images of the roots in root order.
    pub fn root_images(&self) -> Vec<usize> {
        self.source.roots().iter().map(|&r| self.embedding[r]).collect()
    }

    /// Host edges in tree edge order.
    pub fn host_edges(&self) -> impl Iterator<Item = HostEdge> + '_ {
        self.source.edges().iter().map(|&(u, v)| host_edge(self.embedding[u], self.embedding[v]))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.embedding.iter().copied()
    }
}

/// `(H1, H2)` with roots `(X, Y)` and the generating edge pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceSystem {
    h1_edges: Vec<HostEdge>,
    h2_edges: Vec<HostEdge>,
    roots: (Vec<usize>, Vec<usize>),
    generators: Vec<(HostEdge, HostEdge)>,
}

impl CorrespondenceSystem {
    /// Validates that generators only use edges of their own side, that every
    /// edge of either side appears in some generator, and that `X` and `Y`
    /// are disjoint tuples of equal length.
    pub fn new(
        h1_edges: Vec<HostEdge>,
        h2_edges: Vec<HostEdge>,
        roots: (Vec<usize>, Vec<usize>),
        generators: Vec<(HostEdge, HostEdge)>,
    ) -> Result<Self> {
        let norm = |es: Vec<HostEdge>| -> Result<Vec<HostEdge>> {
            let set: BTreeSet<HostEdge> = es.iter().map(|&(u, v)| host_edge(u, v)).collect();
            if set.iter().any(|&(u, v)| u == v) {
                return Err(Error::Parameter("system contains a loop".into()));
            }
            Ok(set.into_iter().collect())
        };
        let h1 = norm(h1_edges)?;
        let h2 = norm(h2_edges)?;
        let generators: Vec<(HostEdge, HostEdge)> =
            generators.into_iter().map(|(e, f)| (host_edge(e.0, e.1), host_edge(f.0, f.1))).collect();
        let (x, y) = &roots;
        if x.len() != y.len() {
            return Err(Error::RootMismatch(format!("|X| = {} but |Y| = {}", x.len(), y.len())));
        }
        if x.iter().any(|v| y.contains(v)) {
            return Err(Error::RootMismatch("X and Y share a vertex".into()));
        }
        let mut seen1: BTreeSet<HostEdge> = BTreeSet::new();
        let mut seen2: BTreeSet<HostEdge> = BTreeSet::new();
        for &(e, f) in &generators {
            if h1.binary_search(&e).is_err() {
                return Err(Error::Parameter(format!("generator edge {e:?} is not in H1")));
            }
            if h2.binary_search(&f).is_err() {
                return Err(Error::Parameter(format!("generator edge {f:?} is not in H2")));
            }
            seen1.insert(e);
            seen2.insert(f);
        }
        if seen1.len() != h1.len() || seen2.len() != h2.len() {
            return Err(Error::Parameter("some edge of H1 or H2 appears in no generator".into()));
        }
        Ok(CorrespondenceSystem { h1_edges: h1, h2_edges: h2, roots, generators })
    }

    pub fn h1_edges(&self) -> &[HostEdge] {
        &self.h1_edges
    }

    pub fn h2_edges(&self) -> &[HostEdge] {
        &self.h2_edges
    }

    pub fn roots(&self) -> (&[usize], &[usize]) {
        (&self.roots.0, &self.roots.1)
    }

    pub fn generators(&self) -> &[(HostEdge, HostEdge)] {
        &self.generators
    }

    /// Host edges appearing in some generator; an edge lying in both `H1` and
    /// `H2` is one element.
    pub fn support(&self) -> BTreeSet<HostEdge> {
        self.generators.iter().flat_map(|&(e, f)| [e, f]).collect()
    }

    /// `v(H1 ∪ H2)`, counting the roots.
    pub fn union_vertex_count(&self) -> usize {
        let mut vs: BTreeSet<usize> = self.roots.0.iter().chain(&self.roots.1).copied().collect();
        for &(u, v) in self.h1_edges.iter().chain(&self.h2_edges) {
            vs.insert(u);
            vs.insert(v);
        }
        vs.len()
    }

    pub fn shares_edges(&self) -> bool {
        self.h1_edges.iter().any(|e| self.h2_edges.binary_search(e).is_ok())
    }

    pub fn to_record(&self) -> SystemRecord {
        let pair = |(u, v): HostEdge| [u, v];
        SystemRecord {
            h1_edges: self.h1_edges.iter().copied().map(pair).collect(),
            h2_edges: self.h2_edges.iter().copied().map(pair).collect(),
            roots: [self.roots.0.clone(), self.roots.1.clone()],
            generators: self.generators.iter().map(|&(e, f)| [pair(e), pair(f)]).collect(),
            tree: None,
        }
    }

    pub fn from_record(rec: &SystemRecord) -> Result<Self> {
        let unpair = |e: &[usize; 2]| (e[0], e[1]);
        CorrespondenceSystem::new(
            rec.h1_edges.iter().map(unpair).collect(),
            rec.h2_edges.iter().map(unpair).collect(),
            (rec.roots[0].clone(), rec.roots[1].clone()),
            rec.generators.iter().map(|[e, f]| (unpair(e), unpair(f))).collect(),
        )
    }
}

/// System JSON. `tree` optionally names the rooted tree the system was glued
/// from, so the balance inequality can be evaluated on fixtures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    pub h1_edges: Vec<[usize; 2]>,
    pub h2_edges: Vec<[usize; 2]>,
    pub roots: [Vec<usize>; 2],
    pub generators: Vec<[[usize; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeRecord>,
}

/// Glues `p` copy pairs rooted at `(X, Y)`. Generator `(j, l)` pairs the
/// images of tree edge `l` in the two copies of pair `j`.
pub fn glue(pairs: &[(LabelledCopy, LabelledCopy)], roots: (&[usize], &[usize])) -> Result<CorrespondenceSystem> {
    let first = pairs.first().ok_or_else(|| Error::Parameter("glue needs at least one pair".into()))?;
    let tree = first.0.source().clone();
    let mut h1 = Vec::new();
    let mut h2 = Vec::new();
    let mut generators = Vec::with_capacity(pairs.len() * tree.edge_count());
    for (j, (c1, c2)) in pairs.iter().enumerate() {
        if c1.source() != &tree || c2.source() != &tree {
            return Err(Error::Parameter(format!("pair {j} uses a different source tree")));
        }
        if c1.root_images() != roots.0 {
            return Err(Error::RootMismatch(format!("first copy of pair {j} is not rooted at X")));
        }
        if c2.root_images() != roots.1 {
            return Err(Error::RootMismatch(format!("second copy of pair {j} is not rooted at Y")));
        }
        if c1.vertices().any(|v| c2.embedding.contains(&v)) {
            return Err(Error::NotDisjoint(format!("pair {j}")));
        }
        for (e, f) in c1.host_edges().zip(c2.host_edges()) {
            h1.push(e);
            h2.push(f);
            generators.push((e, f));
        }
    }
    CorrespondenceSystem::new(h1, h2, (roots.0.to_vec(), roots.1.to_vec()), generators)
}

/// The constraint number `k`: support size minus the number of classes of the
/// relation generated by the generator pairs.
pub fn constraint_number(sys: &CorrespondenceSystem) -> usize {
    let (support, classes) = relation_classes(sys.generators());
    support - classes
}

fn relation_classes(generators: &[(HostEdge, HostEdge)]) -> (usize, usize) {
    let mut index: HashMap<HostEdge, usize> = HashMap::new();
    let mut sets = DisjointSets::new(0);
    let mut id = |e: HostEdge, sets: &mut DisjointSets| *index.entry(e).or_insert_with(|| sets.push());
    for &(e, f) in generators {
        let a = id(e, &mut sets);
        let b = id(f, &mut sets);
        sets.union(a, b);
    }
    (sets.len(), sets.classes())
}

/// One sampled system with the quantities of the balance inequality
/// `2k >= rho_T (v(H1 ∪ H2) - 2r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceTrial {
    pub p: usize,
    pub k: usize,
    pub union_vertices: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    pub trials: Vec<BalanceTrial>,
    pub violations: usize,
    /// Smallest `2k / (rho_T (v - 2r))` seen, as `(numerator, denominator)`.
    pub tightest: (u64, u64),
}

/// Checks the inequality on one system for the tree it was glued from.
pub fn balance_inequality_holds(t: &RootedTree, sys: &CorrespondenceSystem) -> Result<(bool, Ratio<u64>)> {
    let rho = density(t)?;
    let k = constraint_number(sys) as u64;
    let excess = (sys.union_vertex_count() - 2 * t.root_count()) as u64;
    let rhs = rho * excess;
    let lhs = Ratio::from_integer(2 * k);
    Ok((lhs >= rhs, lhs / rhs))
}

/// Samples `trials` glued systems of `p` pairs each and checks the balance
/// inequality exactly. The roots are `X = (0..r)`, `Y = (r..2r)`; unrooted
/// vertices are placed uniformly at random among host vertices `2r..host_size`,
/// and a pair whose two copies meet is redrawn.
pub fn check_balance_inequality(
    t: &RootedTree,
    p: usize,
    trials: usize,
    host_size: usize,
    seed: u64,
) -> Result<BalanceReport> {
    is_balanced(t)?.into_result(t)?;
    let tree = Arc::new(t.clone());
    let mut rng = stream_rng(seed, 0);
    let mut out = Vec::with_capacity(trials);
    let mut tightest: Option<Ratio<u64>> = None;
    for _ in 0..trials {
        let pairs = sample_pairs(&tree, p, host_size, &mut rng)?;
        let (x, y) = root_tuples(&tree);
        let sys = glue(&pairs, (&x, &y))?;
        let (holds, ratio) = balance_inequality_holds(&tree, &sys)?;
        tightest = Some(tightest.map_or(ratio, |r| r.min(ratio)));
        out.push(BalanceTrial { p, k: constraint_number(&sys), union_vertices: sys.union_vertex_count(), holds });
    }
    let tightest = tightest.unwrap_or(Ratio::from_integer(1));
    Ok(BalanceReport {
        violations: out.iter().filter(|t| !t.holds).count(),
        trials: out,
        tightest: (*tightest.numer(), *tightest.denom()),
    })
}

fn root_tuples(t: &RootedTree) -> (Vec<usize>, Vec<usize>) {
    let r = t.root_count();
    ((0..r).collect(), (r..2 * r).collect())
}

/// `p` random copy pairs rooted at the standard `(X, Y)`.
pub fn sample_pairs<R: Rng + ?Sized>(
    tree: &Arc<RootedTree>,
    p: usize,
    host_size: usize,
    rng: &mut R,
) -> Result<Vec<(LabelledCopy, LabelledCopy)>> {
    let r = tree.root_count();
    let a = tree.unrooted_count();
    if host_size < 2 * r + 2 * a {
        return Err(Error::Parameter(format!(
            "host of {host_size} vertices cannot hold two disjoint copies (needs {})",
            2 * r + 2 * a
        )));
    }
    let (x, y) = root_tuples(tree);
    let pool = host_size - 2 * r;
    let place = |roots: &[usize], chosen: &[usize]| -> Vec<usize> {
        let mut emb = vec![0; tree.vertex_count()];
        for (i, &rv) in tree.roots().iter().enumerate() {
            emb[rv] = roots[i];
        }
        for (v, &h) in tree.unrooted().zip(chosen) {
            emb[v] = 2 * r + h;
        }
        emb
    };
    let mut pairs = Vec::with_capacity(p);
    while pairs.len() < p {
        let s1 = sample(rng, pool, a).into_vec();
        let s2 = sample(rng, pool, a).into_vec();
        if s1.iter().any(|v| s2.contains(v)) {
            continue;
        }
        pairs
            .push((LabelledCopy::new(tree.clone(), place(&x, &s1))?, LabelledCopy::new(tree.clone(), place(&y, &s2))?));
    }
    Ok(pairs)
}

/// One extension step `(H1', H2') -> (H1, H2)` of a sampled chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionStep {
    pub k_before: usize,
    pub k_after: usize,
    pub new_edges_1: usize,
    pub new_edges_2: usize,
    pub holds: bool,
}

/// Grows `chains` random systems one pair at a time up to `max_p` pairs and
/// checks `k(H1,H2) >= k(H1',H2') + max{e(S1), e(S2)}` at every step, where
/// `S_i` are the vertices of the new copy absent from `H1' ∪ H2'` and
/// `e(S_i)` counts the new copy's edges meeting `S_i`.
pub fn check_extension_inequality(
    t: &RootedTree,
    chains: usize,
    max_p: usize,
    host_size: usize,
    seed: u64,
) -> Result<Vec<ExtensionStep>> {
    is_balanced(t)?.into_result(t)?;
    let tree = Arc::new(t.clone());
    let (x, y) = root_tuples(&tree);
    let mut rng = stream_rng(seed, 1);
    let mut steps = Vec::new();
    for _ in 0..chains {
        let pairs = sample_pairs(&tree, max_p, host_size, &mut rng)?;
        for p in 2..=max_p {
            let before = glue(&pairs[..p - 1], (&x, &y))?;
            let after = glue(&pairs[..p], (&x, &y))?;
            let mut old_vertices: BTreeSet<usize> = x.iter().chain(&y).copied().collect();
            for (c1, c2) in &pairs[..p - 1] {
                old_vertices.extend(c1.vertices());
                old_vertices.extend(c2.vertices());
            }
            let meets_new = |c: &LabelledCopy| {
                c.source()
                    .edges()
                    .iter()
                    .filter(|&&(u, v)| {
                        !old_vertices.contains(&c.embedding()[u]) || !old_vertices.contains(&c.embedding()[v])
                    })
                    .count()
            };
            let (c1, c2) = &pairs[p - 1];
            let (e1, e2) = (meets_new(c1), meets_new(c2));
            let (kb, ka) = (constraint_number(&before), constraint_number(&after));
            steps.push(ExtensionStep {
                k_before: kb,
                k_after: ka,
                new_edges_1: e1,
                new_edges_2: e2,
                holds: ka >= kb + e1.max(e2),
            });
        }
    }
    Ok(steps)
}
