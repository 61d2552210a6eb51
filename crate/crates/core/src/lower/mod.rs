//! Auxiliary graph of monochromatic 2-matchings and the clean `K_{s,t}^sub`
//! finder built on it.

mod aux;
mod codegree;
mod pipeline;
mod regularize;

use std::collections::HashSet;

pub use aux::{
    build_aux_graph, check_shadow_disjointness, check_shadow_disjointness_exhaustive, count_mono_2matchings,
    expected_aux_edges, AuxGraph, AuxVertex, ShadowReport, ShadowViolation, Side,
};
pub use codegree::{
    codegree_colouring, find_clean_subdivision, find_red_kst, greedy_clean_embed, BlueSummary, CleanSubdivision,
    CodegreeColouring,
};
pub use pipeline::{find_clean_kst_sub, min_pipeline_n, Diagnostics, Outcome, PipelineConfig, RegularizedSummary};
pub use regularize::{regularize, RegularizeConfig, RegularizedGraph};

/// Bipartite graph whose vertices are labelled by pairs of `K_n` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left_labels: Vec<[usize; 2]>,
    pub right_labels: Vec<[usize; 2]>,
    /// `(left, right)`, sorted and distinct.
    pub edges: Vec<(usize, usize)>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left_labels: Vec<[usize; 2]>, right_labels: Vec<[usize; 2]>, edges: Vec<(usize, usize)>) -> Self {
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        let mut left_adj = vec![Vec::new(); left_labels.len()];
        let mut right_adj = vec![Vec::new(); right_labels.len()];
        for &(l, r) in &edges {
            left_adj[l].push(r);
            right_adj[r].push(l);
        }
        for adj in right_adj.iter_mut() {
            adj.sort_unstable();
        }
        BipartiteGraph { left_labels, right_labels, edges, left_adj, right_adj }
    }

    /// Unlabelled graph: each vertex gets its own two private label entries.
    pub fn unlabelled(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Self {
        let ll = (0..left).map(|i| [2 * i, 2 * i + 1]).collect();
        let rl = (0..right).map(|j| [2 * (left + j), 2 * (left + j) + 1]).collect();
        BipartiteGraph::new(ll, rl, edges)
    }

    pub fn left_count(&self) -> usize {
        self.left_labels.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn left_neighbours(&self, l: usize) -> &[usize] {
        &self.left_adj[l]
    }

    pub fn right_neighbours(&self, r: usize) -> &[usize] {
        &self.right_adj[r]
    }

    /// Sides swapped.
    pub fn transposed(&self) -> Self {
        BipartiteGraph::new(
            self.right_labels.clone(),
            self.left_labels.clone(),
            self.edges.iter().map(|&(l, r)| (r, l)).collect(),
        )
    }

    /// Whether the labels of the given vertices are pairwise disjoint.
    pub fn is_clean(&self, left: &[usize], right: &[usize]) -> bool {
        let mut seen = HashSet::new();
        left.iter()
            .map(|&l| self.left_labels[l])
            .chain(right.iter().map(|&r| self.right_labels[r]))
            .flatten()
            .all(|v| seen.insert(v))
    }
}
