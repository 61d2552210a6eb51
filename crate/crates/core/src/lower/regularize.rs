use serde::Serialize;

use super::BipartiteGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizeConfig {
    /// Target bound on `max degree / min degree`.
    pub delta_cap: f64,
    /// Target bound on `larger side / smaller side`.
    pub side_ratio: f64,
    /// Fewest vertices allowed on either side of the output.
    pub floor: usize,
    pub min_edges: usize,
    pub max_rounds: usize,
}

impl Default for RegularizeConfig {
    fn default() -> Self {
        RegularizeConfig { delta_cap: 4.0, side_ratio: 4.0, floor: 2, min_edges: 1, max_rounds: 64 }
    }
}

/// An induced subgraph with every degree in `[delta, ratio * delta]`.
#[derive(Debug, Clone)]
pub struct RegularizedGraph {
    pub graph: BipartiteGraph,
    /// Input index of each kept left vertex.
    pub left_ids: Vec<usize>,
    pub right_ids: Vec<usize>,
    /// Minimum degree.
    pub delta: usize,
    pub max_degree: usize,
    /// `max_degree / delta`.
    pub ratio: f64,
    pub rounds: usize,
}

impl RegularizedGraph {
    /// Size of the `A` side.
    pub fn m(&self) -> usize {
        self.left_ids.len()
    }

    pub fn transposed(&self) -> RegularizedGraph {
        RegularizedGraph {
            graph: self.graph.transposed(),
            left_ids: self.right_ids.clone(),
            right_ids: self.left_ids.clone(),
            ..*self
        }
    }
}

struct Active<'a> {
    g: &'a BipartiteGraph,
    left: Vec<bool>,
    right: Vec<bool>,
}

impl Active<'_> {
    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut dl = vec![0; self.left.len()];
        let mut dr = vec![0; self.right.len()];
        for &(l, r) in &self.g.edges {
            if self.left[l] && self.right[r] {
                dl[l] += 1;
                dr[r] += 1;
            }
        }
        (dl, dr)
    }

    fn counts(&self) -> (usize, usize) {
        (self.left.iter().filter(|&&a| a).count(), self.right.iter().filter(|&&a| a).count())
    }

    /// Removes vertices of degree below half the current average degree,
    /// repeating at that threshold until none is left.
    fn peel(&mut self) {
        let (dl, _) = self.degrees();
        let (nl, nr) = self.counts();
        let e: usize = dl.iter().sum();
        if nl + nr == 0 {
            return;
        }
        let threshold = e as f64 / (nl + nr) as f64;
        loop {
            let (dl, dr) = self.degrees();
            let mut changed = false;
            for (i, &d) in dl.iter().enumerate() {
                if self.left[i] && (d as f64) < threshold {
                    self.left[i] = false;
                    changed = true;
                }
            }
            for (j, &d) in dr.iter().enumerate() {
                if self.right[j] && (d as f64) < threshold {
                    self.right[j] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Keeps the dyadic degree bucket on each side whose pair spans the most edges.
    fn bucket(&mut self) {
        let (dl, dr) = self.degrees();
        let bucket = |d: usize| (usize::BITS - d.leading_zeros()) as usize;
        let nb = usize::BITS as usize + 1;
        let mut span = vec![0usize; nb * nb];
        for &(l, r) in &self.g.edges {
            if self.left[l] && self.right[r] {
                span[bucket(dl[l]) * nb + bucket(dr[r])] += 1;
            }
        }
        let best = (0..span.len()).max_by_key(|&k| (span[k], std::cmp::Reverse(k))).unwrap();
        let (bl, br) = (best / nb, best % nb);
        for (i, &d) in dl.iter().enumerate() {
            self.left[i] &= bucket(d) == bl;
        }
        for (j, &d) in dr.iter().enumerate() {
            self.right[j] &= bucket(d) == br;
        }
    }

    fn drop_isolated(&mut self) {
        let (dl, dr) = self.degrees();
        for (i, &d) in dl.iter().enumerate() {
            self.left[i] &= d > 0;
        }
        for (j, &d) in dr.iter().enumerate() {
            self.right[j] &= d > 0;
        }
    }
}

/// Peels low-degree vertices and restricts to dyadic degree buckets until
/// the degree band and side balance hold.
pub fn regularize(g: &BipartiteGraph, cfg: &RegularizeConfig) -> Result<RegularizedGraph> {
    if g.edge_count() < cfg.min_edges.max(1) {
        return Err(Error::DegenerateInput(format!(
            "{} edges, need at least {}",
            g.edge_count(),
            cfg.min_edges.max(1)
        )));
    }
    let mut act = Active { g, left: vec![true; g.left_count()], right: vec![true; g.right_count()] };
    act.drop_isolated();
    for round in 0..cfg.max_rounds {
        let (nl, nr) = act.counts();
        if nl < cfg.floor || nr < cfg.floor {
            return Err(Error::DegenerateOutput(format!(
                "{nl} + {nr} vertices survive, floor is {} per side",
                cfg.floor
            )));
        }
        let (dl, dr) = act.degrees();
        let live = dl.iter().zip(&act.left).chain(dr.iter().zip(&act.right)).filter(|(_, &a)| a).map(|(&d, _)| d);
        let (lo, hi) = live.fold((usize::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
        let balanced = (nl.max(nr) as f64) <= cfg.side_ratio * nl.min(nr) as f64;
        if lo > 0 && (hi as f64) <= cfg.delta_cap * lo as f64 && balanced {
            return Ok(extract(&act, lo, hi, round));
        }
        let before = (act.left.clone(), act.right.clone());
        act.peel();
        act.bucket();
        act.drop_isolated();
        if (act.left.clone(), act.right.clone()) == before {
            return Err(Error::DegenerateOutput(format!("no progress: {nl} + {nr} vertices, degrees in [{lo}, {hi}]")));
        }
    }
    Err(Error::DegenerateOutput(format!("no fixpoint after {} rounds", cfg.max_rounds)))
}

fn extract(act: &Active, lo: usize, hi: usize, rounds: usize) -> RegularizedGraph {
    let g = act.g;
    let left_ids: Vec<usize> = (0..g.left_count()).filter(|&i| act.left[i]).collect();
    let right_ids: Vec<usize> = (0..g.right_count()).filter(|&j| act.right[j]).collect();
    let mut lpos = vec![usize::MAX; g.left_count()];
    let mut rpos = vec![usize::MAX; g.right_count()];
    for (k, &i) in left_ids.iter().enumerate() {
        lpos[i] = k;
    }
    for (k, &j) in right_ids.iter().enumerate() {
        rpos[j] = k;
    }
    let edges =
        g.edges.iter().filter(|&&(l, r)| act.left[l] && act.right[r]).map(|&(l, r)| (lpos[l], rpos[r])).collect();
    let graph = BipartiteGraph::new(
        left_ids.iter().map(|&i| g.left_labels[i]).collect(),
        right_ids.iter().map(|&j| g.right_labels[j]).collect(),
        edges,
    );
    RegularizedGraph { graph, left_ids, right_ids, delta: lo, max_degree: hi, ratio: hi as f64 / lo as f64, rounds }
}
