use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::BipartiteGraph;
use crate::colouring::{ensure_proper, EdgeColouring};
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Sum over colour classes of `C(size, 2)`.
pub fn count_mono_2matchings(c: &EdgeColouring) -> Result<u64> {
    ensure_proper(c)?;
    Ok(c.classes()
        .values()
        .map(|cls| {
            let k = cls.len() as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum())
}

/// Expected edge count of the auxiliary graph over a uniformly random ordering.
///
/// Each unordered 2-matching has 8 labelled placements `(x1, y1, x2, y2)`,
/// and each lands in `X1 x Y1 x X2 x Y2` with probability `m^4 / (n)_4`.
pub fn expected_aux_edges(c: &EdgeColouring) -> Result<f64> {
    let n = c.n();
    if n < 8 {
        return Err(Error::Size(format!("auxiliary graph needs n >= 8, got {n}")));
    }
    let m = (n / 4) as f64;
    let falling = (n * (n - 1) * (n - 2) * (n - 3)) as f64;
    Ok(8.0 * count_mono_2matchings(c)? as f64 * m.powi(4) / falling)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AuxVertex {
    pub side: Side,
    pub index: usize,
}

/// Bipartite graph on `(X1 x X2) + (Y1 x Y2)` with `(x1, x2) ~ (y1, y2)`
/// iff `colour(x1, y1) == colour(x2, y2)`.
#[derive(Debug, Clone)]
pub struct AuxGraph {
    /// `X1, X2, Y1, Y2`, each of size `m = n / 4`.
    pub parts: [Vec<usize>; 4],
    pub graph: BipartiteGraph,
}

impl AuxGraph {
    pub fn m(&self) -> usize {
        self.parts[0].len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Underlying `K_n` vertices of an auxiliary vertex.
    pub fn pair(&self, v: AuxVertex) -> [usize; 2] {
        match v.side {
            Side::Left => self.graph.left_labels[v.index],
            Side::Right => self.graph.right_labels[v.index],
        }
    }

    pub fn neighbours(&self, v: AuxVertex) -> impl Iterator<Item = AuxVertex> + '_ {
        let (side, list) = match v.side {
            Side::Left => (Side::Right, self.graph.left_neighbours(v.index)),
            Side::Right => (Side::Left, self.graph.right_neighbours(v.index)),
        };
        list.iter().map(move |&index| AuxVertex { side, index })
    }

    pub fn vertices(&self) -> impl Iterator<Item = AuxVertex> + '_ {
        (0..self.graph.left_count())
            .map(|index| AuxVertex { side: Side::Left, index })
            .chain((0..self.graph.right_count()).map(|index| AuxVertex { side: Side::Right, index }))
    }
}

/// Builds the auxiliary graph for the quarter partition read off `ordering`:
/// its first `m` entries are `X1`, the next `m` are `X2`, then `Y1`, `Y2`.
/// Leftover vertices are dropped.
///
/// Improper colourings are accepted so that shadow violations can be shown.
pub fn build_aux_graph(c: &EdgeColouring, ordering: &[usize]) -> Result<AuxGraph> {
    let n = c.n();
    if n < 8 {
        return Err(Error::Size(format!("auxiliary graph needs n >= 8, got {n}")));
    }
    if ordering.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: ordering.len() });
    }
    let mut seen = vec![false; n];
    for &v in ordering {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::Parameter("ordering is not a permutation of 0..n".into()));
        }
    }
    let m = n / 4;
    let parts: [Vec<usize>; 4] = std::array::from_fn(|k| ordering[k * m..(k + 1) * m].to_vec());
    let mut y2_pos = vec![usize::MAX; n];
    for (j, &y) in parts[3].iter().enumerate() {
        y2_pos[y] = j;
    }
    let index = c.index();
    let pair_labels = |a: &[usize], b: &[usize]| -> Vec<[usize; 2]> {
        a.iter().flat_map(|&u| b.iter().map(move |&v| [u, v])).collect()
    };
    let edges: Vec<(usize, usize)> = (0..m * m)
        .into_par_iter()
        .flat_map_iter(|l| {
            let (x1, x2) = (parts[0][l / m], parts[1][l % m]);
            let mut out = Vec::new();
            for (j1, &y1) in parts[2].iter().enumerate() {
                for &y2 in index.neighbours_with(x2, c.colour(x1, y1)) {
                    let j2 = y2_pos[y2];
                    if j2 != usize::MAX {
                        out.push((l, j1 * m + j2));
                    }
                }
            }
            out
        })
        .collect();
    let graph = BipartiteGraph::new(pair_labels(&parts[0], &parts[1]), pair_labels(&parts[2], &parts[3]), edges);
    Ok(AuxGraph { parts, graph })
}

/// Two neighbours of one auxiliary vertex that share an underlying vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowViolation {
    pub centre: AuxVertex,
    pub first: AuxVertex,
    pub second: AuxVertex,
    pub shared: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub checked: u64,
    pub violations: Vec<ShadowViolation>,
}

fn triple_violation(f: &AuxGraph, e: AuxVertex, a: AuxVertex, b: AuxVertex) -> Option<ShadowViolation> {
    let (pe, pa, pb) = (f.pair(e), f.pair(a), f.pair(b));
    let shared = pa.iter().find(|v| pb.contains(v) || pe.contains(v)).or_else(|| pb.iter().find(|v| pe.contains(v)))?;
    Some(ShadowViolation { centre: e, first: a, second: b, shared: *shared })
}

/// Checks every triple `(e, f, f')` with `f != f'` both adjacent to `e`.
pub fn check_shadow_disjointness_exhaustive(f: &AuxGraph) -> ShadowReport {
    let mut report = ShadowReport { checked: 0, violations: Vec::new() };
    for e in f.vertices() {
        let nb: Vec<AuxVertex> = f.neighbours(e).collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                report.checked += 1;
                if let Some(v) = triple_violation(f, e, nb[i], nb[j]) {
                    report.violations.push(v);
                }
            }
        }
    }
    report
}

/// Checks `samples` random triples `(e, f, f')`, `e` uniform among vertices
/// of degree at least 2.
pub fn check_shadow_disjointness(f: &AuxGraph, samples: u64, seed: u64) -> ShadowReport {
    let centres: Vec<AuxVertex> = f.vertices().filter(|&v| f.neighbours(v).nth(1).is_some()).collect();
    let mut report = ShadowReport { checked: 0, violations: Vec::new() };
    if centres.is_empty() {
        return report;
    }
    let mut rng = stream_rng(seed, 0);
    for _ in 0..samples {
        let e = centres[rng.gen_range(0..centres.len())];
        let nb: Vec<AuxVertex> = f.neighbours(e).collect();
        let i = rng.gen_range(0..nb.len());
        let mut j = rng.gen_range(0..nb.len() - 1);
        if j >= i {
            j += 1;
        }
        report.checked += 1;
        if let Some(v) = triple_violation(f, e, nb[i], nb[j]) {
            report.violations.push(v);
        }
    }
    report
}
