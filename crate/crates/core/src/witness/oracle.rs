//! Exact `f_2(n, h)` for very small `n`.

use super::find_pair;
use crate::colouring::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest `n` accepted by [`f2_exact`].
pub const ORACLE_MAX_N: usize = 6;

/// Fewest colours in a proper colouring of `K_n` with no colour-isomorphic
/// vertex-disjoint pair of copies of `h`.
///
/// Branch and bound over partitions of `E(K_n)` into matchings, listed up
/// to colour relabelling.
pub fn f2_exact(n: usize, h: &Graph) -> Result<usize> {
    if !(2..=ORACLE_MAX_N).contains(&n) {
        return Err(Error::Size(format!("exact oracle needs 2 <= n <= {ORACLE_MAX_N}, got {n}")));
    }
    let chromatic_index = if n.is_multiple_of(2) { n - 1 } else { n };
    if 2 * h.vertex_count() > n {
        return Ok(chromatic_index);
    }
    if h.edge_count() == 0 {
        return Err(Error::DegenerateInput(
            "an edgeless pattern has a colour-isomorphic pair under every colouring".into(),
        ));
    }
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = edges.len();
    let sentinel = |e: usize| (m + e) as Colour;
    let mut bb = BranchAndBound {
        h,
        edges: &edges,
        colouring: EdgeColouring::from_fn(n, |u, v| {
            let e = edges.iter().position(|&x| x == (u, v)).unwrap();
            sentinel(e)
        }),
        block_vertices: Vec::new(),
        best: m,
        floor: chromatic_index,
    };
    bb.branch(0)?;
    Ok(bb.best)
}

struct BranchAndBound<'a> {
    h: &'a Graph,
    edges: &'a [(usize, usize)],
    colouring: EdgeColouring,
    // vertex bitmask per colour block
    block_vertices: Vec<u32>,
    best: usize,
    floor: usize,
}

impl BranchAndBound<'_> {
    fn done(&self) -> bool {
        self.best == self.floor
    }

    fn branch(&mut self, e: usize) -> Result<()> {
        if e == self.edges.len() {
            self.best = self.best.min(self.block_vertices.len());
            return Ok(());
        }
        let (u, v) = self.edges[e];
        let mask = (1u32 << u) | (1u32 << v);
        let previous = self.colouring.colour(u, v);
        for j in 0..self.block_vertices.len() {
            if self.done() {
                return Ok(());
            }
            if self.block_vertices[j] & mask != 0 {
                continue;
            }
            self.colouring.set(u, v, j as Colour);
            if !find_pair(&self.colouring, self.h, u64::MAX)?.is_found() {
                self.block_vertices[j] |= mask;
                self.branch(e + 1)?;
                self.block_vertices[j] &= !mask;
            }
            self.colouring.set(u, v, previous);
        }
        if !self.done() && self.block_vertices.len() + 1 < self.best {
            let j = self.block_vertices.len();
            self.block_vertices.push(mask);
            self.colouring.set(u, v, j as Colour);
            self.branch(e + 1)?;
            self.colouring.set(u, v, previous);
            self.block_vertices.pop();
        }
        Ok(())
    }
}
