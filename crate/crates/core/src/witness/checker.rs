//! Stand-alone verification of a claimed colour-isomorphic pair.

use std::collections::HashSet;

use serde::Serialize;

use crate::colouring::{Colour, EdgeColouring};
use crate::graph::Graph;

/// Why a claimed pair was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckFailure {
    WrongLength { expected: usize, map1: usize, map2: usize },
    OutOfRange { vertex: usize, n: usize },
    NotInjective { map: u8, vertex: usize },
    SharedVertex { vertex: usize },
    ColourMismatch { edge: (usize, usize), colour1: Colour, colour2: Colour },
}

/// Re-checks lengths, range, injectivity, disjointness and edgewise colour
/// equality directly against the colouring.
pub fn check_pair(c: &EdgeColouring, pattern: &Graph, map1: &[usize], map2: &[usize]) -> Result<(), CheckFailure> {
    let pv = pattern.vertex_count();
    if map1.len() != pv || map2.len() != pv {
        return Err(CheckFailure::WrongLength { expected: pv, map1: map1.len(), map2: map2.len() });
    }
    for &x in map1.iter().chain(map2) {
        if x >= c.n() {
            return Err(CheckFailure::OutOfRange { vertex: x, n: c.n() });
        }
    }
    let mut img1 = HashSet::new();
    for &x in map1 {
        if !img1.insert(x) {
            return Err(CheckFailure::NotInjective { map: 1, vertex: x });
        }
    }
    let mut img2 = HashSet::new();
    for &y in map2 {
        if !img2.insert(y) {
            return Err(CheckFailure::NotInjective { map: 2, vertex: y });
        }
    }
    if let Some(&v) = img1.intersection(&img2).min() {
        return Err(CheckFailure::SharedVertex { vertex: v });
    }
    for &(u, v) in pattern.edges() {
        let c1 = c.colour(map1[u], map1[v]);
        let c2 = c.colour(map2[u], map2[v]);
        if c1 != c2 {
            return Err(CheckFailure::ColourMismatch { edge: (u, v), colour1: c1, colour2: c2 });
        }
    }
    Ok(())
}
