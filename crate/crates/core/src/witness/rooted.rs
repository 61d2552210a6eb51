//! Rooted collections `C(X, Y)` and power-freeness certificates.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

use super::engine::Engine;
use super::{find_pair, EmbeddedPair, Search};
use crate::colouring::{ColourIndex, EdgeColouring};
use crate::error::{Error, Result};
use crate::trees::{power, RootedTree};

/// Largest number of ordered root pairs `(X, Y)` scanned exhaustively.
pub const DEFAULT_ROOT_PAIR_LIMIT: u128 = 50_000_000;

/// Colour-isomorphic vertex-disjoint pairs of copies of a rooted tree, the
/// first rooted at `X`, the second at `Y`.
#[derive(Debug, Clone)]
pub struct RootedCollection {
    pub roots: (Vec<usize>, Vec<usize>),
    pub members: Vec<EmbeddedPair>,
    /// Enumeration stopped at the cap.
    pub truncated: bool,
}

fn validate_roots(c: &EdgeColouring, t: &RootedTree, x: &[usize], y: &[usize]) -> Result<()> {
    let r = t.root_count();
    if x.len() != r || y.len() != r {
        return Err(Error::RootMismatch(format!("tree has {r} roots, got {} and {}", x.len(), y.len())));
    }
    let mut seen = vec![false; c.n()];
    for &v in x.iter().chain(y) {
        if v >= c.n() {
            return Err(Error::RootMismatch(format!("root {v} outside [0, {})", c.n())));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotDisjoint(format!("root vertex {v} repeated")));
        }
    }
    Ok(())
}

/// Enumerates `C(X, Y)` up to `cap` members.
pub fn rooted_collection(
    c: &EdgeColouring,
    t: &RootedTree,
    x: &[usize],
    y: &[usize],
    cap: usize,
) -> Result<RootedCollection> {
    validate_roots(c, t, x, y)?;
    let pattern = t.as_graph();
    let index = c.index();
    let engine = Engine::new(c, &index, &pattern, t.roots(), false);
    let mut members = Vec::new();
    let mut truncated = false;
    engine.run(x, y, u64::MAX, &mut |m1, m2| {
        if members.len() == cap {
            truncated = true;
            return ControlFlow::Break(());
        }
        members.push(EmbeddedPair { pattern: pattern.clone(), map1: m1.to_vec(), map2: m2.to_vec() });
        ControlFlow::Continue(())
    });
    Ok(RootedCollection { roots: (x.to_vec(), y.to_vec()), members, truncated })
}

/// `min(|C(X, Y)|, cap)`.
pub fn count_rooted(c: &EdgeColouring, t: &RootedTree, x: &[usize], y: &[usize], cap: usize) -> Result<usize> {
    validate_roots(c, t, x, y)?;
    let pattern = t.as_graph();
    let index = c.index();
    let engine = Engine::new(c, &index, &pattern, t.roots(), false);
    Ok(count_with(&engine, x, y, cap))
}

fn count_with(engine: &Engine, x: &[usize], y: &[usize], cap: usize) -> usize {
    let mut count = 0;
    engine.run(x, y, u64::MAX, &mut |_, _| {
        count += 1;
        if count >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count
}

/// Largest `|C(X, Y)|` over all pointwise-disjoint root tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxCollection {
    pub max: usize,
    pub argmax: Option<(Vec<usize>, Vec<usize>)>,
    /// Some count reached the cap, so `max` is a lower bound.
    pub truncated: bool,
    /// Unordered root pairs scanned.
    pub root_pairs: u64,
}

fn ordered_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, r, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, r, &mut Vec::with_capacity(r), &mut out);
    out
}

fn falling(n: usize, k: usize) -> u128 {
    (0..k).map(|i| n.saturating_sub(i) as u128).product()
}

/// Scans every pair of disjoint root tuples. Counts stop at `cap`.
///
/// Uses `|C(X, Y)| = |C(Y, X)|` to visit each unordered pair once.
pub fn max_rooted_collection(c: &EdgeColouring, t: &RootedTree, cap: usize, pair_limit: u128) -> Result<MaxCollection> {
    let r = t.root_count();
    let n = c.n();
    let total = falling(n, 2 * r);
    if total > pair_limit {
        return Err(Error::Size(format!("{total} ordered root pairs on n = {n} exceeds the limit {pair_limit}")));
    }
    let pattern = t.as_graph();
    let index = ColourIndex::new(c);
    let xs = ordered_tuples(n, r);
    let per_x: Vec<(usize, Option<super::MapPair>, bool, u64)> = xs
        .par_iter()
        .map(|x| {
            let engine = Engine::new(c, &index, &pattern, t.roots(), false);
            let mut best = (0, None, false, 0u64);
            let mut y = Vec::with_capacity(r);
            scan_y(n, r, x, &mut y, &mut |y| {
                if y <= x {
                    return;
                }
                best.3 += 1;
                let k = count_with(&engine, x, y, cap);
                if k >= cap {
                    best.2 = true;
                }
                if k > best.0 || (best.1.is_none() && k == best.0) {
                    best.0 = k;
                    best.1 = Some((x.clone(), y.to_vec()));
                }
            });
            best
        })
        .collect();
    let mut out = MaxCollection { max: 0, argmax: None, truncated: false, root_pairs: 0 };
    for (k, arg, trunc, pairs) in per_x {
        out.truncated |= trunc;
        out.root_pairs += pairs;
        if arg.is_some() && (k > out.max || out.argmax.is_none()) {
            out.max = k;
            out.argmax = arg;
        }
    }
    Ok(out)
}

fn scan_y(n: usize, r: usize, x: &[usize], y: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if y.len() == r {
        f(y);
        return;
    }
    for v in 0..n {
        if !x.contains(&v) && !y.contains(&v) {
            y.push(v);
            scan_y(n, r, x, y, f);
            y.pop();
        }
    }
}

/// The rooted half of a power-freeness certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerCertificate {
    pub k0: usize,
    /// `max |C(X, Y)| < k0` over all disjoint root tuples.
    pub holds: bool,
    /// `max |C(X, Y)|`, capped at `k0`.
    pub max: usize,
    pub argmax: Option<(Vec<usize>, Vec<usize>)>,
}

/// Whether every `|C(X, Y)|` is below `k0`.
///
/// A colour-isomorphic disjoint pair of `T^{k0}` copies rooted at `(X, Y)`
/// restricts to `k0` distinct members of `C(X, Y)`, so `holds` rules such
/// pairs out for every root placement.
pub fn certify_power_free(c: &EdgeColouring, t: &RootedTree, k0: usize, pair_limit: u128) -> Result<PowerCertificate> {
    if k0 == 0 {
        return Err(Error::Parameter("k0 must be positive".into()));
    }
    let m = max_rooted_collection(c, t, k0, pair_limit)?;
    Ok(PowerCertificate { k0, holds: m.max < k0, max: m.max, argmax: m.argmax })
}

/// Direct search for a colour-isomorphic disjoint pair of `T^{k0}` copies.
pub fn power_pair_search(c: &EdgeColouring, t: &RootedTree, k0: usize, budget: u64) -> Result<Search<EmbeddedPair>> {
    let p = power(t, k0)?;
    find_pair(c, &p.graph, budget)
}
