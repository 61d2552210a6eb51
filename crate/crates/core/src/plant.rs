//! Colourings with a known colour-isomorphic pair, for recovery tests.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::colouring::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{permutation, stream_rng};
use crate::trees::subdivision_kst;
use crate::witness::EmbeddedPair;

#[derive(Debug, Clone)]
pub struct Planted {
    pub colouring: EdgeColouring,
    pub pair: EmbeddedPair,
    /// An ordering whose quarter partition lines the pair up with the
    /// auxiliary graph, when one was requested.
    pub ordering: Option<Vec<usize>>,
}

/// Rainbow background, then each edge of the second copy takes the colour
/// of the matching edge of the first. The result stays proper.
fn paint(n: usize, pattern: &Graph, map1: &[usize], map2: &[usize]) -> EdgeColouring {
    let mut c = EdgeColouring::rainbow(n);
    for &(u, v) in pattern.edges() {
        let col = c.colour(map1[u], map1[v]);
        c.set(map2[u], map2[v], col);
    }
    c
}

/// Merges random pairs of colour classes whose union is still a matching,
/// never touching classes used by the planted pair. Returns merges done.
fn merge_classes(c: &mut EdgeColouring, protected: &[Colour], merges: usize, rng: &mut impl Rng) -> usize {
    let mut classes: BTreeMap<Colour, Vec<(usize, usize)>> = c.classes();
    classes.retain(|col, _| !protected.contains(col));
    let mut done = 0;
    let mut attempts = 0;
    while done < merges && attempts < 200 * merges.max(1) && classes.len() >= 2 {
        attempts += 1;
        let keys: Vec<Colour> = classes.keys().copied().collect();
        let (a, b) = (keys[rng.gen_range(0..keys.len())], keys[rng.gen_range(0..keys.len())]);
        if a == b {
            continue;
        }
        let touches = |e: &(usize, usize), f: &(usize, usize)| e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
        if classes[&a].iter().any(|e| classes[&b].iter().any(|f| touches(e, f))) {
            continue;
        }
        let moved = classes.remove(&b).unwrap();
        for &(u, v) in &moved {
            c.set(u, v, a);
        }
        classes.get_mut(&a).unwrap().extend(moved);
        done += 1;
    }
    done
}

/// Plants a colour-isomorphic pair of copies of `h` at random disjoint
/// positions in a proper colouring of `K_n`.
pub fn plant_pair(n: usize, h: &Graph, seed: u64, merges: usize) -> Result<Planted> {
    let pv = h.vertex_count();
    if 2 * pv > n {
        return Err(Error::Size(format!("two disjoint copies of {pv} vertices need n >= {}", 2 * pv)));
    }
    let mut rng = stream_rng(seed, 0);
    let perm = permutation(n, &mut rng);
    let (map1, map2) = (perm[..pv].to_vec(), perm[pv..2 * pv].to_vec());
    let mut c = paint(n, h, &map1, &map2);
    let protected: Vec<Colour> = h.edges().iter().map(|&(u, v)| c.colour(map1[u], map1[v])).collect();
    merge_classes(&mut c, &protected, merges, &mut rng);
    Ok(Planted { colouring: c, pair: EmbeddedPair { pattern: h.clone(), map1, map2 }, ordering: None })
}

/// Plants a colour-isomorphic pair of `K_{s,t}^sub` copies and returns an
/// ordering placing branch vertices of the copies in `X1`, `X2` and the
/// subdividing vertices in `Y1`, `Y2`.
pub fn plant_kst_sub(n: usize, s: usize, t: usize, seed: u64, merges: usize) -> Result<Planted> {
    let h = subdivision_kst(s, t)?;
    let m = n / 4;
    if m < (s + t).max(s * t) {
        return Err(Error::Size(format!(
            "quarter size {m} cannot hold {} branch and {} subdividing vertices",
            s + t,
            s * t
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let ordering = permutation(n, &mut rng);
    let part = |k: usize| &ordering[k * m..(k + 1) * m];
    let branch = s + t;
    let mut map1: Vec<usize> = part(0)[..branch].to_vec();
    map1.extend_from_slice(&part(2)[..s * t]);
    let mut map2: Vec<usize> = part(1)[..branch].to_vec();
    map2.extend_from_slice(&part(3)[..s * t]);
    let mut c = paint(n, &h, &map1, &map2);
    let protected: Vec<Colour> = h.edges().iter().map(|&(u, v)| c.colour(map1[u], map1[v])).collect();
    merge_classes(&mut c, &protected, merges, &mut rng);
    Ok(Planted { colouring: c, pair: EmbeddedPair { pattern: h, map1, map2 }, ordering: Some(ordering) })
}

/// A random colouring of `K_n` from `palette` colours with a monochromatic
/// clique on `clique` random vertices. Usually improper.
pub fn monochromatic_plant(n: usize, palette: u64, clique: usize, seed: u64) -> Result<EdgeColouring> {
    if clique > n || palette == 0 {
        return Err(Error::Parameter(format!("clique {clique} on n = {n} with palette {palette}")));
    }
    let mut rng = stream_rng(seed, 0);
    let mut c = EdgeColouring::from_fn(n, |_, _| rng.gen_range(0..palette));
    let mut verts: Vec<usize> = (0..n).collect();
    verts.shuffle(&mut rng);
    let col = rng.gen_range(0..palette);
    for (i, &u) in verts[..clique].iter().enumerate() {
        for &v in &verts[i + 1..clique] {
            c.set(u, v, col);
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{boundedness, is_proper};

    #[test]
    fn planted_pair_is_valid_and_proper() {
        for seed in 0..10 {
            let p = plant_pair(16, &Graph::cycle(4).unwrap(), seed, 20).unwrap();
            assert!(is_proper(&p.colouring));
            assert!(p.pair.check(&p.colouring).is_ok());
        }
    }

    #[test]
    fn planted_subdivision_lines_up_with_ordering() {
        let p = plant_kst_sub(24, 2, 2, 3, 10).unwrap();
        assert!(is_proper(&p.colouring));
        assert!(p.pair.check(&p.colouring).is_ok());
        let ord = p.ordering.unwrap();
        let m = 6;
        assert!(p.pair.map1[..4].iter().all(|v| ord[..m].contains(v)));
        assert!(p.pair.map2[4..].iter().all(|v| ord[3 * m..4 * m].contains(v)));
        assert!(plant_kst_sub(12, 2, 2, 0, 0).is_err());
    }

    #[test]
    fn monochromatic_clique_is_there() {
        let c = monochromatic_plant(10, 30, 4, 1).unwrap();
        assert!(boundedness(&c) >= 3);
    }
}
