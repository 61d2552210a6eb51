//! Edge colourings of complete graphs.

mod construct;
mod io;
mod vizing;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

pub use construct::{
    construct_random_colouring, decode_colour, default_degree, encode_colour, phi_embed, ConstructionParams,
    RandomColouring,
};
pub use io::{read_csv, read_csv_path, write_csv, write_csv_path};
pub use vizing::{misra_gries, vizing_properize, Properized};

/// Colour identifier.
pub type Colour = u64;

const NO_COLOUR: Colour = Colour::MAX;

/// A colour for every edge of `K_n` on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColouring {
    n: usize,
    // full symmetric matrix, diagonal unused
    colours: Vec<Colour>,
}

impl EdgeColouring {
    /// Colours `{u, v}` (with `u < v`) by `f(u, v)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Colour) -> Self {
        let mut colours = vec![NO_COLOUR; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let c = f(u, v);
                colours[u * n + v] = c;
                colours[v * n + u] = c;
            }
        }
        EdgeColouring { n, colours }
    }

    /// Every edge its own colour.
    pub fn rainbow(n: usize) -> Self {
        let mut next = 0;
        EdgeColouring::from_fn(n, |_, _| {
            next += 1;
            next - 1
        })
    }

    /// The round-robin proper colouring: `n - 1` colours (a 1-factorization)
    /// for even `n`, `n` colours for odd `n`.
    pub fn round_robin(n: usize) -> Self {
        if n.is_multiple_of(2) && n > 0 {
            let m = (n - 1) as u64;
            EdgeColouring::from_fn(n, |u, v| if v == n - 1 { (2 * u as u64) % m } else { (u + v) as u64 % m })
        } else {
            EdgeColouring::from_fn(n, |u, v| ((u + v) % n.max(1)) as Colour)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn colour(&self, u: usize, v: usize) -> Colour {
        debug_assert!(u != v);
        self.colours[u * self.n + v]
    }

    /// Recolours `{u, v}`.
    pub fn set(&mut self, u: usize, v: usize, c: Colour) {
        assert!(u != v && c != NO_COLOUR);
        self.colours[u * self.n + v] = c;
        self.colours[v * self.n + u] = c;
    }

    /// `(u, v, colour)` for every edge, `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).map(move |v| (u, v, self.colour(u, v))))
    }

    pub fn palette(&self) -> BTreeSet<Colour> {
        self.edges().map(|(_, _, c)| c).collect()
    }

    /// Edges of each colour class.
    pub fn classes(&self) -> BTreeMap<Colour, Vec<(usize, usize)>> {
        let mut out: BTreeMap<Colour, Vec<(usize, usize)>> = BTreeMap::new();
        for (u, v, c) in self.edges() {
            out.entry(c).or_default().push((u, v));
        }
        out
    }

    pub fn index(&self) -> ColourIndex {
        ColourIndex::new(self)
    }
}

/// For each vertex, its neighbours grouped by edge colour.
#[derive(Debug, Clone)]
pub struct ColourIndex {
    per_vertex: Vec<HashMap<Colour, Vec<usize>>>,
}

impl ColourIndex {
    pub fn new(c: &EdgeColouring) -> Self {
        let mut per_vertex: Vec<HashMap<Colour, Vec<usize>>> = vec![HashMap::new(); c.n()];
        for (u, v, col) in c.edges() {
            per_vertex[u].entry(col).or_default().push(v);
            per_vertex[v].entry(col).or_default().push(u);
        }
        ColourIndex { per_vertex }
    }

    /// Neighbours `w` of `v` with `colour(v, w) == c`.
    #[inline]
    pub fn neighbours_with(&self, v: usize, c: Colour) -> &[usize] {
        self.per_vertex[v].get(&c).map_or(&[], Vec::as_slice)
    }
}

/// Two same-coloured edges meeting at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProperViolation {
    pub vertex: usize,
    pub colour: Colour,
    pub a: usize,
    pub b: usize,
}

impl From<ProperViolation> for crate::error::Error {
    fn from(v: ProperViolation) -> Self {
        crate::error::Error::ImproperColouring { vertex: v.vertex, colour: v.colour, a: v.a, b: v.b }
    }
}

/// The first vertex (lowest index) with two equal incident colours.
pub fn first_violation(c: &EdgeColouring) -> Option<ProperViolation> {
    for v in 0..c.n() {
        let mut seen: HashMap<Colour, usize> = HashMap::with_capacity(c.n());
        for w in (0..c.n()).filter(|&w| w != v) {
            let col = c.colour(v, w);
            if let Some(&prev) = seen.get(&col) {
                return Some(ProperViolation { vertex: v, colour: col, a: prev, b: w });
            }
            seen.insert(col, w);
        }
    }
    None
}

pub fn is_proper(c: &EdgeColouring) -> bool {
    first_violation(c).is_none()
}

pub fn ensure_proper(c: &EdgeColouring) -> crate::error::Result<()> {
    match first_violation(c) {
        Some(v) => Err(v.into()),
        None => Ok(()),
    }
}

/// The least `C` such that every colour class has maximum degree at most `C`.
pub fn boundedness(c: &EdgeColouring) -> usize {
    let mut best = 0;
    let mut counts: HashMap<Colour, usize> = HashMap::new();
    for v in 0..c.n() {
        counts.clear();
        for w in (0..c.n()).filter(|&w| w != v) {
            let e = counts.entry(c.colour(v, w)).or_insert(0);
            *e += 1;
            best = best.max(*e);
        }
    }
    best
}
