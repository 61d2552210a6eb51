use rayon::prelude::*;
use serde::Serialize;

use super::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::field::{binomial, PolyRecord, PrimeField, VectorPoly, DEFAULT_MONOMIAL_CAP};

/// Largest `n` the construction will build.
pub const MAX_CONSTRUCTION_N: usize = 4096;

/// Parameters of the random polynomial colouring of `K_n`, `n <= q^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    /// Unrooted vertex count of the target tree; the colour is a `2a`-tuple.
    pub tree_a: usize,
    /// Edge count of the target tree; vertices are points of `F_q^b`.
    pub tree_b: usize,
    /// Root count of the target tree, used only for the default degree.
    pub tree_r: usize,
    pub q: u64,
    /// Degree bound; `None` picks [`default_degree`].
    pub d: Option<u32>,
    pub seed: u64,
    /// Number of vertices; `None` means `q^b`.
    pub n: Option<usize>,
    pub monomial_cap: u128,
}

impl ConstructionParams {
    pub fn new(tree_a: usize, tree_b: usize, q: u64, seed: u64) -> Self {
        ConstructionParams { tree_a, tree_b, tree_r: 2, q, d: None, seed, n: None, monomial_cap: DEFAULT_MONOMIAL_CAP }
    }
}

/// `2 r b^2 + b + 1`, lowered until the dense basis in `2b` variables fits
/// under `cap`.
pub fn default_degree(r: usize, b: usize, cap: u128) -> u32 {
    let mut d = (2 * r * b * b + b + 1) as u32;
    while d > 1 && binomial(2 * b as u128 + d as u128, d as u128).is_none_or(|c| c > cap) {
        d -= 1;
    }
    d
}

/// Vertex `i` (0-based) as its base-`q` digits, most significant first.
pub fn phi_embed(n: usize, q: u64, b: usize) -> Result<Vec<Vec<u64>>> {
    let total = (q as u128).checked_pow(b as u32).unwrap_or(u128::MAX);
    if n as u128 > total {
        return Err(Error::Size(format!("n = {n} exceeds q^b = {q}^{b}")));
    }
    Ok((0..n as u64)
        .map(|i| {
            let mut digits = vec![0; b];
            let mut x = i;
            for slot in digits.iter_mut().rev() {
                *slot = x % q;
                x /= q;
            }
            digits
        })
        .collect())
}

/// `sum_k values[k] q^k`.
pub fn encode_colour(values: &[u64], q: u64) -> Colour {
    values.iter().rev().fold(0, |acc, &v| acc * q + v)
}

pub fn decode_colour(mut c: Colour, q: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let v = c % q;
            c /= q;
            v
        })
        .collect()
}

/// The constructed colouring and everything needed to recompute it.
#[derive(Debug, Clone)]
pub struct RandomColouring {
    pub params: ConstructionParams,
    pub d: u32,
    pub n: usize,
    pub polys: VectorPoly,
    pub colouring: EdgeColouring,
}

impl RandomColouring {
    /// The colour of `{i, j}` recomputed from the polynomials.
    pub fn recompute(&self, i: usize, j: usize) -> Result<Colour> {
        let phi = phi_embed(self.n, self.params.q, self.params.tree_b)?;
        edge_colour(&self.polys, &phi, i, j, self.params.q)
    }

    pub fn poly_records(&self) -> Vec<PolyRecord> {
        self.polys.components().iter().map(|p| p.to_record()).collect()
    }
}

fn edge_colour(polys: &VectorPoly, phi: &[Vec<u64>], i: usize, j: usize, q: u64) -> Result<Colour> {
    let (lo, hi) = (i.min(j), i.max(j));
    let mut point = phi[lo].clone();
    point.extend_from_slice(&phi[hi]);
    Ok(encode_colour(&polys.evaluate(&point)?, q))
}

/// Samples `F = (f_1, ..., f_{2a})` over `F_q` in `2b` variables and colours
/// `{i, j}` by `F(phi(min), phi(max))`, encoded as a base-`q` integer.
pub fn construct_random_colouring(params: &ConstructionParams) -> Result<RandomColouring> {
    let field = PrimeField::new(params.q)?;
    if params.tree_a == 0 || params.tree_b == 0 {
        return Err(Error::Parameter("tree_a and tree_b must be positive".into()));
    }
    let full = (params.q as u128).checked_pow(params.tree_b as u32).unwrap_or(u128::MAX);
    let n = match params.n {
        Some(n) => n,
        None => usize::try_from(full).unwrap_or(usize::MAX),
    };
    if n > MAX_CONSTRUCTION_N {
        return Err(Error::Size(format!("n = {n} exceeds the construction limit {MAX_CONSTRUCTION_N}")));
    }
    let d = match params.d {
        Some(0) => return Err(Error::Parameter("degree bound must be at least 1".into())),
        Some(d) => d,
        None => default_degree(params.tree_r, params.tree_b, params.monomial_cap),
    };
    let phi = phi_embed(n, params.q, params.tree_b)?;
    let polys = VectorPoly::sample(field, 2 * params.tree_b, d, 2 * params.tree_a, params.seed, params.monomial_cap)?;
    let rows: Vec<Vec<Colour>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| edge_colour(&polys, &phi, i, j, params.q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let colouring = EdgeColouring::from_fn(n, |i, j| rows[i][j - i - 1]);
    Ok(RandomColouring { params: params.clone(), d, n, polys, colouring })
}
