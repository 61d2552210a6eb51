//! Prime-field arithmetic and dense bounded-degree multivariate polynomials.
//!
//! Polynomials are stored densely over a shared monomial basis in
//! graded-lexicographic order: all exponent vectors of total degree `0`, then
//! `1`, ..., then `d`, each degree block sorted lexicographically with the
//! exponent of the first variable most significant (descending).

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Default cap on the number of monomials a dense polynomial may hold.
pub const DEFAULT_MONOMIAL_CAP: u128 = 2_000_000;

/// The prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Builds `F_q`, rejecting composite moduli. Products of two elements must
    /// fit in a `u64`, so `q` is limited to 32 bits.
    pub fn new(q: u64) -> Result<Self> {
        if q > u32::MAX as u64 || !is_prime(q) {
            return Err(Error::InvalidField(q));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.q
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.q)
    }
}

/// Deterministic trial division.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q < 4 {
        return true;
    }
    if q.is_multiple_of(2) {
        return false;
    }
    let mut f = 3u64;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// `C(n, k)` with overflow reported as `None`.
pub fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Exponent vectors of total degree at most `d` in `nvars` variables.
#[derive(Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exps: Vec<u16>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32, cap: u128) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::Parameter("polynomial needs at least one variable".into()));
        }
        if degree > u16::MAX as u32 {
            return Err(Error::Parameter(format!("degree {degree} too large")));
        }
        let count = binomial(nvars as u128 + degree as u128, degree as u128).unwrap_or(u128::MAX);
        if count > cap {
            return Err(Error::BudgetExceeded { what: "dense monomial count", needed: count, cap });
        }
        let mut exps = Vec::with_capacity(count as usize * nvars);
        let mut cur = vec![0u16; nvars];
        for total in 0..=degree {
            push_block(&mut exps, &mut cur, 0, total as u16);
        }
        debug_assert_eq!(exps.len(), count as usize * nvars);
        Ok(MonomialBasis { nvars, degree, exps })
    }

    pub fn len(&self) -> usize {
        self.exps.len() / self.nvars
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self, idx: usize) -> &[u16] {
        &self.exps[idx * self.nvars..(idx + 1) * self.nvars]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> {
        self.exps.chunks_exact(self.nvars)
    }

    fn index_of(&self, exps: &[u16]) -> Option<usize> {
        self.iter().position(|e| e == exps)
    }
}

// All vectors in cur[pos..] summing to `remaining`, first coordinate descending.
fn push_block(out: &mut Vec<u16>, cur: &mut [u16], pos: usize, remaining: u16) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.extend_from_slice(cur);
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        push_block(out, cur, pos + 1, remaining - e);
    }
    cur[pos] = 0;
}

/// A polynomial over `F_q` of total degree at most `d`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: PrimeField,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<u64>,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, basis: Arc<MonomialBasis>) -> Self {
        let coeffs = vec![0; basis.len()];
        MultiPoly { field, basis, coeffs }
    }

    /// Polynomial with the given dense coefficients (basis order).
    pub fn from_coeffs(field: PrimeField, basis: Arc<MonomialBasis>, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: coeffs.len() });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::Parameter(format!("coefficient {c} outside F_{}", field.q)));
        }
        Ok(MultiPoly { field, basis, coeffs })
    }

    /// Uniform polynomial drawn from `rng`: every coefficient independent and
    /// uniform on `[0, q)`.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, basis: Arc<MonomialBasis>, rng: &mut R) -> Self {
        let coeffs = (0..basis.len()).map(|_| field.random_element(rng)).collect();
        MultiPoly { field, basis, coeffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.basis.nvars
    }

    pub fn degree_bound(&self) -> u32 {
        self.basis.degree
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `(exponent vector, coefficient)` pairs in basis order, zeros included.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], u64)> {
        self.basis.iter().zip(self.coeffs.iter().copied())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(MultiPoly { field: self.field, basis: self.basis.clone(), coeffs })
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field || self.basis != other.basis {
            return Err(Error::Parameter("polynomials differ in field, variable count or degree bound".into()));
        }
        Ok(())
    }

    /// Value at `point`, which must have `nvars` coordinates in `[0, q)`.
    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        let nvars = self.basis.nvars;
        if point.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, got: point.len() });
        }
        if let Some(&x) = point.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::Parameter(format!("coordinate {x} outside F_{}", self.field.q)));
        }
        let table = PowerTable::new(self.field, point, self.basis.degree);
        Ok(self.evaluate_with(&table))
    }

    pub(crate) fn evaluate_with(&self, table: &PowerTable) -> u64 {
        let f = self.field;
        let mut acc = 0u64;
        for (exps, &c) in self.basis.iter().zip(&self.coeffs) {
            if c == 0 {
                continue;
            }
            let mut term = c;
            for (i, &e) in exps.iter().enumerate() {
                term = f.mul(term, table.get(i, e));
            }
            acc = f.add(acc, term);
        }
        acc
    }

    pub fn to_record(&self) -> PolyRecord {
        PolyRecord {
            q: self.field.q,
            nvars: self.basis.nvars,
            d: self.basis.degree,
            coeffs: self.terms().filter(|&(_, c)| c != 0).map(|(e, c)| (e.to_vec(), c)).collect(),
        }
    }

    pub fn from_record(rec: &PolyRecord, cap: u128) -> Result<Self> {
        let field = PrimeField::new(rec.q)?;
        let basis = Arc::new(MonomialBasis::new(rec.nvars, rec.d, cap)?);
        let mut coeffs = vec![0; basis.len()];
        for (exps, c) in &rec.coeffs {
            let idx = basis
                .index_of(exps)
                .ok_or_else(|| Error::Parameter(format!("exponent vector {exps:?} outside the basis")))?;
            if !field.contains(*c) {
                return Err(Error::Parameter(format!("coefficient {c} outside F_{}", rec.q)));
            }
            coeffs[idx] = *c;
        }
        Ok(MultiPoly { field, basis, coeffs })
    }
}

/// Serialized polynomial: nonzero terms only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub q: u64,
    pub nvars: usize,
    pub d: u32,
    pub coeffs: Vec<(Vec<u16>, u64)>,
}

/// Powers `x_i^e` for `e <= degree`.
pub(crate) struct PowerTable {
    stride: usize,
    pows: Vec<u64>,
}

impl PowerTable {
    pub(crate) fn new(field: PrimeField, point: &[u64], degree: u32) -> Self {
        let stride = degree as usize + 1;
        let mut pows = Vec::with_capacity(point.len() * stride);
        for &x in point {
            let mut p = 1 % field.q;
            for _ in 0..stride {
                pows.push(p);
                p = field.mul(p, x);
            }
        }
        PowerTable { stride, pows }
    }

    #[inline]
    fn get(&self, var: usize, e: u16) -> u64 {
        self.pows[var * self.stride + e as usize]
    }
}

/// The colouring map `F = (f_1, ..., f_{2a})`: polynomials sharing field,
/// variable count and degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorPoly {
    components: Vec<MultiPoly>,
}

impl VectorPoly {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let first = components.first().ok_or_else(|| Error::Parameter("vector polynomial needs a component".into()))?;
        for c in &components[1..] {
            first.check_compatible(c)?;
        }
        Ok(VectorPoly { components })
    }

    /// `count` independent uniform components; component `i` draws from
    /// stream `i` of `seed`.
    pub fn sample(field: PrimeField, nvars: usize, d: u32, count: usize, seed: u64, cap: u128) -> Result<Self> {
        let basis = Arc::new(MonomialBasis::new(nvars, d, cap)?);
        let components =
            (0..count).map(|i| MultiPoly::random(field, basis.clone(), &mut stream_rng(seed, i as u64))).collect();
        VectorPoly::new(components)
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn field(&self) -> PrimeField {
        self.components[0].field
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<Vec<u64>> {
        self.components[0].evaluate(point)?;
        let table = PowerTable::new(self.field(), point, self.components[0].degree_bound());
        Ok(self.components.iter().map(|p| p.evaluate_with(&table)).collect())
    }
}

/// Uniform polynomial of degree at most `d` in `nvars` variables; identical
/// seeds give identical polynomials.
pub fn sample_poly(field: PrimeField, nvars: usize, d: u32, seed: u64) -> Result<MultiPoly> {
    sample_poly_capped(field, nvars, d, seed, DEFAULT_MONOMIAL_CAP)
}

pub fn sample_poly_capped(field: PrimeField, nvars: usize, d: u32, seed: u64, cap: u128) -> Result<MultiPoly> {
    let basis = Arc::new(MonomialBasis::new(nvars, d, cap)?);
    Ok(MultiPoly::random(field, basis, &mut stream_rng(seed, 0)))
}

/// Outcome of a vanishing-frequency experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingEstimate {
    pub hits: u64,
    pub trials: u64,
    /// The exact probability `q^{-m}` the frequency estimates.
    pub expected: f64,
}

impl VanishingEstimate {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// Binomial standard deviation of the frequency around `expected`.
    pub fn sigma(&self) -> f64 {
        (self.expected * (1.0 - self.expected) / self.trials as f64).sqrt()
    }
}

/// Samples `trials` uniform polynomials of degree at most `d` and counts
/// those vanishing at every one of the given distinct points.
pub fn vanishing_probability_trial(
    field: PrimeField,
    points: &[Vec<u64>],
    d: u32,
    trials: u64,
    seed: u64,
) -> Result<VanishingEstimate> {
    let m = points.len();
    if m == 0 {
        return Err(Error::DegenerateInput("no points given".into()));
    }
    if (d as usize) + 1 < m {
        return Err(Error::DegenerateInput(format!("degree {d} is below m - 1 = {} for {m} points", m - 1)));
    }
    let nvars = points[0].len();
    for p in points {
        if p.len() != nvars {
            return Err(Error::DimensionMismatch { expected: nvars, got: p.len() });
        }
    }
    for i in 0..m {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::DegenerateInput(format!("point {:?} repeats", points[i])));
            }
        }
    }
    let basis = Arc::new(MonomialBasis::new(nvars, d, DEFAULT_MONOMIAL_CAP)?);
    let tables: Vec<PowerTable> = points.iter().map(|p| PowerTable::new(field, p, d)).collect();
    for p in points {
        if let Some(&x) = p.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::Parameter(format!("coordinate {x} outside F_{}", field.q)));
        }
    }
    let mut rng = stream_rng(seed, 0);
    let mut hits = 0u64;
    for _ in 0..trials {
        let f = MultiPoly::random(field, basis.clone(), &mut rng);
        if tables.iter().all(|t| f.evaluate_with(t) == 0) {
            hits += 1;
        }
    }
    Ok(VanishingEstimate { hits, trials, expected: (field.q as f64).powi(-(m as i32)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..40).filter(|&q| is_prime(q)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(matches!(PrimeField::new(6), Err(Error::InvalidField(6))));
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn degree_zero_is_one_constant() {
        let p = sample_poly(f(5), 1, 0, 17).unwrap();
        assert_eq!(p.coeffs().len(), 1);
        assert!(p.coeffs()[0] < 5);
    }

    #[test]
    fn monomial_count_matches_enumeration() {
        // every exponent vector in {0..3}^4 with sum <= 3
        let mut brute = 0;
        for a in 0..=3u32 {
            for b in 0..=3 {
                for c in 0..=3 {
                    for d in 0..=3 {
                        if a + b + c + d <= 3 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(brute, 35);
        let p = sample_poly(f(5), 4, 3, 1).unwrap();
        assert_eq!(p.coeffs().len(), 35);
        assert!(p.basis().iter().all(|e| e.iter().map(|&x| x as u32).sum::<u32>() <= 3));
    }

    #[test]
    fn basis_is_graded_lex() {
        let b = MonomialBasis::new(2, 2, 100).unwrap();
        let got: Vec<Vec<u16>> = b.iter().map(|e| e.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_poly(f(7), 3, 4, 99).unwrap();
        let b = sample_poly(f(7), 3, 4, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_poly(f(7), 3, 4, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn budget_cap_is_enforced() {
        let err = sample_poly_capped(f(5), 8, 20, 0, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn evaluate_small_cases() {
        let field = f(5);
        let basis = Arc::new(MonomialBasis::new(2, 1, 100).unwrap());
        let zero = MultiPoly::zero(field, basis.clone());
        assert_eq!(zero.evaluate(&[3, 4]).unwrap(), 0);
        // basis order: 1, x1, x2
        let p = MultiPoly::from_coeffs(field, basis, vec![0, 1, 1]).unwrap();
        assert_eq!(p.evaluate(&[3, 4]).unwrap(), 2);
        assert!(matches!(p.evaluate(&[1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn interpolation_sanity_exhaustive() {
        // q = 5, d = 2: the only polynomial vanishing at 3 distinct points is 0
        let field = f(5);
        let basis = Arc::new(MonomialBasis::new(1, 2, 100).unwrap());
        let points = [[0u64], [2], [4]];
        let mut vanishing = 0;
        for c0 in 0..5 {
            for c1 in 0..5 {
                for c2 in 0..5 {
                    let p = MultiPoly::from_coeffs(field, basis.clone(), vec![c0, c1, c2]).unwrap();
                    if points.iter().all(|x| p.evaluate(x).unwrap() == 0) {
                        vanishing += 1;
                        assert!(p.is_zero());
                    }
                }
            }
        }
        assert_eq!(vanishing, 1);
    }

    #[test]
    fn vanishing_rejects_degenerate_input() {
        let pts = vec![vec![0, 0], vec![1, 0], vec![2, 0]];
        assert!(matches!(vanishing_probability_trial(f(5), &pts, 1, 10, 0), Err(Error::DegenerateInput(_))));
        let dup = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(vanishing_probability_trial(f(5), &dup, 3, 10, 0), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn vanishing_single_point_q5() {
        let est = vanishing_probability_trial(f(5), &[vec![1, 2]], 2, 10_000, 3).unwrap();
        assert!((est.frequency() - 0.2).abs() <= 3.0 * est.sigma(), "{est:?}");
    }

    #[test]
    fn record_round_trip() {
        let p = sample_poly(f(11), 3, 3, 5).unwrap();
        let json = serde_json::to_string(&p.to_record()).unwrap();
        let back: PolyRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(MultiPoly::from_record(&back, DEFAULT_MONOMIAL_CAP).unwrap(), p);
    }
}
