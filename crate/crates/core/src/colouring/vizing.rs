use rayon::prelude::*;

use super::{boundedness, Colour, EdgeColouring};

const FREE: usize = usize::MAX;

/// Misra-Gries edge colouring of a simple graph on `0..nv`.
///
/// Returns a colour in `0..=max_degree` for each input edge.
pub fn misra_gries(nv: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0usize; nv];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let palette = deg.iter().copied().max().unwrap_or(0) + 1;
    let mut mg = Mg { palette, at: vec![FREE; nv * palette] };
    for &(u, v) in edges {
        mg.colour_edge(u, v);
    }
    edges.iter().map(|&(u, v)| mg.colour_of(u, v).expect("edge left uncoloured")).collect()
}

struct Mg {
    palette: usize,
    // at[v * palette + c] is the neighbour reached from v along colour c
    at: Vec<usize>,
}

impl Mg {
    fn get(&self, v: usize, c: usize) -> usize {
        self.at[v * self.palette + c]
    }

    fn is_free(&self, v: usize, c: usize) -> bool {
        self.get(v, c) == FREE
    }

    fn free_colour(&self, v: usize) -> usize {
        (0..self.palette).find(|&c| self.is_free(v, c)).expect("no free colour")
    }

    fn colour_of(&self, u: usize, v: usize) -> Option<usize> {
        (0..self.palette).find(|&c| self.get(u, c) == v)
    }

    fn assign(&mut self, u: usize, v: usize, c: usize) {
        let p = self.palette;
        self.at[u * p + c] = v;
        self.at[v * p + c] = u;
    }

    fn clear(&mut self, u: usize, v: usize) {
        if let Some(c) = self.colour_of(u, v) {
            let p = self.palette;
            self.at[u * p + c] = FREE;
            self.at[v * p + c] = FREE;
        }
    }

    fn colour_edge(&mut self, u: usize, v: usize) {
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = (0..self.palette).find_map(|c| {
                let w = self.get(u, c);
                (w != FREE && self.is_free(last, c) && !fan.contains(&w)).then_some(w)
            });
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = self.free_colour(u);
        let d = self.free_colour(*fan.last().unwrap());
        if c != d {
            self.invert_path(u, c, d);
        }
        let mut w = 0;
        loop {
            if self.is_free(fan[w], d) {
                break;
            }
            w += 1;
            assert!(w < fan.len(), "fan lost after path inversion");
        }
        let shifted: Vec<usize> = (0..w).map(|i| self.colour_of(u, fan[i + 1]).expect("fan edge coloured")).collect();
        for &f in &fan[1..=w] {
            self.clear(u, f);
        }
        for (i, &col) in shifted.iter().enumerate() {
            self.assign(u, fan[i], col);
        }
        self.assign(u, fan[w], d);
    }

    /// Swaps `c` and `d` along the maximal path from `u` starting with colour `d`.
    fn invert_path(&mut self, u: usize, c: usize, d: usize) {
        let mut path = Vec::new();
        let (mut cur, mut col) = (u, d);
        loop {
            let next = self.get(cur, col);
            if next == FREE {
                break;
            }
            path.push((cur, next, col));
            cur = next;
            col = if col == d { c } else { d };
        }
        for &(x, y, _) in &path {
            self.clear(x, y);
        }
        for &(x, y, col) in &path {
            self.assign(x, y, if col == d { c } else { d });
        }
    }
}

/// A proper refinement of a bounded colouring.
#[derive(Debug, Clone)]
pub struct Properized {
    pub colouring: EdgeColouring,
    /// Boundedness of the input.
    pub bound: usize,
    /// Sorted input palette; output colour `x` refines `base_palette[x / (bound + 1)]`.
    pub base_palette: Vec<Colour>,
}

impl Properized {
    pub fn original_of(&self, c: Colour) -> Colour {
        self.base_palette[(c / (self.bound as u64 + 1)) as usize]
    }
}

/// Splits every colour class into at most `C + 1` matchings.
///
/// The result is proper and refines the input: equal output colours imply
/// equal input colours.
pub fn vizing_properize(c: &EdgeColouring) -> Properized {
    let bound = boundedness(c);
    let stride = bound as u64 + 1;
    let classes: Vec<(Colour, Vec<(usize, usize)>)> = c.classes().into_iter().collect();
    let base_palette: Vec<Colour> = classes.iter().map(|(col, _)| *col).collect();
    let parts: Vec<Vec<(usize, usize, Colour)>> = classes
        .into_par_iter()
        .enumerate()
        .map(|(rank, (_, edges))| {
            let sub = misra_gries(c.n(), &edges);
            edges.iter().zip(sub).map(|(&(u, v), s)| (u, v, rank as u64 * stride + s as u64)).collect()
        })
        .collect();
    let mut out = c.clone();
    for (u, v, col) in parts.into_iter().flatten() {
        out.set(u, v, col);
    }
    Properized { colouring: out, bound, base_palette }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::is_proper;
    use crate::rng::stream_rng;
    use rand::Rng;

    fn check_proper_edge_colouring(nv: usize, edges: &[(usize, usize)]) {
        let cols = misra_gries(nv, edges);
        let mut deg = vec![0; nv];
        for &(u, v) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let delta = deg.iter().copied().max().unwrap_or(0);
        let mut seen = std::collections::HashSet::new();
        for (&(u, v), &c) in edges.iter().zip(&cols) {
            assert!(c <= delta);
            assert!(seen.insert((u, c)), "clash at {u}");
            assert!(seen.insert((v, c)), "clash at {v}");
        }
    }

    #[test]
    fn misra_gries_on_complete_graphs() {
        for n in 2..10 {
            let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            check_proper_edge_colouring(n, &edges);
        }
    }

    #[test]
    fn misra_gries_on_petersen() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        check_proper_edge_colouring(10, &edges);
    }

    #[test]
    fn misra_gries_on_random_graphs() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..50 {
            let n = rng.gen_range(2..20);
            let p: f64 = rng.gen_range(0.1..0.9);
            let edges: Vec<_> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
            check_proper_edge_colouring(n, &edges);
        }
    }

    #[test]
    fn properize_refines() {
        let c = EdgeColouring::from_fn(9, |u, v| ((u + v) % 3) as u64 * 10);
        let p = vizing_properize(&c);
        assert!(is_proper(&p.colouring));
        assert!(p.colouring.palette().len() <= (p.bound + 1) * c.palette().len());
        for (u, v, col) in p.colouring.edges() {
            assert_eq!(p.original_of(col), c.colour(u, v));
        }
    }

    #[test]
    fn properize_monochromatic() {
        let c = EdgeColouring::from_fn(7, |_, _| 0);
        let p = vizing_properize(&c);
        assert_eq!(p.bound, 6);
        assert!(is_proper(&p.colouring));
        assert!(p.colouring.palette().len() <= 7);
    }
}
