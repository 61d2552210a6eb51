//! Backtracking over simultaneous embeddings of a pattern.

use std::ops::ControlFlow;

use crate::colouring::{ColourIndex, EdgeColouring};
use crate::graph::Graph;

const UNSET: usize = usize::MAX;

/// Called with `(map1, map2)` for every complete pair.
pub(crate) type Visitor<'v> = dyn FnMut(&[usize], &[usize]) -> ControlFlow<()> + 'v;

/// How a search run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Completion {
    /// The visitor asked to stop.
    Stopped,
    /// Every candidate was tried.
    Exhausted,
    /// The node budget ran out first.
    Budget,
}

enum Halt {
    Visitor,
    Budget,
}

pub(crate) struct Engine<'a> {
    colouring: &'a EdgeColouring,
    index: &'a ColourIndex,
    pattern: &'a Graph,
    fixed: Vec<usize>,
    order: Vec<usize>,
    anchor: Vec<Option<usize>>,
    back: Vec<Vec<usize>>,
    fixed_edges: Vec<(usize, usize)>,
    symmetry: bool,
}

struct State<'v> {
    map1: Vec<usize>,
    map2: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    visit: &'v mut Visitor<'v>,
}

impl<'a> Engine<'a> {
    /// `fixed` pattern vertices get their images per run; the rest are
    /// placed in DFS order. With `symmetry` and nothing fixed, only pairs with
    /// `map1(first) < map2(first)` are produced.
    pub(crate) fn new(
        colouring: &'a EdgeColouring,
        index: &'a ColourIndex,
        pattern: &'a Graph,
        fixed: &[usize],
        symmetry: bool,
    ) -> Self {
        let pv = pattern.vertex_count();
        let mut visited = vec![false; pv];
        let mut parent_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(pv);
        for &f in fixed {
            visited[f] = true;
        }
        for &f in fixed {
            for &w in pattern.neighbours(f) {
                if !visited[w] {
                    dfs(pattern, w, Some(f), &mut visited, &mut parent_of);
                }
            }
        }
        loop {
            let start = (0..pv).filter(|&v| !visited[v]).max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)));
            match start {
                Some(v) => dfs(pattern, v, None, &mut visited, &mut parent_of),
                None => break,
            }
        }
        let mut position = vec![None; pv];
        for (i, &(v, _)) in parent_of.iter().enumerate() {
            position[v] = Some(i);
        }
        let is_fixed = |w: usize| fixed.contains(&w);
        let back = parent_of
            .iter()
            .enumerate()
            .map(|(i, &(v, parent))| {
                pattern
                    .neighbours(v)
                    .iter()
                    .copied()
                    .filter(|&w| Some(w) != parent && (is_fixed(w) || position[w].is_some_and(|p| p < i)))
                    .collect()
            })
            .collect();
        let fixed_edges = pattern.edges().iter().copied().filter(|&(u, v)| is_fixed(u) && is_fixed(v)).collect();
        Engine {
            colouring,
            index,
            pattern,
            fixed: fixed.to_vec(),
            order: parent_of.iter().map(|&(v, _)| v).collect(),
            anchor: parent_of.iter().map(|&(_, p)| p).collect(),
            back,
            fixed_edges,
            symmetry: symmetry && fixed.is_empty(),
        }
    }

    /// Calls `visit(map1, map2)` on each colour-isomorphic vertex-disjoint
    /// pair extending the given images of the fixed vertices.
    pub(crate) fn run(
        &self,
        fixed1: &[usize],
        fixed2: &[usize],
        budget: u64,
        visit: &mut Visitor<'_>,
    ) -> (Completion, u64) {
        let n = self.colouring.n();
        let pv = self.pattern.vertex_count();
        let mut st =
            State { map1: vec![UNSET; pv], map2: vec![UNSET; pv], used: vec![false; n], nodes: 0, budget, visit };
        for ((&f, &x), &y) in self.fixed.iter().zip(fixed1).zip(fixed2) {
            if st.used[x] || st.used[y] || x == y {
                return (Completion::Exhausted, 0);
            }
            st.map1[f] = x;
            st.map2[f] = y;
            st.used[x] = true;
            st.used[y] = true;
        }
        for &(u, v) in &self.fixed_edges {
            if self.colouring.colour(st.map1[u], st.map1[v]) != self.colouring.colour(st.map2[u], st.map2[v]) {
                return (Completion::Exhausted, 0);
            }
        }
        let outcome = match self.extend(&mut st, 0) {
            ControlFlow::Continue(()) => Completion::Exhausted,
            ControlFlow::Break(Halt::Visitor) => Completion::Stopped,
            ControlFlow::Break(Halt::Budget) => Completion::Budget,
        };
        (outcome, st.nodes)
    }

    fn extend(&self, st: &mut State, pos: usize) -> ControlFlow<Halt> {
        if pos == self.order.len() {
            return match (st.visit)(&st.map1, &st.map2) {
                ControlFlow::Continue(()) => ControlFlow::Continue(()),
                ControlFlow::Break(()) => ControlFlow::Break(Halt::Visitor),
            };
        }
        let n = self.colouring.n();
        match self.anchor[pos] {
            Some(p) => {
                let (a1, a2) = (st.map1[p], st.map2[p]);
                for x in 0..n {
                    if st.used[x] {
                        continue;
                    }
                    let col = self.colouring.colour(a1, x);
                    for &y in self.index.neighbours_with(a2, col) {
                        if !st.used[y] && y != x {
                            self.place(st, pos, x, y)?;
                        }
                    }
                }
            }
            None => {
                for x in 0..n {
                    if st.used[x] {
                        continue;
                    }
                    let lo = if self.symmetry && pos == 0 { x + 1 } else { 0 };
                    for y in lo..n {
                        if !st.used[y] && y != x {
                            self.place(st, pos, x, y)?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn place(&self, st: &mut State, pos: usize, x: usize, y: usize) -> ControlFlow<Halt> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return ControlFlow::Break(Halt::Budget);
        }
        for &u in &self.back[pos] {
            if self.colouring.colour(st.map1[u], x) != self.colouring.colour(st.map2[u], y) {
                return ControlFlow::Continue(());
            }
        }
        let v = self.order[pos];
        st.map1[v] = x;
        st.map2[v] = y;
        st.used[x] = true;
        st.used[y] = true;
        let r = self.extend(st, pos + 1);
        st.used[x] = false;
        st.used[y] = false;
        st.map1[v] = UNSET;
        st.map2[v] = UNSET;
        r
    }
}

fn dfs(g: &Graph, v: usize, parent: Option<usize>, visited: &mut [bool], out: &mut Vec<(usize, Option<usize>)>) {
    visited[v] = true;
    out.push((v, parent));
    for &w in g.neighbours(v) {
        if !visited[w] {
            dfs(g, w, Some(v), visited, out);
        }
    }
}
