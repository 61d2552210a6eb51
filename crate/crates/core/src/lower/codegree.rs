use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{BipartiteGraph, RegularizedGraph};
use crate::error::{Error, Result};
use crate::trees::subdivision_kst;
use crate::witness::{EmbeddedPair, Search};

/// Red/blue classification of pairs in the `A` (left) side by codegree:
/// red iff at least `2st` common neighbours, blue iff between 1 and `2st - 1`.
#[derive(Debug, Clone)]
pub struct CodegreeColouring {
    pub s: usize,
    pub t: usize,
    pub threshold: usize,
    codegree: HashMap<(usize, usize), usize>,
    pub red: Vec<(usize, usize)>,
    pub blue: Vec<(usize, usize)>,
    red_adj: Vec<Vec<usize>>,
    blue_adj: Vec<Vec<usize>>,
}

impl CodegreeColouring {
    pub fn codegree(&self, a: usize, b: usize) -> usize {
        self.codegree.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    pub fn is_red(&self, a: usize, b: usize) -> bool {
        a != b && self.codegree(a, b) >= self.threshold
    }

    pub fn red_neighbours(&self, a: usize) -> &[usize] {
        &self.red_adj[a]
    }

    pub fn blue_neighbours(&self, a: usize) -> &[usize] {
        &self.blue_adj[a]
    }
}

pub fn codegree_colouring(rg: &RegularizedGraph, s: usize, t: usize) -> Result<CodegreeColouring> {
    if s < 2 || t < s {
        return Err(Error::Parameter(format!("need 2 <= s <= t, got s={s}, t={t}")));
    }
    Ok(classify(&rg.graph, s, t))
}

pub(crate) fn classify(g: &BipartiteGraph, s: usize, t: usize) -> CodegreeColouring {
    let mut codegree: HashMap<(usize, usize), usize> = HashMap::new();
    for r in 0..g.right_count() {
        let nb = g.right_neighbours(r);
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                *codegree.entry((nb[i], nb[j])).or_insert(0) += 1;
            }
        }
    }
    let threshold = 2 * s * t;
    let mut keys: Vec<(usize, usize)> = codegree.keys().copied().collect();
    keys.sort_unstable();
    let (red, blue): (Vec<_>, Vec<_>) = keys.into_iter().partition(|k| codegree[k] >= threshold);
    let adj = |pairs: &[(usize, usize)]| {
        let mut adj = vec![Vec::new(); g.left_count()];
        for &(a, b) in pairs {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj.iter_mut().for_each(|v: &mut Vec<usize>| v.sort_unstable());
        adj
    };
    CodegreeColouring { s, t, threshold, red_adj: adj(&red), blue_adj: adj(&blue), codegree, red, blue }
}

/// Distribution of blue degrees `|N_b(A)|`, and the largest common blue
/// neighbourhood over clean, pairwise non-red `s`-tuples found within a cap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlueSummary {
    pub a_vertices: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub common_blue_max: usize,
    pub common_blue_tuples: u64,
    pub common_blue_truncated: bool,
}

impl CodegreeColouring {
    pub fn blue_summary(&self, g: &BipartiteGraph, tuple_cap: u64) -> BlueSummary {
        let degs: Vec<usize> = self.blue_adj.iter().map(Vec::len).collect();
        let n = degs.len();
        let mut best = 0;
        let mut tuples = 0;
        let mut cur = Vec::with_capacity(self.s);
        let truncated = self.common_blue(g, 0, &mut cur, &mut best, &mut tuples, tuple_cap);
        BlueSummary {
            a_vertices: n,
            min: degs.iter().copied().min().unwrap_or(0),
            max: degs.iter().copied().max().unwrap_or(0),
            mean: if n == 0 { 0.0 } else { degs.iter().sum::<usize>() as f64 / n as f64 },
            common_blue_max: best,
            common_blue_tuples: tuples,
            common_blue_truncated: truncated,
        }
    }

    fn common_blue(
        &self,
        g: &BipartiteGraph,
        from: usize,
        cur: &mut Vec<usize>,
        best: &mut usize,
        tuples: &mut u64,
        cap: u64,
    ) -> bool {
        if cur.len() == self.s {
            *tuples += 1;
            let mut common: HashSet<usize> = self.blue_adj[cur[0]].iter().copied().collect();
            for &e in &cur[1..] {
                let other: HashSet<usize> = self.blue_adj[e].iter().copied().collect();
                common.retain(|x| other.contains(x));
            }
            *best = (*best).max(common.len());
            return *tuples >= cap;
        }
        for a in from..self.blue_adj.len() {
            if self.blue_adj[a].is_empty() || cur.iter().any(|&b| self.is_red(a, b)) {
                continue;
            }
            cur.push(a);
            let ok = g.is_clean(cur, &[]);
            let stop = ok && self.common_blue(g, a + 1, cur, best, tuples, cap);
            cur.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// Backtracking for a clean red `K_{s,t}` in `A`: `s` vertices on one side,
/// `t` on the other, every cross pair red, all labels disjoint.
pub fn find_red_kst(cc: &CodegreeColouring, g: &BipartiteGraph, budget: u64) -> Search<(Vec<usize>, Vec<usize>)> {
    let mut nodes = 0;
    let mut s_side = Vec::with_capacity(cc.s);
    match red_s(cc, g, 0, &mut s_side, &mut nodes, budget) {
        Ok(Some(hit)) => Search::Found(hit),
        Ok(None) => Search::Exhausted,
        Err(()) => Search::Inconclusive { nodes },
    }
}

type Hit = Option<(Vec<usize>, Vec<usize>)>;

fn red_s(
    cc: &CodegreeColouring,
    g: &BipartiteGraph,
    from: usize,
    s_side: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> std::result::Result<Hit, ()> {
    if s_side.len() == cc.s {
        let mut cands: Vec<usize> = cc.red_neighbours(s_side[0]).to_vec();
        for &a in &s_side[1..] {
            cands.retain(|&x| cc.is_red(a, x));
        }
        cands.retain(|&x| !s_side.contains(&x) && g.is_clean(&[s_side.as_slice(), &[x]].concat(), &[]));
        if cands.len() < cc.t {
            return Ok(None);
        }
        let mut t_side = Vec::with_capacity(cc.t);
        return red_t(cc, g, &cands, 0, s_side, &mut t_side, nodes, budget);
    }
    for a in from..cc.red_adj.len() {
        if cc.red_adj[a].len() < cc.t || s_side.iter().any(|&b| !g.is_clean(&[a, b], &[])) {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(());
        }
        s_side.push(a);
        let r = red_s(cc, g, a + 1, s_side, nodes, budget);
        s_side.pop();
        if let Ok(None) = r {
            continue;
        }
        return r;
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn red_t(
    cc: &CodegreeColouring,
    g: &BipartiteGraph,
    cands: &[usize],
    from: usize,
    s_side: &[usize],
    t_side: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
) -> std::result::Result<Hit, ()> {
    if t_side.len() == cc.t {
        return Ok(Some((s_side.to_vec(), t_side.clone())));
    }
    for k in from..cands.len() {
        if cands.len() - k < cc.t - t_side.len() {
            break;
        }
        let x = cands[k];
        if t_side.iter().any(|&y| !g.is_clean(&[x, y], &[])) {
            continue;
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(());
        }
        t_side.push(x);
        let r = red_t(cc, g, cands, k + 1, s_side, t_side, nodes, budget)?;
        t_side.pop();
        if r.is_some() {
            return Ok(r);
        }
    }
    Ok(None)
}

/// A `K_{s,t}^sub` in a bipartite graph: branch vertices on the left, one
/// subdividing right vertex per branch pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CleanSubdivision {
    pub s_side: Vec<usize>,
    pub t_side: Vec<usize>,
    /// `mids[i * t + j]` subdivides the pair `(s_side[i], t_side[j])`.
    pub mids: Vec<usize>,
    /// Excluded candidates at each greedy step; empty for direct search.
    pub exclusions: Vec<usize>,
}

impl CleanSubdivision {
    pub fn is_clean(&self, g: &BipartiteGraph) -> bool {
        g.is_clean(&[self.s_side.as_slice(), &self.t_side].concat(), &self.mids)
    }

    /// Whether every subdividing edge is present in `g`.
    pub fn is_embedded(&self, g: &BipartiteGraph) -> bool {
        let t = self.t_side.len();
        self.s_side.iter().enumerate().all(|(i, &a)| {
            self.t_side.iter().enumerate().all(|(j, &b)| {
                let m = self.mids[i * t + j];
                g.left_neighbours(a).binary_search(&m).is_ok() && g.left_neighbours(b).binary_search(&m).is_ok()
            })
        })
    }

    /// Reads off the two copies: first label coordinates give one copy,
    /// second coordinates the other.
    pub fn to_pair(&self, g: &BipartiteGraph) -> Result<EmbeddedPair> {
        let pattern = subdivision_kst(self.s_side.len(), self.t_side.len())?;
        let labels: Vec<[usize; 2]> = self
            .s_side
            .iter()
            .chain(&self.t_side)
            .map(|&a| g.left_labels[a])
            .chain(self.mids.iter().map(|&m| g.right_labels[m]))
            .collect();
        Ok(EmbeddedPair {
            pattern,
            map1: labels.iter().map(|l| l[0]).collect(),
            map2: labels.iter().map(|l| l[1]).collect(),
        })
    }
}

fn common_neighbours(g: &BipartiteGraph, a: usize, b: usize) -> Vec<usize> {
    let (x, y) = (g.left_neighbours(a), g.left_neighbours(b));
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(x[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Picks one subdividing vertex per red pair, in row-major order, skipping
/// candidates whose labels meet those already used.
pub fn greedy_clean_embed(
    cc: &CodegreeColouring,
    g: &BipartiteGraph,
    s_side: &[usize],
    t_side: &[usize],
) -> Result<CleanSubdivision> {
    for &a in s_side {
        for &b in t_side {
            if !cc.is_red(a, b) {
                return Err(Error::ContractViolation(format!(
                    "pair ({a}, {b}) has codegree {} < {}",
                    cc.codegree(a, b),
                    cc.threshold
                )));
            }
        }
    }
    let branch = [s_side, t_side].concat();
    if !g.is_clean(&branch, &[]) {
        return Err(Error::ContractViolation("branch vertices are not clean".into()));
    }
    let mut used: HashSet<usize> = branch.iter().flat_map(|&a| g.left_labels[a]).collect();
    let mut mids = Vec::with_capacity(s_side.len() * t_side.len());
    let mut exclusions = Vec::with_capacity(mids.capacity());
    for &a in s_side {
        for &b in t_side {
            let cands = common_neighbours(g, a, b);
            let (free, blocked): (Vec<usize>, Vec<usize>) =
                cands.into_iter().partition(|&m| g.right_labels[m].iter().all(|v| !used.contains(v)));
            exclusions.push(blocked.len());
            let Some(&pick) = free.first() else {
                return Err(Error::ContractViolation(format!("no clean common neighbour left for ({a}, {b})")));
            };
            used.extend(g.right_labels[pick]);
            mids.push(pick);
        }
    }
    Ok(CleanSubdivision { s_side: s_side.to_vec(), t_side: t_side.to_vec(), mids, exclusions })
}

/// Direct backtracking for a clean `K_{s,t}^sub` with branch vertices on the
/// left, requiring only one common neighbour per branch pair.
pub fn find_clean_subdivision(g: &BipartiteGraph, s: usize, t: usize, budget: u64) -> Search<CleanSubdivision> {
    if s == 0 || t == 0 {
        return Search::Exhausted;
    }
    let mut steps = vec![Step::A(0)];
    for j in 0..t {
        steps.push(Step::B(j));
        steps.push(Step::M(0, j));
    }
    for i in 1..s {
        steps.push(Step::A(i));
        steps.extend((0..t).map(|j| Step::M(i, j)));
    }
    let max_label = g.left_labels.iter().chain(&g.right_labels).flatten().copied().max().unwrap_or(0);
    let mut d = Direct {
        g,
        t,
        steps,
        a: vec![usize::MAX; s],
        b: vec![usize::MAX; t],
        m: vec![usize::MAX; s * t],
        used: vec![false; max_label + 1],
        nodes: 0,
        budget,
    };
    match d.place(0) {
        Ok(true) => Search::Found(CleanSubdivision { s_side: d.a, t_side: d.b, mids: d.m, exclusions: Vec::new() }),
        Ok(false) => Search::Exhausted,
        Err(()) => Search::Inconclusive { nodes: d.nodes },
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    A(usize),
    B(usize),
    M(usize, usize),
}

struct Direct<'a> {
    g: &'a BipartiteGraph,
    t: usize,
    steps: Vec<Step>,
    a: Vec<usize>,
    b: Vec<usize>,
    m: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Direct<'_> {
    fn free(&self, l: [usize; 2]) -> bool {
        !self.used[l[0]] && !self.used[l[1]]
    }

    fn set(&mut self, l: [usize; 2], v: bool) {
        self.used[l[0]] = v;
        self.used[l[1]] = v;
    }

    /// Left vertices at distance two from `x`, ascending.
    fn second_neighbours(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .g
            .left_neighbours(x)
            .iter()
            .flat_map(|&r| self.g.right_neighbours(r).iter().copied())
            .filter(|&y| y != x)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn place(&mut self, k: usize) -> std::result::Result<bool, ()> {
        if k == self.steps.len() {
            return Ok(true);
        }
        let (cands, left) = match self.steps[k] {
            Step::A(0) => {
                ((0..self.g.left_count()).filter(|&x| self.g.left_neighbours(x).len() >= self.t).collect(), true)
            }
            Step::A(i) => {
                let prev = self.a[i - 1];
                let mut c = self.second_neighbours(self.b[0]);
                c.retain(|&x| x > prev);
                (c, true)
            }
            Step::B(j) => {
                let mut c = self.second_neighbours(self.a[0]);
                if j > 0 {
                    let prev = self.b[j - 1];
                    c.retain(|&x| x > prev);
                }
                (c, true)
            }
            Step::M(i, j) => (common_neighbours(self.g, self.a[i], self.b[j]), false),
        };
        for x in cands {
            let label = if left { self.g.left_labels[x] } else { self.g.right_labels[x] };
            if !self.free(label) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            match self.steps[k] {
                Step::A(i) => self.a[i] = x,
                Step::B(j) => self.b[j] = x,
                Step::M(i, j) => self.m[i * self.t + j] = x,
            }
            self.set(label, true);
            if self.place(k + 1)? {
                return Ok(true);
            }
            self.set(label, false);
        }
        Ok(false)
    }
}
