//! Colour-isomorphic vertex-disjoint pairs of pattern copies.

mod checker;
pub(crate) mod engine;
mod oracle;
mod rooted;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

pub use checker::{check_pair, CheckFailure};
pub use oracle::{f2_exact, ORACLE_MAX_N};
pub use rooted::{
    certify_power_free, count_rooted, max_rooted_collection, power_pair_search, rooted_collection, MaxCollection,
    PowerCertificate, RootedCollection, DEFAULT_ROOT_PAIR_LIMIT,
};

use crate::colouring::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphRecord};
use engine::{Completion, Engine};

/// Default node budget for a single search.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Two copies of `pattern` in `K_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedPair {
    pub pattern: Graph,
    pub map1: Vec<usize>,
    pub map2: Vec<usize>,
}

impl EmbeddedPair {
    /// `[colour under map1, colour under map2]` per pattern edge.
    pub fn colour_trace(&self, c: &EdgeColouring) -> Vec<[Colour; 2]> {
        self.pattern
            .edges()
            .iter()
            .map(|&(u, v)| [c.colour(self.map1[u], self.map1[v]), c.colour(self.map2[u], self.map2[v])])
            .collect()
    }

    pub fn check(&self, c: &EdgeColouring) -> std::result::Result<(), CheckFailure> {
        check_pair(c, &self.pattern, &self.map1, &self.map2)
    }

    pub fn to_record(&self, c: &EdgeColouring) -> WitnessRecord {
        WitnessRecord {
            pattern: self.pattern.to_record(),
            map1: self.map1.clone(),
            map2: self.map2.clone(),
            colour_trace: self.colour_trace(c),
        }
    }

    pub fn from_record(rec: &WitnessRecord) -> Result<Self> {
        Ok(EmbeddedPair { pattern: Graph::from_record(&rec.pattern)?, map1: rec.map1.clone(), map2: rec.map2.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub pattern: GraphRecord,
    pub map1: Vec<usize>,
    pub map2: Vec<usize>,
    pub colour_trace: Vec<[Colour; 2]>,
}

/// `(map1, map2)`.
pub type MapPair = (Vec<usize>, Vec<usize>);

/// Result of a budgeted search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The whole search space was covered without a hit.
    Exhausted,
    /// The budget ran out; nothing is known.
    Inconclusive {
        nodes: u64,
    },
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Exhausted => Search::Exhausted,
            Search::Inconclusive { nodes } => Search::Inconclusive { nodes },
        }
    }
}

fn check_pattern(h: &Graph) -> Result<()> {
    if h.vertex_count() == 0 {
        return Err(Error::DegenerateInput("pattern has no vertices".into()));
    }
    Ok(())
}

/// Searches for a colour-isomorphic vertex-disjoint pair of copies of `h`.
pub fn find_pair(c: &EdgeColouring, h: &Graph, budget: u64) -> Result<Search<EmbeddedPair>> {
    check_pattern(h)?;
    if 2 * h.vertex_count() > c.n() {
        return Ok(Search::Exhausted);
    }
    let index = c.index();
    let engine = Engine::new(c, &index, h, &[], true);
    let mut hit = None;
    let (done, nodes) = engine.run(&[], &[], budget, &mut |m1, m2| {
        hit = Some((m1.to_vec(), m2.to_vec()));
        ControlFlow::Break(())
    });
    Ok(match done {
        Completion::Stopped => {
            let (map1, map2) = hit.expect("stopped without a hit");
            Search::Found(EmbeddedPair { pattern: h.clone(), map1, map2 })
        }
        Completion::Exhausted => Search::Exhausted,
        Completion::Budget => Search::Inconclusive { nodes },
    })
}

/// Every colour-isomorphic vertex-disjoint pair, as `(map1, map2)` with
/// both orders of each unordered pair present.
pub fn find_all_pairs(c: &EdgeColouring, h: &Graph, budget: u64) -> Result<Search<Vec<MapPair>>> {
    check_pattern(h)?;
    if 2 * h.vertex_count() > c.n() {
        return Ok(Search::Found(Vec::new()));
    }
    let index = c.index();
    let engine = Engine::new(c, &index, h, &[], false);
    let mut all = Vec::new();
    let (done, nodes) = engine.run(&[], &[], budget, &mut |m1, m2| {
        all.push((m1.to_vec(), m2.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(match done {
        Completion::Budget => Search::Inconclusive { nodes },
        _ => Search::Found(all),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rainbow_has_no_pair() {
        let c = EdgeColouring::rainbow(8);
        for h in [Graph::complete(2), Graph::path(2), Graph::cycle(4).unwrap()] {
            assert_eq!(find_pair(&c, &h, DEFAULT_BUDGET).unwrap(), Search::Exhausted);
        }
    }

    #[test]
    fn two_matching_in_k4() {
        let c = EdgeColouring::from_fn(4, |u, v| match (u, v) {
            (0, 1) | (2, 3) => 100,
            _ => (u * 4 + v) as u64,
        });
        let pair = find_pair(&c, &Graph::complete(2), DEFAULT_BUDGET).unwrap().found().unwrap();
        assert!(pair.check(&c).is_ok());
        let mut got = [pair.map1.clone(), pair.map2.clone()];
        got.iter_mut().for_each(|m| m.sort());
        got.sort();
        assert_eq!(got, [vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn budget_is_distinct_from_none() {
        let c = EdgeColouring::rainbow(12);
        let r = find_pair(&c, &Graph::complete(2), 10).unwrap();
        assert!(matches!(r, Search::Inconclusive { .. }));
    }

    #[test]
    fn oversized_pattern_is_none() {
        let c = EdgeColouring::from_fn(5, |_, _| 0);
        assert_eq!(find_pair(&c, &Graph::path(2), 1000).unwrap(), Search::Exhausted);
    }

    #[test]
    fn round_robin_pairs_are_two_matchings() {
        let c = EdgeColouring::round_robin(6);
        let all = find_all_pairs(&c, &Graph::complete(2), DEFAULT_BUDGET).unwrap().found().unwrap();
        // 5 classes of 3 edges: 6 ordered edge pairs, 4 orientations each
        assert_eq!(all.len(), 5 * 6 * 4);
        let k2 = Graph::complete(2);
        assert!(all.iter().all(|(a, b)| check_pair(&c, &k2, a, b).is_ok()));
    }

    #[test]
    fn record_round_trip() {
        let c = EdgeColouring::round_robin(6);
        let pair = find_pair(&c, &Graph::complete(2), DEFAULT_BUDGET).unwrap().found().unwrap();
        let rec = pair.to_record(&c);
        let json = serde_json::to_string(&rec).unwrap();
        let back = EmbeddedPair::from_record(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, pair);
        assert!(rec.colour_trace.iter().all(|t| t[0] == t[1]));
    }
}
