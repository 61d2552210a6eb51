use serde::Serialize;

use super::codegree::classify;
use super::{
    build_aux_graph, expected_aux_edges, find_clean_subdivision, find_red_kst, greedy_clean_embed, regularize,
    AuxGraph, BipartiteGraph, BlueSummary, CleanSubdivision, RegularizeConfig,
};
use crate::colouring::{ensure_proper, EdgeColouring};
use crate::error::{Error, Result};
use crate::rng::{permutation, stream_rng};
use crate::witness::{EmbeddedPair, Search, WitnessRecord};

/// Smallest `n` the pipeline attempts: room for two disjoint copies of
/// `K_{s,t}^sub`, and at least 8.
pub fn min_pipeline_n(s: usize, t: usize) -> usize {
    (2 * (s + t + s * t)).max(8)
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub s: usize,
    pub t: usize,
    pub seed: u64,
    /// Node budget for each backtracking search.
    pub budget: u64,
    /// Seeded orderings tried; the one with the most auxiliary edges is kept.
    pub orderings: usize,
    /// Use this ordering instead of sampling.
    pub ordering: Option<Vec<usize>>,
    pub regularize: RegularizeConfig,
    /// Cap on `s`-tuples examined for the common blue neighbourhood.
    pub blue_tuple_cap: u64,
}

impl PipelineConfig {
    pub fn new(s: usize, t: usize, seed: u64) -> Self {
        PipelineConfig {
            s,
            t,
            seed,
            budget: 5_000_000,
            orderings: 16,
            ordering: None,
            regularize: RegularizeConfig::default(),
            blue_tuple_cap: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    NotFound,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizedSummary {
    pub m: usize,
    pub b_size: usize,
    pub delta: usize,
    #[serde(rename = "Delta")]
    pub delta_ratio: f64,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrientationReport {
    /// Which auxiliary side plays `A`.
    pub a_side: &'static str,
    pub red_edges: usize,
    pub blue_edges: usize,
    pub blue: BlueSummary,
    pub red_kst: &'static str,
    pub greedy_exclusions: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub ordering_seed: u64,
    /// Stream index of the kept ordering, `None` when supplied.
    pub ordering_stream: Option<usize>,
    pub n: usize,
    pub s: usize,
    pub t: usize,
    pub aux_edges: usize,
    pub expected_aux_edges: Option<f64>,
    pub regularized: Option<RegularizedSummary>,
    pub regularize_error: Option<String>,
    pub red_edges: usize,
    pub blue_edges: usize,
    pub orientations: Vec<OrientationReport>,
    /// `red_kst` or `direct`.
    pub stage: Option<&'static str>,
    pub outcome: Outcome,
    pub reason: Option<String>,
    pub witness: Option<WitnessRecord>,
}

fn search_label<T>(s: &Search<T>) -> &'static str {
    match s {
        Search::Found(_) => "found",
        Search::Exhausted => "exhausted",
        Search::Inconclusive { .. } => "budget",
    }
}

fn choose_ordering(c: &EdgeColouring, cfg: &PipelineConfig) -> Result<(AuxGraph, Option<usize>)> {
    if let Some(ord) = &cfg.ordering {
        return Ok((build_aux_graph(c, ord)?, None));
    }
    let mut best: Option<(AuxGraph, usize)> = None;
    for k in 0..cfg.orderings.max(1) {
        let ord = permutation(c.n(), &mut stream_rng(cfg.seed, k as u64));
        let f = build_aux_graph(c, &ord)?;
        if best.as_ref().is_none_or(|(b, _)| f.edge_count() > b.edge_count()) {
            best = Some((f, k));
        }
    }
    let (f, k) = best.expect("at least one ordering");
    Ok((f, Some(k)))
}

/// Ordering, auxiliary graph, regularization, codegree colouring, red
/// `K_{s,t}` search and greedy embedding; then a direct clean
/// `K_{s,t}^sub` search in the whole auxiliary graph. A returned witness has
/// passed the independent pair checker.
pub fn find_clean_kst_sub(c: &EdgeColouring, cfg: &PipelineConfig) -> Result<(Diagnostics, Option<EmbeddedPair>)> {
    let (s, t) = (cfg.s, cfg.t);
    if s < 2 || t < s {
        return Err(Error::Parameter(format!("need 2 <= s <= t, got s={s}, t={t}")));
    }
    ensure_proper(c)?;
    let n = c.n();
    let mut diag = Diagnostics {
        ordering_seed: cfg.seed,
        ordering_stream: None,
        n,
        s,
        t,
        aux_edges: 0,
        expected_aux_edges: None,
        regularized: None,
        regularize_error: None,
        red_edges: 0,
        blue_edges: 0,
        orientations: Vec::new(),
        stage: None,
        outcome: Outcome::Inconclusive,
        reason: None,
        witness: None,
    };
    if n < min_pipeline_n(s, t) {
        diag.reason = Some(format!("n = {n} is below the pipeline threshold {}", min_pipeline_n(s, t)));
        return Ok((diag, None));
    }
    let (f, stream) = choose_ordering(c, cfg)?;
    diag.ordering_stream = stream;
    diag.aux_edges = f.edge_count();
    diag.expected_aux_edges = Some(expected_aux_edges(c)?);
    if f.edge_count() == 0 {
        diag.outcome = Outcome::NotFound;
        diag.reason = Some("auxiliary graph has no edges".into());
        return Ok((diag, None));
    }
    let mut budget_hit = false;

    match regularize(&f.graph, &cfg.regularize) {
        Ok(rg) => {
            diag.regularized = Some(RegularizedSummary {
                m: rg.m(),
                b_size: rg.right_ids.len(),
                delta: rg.delta,
                delta_ratio: rg.ratio,
                rounds: rg.rounds,
            });
            for (a_side, g) in [("left", rg.graph.clone()), ("right", rg.graph.transposed())] {
                let cc = classify(&g, s, t);
                let red = find_red_kst(&cc, &g, cfg.budget);
                budget_hit |= matches!(red, Search::Inconclusive { .. });
                let mut report = OrientationReport {
                    a_side,
                    red_edges: cc.red.len(),
                    blue_edges: cc.blue.len(),
                    blue: cc.blue_summary(&g, cfg.blue_tuple_cap),
                    red_kst: search_label(&red),
                    greedy_exclusions: None,
                };
                if a_side == "left" {
                    diag.red_edges = report.red_edges;
                    diag.blue_edges = report.blue_edges;
                }
                if let Search::Found((s_side, t_side)) = red {
                    let sub = greedy_clean_embed(&cc, &g, &s_side, &t_side)?;
                    report.greedy_exclusions = Some(sub.exclusions.clone());
                    diag.orientations.push(report);
                    return finish(c, diag, &g, &sub, "red_kst");
                }
                diag.orientations.push(report);
            }
        }
        Err(e @ (Error::DegenerateOutput(_) | Error::DegenerateInput(_))) => {
            diag.regularize_error = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }

    for g in [f.graph.clone(), f.graph.transposed()] {
        match find_clean_subdivision(&g, s, t, cfg.budget) {
            Search::Found(sub) => return finish(c, diag, &g, &sub, "direct"),
            Search::Inconclusive { .. } => budget_hit = true,
            Search::Exhausted => {}
        }
    }
    if budget_hit {
        diag.outcome = Outcome::Inconclusive;
        diag.reason = Some("search budget exhausted".into());
    } else {
        diag.outcome = Outcome::NotFound;
        diag.reason = Some("no clean K_{s,t}^sub in the auxiliary graph of the chosen ordering".into());
    }
    Ok((diag, None))
}

fn finish(
    c: &EdgeColouring,
    mut diag: Diagnostics,
    g: &BipartiteGraph,
    sub: &CleanSubdivision,
    stage: &'static str,
) -> Result<(Diagnostics, Option<EmbeddedPair>)> {
    if !sub.is_clean(g) || !sub.is_embedded(g) {
        return Err(Error::ContractViolation("subdivision is not a clean embedded copy".into()));
    }
    let pair = sub.to_pair(g)?;
    pair.check(c).map_err(|e| Error::ContractViolation(format!("projected witness rejected: {e:?}")))?;
    diag.stage = Some(stage);
    diag.outcome = Outcome::Found;
    diag.witness = Some(pair.to_record(c));
    Ok((diag, Some(pair)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::check_pair;

    #[test]
    fn rainbow_is_not_found() {
        let c = EdgeColouring::rainbow(20);
        let (d, w) = find_clean_kst_sub(&c, &PipelineConfig::new(2, 2, 1)).unwrap();
        assert_eq!(d.outcome, Outcome::NotFound);
        assert_eq!(d.aux_edges, 0);
        assert!(w.is_none());
    }

    #[test]
    fn small_n_is_inconclusive() {
        let c = EdgeColouring::rainbow(10);
        let (d, _) = find_clean_kst_sub(&c, &PipelineConfig::new(2, 2, 1)).unwrap();
        assert_eq!(d.outcome, Outcome::Inconclusive);
        assert!(d.reason.unwrap().contains("threshold"));
    }

    #[test]
    fn bad_parameters() {
        let c = EdgeColouring::rainbow(20);
        assert!(find_clean_kst_sub(&c, &PipelineConfig::new(1, 2, 1)).is_err());
        assert!(find_clean_kst_sub(&c, &PipelineConfig::new(3, 2, 1)).is_err());
        let improper = EdgeColouring::from_fn(20, |_, _| 0);
        assert!(matches!(
            find_clean_kst_sub(&improper, &PipelineConfig::new(2, 2, 1)),
            Err(Error::ImproperColouring { .. })
        ));
    }

    #[test]
    fn planted_pair_found_with_supplied_ordering() {
        let p = crate::plant::plant_kst_sub(24, 2, 2, 5, 30).unwrap();
        let mut cfg = PipelineConfig::new(2, 2, 0);
        cfg.ordering = p.ordering.clone();
        let (d, w) = find_clean_kst_sub(&p.colouring, &cfg).unwrap();
        assert_eq!(d.outcome, Outcome::Found, "{d:?}");
        let w = w.unwrap();
        assert!(check_pair(&p.colouring, &w.pattern, &w.map1, &w.map2).is_ok());
        assert_eq!(d.witness.unwrap().map1, w.map1);
    }

    #[test]
    fn sampled_orderings_are_sound() {
        let c = EdgeColouring::round_robin(24);
        let (d, w) = find_clean_kst_sub(&c, &PipelineConfig::new(2, 2, 7)).unwrap();
        assert!(d.aux_edges > 0);
        assert_eq!(d.outcome == Outcome::Found, w.is_some());
        if let Some(w) = w {
            assert!(check_pair(&c, &w.pattern, &w.map1, &w.map2).is_ok());
        }
    }
}
