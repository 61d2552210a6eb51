use std::collections::BTreeSet;
use std::sync::Arc;

use coloriso::colouring::{is_proper, read_csv, vizing_properize, write_csv, EdgeColouring};
use coloriso::correspondence::{constraint_number, glue, sample_pairs};
use coloriso::graph::Graph;
use coloriso::lower::build_aux_graph;
use coloriso::plant::plant_pair;
use coloriso::rng::{permutation, stream_rng};
use coloriso::trees::{random_rooted_tree, RootedTree};
use coloriso::witness::{find_pair, Search, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::Rng;

fn colouring(n: usize, palette: u64, seed: u64) -> EdgeColouring {
    let mut rng = stream_rng(seed, 9);
    EdgeColouring::from_fn(n, |_, _| rng.gen_range(0..palette))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip(n in 2usize..20, palette in 1u64..50, seed: u64) {
        let c = colouring(n, palette, seed);
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn properize_is_a_proper_refinement(n in 2usize..24, palette in 1u64..12, seed: u64) {
        let c = colouring(n, palette, seed);
        let p = vizing_properize(&c);
        prop_assert!(is_proper(&p.colouring));
        prop_assert!(p.colouring.palette().len() <= (p.bound + 1) * c.palette().len());
        for (u, v, col) in c.edges() {
            prop_assert_eq!(p.original_of(p.colouring.colour(u, v)), col);
        }
    }

    #[test]
    fn constraint_number_bounds(n in 3usize..9, p in 1usize..5, seed: u64) {
        let mut rng = stream_rng(seed, 0);
        let t = Arc::new(random_rooted_tree(n, &mut rng).unwrap());
        let r = t.root_count();
        let (x, y): (Vec<usize>, Vec<usize>) = ((0..r).collect(), (r..2 * r).collect());
        let pairs = sample_pairs(&t, p, 2 * n + 6, &mut rng).unwrap();
        let sys = glue(&pairs, (&x, &y)).unwrap();
        let k = constraint_number(&sys);
        let support: BTreeSet<_> = sys.h1_edges().iter().chain(sys.h2_edges()).collect();
        prop_assert!(k >= t.edge_count());
        prop_assert!(k < support.len());
        if !sys.shares_edges() {
            prop_assert!(k >= sys.h1_edges().len().max(sys.h2_edges().len()));
        }
    }

    #[test]
    fn found_pairs_are_colour_isomorphic(n in 6usize..14, palette in 2u64..8, seed: u64) {
        let c = vizing_properize(&colouring(n, palette, seed)).colouring;
        for h in [Graph::path(2), Graph::star(3), Graph::cycle(4).unwrap()] {
            if let Search::Found(w) = find_pair(&c, &h, DEFAULT_BUDGET).unwrap() {
                prop_assert!(w.map1.iter().all(|v| !w.map2.contains(v)));
                for &(u, v) in h.edges() {
                    prop_assert_eq!(c.colour(w.map1[u], w.map1[v]), c.colour(w.map2[u], w.map2[v]));
                }
            }
        }
    }

    #[test]
    fn planted_pairs_are_found(n in 10usize..24, seed: u64) {
        let h = Graph::cycle(4).unwrap();
        let p = plant_pair(n, &h, seed, n).unwrap();
        prop_assert!(find_pair(&p.colouring, &h, DEFAULT_BUDGET).unwrap().is_found());
    }

    #[test]
    fn aux_edges_are_monochromatic_2matchings(n in 8usize..20, palette in 2u64..10, seed: u64) {
        let c = vizing_properize(&colouring(n, palette, seed)).colouring;
        let ord = permutation(n, &mut stream_rng(seed, 1));
        let f = build_aux_graph(&c, &ord).unwrap();
        let m = n / 4;
        let mut count = 0;
        for &x1 in &ord[..m] {
            for &x2 in &ord[m..2 * m] {
                for &y1 in &ord[2 * m..3 * m] {
                    for &y2 in &ord[3 * m..4 * m] {
                        count += usize::from(c.colour(x1, y1) == c.colour(x2, y2));
                    }
                }
            }
        }
        prop_assert_eq!(f.edge_count(), count);
        for &(l, r) in &f.graph.edges {
            let ([x1, x2], [y1, y2]) = (f.graph.left_labels[l], f.graph.right_labels[r]);
            prop_assert_eq!(c.colour(x1, y1), c.colour(x2, y2));
        }
    }

    #[test]
    fn path_density_is_len_over_len_minus_one(len in 2usize..12) {
        let t = RootedTree::path_rooted_at_ends(len).unwrap();
        let rho = coloriso::trees::density(&t).unwrap();
        prop_assert_eq!(*rho.numer() * (len as u64 - 1), *rho.denom() * len as u64);
    }
}
