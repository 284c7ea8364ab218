use proptest::prelude::*;
use rbcdn::graph::complement_edges;
use rbcdn::{
    solve_exact, solve_greedy, verify_augmentation, CatalogSpec, CostTable, EdgeCost, Layout, NodeId, PlanePoint,
    RbcdnRpInstance, SolveStatus,
};

type Pair = (NodeId, NodeId);

fn layout_strategy() -> impl Strategy<Value = Layout> {
    (3usize..=6)
        .prop_flat_map(|n| {
            (
                proptest::collection::btree_set((0i32..6, 0i32..6), n),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_filter_map("layout rejected", |(cells, pick)| {
            let pts: Vec<_> = cells
                .iter()
                .map(|&(x, y)| PlanePoint::new(x as f64 + 0.13 * y as f64, y as f64 + 0.07 * x as f64))
                .collect();
            let n = pts.len();
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let links: Vec<_> = pairs
                .zip(pick)
                .filter(|(_, keep)| *keep)
                .map(|(p, _)| p)
                .take(n)
                .collect();
            Layout::new(pts, links).ok()
        })
}

fn instance_strategy(catalog: CatalogSpec) -> impl Strategy<Value = RbcdnRpInstance> {
    (
        layout_strategy(),
        proptest::collection::vec(prop_oneof![3 => 0u64..4, 1 => Just(u64::MAX)], 15),
        0u64..8,
        0usize..4,
    )
        .prop_filter_map("instance rejected", move |(layout, raw, budget, target)| {
            let mut costs = CostTable::new(None);
            for (&(u, v), &c) in complement_edges(layout.graph()).iter().zip(raw.iter().cycle()) {
                let c = if c == u64::MAX {
                    EdgeCost::Infinite
                } else {
                    EdgeCost::Finite(c)
                };
                costs.set(u, v, c);
            }
            RbcdnRpInstance::new(layout, 0.2, costs, budget, target, catalog).ok()
        })
}

/// Cheapest feasible subset of the candidates, smallest sorted link list
/// among ties, and whether any subset reaches the target at all.
fn brute_force(inst: &RbcdnRpInstance) -> (Option<(EdgeCost, Vec<Pair>)>, bool) {
    let cands: Vec<Pair> = inst.candidate_links().into_iter().map(|c| c.0).collect();
    assert!(cands.len() <= 15);
    let mut best: Option<(EdgeCost, Vec<Pair>)> = None;
    let mut reachable = false;
    for mask in 0u32..1 << cands.len() {
        let links: Vec<Pair> = (0..cands.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cands[i])
            .collect();
        let aug = verify_augmentation(inst, &links).unwrap();
        reachable |= aug.achieved_rbcdn <= inst.required_rbcdn();
        if aug.feasible {
            let key = (aug.total_cost, aug.links);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    (best, reachable)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_matches_exhaustive_search(inst in instance_strategy(CatalogSpec::Unit)) {
        let report = solve_exact(&inst).unwrap();
        let (best, reachable) = brute_force(&inst);
        match best {
            Some((cost, links)) => {
                prop_assert_eq!(report.status, SolveStatus::Feasible);
                let got = report.best.unwrap();
                prop_assert_eq!(got.total_cost, cost);
                prop_assert_eq!(got.links, links);
                prop_assert!(got.feasible);
            }
            None => {
                let expected = if reachable { SolveStatus::BudgetExceeded } else { SolveStatus::Infeasible };
                prop_assert_eq!(report.status, expected);
                prop_assert!(report.best.is_none());
            }
        }
    }

    #[test]
    fn exact_matches_exhaustive_search_sampled(
        inst in instance_strategy(CatalogSpec::Sampled { samples: 150, seed: 3 })
    ) {
        let report = solve_exact(&inst).unwrap();
        let (best, _) = brute_force(&inst);
        prop_assert_eq!(report.best.map(|a| (a.total_cost, a.links)), best);
    }

    #[test]
    fn greedy_never_beats_exact(inst in instance_strategy(CatalogSpec::Unit)) {
        let greedy = solve_greedy(&inst).unwrap();
        prop_assert_ne!(greedy.status, SolveStatus::BudgetExceeded);
        if let Some(g) = greedy.best {
            prop_assert!(g.feasible);
            let exact = solve_exact(&inst).unwrap().best.unwrap();
            prop_assert!(exact.total_cost <= g.total_cost);
        }
    }

    #[test]
    fn adding_links_never_raises_rbcdn(
        inst in instance_strategy(CatalogSpec::Unit),
        sampled in any::<bool>(),
        mask in any::<u32>(),
        extra in any::<u32>(),
    ) {
        let inst = if sampled {
            inst.with_catalog(CatalogSpec::Sampled { samples: 200, seed: 11 }).unwrap()
        } else {
            inst
        };
        let cands: Vec<Pair> = inst.candidate_links().into_iter().map(|c| c.0).collect();
        let small: Vec<Pair> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
        let large: Vec<Pair> = (0..cands.len()).filter(|i| (mask | extra) >> i & 1 == 1).map(|i| cands[i]).collect();
        let a = verify_augmentation(&inst, &small).unwrap();
        let b = verify_augmentation(&inst, &large).unwrap();
        prop_assert!(b.achieved_rbcdn <= a.achieved_rbcdn);
    }
}
