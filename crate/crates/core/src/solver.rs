//! Verification and search for RBCDN-reducing link augmentations.
//!
//! [`verify_augmentation`] is the polynomial certificate check: it prices a
//! set of added links and recomputes the RBCDN of the augmented network.
//! [`solve_exact`] is a depth-first branch-and-bound over the finite-cost
//! candidate links and returns the cheapest augmentation (ties broken by the
//! lexicographically smallest sorted link list). [`solve_greedy`] is a
//! baseline that adds the best decrease-per-cost link until it gets stuck.

use crate::fault::{rbcdn, CatalogSpec, FailureEvent};
use crate::graph::{norm_pair, EdgeCost, Graph, GraphError, NodeId};
use crate::reduction::{InstanceError, RbcdnRpInstance};

type Pair = (NodeId, NodeId);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("{0}-{1} is not a missing link of the instance")]
    NotComplementEdge(NodeId, NodeId),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A set of added links, its price, and the RBCDN it leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmentation {
    /// Sorted, each pair stored as `(min, max)`.
    pub links: Vec<Pair>,
    pub total_cost: EdgeCost,
    pub achieved_rbcdn: usize,
    /// Failure event attaining `achieved_rbcdn` in the augmented network.
    pub witness: FailureEvent,
    /// Cost within the budget and RBCDN reduced by at least the target.
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Feasible,
    Infeasible,
    /// Some augmentation reaches the target, but none within the budget.
    BudgetExceeded,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::BudgetExceeded => "budget_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub best: Option<Augmentation>,
    pub nodes_explored: u64,
}

/// Prices `links` and recomputes the RBCDN of the augmented network with a
/// catalog rebuilt for it under the instance semantics.
pub fn verify_augmentation(inst: &RbcdnRpInstance, links: &[Pair]) -> Result<Augmentation, SolveError> {
    let mut sorted: Vec<Pair> = links.iter().map(|&(u, v)| norm_pair(u, v)).collect();
    sorted.sort_unstable();
    let mut total_cost = EdgeCost::ZERO;
    for &(u, v) in &sorted {
        let c = inst.cost(u, v).ok_or(SolveError::NotComplementEdge(u, v))?;
        total_cost = total_cost + c;
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        let (u, v) = sorted.windows(2).find(|w| w[0] == w[1]).expect("checked")[0];
        return Err(SolveError::NotComplementEdge(u, v));
    }
    let graph = inst.base_graph().with_links(&sorted)?;
    let catalog = inst.catalog_for(&graph)?;
    let result = rbcdn(&graph, &catalog)?;
    let feasible = total_cost.within(inst.budget()) && result.value <= inst.required_rbcdn();
    Ok(Augmentation {
        links: sorted,
        total_cost,
        achieved_rbcdn: result.value,
        witness: catalog.event(result.witness).clone(),
        feasible,
    })
}

/// Semantics under which adding links never raises the RBCDN.
fn monotone(spec: CatalogSpec) -> bool {
    match spec {
        CatalogSpec::Unit | CatalogSpec::Sampled { .. } => true,
        CatalogSpec::Geometric => false,
    }
}

struct Evaluator<'a> {
    inst: &'a RbcdnRpInstance,
    base: &'a Graph,
}

impl Evaluator<'_> {
    fn rbcdn_with(&self, links: &[Pair]) -> Result<usize, SolveError> {
        let g = self.base.with_links(links)?;
        let catalog = self.inst.catalog_for(&g)?;
        Ok(rbcdn(&g, &catalog)?.value)
    }
}

struct BranchAndBound<'a> {
    eval: Evaluator<'a>,
    cands: Vec<(Pair, u64)>,
    /// `zero_from[i]`: some candidate at index >= i costs nothing.
    zero_from: Vec<bool>,
    required: usize,
    budget: u64,
    prune_monotone: bool,
    best: Option<(u64, Vec<Pair>)>,
    nodes: u64,
}

impl BranchAndBound<'_> {
    fn run(&mut self) -> Result<(), SolveError> {
        let mut chosen = Vec::new();
        self.dfs(0, &mut chosen, 0)
    }

    fn record(&mut self, cost: u64, chosen: &[Pair]) {
        let mut links = chosen.to_vec();
        links.sort_unstable();
        let better = match &self.best {
            None => true,
            Some((c, l)) => cost < *c || (cost == *c && links < *l),
        };
        if better {
            self.best = Some((cost, links));
        }
    }

    fn dfs(&mut self, i: usize, chosen: &mut Vec<Pair>, cost: u64) -> Result<(), SolveError> {
        self.nodes += 1;
        let best_cost = self.best.as_ref().map(|b| b.0);
        if best_cost.is_some_and(|b| cost > b) {
            return Ok(());
        }
        let feasible = self.eval.rbcdn_with(chosen)? <= self.required;
        if feasible {
            self.record(cost, chosen);
            if !self.zero_from[i] {
                return Ok(());
            }
        }
        if i == self.cands.len() {
            return Ok(());
        }
        if !feasible {
            // at least one more link is needed, and none is cheaper than cands[i]
            let limit = best_cost.map_or(self.budget, |b| b.min(self.budget));
            if cost.saturating_add(self.cands[i].1) > limit {
                return Ok(());
            }
            if self.prune_monotone {
                let mut all = chosen.clone();
                all.extend(self.cands[i..].iter().map(|c| c.0));
                if self.eval.rbcdn_with(&all)? > self.required {
                    return Ok(());
                }
            }
        }
        let (pair, c) = self.cands[i];
        if let Some(next) = cost.checked_add(c).filter(|&x| x <= self.budget) {
            chosen.push(pair);
            self.dfs(i + 1, chosen, next)?;
            chosen.pop();
        }
        self.dfs(i + 1, chosen, cost)
    }
}

fn search(inst: &RbcdnRpInstance, budget: u64) -> Result<BranchAndBound<'_>, SolveError> {
    let cands = inst.candidate_links();
    let mut zero_from = vec![false; cands.len() + 1];
    for i in (0..cands.len()).rev() {
        zero_from[i] = zero_from[i + 1] || cands[i].1 == 0;
    }
    let mut bb = BranchAndBound {
        eval: Evaluator {
            inst,
            base: inst.base_graph(),
        },
        cands,
        zero_from,
        required: inst.required_rbcdn(),
        budget,
        prune_monotone: monotone(inst.catalog_spec()),
        best: None,
        nodes: 0,
    };
    bb.run()?;
    Ok(bb)
}

/// Minimum-cost augmentation that lowers the RBCDN by the instance target
/// within its budget.
pub fn solve_exact(inst: &RbcdnRpInstance) -> Result<SolveReport, SolveError> {
    let bb = search(inst, inst.budget())?;
    let mut nodes = bb.nodes;
    if let Some((_, links)) = bb.best {
        let aug = verify_augmentation(inst, &links)?;
        debug_assert!(aug.feasible);
        return Ok(SolveReport {
            status: SolveStatus::Feasible,
            best: Some(aug),
            nodes_explored: nodes,
        });
    }
    let status = if reachable_ignoring_budget(inst, &mut nodes)? {
        SolveStatus::BudgetExceeded
    } else {
        SolveStatus::Infeasible
    };
    Ok(SolveReport {
        status,
        best: None,
        nodes_explored: nodes,
    })
}

/// Whether any set of finite-cost candidates reaches the target, whatever
/// its price.
fn reachable_ignoring_budget(inst: &RbcdnRpInstance, nodes: &mut u64) -> Result<bool, SolveError> {
    let eval = Evaluator {
        inst,
        base: inst.base_graph(),
    };
    let all: Vec<Pair> = inst.candidate_links().into_iter().map(|c| c.0).collect();
    *nodes += 1;
    if eval.rbcdn_with(&all)? <= inst.required_rbcdn() {
        return Ok(true);
    }
    if monotone(inst.catalog_spec()) {
        return Ok(false);
    }
    let bb = search(inst, u64::MAX)?;
    *nodes += bb.nodes;
    Ok(bb.best.is_some())
}

/// Greedy baseline: repeatedly add the affordable link with the largest
/// RBCDN decrease per unit cost (ties to the cheaper, then smaller pair)
/// until the target is met or no link helps. A negative answer is not a
/// certificate; the exact search may still succeed.
pub fn solve_greedy(inst: &RbcdnRpInstance) -> Result<SolveReport, SolveError> {
    let eval = Evaluator {
        inst,
        base: inst.base_graph(),
    };
    let cands = inst.candidate_links();
    let mut used = vec![false; cands.len()];
    let mut chosen: Vec<Pair> = Vec::new();
    let mut cost = 0u64;
    let mut current = inst.base_rbcdn().value;
    let mut nodes = 0u64;
    while current > inst.required_rbcdn() {
        let mut pick: Option<(usize, usize, u64)> = None;
        for (i, &(pair, c)) in cands.iter().enumerate() {
            if used[i] || cost.checked_add(c).is_none_or(|x| x > inst.budget()) {
                continue;
            }
            nodes += 1;
            chosen.push(pair);
            let after = eval.rbcdn_with(&chosen)?;
            chosen.pop();
            if after >= current {
                continue;
            }
            let gain = current - after;
            // compare gain / c against the incumbent without dividing
            let better = match pick {
                None => true,
                Some((_, g0, c0)) => (gain as u128) * (c0 as u128) > (g0 as u128) * (c as u128),
            };
            if better {
                pick = Some((i, gain, c));
            }
        }
        let Some((i, gain, c)) = pick else { break };
        used[i] = true;
        chosen.push(cands[i].0);
        cost += c;
        current -= gain;
    }
    let aug = verify_augmentation(inst, &chosen)?;
    let status = if aug.feasible {
        SolveStatus::Feasible
    } else {
        SolveStatus::Infeasible
    };
    Ok(SolveReport {
        status,
        best: aug.feasible.then_some(aug),
        nodes_explored: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::geom::{Layout, PlanePoint};
    use crate::reduction::{build_rbcdn_instance, CostTable};

    fn c5_instance() -> RbcdnRpInstance {
        let es = generate::cycle(5);
        build_rbcdn_instance(&es.graph, &es.rotation).unwrap()
    }

    #[test]
    fn verify_examples() {
        let inst = c5_instance();
        let empty = verify_augmentation(&inst, &[]).unwrap();
        assert_eq!(empty.achieved_rbcdn, 5);
        assert!(!empty.feasible);

        let cycle = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        let aug = verify_augmentation(&inst, &cycle).unwrap();
        assert_eq!(
            (aug.achieved_rbcdn, aug.total_cost, aug.feasible),
            (1, EdgeCost::Finite(5), true)
        );

        let path = verify_augmentation(&inst, &cycle[..4]).unwrap();
        assert_eq!((path.achieved_rbcdn, path.feasible), (2, false));

        let inf = verify_augmentation(&inst, &[(0, 2)]).unwrap();
        assert_eq!(inf.total_cost, EdgeCost::Infinite);
        assert!(!inf.feasible);
    }

    #[test]
    fn verify_rejects_non_complement() {
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.0, 1.0),
        ];
        let layout = Layout::new(pts, vec![(0, 1)]).unwrap();
        let inst = RbcdnRpInstance::new(
            layout,
            0.1,
            CostTable::new(Some(EdgeCost::Finite(1))),
            3,
            0,
            CatalogSpec::Unit,
        )
        .unwrap();
        assert_eq!(
            verify_augmentation(&inst, &[(1, 0)]),
            Err(SolveError::NotComplementEdge(0, 1))
        );
        assert_eq!(
            verify_augmentation(&inst, &[(0, 5)]),
            Err(SolveError::NotComplementEdge(0, 5))
        );
        assert_eq!(
            verify_augmentation(&inst, &[(0, 2), (2, 0)]),
            Err(SolveError::NotComplementEdge(0, 2))
        );
    }

    #[test]
    fn exact_on_c5() {
        let report = solve_exact(&c5_instance()).unwrap();
        assert_eq!(report.status, SolveStatus::Feasible);
        let best = report.best.unwrap();
        assert_eq!(best.total_cost, EdgeCost::Finite(5));
        assert_eq!(best.links, vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn exact_on_star_is_infeasible() {
        let es = generate::star(4);
        let inst = build_rbcdn_instance(&es.graph, &es.rotation).unwrap();
        let report = solve_exact(&inst).unwrap();
        assert_eq!(report.status, SolveStatus::Infeasible);
        assert!(report.best.is_none());
    }

    #[test]
    fn zero_target_needs_nothing() {
        let inst = c5_instance();
        let zero = RbcdnRpInstance::new(
            inst.layout().clone(),
            inst.region_radius(),
            inst.costs().clone(),
            inst.budget(),
            0,
            CatalogSpec::Unit,
        )
        .unwrap();
        for report in [solve_exact(&zero).unwrap(), solve_greedy(&zero).unwrap()] {
            assert_eq!(report.status, SolveStatus::Feasible);
            let best = report.best.unwrap();
            assert!(best.links.is_empty());
            assert_eq!(best.total_cost, EdgeCost::ZERO);
        }
    }

    #[test]
    fn budget_exceeded_is_distinct() {
        let es = generate::cycle(5);
        let inst = build_rbcdn_instance(&es.graph, &es.rotation).unwrap();
        let tight = RbcdnRpInstance::new(
            inst.layout().clone(),
            inst.region_radius(),
            inst.costs().clone(),
            4,
            inst.target(),
            CatalogSpec::Unit,
        )
        .unwrap();
        assert_eq!(solve_exact(&tight).unwrap().status, SolveStatus::BudgetExceeded);
    }

    #[test]
    fn greedy_closes_triangle() {
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.5, 1.0),
        ];
        let layout = Layout::new(pts, vec![(0, 1), (1, 2)]).unwrap();
        let inst = RbcdnRpInstance::new(
            layout,
            0.1,
            CostTable::new(Some(EdgeCost::Finite(1))),
            1,
            1,
            CatalogSpec::Unit,
        )
        .unwrap();
        let report = solve_greedy(&inst).unwrap();
        assert_eq!(report.status, SolveStatus::Feasible);
        assert_eq!(report.best.unwrap().links, vec![(0, 2)]);
    }

    #[test]
    fn greedy_can_miss_what_exact_finds() {
        // no single link helps three isolated points, but a triangle does
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.5, 1.0),
        ];
        let layout = Layout::new(pts, vec![]).unwrap();
        let inst = RbcdnRpInstance::new(
            layout,
            0.1,
            CostTable::new(Some(EdgeCost::Finite(1))),
            3,
            2,
            CatalogSpec::Unit,
        )
        .unwrap();
        assert_eq!(solve_greedy(&inst).unwrap().status, SolveStatus::Infeasible);
        let exact = solve_exact(&inst).unwrap();
        assert_eq!(exact.status, SolveStatus::Feasible);
        assert_eq!(exact.best.unwrap().links, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn zero_cost_links_can_win_ties() {
        // Path 0-1-2 with 0-2 free: closing the triangle costs nothing.
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.5, 1.0),
        ];
        let layout = Layout::new(pts, vec![(0, 1), (1, 2)]).unwrap();
        let mut costs = CostTable::new(None);
        costs.set(0, 2, EdgeCost::ZERO);
        let inst = RbcdnRpInstance::new(layout, 0.1, costs, 0, 1, CatalogSpec::Unit).unwrap();
        let report = solve_exact(&inst).unwrap();
        assert_eq!(report.status, SolveStatus::Feasible);
        assert_eq!(report.best.unwrap().links, vec![(0, 2)]);
    }
}
