//! RBCDN-RP instances and the transformation from Hamiltonian Cycle in a
//! planar graph.
//!
//! Given a planar graph `G` with `n >= 3` nodes, the built instance places
//! the nodes of a crossing-free drawing of `G` in the plane but keeps none of
//! its links. Adding a pair costs 1 if it is a link of `G` and is infinite
//! otherwise, the budget is `n`, and the RBCDN must drop by `n - 1` (from
//! `n` to 1). Such an augmentation exists exactly when `G` has a
//! Hamiltonian cycle: the cycle itself is one, and conversely any
//! augmentation reaching RBCDN 1 is 2-connected, so with at most `n` links
//! it is a spanning cycle made of links of `G`.

use std::collections::BTreeMap;

use crate::fault::{rbcdn, CatalogSpec, FailureCatalog, RbcdnResult};
use crate::geom::{dist_point_segment, min_feature_separation, GeomError, Layout, EPS};
use crate::graph::{complement_edges, norm_pair, EdgeCost, Graph, GraphError, NodeId};
use crate::planar::{embed_components, EmbedError, RotationSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("region radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("no cost given for complement pair {0}-{1}")]
    MissingCost(NodeId, NodeId),
    #[error("cost given for {0}-{1}, which is already a link")]
    CostOnBaseLink(NodeId, NodeId),
    #[error("cost given for {0}-{1}, which is not a node pair of the instance")]
    CostOutOfRange(NodeId, NodeId),
    #[error("reduction target {target} exceeds the instance RBCDN {rbcdn}")]
    TargetTooLarge { target: usize, rbcdn: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Link-addition costs for the node pairs missing from a graph: explicit
/// entries plus an optional default for every pair not listed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CostTable {
    default: Option<EdgeCost>,
    explicit: BTreeMap<(NodeId, NodeId), EdgeCost>,
}

impl CostTable {
    pub fn new(default: Option<EdgeCost>) -> Self {
        CostTable {
            default,
            explicit: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, u: NodeId, v: NodeId, cost: EdgeCost) {
        self.explicit.insert(norm_pair(u, v), cost);
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Option<EdgeCost> {
        self.explicit.get(&norm_pair(u, v)).copied().or(self.default)
    }

    pub fn default_cost(&self) -> Option<EdgeCost> {
        self.default
    }

    pub fn explicit(&self) -> impl Iterator<Item = ((NodeId, NodeId), EdgeCost)> + '_ {
        self.explicit.iter().map(|(k, v)| (*k, *v))
    }
}

/// One RBCDN-RP instance: a laid-out network, the region radius, the cost of
/// every missing link, the budget `C` and the required reduction `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct RbcdnRpInstance {
    layout: Layout,
    region_radius: f64,
    costs: CostTable,
    budget: u64,
    target: usize,
    catalog: CatalogSpec,
    base: RbcdnResult,
}

impl RbcdnRpInstance {
    pub fn new(
        layout: Layout,
        region_radius: f64,
        costs: CostTable,
        budget: u64,
        target: usize,
        catalog: CatalogSpec,
    ) -> Result<Self, InstanceError> {
        if !(region_radius.is_finite() && region_radius > 0.0) {
            return Err(InstanceError::BadRadius(region_radius));
        }
        let g = layout.graph();
        let n = g.node_count();
        for ((u, v), _) in costs.explicit() {
            if u == v || v >= n {
                return Err(InstanceError::CostOutOfRange(u, v));
            }
            if g.has_link(u, v) {
                return Err(InstanceError::CostOnBaseLink(u, v));
            }
        }
        if costs.default.is_none() {
            if let Some((u, v)) = complement_edges(g)
                .into_iter()
                .find(|&(u, v)| costs.get(u, v).is_none())
            {
                return Err(InstanceError::MissingCost(u, v));
            }
        }
        let catalog_set = catalog.build(&layout, region_radius)?;
        let base = rbcdn(g, &catalog_set)?;
        if target > base.value {
            return Err(InstanceError::TargetTooLarge {
                target,
                rbcdn: base.value,
            });
        }
        Ok(RbcdnRpInstance {
            layout,
            region_radius,
            costs,
            budget,
            target,
            catalog,
            base,
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn base_graph(&self) -> &Graph {
        self.layout.graph()
    }

    pub fn node_count(&self) -> usize {
        self.layout.node_count()
    }

    pub fn region_radius(&self) -> f64 {
        self.region_radius
    }

    pub fn costs(&self) -> &CostTable {
        &self.costs
    }

    /// Cost of adding `u-v`; `None` if the pair is already a link or not a
    /// pair of nodes.
    pub fn cost(&self, u: NodeId, v: NodeId) -> Option<EdgeCost> {
        let n = self.node_count();
        if u == v || u >= n || v >= n || self.base_graph().has_link(u, v) {
            return None;
        }
        self.costs.get(u, v)
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn catalog_spec(&self) -> CatalogSpec {
        self.catalog
    }

    /// RBCDN of the unaugmented network.
    pub fn base_rbcdn(&self) -> RbcdnResult {
        self.base
    }

    /// Largest RBCDN an augmentation may leave: `base - K`.
    pub fn required_rbcdn(&self) -> usize {
        self.base.value - self.target
    }

    /// The instance with a different catalog semantics. The reduction
    /// target is kept, so this fails if it exceeds the new base RBCDN.
    pub fn with_catalog(&self, catalog: CatalogSpec) -> Result<Self, InstanceError> {
        RbcdnRpInstance::new(
            self.layout.clone(),
            self.region_radius,
            self.costs.clone(),
            self.budget,
            self.target,
            catalog,
        )
    }

    /// Catalog for `graph` (the base graph plus some added links) under this
    /// instance's semantics, rebuilt for the augmented drawing.
    pub fn catalog_for(&self, graph: &Graph) -> Result<FailureCatalog, InstanceError> {
        match self.catalog {
            CatalogSpec::Unit => Ok(crate::fault::unit_catalog(graph)),
            spec => {
                let layout = self.layout.with_graph(graph.clone())?;
                Ok(spec.build(&layout, self.region_radius)?)
            }
        }
    }

    /// Complement pairs of finite cost that can be drawn as links: under
    /// non-unit semantics a pair whose segment runs through another node or
    /// along an existing link is left out. Sorted by `(cost, pair)`.
    pub fn candidate_links(&self) -> Vec<((NodeId, NodeId), u64)> {
        let g = self.base_graph();
        let geometric = self.catalog != CatalogSpec::Unit;
        let mut out: Vec<_> = complement_edges(g)
            .into_iter()
            .filter_map(|(u, v)| {
                let c = self.costs.get(u, v)?.finite()?;
                if geometric && (self.link_hits_node(u, v) || !self.drawable(u, v)) {
                    return None;
                }
                Some(((u, v), c))
            })
            .collect();
        out.sort_by_key(|&(pair, c)| (c, pair));
        out
    }

    fn drawable(&self, u: NodeId, v: NodeId) -> bool {
        self.base_graph()
            .with_links(&[(u, v)])
            .is_ok_and(|g| self.layout.with_graph(g).is_ok())
    }

    fn link_hits_node(&self, u: NodeId, v: NodeId) -> bool {
        let seg = crate::geom::PlaneSegment {
            a: self.layout.point(u),
            b: self.layout.point(v),
        };
        (0..self.node_count()).any(|w| w != u && w != v && dist_point_segment(self.layout.point(w), &seg) <= EPS)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReductionError {
    #[error("the reduction needs at least 3 nodes, got {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A third of the smallest feature separation, comfortably below the half
/// at which one disk could reach two separated features.
pub fn choose_region_radius(layout: &Layout) -> Result<f64, GeomError> {
    Ok(min_feature_separation(layout)? / 3.0)
}

/// Builds the RBCDN-RP instance for a planar graph with a planar rotation
/// system. Disconnected graphs are drawn component by component; they
/// produce valid instances that simply have no feasible augmentation.
pub fn build_rbcdn_instance(g: &Graph, rot: &RotationSystem) -> Result<RbcdnRpInstance, ReductionError> {
    let n = g.node_count();
    if n < 3 {
        return Err(ReductionError::TooSmall(n));
    }
    let drawing = embed_components(g, rot)?.to_layout()?;
    let points = drawing.points_only();
    let r = choose_region_radius(&points)?;
    let mut costs = CostTable::new(Some(EdgeCost::Infinite));
    for &(u, v) in g.links() {
        costs.set(u, v, EdgeCost::Finite(1));
    }
    Ok(RbcdnRpInstance::new(
        points,
        r,
        costs,
        n as u64,
        n - 1,
        CatalogSpec::Unit,
    )?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("augmentation link {0}-{1} has infinite cost")]
    InfiniteCostEdge(NodeId, NodeId),
    #[error("augmentation link {0}-{1} is not a link of the source graph")]
    NotInSource(NodeId, NodeId),
    #[error("augmentation is not a spanning cycle: {0}")]
    NotACycle(String),
}

/// Reads the Hamiltonian cycle of `original` off a feasible augmentation of
/// an instance built by [`build_rbcdn_instance`]. The cycle starts at node 0
/// and heads to its smaller neighbour first.
pub fn extract_hamiltonian_cycle(
    inst: &RbcdnRpInstance,
    links: &[(NodeId, NodeId)],
    original: &Graph,
) -> Result<Vec<NodeId>, ExtractError> {
    let n = inst.node_count();
    for &(u, v) in links {
        match inst.cost(u, v) {
            Some(EdgeCost::Finite(_)) => {}
            _ => return Err(ExtractError::InfiniteCostEdge(u, v)),
        }
        if !original.has_link(u, v) {
            return Err(ExtractError::NotInSource(u, v));
        }
    }
    if links.len() != n {
        return Err(ExtractError::NotACycle(format!("{} links for {n} nodes", links.len())));
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in links {
        adj[u].push(v);
        adj[v].push(u);
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() != 2) {
        return Err(ExtractError::NotACycle(format!("node {v} has degree {}", adj[v].len())));
    }
    let mut cycle = vec![0];
    let mut prev = 0;
    let mut cur = *adj[0].iter().min().expect("degree 2");
    while cur != 0 {
        cycle.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != n {
        return Err(ExtractError::NotACycle(format!(
            "links split into several cycles, the one through node 0 has {} nodes",
            cycle.len()
        )));
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fault::unit_catalog;
    use crate::generate;
    use crate::geom::PlanePoint;

    #[test]
    fn radius_rule() {
        let two = Layout::new(vec![PlanePoint::new(0.0, 0.0), PlanePoint::new(3.0, 0.0)], vec![]).unwrap();
        assert_eq!(choose_region_radius(&two).unwrap(), 1.0);
        let square: Vec<_> = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
            .iter()
            .map(|&(x, y)| PlanePoint::new(x, y))
            .collect();
        let r = choose_region_radius(&Layout::new(square, vec![]).unwrap()).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn k4_instance() {
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(4.0, 0.0),
            PlanePoint::new(2.0, 4.0),
            PlanePoint::new(2.0, 1.0),
        ];
        let layout = Layout::new(pts, vec![(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3)]).unwrap();
        let rot = RotationSystem::from_layout(&layout);
        let inst = build_rbcdn_instance(layout.graph(), &rot).unwrap();
        assert_eq!(inst.node_count(), 4);
        assert_eq!(inst.base_graph().link_count(), 0);
        assert_eq!((inst.budget(), inst.target()), (4, 3));
        let pairs = complement_edges(inst.base_graph());
        assert_eq!(pairs.len(), 6);
        assert!(pairs.iter().all(|&(u, v)| inst.cost(u, v) == Some(EdgeCost::Finite(1))));
        assert_eq!(inst.catalog_spec(), CatalogSpec::Unit);
    }

    #[test]
    fn c5_instance_costs() {
        let es = generate::cycle(5);
        let inst = build_rbcdn_instance(&es.graph, &es.rotation).unwrap();
        assert_eq!((inst.budget(), inst.target()), (5, 4));
        let pairs = complement_edges(inst.base_graph());
        assert_eq!(pairs.len(), 10);
        let finite = pairs
            .iter()
            .filter(|&&(u, v)| inst.cost(u, v).unwrap().is_finite())
            .count();
        assert_eq!(finite, 5);
        assert_eq!(inst.candidate_links().len(), 5);
        let base = inst.base_graph();
        assert_eq!(rbcdn(base, &unit_catalog(base)).unwrap().value, 5);
        assert_eq!(inst.base_rbcdn().value, 5);
    }

    #[test]
    fn extraction() {
        let es = generate::cycle(5);
        let inst = build_rbcdn_instance(&es.graph, &es.rotation).unwrap();
        let links = es.graph.links().to_vec();
        assert_eq!(
            extract_hamiltonian_cycle(&inst, &links, &es.graph).unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        let mut bad = links.clone();
        bad[0] = (0, 2);
        assert_eq!(
            extract_hamiltonian_cycle(&inst, &bad, &es.graph),
            Err(ExtractError::InfiniteCostEdge(0, 2))
        );
        assert!(matches!(
            extract_hamiltonian_cycle(&inst, &links[..4], &es.graph),
            Err(ExtractError::NotACycle(_))
        ));
    }

    #[test]
    fn two_disjoint_triangles_rejected_as_cycle() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let rot = RotationSystem::new(vec![
            vec![1, 2],
            vec![2, 0],
            vec![0, 1],
            vec![4, 5],
            vec![5, 3],
            vec![3, 4],
        ]);
        let inst = build_rbcdn_instance(&g, &rot).unwrap();
        assert!(matches!(
            extract_hamiltonian_cycle(&inst, g.links(), &g),
            Err(ExtractError::NotACycle(_))
        ));
    }

    #[test]
    fn instance_validation() {
        let pts = vec![
            PlanePoint::new(0.0, 0.0),
            PlanePoint::new(1.0, 0.0),
            PlanePoint::new(0.0, 1.0),
        ];
        let layout = Layout::new(pts, vec![(0, 1)]).unwrap();
        let mut costs = CostTable::new(None);
        costs.set(0, 2, EdgeCost::Finite(1));
        assert_eq!(
            RbcdnRpInstance::new(layout.clone(), 0.1, costs.clone(), 1, 0, CatalogSpec::Unit),
            Err(InstanceError::MissingCost(1, 2))
        );
        costs.set(1, 2, EdgeCost::Infinite);
        assert!(RbcdnRpInstance::new(layout.clone(), 0.1, costs.clone(), 1, 0, CatalogSpec::Unit).is_ok());
        assert_eq!(
            RbcdnRpInstance::new(layout.clone(), 0.1, costs.clone(), 1, 4, CatalogSpec::Unit),
            Err(InstanceError::TargetTooLarge { target: 4, rbcdn: 3 })
        );
        assert_eq!(
            RbcdnRpInstance::new(layout.clone(), 0.0, costs.clone(), 1, 0, CatalogSpec::Unit),
            Err(InstanceError::BadRadius(0.0))
        );
        let mut on_link = costs.clone();
        on_link.set(1, 0, EdgeCost::Finite(1));
        assert_eq!(
            RbcdnRpInstance::new(layout, 0.1, on_link, 1, 0, CatalogSpec::Unit),
            Err(InstanceError::CostOnBaseLink(0, 1))
        );
    }

    #[test]
    fn too_small_for_reduction() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let rot = RotationSystem::new(vec![vec![1], vec![0]]);
        assert_eq!(build_rbcdn_instance(&g, &rot).unwrap_err(), ReductionError::TooSmall(2));
    }
}
