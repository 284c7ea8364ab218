//! Simple undirected graphs, link costs, and the connectivity queries the
//! fault model and the solver lean on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

pub type NodeId = usize;
pub type LinkId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate link {0}-{1}")]
    DuplicateLink(NodeId, NodeId),
    #[error("link {0}-{1} references a node outside 0..{2}")]
    NodeOutOfRange(NodeId, NodeId, usize),
    #[error("event is not closed: surviving link {link} touches failed node {node}")]
    UnclosedEvent { link: LinkId, node: NodeId },
    #[error("event references link {0}, graph has {1} links")]
    LinkOutOfRange(LinkId, usize),
    #[error("event references node {0}, graph has {1} nodes")]
    EventNodeOutOfRange(NodeId, usize),
}

/// Orders an unordered pair as `(min, max)`.
pub fn norm_pair(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Immutable simple undirected graph on nodes `0..n`.
///
/// Links keep the order they were given in (so link ids are stable) but are
/// stored with the smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    links: Vec<(NodeId, NodeId)>,
    adj: Vec<Vec<NodeId>>,
    incident: Vec<Vec<LinkId>>,
}

impl Graph {
    pub fn new(n: usize, links: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let mut adj = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        for (u, v) in links {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = norm_pair(u, v);
            if !seen.insert(e) {
                return Err(GraphError::DuplicateLink(e.0, e.1));
            }
            adj[u].push(v);
            adj[v].push(u);
            incident[u].push(out.len());
            incident[v].push(out.len());
            out.push(e);
        }
        Ok(Graph {
            n,
            links: out,
            adj,
            incident,
        })
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::new(n, []).expect("edgeless graph needs n >= 1")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs three nodes");
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path is valid")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[(NodeId, NodeId)] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> (NodeId, NodeId) {
        self.links[id]
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn incident_links(&self, v: NodeId) -> &[LinkId] {
        &self.incident[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn has_link(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn link_id(&self, u: NodeId, v: NodeId) -> Option<LinkId> {
        let e = norm_pair(u, v);
        self.links.iter().position(|l| *l == e)
    }

    /// A new graph with `extra` appended after the existing links.
    pub fn with_links(&self, extra: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        Graph::new(self.n, self.links.iter().copied().chain(extra.iter().copied()))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, links=[", self.n)?;
        for (i, (u, v)) in self.links.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Cost of adding a link. `Infinite` absorbs addition and exceeds every
/// finite budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeCost {
    Finite(u64),
    Infinite,
}

impl EdgeCost {
    pub const ZERO: EdgeCost = EdgeCost::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, EdgeCost::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            EdgeCost::Finite(c) => Some(c),
            EdgeCost::Infinite => None,
        }
    }

    pub fn within(self, budget: u64) -> bool {
        matches!(self, EdgeCost::Finite(c) if c <= budget)
    }
}

impl Add for EdgeCost {
    type Output = EdgeCost;

    fn add(self, rhs: EdgeCost) -> EdgeCost {
        match (self, rhs) {
            (EdgeCost::Finite(a), EdgeCost::Finite(b)) => a.checked_add(b).map_or(EdgeCost::Infinite, EdgeCost::Finite),
            _ => EdgeCost::Infinite,
        }
    }
}

impl std::iter::Sum for EdgeCost {
    fn sum<I: Iterator<Item = EdgeCost>>(iter: I) -> EdgeCost {
        iter.fold(EdgeCost::ZERO, Add::add)
    }
}

impl Ord for EdgeCost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (EdgeCost::Finite(a), EdgeCost::Finite(b)) => a.cmp(b),
            (EdgeCost::Finite(_), EdgeCost::Infinite) => Ordering::Less,
            (EdgeCost::Infinite, EdgeCost::Finite(_)) => Ordering::Greater,
            (EdgeCost::Infinite, EdgeCost::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for EdgeCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeCost::Finite(c) => write!(f, "{c}"),
            EdgeCost::Infinite => write!(f, "inf"),
        }
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Component count and a label per node. Labels are dense, numbered in
/// order of each component's lowest node.
pub fn connected_components(g: &Graph) -> (usize, Vec<usize>) {
    let mut ds = DisjointSet::new(g.n);
    for &(u, v) in &g.links {
        ds.union(u, v);
    }
    let mut label_of_root = vec![usize::MAX; g.n];
    let mut count = 0;
    let labels = (0..g.n)
        .map(|v| {
            let r = ds.find(v);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = count;
                count += 1;
            }
            label_of_root[r]
        })
        .collect();
    (count, labels)
}

pub fn is_connected(g: &Graph) -> bool {
    connected_components(g).0 == 1
}

/// Nodes and links destroyed together by one region failure.
///
/// Both id lists are kept sorted and deduplicated, which makes the derived
/// equality and ordering canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailureEvent {
    failed_nodes: Vec<NodeId>,
    failed_links: Vec<LinkId>,
}

impl FailureEvent {
    pub fn new(nodes: impl IntoIterator<Item = NodeId>, links: impl IntoIterator<Item = LinkId>) -> Self {
        let mut failed_nodes: Vec<_> = nodes.into_iter().collect();
        let mut failed_links: Vec<_> = links.into_iter().collect();
        failed_nodes.sort_unstable();
        failed_nodes.dedup();
        failed_links.sort_unstable();
        failed_links.dedup();
        FailureEvent {
            failed_nodes,
            failed_links,
        }
    }

    pub fn empty() -> Self {
        FailureEvent::default()
    }

    /// A node together with every link incident on it.
    pub fn node_star(g: &Graph, v: NodeId) -> Self {
        FailureEvent::new([v], g.incident_links(v).iter().copied())
    }

    pub fn single_link(link: LinkId) -> Self {
        FailureEvent::new([], [link])
    }

    pub fn failed_nodes(&self) -> &[NodeId] {
        &self.failed_nodes
    }

    pub fn failed_links(&self) -> &[LinkId] {
        &self.failed_links
    }

    pub fn is_empty(&self) -> bool {
        self.failed_nodes.is_empty() && self.failed_links.is_empty()
    }

    pub fn check(&self, g: &Graph) -> Result<(), GraphError> {
        if let Some(&v) = self.failed_nodes.iter().find(|&&v| v >= g.n) {
            return Err(GraphError::EventNodeOutOfRange(v, g.n));
        }
        if let Some(&l) = self.failed_links.iter().find(|&&l| l >= g.link_count()) {
            return Err(GraphError::LinkOutOfRange(l, g.link_count()));
        }
        for &v in &self.failed_nodes {
            for &l in g.incident_links(v) {
                if self.failed_links.binary_search(&l).is_err() {
                    return Err(GraphError::UnclosedEvent { link: l, node: v });
                }
            }
        }
        Ok(())
    }
}

/// Connected components left after deleting the event's nodes and links.
/// Zero when every node failed.
pub fn components_after_failure(g: &Graph, ev: &FailureEvent) -> Result<usize, GraphError> {
    ev.check(g)?;
    Ok(count_surviving_components(g, ev))
}

/// [`components_after_failure`] without the validity check.
pub(crate) fn count_surviving_components(g: &Graph, ev: &FailureEvent) -> usize {
    let mut dead = vec![false; g.n];
    for &v in &ev.failed_nodes {
        dead[v] = true;
    }
    let mut ds = DisjointSet::new(g.n);
    let mut count = g.n - ev.failed_nodes.len();
    let mut fl = ev.failed_links.iter().peekable();
    for (id, &(u, v)) in g.links.iter().enumerate() {
        while fl.next_if(|&&l| l < id).is_some() {}
        if fl.peek() == Some(&&id) || dead[u] || dead[v] {
            continue;
        }
        if ds.union(u, v) {
            count -= 1;
        }
    }
    count
}

/// Biconnectivity via depth-first low-link search: at least three nodes,
/// connected, no articulation node.
pub fn is_biconnected(g: &Graph) -> bool {
    if g.n < 3 || !is_connected(g) {
        return false;
    }
    articulation_nodes(g).is_empty()
}

/// Articulation nodes of `g` (iterative Tarjan low-link).
pub fn articulation_nodes(g: &Graph) -> Vec<NodeId> {
    let n = g.n;
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        // (node, parent, next neighbor index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, idx) = *top;
            if idx < g.adj[v].len() {
                top.2 += 1;
                let w = g.adj[v][idx];
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// Every unordered node pair that is not a link, in lexicographic order.
pub fn complement_edges(g: &Graph) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for u in 0..g.n {
        for v in u + 1..g.n {
            if !g.has_link(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Exhaustive backtracking search for a Hamiltonian cycle.
///
/// Starts at the lowest-degree node and tries lower-degree neighbors first.
/// Prunes when an unvisited node is left with fewer than two usable
/// neighbors or when the unvisited nodes fall apart. `None` is definitive.
pub fn hamiltonian_cycle(g: &Graph) -> Option<Vec<NodeId>> {
    let n = g.n;
    if n < 3 || g.link_count() < n || !is_connected(g) {
        return None;
    }
    if (0..n).any(|v| g.degree(v) < 2) {
        return None;
    }
    let start = (0..n).min_by_key(|&v| (g.degree(v), v)).expect("n >= 3");
    let mut order: Vec<Vec<NodeId>> = g.adj.clone();
    for nb in &mut order {
        nb.sort_by_key(|&w| (g.degree(w), w));
    }
    let mut search = HamSearch {
        g,
        order,
        visited: vec![false; n],
        path: Vec::with_capacity(n),
        start,
    };
    search.visited[start] = true;
    search.path.push(start);
    if search.extend() {
        Some(search.path)
    } else {
        None
    }
}

struct HamSearch<'a> {
    g: &'a Graph,
    order: Vec<Vec<NodeId>>,
    visited: Vec<bool>,
    path: Vec<NodeId>,
    start: NodeId,
}

impl HamSearch<'_> {
    fn extend(&mut self) -> bool {
        let n = self.g.n;
        let cur = *self.path.last().expect("path starts non-empty");
        if self.path.len() == n {
            return self.g.has_link(cur, self.start);
        }
        if !self.feasible(cur) {
            return false;
        }
        for i in 0..self.order[cur].len() {
            let w = self.order[cur][i];
            if self.visited[w] {
                continue;
            }
            self.visited[w] = true;
            self.path.push(w);
            if self.extend() {
                return true;
            }
            self.path.pop();
            self.visited[w] = false;
        }
        false
    }

    /// Every unvisited node still needs two usable neighbors (unvisited, or
    /// one of the two open path ends), and the unvisited nodes must be
    /// reachable from the current end without passing through the path.
    fn feasible(&self, cur: NodeId) -> bool {
        let g = self.g;
        for v in 0..g.n {
            if self.visited[v] {
                continue;
            }
            let usable = g.adj[v]
                .iter()
                .filter(|&&w| !self.visited[w] || w == cur || w == self.start)
                .count();
            if usable < 2 {
                return false;
            }
        }
        let remaining = self.visited.iter().filter(|v| !**v).count();
        let mut seen = vec![false; g.n];
        let mut stack = vec![cur];
        seen[cur] = true;
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            for &w in &g.adj[v] {
                if !seen[w] && !self.visited[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == remaining
    }
}

/// True iff `cycle` visits every node exactly once and each consecutive
/// pair (including the wrap-around) is a link of `g`.
pub fn is_hamiltonian_cycle(g: &Graph, cycle: &[NodeId]) -> bool {
    let n = g.n;
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_link(cycle[i], cycle[(i + 1) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: usize, cols: usize) -> Graph {
        let id = |r: usize, c: usize| r * cols + c;
        let mut links = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    links.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    links.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Graph::new(rows * cols, links).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::new(0, []), Err(GraphError::Empty));
        assert_eq!(Graph::new(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateLink(0, 1)));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(GraphError::NodeOutOfRange(..))));
    }

    #[test]
    fn component_counts() {
        assert_eq!(connected_components(&Graph::edgeless(5)).0, 5);
        assert_eq!(connected_components(&Graph::cycle(5)).0, 1);
        let two_triangles = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let (count, labels) = connected_components(&two_triangles);
        assert_eq!(count, 2);
        assert_eq!(labels, vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn failure_counts() {
        let path = Graph::path(3);
        assert_eq!(
            components_after_failure(&path, &FailureEvent::node_star(&path, 1)).unwrap(),
            2
        );
        let ab = FailureEvent::new([0, 1], [0, 1]);
        assert_eq!(components_after_failure(&path, &ab).unwrap(), 1);
        let c5 = Graph::cycle(5);
        assert_eq!(components_after_failure(&c5, &FailureEvent::single_link(2)).unwrap(), 1);
        let all = FailureEvent::new(0..3, 0..2);
        assert_eq!(components_after_failure(&path, &all).unwrap(), 0);
    }

    #[test]
    fn unclosed_event_rejected() {
        let path = Graph::path(3);
        let ev = FailureEvent::new([1], [0]);
        assert_eq!(
            components_after_failure(&path, &ev),
            Err(GraphError::UnclosedEvent { link: 1, node: 1 })
        );
        assert!(components_after_failure(&path, &FailureEvent::single_link(7)).is_err());
    }

    #[test]
    fn biconnectivity() {
        assert!(is_biconnected(&Graph::cycle(5)));
        assert!(!is_biconnected(&Graph::path(4)));
        let bowtie = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!is_biconnected(&bowtie));
        assert_eq!(articulation_nodes(&bowtie), vec![2]);
        assert!(!is_biconnected(&Graph::new(2, [(0, 1)]).unwrap()));
    }

    #[test]
    fn hamiltonian_examples() {
        let c5 = Graph::cycle(5);
        let cyc = hamiltonian_cycle(&c5).unwrap();
        assert!(is_hamiltonian_cycle(&c5, &cyc));
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(hamiltonian_cycle(&star), None);
        assert_eq!(hamiltonian_cycle(&grid(3, 3)), None);
        let g24 = grid(2, 4);
        assert!(is_hamiltonian_cycle(&g24, &hamiltonian_cycle(&g24).unwrap()));
    }

    #[test]
    fn complement_examples() {
        let k3 = Graph::cycle(3);
        assert!(complement_edges(&k3).is_empty());
        assert_eq!(complement_edges(&Graph::edgeless(3)).len(), 3);
        assert_eq!(complement_edges(&Graph::path(3)), vec![(0, 2)]);
    }

    #[test]
    fn cost_arithmetic() {
        use EdgeCost::*;
        assert_eq!(Finite(2) + Finite(3), Finite(5));
        assert_eq!(Finite(2) + Infinite, Infinite);
        assert_eq!(Finite(u64::MAX) + Finite(1), Infinite);
        assert!(Infinite > Finite(u64::MAX));
        assert!(!Infinite.within(u64::MAX));
        assert!(Finite(4).within(4));
        assert_eq!([Finite(1), Finite(1)].into_iter().sum::<EdgeCost>(), Finite(2));
    }
}
