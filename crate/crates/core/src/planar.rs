//! Straight-line grid drawings of planar graphs.
//!
//! The input is a graph plus a combinatorial embedding given as a rotation
//! system. The drawing is produced with the shift method: triangulate the
//! embedding, compute a canonical ordering, place the nodes one by one on
//! the integer grid, then drop the links the triangulation added. The result
//! is crossing-free and fits in a `(2n - 4) x (n - 2)` grid.
//!
//! Rotation convention: `rotation[v]` lists the neighbours of `v` in
//! counter-clockwise order. Faces are traced with the rule
//! `next(u -> v) = (v -> w)` where `w` precedes `u` in the rotation of `v`.

use std::collections::HashSet;

use crate::geom::{GeomError, Layout, PlanePoint};
use crate::graph::{connected_components, is_connected, norm_pair, Graph, GraphError, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("malformed rotation system: {0}")]
    MalformedRotation(String),
    #[error("rotation system is not planar: {faces} faces, Euler's formula needs {expected}")]
    NotPlanarEmbedding { faces: usize, expected: usize },
    #[error("graph must be connected")]
    NotConnected,
    #[error("graph needs at least {needed} nodes, has {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("graph is not maximal planar ({links} links, expected {expected})")]
    NotTriangulated { links: usize, expected: usize },
    #[error("triangulation failed: {0}")]
    TriangulationFailure(String),
    #[error("canonical ordering failed: {0}")]
    OrderingFailure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("layout: {0}")]
    Layout(String),
}

impl From<GeomError> for EmbedError {
    fn from(e: GeomError) -> Self {
        EmbedError::Layout(e.to_string())
    }
}

/// Counter-clockwise neighbour order around every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<NodeId>>,
}

impl RotationSystem {
    pub fn new(order: Vec<Vec<NodeId>>) -> Self {
        RotationSystem { order }
    }

    /// Rotation read off a straight-line drawing by sorting neighbours by angle.
    pub fn from_layout(layout: &Layout) -> Self {
        let g = layout.graph();
        let order = (0..g.node_count())
            .map(|v| {
                let c = layout.point(v);
                let mut nb = g.neighbors(v).to_vec();
                nb.sort_by(|&a, &b| {
                    let pa = layout.point(a);
                    let pb = layout.point(b);
                    let ta = (pa.y - c.y).atan2(pa.x - c.x);
                    let tb = (pb.y - c.y).atan2(pb.x - c.x);
                    ta.total_cmp(&tb).then(a.cmp(&b))
                });
                nb
            })
            .collect();
        RotationSystem { order }
    }

    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn around(&self, v: NodeId) -> &[NodeId] {
        &self.order[v]
    }

    pub fn into_inner(self) -> Vec<Vec<NodeId>> {
        self.order
    }

    fn position(&self, v: NodeId, w: NodeId) -> usize {
        self.order[v]
            .iter()
            .position(|&x| x == w)
            .unwrap_or_else(|| panic!("{w} is not in the rotation of {v}"))
    }

    /// Neighbour preceding `w` in the rotation of `v`.
    fn pred(&self, v: NodeId, w: NodeId) -> NodeId {
        let rot = &self.order[v];
        let i = self.position(v, w);
        rot[(i + rot.len() - 1) % rot.len()]
    }

    fn next_dart(&self, (u, v): (NodeId, NodeId)) -> (NodeId, NodeId) {
        (v, self.pred(v, u))
    }

    /// Places `new` right after `after` in the rotation of `v`.
    fn insert_after(&mut self, v: NodeId, after: NodeId, new: NodeId) {
        let i = self.position(v, after);
        self.order[v].insert(i + 1, new);
    }

    /// Rotation of the subgraph induced by the nodes with `keep[v]` set.
    fn restricted(&self, keep: &[bool]) -> RotationSystem {
        let order = self
            .order
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                if keep[v] {
                    nb.iter().copied().filter(|&w| keep[w]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        RotationSystem { order }
    }
}

fn check_rotation(g: &Graph, rot: &RotationSystem) -> Result<(), EmbedError> {
    if rot.node_count() != g.node_count() {
        return Err(EmbedError::MalformedRotation(format!(
            "rotation covers {} nodes, graph has {}",
            rot.node_count(),
            g.node_count()
        )));
    }
    for v in 0..g.node_count() {
        let mut have = rot.around(v).to_vec();
        let mut want = g.neighbors(v).to_vec();
        have.sort_unstable();
        want.sort_unstable();
        if have != want {
            return Err(EmbedError::MalformedRotation(format!(
                "rotation of node {v} is {:?}, its neighbours are {:?}",
                rot.around(v),
                want
            )));
        }
    }
    Ok(())
}

/// Face boundary walks, each listed as the sequence of dart tails.
///
/// Faces come out in order of their first dart, where darts are ordered by
/// tail node and then by rotation position.
pub fn trace_faces(g: &Graph, rot: &RotationSystem) -> Result<Vec<Vec<NodeId>>, EmbedError> {
    check_rotation(g, rot)?;
    Ok(faces_unchecked(rot))
}

fn faces_unchecked(rot: &RotationSystem) -> Vec<Vec<NodeId>> {
    let mut seen: HashSet<(NodeId, NodeId)> = HashSet::new();
    let mut faces = Vec::new();
    for u in 0..rot.node_count() {
        for &v in rot.around(u) {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut walk = Vec::new();
            let mut dart = (u, v);
            while seen.insert(dart) {
                walk.push(dart.0);
                dart = rot.next_dart(dart);
            }
            faces.push(walk);
        }
    }
    faces
}

fn face_of_dart(rot: &RotationSystem, start: (NodeId, NodeId)) -> Vec<NodeId> {
    let mut walk = vec![start.0];
    let mut dart = rot.next_dart(start);
    while dart != start {
        walk.push(dart.0);
        dart = rot.next_dart(dart);
    }
    walk
}

/// Traces every face and checks Euler's formula `V - E + F = 2`.
/// Returns the face count.
pub fn validate_rotation_system(g: &Graph, rot: &RotationSystem) -> Result<usize, EmbedError> {
    let n = g.node_count();
    if n < 3 {
        return Err(EmbedError::TooSmall { needed: 3, got: n });
    }
    if !is_connected(g) {
        return Err(EmbedError::NotConnected);
    }
    let faces = trace_faces(g, rot)?.len();
    let expected = 2 + g.link_count() - n;
    if faces != expected {
        return Err(EmbedError::NotPlanarEmbedding { faces, expected });
    }
    Ok(faces)
}

/// A maximal planar supergraph with its rotation. `added` lists the links
/// that were not in the input; they occupy the last link ids of `graph`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub graph: Graph,
    pub rotation: RotationSystem,
    pub added: Vec<(NodeId, NodeId)>,
}

/// Adds the chord `walk[i] - walk[j]` inside the face traced by `walk`.
fn add_chord(rot: &mut RotationSystem, walk: &[NodeId], i: usize, j: usize) {
    let k = walk.len();
    let (a, b) = (walk[i], walk[j]);
    rot.insert_after(a, walk[(i + 1) % k], b);
    rot.insert_after(b, walk[(j + 1) % k], a);
}

/// Fills every face with chords until all faces are triangles.
///
/// Each face of length > 3 gets an ear chord `w[i] - w[i+2]`, trying the
/// corner at the face's lowest-id node first (so a face is fanned out from
/// that node) and skipping chords that would repeat a node or an existing
/// link.
pub fn triangulate(g: &Graph, rot: &RotationSystem) -> Result<Triangulation, EmbedError> {
    validate_rotation_system(g, rot)?;
    let n = g.node_count();
    let mut rot = rot.clone();
    let mut links: HashSet<(NodeId, NodeId)> = g.links().iter().copied().collect();
    let mut added = Vec::new();
    loop {
        let faces = faces_unchecked(&rot);
        let Some(walk) = faces.iter().find(|f| f.len() > 3) else {
            break;
        };
        let k = walk.len();
        let start = (0..k).min_by_key(|&i| (walk[i], i)).expect("non-empty face");
        let chord = (0..k).map(|s| (start + s) % k).find(|&i| {
            let (a, c) = (walk[i], walk[(i + 2) % k]);
            a != c && !links.contains(&norm_pair(a, c))
        });
        let Some(i) = chord else {
            return Err(EmbedError::TriangulationFailure(format!(
                "no admissible chord in face {walk:?}"
            )));
        };
        let (a, c) = (walk[i], walk[(i + 2) % k]);
        add_chord(&mut rot, walk, i, (i + 2) % k);
        links.insert(norm_pair(a, c));
        added.push(norm_pair(a, c));
    }
    let graph = g.with_links(&added)?;
    debug_assert_eq!(graph.link_count(), 3 * n - 6);
    Ok(Triangulation {
        graph,
        rotation: rot,
        added,
    })
}

fn require_triangulated(g: &Graph, rot: &RotationSystem) -> Result<(), EmbedError> {
    validate_rotation_system(g, rot)?;
    let expected = 3 * g.node_count() - 6;
    if g.link_count() != expected {
        return Err(EmbedError::NotTriangulated {
            links: g.link_count(),
            expected,
        });
    }
    Ok(())
}

/// Outer face: among faces through node 0, the walk that is
/// lexicographically smallest when rotated to start at node 0.
fn outer_face(rot: &RotationSystem) -> [NodeId; 3] {
    faces_unchecked(rot)
        .into_iter()
        .filter_map(|f| {
            let i = f.iter().position(|&v| v == 0)?;
            let mut r = f.clone();
            r.rotate_left(i);
            Some(r)
        })
        .min()
        .map(|f| [f[0], f[1], f[2]])
        .expect("node 0 lies on some face")
}

/// A canonical ordering together with, for every node placed after the
/// first two, the leftmost and rightmost of its neighbours on the outer
/// boundary at the moment it is added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOrder {
    pub order: Vec<NodeId>,
    pub attach: Vec<Option<(NodeId, NodeId)>>,
}

/// Canonical ordering of a maximal planar graph, computed by peeling
/// chord-free nodes off the outer boundary from the last node back to the
/// third.
pub fn canonical_order(g: &Graph, rot: &RotationSystem) -> Result<CanonicalOrder, EmbedError> {
    require_triangulated(g, rot)?;
    let n = g.node_count();
    let [v1, v2, vn] = outer_face(rot);

    let mut removed = vec![false; n];
    let mut on_contour = vec![false; n];
    for v in [v1, vn, v2] {
        on_contour[v] = true;
    }
    let mut contour = vec![v1, vn, v2];
    let mut attach = vec![None; n];
    let mut peeled = Vec::with_capacity(n);

    for _ in 3..=n {
        let pick = (1..contour.len() - 1)
            .filter(|&i| {
                let v = contour[i];
                g.neighbors(v).iter().filter(|&&w| !removed[w] && on_contour[w]).count() == 2
            })
            .min_by_key(|&i| contour[i]);
        let Some(i) = pick else {
            return Err(EmbedError::OrderingFailure(format!(
                "no removable node on boundary {contour:?}"
            )));
        };
        let (p, v, q) = (contour[i - 1], contour[i], contour[i + 1]);
        let arc = inner_arc(rot, v, p, q, &removed)?;
        if let Some(&w) = arc.iter().find(|&&w| on_contour[w]) {
            return Err(EmbedError::OrderingFailure(format!(
                "node {w} is already on the boundary when {v} is removed"
            )));
        }
        removed[v] = true;
        on_contour[v] = false;
        for &w in &arc {
            on_contour[w] = true;
        }
        contour.splice(i..=i, arc);
        attach[v] = Some((p, q));
        peeled.push(v);
    }
    if contour != [v1, v2] {
        return Err(EmbedError::OrderingFailure(format!(
            "boundary {contour:?} did not shrink to the base link"
        )));
    }
    let mut order = vec![v1, v2];
    order.extend(peeled.into_iter().rev());
    Ok(CanonicalOrder { order, attach })
}

/// Neighbours of `v` strictly between `p` and `q` on the side that has not
/// been peeled yet, listed starting next to `p`.
fn inner_arc(
    rot: &RotationSystem,
    v: NodeId,
    p: NodeId,
    q: NodeId,
    removed: &[bool],
) -> Result<Vec<NodeId>, EmbedError> {
    let around = rot.around(v);
    let d = around.len();
    let ip = rot.position(v, p);
    let forward: Vec<NodeId> = (1..d).map(|s| around[(ip + s) % d]).take_while(|&w| w != q).collect();
    let backward: Vec<NodeId> = (1..d)
        .map(|s| around[(ip + d - s) % d])
        .take_while(|&w| w != q)
        .collect();
    debug_assert_eq!(forward.len() + backward.len() + 2, d);
    let live = |arc: &[NodeId]| arc.iter().all(|&w| !removed[w]);
    match (live(&forward), live(&backward)) {
        (true, true) if forward.is_empty() => Ok(backward),
        (true, true) if backward.is_empty() => Ok(forward),
        (true, false) => Ok(forward),
        (false, true) => Ok(backward),
        _ => Err(EmbedError::OrderingFailure(format!(
            "node {v} has unpeeled neighbours on both sides of {p}..{q}"
        ))),
    }
}

/// Independent check of the canonical-ordering property: `v1, v2, vn` bound
/// the outer face, and each `vk` (k >= 3) has at least two neighbours among
/// `v1..v(k-1)`, forming a contiguous run on the outer boundary of the graph
/// induced by those nodes.
pub fn verify_canonical_order(g: &Graph, rot: &RotationSystem, order: &[NodeId]) -> Result<(), String> {
    let n = g.node_count();
    if order.len() != n || n < 3 {
        return Err(format!("ordering has {} entries for {n} nodes", order.len()));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(format!("ordering is not a permutation (node {v})"));
        }
        seen[v] = true;
    }
    let (v1, v2, vn) = (order[0], order[1], order[n - 1]);
    if !g.has_link(v1, v2) {
        return Err(format!("{v1} and {v2} are not adjacent"));
    }
    let outer = face_of_dart(rot, (v1, v2));
    if outer != [v1, v2, vn] {
        return Err(format!("outer face {outer:?} is not {v1}, {v2}, {vn}"));
    }

    let mut keep = vec![false; n];
    keep[v1] = true;
    keep[v2] = true;
    for (k, &vk) in order.iter().enumerate().skip(2) {
        let sub = rot.restricted(&keep);
        let walk = face_of_dart(&sub, (v1, v2));
        // walk = v1, v2, x1, ..., xm; the boundary from v1 to v2 is its reverse
        let mut contour: Vec<NodeId> = walk[2..].iter().rev().copied().collect();
        contour.insert(0, v1);
        contour.push(v2);
        let mut on = vec![usize::MAX; n];
        for (i, &w) in contour.iter().enumerate() {
            if on[w] != usize::MAX {
                return Err(format!("boundary before v{} repeats node {w}", k + 1));
            }
            on[w] = i;
        }
        let earlier: Vec<NodeId> = g.neighbors(vk).iter().copied().filter(|&w| keep[w]).collect();
        if earlier.len() < 2 {
            return Err(format!("node {vk} has {} earlier neighbours", earlier.len()));
        }
        let mut idx = Vec::with_capacity(earlier.len());
        for &w in &earlier {
            if on[w] == usize::MAX {
                return Err(format!("earlier neighbour {w} of {vk} is not on the boundary"));
            }
            idx.push(on[w]);
        }
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(format!(
                "neighbours of {vk} are not contiguous on the boundary {contour:?}"
            ));
        }
        keep[vk] = true;
    }
    Ok(())
}

/// Integer node positions for a graph, plus the graph itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridLayout {
    pub coords: Vec<(i64, i64)>,
    pub graph: Graph,
}

impl GridLayout {
    pub fn to_layout(&self) -> Result<Layout, GeomError> {
        let pts = self
            .coords
            .iter()
            .map(|&(x, y)| PlanePoint::new(x as f64, y as f64))
            .collect();
        Layout::from_graph(pts, self.graph.clone())
    }

    pub fn width(&self) -> i64 {
        self.coords.iter().map(|c| c.0).max().unwrap_or(0)
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().map(|c| c.1).max().unwrap_or(0)
    }
}

/// Crossing-free straight-line grid drawing of a connected planar graph.
pub fn fpp_embed(g: &Graph, rot: &RotationSystem) -> Result<GridLayout, EmbedError> {
    let n = g.node_count();
    match n {
        1 => {
            return Ok(GridLayout {
                coords: vec![(0, 0)],
                graph: g.clone(),
            })
        }
        2 => {
            if !is_connected(g) {
                return Err(EmbedError::NotConnected);
            }
            return Ok(GridLayout {
                coords: vec![(0, 0), (1, 0)],
                graph: g.clone(),
            });
        }
        _ => {}
    }
    let tri = triangulate(g, rot)?;
    let co = canonical_order(&tri.graph, &tri.rotation)?;
    let coords = shift_place(n, &co)?;
    Ok(GridLayout {
        coords,
        graph: g.clone(),
    })
}

fn shift_place(n: usize, co: &CanonicalOrder) -> Result<Vec<(i64, i64)>, EmbedError> {
    let order = &co.order;
    let mut x = vec![0i64; n];
    let mut y = vec![0i64; n];
    let mut moves: Vec<Vec<NodeId>> = (0..n).map(|v| vec![v]).collect();
    let (v1, v2, v3) = (order[0], order[1], order[2]);
    x[v2] = 2;
    x[v3] = 1;
    y[v3] = 1;
    let mut contour = vec![v1, v3, v2];
    for &vk in &order[3..] {
        let (p, q) =
            co.attach[vk].ok_or_else(|| EmbedError::OrderingFailure(format!("node {vk} has no attachment")))?;
        let ip = contour.iter().position(|&w| w == p);
        let iq = contour.iter().position(|&w| w == q);
        let (ip, iq) = match (ip, iq) {
            (Some(a), Some(b)) if a < b => (a, b),
            _ => {
                return Err(EmbedError::OrderingFailure(format!(
                    "attachment {p}..{q} of {vk} is not on the boundary {contour:?}"
                )))
            }
        };
        for &w in &contour[ip + 1..iq] {
            for &u in &moves[w] {
                x[u] += 1;
            }
        }
        for &w in &contour[iq..] {
            for &u in &moves[w] {
                x[u] += 2;
            }
        }
        x[vk] = (x[p] + x[q] + y[q] - y[p]) / 2;
        y[vk] = (x[q] - x[p] + y[p] + y[q]) / 2;
        let mut carried = vec![vk];
        for &w in &contour[ip + 1..iq] {
            carried.extend_from_slice(&moves[w]);
        }
        moves[vk] = carried;
        contour.splice(ip + 1..iq, [vk]);
    }
    Ok(x.into_iter().zip(y).collect())
}

/// Draws every connected component with [`fpp_embed`] and sets the
/// drawings side by side, two grid units apart.
pub fn embed_components(g: &Graph, rot: &RotationSystem) -> Result<GridLayout, EmbedError> {
    check_rotation(g, rot)?;
    let n = g.node_count();
    let (count, labels) = connected_components(g);
    if count == 1 {
        return fpp_embed(g, rot);
    }
    let mut coords = vec![(0i64, 0i64); n];
    let mut x_offset = 0;
    for c in 0..count {
        let members: Vec<NodeId> = (0..n).filter(|&v| labels[v] == c).collect();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let links = g
            .links()
            .iter()
            .filter(|(u, _)| labels[*u] == c)
            .map(|&(u, v)| (local[u], local[v]));
        let sub = Graph::new(members.len(), links)?;
        let sub_rot = RotationSystem::new(
            members
                .iter()
                .map(|&v| rot.around(v).iter().map(|&w| local[w]).collect())
                .collect(),
        );
        let drawn = fpp_embed(&sub, &sub_rot)?;
        for (i, &v) in members.iter().enumerate() {
            let (x, y) = drawn.coords[i];
            coords[v] = (x + x_offset, y);
        }
        x_offset += drawn.width() + 2;
    }
    Ok(GridLayout {
        coords,
        graph: g.clone(),
    })
}
