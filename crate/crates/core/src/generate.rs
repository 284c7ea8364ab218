//! Planar graph families with known rotation systems.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Layout, PlanePoint};
use crate::graph::{is_connected, Graph, NodeId};
use crate::planar::RotationSystem;

/// A graph together with a planar rotation system for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    pub graph: Graph,
    pub rotation: RotationSystem,
}

impl EmbeddedGraph {
    fn from_drawing(points: Vec<PlanePoint>, links: Vec<(NodeId, NodeId)>) -> Self {
        let layout = Layout::new(points, links).expect("generated drawing is valid");
        EmbeddedGraph {
            graph: layout.graph().clone(),
            rotation: RotationSystem::from_layout(&layout),
        }
    }

    fn from_rotation(order: Vec<Vec<NodeId>>) -> Self {
        let links = order
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect::<Vec<_>>();
        let mut links = links;
        links.sort_unstable();
        EmbeddedGraph {
            graph: Graph::new(order.len(), links).expect("rotation describes a simple graph"),
            rotation: RotationSystem::new(order),
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }
}

fn on_circle(i: usize, n: usize, radius: f64) -> PlanePoint {
    let a = TAU * i as f64 / n as f64;
    PlanePoint::new(radius * a.cos(), radius * a.sin())
}

pub fn cycle(n: usize) -> EmbeddedGraph {
    assert!(n >= 3, "cycle needs n >= 3");
    let pts = (0..n).map(|i| on_circle(i, n, 1.0)).collect();
    EmbeddedGraph::from_drawing(pts, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

/// Hub 0 joined to a rim cycle on nodes `1..n`.
pub fn wheel(n: usize) -> EmbeddedGraph {
    assert!(n >= 4, "wheel needs n >= 4");
    let rim = n - 1;
    let mut pts = vec![PlanePoint::new(0.0, 0.0)];
    pts.extend((0..rim).map(|i| on_circle(i, rim, 1.0)));
    let mut links: Vec<_> = (1..n).map(|i| (0, i)).collect();
    links.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    EmbeddedGraph::from_drawing(pts, links)
}

/// Node `r * cols + c` sits at `(c, r)`.
pub fn grid(rows: usize, cols: usize) -> EmbeddedGraph {
    assert!(rows >= 1 && cols >= 1, "grid needs positive dimensions");
    let id = |r: usize, c: usize| r * cols + c;
    let mut pts = Vec::new();
    let mut links = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            pts.push(PlanePoint::new(c as f64, r as f64));
            if c + 1 < cols {
                links.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                links.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    EmbeddedGraph::from_drawing(pts, links)
}

/// Center 0 with leaves `1..n`.
pub fn star(n: usize) -> EmbeddedGraph {
    assert!(n >= 2, "star needs n >= 2");
    let mut pts = vec![PlanePoint::new(0.0, 0.0)];
    pts.extend((1..n).map(|i| on_circle(i - 1, n - 1, 1.0)));
    EmbeddedGraph::from_drawing(pts, (1..n).map(|i| (0, i)).collect())
}

/// `K_{2,k}`: hubs 0 and 1, each joined to nodes `2..k+2`.
pub fn two_hub_bipartite(k: usize) -> EmbeddedGraph {
    assert!(k >= 1);
    let mut pts = vec![PlanePoint::new(-1.0, 0.0), PlanePoint::new(1.0, 0.0)];
    pts.extend((0..k).map(|i| PlanePoint::new(0.0, i as f64 - (k as f64 - 1.0) / 2.0)));
    let links = (0..k).flat_map(|i| [(0, 2 + i), (1, 2 + i)]).collect();
    EmbeddedGraph::from_drawing(pts, links)
}

/// Uniform random recursive tree. Any rotation of a tree is planar; the
/// neighbour order here is the attachment order.
pub fn random_tree(n: usize, seed: u64) -> EmbeddedGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = vec![Vec::new(); n];
    for v in 1..n {
        let parent = rng.gen_range(0..v);
        order[parent].push(v);
        order[v].push(parent);
    }
    EmbeddedGraph::from_rotation(order)
}

/// Random maximal planar graph: repeatedly drop a new node into a random
/// triangular face, then apply random diagonal flips.
pub fn random_maximal_planar(n: usize, seed: u64) -> EmbeddedGraph {
    assert!(n >= 3, "maximal planar graphs need n >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    // Every face as a dart cycle (a, b, c); stacking keeps this list exact.
    let mut faces: Vec<[NodeId; 3]> = vec![[0, 1, 2], [0, 2, 1]];
    for v in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        insert_after(&mut rot[a], b, v);
        insert_after(&mut rot[b], c, v);
        insert_after(&mut rot[c], a, v);
        rot.push(vec![a, b, c]);
        faces.extend([[a, b, v], [b, c, v], [c, a, v]]);
    }
    let mut es = EmbeddedGraph::from_rotation(rot);
    for _ in 0..2 * n {
        let links = es.graph.links().to_vec();
        let &(a, b) = links.choose(&mut rng).expect("n >= 3 has links");
        es = flip(&es, a, b).unwrap_or(es);
    }
    es
}

/// A connected spanning subgraph of a random maximal planar graph, keeping
/// each non-tree link with probability `keep`.
pub fn random_planar(n: usize, keep: f64, seed: u64) -> EmbeddedGraph {
    let full = random_maximal_planar(n.max(3), seed);
    if n < 3 {
        return random_tree(n, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut links = full.graph.links().to_vec();
    links.shuffle(&mut rng);
    let mut order = full.rotation.clone().into_inner();
    for (u, v) in links {
        if rng.gen_bool(keep.clamp(0.0, 1.0)) {
            continue;
        }
        let trial: Vec<Vec<NodeId>> = order
            .iter()
            .enumerate()
            .map(|(x, nb)| {
                nb.iter()
                    .copied()
                    .filter(|&y| !((x, y) == (u, v) || (x, y) == (v, u)))
                    .collect()
            })
            .collect();
        let candidate = EmbeddedGraph::from_rotation(trial.clone());
        if is_connected(&candidate.graph) {
            order = trial;
        }
    }
    EmbeddedGraph::from_rotation(order)
}

fn insert_after(rot: &mut Vec<NodeId>, after: NodeId, new: NodeId) {
    let i = rot.iter().position(|&x| x == after).expect("neighbour present");
    rot.insert(i + 1, new);
}

fn pred(rot: &[NodeId], w: NodeId) -> NodeId {
    let i = rot.iter().position(|&x| x == w).expect("neighbour present");
    rot[(i + rot.len() - 1) % rot.len()]
}

/// Replaces link `a-b` by the other diagonal of its two incident
/// triangles, when that keeps the graph simple and every degree >= 3.
fn flip(es: &EmbeddedGraph, a: NodeId, b: NodeId) -> Option<EmbeddedGraph> {
    let mut rot = es.rotation.clone().into_inner();
    let c = pred(&rot[b], a);
    let d = pred(&rot[a], b);
    if c == d || rot[a].len() <= 3 || rot[b].len() <= 3 || rot[c].contains(&d) {
        return None;
    }
    rot[a].retain(|&x| x != b);
    rot[b].retain(|&x| x != a);
    insert_after(&mut rot[c], a, d);
    insert_after(&mut rot[d], b, c);
    Some(EmbeddedGraph::from_rotation(rot))
}
