//! Failure catalogs: the finite list of distinct region failures a network
//! can suffer, and the RBCDN evaluated over them.
//!
//! Three constructions are provided:
//!
//! * [`unit_catalog`]: nothing fails, one node with its incident links
//!   fails, or one link fails. This is the semantics of a region small
//!   enough to touch a single feature.
//! * [`geometric_catalog`]: every distinct set of features hit by some
//!   closed disk of radius `r`, found by probing structured candidate centers.
//! * [`monte_carlo_catalog`]: the events seen from uniformly sampled disk
//!   centers. Used to cross-check the geometric enumeration.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geom::{dist_point_segment, separation_ignoring_crossings, GeomError, Layout, PlanePoint, EPS};
pub use crate::graph::FailureEvent;
use crate::graph::{count_surviving_components, Graph, GraphError};

/// Catalogs at least this large are evaluated on the rayon pool.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemanticsTag {
    Unit,
    Geometric,
    Sampled,
}

impl SemanticsTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsTag::Unit => "unit",
            SemanticsTag::Geometric => "geometric",
            SemanticsTag::Sampled => "sampled",
        }
    }
}

impl fmt::Display for SemanticsTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticsTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(SemanticsTag::Unit),
            "geometric" => Ok(SemanticsTag::Geometric),
            "sampled" => Ok(SemanticsTag::Sampled),
            other => Err(format!(
                "unknown catalog semantics `{other}` (expected unit, geometric or sampled)"
            )),
        }
    }
}

/// How to build a catalog for a layout, including the sampling parameters
/// that the `sampled` semantics needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogSpec {
    Unit,
    Geometric,
    Sampled { samples: u64, seed: u64 },
}

impl CatalogSpec {
    pub fn tag(&self) -> SemanticsTag {
        match self {
            CatalogSpec::Unit => SemanticsTag::Unit,
            CatalogSpec::Geometric => SemanticsTag::Geometric,
            CatalogSpec::Sampled { .. } => SemanticsTag::Sampled,
        }
    }

    pub fn build(&self, layout: &Layout, r: f64) -> Result<FailureCatalog, GeomError> {
        match *self {
            CatalogSpec::Unit => Ok(unit_catalog(layout.graph())),
            CatalogSpec::Geometric => geometric_catalog(layout, r),
            CatalogSpec::Sampled { samples, seed } => monte_carlo_catalog(layout, r, samples, seed),
        }
    }
}

/// Distinct failure events. The empty event is always present, at index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureCatalog {
    events: Vec<FailureEvent>,
    semantics: SemanticsTag,
}

impl FailureCatalog {
    /// Deduplicates (keeping first occurrences) and puts the empty event first.
    pub fn new(events: impl IntoIterator<Item = FailureEvent>, semantics: SemanticsTag) -> Self {
        let mut seen = HashSet::new();
        let mut out = vec![FailureEvent::empty()];
        seen.insert(FailureEvent::empty());
        for ev in events {
            if seen.insert(ev.clone()) {
                out.push(ev);
            }
        }
        FailureCatalog { events: out, semantics }
    }

    pub fn events(&self) -> &[FailureEvent] {
        &self.events
    }

    pub fn event(&self, i: usize) -> &FailureEvent {
        &self.events[i]
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn semantics(&self) -> SemanticsTag {
        self.semantics
    }

    pub fn contains(&self, ev: &FailureEvent) -> bool {
        self.events.contains(ev)
    }
}

/// Empty event, one node-star event per node, one event per link.
pub fn unit_catalog(g: &Graph) -> FailureCatalog {
    let nodes = (0..g.node_count()).map(|v| FailureEvent::node_star(g, v));
    let links = (0..g.link_count()).map(FailureEvent::single_link);
    FailureCatalog::new(nodes.chain(links), SemanticsTag::Unit)
}

/// The failure event of a closed disk of radius `r` centered at `c`.
pub fn disk_event(layout: &Layout, c: PlanePoint, r: f64) -> FailureEvent {
    let g = layout.graph();
    let nodes: Vec<_> = (0..layout.node_count())
        .filter(|&v| c.dist(layout.point(v)) <= r)
        .collect();
    let mut links: BTreeSet<usize> = (0..layout.link_count())
        .filter(|&l| dist_point_segment(c, &layout.segment(l)) <= r)
        .collect();
    for &v in &nodes {
        links.extend(g.incident_links(v).iter().copied());
    }
    FailureEvent::new(nodes, links)
}

#[derive(Debug, Clone, Copy)]
enum Curve {
    Circle(PlanePoint),
    Line(PlanePoint, PlanePoint),
}

/// A probe location together with the tangents of the two curves through it.
struct Vertex {
    at: PlanePoint,
    tangents: [(f64, f64); 2],
}

fn unit(v: (f64, f64)) -> Option<(f64, f64)> {
    let len = v.0.hypot(v.1);
    (len > 0.0).then(|| (v.0 / len, v.1 / len))
}

fn circle_tangent(c: PlanePoint, q: PlanePoint) -> (f64, f64) {
    (-(q.y - c.y), q.x - c.x)
}

fn intersect(c1: Curve, c2: Curve, r: f64, out: &mut Vec<Vertex>) {
    match (c1, c2) {
        (Curve::Circle(a), Curve::Circle(b)) => {
            let d = a.dist(b);
            if d == 0.0 || d > 2.0 * r {
                return;
            }
            let h = (r * r - d * d / 4.0).max(0.0).sqrt();
            let mid = PlanePoint::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
            let perp = (-(b.y - a.y) / d, (b.x - a.x) / d);
            for s in [-1.0, 1.0] {
                let q = mid.offset(s * h * perp.0, s * h * perp.1);
                out.push(Vertex {
                    at: q,
                    tangents: [circle_tangent(a, q), circle_tangent(b, q)],
                });
            }
        }
        (Curve::Circle(c), Curve::Line(p, q)) | (Curve::Line(p, q), Curve::Circle(c)) => {
            // |p + t (q - p) - c|^2 = r^2
            let d = (q.x - p.x, q.y - p.y);
            let f = (p.x - c.x, p.y - c.y);
            let a = d.0 * d.0 + d.1 * d.1;
            let b = 2.0 * (f.0 * d.0 + f.1 * d.1);
            let cc = f.0 * f.0 + f.1 * f.1 - r * r;
            let disc = b * b - 4.0 * a * cc;
            if disc < 0.0 {
                return;
            }
            let sq = disc.sqrt();
            for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                if (0.0..=1.0).contains(&t) {
                    let at = p.offset(t * d.0, t * d.1);
                    out.push(Vertex {
                        at,
                        tangents: [circle_tangent(c, at), d],
                    });
                }
            }
        }
        (Curve::Line(p1, q1), Curve::Line(p2, q2)) => {
            let d1 = (q1.x - p1.x, q1.y - p1.y);
            let d2 = (q2.x - p2.x, q2.y - p2.y);
            let den = d1.0 * d2.1 - d1.1 * d2.0;
            if den == 0.0 {
                return;
            }
            let w = (p2.x - p1.x, p2.y - p1.y);
            let t = (w.0 * d2.1 - w.1 * d2.0) / den;
            let u = (w.0 * d1.1 - w.1 * d1.0) / den;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                out.push(Vertex {
                    at: p1.offset(t * d1.0, t * d1.1),
                    tangents: [d1, d2],
                });
            }
        }
    }
}

/// Every distinct failure event produced by a closed disk of radius `r`.
///
/// The plane is cut into cells by the boundaries of the radius-`r`
/// neighbourhoods of all features (circles around points, capsules around
/// links); the hit set is constant on each cell. Candidate centers are the
/// node points, link midpoints, and every pairwise intersection of those
/// boundaries. Each candidate is also probed at offset
/// `min(EPS, separation / 10)` in eight compass directions and, for
/// intersections, along the four bisectors of the crossing curves, which
/// reaches the thin wedges two nearly tangent boundaries leave between them.
///
/// Crossing links are tolerated, but a node touching a non-incident link is
/// rejected as a degenerate layout.
pub fn geometric_catalog(layout: &Layout, r: f64) -> Result<FailureCatalog, GeomError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(GeomError::BadRadius(r));
    }
    let offset = match separation_ignoring_crossings(layout) {
        Ok(sep) => EPS.min(sep / 10.0),
        Err(GeomError::TooFewFeatures(_)) => EPS,
        Err(e) => return Err(e),
    };

    let mut curves = Vec::new();
    for &p in layout.points() {
        curves.push(Curve::Circle(p));
    }
    for s in layout.segments() {
        if let Some(nrm) = unit((-(s.b.y - s.a.y), s.b.x - s.a.x)) {
            for side in [-r, r] {
                curves.push(Curve::Line(
                    s.a.offset(side * nrm.0, side * nrm.1),
                    s.b.offset(side * nrm.0, side * nrm.1),
                ));
            }
        }
    }

    let mut probes: Vec<PlanePoint> = Vec::new();
    let compass: Vec<(f64, f64)> = (0..8)
        .map(|k| {
            let a = k as f64 * std::f64::consts::FRAC_PI_4;
            (a.cos(), a.sin())
        })
        .collect();
    let push_around = |probes: &mut Vec<PlanePoint>, at: PlanePoint, extra: &[(f64, f64)]| {
        probes.push(at);
        for &(dx, dy) in compass.iter().chain(extra) {
            probes.push(at.offset(offset * dx, offset * dy));
        }
    };

    for &p in layout.points() {
        push_around(&mut probes, p, &[]);
    }
    for s in layout.segments() {
        push_around(&mut probes, s.midpoint(), &[]);
    }
    let mut vertices = Vec::new();
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            intersect(curves[i], curves[j], r, &mut vertices);
        }
    }
    for v in &vertices {
        let mut bisectors = Vec::with_capacity(4);
        if let (Some(t1), Some(t2)) = (unit(v.tangents[0]), unit(v.tangents[1])) {
            for d in [(t1.0 + t2.0, t1.1 + t2.1), (t1.0 - t2.0, t1.1 - t2.1)] {
                if let Some(d) = unit(d) {
                    bisectors.push(d);
                    bisectors.push((-d.0, -d.1));
                }
            }
        }
        push_around(&mut probes, v.at, &bisectors);
    }

    let events: BTreeSet<FailureEvent> = probes.iter().map(|&c| disk_event(layout, c, r)).collect();
    Ok(FailureCatalog::new(events, SemanticsTag::Geometric))
}

/// Events seen from `samples` uniformly random disk centers in the layout's
/// bounding box inflated by `r`. Deterministic for a given seed.
pub fn monte_carlo_catalog(layout: &Layout, r: f64, samples: u64, seed: u64) -> Result<FailureCatalog, GeomError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(GeomError::BadRadius(r));
    }
    let (lo, hi) = layout.bounding_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut events = BTreeSet::new();
    for _ in 0..samples {
        let c = PlanePoint::new(rng.gen_range(lo.x - r..=hi.x + r), rng.gen_range(lo.y - r..=hi.y + r));
        events.insert(disk_event(layout, c, r));
    }
    Ok(FailureCatalog::new(events, SemanticsTag::Sampled))
}

/// The RBCDN of a graph over a catalog, with the first event that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RbcdnResult {
    pub value: usize,
    pub witness: usize,
}

/// Component count after each event of the catalog, in catalog order.
pub fn component_vector(g: &Graph, catalog: &FailureCatalog) -> Result<Vec<usize>, GraphError> {
    for ev in catalog.events() {
        ev.check(g)?;
    }
    let count = |ev: &FailureEvent| count_surviving_components(g, ev);
    Ok(if catalog.len() >= PARALLEL_THRESHOLD {
        catalog.events().par_iter().map(count).collect()
    } else {
        catalog.events().iter().map(count).collect()
    })
}

/// Maximum component count over the catalog; ties go to the lowest index.
pub fn rbcdn(g: &Graph, catalog: &FailureCatalog) -> Result<RbcdnResult, GraphError> {
    let counts = component_vector(g, catalog)?;
    let (witness, &value) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("catalog always holds the empty event");
    Ok(RbcdnResult { value, witness })
}
