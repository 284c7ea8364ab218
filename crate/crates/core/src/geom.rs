//! Planar geometry primitives: points, segments, disks, distances and
//! crossing tests, plus the [`Layout`] type that pins a network to the plane.

use std::fmt;

use crate::graph::{Graph, GraphError, NodeId};

/// Comparison tolerance for degeneracy tests.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("zero-length segment at ({x}, {y})")]
    ZeroLength { x: f64, y: f64 },
    #[error("disk radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("degenerate layout: {0}")]
    DegenerateLayout(String),
    #[error("layout needs at least two features, has {0}")]
    TooFewFeatures(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    pub fn checked(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(PlanePoint { x, y })
        } else {
            Err(GeomError::NonFinite { x, y })
        }
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn sub(self, o: PlanePoint) -> (f64, f64) {
        (self.x - o.x, self.y - o.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> PlanePoint {
        PlanePoint::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSegment {
    pub a: PlanePoint,
    pub b: PlanePoint,
}

impl PlaneSegment {
    pub fn new(a: PlanePoint, b: PlanePoint) -> Result<Self, GeomError> {
        if a.dist(b) <= EPS {
            return Err(GeomError::ZeroLength { x: a.x, y: a.y });
        }
        Ok(PlaneSegment { a, b })
    }

    pub fn midpoint(&self) -> PlanePoint {
        PlanePoint::new((self.a.x + self.b.x) / 2.0, (self.a.y + self.b.y) / 2.0)
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: PlanePoint,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: PlanePoint, radius: f64) -> Result<Self, GeomError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeomError::BadRadius(radius));
        }
        Ok(Disk { center, radius })
    }
}

/// Something a region can hit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feature {
    Point(PlanePoint),
    Segment(PlaneSegment),
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

/// Euclidean distance from `p` to the closest point of the closed segment `s`.
pub fn dist_point_segment(p: PlanePoint, s: &PlaneSegment) -> f64 {
    let d = s.b.sub(s.a);
    let len2 = dot(d, d);
    let t = (dot(p.sub(s.a), d) / len2).clamp(0.0, 1.0);
    p.dist(PlanePoint::new(s.a.x + t * d.0, s.a.y + t * d.1))
}

/// Orientation of `c` relative to the directed line `a -> b`, with values
/// inside the tolerance band collapsed to zero.
fn orient(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> i8 {
    let v = cross(b.sub(a), c.sub(a));
    let scale = b.sub(a).0.abs().max(b.sub(a).1.abs()).max(1.0);
    if v > EPS * scale {
        1
    } else if v < -EPS * scale {
        -1
    } else {
        0
    }
}

fn on_segment(p: PlanePoint, s: &PlaneSegment) -> bool {
    dist_point_segment(p, s) <= EPS
}

/// True when the closed segments share at least one point.
pub fn segments_intersect(s1: &PlaneSegment, s2: &PlaneSegment) -> bool {
    let o1 = orient(s1.a, s1.b, s2.a);
    let o2 = orient(s1.a, s1.b, s2.b);
    let o3 = orient(s2.a, s2.b, s1.a);
    let o4 = orient(s2.a, s2.b, s1.b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(s2.a, s1) || on_segment(s2.b, s1) || on_segment(s1.a, s2) || on_segment(s1.b, s2)
}

/// Minimum distance between two closed segments; zero iff they intersect.
pub fn dist_segment_segment(s1: &PlaneSegment, s2: &PlaneSegment) -> f64 {
    if segments_intersect(s1, s2) {
        return 0.0;
    }
    dist_point_segment(s1.a, s2)
        .min(dist_point_segment(s1.b, s2))
        .min(dist_point_segment(s2.a, s1))
        .min(dist_point_segment(s2.b, s1))
}

pub fn dist_point_feature(p: PlanePoint, feature: &Feature) -> f64 {
    match feature {
        Feature::Point(q) => p.dist(*q),
        Feature::Segment(s) => dist_point_segment(p, s),
    }
}

/// Closed-disk hit test.
pub fn disk_hits(d: &Disk, feature: &Feature) -> bool {
    dist_point_feature(d.center, feature) <= d.radius
}

/// Nodes pinned to points of the plane, joined by straight-line links.
///
/// Construction rejects non-finite coordinates, coincident points, and
/// collinear links that overlap along a stretch. Crossing links are allowed;
/// see [`segments_properly_intersect`].
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    points: Vec<PlanePoint>,
    graph: Graph,
}

impl Layout {
    pub fn new(points: Vec<PlanePoint>, links: Vec<(NodeId, NodeId)>) -> Result<Self, GeomError> {
        let graph = Graph::new(points.len(), links)?;
        Self::from_graph(points, graph)
    }

    pub fn from_graph(points: Vec<PlanePoint>, graph: Graph) -> Result<Self, GeomError> {
        if points.len() != graph.node_count() {
            return Err(GeomError::DegenerateLayout(format!(
                "{} points for {} nodes",
                points.len(),
                graph.node_count()
            )));
        }
        for p in &points {
            PlanePoint::checked(p.x, p.y)?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(points[j]) <= EPS {
                    return Err(GeomError::DegenerateLayout(format!(
                        "nodes {i} and {j} coincide at {}",
                        points[i]
                    )));
                }
            }
        }
        let layout = Layout { points, graph };
        let segs: Vec<PlaneSegment> = (0..layout.graph.link_count()).map(|l| layout.segment(l)).collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if collinear_overlap(&segs[i], &segs[j]) {
                    let (a, b) = layout.graph.link(i);
                    let (c, d) = layout.graph.link(j);
                    return Err(GeomError::DegenerateLayout(format!(
                        "links {a}-{b} and {c}-{d} overlap"
                    )));
                }
            }
        }
        Ok(layout)
    }

    /// Drops every link, keeping the points.
    pub fn points_only(&self) -> Layout {
        Layout {
            points: self.points.clone(),
            graph: Graph::edgeless(self.points.len()),
        }
    }

    /// Same points, links of `graph` (which must have the same node count).
    pub fn with_graph(&self, graph: Graph) -> Result<Layout, GeomError> {
        Layout::from_graph(self.points.clone(), graph)
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn point(&self, v: NodeId) -> PlanePoint {
        self.points[v]
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.points.len()
    }

    pub fn link_count(&self) -> usize {
        self.graph.link_count()
    }

    pub fn segment(&self, link: usize) -> PlaneSegment {
        let (u, v) = self.graph.link(link);
        PlaneSegment {
            a: self.points[u],
            b: self.points[v],
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = PlaneSegment> + '_ {
        (0..self.link_count()).map(move |l| self.segment(l))
    }

    /// Axis-aligned bounding box of the points as `(min, max)`.
    pub fn bounding_box(&self) -> (PlanePoint, PlanePoint) {
        let mut lo = PlanePoint::new(f64::INFINITY, f64::INFINITY);
        let mut hi = PlanePoint::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}

fn collinear_overlap(s1: &PlaneSegment, s2: &PlaneSegment) -> bool {
    if orient(s1.a, s1.b, s2.a) != 0 || orient(s1.a, s1.b, s2.b) != 0 {
        return false;
    }
    // Project onto the dominant axis and measure the shared stretch.
    let d = s1.b.sub(s1.a);
    let key = |p: PlanePoint| if d.0.abs() >= d.1.abs() { p.x } else { p.y };
    let (a0, a1) = minmax(key(s1.a), key(s1.b));
    let (b0, b1) = minmax(key(s2.a), key(s2.b));
    a1.min(b1) - a0.max(b0) > EPS
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Smallest gap between two features of the layout that are not allowed to
/// touch: point/point, point/non-incident link, and link/non-adjacent link.
pub fn min_feature_separation(layout: &Layout) -> Result<f64, GeomError> {
    separation(layout, false)
}

/// Like [`min_feature_separation`], but crossings between non-adjacent links
/// are skipped instead of rejected. Points must still keep clear of links.
pub(crate) fn separation_ignoring_crossings(layout: &Layout) -> Result<f64, GeomError> {
    separation(layout, true)
}

fn separation(layout: &Layout, allow_crossings: bool) -> Result<f64, GeomError> {
    let n = layout.node_count();
    let m = layout.link_count();
    if n + m < 2 {
        return Err(GeomError::TooFewFeatures(n + m));
    }
    let g = layout.graph();
    let mut best = f64::INFINITY;
    let mut check = |d: f64, what: &dyn Fn() -> String| -> Result<(), GeomError> {
        if d <= EPS {
            return Err(GeomError::DegenerateLayout(what()));
        }
        best = best.min(d);
        Ok(())
    };
    for i in 0..n {
        for j in i + 1..n {
            check(layout.point(i).dist(layout.point(j)), &|| {
                format!("nodes {i} and {j} coincide")
            })?;
        }
    }
    for l in 0..m {
        let (u, v) = g.link(l);
        let s = layout.segment(l);
        for w in 0..n {
            if w == u || w == v {
                continue;
            }
            check(dist_point_segment(layout.point(w), &s), &|| {
                format!("node {w} touches link {u}-{v}")
            })?;
        }
    }
    for l1 in 0..m {
        let (a, b) = g.link(l1);
        for l2 in l1 + 1..m {
            let (c, d) = g.link(l2);
            if a == c || a == d || b == c || b == d {
                continue;
            }
            let dist = dist_segment_segment(&layout.segment(l1), &layout.segment(l2));
            if allow_crossings && dist == 0.0 {
                continue;
            }
            check(dist, &|| format!("links {a}-{b} and {c}-{d} touch"))?;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        // Only adjacent links and no second point: nothing constrains the gap.
        Err(GeomError::TooFewFeatures(n + m))
    }
}

/// True iff two distinct links share a point other than a common endpoint.
pub fn segments_properly_intersect(layout: &Layout) -> bool {
    let g = layout.graph();
    let m = layout.link_count();
    for l1 in 0..m {
        let (a, b) = g.link(l1);
        let s1 = layout.segment(l1);
        for l2 in l1 + 1..m {
            let (c, d) = g.link(l2);
            let s2 = layout.segment(l2);
            if !segments_intersect(&s1, &s2) {
                continue;
            }
            let shared = [a, b].iter().find(|x| **x == c || **x == d).copied();
            match shared {
                None => return true,
                Some(w) => {
                    // Adjacent links: anything beyond the shared endpoint is a
                    // collinear fold-back or an endpoint landing on the other link.
                    let other1 = if a == w { b } else { a };
                    let other2 = if c == w { d } else { c };
                    if on_segment(layout.point(other1), &s2) || on_segment(layout.point(other2), &s1) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> PlanePoint {
        PlanePoint::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> PlaneSegment {
        PlaneSegment::new(p(ax, ay), p(bx, by)).unwrap()
    }

    #[test]
    fn point_segment_distances() {
        assert_eq!(dist_point_segment(p(0.0, 0.0), &seg(0.0, 0.0, 1.0, 0.0)), 0.0);
        assert_eq!(dist_point_segment(p(0.0, 1.0), &seg(-1.0, 0.0, 1.0, 0.0)), 1.0);
        let d = dist_point_segment(p(3.0, 4.0), &seg(0.0, 0.0, 1.0, 0.0));
        assert!((d - 20f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn segment_segment_distances() {
        assert_eq!(
            dist_segment_segment(&seg(-1.0, -1.0, 1.0, 1.0), &seg(-1.0, 1.0, 1.0, -1.0)),
            0.0
        );
        assert_eq!(
            dist_segment_segment(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0)),
            1.0
        );
    }

    #[test]
    fn zero_length_and_bad_radius_rejected() {
        assert!(PlaneSegment::new(p(1.0, 1.0), p(1.0, 1.0)).is_err());
        assert!(Disk::new(p(0.0, 0.0), 0.0).is_err());
        assert!(Disk::new(p(0.0, 0.0), f64::NAN).is_err());
        assert!(PlanePoint::checked(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn closed_disk_semantics() {
        let d = Disk::new(p(0.0, 0.0), 1.0).unwrap();
        assert!(disk_hits(&d, &Feature::Point(p(0.0, 1.0))));
        assert!(!disk_hits(&d, &Feature::Point(p(0.0, 1.01))));
        let d = Disk::new(p(0.0, 0.5), 0.6).unwrap();
        assert!(disk_hits(&d, &Feature::Segment(seg(-2.0, 0.0, 2.0, 0.0))));
    }

    #[test]
    fn separation_examples() {
        let square = Layout::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)], vec![]).unwrap();
        assert_eq!(min_feature_separation(&square).unwrap(), 1.0);

        let h = 3f64.sqrt() / 2.0;
        let tri = Layout::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.5, h)], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!((min_feature_separation(&tri).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn separation_rejects_touching_features() {
        // node 2 sits on link 0-1
        let l = Layout::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.0)], vec![(0, 1)]).unwrap();
        assert!(matches!(
            min_feature_separation(&l),
            Err(GeomError::DegenerateLayout(_))
        ));
        let x = Layout::new(
            vec![p(-1.0, -1.0), p(1.0, 1.0), p(-1.0, 1.0), p(1.0, -1.0)],
            vec![(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(min_feature_separation(&x).is_err());
        assert!((separation_ignoring_crossings(&x).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let single = Layout::new(vec![p(0.0, 0.0)], vec![]).unwrap();
        assert!(matches!(
            min_feature_separation(&single),
            Err(GeomError::TooFewFeatures(1))
        ));
    }

    #[test]
    fn layout_rejects_degenerate_input() {
        assert!(Layout::new(vec![p(0.0, 0.0), p(0.0, 0.0)], vec![]).is_err());
        assert!(Layout::new(vec![p(0.0, 0.0), p(f64::NAN, 0.0)], vec![]).is_err());
        // 0-2 and 1-3 are collinear and overlap on [1, 2]
        let overlap = Layout::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), p(3.0, 0.0)],
            vec![(0, 2), (1, 3)],
        );
        assert!(matches!(overlap, Err(GeomError::DegenerateLayout(_))));
        // collinear but only touching at an endpoint is fine
        assert!(Layout::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)], vec![(0, 1), (1, 2)]).is_ok());
    }

    #[test]
    fn proper_intersection() {
        let cross = Layout::new(
            vec![p(-1.0, -1.0), p(1.0, 1.0), p(-1.0, 1.0), p(1.0, -1.0)],
            vec![(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(segments_properly_intersect(&cross));
        let shared = Layout::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)], vec![(0, 1), (0, 2)]).unwrap();
        assert!(!segments_properly_intersect(&shared));
        let apart = Layout::new(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)],
            vec![(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(!segments_properly_intersect(&apart));
        // T-junction: endpoint of one link lands inside the other
        let t = Layout::new(
            vec![p(-1.0, 0.0), p(1.0, 0.0), p(0.0, 0.0), p(0.0, 1.0)],
            vec![(0, 1), (2, 3)],
        )
        .unwrap();
        assert!(segments_properly_intersect(&t));
        // adjacent links folding back along each other
        let fold = Layout::new(vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.0)], vec![(0, 1), (1, 2)]);
        assert!(fold.is_err() || segments_properly_intersect(&fold.unwrap()));
    }
}
