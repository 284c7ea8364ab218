//! Deterministic SVG drawings of layouts, augmentations and failure regions.

use std::fmt::Write;

use rbcdn::{FailureEvent, Layout, NodeId, PlanePoint};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// What to overlay on the base layout.
#[derive(Debug, Default, Clone)]
pub struct Overlay<'a> {
    pub augmentation: &'a [(NodeId, NodeId)],
    /// Failure event on the augmented network (link ids count base links
    /// first, then the augmentation in order).
    pub witness: Option<&'a FailureEvent>,
    pub radius: Option<f64>,
}

/// Center of a failure region that produces `ev`: the centroid of its failed
/// nodes, or of the midpoints of its failed links when no node fails.
fn region_center(layout: &Layout, aug: &[(NodeId, NodeId)], ev: &FailureEvent) -> Option<PlanePoint> {
    let mut pts: Vec<PlanePoint> = ev.failed_nodes().iter().map(|&v| layout.point(v)).collect();
    if pts.is_empty() {
        let m = layout.link_count();
        for &l in ev.failed_links() {
            let (u, v) = if l < m { layout.graph().link(l) } else { aug[l - m] };
            let (a, b) = (layout.point(u), layout.point(v));
            pts.push(PlanePoint::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0));
        }
    }
    if pts.is_empty() {
        return None;
    }
    let k = pts.len() as f64;
    Some(PlanePoint::new(
        pts.iter().map(|p| p.x).sum::<f64>() / k,
        pts.iter().map(|p| p.y).sum::<f64>() / k,
    ))
}

pub fn render_svg(layout: &Layout, overlay: &Overlay) -> String {
    let (lo, hi) = layout.bounding_box();
    let pad = overlay.radius.unwrap_or(0.0);
    let span = (hi.x - lo.x).max(hi.y - lo.y) + 2.0 * pad;
    let scale = if span > 0.0 {
        (CANVAS - 2.0 * MARGIN) / span
    } else {
        1.0
    };
    let map = |p: PlanePoint| {
        (
            MARGIN + (p.x - lo.x + pad) * scale,
            CANVAS - MARGIN - (p.y - lo.y + pad) * scale,
        )
    };
    let m = layout.link_count();
    let failed_link = |l: usize| overlay.witness.is_some_and(|ev| ev.failed_links().contains(&l));
    let failed_node = |v: usize| overlay.witness.is_some_and(|ev| ev.failed_nodes().contains(&v));

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if let (Some(ev), Some(r)) = (overlay.witness, overlay.radius) {
        if let Some(c) = region_center(layout, overlay.augmentation, ev) {
            let (x, y) = map(c);
            writeln!(
                out,
                r##"<circle class="region" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="#f4c7c3" fill-opacity="0.5" stroke="#c0392b"/>"##,
                r * scale
            )
            .unwrap();
        }
    }
    let line = |out: &mut String, u: NodeId, v: NodeId, class: &str, failed: bool, dashed: bool| {
        let (x1, y1) = map(layout.point(u));
        let (x2, y2) = map(layout.point(v));
        let colour = if failed { "#c0392b" } else { "#222222" };
        let dash = if dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(
            out,
            r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{colour}" stroke-width="2"{dash}/>"#
        )
        .unwrap();
    };
    for (l, &(u, v)) in layout.graph().links().iter().enumerate() {
        line(&mut out, u, v, "link", failed_link(l), false);
    }
    for (i, &(u, v)) in overlay.augmentation.iter().enumerate() {
        line(&mut out, u, v, "added", failed_link(m + i), true);
    }
    for v in 0..layout.node_count() {
        let (x, y) = map(layout.point(v));
        let fill = if failed_node(v) { "#c0392b" } else { "#222222" };
        writeln!(
            out,
            r#"<circle class="node" cx="{x:.3}" cy="{y:.3}" r="5" fill="{fill}"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12">{v}</text>"#,
            x + 7.0,
            y - 7.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
