//! JSON file formats: instances, graphs with rotations, grid layouts and
//! solver reports. Every document carries `schema_version` and `kind`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use rbcdn::planar::validate_rotation_system;
use rbcdn::{
    CatalogSpec, CostTable, EdgeCost, FailureEvent, Graph, GridLayout, Layout, NodeId, PlanePoint, RbcdnRpInstance,
    RotationSystem, SemanticsTag,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

pub fn invalid(msg: impl fmt::Display) -> CliError {
    CliError::Validation(msg.to_string())
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostValue {
    Finite(u64),
    Text(InfTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

impl From<EdgeCost> for CostValue {
    fn from(c: EdgeCost) -> Self {
        match c {
            EdgeCost::Finite(x) => CostValue::Finite(x),
            EdgeCost::Infinite => CostValue::Text(InfTag::Inf),
        }
    }
}

impl From<CostValue> for EdgeCost {
    fn from(c: CostValue) -> Self {
        match c {
            CostValue::Finite(x) => EdgeCost::Finite(x),
            CostValue::Text(InfTag::Inf) => EdgeCost::Infinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRecord {
    pub id: usize,
    pub u: NodeId,
    pub v: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostRecord {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: CostValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRecord {
    pub semantics: SemanticsName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsName {
    Unit,
    Geometric,
    Sampled,
}

impl From<SemanticsTag> for SemanticsName {
    fn from(t: SemanticsTag) -> Self {
        match t {
            SemanticsTag::Unit => SemanticsName::Unit,
            SemanticsTag::Geometric => SemanticsName::Geometric,
            SemanticsTag::Sampled => SemanticsName::Sampled,
        }
    }
}

pub const DEFAULT_SAMPLES: u64 = 10_000;

impl CatalogRecord {
    pub fn from_spec(spec: CatalogSpec) -> Self {
        let (samples, seed) = match spec {
            CatalogSpec::Sampled { samples, seed } => (Some(samples), Some(seed)),
            _ => (None, None),
        };
        CatalogRecord {
            semantics: spec.tag().into(),
            samples,
            seed,
        }
    }

    pub fn to_spec(self) -> Result<CatalogSpec, CliError> {
        match self.semantics {
            SemanticsName::Unit => Ok(CatalogSpec::Unit),
            SemanticsName::Geometric => Ok(CatalogSpec::Geometric),
            SemanticsName::Sampled => {
                let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
                if samples == 0 {
                    return Err(invalid("catalog.samples must be at least 1"));
                }
                Ok(CatalogSpec::Sampled {
                    samples,
                    seed: self.seed.unwrap_or(0),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Instance,
    Graph,
    Layout,
    Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub nodes: Vec<NodeRecord>,
    pub links: Vec<LinkRecord>,
    pub region_radius: f64,
    pub catalog: CatalogRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_cost: Option<CostValue>,
    #[serde(default)]
    pub costs: Vec<CostRecord>,
    #[serde(rename = "C")]
    pub budget: u64,
    #[serde(rename = "K")]
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub nodes: usize,
    pub links: Vec<(NodeId, NodeId)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<NodeId>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridNodeRecord {
    pub id: usize,
    pub x: i64,
    pub y: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub width: i64,
    pub height: i64,
    pub nodes: Vec<GridNodeRecord>,
    pub links: Vec<LinkRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventRecord {
    pub nodes: Vec<NodeId>,
    pub links: Vec<usize>,
}

impl From<&FailureEvent> for EventRecord {
    fn from(ev: &FailureEvent) -> Self {
        EventRecord {
            nodes: ev.failed_nodes().to_vec(),
            links: ev.failed_links().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub command: String,
    pub status: String,
    #[serde(default)]
    pub augmentation: Vec<(NodeId, NodeId)>,
    #[serde(default)]
    pub cost: Option<CostValue>,
    pub base_rbcdn: usize,
    #[serde(default)]
    pub achieved_rbcdn: Option<usize>,
    #[serde(default)]
    pub witness: Option<EventRecord>,
    #[serde(default)]
    pub nodes_explored: Option<u64>,
    pub timing_ms: f64,
}

fn kind_check(found: Kind, want: Kind) -> Result<(), CliError> {
    if found == want {
        Ok(())
    } else {
        Err(invalid(
            format!("expected a {want:?} file, found kind {found:?}").to_lowercase(),
        ))
    }
}

fn version_check(v: u32) -> Result<(), CliError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(invalid(format!(
            "unsupported schema_version {v}, expected {SCHEMA_VERSION}"
        )))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Peeks at the `kind` field of a document.
pub fn read_kind(path: &Path) -> Result<Kind, CliError> {
    #[derive(Deserialize)]
    struct Peek {
        kind: Kind,
    }
    Ok(read_json::<Peek>(path)?.kind)
}

fn dense_ids(ids: impl Iterator<Item = usize>, what: &str) -> Result<(), CliError> {
    for (i, id) in ids.enumerate() {
        if id != i {
            return Err(invalid(format!(
                "{what} at index {i} has id {id}; ids must run 0, 1, 2, ... in order"
            )));
        }
    }
    Ok(())
}

fn build_layout(nodes: &[NodeRecord], links: &[LinkRecord]) -> Result<Layout, CliError> {
    dense_ids(nodes.iter().map(|n| n.id), "node")?;
    dense_ids(links.iter().map(|l| l.id), "link")?;
    let pts = nodes.iter().map(|n| PlanePoint::new(n.x, n.y)).collect();
    Layout::new(pts, links.iter().map(|l| (l.u, l.v)).collect()).map_err(invalid)
}

fn node_records(layout: &Layout) -> Vec<NodeRecord> {
    layout
        .points()
        .iter()
        .enumerate()
        .map(|(id, p)| NodeRecord {
            id,
            x: round12(p.x),
            y: round12(p.y),
        })
        .collect()
}

fn link_records(g: &Graph) -> Vec<LinkRecord> {
    g.links()
        .iter()
        .enumerate()
        .map(|(id, &(u, v))| LinkRecord { id, u, v })
        .collect()
}

impl InstanceFile {
    pub fn from_instance(inst: &RbcdnRpInstance) -> Self {
        let costs = inst.costs();
        InstanceFile {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Instance,
            nodes: node_records(inst.layout()),
            links: link_records(inst.base_graph()),
            region_radius: round12(inst.region_radius()),
            catalog: CatalogRecord::from_spec(inst.catalog_spec()),
            default_cost: costs.default_cost().map(Into::into),
            costs: costs
                .explicit()
                .map(|((u, v), c)| CostRecord { u, v, cost: c.into() })
                .collect(),
            budget: inst.budget(),
            target: inst.target(),
        }
    }

    /// Validates the document; `catalog` overrides the declared semantics.
    pub fn to_instance(&self, catalog: Option<CatalogSpec>) -> Result<RbcdnRpInstance, CliError> {
        version_check(self.schema_version)?;
        kind_check(self.kind, Kind::Instance)?;
        let layout = build_layout(&self.nodes, &self.links)?;
        let mut costs = CostTable::new(self.default_cost.map(Into::into));
        let mut seen = BTreeSet::new();
        for (i, c) in self.costs.iter().enumerate() {
            let pair = (c.u.min(c.v), c.u.max(c.v));
            if !seen.insert(pair) {
                return Err(invalid(format!("costs[{i}]: duplicate cost for {}-{}", pair.0, pair.1)));
            }
            costs.set(c.u, c.v, c.cost.into());
        }
        let spec = match catalog {
            Some(s) => s,
            None => self.catalog.to_spec()?,
        };
        RbcdnRpInstance::new(layout, self.region_radius, costs, self.budget, self.target, spec).map_err(invalid)
    }
}

impl GraphFile {
    pub fn new(g: &Graph, rot: Option<&RotationSystem>) -> Self {
        GraphFile {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Graph,
            nodes: g.node_count(),
            links: g.links().to_vec(),
            rotation: rot.map(|r| (0..g.node_count()).map(|v| r.around(v).to_vec()).collect()),
        }
    }

    pub fn graph(&self) -> Result<Graph, CliError> {
        version_check(self.schema_version)?;
        kind_check(self.kind, Kind::Graph)?;
        Graph::new(self.nodes, self.links.iter().copied()).map_err(invalid)
    }

    /// The graph with its rotation, checked to be a planar embedding.
    pub fn embedded(&self) -> Result<(Graph, RotationSystem), CliError> {
        let g = self.graph()?;
        let order = self
            .rotation
            .clone()
            .ok_or_else(|| invalid("graph file has no rotation"))?;
        if order.len() != g.node_count() {
            return Err(invalid(format!(
                "rotation lists {} nodes, graph has {}",
                order.len(),
                g.node_count()
            )));
        }
        for (v, around) in order.iter().enumerate() {
            let mut have: Vec<NodeId> = around.clone();
            have.sort_unstable();
            let mut want = g.neighbors(v).to_vec();
            want.sort_unstable();
            if have != want {
                return Err(invalid(format!(
                    "rotation at node {v} does not list exactly its neighbours"
                )));
            }
        }
        let rot = RotationSystem::new(order);
        if g.node_count() >= 3 && rbcdn::graph::is_connected(&g) {
            validate_rotation_system(&g, &rot).map_err(invalid)?;
        }
        Ok((g, rot))
    }
}

impl LayoutFile {
    pub fn from_grid(grid: &GridLayout) -> Self {
        LayoutFile {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Layout,
            width: grid.width(),
            height: grid.height(),
            nodes: grid
                .coords
                .iter()
                .enumerate()
                .map(|(id, &(x, y))| GridNodeRecord { id, x, y })
                .collect(),
            links: link_records(&grid.graph),
        }
    }

    pub fn layout(&self) -> Result<Layout, CliError> {
        version_check(self.schema_version)?;
        kind_check(self.kind, Kind::Layout)?;
        let nodes: Vec<NodeRecord> = self
            .nodes
            .iter()
            .map(|n| NodeRecord {
                id: n.id,
                x: n.x as f64,
                y: n.y as f64,
            })
            .collect();
        build_layout(&nodes, &self.links)
    }
}

impl ReportFile {
    pub fn check(&self) -> Result<(), CliError> {
        version_check(self.schema_version)?;
        kind_check(self.kind, Kind::Report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOUR: &str = r#"{
  "schema_version": 1,
  "kind": "instance",
  "nodes": [
    {"id": 0, "x": 0.0, "y": 0.0},
    {"id": 1, "x": 1.0, "y": 0.0},
    {"id": 2, "x": 1.0, "y": 1.0},
    {"id": 3, "x": 0.0, "y": 1.0}
  ],
  "links": [{"id": 0, "u": 0, "v": 1}],
  "region_radius": 0.25,
  "catalog": {"semantics": "unit"},
  "default_cost": 2,
  "costs": [{"u": 2, "v": 0, "cost": "inf"}, {"u": 1, "v": 2, "cost": 1}],
  "C": 4,
  "K": 1
}"#;

    fn parse(text: &str) -> InstanceFile {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn well_formed_instance() {
        let inst = parse(FOUR).to_instance(None).unwrap();
        assert_eq!(inst.node_count(), 4);
        assert_eq!(inst.cost(0, 2), Some(EdgeCost::Infinite));
        assert_eq!(inst.cost(2, 1), Some(EdgeCost::Finite(1)));
        assert_eq!(inst.cost(1, 3), Some(EdgeCost::Finite(2)));
        assert_eq!((inst.budget(), inst.target()), (4, 1));
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let once = to_json(&InstanceFile::from_instance(&parse(FOUR).to_instance(None).unwrap()));
        let twice = to_json(&InstanceFile::from_instance(&parse(&once).to_instance(None).unwrap()));
        assert_eq!(once, twice);
        assert!(once.contains("\"cost\": \"inf\""));
    }

    #[test]
    fn duplicate_link_is_named() {
        let text = FOUR.replace(
            r#""links": [{"id": 0, "u": 0, "v": 1}]"#,
            r#""links": [{"id": 0, "u": 0, "v": 1}, {"id": 1, "u": 1, "v": 0}]"#,
        );
        let err = parse(&text).to_instance(None).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
        assert!(err.to_string().contains("duplicate link 0-1"), "{err}");
    }

    #[test]
    fn bad_cost_string_is_a_parse_error() {
        assert!(serde_json::from_str::<InstanceFile>(&FOUR.replace("\"inf\"", "\"infinity\"")).is_err());
    }

    #[test]
    fn sparse_ids_rejected() {
        let text = FOUR.replace(r#"{"id": 3, "x": 0.0"#, r#"{"id": 7, "x": 0.0"#);
        let err = parse(&text).to_instance(None).unwrap_err();
        assert!(err.to_string().contains("index 3 has id 7"), "{err}");
    }

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(2.0), 2.0);
        assert_eq!(round12(round12(std::f64::consts::PI)), round12(std::f64::consts::PI));
    }
}
