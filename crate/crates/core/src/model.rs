//! Graph-domain types shared by the generators, oracles, and renderers.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::vocab::{self, AttrField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Transit,
    Network,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Transit => "transit",
            Domain::Network => "network",
        })
    }
}

impl std::str::FromStr for Domain {
    type Err = ForgeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transit" => Ok(Domain::Transit),
            "network" => Ok(Domain::Network),
            other => Err(ForgeError::Config(format!("unknown domain `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    #[default]
    Standard,
    Large,
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeClass::Standard => "standard",
            SizeClass::Large => "large",
        })
    }
}

impl std::str::FromStr for SizeClass {
    type Err = ForgeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(SizeClass::Standard),
            "large" => Ok(SizeClass::Large),
            other => Err(ForgeError::Config(format!("unknown size class `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stroke {
    Solid,
    Dashed,
    Dotted,
}

impl Stroke {
    pub const ALL: [Stroke; 3] = [Stroke::Solid, Stroke::Dashed, Stroke::Dotted];

    pub fn as_str(self) -> &'static str {
        match self {
            Stroke::Solid => "solid",
            Stroke::Dashed => "dashed",
            Stroke::Dotted => "dotted",
        }
    }
}

/// A single attribute value. Serialized untagged so attribute maps stay flat.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Bool(bool),
    Int(i64),
    Str(String),
}

impl AttrValue {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            AttrValue::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            AttrValue::Str(s) => Some(s),
            _ => None,
        }
    }

    /// Integer view; year strings parse as integers.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(v) => Some(*v),
            AttrValue::Str(s) => s.parse().ok(),
            AttrValue::Bool(_) => None,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Bool(true) => f.write_str("True"),
            AttrValue::Bool(false) => f.write_str("False"),
            AttrValue::Int(v) => write!(f, "{v}"),
            AttrValue::Str(s) => f.write_str(s),
        }
    }
}

impl From<bool> for AttrValue {
    fn from(v: bool) -> Self {
        AttrValue::Bool(v)
    }
}

impl From<i64> for AttrValue {
    fn from(v: i64) -> Self {
        AttrValue::Int(v)
    }
}

impl From<&str> for AttrValue {
    fn from(v: &str) -> Self {
        AttrValue::Str(v.to_string())
    }
}

impl From<String> for AttrValue {
    fn from(v: String) -> Self {
        AttrValue::Str(v)
    }
}

pub type Attrs = BTreeMap<String, AttrValue>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub id: String,
    pub name: String,
    pub color: String,
    pub stroke: Stroke,
    pub built: String,
    pub has_aircon: bool,
}

impl LineSpec {
    /// Attributes a track segment of this line carries.
    pub fn edge_attrs(&self) -> Attrs {
        let mut attrs = Attrs::new();
        attrs.insert("line_name".into(), self.name.clone().into());
        attrs.insert("line_color".into(), self.color.clone().into());
        attrs.insert("line_stroke".into(), self.stroke.as_str().into());
        attrs.insert("line_has_aircon".into(), self.has_aircon.into());
        attrs.insert("line_built".into(), self.built.clone().into());
        attrs
    }

    /// Attributes of a connector edge assigned to this line.
    pub fn connector_attrs(&self) -> Attrs {
        let mut attrs = self.edge_attrs();
        attrs.insert("line_stroke".into(), Stroke::Dotted.as_str().into());
        attrs
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub attrs: Attrs,
}

impl NodeSpec {
    pub fn attr(&self, key: &str) -> Result<&AttrValue> {
        self.attrs.get(key).ok_or_else(|| ForgeError::MissingAttribute {
            key: key.to_string(),
            entity: format!("node {}", self.id),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub endpoint_a: String,
    pub endpoint_b: String,
    pub line_id: Option<String>,
    pub attrs: Attrs,
    pub is_connector: bool,
}

impl EdgeSpec {
    pub fn attr(&self, key: &str) -> Result<&AttrValue> {
        self.attrs.get(key).ok_or_else(|| ForgeError::MissingAttribute {
            key: key.to_string(),
            entity: format!("edge {}-{}", self.endpoint_a, self.endpoint_b),
        })
    }

    /// Endpoints in sorted order, the undirected identity of the edge.
    pub fn key(&self) -> (&str, &str) {
        let (a, b) = (self.endpoint_a.as_str(), self.endpoint_b.as_str());
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn touches(&self, id: &str) -> bool {
        self.endpoint_a == id || self.endpoint_b == id
    }

    pub fn joins(&self, u: &str, v: &str) -> bool {
        (self.endpoint_a == u && self.endpoint_b == v) || (self.endpoint_a == v && self.endpoint_b == u)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub domain: Domain,
    pub seed: u64,
    pub size_class: SizeClass,
    pub lines: Vec<LineSpec>,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn empty(domain: Domain) -> Self {
        GraphSpec {
            domain,
            seed: 0,
            size_class: SizeClass::Standard,
            lines: Vec::new(),
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn node(&self, id: &str) -> Result<&NodeSpec> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or_else(|| ForgeError::UnknownNode(id.to_string()))
    }

    pub fn node_by_name(&self, name: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn line(&self, id: &str) -> Result<&LineSpec> {
        self.lines
            .iter()
            .find(|l| l.id == id)
            .ok_or_else(|| ForgeError::UnknownLine(id.to_string()))
    }

    pub fn line_by_name(&self, name: &str) -> Option<&LineSpec> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Number of connected components of the undirected graph (0 for no nodes).
    pub fn component_count(&self) -> usize {
        components(self).len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }
}

/// Connected components as lists of node indices, each sorted ascending,
/// ordered by their smallest member. Edges with unknown endpoints are ignored.
pub fn components(g: &GraphSpec) -> Vec<Vec<usize>> {
    let index: HashMap<&str, usize> = g.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    let mut adj = vec![Vec::new(); g.nodes.len()];
    for e in &g.edges {
        if let (Some(&a), Some(&b)) = (index.get(e.endpoint_a.as_str()), index.get(e.endpoint_b.as_str())) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; g.nodes.len()];
    let mut out = Vec::new();
    for start in 0..g.nodes.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateLineId,
    DuplicateLineName,
    DuplicateColorStroke,
    DuplicateNodeId,
    DuplicateNodeName,
    MissingAttribute(String),
    UnexpectedAttribute(String),
    ValueOutOfVocabulary(String),
    SelfLoop,
    DanglingEndpoint,
    UnknownLine,
    MissingLine,
    EdgeLineMismatch(String),
    DuplicateEdge,
    NetworkHasLines,
    NetworkEdgeHasLine,
    NotConnected,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::DuplicateLineId => f.write_str("duplicate line id"),
            ViolationKind::DuplicateLineName => f.write_str("duplicate line name"),
            ViolationKind::DuplicateColorStroke => f.write_str("duplicate color/stroke pair"),
            ViolationKind::DuplicateNodeId => f.write_str("duplicate node id"),
            ViolationKind::DuplicateNodeName => f.write_str("duplicate node name"),
            ViolationKind::MissingAttribute(k) => write!(f, "missing attribute `{k}`"),
            ViolationKind::UnexpectedAttribute(k) => write!(f, "unexpected attribute `{k}`"),
            ViolationKind::ValueOutOfVocabulary(k) => write!(f, "value of `{k}` outside vocabulary"),
            ViolationKind::SelfLoop => f.write_str("self loop"),
            ViolationKind::DanglingEndpoint => f.write_str("dangling endpoint"),
            ViolationKind::UnknownLine => f.write_str("unknown line"),
            ViolationKind::MissingLine => f.write_str("transit edge without line"),
            ViolationKind::EdgeLineMismatch(k) => write!(f, "edge attribute `{k}` differs from its line"),
            ViolationKind::DuplicateEdge => f.write_str("duplicate edge"),
            ViolationKind::NetworkHasLines => f.write_str("network graph has lines"),
            ViolationKind::NetworkEdgeHasLine => f.write_str("network edge has line id"),
            ViolationKind::NotConnected => f.write_str("graph not connected"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending entity: a line id, node id, `edge#<index>`, or `graph`.
    pub entity: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.kind)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, kind: &ViolationKind) -> bool {
        self.violations.iter().any(|v| &v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, entity: impl Into<String>) {
        self.violations.push(Violation { kind, entity: entity.into() });
    }
}

fn check_schema(report: &mut ValidationReport, entity: &str, attrs: &Attrs, schema: &[AttrField]) {
    for field in schema {
        match attrs.get(field.key) {
            None => report.push(ViolationKind::MissingAttribute(field.key.into()), entity),
            Some(v) if !field.kind.admits(v) => {
                report.push(ViolationKind::ValueOutOfVocabulary(field.key.into()), entity)
            }
            Some(_) => {}
        }
    }
    for key in attrs.keys() {
        if !schema.iter().any(|f| f.key == key) {
            report.push(ViolationKind::UnexpectedAttribute(key.clone()), entity);
        }
    }
}

pub fn validate_graph(g: &GraphSpec) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut line_ids = HashSet::new();
    let mut line_names = HashSet::new();
    let mut pairs = HashSet::new();
    for line in &g.lines {
        if !line_ids.insert(line.id.as_str()) {
            report.push(ViolationKind::DuplicateLineId, &line.id);
        }
        if !line_names.insert(line.name.as_str()) {
            report.push(ViolationKind::DuplicateLineName, &line.id);
        }
        if !pairs.insert((line.color.as_str(), line.stroke)) {
            report.push(ViolationKind::DuplicateColorStroke, &line.id);
        }
        if !vocab::COLORS.contains(&line.color.as_str()) {
            report.push(ViolationKind::ValueOutOfVocabulary("color".into()), &line.id);
        }
        if !vocab::AttrKind::Year(vocab::BUILT_MIN, vocab::BUILT_MAX).admits(&AttrValue::Str(line.built.clone())) {
            report.push(ViolationKind::ValueOutOfVocabulary("built".into()), &line.id);
        }
    }
    if g.domain == Domain::Network && !g.lines.is_empty() {
        report.push(ViolationKind::NetworkHasLines, "graph");
    }

    let mut node_ids = HashSet::new();
    let mut node_names = HashSet::new();
    let node_schema = vocab::node_schema(g.domain);
    for node in &g.nodes {
        if !node_ids.insert(node.id.as_str()) {
            report.push(ViolationKind::DuplicateNodeId, &node.id);
        }
        if !node_names.insert(node.name.as_str()) {
            report.push(ViolationKind::DuplicateNodeName, &node.id);
        }
        check_schema(&mut report, &node.id, &node.attrs, node_schema);
    }

    let edge_schema = vocab::edge_schema(g.domain);
    let lines: HashMap<&str, &LineSpec> = g.lines.iter().map(|l| (l.id.as_str(), l)).collect();
    let mut triples = HashSet::new();
    for (i, e) in g.edges.iter().enumerate() {
        let entity = format!("edge#{i}");
        if e.endpoint_a == e.endpoint_b {
            report.push(ViolationKind::SelfLoop, &entity);
        }
        if !node_ids.contains(e.endpoint_a.as_str()) || !node_ids.contains(e.endpoint_b.as_str()) {
            report.push(ViolationKind::DanglingEndpoint, &entity);
        }
        let (a, b) = e.key();
        if !triples.insert((a, b, e.line_id.as_deref())) {
            report.push(ViolationKind::DuplicateEdge, &entity);
        }
        check_schema(&mut report, &entity, &e.attrs, edge_schema);
        match (g.domain, e.line_id.as_deref()) {
            (Domain::Network, Some(_)) => report.push(ViolationKind::NetworkEdgeHasLine, &entity),
            (Domain::Network, None) => {}
            (Domain::Transit, None) => report.push(ViolationKind::MissingLine, &entity),
            (Domain::Transit, Some(line_id)) => match lines.get(line_id) {
                None => report.push(ViolationKind::UnknownLine, &entity),
                Some(line) => {
                    let expected = if e.is_connector { line.connector_attrs() } else { line.edge_attrs() };
                    for (key, value) in &expected {
                        if e.attrs.get(key).is_some_and(|v| v != value) {
                            report.push(ViolationKind::EdgeLineMismatch(key.clone()), &entity);
                        }
                    }
                }
            },
        }
    }

    if !g.is_connected() {
        report.push(ViolationKind::NotConnected, "graph");
    }
    report
}

/// Undirected, deduplicated neighbor lists keyed by node id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    map: BTreeMap<String, Vec<String>>,
}

impl Adjacency {
    pub fn neighbors(&self, id: &str) -> Result<&[String]> {
        self.map
            .get(id)
            .map(Vec::as_slice)
            .ok_or_else(|| ForgeError::UnknownNode(id.to_string()))
    }

    pub fn is_adjacent(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.neighbors(a)?.iter().any(|n| n == b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<String>)> {
        self.map.iter()
    }
}

pub fn adjacency(g: &GraphSpec) -> Adjacency {
    let mut sets: BTreeMap<String, BTreeSet<String>> =
        g.nodes.iter().map(|n| (n.id.clone(), BTreeSet::new())).collect();
    for e in &g.edges {
        if e.endpoint_a == e.endpoint_b {
            continue;
        }
        if !sets.contains_key(&e.endpoint_a) || !sets.contains_key(&e.endpoint_b) {
            continue;
        }
        sets.get_mut(&e.endpoint_a).unwrap().insert(e.endpoint_b.clone());
        sets.get_mut(&e.endpoint_b).unwrap().insert(e.endpoint_a.clone());
    }
    Adjacency {
        map: sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn station(id: &str) -> NodeSpec {
        let mut attrs = Attrs::new();
        attrs.insert("disabled_access".into(), true.into());
        attrs.insert("has_rail".into(), false.into());
        attrs.insert("music".into(), "jazz".into());
        attrs.insert("architecture".into(), "victorian".into());
        attrs.insert("size".into(), "small".into());
        attrs.insert("cleanliness".into(), "clean".into());
        NodeSpec { id: id.into(), name: format!("{id} Station"), x: 0.0, y: 0.0, attrs }
    }

    pub fn line(id: &str, color: &str, stroke: Stroke) -> LineSpec {
        LineSpec {
            id: id.into(),
            name: format!("{id} Line"),
            color: color.into(),
            stroke,
            built: "1900".into(),
            has_aircon: true,
        }
    }

    pub fn track(line: &LineSpec, a: &str, b: &str) -> EdgeSpec {
        EdgeSpec {
            endpoint_a: a.into(),
            endpoint_b: b.into(),
            line_id: Some(line.id.clone()),
            attrs: line.edge_attrs(),
            is_connector: false,
        }
    }

    /// Transit graph over the given node ids with all edges on one red line.
    pub fn transit(ids: &[&str], edges: &[(&str, &str)]) -> GraphSpec {
        let red = line("L0", "red", Stroke::Solid);
        GraphSpec {
            domain: Domain::Transit,
            seed: 0,
            size_class: SizeClass::Standard,
            nodes: ids.iter().map(|id| station(id)).collect(),
            edges: edges.iter().map(|(a, b)| track(&red, a, b)).collect(),
            lines: vec![red],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn single_node_is_connected() {
        let g = transit(&["A"], &[]);
        assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
    }

    #[test]
    fn two_isolated_nodes_are_not_connected() {
        let g = transit(&["A", "B"], &[]);
        assert!(validate_graph(&g).contains(&ViolationKind::NotConnected));
    }

    #[test]
    fn duplicate_color_stroke_is_reported() {
        let mut g = transit(&["A"], &[]);
        let mut twin = line("L1", "red", Stroke::Solid);
        twin.name = "Other Line".into();
        g.lines.push(twin);
        let report = validate_graph(&g);
        assert!(report.contains(&ViolationKind::DuplicateColorStroke));
        assert!(report.violations.iter().any(|v| v.to_string() == "L1: duplicate color/stroke pair"));
    }

    #[test]
    fn schema_violations_name_the_key() {
        let mut g = transit(&["A"], &[]);
        g.nodes[0].attrs.remove("music");
        g.nodes[0].attrs.insert("colour".into(), "red".into());
        g.nodes[0].attrs.insert("size".into(), "huge".into());
        let report = validate_graph(&g);
        assert!(report.contains(&ViolationKind::MissingAttribute("music".into())));
        assert!(report.contains(&ViolationKind::UnexpectedAttribute("colour".into())));
        assert!(report.contains(&ViolationKind::ValueOutOfVocabulary("size".into())));
    }

    #[test]
    fn edge_must_match_line() {
        let mut g = transit(&["A", "B"], &[("A", "B")]);
        g.edges[0].attrs.insert("line_color".into(), "blue".into());
        assert!(validate_graph(&g).contains(&ViolationKind::EdgeLineMismatch("line_color".into())));
    }

    #[test]
    fn duplicate_and_dangling_edges() {
        let g = transit(&["A", "B"], &[("A", "B"), ("B", "A"), ("A", "Z"), ("A", "A")]);
        let report = validate_graph(&g);
        assert!(report.contains(&ViolationKind::DuplicateEdge));
        assert!(report.contains(&ViolationKind::DanglingEndpoint));
        assert!(report.contains(&ViolationKind::SelfLoop));
    }

    #[test]
    fn adjacency_of_path() {
        let g = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        assert_eq!(adjacency(&g).neighbors("B").unwrap(), ["A", "C"]);
    }

    #[test]
    fn adjacency_dedups_parallel_edges() {
        let mut g = transit(&["A", "B"], &[("A", "B")]);
        let blue = line("L1", "blue", Stroke::Dashed);
        g.edges.push(track(&blue, "B", "A"));
        g.lines.push(blue);
        assert!(validate_graph(&g).is_empty());
        assert_eq!(adjacency(&g).neighbors("A").unwrap(), ["B"]);
    }

    #[test]
    fn adjacency_isolated_and_unknown() {
        let g = transit(&["A"], &[]);
        let adj = adjacency(&g);
        assert!(adj.neighbors("A").unwrap().is_empty());
        assert!(matches!(adj.neighbors("Q"), Err(ForgeError::UnknownNode(_))));
    }

    #[test]
    fn json_key_order() {
        let g = transit(&["A"], &[]);
        let json = g.to_json();
        let positions: Vec<usize> = ["\"domain\"", "\"seed\"", "\"size_class\"", "\"lines\"", "\"nodes\"", "\"edges\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert_eq!(GraphSpec::from_json(&json).unwrap(), g);
    }
}
