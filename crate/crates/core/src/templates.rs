//! Question templates: text pattern, slot sampler and answer oracle.
//!
//! Slot values are stored as text (entity names or raw attribute values) so
//! that an oracle can be re-run from a stored record and the graph alone.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::model::{AttrValue, Domain};
use crate::oracles::{self, Aggregate, GraphIndex, NodePredicate, PathAttr, PathResult, ROUTE_CAP};
use crate::rng::RandomStream;
use crate::transit::INTEGER_NAME_SPACE;
use crate::vocab;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    #[default]
    Facts,
    Reasoning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputType {
    String,
    Boolean,
    Numeric,
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Node,
    Edge,
    Subgraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Lookup,
    Filtering,
    Aggregation,
    PathReasoning,
    Topology,
    Count,
    Comparison,
}

macro_rules! snake_display {
    ($($ty:ty),*) => {$(
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = serde_json::to_value(self).map_err(|_| fmt::Error)?;
                f.write_str(s.as_str().unwrap_or_default())
            }
        }

        impl std::str::FromStr for $ty {
            type Err = ForgeError;

            fn from_str(s: &str) -> Result<Self> {
                serde_json::from_value(serde_json::Value::String(s.to_string()))
                    .map_err(|_| ForgeError::Config(format!("unrecognised value `{s}`")))
            }
        }
    )*};
}

snake_display!(Subset, OutputType, Scope, Group);

/// A typed ground-truth answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Answer {
    Bool(bool),
    Num(i64),
    Str(String),
    List(Vec<String>),
}

impl Answer {
    pub fn output_type(&self) -> OutputType {
        match self {
            Answer::Bool(_) => OutputType::Boolean,
            Answer::Num(_) => OutputType::Numeric,
            Answer::Str(_) => OutputType::String,
            Answer::List(_) => OutputType::List,
        }
    }
}

/// Serialised form: "True"/"False", decimal integers, ", "-joined lists.
impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Bool(true) => f.write_str("True"),
            Answer::Bool(false) => f.write_str("False"),
            Answer::Num(n) => write!(f, "{n}"),
            Answer::Str(s) => f.write_str(s),
            Answer::List(items) => f.write_str(&items.join(", ")),
        }
    }
}

pub type Bindings = IndexMap<String, String>;
pub type Sampler = Arc<dyn Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync>;
pub type Oracle = Arc<dyn Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync>;

#[derive(Clone)]
pub struct TemplateSpec {
    pub id: String,
    pub subset: Subset,
    pub domain: Domain,
    pub text_pattern: String,
    pub output_type: OutputType,
    pub scope: Scope,
    pub group: Group,
    pub sampler: Sampler,
    pub oracle: Oracle,
}

impl fmt::Debug for TemplateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemplateSpec")
            .field("id", &self.id)
            .field("subset", &self.subset)
            .field("domain", &self.domain)
            .field("text_pattern", &self.text_pattern)
            .finish_non_exhaustive()
    }
}

impl TemplateSpec {
    /// Binding keys in pattern order: a label's first occurrence is keyed by
    /// the label itself, repeats by `label_2`, `label_3`, ...
    pub fn slot_keys(&self) -> Vec<String> {
        slot_keys(&self.text_pattern)
    }

    pub fn render(&self, bindings: &Bindings) -> Result<String> {
        render(&self.text_pattern, bindings)
    }

    /// Runs the oracle and checks the answer type.
    pub fn answer(&self, ix: &GraphIndex, bindings: &Bindings) -> Result<Option<Answer>> {
        let answer = (self.oracle)(ix, bindings)?;
        if let Some(a) = &answer {
            if a.output_type() != self.output_type {
                return Err(ForgeError::Mismatch(format!("{} produced a {} answer", self.id, a.output_type())));
            }
        }
        Ok(answer)
    }
}

fn placeholders(pattern: &str) -> Vec<(usize, usize, &str)> {
    let mut out = Vec::new();
    let mut rest = 0;
    while let Some(open) = pattern[rest..].find('{') {
        let start = rest + open;
        let Some(len) = pattern[start..].find('}') else { break };
        out.push((start, start + len + 1, &pattern[start + 1..start + len]));
        rest = start + len + 1;
    }
    out
}

fn keys_for<'a>(labels: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut seen: IndexMap<&str, usize> = IndexMap::new();
    labels
        .map(|label| {
            let n = seen.entry(label).or_default();
            *n += 1;
            if *n == 1 { label.to_string() } else { format!("{label}_{n}") }
        })
        .collect()
}

pub fn slot_keys(pattern: &str) -> Vec<String> {
    keys_for(placeholders(pattern).into_iter().map(|p| p.2))
}

pub fn render(pattern: &str, bindings: &Bindings) -> Result<String> {
    let slots = placeholders(pattern);
    let keys = keys_for(slots.iter().map(|p| p.2));
    let mut out = String::with_capacity(pattern.len() + 32);
    let mut last = 0;
    for ((start, end, _), key) in slots.into_iter().zip(keys) {
        out.push_str(&pattern[last..start]);
        out.push_str(slot(bindings, &key)?);
        last = end;
    }
    out.push_str(&pattern[last..]);
    Ok(out)
}

fn slot<'a>(b: &'a Bindings, key: &str) -> Result<&'a str> {
    b.get(key)
        .map(String::as_str)
        .ok_or_else(|| ForgeError::Mismatch(format!("missing slot binding `{key}`")))
}

fn binds<const N: usize>(pairs: [(&str, String); N]) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn node_named(ix: &GraphIndex, name: &str) -> Result<usize> {
    ix.index_of_name(name).ok_or_else(|| ForgeError::UnknownNode(name.to_string()))
}

fn line_named(ix: &GraphIndex, name: &str) -> Result<usize> {
    ix.graph
        .lines
        .iter()
        .position(|l| l.name == name)
        .ok_or_else(|| ForgeError::UnknownLine(name.to_string()))
}

fn name(ix: &GraphIndex, i: usize) -> String {
    ix.node(i).name.clone()
}

fn attr_str(ix: &GraphIndex, i: usize, key: &str) -> Result<String> {
    Ok(ix.node(i).attr(key)?.to_string())
}

fn path_of(ix: &GraphIndex, seq: Vec<usize>) -> PathResult {
    PathResult {
        hop_count: seq.len() - 1,
        node_sequence: seq.into_iter().map(|i| ix.id(i).to_string()).collect(),
    }
}

// ---- sampling helpers ----

fn any_node(ix: &GraphIndex, rng: &mut RandomStream) -> Option<usize> {
    (!ix.is_empty()).then(|| rng.random_range(0..ix.len()))
}

fn node_pair(ix: &GraphIndex, rng: &mut RandomStream) -> Option<(usize, usize)> {
    if ix.len() < 2 {
        return None;
    }
    let a = rng.random_range(0..ix.len());
    let mut b = rng.random_range(0..ix.len() - 1);
    if b >= a {
        b += 1;
    }
    Some((a, b))
}

fn node_triple(ix: &GraphIndex, rng: &mut RandomStream) -> Option<[usize; 3]> {
    if ix.len() < 3 {
        return None;
    }
    let picked = rand::seq::index::sample(rng, ix.len(), 3);
    Some([picked.index(0), picked.index(1), picked.index(2)])
}

/// Two distinct neighbours of a random node with degree >= 2.
fn wedge(ix: &GraphIndex, rng: &mut RandomStream) -> Option<(usize, usize, usize)> {
    let centers: Vec<usize> = (0..ix.len()).filter(|&v| ix.neighbors(v).len() >= 2).collect();
    let &c = centers.choose(rng)?;
    let picked = rand::seq::index::sample(rng, ix.neighbors(c).len(), 2);
    Some((c, ix.neighbors(c)[picked.index(0)], ix.neighbors(c)[picked.index(1)]))
}

fn any_line(ix: &GraphIndex, rng: &mut RandomStream) -> Option<usize> {
    let lines: Vec<usize> = (0..ix.graph.lines.len()).filter(|&l| !ix.line_members(l).is_empty()).collect();
    lines.choose(rng).copied()
}

fn line_pair(ix: &GraphIndex, rng: &mut RandomStream) -> Option<(usize, usize)> {
    let lines: Vec<usize> = (0..ix.graph.lines.len()).filter(|&l| !ix.line_members(l).is_empty()).collect();
    if lines.len() < 2 {
        return None;
    }
    let picked = rand::seq::index::sample(rng, lines.len(), 2);
    Some((lines[picked.index(0)], lines[picked.index(1)]))
}

fn line_name(ix: &GraphIndex, l: usize) -> String {
    ix.graph.lines[l].name.clone()
}

fn pick(values: &[&str], rng: &mut RandomStream) -> String {
    values.choose(rng).expect("non-empty vocabulary").to_string()
}

/// A name used by no node or line of the graph, in the graph's naming style.
pub fn fake_name(ix: &GraphIndex, rng: &mut RandomStream) -> Option<String> {
    let g = ix.graph;
    let taken: HashSet<&str> = g.nodes.iter().map(|n| n.name.as_str()).chain(g.lines.iter().map(|l| l.name.as_str())).collect();
    let integer_style = !g.nodes.is_empty() && g.nodes.iter().all(|n| n.name.parse::<u32>().is_ok());
    let candidates: Vec<String> = if integer_style {
        (0..INTEGER_NAME_SPACE).map(|i| i.to_string()).filter(|s| !taken.contains(s.as_str())).collect()
    } else {
        let pool = match g.domain {
            Domain::Transit => vocab::combine(vocab::STATION_ADJECTIVES, vocab::STATION_NOUNS, " "),
            Domain::Network => vocab::combine(vocab::HOST_PREFIXES, vocab::HOST_WORDS, "-"),
        };
        pool.into_iter().filter(|s| !taken.contains(s.as_str())).collect()
    };
    candidates.choose(rng).cloned()
}

// ---- template construction ----

struct Meta {
    subset: Subset,
    domain: Domain,
    scope: Scope,
    group: Group,
}

const fn meta(subset: Subset, domain: Domain, scope: Scope, group: Group) -> Meta {
    Meta { subset, domain, scope, group }
}

fn template<S, O>(id: &str, m: Meta, text: &str, output_type: OutputType, sampler: S, oracle: O) -> TemplateSpec
where
    S: Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync + 'static,
    O: Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync + 'static,
{
    TemplateSpec {
        id: id.to_string(),
        subset: m.subset,
        domain: m.domain,
        text_pattern: text.to_string(),
        output_type,
        scope: m.scope,
        group: m.group,
        sampler: Arc::new(sampler),
        oracle: Arc::new(oracle),
    }
}

use Domain::{Network, Transit};
use Group::*;
use OutputType as T;
use Scope::{Edge, Node, Subgraph};
use Subset::{Facts, Reasoning};

// ---- shared oracle programs ----

fn one_node<F>(label: &'static str, f: F) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync
where
    F: Fn(&GraphIndex, usize) -> Result<Option<Answer>> + Send + Sync,
{
    move |ix, b| f(ix, node_named(ix, slot(b, label)?)?)
}

fn two_nodes<F>(label: &'static str, f: F) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync
where
    F: Fn(&GraphIndex, usize, usize, &Bindings) -> Result<Option<Answer>> + Send + Sync,
{
    move |ix, b| {
        let a = node_named(ix, slot(b, label)?)?;
        let c = node_named(ix, slot(b, &format!("{label}_2"))?)?;
        f(ix, a, c, b)
    }
}

fn sample_one(label: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| any_node(ix, rng).map(|v| binds([(label, name(ix, v))]))
}

fn sample_two(label: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let (a, b) = node_pair(ix, rng)?;
        Some(binds([(label, name(ix, a)), (&format!("{label}_2"), name(ix, b))]))
    }
}

fn sample_adjacent(label: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let edges: Vec<&crate::model::EdgeSpec> =
            ix.graph.edges.iter().filter(|e| e.endpoint_a != e.endpoint_b).collect();
        let e = edges.choose(rng)?;
        let (mut a, mut b) = (e.endpoint_a.as_str(), e.endpoint_b.as_str());
        if rng.random_bool(0.5) {
            std::mem::swap(&mut a, &mut b);
        }
        let (a, b) = (ix.index_of(a).ok()?, ix.index_of(b).ok()?);
        Some(binds([(label, name(ix, a)), (&format!("{label}_2"), name(ix, b))]))
    }
}

fn property(key: &'static str, label: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    one_node(label, move |ix, v| {
        Ok(Some(match ix.node(v).attr(key)? {
            AttrValue::Bool(x) => Answer::Bool(*x),
            AttrValue::Int(n) => Answer::Num(*n),
            AttrValue::Str(s) => Answer::Str(s.clone()),
        }))
    })
}

fn existence(label: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    move |ix, b| Ok(Some(Answer::Bool(ix.index_of_name(slot(b, label)?).is_some())))
}

fn adjacency(label: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    two_nodes(label, |ix, a, b, _| Ok(Some(Answer::Bool(ix.adjacent(a, b)))))
}

fn has_cycle(label: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    one_node(label, |ix, v| Ok(Some(Answer::Bool(ix.on_cycle(v)))))
}

/// The edge attribute between two stations, or `None` when parallel edges disagree.
fn edge_value(ix: &GraphIndex, a: usize, b: usize, key: &str) -> Result<Option<AttrValue>> {
    let (ia, ib) = (ix.id(a), ix.id(b));
    let mut value: Option<&AttrValue> = None;
    for e in ix.graph.edges.iter().filter(|e| e.joins(ia, ib)) {
        let v = e.attr(key)?;
        match value {
            Some(prev) if prev != v => return Ok(None),
            _ => value = Some(v),
        }
    }
    Ok(value.cloned())
}

fn edge_property(key: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    two_nodes("Station", move |ix, a, b, _| {
        Ok(edge_value(ix, a, b, key)?.map(|v| match v {
            AttrValue::Bool(x) => Answer::Bool(x),
            other => Answer::Str(other.to_string()),
        }))
    })
}

/// Endpoints of an edge whose `key` value is unambiguous across parallel edges.
fn sample_unambiguous_edge(key: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let pairs: BTreeSet<(usize, usize)> = ix
            .graph
            .edges
            .iter()
            .filter_map(|e| Some((ix.index_of(&e.endpoint_a).ok()?, ix.index_of(&e.endpoint_b).ok()?)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let usable: Vec<(usize, usize)> = pairs
            .into_iter()
            .filter(|&(a, b)| matches!(edge_value(ix, a, b, key), Ok(Some(_))))
            .collect();
        let &(mut a, mut b) = usable.choose(rng)?;
        if rng.random_bool(0.5) {
            std::mem::swap(&mut a, &mut b);
        }
        Some(binds([("Station", name(ix, a)), ("Station_2", name(ix, b))]))
    }
}

fn count(n: usize) -> Option<Answer> {
    Some(Answer::Num(n as i64))
}

fn members_matching(ix: &GraphIndex, line: usize, pred: &NodePredicate) -> usize {
    ix.line_members(line).iter().filter(|&&v| pred.matches(ix.node(v))).count()
}

fn distinct_values(ix: &GraphIndex, nodes: &[usize], key: &str) -> Result<usize> {
    let mut seen = BTreeSet::new();
    for &v in nodes {
        seen.insert(ix.node(v).attr(key)?.to_string());
    }
    Ok(seen.len())
}

fn sample_line(label: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| any_line(ix, rng).map(|l| binds([(label, line_name(ix, l))]))
}

fn sample_value_and_line(value: &'static str, values: &'static [&'static str]) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let v = pick(values, rng);
        let l = any_line(ix, rng)?;
        Some(binds([(value, v), ("Line", line_name(ix, l))]))
    }
}

fn line_total(key: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    move |ix, b| {
        let l = line_named(ix, slot(b, "Line")?)?;
        let members = ix.line_members(l);
        if members.is_empty() {
            return Ok(None);
        }
        Ok(count(distinct_values(ix, members, key)?))
    }
}

fn line_filter(key: &'static str, value_slot: Option<&'static str>) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    move |ix, b| {
        let l = line_named(ix, slot(b, "Line")?)?;
        let expected: AttrValue = match value_slot {
            Some(label) => slot(b, label)?.into(),
            None => true.into(),
        };
        Ok(count(members_matching(ix, l, &NodePredicate::eq(key, expected))))
    }
}

/// Unconstrained shortest path between the two bound stations.
fn on_path<F>(label: &'static str, f: F) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync
where
    F: Fn(&GraphIndex, &PathResult) -> Result<Option<Answer>> + Send + Sync,
{
    two_nodes(label, move |ix, a, b, _| match oracles::shortest_path_idx(ix, a, b, None) {
        Some(seq) => f(ix, &path_of(ix, seq)),
        None => Ok(None),
    })
}

fn path_aggregate(attr: PathAttr<'static>, mode: Aggregate) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    on_path("Station", move |ix, p| {
        if p.hop_count == 0 {
            return Ok(None);
        }
        Ok(oracles::path_attr_aggregate(ix, p, attr, mode)?.map(|v| match v {
            AttrValue::Int(n) => Answer::Num(n),
            other => Answer::Str(other.to_string()),
        }))
    })
}

fn avoiding_length(value_label: &'static str, key: &'static str) -> impl Fn(&GraphIndex, &Bindings) -> Result<Option<Answer>> + Send + Sync {
    two_nodes("Station", move |ix, a, b, bind| {
        let avoid = NodePredicate::eq(key, slot(bind, value_label)?);
        Ok(oracles::shortest_path_idx(ix, a, b, Some(&avoid)).and_then(|seq| count(seq.len())))
    })
}

fn sample_two_with(label: &'static str, value: &'static str, values: &'static [&'static str]) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let (a, b) = node_pair(ix, rng)?;
        Some(binds([(label, name(ix, a)), (&format!("{label}_2"), name(ix, b)), (value, pick(values, rng))]))
    }
}

fn sample_wedge(label: &'static str) -> impl Fn(&GraphIndex, &mut RandomStream) -> Option<Bindings> + Send + Sync {
    move |ix, rng| {
        let (_, a, b) = wedge(ix, rng)?;
        Some(binds([(label, name(ix, a)), (&format!("{label}_2"), name(ix, b))]))
    }
}

fn two_distinct(values: &'static [&'static str], rng: &mut RandomStream) -> (String, String) {
    let picked = rand::seq::index::sample(rng, values.len(), 2);
    (values[picked.index(0)].to_string(), values[picked.index(1)].to_string())
}

// ---- registries ----

fn transit_facts() -> Vec<TemplateSpec> {
    let node = |g| meta(Facts, Transit, Node, g);
    let edge = |g| meta(Facts, Transit, Edge, g);
    let prop = |id: &str, text: &str, key: &'static str, out: OutputType| {
        template(id, node(Lookup), text, out, sample_one("Station"), property(key, "Station"))
    };
    vec![
        prop("StationPropertyCleanliness", "How clean is {Station}?", "cleanliness", T::String),
        prop("StationPropertyCleanliness2", "What is the cleanliness level of {Station} station?", "cleanliness", T::String),
        prop("StationPropertySize", "How big is {Station}?", "size", T::String),
        prop("StationPropertySize2", "What size is {Station}?", "size", T::String),
        prop("StationPropertyMusic", "What music plays at {Station}?", "music", T::String),
        prop("StationPropertyMusic2", "Which type of music is played at {Station}?", "music", T::String),
        prop("StationPropertyArchitecture", "What architectural style is {Station}?", "architecture", T::String),
        prop("StationPropertyArchitecture2", "Describe {Station} station's architectural style.", "architecture", T::String),
        prop("StationPropertyDisabledAccess", "Does {Station} have disabled access?", "disabled_access", T::Boolean),
        prop("StationPropertyDisabledAccess2", "Is there disabled access at {Station}?", "disabled_access", T::Boolean),
        prop("StationPropertyHasRail", "Does {Station} have rail connections?", "has_rail", T::Boolean),
        prop("StationPropertyHasRail2", "Can you get rail connections at {Station}?", "has_rail", T::Boolean),
        template("StationExistence1", node(Lookup), "Is there a station called {Station}?", T::Boolean, sample_one("Station"), existence("Station")),
        template(
            "StationExistence2",
            node(Lookup),
            "Is there a station called {FakeStationName}?",
            T::Boolean,
            |ix, rng| fake_name(ix, rng).map(|n| binds([("FakeStationName", n)])),
            existence("FakeStationName"),
        ),
        template(
            "StationLine",
            edge(Lookup),
            "Which lines is {Station} on?",
            T::List,
            |ix, rng| {
                let on_lines: Vec<usize> = (0..ix.len()).filter(|&v| !ix.lines_of(v).is_empty()).collect();
                on_lines.choose(rng).map(|&v| binds([("Station", name(ix, v))]))
            },
            one_node("Station", |ix, v| {
                let lines: Vec<String> = ix.lines_of(v).iter().map(|&l| line_name(ix, l)).collect();
                Ok((!lines.is_empty()).then_some(Answer::List(lines)))
            }),
        ),
        template(
            "StationLineCount",
            edge(Count),
            "How many lines is {Station} on?",
            T::Numeric,
            sample_one("Station"),
            one_node("Station", |ix, v| Ok(count(ix.lines_of(v).len()))),
        ),
        template(
            "StationAdjacentAlwaysTrue",
            edge(Topology),
            "Are {Station} and {Station} adjacent?",
            T::Boolean,
            sample_adjacent("Station"),
            adjacency("Station"),
        ),
        template("StationAdjacent", edge(Topology), "Are {Station} and {Station} adjacent?", T::Boolean, sample_two("Station"), adjacency("Station")),
        template(
            "EdgePropertyColor",
            edge(Lookup),
            "What color is the line between {Station} and {Station}?",
            T::String,
            sample_unambiguous_edge("line_color"),
            edge_property("line_color"),
        ),
        template(
            "EdgePropertyAircon",
            edge(Lookup),
            "Does the line between {Station} and {Station} have air conditioning?",
            T::Boolean,
            sample_unambiguous_edge("line_has_aircon"),
            edge_property("line_has_aircon"),
        ),
        template(
            "EdgePropertyStroke",
            edge(Lookup),
            "What stroke style is the line between {Station} and {Station}?",
            T::String,
            sample_unambiguous_edge("line_stroke"),
            edge_property("line_stroke"),
        ),
        template(
            "EdgePropertyBuilt",
            edge(Lookup),
            "When was the line between {Station} and {Station} built?",
            T::String,
            sample_unambiguous_edge("line_built"),
            edge_property("line_built"),
        ),
    ]
}

fn transit_reasoning() -> Vec<TemplateSpec> {
    let node = |g| meta(Reasoning, Transit, Node, g);
    let edge = |g| meta(Reasoning, Transit, Edge, g);
    let sub = |g| meta(Reasoning, Transit, Subgraph, g);
    vec![
        template(
            "StationPairAdjacent",
            node(Topology),
            "Which station is adjacent to both {Station} and {Station}?",
            T::String,
            sample_wedge("Station"),
            two_nodes("Station", |ix, a, b, _| match ix.common_neighbors(a, b).as_slice() {
                [only] => Ok(Some(Answer::Str(name(ix, *only)))),
                _ => Ok(None),
            }),
        ),
        template(
            "StationArchitectureAdjacent",
            node(Filtering),
            "Which {Architecture} station is adjacent to {Station}?",
            T::String,
            |ix, rng| {
                let with_nbrs: Vec<usize> = (0..ix.len()).filter(|&v| !ix.neighbors(v).is_empty()).collect();
                let &v = with_nbrs.choose(rng)?;
                let &w = ix.neighbors(v).choose(rng)?;
                Some(binds([("Architecture", attr_str(ix, w, "architecture").ok()?), ("Station", name(ix, v))]))
            },
            |ix, b| {
                let v = node_named(ix, slot(b, "Station")?)?;
                let pred = NodePredicate::eq("architecture", slot(b, "Architecture")?);
                match ix.neighbors(v).iter().filter(|&&w| pred.matches(ix.node(w))).collect::<Vec<_>>().as_slice() {
                    [only] => Ok(Some(Answer::Str(name(ix, **only)))),
                    _ => Ok(None),
                }
            },
        ),
        template(
            "StationTwoHops",
            node(Topology),
            "How many other stations are two stops or closer to {Station}?",
            T::Numeric,
            sample_one("Station"),
            one_node("Station", |ix, v| Ok(count(oracles::within_hops(ix, v, 2).len()))),
        ),
        template("HasCycle", node(Topology), "Is {Station} part of a cycle?", T::Boolean, sample_one("Station"), has_cycle("Station")),
        template(
            "StationOneApartTrue",
            node(Topology),
            "Are {Station} and {Station} connected by the same station?",
            T::Boolean,
            sample_wedge("Station"),
            two_nodes("Station", |ix, a, b, _| Ok(Some(Answer::Bool(!ix.common_neighbors(a, b).is_empty())))),
        ),
        template(
            "StationOneApart",
            node(Topology),
            "Are {Station} and {Station} connected by the same station?",
            T::Boolean,
            sample_two("Station"),
            two_nodes("Station", |ix, a, b, _| Ok(Some(Answer::Bool(!ix.common_neighbors(a, b).is_empty())))),
        ),
        template(
            "TopologyMostCommonArch",
            node(Aggregation),
            "What is the most common architectural style of stations within 2 hops of {Station}?",
            T::String,
            sample_one("Station"),
            one_node("Station", |ix, v| {
                let styles = oracles::within_hops(ix, v, 2)
                    .into_iter()
                    .map(|u| attr_str(ix, u, "architecture"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(oracles::most_common(&styles).map(Answer::Str))
            }),
        ),
        template(
            "CountIntersectionProperties",
            node(Filtering),
            "How many stations are both large and have disabled access?",
            T::Numeric,
            |_, _| Some(Bindings::new()),
            |ix, _| {
                let preds = [NodePredicate::eq("size", "large"), NodePredicate::eq("disabled_access", true)];
                Ok(count((0..ix.len()).filter(|&v| preds.iter().all(|p| p.matches(ix.node(v)))).count()))
            },
        ),
        template(
            "CompareArchitectureCount",
            node(Comparison),
            "Which architectural style has more stations, {Architecture} or {Architecture}?",
            T::String,
            |_, rng| {
                let (a, b) = two_distinct(vocab::ARCHITECTURE, rng);
                Some(binds([("Architecture", a), ("Architecture_2", b)]))
            },
            |ix, b| {
                let (x, y) = (slot(b, "Architecture")?, slot(b, "Architecture_2")?);
                let n = |style: &str| {
                    let p = NodePredicate::eq("architecture", style);
                    (0..ix.len()).filter(|&v| p.matches(ix.node(v))).count()
                };
                Ok(oracles::compare_by_count(x, n(x), y, n(y)).map(|s| Answer::Str(s.to_string())))
            },
        ),
        template(
            "StationSameLineTrue",
            edge(Topology),
            "Are {Station} and {Station} on the same line?",
            T::Boolean,
            |ix, rng| {
                let lines: Vec<usize> = (0..ix.graph.lines.len()).filter(|&l| ix.line_members(l).len() >= 2).collect();
                let &l = lines.choose(rng)?;
                let members = ix.line_members(l);
                let picked = rand::seq::index::sample(rng, members.len(), 2);
                Some(binds([("Station", name(ix, members[picked.index(0)])), ("Station_2", name(ix, members[picked.index(1)]))]))
            },
            same_line,
        ),
        template(
            "EdgeFilterAirconCount",
            edge(Filtering),
            "How many air-conditioned lines is {Station} connected to?",
            T::Numeric,
            sample_one("Station"),
            one_node("Station", |ix, v| Ok(count(ix.lines_of(v).iter().filter(|&&l| ix.graph.lines[l].has_aircon).count()))),
        ),
        template(
            "EdgeFilterColorCount",
            edge(Filtering),
            "How many {Color} lines is {Station} connected to?",
            T::Numeric,
            |ix, rng| {
                let colors: BTreeSet<&str> = ix.graph.lines.iter().map(|l| l.color.as_str()).collect();
                let colors: Vec<&str> = colors.into_iter().collect();
                let color = colors.choose(rng)?.to_string();
                let v = any_node(ix, rng)?;
                Some(binds([("Color", color), ("Station", name(ix, v))]))
            },
            |ix, b| {
                let v = node_named(ix, slot(b, "Station")?)?;
                let color = slot(b, "Color")?;
                Ok(count(ix.lines_of(v).iter().filter(|&&l| ix.graph.lines[l].color == color).count()))
            },
        ),
        template(
            "PathYearSpan",
            edge(PathReasoning),
            "How many years newer is the newest line between {Station} and {Station} compared to the oldest?",
            T::Numeric,
            sample_two("Station"),
            path_aggregate(PathAttr::Edge("line_built"), Aggregate::Span),
        ),
        template(
            "PathOptimalColor",
            edge(PathReasoning),
            "What is the most common line color on the shortest path between {Station} and {Station}?",
            T::String,
            sample_two("Station"),
            path_aggregate(PathAttr::Edge("line_color"), Aggregate::MostCommon),
        ),
        template(
            "PathEarliestBuilt",
            edge(PathReasoning),
            "What is the earliest year a line was built on the shortest path between {Station} and {Station}?",
            T::String,
            sample_two("Station"),
            path_aggregate(PathAttr::Edge("line_built"), Aggregate::Min),
        ),
        template(
            "LineTotalArchitectureCount",
            sub(Aggregation),
            "How many architectural styles does {Line} pass through?",
            T::Numeric,
            sample_line("Line"),
            line_total("architecture"),
        ),
        template(
            "LineTotalMusicCount",
            sub(Aggregation),
            "How many music styles does {Line} pass through?",
            T::Numeric,
            sample_line("Line"),
            line_total("music"),
        ),
        template(
            "LineTotalSizeCount",
            sub(Aggregation),
            "How many sizes of station does {Line} pass through?",
            T::Numeric,
            sample_line("Line"),
            line_total("size"),
        ),
        template(
            "LineFilterMusicCount",
            sub(Filtering),
            "How many stations playing {Music} does {Line} pass through?",
            T::Numeric,
            sample_value_and_line("Music", vocab::MUSIC),
            line_filter("music", Some("Music")),
        ),
        template(
            "LineFilterCleanlinessCount",
            sub(Filtering),
            "How many {Cleanliness} stations does {Line} pass through?",
            T::Numeric,
            sample_value_and_line("Cleanliness", vocab::CLEANLINESS),
            line_filter("cleanliness", Some("Cleanliness")),
        ),
        template(
            "LineFilterSizeCount",
            sub(Filtering),
            "How many {Size} stations does {Line} pass through?",
            T::Numeric,
            sample_value_and_line("Size", vocab::SIZE),
            line_filter("size", Some("Size")),
        ),
        template(
            "LineFilterDisabledAccessCount",
            sub(Filtering),
            "How many stations with disabled access does {Line} pass through?",
            T::Numeric,
            sample_line("Line"),
            line_filter("disabled_access", None),
        ),
        template(
            "LineFilterHasRailCount",
            sub(Filtering),
            "How many stations with rail connections does {Line} pass through?",
            T::Numeric,
            sample_line("Line"),
            line_filter("has_rail", None),
        ),
        template(
            "LineStations",
            sub(Aggregation),
            "Which stations does {Line} pass through?",
            T::List,
            sample_line("Line"),
            |ix, b| {
                let l = line_named(ix, slot(b, "Line")?)?;
                let names: Vec<String> = ix.line_members(l).iter().map(|&v| name(ix, v)).collect();
                Ok((!names.is_empty()).then_some(Answer::List(names)))
            },
        ),
        template(
            "StationShortestCount",
            sub(PathReasoning),
            "How many stations are between {Station} and {Station}?",
            T::Numeric,
            sample_two("Station"),
            on_path("Station", |_, p| Ok(count(p.hop_count.saturating_sub(1)))),
        ),
        template(
            "StationShortestAvoidingCount",
            sub(PathReasoning),
            "How many stations are on the shortest path between {Station} and {Station} avoiding {Cleanliness} stations?",
            T::Numeric,
            sample_two_with("Station", "Cleanliness", vocab::CLEANLINESS),
            avoiding_length("Cleanliness", "cleanliness"),
        ),
        template(
            "StationShortestAvoidingArchitectureCount",
            sub(PathReasoning),
            "How many stations are on the shortest path between {Station} and {Station} avoiding {Architecture} architecture stations?",
            T::Numeric,
            sample_two_with("Station", "Architecture", vocab::ARCHITECTURE),
            avoiding_length("Architecture", "architecture"),
        ),
        template(
            "DistinctRoutes",
            sub(PathReasoning),
            "How many distinct routes are there between {Station} and {Station}?",
            T::Numeric,
            sample_two("Station"),
            two_nodes("Station", |ix, a, b, _| Ok(oracles::distinct_routes_idx(ix, a, b, ROUTE_CAP).and_then(count))),
        ),
        template(
            "CountEqualSizeStation",
            sub(Filtering),
            "How many stations in {Line} are of the same size as {Station}?",
            T::Numeric,
            |ix, rng| {
                let l = any_line(ix, rng)?;
                let v = any_node(ix, rng)?;
                Some(binds([("Line", line_name(ix, l)), ("Station", name(ix, v))]))
            },
            |ix, b| {
                let l = line_named(ix, slot(b, "Line")?)?;
                let v = node_named(ix, slot(b, "Station")?)?;
                let pred = NodePredicate::eq("size", ix.node(v).attr("size")?.clone());
                Ok(count(ix.line_members(l).iter().filter(|&&u| u != v && pred.matches(ix.node(u))).count()))
            },
        ),
        template(
            "LineIntersectionStations",
            sub(Count),
            "How many stations are shared between the {Line} and the {Line}?",
            T::Numeric,
            |ix, rng| {
                let (a, b) = line_pair(ix, rng)?;
                Some(binds([("Line", line_name(ix, a)), ("Line_2", line_name(ix, b))]))
            },
            |ix, b| {
                let x = line_named(ix, slot(b, "Line")?)?;
                let y = line_named(ix, slot(b, "Line_2")?)?;
                let shared = ix.line_members(x).iter().filter(|v| ix.line_members(y).contains(v)).count();
                Ok(count(shared))
            },
        ),
        template(
            "NodeOnPath",
            sub(PathReasoning),
            "Is {Station} on the shortest path between {Station} and {Station}?",
            T::Boolean,
            |ix, rng| {
                let [v, a, b] = node_triple(ix, rng)?;
                // half of the draws probe an interior node so both answers occur
                let interior = oracles::shortest_path_idx(ix, a, b, None)
                    .filter(|seq| seq.len() > 2)
                    .map(|seq| seq[1..seq.len() - 1].to_vec())
                    .unwrap_or_default();
                let v = match interior.choose(rng) {
                    Some(&mid) if rng.random_bool(0.5) => mid,
                    _ => v,
                };
                Some(binds([("Station", name(ix, v)), ("Station_2", name(ix, a)), ("Station_3", name(ix, b))]))
            },
            node_on_path,
        ),
        template(
            "PathMostCommonMusic",
            sub(PathReasoning),
            "What is the most common music style on the shortest path between {Station} and {Station}?",
            T::String,
            sample_two("Station"),
            path_aggregate(PathAttr::Node("music"), Aggregate::MostCommon),
        ),
        template(
            "CompareLineDisabledAccess",
            sub(Comparison),
            "Which line has more stations with disabled access, {Line} or {Line}?",
            T::String,
            |ix, rng| {
                let (a, b) = line_pair(ix, rng)?;
                Some(binds([("Line", line_name(ix, a)), ("Line_2", line_name(ix, b))]))
            },
            |ix, b| {
                let (x, y) = (slot(b, "Line")?, slot(b, "Line_2")?);
                let access = NodePredicate::eq("disabled_access", true);
                let nx = members_matching(ix, line_named(ix, x)?, &access);
                let ny = members_matching(ix, line_named(ix, y)?, &access);
                Ok(oracles::compare_by_count(x, nx, y, ny).map(|s| Answer::Str(s.to_string())))
            },
        ),
    ]
}

fn same_line(ix: &GraphIndex, b: &Bindings) -> Result<Option<Answer>> {
    let x = node_named(ix, slot(b, "Station")?)?;
    let y = node_named(ix, slot(b, "Station_2")?)?;
    Ok(Some(Answer::Bool(ix.lines_of(x).iter().any(|l| ix.lines_of(y).contains(l)))))
}

/// True when the node lies on every shortest path, false when on none;
/// a node on only some shortest paths makes the question ill-posed.
fn node_on_path(ix: &GraphIndex, b: &Bindings) -> Result<Option<Answer>> {
    let v = node_named(ix, slot(b, "Station")?)?;
    let a = node_named(ix, slot(b, "Station_2")?)?;
    let t = node_named(ix, slot(b, "Station_3")?)?;
    if v == a || v == t {
        return Ok(Some(Answer::Bool(true)));
    }
    let (da, ca) = ix.shortest_path_counts(a);
    let (dt, ct) = ix.shortest_path_counts(t);
    if da[t] == usize::MAX {
        return Ok(None);
    }
    if da[v] == usize::MAX || dt[v] == usize::MAX || da[v] + dt[v] != da[t] {
        return Ok(Some(Answer::Bool(false)));
    }
    if ca[v].saturating_mul(ct[v]) == ca[t] {
        Ok(Some(Answer::Bool(true)))
    } else {
        Ok(None)
    }
}

fn network_facts() -> Vec<TemplateSpec> {
    let node = |g| meta(Facts, Network, Node, g);
    let edge = |g| meta(Facts, Network, Edge, g);
    let prop = |id: &str, text: &str, key: &'static str, out: OutputType| {
        template(id, node(Lookup), text, out, sample_one("Node"), property(key, "Node"))
    };
    vec![
        prop("NodePropertyStatus", "What is the status of node {Node}?", "status", T::String),
        prop("NodePropertySecurity", "What is the security level of node {Node}?", "security_level", T::String),
        prop("NodePropertyLocation", "Which sector is node {Node} located in?", "location_sector", T::String),
        prop("NodePropertyFirmware", "What firmware version runs on {Node}?", "firmware_version", T::String),
        prop("NodePropertyPower", "How many power units does {Node} consume?", "power_consumption_units", T::Numeric),
        template("NodeExistence1", node(Lookup), "Is there a node named {Node} in the grid?", T::Boolean, sample_one("Node"), existence("Node")),
        template(
            "NodeExistence2",
            node(Lookup),
            "Is there a node named {FakeNodeName} in the grid?",
            T::Boolean,
            |ix, rng| fake_name(ix, rng).map(|n| binds([("FakeNodeName", n)])),
            existence("FakeNodeName"),
        ),
        template("NodeAdjacentTrue", edge(Topology), "Are nodes {Node} and {Node} directly linked?", T::Boolean, sample_adjacent("Node"), adjacency("Node")),
        template("NodeAdjacent", edge(Topology), "Are nodes {Node} and {Node} directly linked?", T::Boolean, sample_two("Node"), adjacency("Node")),
    ]
}

fn count_nodes(ix: &GraphIndex, preds: &[NodePredicate]) -> usize {
    (0..ix.len()).filter(|&v| preds.iter().all(|p| p.matches(ix.node(v)))).count()
}

fn network_reasoning() -> Vec<TemplateSpec> {
    let sub = |g| meta(Reasoning, Network, Subgraph, g);
    let node = |g| meta(Reasoning, Network, Node, g);
    let edge = |g| meta(Reasoning, Network, Edge, g);
    vec![
        template(
            "CountNodesWithStatus",
            sub(Filtering),
            "How many nodes have status {Status}?",
            T::Numeric,
            |_, rng| Some(binds([("Status", pick(vocab::STATUS, rng))])),
            |ix, b| Ok(count(count_nodes(ix, &[NodePredicate::eq("status", slot(b, "Status")?)]))),
        ),
        template(
            "ListNodesInSector",
            sub(Filtering),
            "List all nodes in {Sector}.",
            T::List,
            |_, rng| Some(binds([("Sector", pick(vocab::LOCATION_SECTOR, rng))])),
            |ix, b| {
                let p = NodePredicate::eq("location_sector", slot(b, "Sector")?);
                let names: Vec<String> = (0..ix.len()).filter(|&v| p.matches(ix.node(v))).map(|v| name(ix, v)).collect();
                Ok((!names.is_empty()).then_some(Answer::List(names)))
            },
        ),
        template(
            "MostCommonFirmware",
            sub(Aggregation),
            "What is the most common firmware version?",
            T::String,
            |_, _| Some(Bindings::new()),
            |ix, _| {
                let versions = (0..ix.len()).map(|v| attr_str(ix, v, "firmware_version")).collect::<Result<Vec<_>>>()?;
                Ok(oracles::most_common(&versions).map(Answer::Str))
            },
        ),
        template(
            "CountNodesWithTwoProps",
            sub(Filtering),
            "How many nodes in {Sector} have security level {Security Level}?",
            T::Numeric,
            |_, rng| Some(binds([("Sector", pick(vocab::LOCATION_SECTOR, rng)), ("Security Level", pick(vocab::SECURITY_LEVEL, rng))])),
            |ix, b| {
                let preds = [
                    NodePredicate::eq("location_sector", slot(b, "Sector")?),
                    NodePredicate::eq("security_level", slot(b, "Security Level")?),
                ];
                Ok(count(count_nodes(ix, &preds)))
            },
        ),
        template(
            "CountNeighborsOperational",
            sub(Filtering),
            "How many neighbors of {Node} are 'Operational'?",
            T::Numeric,
            sample_one("Node"),
            one_node("Node", |ix, v| {
                let p = NodePredicate::eq("status", "Operational");
                Ok(count(ix.neighbors(v).iter().filter(|&&w| p.matches(ix.node(w))).count()))
            }),
        ),
        template(
            "ShortestPathLen",
            sub(PathReasoning),
            "How many nodes are on shortest path between {Node} and {Node}?",
            T::Numeric,
            sample_two("Node"),
            on_path("Node", |_, p| Ok(count(p.node_sequence.len()))),
        ),
        template(
            "NodesBetween",
            sub(PathReasoning),
            "How many nodes lie between {Node} and {Node} on that path?",
            T::Numeric,
            sample_two("Node"),
            on_path("Node", |_, p| Ok(count(p.hop_count.saturating_sub(1)))),
        ),
        template(
            "PathAvoidingStatus",
            sub(PathReasoning),
            "Is there a path from {Node} to {Node} avoiding status {Status}?",
            T::Boolean,
            sample_two_with("Node", "Status", vocab::STATUS),
            two_nodes("Node", |ix, a, b, bind| {
                let avoid = NodePredicate::eq("status", slot(bind, "Status")?);
                Ok(Some(Answer::Bool(oracles::shortest_path_idx(ix, a, b, Some(&avoid)).is_some())))
            }),
        ),
        template(
            "WithinHops",
            node(Topology),
            "How many other nodes are within 3 hops of {Node}?",
            T::Numeric,
            sample_one("Node"),
            one_node("Node", |ix, v| Ok(count(oracles::within_hops(ix, v, 3).len()))),
        ),
        template("HasCycle", node(Topology), "Is {Node} part of a cycle?", T::Boolean, sample_one("Node"), has_cycle("Node")),
        template(
            "OneIntermediary",
            edge(Topology),
            "Are {Node} and {Node} connected via exactly one intermediary?",
            T::Boolean,
            sample_two("Node"),
            two_nodes("Node", |ix, a, b, _| Ok(Some(Answer::Bool(ix.distances(a)[b] == 2)))),
        ),
    ]
}

/// Optional templates that are not part of the default registry.
pub fn extra_templates() -> Vec<TemplateSpec> {
    vec![template(
        "StationSameLine",
        meta(Reasoning, Transit, Edge, Topology),
        "Are {Station} and {Station} on the same line?",
        T::Boolean,
        sample_two("Station"),
        same_line,
    )]
}

/// Template set keyed by (domain, template id); a template id is unique
/// within its domain.
#[derive(Clone, Debug)]
pub struct Registry {
    templates: Vec<TemplateSpec>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl Registry {
    pub fn builtin() -> Self {
        let templates = [transit_facts(), transit_reasoning(), network_facts(), network_reasoning()].concat();
        Registry { templates }
    }

    /// Adds a template; ids must be unique per domain.
    pub fn register(&mut self, t: TemplateSpec) -> Result<()> {
        if self.templates.iter().any(|x| x.domain == t.domain && x.id == t.id) {
            return Err(ForgeError::DuplicateTemplate(t.id));
        }
        self.templates.push(t);
        Ok(())
    }

    /// Registers an optional template from [`extra_templates`] by id.
    pub fn register_extra(&mut self, id: &str) -> Result<()> {
        let t = extra_templates()
            .into_iter()
            .find(|t| t.id == id)
            .ok_or_else(|| ForgeError::UnknownTemplate(id.to_string()))?;
        self.register(t)
    }

    pub fn all(&self) -> &[TemplateSpec] {
        &self.templates
    }

    pub fn select(&self, domain: Domain, subset: Subset) -> Vec<&TemplateSpec> {
        self.templates.iter().filter(|t| t.domain == domain && t.subset == subset).collect()
    }

    pub fn get(&self, domain: Domain, id: &str) -> Result<&TemplateSpec> {
        self.templates
            .iter()
            .find(|t| t.domain == domain && t.id == id)
            .ok_or_else(|| ForgeError::UnknownTemplate(id.to_string()))
    }
}

/// Built-in templates of one domain, facts first.
pub fn registry(domain: Domain) -> Vec<TemplateSpec> {
    Registry::builtin().templates.into_iter().filter(|t| t.domain == domain).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{line, track, transit};
    use crate::model::Stroke;
    use crate::rng::seeded_rng;

    #[test]
    fn registry_sizes() {
        let r = Registry::builtin();
        assert_eq!(r.select(Transit, Facts).len(), 22);
        assert_eq!(r.select(Transit, Reasoning).len(), 33);
        assert_eq!(r.select(Network, Facts).len(), 9);
        assert_eq!(r.select(Network, Reasoning).len(), 11);
        for domain in [Transit, Network] {
            let all = registry(domain);
            let unique: HashSet<&str> = all.iter().map(|t| t.id.as_str()).collect();
            assert_eq!(unique.len(), all.len());
        }
    }

    #[test]
    fn music_template_text() {
        let r = Registry::builtin();
        assert_eq!(r.get(Transit, "StationPropertyMusic").unwrap().text_pattern, "What music plays at {Station}?");
    }

    #[test]
    fn register_rejects_duplicates_and_accepts_extra() {
        let mut r = Registry::builtin();
        let dup = r.get(Transit, "HasCycle").unwrap().clone();
        assert!(matches!(r.register(dup), Err(ForgeError::DuplicateTemplate(_))));
        r.register_extra("StationSameLine").unwrap();
        assert_eq!(r.select(Transit, Reasoning).len(), 34);
        assert!(r.register_extra("Nope").is_err());
    }

    #[test]
    fn slot_keys_and_render() {
        let p = "Is {Station} on the shortest path between {Station} and {Station}?";
        assert_eq!(slot_keys(p), ["Station", "Station_2", "Station_3"]);
        let b = binds([("Station", "X".into()), ("Station_2", "Y".into()), ("Station_3", "Z".into())]);
        assert_eq!(render(p, &b).unwrap(), "Is X on the shortest path between Y and Z?");
        assert_eq!(slot_keys("How many nodes in {Sector} have security level {Security Level}?"), ["Sector", "Security Level"]);
        assert!(render(p, &Bindings::new()).is_err());
    }

    #[test]
    fn answers_serialise() {
        assert_eq!(Answer::Bool(true).to_string(), "True");
        assert_eq!(Answer::Bool(false).to_string(), "False");
        assert_eq!(Answer::Num(12).to_string(), "12");
        assert_eq!(Answer::List(vec!["A".into(), "B".into()]).to_string(), "A, B");
    }

    #[test]
    fn enums_round_trip_text() {
        assert_eq!(Group::PathReasoning.to_string(), "path_reasoning");
        assert_eq!("reasoning".parse::<Subset>().unwrap(), Reasoning);
        assert!("bogus".parse::<Scope>().is_err());
    }

    #[test]
    fn compare_line_tie_rejects() {
        let mut g = transit(&["A", "B", "C", "D"], &[("A", "B")]);
        let blue = line("L1", "blue", Stroke::Solid);
        g.edges.push(track(&blue, "C", "D"));
        g.lines.push(blue);
        let ix = GraphIndex::new(&g);
        let t = Registry::builtin().get(Transit, "CompareLineDisabledAccess").unwrap().clone();
        let b = binds([("Line", "L0 Line".into()), ("Line_2", "L1 Line".into())]);
        assert_eq!(t.answer(&ix, &b).unwrap(), None);
    }

    #[test]
    fn node_on_path_partial_rejects() {
        let g = transit(&["A", "B", "C", "D"], &[("A", "B"), ("B", "D"), ("A", "C"), ("C", "D")]);
        let ix = GraphIndex::new(&g);
        let b = |v: &str| binds([("Station", format!("{v} Station")), ("Station_2", "A Station".into()), ("Station_3", "D Station".into())]);
        assert_eq!(node_on_path(&ix, &b("B")).unwrap(), None);
        let line = transit(&["A", "B", "D"], &[("A", "B"), ("B", "D")]);
        assert_eq!(node_on_path(&GraphIndex::new(&line), &b("B")).unwrap(), Some(Answer::Bool(true)));
    }

    #[test]
    fn fake_names_absent() {
        let g = transit(&["A", "B"], &[("A", "B")]);
        let ix = GraphIndex::new(&g);
        let mut rng = seeded_rng(1, "t");
        for _ in 0..50 {
            let n = fake_name(&ix, &mut rng).unwrap();
            assert!(ix.index_of_name(&n).is_none());
        }
    }
}
