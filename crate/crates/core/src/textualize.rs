//! Text renderings of graphs: per-entity sentences, CSV blocks and prompts.

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::model::{AttrValue, Domain, EdgeSpec, GraphSpec, NodeSpec};
use crate::templates::{Bindings, OutputType};

pub const TRANSIT_DISCLAIMER: &str = "Above is the representation of a synthetic subway network. All stations and lines are completely fictional. Keep in mind that the subway network is not real. All information necessary to answer the question is present in the above representation. ";
pub const NETWORK_DISCLAIMER: &str = "Above is the representation of a synthetic computer network. All nodes and links are completely fictional. Keep in mind that the computer network is not real. All information necessary to answer the question is present in the above representation. ";

pub const SUFFIX_STRING: &str = "Answer directly:";
pub const SUFFIX_BOOLEAN: &str = "Answer with 'True' or 'False':\n\nAnswer:";
pub const SUFFIX_LIST: &str = "Output a comma-separated list:";
pub const SUFFIX_NUMERIC: &str = "Answer with a number:\n\nAnswer:";
pub const SUFFIX_CYCLE: &str = "Answer with 'True' if it is in a cycle, otherwise 'False':\n\nAnswer:";

const TRANSIT_NODE_COLUMNS: &[&str] = &["disabled_access", "has_rail", "architecture", "cleanliness", "music", "size"];
const NETWORK_NODE_COLUMNS: &[&str] = &["status", "security_level", "location_sector", "firmware_version", "power_consumption_units"];
/// (header, attribute key) pairs for transit edge rows.
const TRANSIT_EDGE_COLUMNS: &[(&str, &str)] = &[
    ("line_color", "line_color"),
    ("line_stroke", "line_stroke"),
    ("has_aircon", "line_has_aircon"),
    ("built", "line_built"),
];
const NETWORK_EDGE_COLUMNS: &[(&str, &str)] = &[
    ("bandwidth_units", "bandwidth_units"),
    ("latency_ms", "latency_ms"),
    ("encryption_status", "encryption_status"),
];

fn has(node_or_edge: &AttrValue) -> Result<&'static str> {
    match node_or_edge.as_bool() {
        Some(true) => Ok("has"),
        Some(false) => Ok("does not have"),
        None => Err(ForgeError::Mismatch(format!("expected a boolean, found `{node_or_edge}`"))),
    }
}

pub fn node_sentence(n: &NodeSpec, domain: Domain) -> Result<String> {
    match domain {
        Domain::Transit => Ok(format!(
            "{} {} disabled access and {} rail. It features {} architecture, has {} cleanliness, {} music and is {} in size.",
            n.name,
            has(n.attr("disabled_access")?)?,
            has(n.attr("has_rail")?)?,
            n.attr("architecture")?,
            n.attr("cleanliness")?,
            n.attr("music")?,
            n.attr("size")?,
        )),
        Domain::Network => Ok(format!(
            "System node {} is in {} with status {}. It has security level {}, firmware {}, and consumes {} power units.",
            n.name,
            n.attr("location_sector")?,
            n.attr("status")?,
            n.attr("security_level")?,
            n.attr("firmware_version")?,
            n.attr("power_consumption_units")?,
        )),
    }
}

fn endpoint_names<'g>(e: &EdgeSpec, g: &'g GraphSpec) -> Result<(&'g str, &'g str)> {
    let find = |id: &str| g.nodes.iter().find(|n| n.id == id).map(|n| n.name.as_str());
    match (find(&e.endpoint_a), find(&e.endpoint_b)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(ForgeError::DanglingEdge { index: g.edges.iter().position(|x| x == e).unwrap_or(g.edges.len()) }),
    }
}

pub fn edge_sentence(e: &EdgeSpec, g: &GraphSpec) -> Result<String> {
    let (a, b) = endpoint_names(e, g)?;
    match g.domain {
        Domain::Transit => Ok(format!(
            "There is a {} {} line from {a} to {b}. It {} air conditioning and was built in {}.",
            e.attr("line_stroke")?,
            e.attr("line_color")?,
            has(e.attr("line_has_aircon")?)?,
            e.attr("line_built")?,
        )),
        Domain::Network => Ok(format!(
            "A link connects {a} and {b}. It has {} bandwidth units, {}ms latency, and its encryption status is {}.",
            e.attr("bandwidth_units")?,
            e.attr("latency_ms")?,
            e.attr("encryption_status")?,
        )),
    }
}

fn quote(field: &str) -> String {
    format!("\"{}\"", field.replace('"', "\"\""))
}

fn csv_row<'a>(fields: impl IntoIterator<Item = &'a str>) -> String {
    let mut row = fields.into_iter().map(quote).collect::<Vec<_>>().join(",");
    row.push('\n');
    row
}

/// Node and edge tables with always-quoted fields and one row per entity.
pub fn graph_to_csv(g: &GraphSpec) -> Result<(String, String)> {
    let (node_cols, edge_cols) = match g.domain {
        Domain::Transit => (TRANSIT_NODE_COLUMNS, TRANSIT_EDGE_COLUMNS),
        Domain::Network => (NETWORK_NODE_COLUMNS, NETWORK_EDGE_COLUMNS),
    };

    let mut nodes = csv_row(["id", "name"].into_iter().chain(node_cols.iter().copied()));
    for n in &g.nodes {
        let values = node_cols.iter().map(|k| n.attr(k).map(ToString::to_string)).collect::<Result<Vec<_>>>()?;
        nodes.push_str(&csv_row([n.id.as_str(), n.name.as_str()].into_iter().chain(values.iter().map(String::as_str))));
    }

    let mut edges = csv_row(["source_id", "target_id"].into_iter().chain(edge_cols.iter().map(|c| c.0)));
    for e in &g.edges {
        let values = edge_cols.iter().map(|c| e.attr(c.1).map(ToString::to_string)).collect::<Result<Vec<_>>>()?;
        edges.push_str(&csv_row(
            [e.endpoint_a.as_str(), e.endpoint_b.as_str()].into_iter().chain(values.iter().map(String::as_str)),
        ));
    }
    Ok((nodes, edges))
}

pub fn answer_suffix(output_type: OutputType, template_id: &str) -> &'static str {
    if template_id == "HasCycle" {
        return SUFFIX_CYCLE;
    }
    match output_type {
        OutputType::String => SUFFIX_STRING,
        OutputType::Boolean => SUFFIX_BOOLEAN,
        OutputType::List => SUFFIX_LIST,
        OutputType::Numeric => SUFFIX_NUMERIC,
    }
}

/// The parts of a question a prompt needs.
#[derive(Clone, Copy, Debug)]
pub struct PromptQuestion<'a> {
    pub template_id: &'a str,
    pub question: &'a str,
    pub output_type: OutputType,
    pub slot_bindings: &'a Bindings,
}

/// Entity-name slot labels whose values must exist in the graph.
fn is_entity_slot(key: &str) -> bool {
    let label = key.rsplit_once('_').filter(|(_, n)| n.parse::<u32>().is_ok()).map_or(key, |(l, _)| l);
    matches!(label, "Station" | "Node" | "Line")
}

pub fn build_prompt(g: &GraphSpec, q: PromptQuestion) -> Result<String> {
    for (key, value) in q.slot_bindings {
        if !is_entity_slot(key) {
            continue;
        }
        let known = if key.starts_with("Line") {
            g.line_by_name(value).is_some()
        } else {
            g.node_by_name(value).is_some()
        };
        if !known {
            return Err(ForgeError::Mismatch(format!("slot {key} names `{value}`, which is not in the graph")));
        }
    }
    let (nodes, edges) = graph_to_csv(g)?;
    let disclaimer = match g.domain {
        Domain::Transit => TRANSIT_DISCLAIMER,
        Domain::Network => NETWORK_DISCLAIMER,
    };
    Ok(format!(
        "--- Nodes ---\n{nodes}\n--- Edges ---\n{edges}{disclaimer}The question is: {}\n\n{}",
        q.question,
        answer_suffix(q.output_type, q.template_id)
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Node,
    Edge,
}

/// One line of a sentence export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub entity_id: String,
    pub kind: EntityKind,
    pub sentence: String,
}

/// One line of a prompt export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub graph_id: String,
    pub question_id: String,
    pub prompt: String,
    pub answer: String,
}

/// Sentences for every node and edge; ids are `{graph_id}/{node_id}` and
/// `{graph_id}/e{edge_index}`.
pub fn graph_sentences(graph_id: &str, g: &GraphSpec) -> Result<Vec<SentenceRecord>> {
    let mut out = Vec::with_capacity(g.nodes.len() + g.edges.len());
    for n in &g.nodes {
        out.push(SentenceRecord { entity_id: format!("{graph_id}/{}", n.id), kind: EntityKind::Node, sentence: node_sentence(n, g.domain)? });
    }
    for (i, e) in g.edges.iter().enumerate() {
        out.push(SentenceRecord { entity_id: format!("{graph_id}/e{i}"), kind: EntityKind::Edge, sentence: edge_sentence(e, g)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{station, transit};

    #[test]
    fn transit_node_sentence_flags() {
        let mut n = station("A");
        n.attrs.insert("has_rail".into(), true.into());
        assert_eq!(
            node_sentence(&n, Domain::Transit).unwrap(),
            "A Station has disabled access and has rail. It features victorian architecture, has clean cleanliness, jazz music and is small in size."
        );
        n.attrs.insert("disabled_access".into(), false.into());
        assert!(node_sentence(&n, Domain::Transit).unwrap().contains("does not have disabled access"));
        assert!(node_sentence(&n, Domain::Network).is_err());
    }

    #[test]
    fn edge_sentence_aircon() {
        let mut g = transit(&["A", "B"], &[("A", "B")]);
        assert!(edge_sentence(&g.edges[0], &g).unwrap().contains("It has air conditioning"));
        g.edges[0].attrs.insert("line_has_aircon".into(), false.into());
        let s = edge_sentence(&g.edges[0], &g).unwrap();
        assert_eq!(s, "There is a solid red line from A Station to B Station. It does not have air conditioning and was built in 1900.");
        g.edges[0].endpoint_b = "Z".into();
        assert!(matches!(edge_sentence(&g.edges[0], &g), Err(ForgeError::DanglingEdge { index: 0 })));
    }

    #[test]
    fn csv_shapes() {
        let (n, e) = graph_to_csv(&GraphSpec::empty(Domain::Transit)).unwrap();
        assert_eq!(n, "\"id\",\"name\",\"disabled_access\",\"has_rail\",\"architecture\",\"cleanliness\",\"music\",\"size\"\n");
        assert_eq!(e, "\"source_id\",\"target_id\",\"line_color\",\"line_stroke\",\"has_aircon\",\"built\"\n");
        let (n, _) = graph_to_csv(&transit(&["A"], &[])).unwrap();
        assert_eq!(n.lines().count(), 2);
        let (_, e) = graph_to_csv(&transit(&["A", "B"], &[("A", "B")])).unwrap();
        assert_eq!(e.lines().count(), 2);
        assert!(e.ends_with("\"A\",\"B\",\"red\",\"solid\",\"True\",\"1900\"\n"));
    }

    #[test]
    fn quoting_doubles_quotes() {
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn prompt_suffixes() {
        let g = transit(&["A", "B"], &[("A", "B")]);
        let b: Bindings = [("Station".to_string(), "A Station".to_string())].into_iter().collect();
        let q = |id, out| PromptQuestion { template_id: id, question: "Q?", output_type: out, slot_bindings: &b };
        assert!(build_prompt(&g, q("HasRail", OutputType::Boolean)).unwrap().ends_with("Answer with 'True' or 'False':\n\nAnswer:"));
        assert!(build_prompt(&g, q("HasCycle", OutputType::Boolean))
            .unwrap()
            .ends_with("Answer with 'True' if it is in a cycle, otherwise 'False':\n\nAnswer:"));
        assert!(build_prompt(&g, q("LineStations", OutputType::List)).unwrap().ends_with("Output a comma-separated list:"));
        let p = build_prompt(&g, q("X", OutputType::String)).unwrap();
        assert!(p.starts_with("--- Nodes ---\n\"id\""));
        assert!(p.contains("representation. The question is: Q?\n\nAnswer directly:"));
        let bad: Bindings = [("Station_2".to_string(), "Nowhere".to_string())].into_iter().collect();
        assert!(build_prompt(&g, PromptQuestion { slot_bindings: &bad, ..q("X", OutputType::String) }).is_err());
    }

    #[test]
    fn sentences_cover_every_entity() {
        let g = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        let s = graph_sentences("g0", &g).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[3].entity_id, "g0/e0");
    }
}
