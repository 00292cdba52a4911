#![allow(dead_code)]

use std::path::PathBuf;

use clegr_core::model::{Attrs, Domain, EdgeSpec, GraphSpec, LineSpec, NodeSpec, SizeClass, Stroke};

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_path(name)).unwrap_or_else(|e| panic!("golden file {name}: {e}"))
}

fn station(id: &str, name: &str, (access, rail): (bool, bool), [arch, clean, music, size]: [&str; 4]) -> NodeSpec {
    let mut attrs = Attrs::new();
    attrs.insert("disabled_access".into(), access.into());
    attrs.insert("has_rail".into(), rail.into());
    attrs.insert("architecture".into(), arch.into());
    attrs.insert("cleanliness".into(), clean.into());
    attrs.insert("music".into(), music.into());
    attrs.insert("size".into(), size.into());
    NodeSpec { id: id.into(), name: name.into(), x: 0.0, y: 0.0, attrs }
}

fn track(line: &LineSpec, a: &str, b: &str) -> EdgeSpec {
    EdgeSpec { endpoint_a: a.into(), endpoint_b: b.into(), line_id: Some(line.id.clone()), attrs: line.edge_attrs(), is_connector: false }
}

/// Three stations on a red and a blue line, the fixture behind the golden files.
pub fn three_station_graph() -> GraphSpec {
    let red = LineSpec { id: "L0".into(), name: "Red Line".into(), color: "red".into(), stroke: Stroke::Solid, built: "1962".into(), has_aircon: true };
    let blue = LineSpec { id: "L1".into(), name: "Blue Line".into(), color: "blue".into(), stroke: Stroke::Dashed, built: "1998".into(), has_aircon: false };
    GraphSpec {
        domain: Domain::Transit,
        seed: 0,
        size_class: SizeClass::Standard,
        nodes: vec![
            station("N00", "Elmstead Cross", (true, false), ["brutalist", "clean", "jazz", "large"]),
            station("N01", "Harbour Gate", (false, true), ["victorian", "dirty", "classical", "small"]),
            station("N02", "Mill Lane", (true, true), ["modernist", "clean", "rock", "medium"]),
        ],
        edges: vec![track(&red, "N00", "N01"), track(&blue, "N01", "N02")],
        lines: vec![red, blue],
    }
}

/// Renders the fixture and compares it with each golden file; returns the
/// names of files that differ.
pub fn golden_mismatches() -> Vec<String> {
    use clegr_core::templates::{Bindings, OutputType};
    use clegr_core::textualize::{build_prompt, edge_sentence, graph_to_csv, node_sentence, PromptQuestion};

    let g = three_station_graph();
    let lines = |v: Vec<String>| v.into_iter().map(|s| s + "\n").collect::<String>();
    let node_s = lines(g.nodes.iter().map(|n| node_sentence(n, g.domain).unwrap()).collect());
    let edge_s = lines(g.edges.iter().map(|e| edge_sentence(e, &g).unwrap()).collect());
    let (nodes, edges) = graph_to_csv(&g).unwrap();
    let mut bindings = Bindings::new();
    bindings.insert("Station".into(), "Elmstead Cross".into());
    let q = PromptQuestion {
        template_id: "Access",
        question: "Does Elmstead Cross have disabled access?",
        output_type: OutputType::Boolean,
        slot_bindings: &bindings,
    };
    let prompt = build_prompt(&g, q).unwrap();

    [
        ("node_sentences.txt", node_s),
        ("edge_sentences.txt", edge_s),
        ("nodes.csv", nodes),
        ("edges.csv", edges),
        ("prompt_access.txt", prompt),
    ]
    .into_iter()
    .filter(|(name, got)| golden(name) != *got)
    .map(|(name, _)| name.to_string())
    .collect()
}
