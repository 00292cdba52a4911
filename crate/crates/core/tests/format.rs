mod common;

use clegr_core::textualize::{build_prompt, graph_sentences, graph_to_csv, PromptQuestion};
use clegr_core::templates::{Bindings, OutputType};

#[test]
fn fixture_matches_golden_files() {
    assert_eq!(common::golden_mismatches(), Vec::<String>::new());
}

#[test]
fn rendering_is_stable() {
    let g = common::three_station_graph();
    assert_eq!(graph_to_csv(&g).unwrap(), graph_to_csv(&g).unwrap());
    assert_eq!(graph_sentences("g0000", &g).unwrap(), graph_sentences("g0000", &g).unwrap());
}

#[test]
fn slot_names_appear_in_the_csv_block() {
    let g = common::three_station_graph();
    let mut b = Bindings::new();
    b.insert("Station".into(), "Harbour Gate".into());
    b.insert("Station_2".into(), "Mill Lane".into());
    let q = PromptQuestion {
        template_id: "StationPairAdjacent",
        question: "Are Harbour Gate and Mill Lane adjacent?",
        output_type: OutputType::Boolean,
        slot_bindings: &b,
    };
    let p = build_prompt(&g, q).unwrap();
    let (nodes, _) = graph_to_csv(&g).unwrap();
    assert!(p.contains(&nodes));
    for v in b.values() {
        assert!(nodes.contains(&format!("\"{v}\"")));
    }
}

#[test]
fn unknown_station_is_rejected() {
    let g = common::three_station_graph();
    let mut b = Bindings::new();
    b.insert("Station".into(), "Nowhere".into());
    let q = PromptQuestion { template_id: "Access", question: "Does Nowhere have disabled access?", output_type: OutputType::Boolean, slot_bindings: &b };
    assert!(build_prompt(&g, q).is_err());
}

#[test]
fn cycle_and_list_suffixes() {
    let g = common::three_station_graph();
    let b = Bindings::new();
    let cyc = PromptQuestion { template_id: "HasCycle", question: "Is Mill Lane in a cycle?", output_type: OutputType::Boolean, slot_bindings: &b };
    assert!(build_prompt(&g, cyc).unwrap().ends_with("Answer with 'True' if it is in a cycle, otherwise 'False':\n\nAnswer:"));
    let list = PromptQuestion { template_id: "X", question: "Which?", output_type: OutputType::List, slot_bindings: &b };
    assert!(build_prompt(&g, list).unwrap().ends_with("The question is: Which?\n\nOutput a comma-separated list:"));
}
