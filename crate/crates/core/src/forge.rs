//! Question instantiation and dataset assembly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{DatasetConfig, GenConfig};
use crate::error::{ForgeError, Result};
use crate::model::{Domain, GraphSpec};
use crate::network::generate_network_graph;
use crate::oracles::GraphIndex;
use crate::rng::{derive_seed, seeded_rng, RandomStream};
use crate::templates::{Answer, Bindings, Group, OutputType, Registry, Scope, TemplateSpec};
use crate::transit::generate_transit_graph;

/// Sampling attempts allowed per requested instance.
pub const RETRY_BUDGET: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionInstance {
    pub template_id: String,
    pub question_text: String,
    pub answer: Answer,
    pub output_type: OutputType,
    pub group: Group,
    pub scope: Scope,
    pub slot_bindings: Bindings,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

/// One line of `dataset.jsonl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub question_id: String,
    pub graph_id: String,
    pub split: Split,
    pub template_id: String,
    pub group: Group,
    pub scope: Scope,
    pub output_type: OutputType,
    pub question: String,
    pub answer: String,
    pub slot_bindings: Bindings,
}

/// One line of `graphs.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph_id: String,
    #[serde(flatten)]
    pub graph: GraphSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub graphs: Vec<GraphRecord>,
    pub records: Vec<DatasetRecord>,
}

pub fn generate_graph(cfg: &GenConfig) -> Result<GraphSpec> {
    match cfg.domain {
        Domain::Transit => generate_transit_graph(cfg),
        Domain::Network => generate_network_graph(cfg),
    }
}

/// Samples slots and runs the oracle once; `None` when either rejects.
pub fn instantiate(t: &TemplateSpec, ix: &GraphIndex, rng: &mut RandomStream) -> Result<Option<QuestionInstance>> {
    if t.domain != ix.graph.domain {
        return Err(ForgeError::WrongDomain("this template", ix.graph.domain));
    }
    let Some(bindings) = (t.sampler)(ix, rng) else { return Ok(None) };
    let Some(answer) = t.answer(ix, &bindings)? else { return Ok(None) };
    Ok(Some(QuestionInstance {
        template_id: t.id.clone(),
        question_text: t.render(&bindings)?,
        answer,
        output_type: t.output_type,
        group: t.group,
        scope: t.scope,
        slot_bindings: bindings,
    }))
}

/// Up to `per_template` accepted instances of every template, in template
/// order. Each instance gets [`RETRY_BUDGET`] attempts.
pub fn generate_question_set(
    ix: &GraphIndex,
    templates: &[&TemplateSpec],
    per_template: usize,
    rng: &mut RandomStream,
) -> Result<Vec<QuestionInstance>> {
    let mut out = Vec::with_capacity(templates.len() * per_template);
    for t in templates {
        for _ in 0..per_template {
            for _ in 0..RETRY_BUDGET {
                if let Some(q) = instantiate(t, ix, rng)? {
                    out.push(q);
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Shuffles the ids and cuts them by `ratios`; train and validation sizes
/// are rounded down and the remainder goes to test.
pub fn assign_splits(graph_ids: &[String], ratios: (usize, usize, usize), seed: u64) -> Result<BTreeMap<String, Split>> {
    let (a, b, c) = ratios;
    if a == 0 || b == 0 || c == 0 {
        return Err(ForgeError::Config("split ratios must be positive".into()));
    }
    let total = a + b + c;
    let n = graph_ids.len();
    let n_train = n * a / total;
    let n_val = n * b / total;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded_rng(seed, "splits"));
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(rank, i)| {
            let split = if rank < n_train {
                Split::Train
            } else if rank < n_train + n_val {
                Split::Validation
            } else {
                Split::Test
            };
            (graph_ids[i].clone(), split)
        })
        .collect())
}

pub fn graph_id(i: usize) -> String {
    format!("g{i:04}")
}

/// Registry for a config: built-ins plus any requested optional templates.
pub fn registry_for(cfg: &DatasetConfig) -> Result<Registry> {
    let mut r = Registry::builtin();
    for id in &cfg.extra_templates {
        r.register_extra(id)?;
    }
    Ok(r)
}

/// Graph `i` of a dataset together with its question set.
pub fn build_graph_questions(cfg: &DatasetConfig, registry: &Registry, i: usize) -> Result<(GraphSpec, Vec<QuestionInstance>)> {
    let graph_seed = derive_seed(cfg.seed, &format!("graph-{i}"));
    let graph = generate_graph(&cfg.profile().sample(graph_seed))?;
    let templates = registry.select(cfg.domain, cfg.subset);
    let ix = GraphIndex::new(&graph);
    let questions = generate_question_set(&ix, &templates, cfg.per_template, &mut seeded_rng(graph_seed, "questions"))?;
    Ok((graph, questions))
}

/// Generates every graph and question of a dataset. Work is spread over
/// `jobs` threads (0 = all cores); output order depends only on the config.
pub fn build_dataset(cfg: &DatasetConfig, jobs: usize) -> Result<Dataset> {
    cfg.validate()?;
    let registry = registry_for(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ForgeError::Config(format!("thread pool: {e}")))?;
    let per_graph: Vec<(GraphSpec, Vec<QuestionInstance>)> =
        pool.install(|| (0..cfg.n_graphs).into_par_iter().map(|i| build_graph_questions(cfg, &registry, i)).collect::<Result<_>>())?;

    let ids: Vec<String> = (0..cfg.n_graphs).map(graph_id).collect();
    let splits = assign_splits(&ids, (3, 1, 1), cfg.split_seed())?;
    let mut graphs = Vec::with_capacity(cfg.n_graphs);
    let mut records = Vec::new();
    for (gid, (graph, questions)) in ids.into_iter().zip(per_graph) {
        let split = splits[&gid];
        for (k, q) in questions.into_iter().enumerate() {
            records.push(DatasetRecord {
                question_id: format!("{gid}-q{k:03}"),
                graph_id: gid.clone(),
                split,
                template_id: q.template_id,
                group: q.group,
                scope: q.scope,
                output_type: q.output_type,
                question: q.question_text,
                answer: q.answer.to_string(),
                slot_bindings: q.slot_bindings,
            });
        }
        graphs.push(GraphRecord { graph_id: gid, graph });
    }
    Ok(Dataset { graphs, records })
}

/// Re-runs a record's oracle on its graph; returns the serialised answer.
pub fn rederive(record: &DatasetRecord, graph: &GraphSpec, registry: &Registry) -> Result<Option<String>> {
    let t = registry.get(graph.domain, &record.template_id)?;
    let ix = GraphIndex::new(graph);
    Ok(t.answer(&ix, &record.slot_bindings)?.map(|a| a.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SizeClass;
    use crate::templates::Subset;

    fn small(domain: Domain, subset: Subset, n: usize) -> DatasetConfig {
        DatasetConfig { domain, subset, n_graphs: n, seed: 5, ..DatasetConfig::default() }
    }

    #[test]
    fn split_sizes() {
        let ids = |n: usize| (0..n).map(graph_id).collect::<Vec<_>>();
        let count = |m: &BTreeMap<String, Split>, s| m.values().filter(|&&v| v == s).count();
        for (n, want) in [(500, (300, 100, 100)), (5, (3, 1, 1))] {
            let m = assign_splits(&ids(n), (3, 1, 1), 9).unwrap();
            assert_eq!((count(&m, Split::Train), count(&m, Split::Validation), count(&m, Split::Test)), want);
        }
        assert_eq!(assign_splits(&ids(50), (3, 1, 1), 1).unwrap(), assign_splits(&ids(50), (3, 1, 1), 1).unwrap());
        assert!(assign_splits(&ids(5), (3, 0, 1), 1).is_err());
    }

    #[test]
    fn facts_never_reject() {
        let cfg = small(Domain::Transit, Subset::Facts, 20);
        let ds = build_dataset(&cfg, 2).unwrap();
        assert_eq!(ds.records.len(), 20 * 44);
        let net = build_dataset(&small(Domain::Network, Subset::Facts, 10), 2).unwrap();
        assert_eq!(net.records.len(), 10 * 18);
    }

    #[test]
    fn existence_answers_forced() {
        let cfg = small(Domain::Transit, Subset::Facts, 10);
        let ds = build_dataset(&cfg, 1).unwrap();
        for r in &ds.records {
            match r.template_id.as_str() {
                "StationExistence2" => assert_eq!(r.answer, "False"),
                "StationAdjacentAlwaysTrue" | "StationExistence1" => assert_eq!(r.answer, "True"),
                _ => {}
            }
        }
    }

    #[test]
    fn answers_rederive_and_splits_follow_graphs() {
        for (domain, subset) in [(Domain::Transit, Subset::Reasoning), (Domain::Network, Subset::Reasoning)] {
            let cfg = small(domain, subset, 8);
            let ds = build_dataset(&cfg, 0).unwrap();
            let registry = registry_for(&cfg).unwrap();
            let graphs: BTreeMap<&str, &GraphSpec> = ds.graphs.iter().map(|g| (g.graph_id.as_str(), &g.graph)).collect();
            for r in &ds.records {
                assert_eq!(rederive(r, graphs[r.graph_id.as_str()], &registry).unwrap().as_deref(), Some(r.answer.as_str()));
            }
            let mut by_graph: BTreeMap<&str, Split> = BTreeMap::new();
            for r in &ds.records {
                assert_eq!(*by_graph.entry(&r.graph_id).or_insert(r.split), r.split);
            }
        }
    }

    #[test]
    fn deterministic_regardless_of_jobs() {
        let cfg = DatasetConfig { size_class: SizeClass::Standard, ..small(Domain::Transit, Subset::Reasoning, 6) };
        assert_eq!(build_dataset(&cfg, 1).unwrap(), build_dataset(&cfg, 4).unwrap());
    }

    #[test]
    fn wrong_domain_is_an_error() {
        let g = GraphSpec::empty(Domain::Network);
        let ix = GraphIndex::new(&g);
        let r = Registry::builtin();
        let t = r.get(Domain::Transit, "HasCycle").unwrap();
        assert!(instantiate(t, &ix, &mut seeded_rng(0, "x")).is_err());
    }

    #[test]
    fn graph_records_round_trip() {
        let ds = build_dataset(&small(Domain::Transit, Subset::Facts, 2), 1).unwrap();
        let text = serde_json::to_string(&ds.graphs[0]).unwrap();
        assert!(text.starts_with("{\"graph_id\":\"g0000\",\"domain\":\"transit\""));
        let back: GraphRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ds.graphs[0]);
    }
}
