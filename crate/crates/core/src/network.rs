//! Computer-network generation: scattered nodes, hub coalescing, k-nearest
//! neighbour links with intrinsic attributes.

use std::collections::HashSet;

use rand::Rng;

use crate::coalesce::{merge_classes, MergeMap};
use crate::config::GenConfig;
use crate::error::{ForgeError, Result};
use crate::model::{Domain, EdgeSpec, GraphSpec, NodeSpec};
use crate::rng::{seeded_rng, RandomStream};
use crate::transit::{apply_integer_names, ensure_connectivity};
use crate::vocab::{self, NamePool};

pub fn place_network_nodes(cfg: &GenConfig, rng: &mut RandomStream) -> Result<Vec<NodeSpec>> {
    let mut names = NamePool::hosts(rng);
    if cfg.n_nodes > names.remaining() {
        return Err(ForgeError::Config(format!("n_nodes {} exceeds the host name pool", cfg.n_nodes)));
    }
    let width = cfg.n_nodes.saturating_sub(1).to_string().len().max(2);
    let r = cfg.map_radius;
    Ok((0..cfg.n_nodes)
        .map(|i| NodeSpec {
            id: format!("N{i:0width$}"),
            name: names.take().expect("checked above"),
            x: rng.random_range(-r..=r),
            y: rng.random_range(-r..=r),
            attrs: vocab::sample_attrs(vocab::SYSTEM_NODE_SCHEMA, rng),
        })
        .collect())
}

/// Neighbour count used for a requested average degree.
pub fn k_for(avg_degree: f64, n_nodes: usize) -> usize {
    let k = (avg_degree / 2.0).round().max(1.0) as usize;
    k.min(n_nodes.saturating_sub(1)).max(1)
}

/// Links every node to its `k` nearest neighbours (ties by node order),
/// deduplicating undirected pairs. Edge order: by source node, then rank.
pub fn knn_edges(nodes: &[NodeSpec], avg_degree: f64, rng: &mut RandomStream) -> Vec<EdgeSpec> {
    if nodes.len() < 2 {
        return Vec::new();
    }
    let k = k_for(avg_degree, nodes.len());
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        let mut others: Vec<(f64, usize)> = nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(j, b)| ((a.x - b.x).powi(2) + (a.y - b.y).powi(2), j))
            .collect();
        others.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
        for &(_, j) in others.iter().take(k) {
            if seen.insert((i.min(j), i.max(j))) {
                edges.push(EdgeSpec {
                    endpoint_a: a.id.clone(),
                    endpoint_b: nodes[j].id.clone(),
                    line_id: None,
                    attrs: vocab::sample_attrs(vocab::LINK_SCHEMA, rng),
                    is_connector: false,
                });
            }
        }
    }
    edges
}

/// Same contract as station coalescing: transitive closure of
/// `dist <= threshold`, lowest id survives with its own attributes.
pub fn coalesce_hubs(nodes: &[NodeSpec], threshold: f64) -> (Vec<NodeSpec>, MergeMap) {
    let points: Vec<(f64, f64)> = nodes.iter().map(|n| (n.x, n.y)).collect();
    let ids: Vec<&str> = nodes.iter().map(|n| n.id.as_str()).collect();
    let reps = merge_classes(&points, &ids, threshold);
    let mut merge = MergeMap::default();
    let mut kept = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        merge.representative.insert(n.id.clone(), nodes[reps[i]].id.clone());
        if reps[i] == i {
            kept.push(n.clone());
        }
    }
    (kept, merge)
}

pub fn generate_network_graph(cfg: &GenConfig) -> Result<GraphSpec> {
    if cfg.domain != Domain::Network {
        return Err(ForgeError::WrongDomain("network generation", cfg.domain));
    }
    cfg.validate()?;
    let placed = place_network_nodes(cfg, &mut seeded_rng(cfg.seed, "nodes"))?;
    let (nodes, _) = coalesce_hubs(&placed, cfg.merge_threshold);
    let edges = knn_edges(&nodes, cfg.avg_degree, &mut seeded_rng(cfg.seed, "links"));
    let g = GraphSpec {
        domain: Domain::Network,
        seed: cfg.seed,
        size_class: cfg.size_class,
        lines: Vec::new(),
        nodes,
        edges,
    };
    let g = ensure_connectivity(&g, &mut seeded_rng(cfg.seed, "connect"))?;
    apply_integer_names(&g, cfg.integer_names, &mut seeded_rng(cfg.seed, "integer-names"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GraphProfile;
    use crate::model::{validate_graph, SizeClass};

    fn cfg(n: usize) -> GenConfig {
        let mut c = GraphProfile::default_for(Domain::Network, SizeClass::Standard).sample(3);
        c.n_nodes = n;
        c
    }

    fn at(id: &str, x: f64) -> NodeSpec {
        let mut n = place_network_nodes(&cfg(1), &mut seeded_rng(0, "n")).unwrap().remove(0);
        n.id = id.into();
        n.name = id.into();
        n.x = x;
        n.y = 0.0;
        n
    }

    #[test]
    fn single_node() {
        let nodes = place_network_nodes(&cfg(1), &mut seeded_rng(0, "n")).unwrap();
        assert_eq!(nodes.len(), 1);
        let g = GraphSpec { nodes, ..GraphSpec::empty(Domain::Network) };
        assert!(validate_graph(&g).is_empty());
    }

    #[test]
    fn placement_is_deterministic_and_bounded() {
        let c = cfg(25);
        let a = place_network_nodes(&c, &mut seeded_rng(11, "n")).unwrap();
        assert_eq!(a, place_network_nodes(&c, &mut seeded_rng(11, "n")).unwrap());
        let r = c.map_radius;
        assert!(a.iter().all(|n| n.x.abs() <= r && n.y.abs() <= r));
    }

    #[test]
    fn two_nodes_one_edge() {
        let nodes = [at("a", 0.0), at("b", 1.0)];
        for deg in [1.0, 4.0, 10.0] {
            assert_eq!(knn_edges(&nodes, deg, &mut seeded_rng(0, "e")).len(), 1);
        }
    }

    #[test]
    fn collinear_nearest_neighbours() {
        let nodes = [at("0", 0.0), at("1", 1.0), at("3", 3.0)];
        let edges = knn_edges(&nodes, 2.0, &mut seeded_rng(0, "e"));
        let pairs: Vec<_> = edges.iter().map(|e| e.key()).collect();
        assert_eq!(pairs, [("0", "1"), ("1", "3")]);
    }

    #[test]
    fn mean_degree_within_handshake_bound() {
        for seed in 0..20 {
            let nodes = place_network_nodes(&cfg(24), &mut seeded_rng(seed, "n")).unwrap();
            let k = k_for(4.0, nodes.len()) as f64;
            let edges = knn_edges(&nodes, 4.0, &mut seeded_rng(seed, "e"));
            let mean = 2.0 * edges.len() as f64 / nodes.len() as f64;
            assert!(mean >= k && mean <= 2.0 * k, "{mean}");
        }
    }

    #[test]
    fn hub_coalescing_examples() {
        let chain = [at("a", 0.0), at("b", 0.5), at("c", 1.0)];
        assert_eq!(coalesce_hubs(&chain, 0.6).0.len(), 1);
        assert_eq!(coalesce_hubs(&chain, 0.0).0.len(), 3);
        let far = [at("a", 0.0), at("b", 10.0)];
        assert_eq!(coalesce_hubs(&far, 1.0).0.len(), 2);
    }

    #[test]
    fn pipeline_valid_connected_deterministic() {
        for seed in 0..25 {
            let mut c = cfg(24);
            c.seed = seed;
            let g = generate_network_graph(&c).unwrap();
            assert!(validate_graph(&g).is_empty(), "{:?}", validate_graph(&g));
            assert!(g.lines.is_empty());
            let ids: HashSet<_> = g.nodes.iter().map(|n| n.id.as_str()).collect();
            assert!(g.edges.iter().all(|e| ids.contains(e.endpoint_a.as_str()) && ids.contains(e.endpoint_b.as_str())));
            assert_eq!(g.to_json(), generate_network_graph(&c).unwrap().to_json());
        }
    }
}
