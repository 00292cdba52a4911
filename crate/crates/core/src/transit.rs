//! Subway-map generation: lines, stations on Bézier curves, interchange
//! coalescing, track edges, connector edges, and optional integer naming.

use std::collections::{HashMap, HashSet};

use rand::seq::index;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::coalesce::{merge_classes, MergeMap};
use crate::config::GenConfig;
use crate::error::{ForgeError, Result};
use crate::model::{components, Attrs, Domain, EdgeSpec, GraphSpec, LineSpec, NodeSpec, Stroke};
use crate::rng::{seeded_rng, RandomStream};
use crate::vocab::{self, NamePool};

pub type Point = (f64, f64);

/// A station before coalescing.
#[derive(Clone, Debug, PartialEq)]
pub struct StationDraft {
    pub provisional_id: String,
    pub line_id: String,
    pub order_on_line: usize,
    pub x: f64,
    pub y: f64,
    pub name: String,
    pub attrs: Attrs,
}

pub fn gen_lines(cfg: &GenConfig, rng: &mut RandomStream) -> Result<Vec<LineSpec>> {
    let capacity = vocab::COLORS.len() * Stroke::ALL.len();
    if cfg.n_lines > capacity {
        return Err(ForgeError::LineCapacity { requested: cfg.n_lines, capacity });
    }
    let mut names = NamePool::lines(rng);
    if cfg.n_lines > names.remaining() {
        return Err(ForgeError::Config(format!("not enough line names for {} lines", cfg.n_lines)));
    }
    let picks = index::sample(rng, capacity, cfg.n_lines);
    let lines = picks
        .into_iter()
        .enumerate()
        .map(|(i, pair)| LineSpec {
            id: format!("L{i:02}"),
            name: names.take().expect("checked above"),
            color: vocab::COLORS[pair / Stroke::ALL.len()].to_string(),
            stroke: Stroke::ALL[pair % Stroke::ALL.len()],
            built: rng.random_range(vocab::BUILT_MIN..=vocab::BUILT_MAX).to_string(),
            has_aircon: rng.random_bool(0.5),
        })
        .collect();
    Ok(lines)
}

/// Uniform point in the disk of the given radius, by rejection from the
/// enclosing square.
fn point_in_disk(radius: f64, rng: &mut impl Rng) -> Point {
    loop {
        let (x, y): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if x * x + y * y <= 1.0 {
            return (radius * x, radius * y);
        }
    }
}

pub fn control_points(map_radius: f64, rng: &mut impl Rng) -> [Point; 4] {
    std::array::from_fn(|_| point_in_disk(map_radius, rng))
}

pub fn cubic_bezier(ctrl: &[Point; 4], t: f64) -> Point {
    let s = 1.0 - t;
    let w = [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t];
    let x = w.iter().zip(ctrl).map(|(w, p)| w * p.0).sum();
    let y = w.iter().zip(ctrl).map(|(w, p)| w * p.1).sum();
    (x, y)
}

/// Places `cfg.stations_per_line` drafts along the curve `ctrl` at
/// `t_i = i / (k - 1)`, jittered by `N(0, sigma^2)` on each axis.
pub fn place_stations_on(
    line: &LineSpec,
    ctrl: &[Point; 4],
    cfg: &GenConfig,
    rng: &mut RandomStream,
    names: &mut NamePool,
) -> Result<Vec<StationDraft>> {
    let k = cfg.stations_per_line;
    if k < 2 {
        return Err(ForgeError::Config("stations_per_line must be at least 2".into()));
    }
    let noise = Normal::new(0.0, cfg.coord_noise_sigma)
        .map_err(|e| ForgeError::Config(format!("coord_noise_sigma: {e}")))?;
    (0..k)
        .map(|i| {
            let (bx, by) = cubic_bezier(ctrl, i as f64 / (k - 1) as f64);
            let (dx, dy) = (noise.sample(rng), noise.sample(rng));
            let name = names
                .take()
                .ok_or_else(|| ForgeError::Config("station name pool exhausted".into()))?;
            Ok(StationDraft {
                provisional_id: format!("{}-{i:02}", line.id),
                line_id: line.id.clone(),
                order_on_line: i,
                x: bx + dx,
                y: by + dy,
                name,
                attrs: vocab::sample_attrs(vocab::STATION_SCHEMA, rng),
            })
        })
        .collect()
}

pub fn place_stations(
    line: &LineSpec,
    cfg: &GenConfig,
    rng: &mut RandomStream,
    names: &mut NamePool,
) -> Result<Vec<StationDraft>> {
    let ctrl = control_points(cfg.map_radius, rng);
    place_stations_on(line, &ctrl, cfg, rng, names)
}

/// Merges drafts within `threshold` of each other (transitively). Each class
/// becomes the node of its lowest provisional id, keeping that draft's name,
/// coordinates, and attributes.
pub fn coalesce_stations(drafts: &[StationDraft], threshold: f64) -> (Vec<NodeSpec>, MergeMap) {
    let points: Vec<Point> = drafts.iter().map(|d| (d.x, d.y)).collect();
    let ids: Vec<&str> = drafts.iter().map(|d| d.provisional_id.as_str()).collect();
    let reps = merge_classes(&points, &ids, threshold);

    let mut merge = MergeMap::default();
    let mut nodes = Vec::new();
    for (i, d) in drafts.iter().enumerate() {
        let rep = &drafts[reps[i]];
        merge.representative.insert(d.provisional_id.clone(), rep.provisional_id.clone());
        if reps[i] == i {
            nodes.push(NodeSpec {
                id: d.provisional_id.clone(),
                name: d.name.clone(),
                x: d.x,
                y: d.y,
                attrs: d.attrs.clone(),
            });
        }
    }
    (nodes, merge)
}

/// Links consecutive representatives along each line. `line_orders[i]` is
/// the ordered provisional ids of `lines[i]`.
pub fn build_edges(lines: &[LineSpec], line_orders: &[Vec<String>], merge: &MergeMap) -> Vec<EdgeSpec> {
    let mut seen: HashSet<(String, String, String)> = HashSet::new();
    let mut edges = Vec::new();
    for (line, order) in lines.iter().zip(line_orders) {
        let reps: Vec<&str> = order
            .iter()
            .map(|p| merge.resolve(p).unwrap_or(p.as_str()))
            .collect();
        for pair in reps.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue;
            }
            let key = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((key.0.to_string(), key.1.to_string(), line.id.clone())) {
                continue;
            }
            edges.push(EdgeSpec {
                endpoint_a: a.to_string(),
                endpoint_b: b.to_string(),
                line_id: Some(line.id.clone()),
                attrs: line.edge_attrs(),
                is_connector: false,
            });
        }
    }
    edges
}

/// Joins disconnected components with connector edges until one remains.
///
/// Components are chained in order of their first node; each connector joins
/// a uniformly drawn node from each side. Transit connectors are assigned to a
/// uniformly drawn line and drawn dotted; network connectors get fresh link
/// attributes.
pub fn ensure_connectivity(g: &GraphSpec, rng: &mut RandomStream) -> Result<GraphSpec> {
    let comps = components(g);
    let mut out = g.clone();
    if comps.len() <= 1 {
        return Ok(out);
    }
    if g.domain == Domain::Transit && g.lines.is_empty() {
        return Err(ForgeError::Config("cannot assign connector edges: graph has no lines".into()));
    }
    for pair in comps.windows(2) {
        let a = *pair[0].choose(rng).expect("components are non-empty");
        let b = *pair[1].choose(rng).expect("components are non-empty");
        let (line_id, attrs) = match g.domain {
            Domain::Transit => {
                let line = g.lines.choose(rng).expect("checked above");
                (Some(line.id.clone()), line.connector_attrs())
            }
            Domain::Network => (None, vocab::sample_attrs(vocab::LINK_SCHEMA, rng)),
        };
        out.edges.push(EdgeSpec {
            endpoint_a: g.nodes[a].id.clone(),
            endpoint_b: g.nodes[b].id.clone(),
            line_id,
            attrs,
            is_connector: true,
        });
    }
    Ok(out)
}

/// Largest number of entities integer naming can cover (names come from 0..9999).
pub const INTEGER_NAME_SPACE: usize = 10_000;

/// Replaces node and line names (and ids) with distinct decimal strings.
pub fn apply_integer_names(g: &GraphSpec, enabled: bool, rng: &mut RandomStream) -> Result<GraphSpec> {
    if !enabled {
        return Ok(g.clone());
    }
    let total = g.nodes.len() + g.lines.len();
    if total > INTEGER_NAME_SPACE {
        return Err(ForgeError::Config(format!("{total} entities exceed the integer name space")));
    }
    let mut draws = index::sample(rng, INTEGER_NAME_SPACE, total).into_iter().map(|v| v.to_string());

    let mut out = g.clone();
    let mut node_ids = HashMap::new();
    for node in &mut out.nodes {
        let name = draws.next().expect("sampled enough");
        node_ids.insert(node.id.clone(), name.clone());
        node.id = name.clone();
        node.name = name;
    }
    let mut line_ids = HashMap::new();
    for line in &mut out.lines {
        let name = draws.next().expect("sampled enough");
        line_ids.insert(line.id.clone(), name.clone());
        line.id = name.clone();
        line.name = name;
    }
    for edge in &mut out.edges {
        if let Some(id) = node_ids.get(&edge.endpoint_a) {
            edge.endpoint_a = id.clone();
        }
        if let Some(id) = node_ids.get(&edge.endpoint_b) {
            edge.endpoint_b = id.clone();
        }
        if let Some(old) = edge.line_id.take() {
            let new = line_ids.get(&old).cloned().unwrap_or(old);
            edge.attrs.insert("line_name".into(), new.clone().into());
            edge.line_id = Some(new);
        }
    }
    Ok(out)
}

pub fn generate_transit_graph(cfg: &GenConfig) -> Result<GraphSpec> {
    if cfg.domain != Domain::Transit {
        return Err(ForgeError::WrongDomain("transit generation", cfg.domain));
    }
    cfg.validate()?;

    let lines = gen_lines(cfg, &mut seeded_rng(cfg.seed, "lines"))?;

    let mut rng = seeded_rng(cfg.seed, "stations");
    let mut names = NamePool::stations(&mut rng);
    let mut drafts = Vec::new();
    let mut line_orders = Vec::new();
    for line in &lines {
        let placed = place_stations(line, cfg, &mut rng, &mut names)?;
        line_orders.push(placed.iter().map(|d| d.provisional_id.clone()).collect::<Vec<_>>());
        drafts.extend(placed);
    }

    let (nodes, merge) = coalesce_stations(&drafts, cfg.merge_threshold);
    let edges = build_edges(&lines, &line_orders, &merge);
    let g = GraphSpec {
        domain: Domain::Transit,
        seed: cfg.seed,
        size_class: cfg.size_class,
        lines,
        nodes,
        edges,
    };
    let g = ensure_connectivity(&g, &mut seeded_rng(cfg.seed, "connect"))?;
    apply_integer_names(&g, cfg.integer_names, &mut seeded_rng(cfg.seed, "integer-names"))
}
