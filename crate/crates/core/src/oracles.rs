//! Graph algorithms that derive ground-truth answers.
//!
//! All oracles run over a [`GraphIndex`], an id-indexed view of a
//! [`GraphSpec`] with deduplicated, id-sorted neighbour lists. Hop distances
//! ignore parallel edges and edge lines.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::model::{AttrValue, GraphSpec, NodeSpec};

/// Default cap on simple-path enumeration for route counting.
pub const ROUTE_CAP: usize = 64;

/// Bound on DFS expansions while counting routes; exceeding it counts as truncation.
const ROUTE_STEP_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodePredicate {
    pub attr_key: String,
    pub expected: AttrValue,
    pub negate: bool,
}

impl NodePredicate {
    pub fn eq(key: &str, expected: impl Into<AttrValue>) -> Self {
        NodePredicate { attr_key: key.to_string(), expected: expected.into(), negate: false }
    }

    pub fn ne(key: &str, expected: impl Into<AttrValue>) -> Self {
        NodePredicate { negate: true, ..Self::eq(key, expected) }
    }

    pub fn matches(&self, node: &NodeSpec) -> bool {
        (node.attrs.get(&self.attr_key) == Some(&self.expected)) != self.negate
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathResult {
    pub node_sequence: Vec<String>,
    pub hop_count: usize,
}

pub struct GraphIndex<'g> {
    pub graph: &'g GraphSpec,
    by_id: HashMap<&'g str, usize>,
    by_name: HashMap<&'g str, usize>,
    adj: Vec<Vec<usize>>,
    on_cycle: Vec<bool>,
    line_members: Vec<Vec<usize>>,
    station_lines: Vec<Vec<usize>>,
}

impl<'g> GraphIndex<'g> {
    pub fn new(graph: &'g GraphSpec) -> Self {
        let n = graph.nodes.len();
        let by_id: HashMap<&str, usize> = graph.nodes.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
        let by_name = graph.nodes.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();

        let mut sets: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for e in &graph.edges {
            if let (Some(&a), Some(&b)) = (by_id.get(e.endpoint_a.as_str()), by_id.get(e.endpoint_b.as_str())) {
                if a != b {
                    sets[a].insert(b);
                    sets[b].insert(a);
                }
            }
        }
        let adj: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<usize> = s.into_iter().collect();
                v.sort_by(|&p, &q| graph.nodes[p].id.cmp(&graph.nodes[q].id));
                v
            })
            .collect();

        let line_pos: HashMap<&str, usize> = graph.lines.iter().enumerate().map(|(i, l)| (l.id.as_str(), i)).collect();
        let mut line_members = vec![Vec::new(); graph.lines.len()];
        for e in graph.edges.iter().filter(|e| !e.is_connector) {
            let Some(&li) = e.line_id.as_deref().and_then(|l| line_pos.get(l)) else { continue };
            for end in [&e.endpoint_a, &e.endpoint_b] {
                if let Some(&v) = by_id.get(end.as_str()) {
                    if !line_members[li].contains(&v) {
                        line_members[li].push(v);
                    }
                }
            }
        }
        let mut station_lines = vec![Vec::new(); n];
        for (li, members) in line_members.iter().enumerate() {
            for &v in members {
                station_lines[v].push(li);
            }
        }

        let on_cycle = cycle_membership(&adj);
        GraphIndex { graph, by_id, by_name, adj, on_cycle, line_members, station_lines }
    }

    pub fn len(&self) -> usize {
        self.graph.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.by_id.get(id).copied().ok_or_else(|| ForgeError::UnknownNode(id.to_string()))
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn node(&self, i: usize) -> &'g NodeSpec {
        &self.graph.nodes[i]
    }

    pub fn id(&self, i: usize) -> &'g str {
        &self.graph.nodes[i].id
    }

    /// Neighbour indices, sorted by node id.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn line_index(&self, line_id: &str) -> Result<usize> {
        self.graph
            .lines
            .iter()
            .position(|l| l.id == line_id)
            .ok_or_else(|| ForgeError::UnknownLine(line_id.to_string()))
    }

    /// Station indices of a line, in order of first appearance.
    pub fn line_members(&self, line: usize) -> &[usize] {
        &self.line_members[line]
    }

    /// Lines (by index into `graph.lines`) that a station belongs to.
    pub fn lines_of(&self, node: usize) -> &[usize] {
        &self.station_lines[node]
    }

    pub fn common_neighbors(&self, a: usize, b: usize) -> Vec<usize> {
        self.adj[a].iter().copied().filter(|w| self.adj[b].contains(w)).collect()
    }

    /// BFS hop distances from `src`; `usize::MAX` marks unreachable nodes.
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS distances plus the number of distinct shortest paths from `src`.
    pub fn shortest_path_counts(&self, src: usize) -> (Vec<usize>, Vec<u128>) {
        let mut dist = vec![usize::MAX; self.len()];
        let mut count = vec![0u128; self.len()];
        dist[src] = 0;
        count[src] = 1;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[u] + 1 {
                    count[w] = count[w].saturating_add(count[u]);
                }
            }
        }
        (dist, count)
    }

    pub fn on_cycle(&self, v: usize) -> bool {
        self.on_cycle[v]
    }
}

/// A node lies on a simple cycle iff one of its incident edges is not a bridge.
fn cycle_membership(adj: &[Vec<usize>]) -> Vec<bool> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = HashSet::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, next) = *top;
            if next < adj[v].len() {
                top.2 += 1;
                let w = adj[v][next];
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.insert((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    (0..n)
        .map(|v| adj[v].iter().any(|&w| !bridges.contains(&(v.min(w), v.max(w)))))
        .collect()
}

/// Hop-minimal path whose interior nodes all fail `avoid`; ties go to the
/// lexicographically smallest id sequence. Endpoints are never filtered.
pub fn shortest_path(ix: &GraphIndex, src: &str, dst: &str, avoid: Option<&NodePredicate>) -> Result<Option<PathResult>> {
    let s = ix.index_of(src)?;
    let t = ix.index_of(dst)?;
    Ok(shortest_path_idx(ix, s, t, avoid).map(|seq| PathResult {
        hop_count: seq.len() - 1,
        node_sequence: seq.into_iter().map(|i| ix.id(i).to_string()).collect(),
    }))
}

pub(crate) fn shortest_path_idx(ix: &GraphIndex, s: usize, t: usize, avoid: Option<&NodePredicate>) -> Option<Vec<usize>> {
    let allowed = |v: usize| v == s || v == t || avoid.is_none_or(|p| !p.matches(ix.node(v)));
    // distances to t through allowed nodes only
    let mut dist = vec![usize::MAX; ix.len()];
    dist[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        if u == s {
            break;
        }
        for &w in ix.neighbors(u) {
            if dist[w] == usize::MAX && allowed(w) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist[s] == usize::MAX {
        return None;
    }
    let mut seq = vec![s];
    let mut cur = s;
    while cur != t {
        cur = *ix
            .neighbors(cur)
            .iter()
            .find(|&&w| dist[w] != usize::MAX && dist[w] + 1 == dist[cur])
            .expect("BFS layers are consistent");
        seq.push(cur);
    }
    Some(seq)
}

/// Nodes strictly between the endpoints on the (avoiding) shortest path.
pub fn count_between(ix: &GraphIndex, src: &str, dst: &str, avoid: Option<&NodePredicate>) -> Result<Option<usize>> {
    Ok(shortest_path(ix, src, dst, avoid)?.map(|p| p.hop_count.saturating_sub(1)))
}

/// Number of simple paths from `src` to `dst`, or `None` once more than `cap`
/// are found. `src == dst` counts as the single trivial route.
pub fn distinct_routes(ix: &GraphIndex, src: &str, dst: &str, cap: usize) -> Result<Option<usize>> {
    let s = ix.index_of(src)?;
    let t = ix.index_of(dst)?;
    Ok(distinct_routes_idx(ix, s, t, cap))
}

pub(crate) fn distinct_routes_idx(ix: &GraphIndex, s: usize, t: usize, cap: usize) -> Option<usize> {
    if s == t {
        return Some(1);
    }
    let mut on_path = vec![false; ix.len()];
    on_path[s] = true;
    let mut stack = vec![(s, 0usize)];
    let mut found = 0;
    let mut steps = 0;
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        if next >= ix.neighbors(v).len() {
            on_path[v] = false;
            stack.pop();
            continue;
        }
        top.1 += 1;
        steps += 1;
        if steps > ROUTE_STEP_BUDGET {
            return None;
        }
        let w = ix.neighbors(v)[next];
        if on_path[w] {
            continue;
        }
        if w == t {
            found += 1;
            if found > cap {
                return None;
            }
            continue;
        }
        on_path[w] = true;
        stack.push((w, 0));
    }
    Some(found)
}

pub fn in_cycle(ix: &GraphIndex, v: &str) -> Result<bool> {
    Ok(ix.on_cycle(ix.index_of(v)?))
}

/// Nodes other than `v` within `k` hops.
pub fn k_hop_count(ix: &GraphIndex, v: &str, k: usize) -> Result<usize> {
    let i = ix.index_of(v)?;
    Ok(within_hops(ix, i, k).len())
}

pub(crate) fn within_hops(ix: &GraphIndex, v: usize, k: usize) -> Vec<usize> {
    let dist = ix.distances(v);
    (0..ix.len()).filter(|&u| u != v && dist[u] <= k).collect()
}

/// Unique modal value; `None` on a tie for first place or empty input.
pub fn most_common<T: Ord + Clone>(values: &[T]) -> Option<T> {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let best = *counts.values().max()?;
    let mut winners = counts.into_iter().filter(|&(_, c)| c == best);
    let (winner, _) = winners.next()?;
    match winners.next() {
        Some(_) => None,
        None => Some(winner.clone()),
    }
}

/// Ids of stations on a line's non-connector edges, in order of first appearance.
pub fn line_stations(ix: &GraphIndex, line_id: &str) -> Result<Vec<String>> {
    let li = ix.line_index(line_id)?;
    Ok(ix.line_members(li).iter().map(|&v| ix.id(v).to_string()).collect())
}

/// Number of the given nodes satisfying every predicate.
pub fn filter_count(ix: &GraphIndex, node_ids: &[String], preds: &[NodePredicate]) -> Result<usize> {
    let mut n = 0;
    for id in node_ids {
        let node = ix.node(ix.index_of(id)?);
        if preds.iter().all(|p| p.matches(node)) {
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathAttr<'a> {
    Edge(&'a str),
    Node(&'a str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregate {
    MostCommon,
    Min,
    Max,
    /// max - min of an integer-valued attribute.
    Span,
}

/// Aggregates an attribute along a path. Edge attributes are read from the
/// first stored edge joining each consecutive pair.
pub fn path_attr_aggregate(ix: &GraphIndex, path: &PathResult, attr: PathAttr, mode: Aggregate) -> Result<Option<AttrValue>> {
    let values: Vec<AttrValue> = match attr {
        PathAttr::Node(key) => path
            .node_sequence
            .iter()
            .map(|id| ix.node(ix.index_of(id)?).attr(key).cloned())
            .collect::<Result<_>>()?,
        PathAttr::Edge(key) => path
            .node_sequence
            .windows(2)
            .map(|pair| {
                let edge = ix
                    .graph
                    .edges
                    .iter()
                    .find(|e| e.joins(&pair[0], &pair[1]))
                    .ok_or_else(|| ForgeError::Mismatch(format!("{} and {} are not adjacent", pair[0], pair[1])))?;
                edge.attr(key).cloned()
            })
            .collect::<Result<_>>()?,
    };
    Ok(aggregate(&values, mode))
}

fn aggregate(values: &[AttrValue], mode: Aggregate) -> Option<AttrValue> {
    let numeric = || values.iter().map(|v| v.as_int().map(|n| (n, v))).collect::<Option<Vec<_>>>();
    match mode {
        Aggregate::MostCommon => most_common(values),
        Aggregate::Min => numeric()?.into_iter().min_by_key(|p| p.0).map(|p| p.1.clone()),
        Aggregate::Max => numeric()?.into_iter().max_by_key(|p| p.0).map(|p| p.1.clone()),
        Aggregate::Span => {
            let nums = numeric()?;
            let lo = nums.iter().map(|p| p.0).min()?;
            let hi = nums.iter().map(|p| p.0).max()?;
            Some(AttrValue::Int(hi - lo))
        }
    }
}

pub fn line_intersection_count(ix: &GraphIndex, line_a: &str, line_b: &str) -> Result<usize> {
    let a = ix.line_members(ix.line_index(line_a)?);
    let b = ix.line_members(ix.line_index(line_b)?);
    Ok(a.iter().filter(|v| b.contains(v)).count())
}

/// Label with the strictly larger count; `None` on a tie.
pub fn compare_by_count<L>(label_a: L, count_a: usize, label_b: L, count_b: usize) -> Option<L> {
    match count_a.cmp(&count_b) {
        std::cmp::Ordering::Greater => Some(label_a),
        std::cmp::Ordering::Less => Some(label_b),
        std::cmp::Ordering::Equal => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{line, track, transit};
    use crate::model::Stroke;

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn trivial_path() {
        let g = transit(&["A"], &[]);
        let p = shortest_path(&GraphIndex::new(&g), "A", "A", None).unwrap().unwrap();
        assert_eq!((p.node_sequence, p.hop_count), (ids(&["A"]), 0));
    }

    #[test]
    fn path_graph() {
        let g = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        let ix = GraphIndex::new(&g);
        let p = shortest_path(&ix, "A", "C", None).unwrap().unwrap();
        assert_eq!(p.hop_count, 2);
        assert_eq!(count_between(&ix, "A", "C", None).unwrap(), Some(1));
        assert_eq!(count_between(&ix, "A", "B", None).unwrap(), Some(0));
    }

    #[test]
    fn diamond_avoiding_b() {
        let mut g = transit(&["A", "B", "C", "D"], &[("A", "B"), ("B", "D"), ("A", "C"), ("C", "D")]);
        g.nodes[1].attrs.insert("cleanliness".into(), "dirty".into());
        let ix = GraphIndex::new(&g);
        // unconstrained: both routes have 2 hops, lexicographic picks B
        assert_eq!(shortest_path(&ix, "A", "D", None).unwrap().unwrap().node_sequence, ids(&["A", "B", "D"]));
        let avoid = NodePredicate::eq("cleanliness", "dirty");
        assert_eq!(shortest_path(&ix, "A", "D", Some(&avoid)).unwrap().unwrap().node_sequence, ids(&["A", "C", "D"]));
        // endpoints are exempt from the filter
        assert!(shortest_path(&ix, "B", "D", Some(&avoid)).unwrap().is_some());
    }

    #[test]
    fn unreachable_and_unknown() {
        let g = transit(&["A", "B"], &[]);
        let ix = GraphIndex::new(&g);
        assert_eq!(count_between(&ix, "A", "B", None).unwrap(), None);
        assert!(matches!(shortest_path(&ix, "A", "Z", None), Err(ForgeError::UnknownNode(_))));
        assert!(in_cycle(&ix, "Z").is_err());
        assert!(k_hop_count(&ix, "Z", 1).is_err());
    }

    #[test]
    fn routes() {
        let path = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        assert_eq!(distinct_routes(&GraphIndex::new(&path), "A", "C", ROUTE_CAP).unwrap(), Some(1));
        let tri = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C"), ("C", "A")]);
        assert_eq!(distinct_routes(&GraphIndex::new(&tri), "A", "B", ROUTE_CAP).unwrap(), Some(2));
        let k4 = transit(&["A", "B", "C", "D"], &[("A", "B"), ("A", "C"), ("A", "D"), ("B", "C"), ("B", "D"), ("C", "D")]);
        let ix = GraphIndex::new(&k4);
        // direct + 2 via one intermediate + 2 via two intermediates
        assert_eq!(distinct_routes(&ix, "A", "D", ROUTE_CAP).unwrap(), Some(5));
        assert_eq!(distinct_routes(&ix, "A", "D", 4).unwrap(), None);
        assert_eq!(distinct_routes(&ix, "A", "D", 5).unwrap(), Some(5));
    }

    #[test]
    fn cycles() {
        let tree = transit(&["A", "B", "C", "D"], &[("A", "B"), ("B", "C"), ("B", "D")]);
        let ix = GraphIndex::new(&tree);
        assert!(["A", "B", "C", "D"].iter().all(|v| !in_cycle(&ix, v).unwrap()));

        let tri = transit(&["A", "B", "C", "P"], &[("A", "B"), ("B", "C"), ("C", "A"), ("C", "P")]);
        let ix = GraphIndex::new(&tri);
        assert!(["A", "B", "C"].iter().all(|v| in_cycle(&ix, v).unwrap()));
        assert!(!in_cycle(&ix, "P").unwrap());
    }

    #[test]
    fn parallel_edges_are_not_a_cycle() {
        let mut g = transit(&["A", "B"], &[("A", "B")]);
        let blue = line("L1", "blue", Stroke::Solid);
        g.edges.push(track(&blue, "A", "B"));
        g.lines.push(blue);
        assert!(!in_cycle(&GraphIndex::new(&g), "A").unwrap());
    }

    #[test]
    fn hops() {
        let iso = transit(&["A"], &[]);
        assert_eq!(k_hop_count(&GraphIndex::new(&iso), "A", 3).unwrap(), 0);
        let path = transit(&["A", "B", "C", "D"], &[("A", "B"), ("B", "C"), ("C", "D")]);
        assert_eq!(k_hop_count(&GraphIndex::new(&path), "A", 2).unwrap(), 2);
        let star = transit(&["H", "1", "2", "3", "4", "5"], &[("H", "1"), ("H", "2"), ("H", "3"), ("H", "4"), ("H", "5")]);
        assert_eq!(k_hop_count(&GraphIndex::new(&star), "H", 1).unwrap(), 5);
    }

    #[test]
    fn modal_value() {
        assert_eq!(most_common(&["a", "a", "b"]), Some("a"));
        assert_eq!(most_common(&["a", "b"]), None);
        assert_eq!(most_common::<&str>(&[]), None);
    }

    #[test]
    fn line_membership() {
        let single = transit(&["A", "B"], &[("A", "B")]);
        assert_eq!(line_stations(&GraphIndex::new(&single), "L0").unwrap(), ids(&["A", "B"]));
        let two = transit(&["A", "B", "C"], &[("A", "B"), ("B", "C")]);
        assert_eq!(line_stations(&GraphIndex::new(&two), "L0").unwrap(), ids(&["A", "B", "C"]));

        let mut conn = transit(&["A", "B"], &[("A", "B")]);
        let blue = line("L1", "blue", Stroke::Solid);
        conn.edges.push(crate::model::EdgeSpec { is_connector: true, attrs: blue.connector_attrs(), ..track(&blue, "A", "B") });
        conn.lines.push(blue);
        let ix = GraphIndex::new(&conn);
        assert!(line_stations(&ix, "L1").unwrap().is_empty());
        assert!(matches!(line_stations(&ix, "L9"), Err(ForgeError::UnknownLine(_))));
    }

    #[test]
    fn filtering() {
        let mut g = transit(&["A", "B", "C", "D", "E"], &[]);
        for (i, clean) in [true, false, true, true, false].iter().enumerate() {
            g.nodes[i].attrs.insert("cleanliness".into(), if *clean { "clean" } else { "dirty" }.into());
        }
        g.nodes[0].attrs.insert("size".into(), "large".into());
        g.nodes[1].attrs.insert("size".into(), "large".into());
        g.nodes[4].attrs.insert("disabled_access".into(), false.into());
        let ix = GraphIndex::new(&g);
        let all = ids(&["A", "B", "C", "D", "E"]);
        assert_eq!(filter_count(&ix, &[], &[NodePredicate::eq("cleanliness", "clean")]).unwrap(), 0);
        assert_eq!(filter_count(&ix, &all, &[NodePredicate::eq("cleanliness", "clean")]).unwrap(), 3);
        let both = [NodePredicate::eq("size", "large"), NodePredicate::eq("disabled_access", true)];
        let brute = g
            .nodes
            .iter()
            .filter(|n| n.attrs["size"] == "large".into() && n.attrs["disabled_access"] == true.into())
            .count();
        assert_eq!(filter_count(&ix, &all, &both).unwrap(), brute);
        assert_eq!(filter_count(&ix, &all, &[NodePredicate::ne("cleanliness", "clean")]).unwrap(), 2);
    }

    fn year_path() -> GraphSpec {
        let mut old = line("L0", "red", Stroke::Solid);
        old.built = "1900".into();
        let mut new = line("L1", "red", Stroke::Dashed);
        new.built = "1950".into();
        let mut blue = line("L2", "blue", Stroke::Solid);
        blue.built = "1920".into();
        let mut g = transit(&["A", "B", "C", "D"], &[]);
        g.edges = vec![track(&old, "A", "B"), track(&new, "B", "C"), track(&blue, "C", "D")];
        g.lines = vec![old, new, blue];
        g
    }

    #[test]
    fn path_aggregates() {
        let g = year_path();
        let ix = GraphIndex::new(&g);
        let p = |seq: &[&str]| PathResult { node_sequence: ids(seq), hop_count: seq.len() - 1 };
        let built = PathAttr::Edge("line_built");
        assert_eq!(path_attr_aggregate(&ix, &p(&["A", "B"]), built, Aggregate::Span).unwrap(), Some(AttrValue::Int(0)));
        assert_eq!(path_attr_aggregate(&ix, &p(&["A", "B", "C"]), built, Aggregate::Span).unwrap(), Some(AttrValue::Int(50)));
        assert_eq!(path_attr_aggregate(&ix, &p(&["A", "B", "C", "D"]), built, Aggregate::Min).unwrap(), Some("1900".into()));
        assert_eq!(path_attr_aggregate(&ix, &p(&["A", "B", "C", "D"]), built, Aggregate::Max).unwrap(), Some("1950".into()));
        let color = PathAttr::Edge("line_color");
        assert_eq!(path_attr_aggregate(&ix, &p(&["A", "B", "C", "D"]), color, Aggregate::MostCommon).unwrap(), Some("red".into()));
        assert!(path_attr_aggregate(&ix, &p(&["A", "B"]), PathAttr::Edge("nope"), Aggregate::Min).is_err());
        assert_eq!(
            path_attr_aggregate(&ix, &p(&["A", "B"]), PathAttr::Node("music"), Aggregate::MostCommon).unwrap(),
            Some("jazz".into())
        );
    }

    #[test]
    fn intersections_and_comparison() {
        let g = year_path();
        let ix = GraphIndex::new(&g);
        assert_eq!(line_intersection_count(&ix, "L0", "L2").unwrap(), 0);
        assert_eq!(line_intersection_count(&ix, "L0", "L1").unwrap(), 1);
        let mut same = transit(&["A", "B", "C", "D"], &[("A", "B"), ("B", "C"), ("C", "D")]);
        let blue = line("L1", "blue", Stroke::Solid);
        for (a, b) in [("D", "C"), ("C", "B"), ("B", "A")] {
            same.edges.push(track(&blue, a, b));
        }
        same.lines.push(blue);
        assert_eq!(line_intersection_count(&GraphIndex::new(&same), "L0", "L1").unwrap(), 4);

        assert_eq!(compare_by_count("X", 3, "Y", 1), Some("X"));
        assert_eq!(compare_by_count("X", 2, "Y", 2), None);
        assert_eq!(compare_by_count("X", 0, "Y", 1), Some("Y"));
    }
}
