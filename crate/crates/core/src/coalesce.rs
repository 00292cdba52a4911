//! Spatial coalescing: points closer than a threshold collapse into one.
//!
//! The "within threshold" relation is closed transitively with a disjoint-set
//! forest; candidate pairs come from a uniform grid whose cell edge equals the
//! threshold, so only the 3x3 block around each point is scanned.

use std::collections::{BTreeMap, HashMap};

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Maps each provisional id to the id of the node that survived its merge class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeMap {
    pub representative: BTreeMap<String, String>,
}

impl MergeMap {
    pub fn resolve(&self, provisional_id: &str) -> Option<&str> {
        self.representative.get(provisional_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }
}

fn close(dx: f64, dy: f64, threshold: f64) -> bool {
    dx * dx + dy * dy <= threshold * threshold
}

/// Partitions `points` by the transitive closure of `dist <= threshold`.
///
/// Returns, for every point, the index of its class representative: the
/// member whose id is lexicographically smallest.
pub fn merge_classes(points: &[(f64, f64)], ids: &[&str], threshold: f64) -> Vec<usize> {
    assert_eq!(points.len(), ids.len());
    let n = points.len();
    let mut uf = UnionFind::new(n);

    if threshold > 0.0 {
        let cell = |v: f64| (v / threshold).floor() as i64;
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            grid.entry((cell(x), cell(y))).or_default().push(i);
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            let (cx, cy) = (cell(x), cell(y));
            for gx in cx - 1..=cx + 1 {
                for gy in cy - 1..=cy + 1 {
                    let Some(bucket) = grid.get(&(gx, gy)) else { continue };
                    for &j in bucket {
                        if j > i && close(points[j].0 - x, points[j].1 - y, threshold) {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
    } else {
        // zero threshold: only coincident points merge
        let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let key = ((x + 0.0).to_bits(), (y + 0.0).to_bits());
            match seen.get(&key) {
                Some(&j) => uf.union(i, j),
                None => {
                    seen.insert(key, i);
                }
            }
        }
    }

    let mut best: HashMap<usize, usize> = HashMap::new();
    for i in 0..n {
        let root = uf.find(i);
        best.entry(root)
            .and_modify(|cur| {
                if ids[i] < ids[*cur] {
                    *cur = i;
                }
            })
            .or_insert(i);
    }
    (0..n).map(|i| best[&uf.find(i)]).collect()
}
