//! Generation parameters: concrete per-graph [`GenConfig`], the per-size-class
//! [`GraphProfile`] ranges it is drawn from, and the flat dataset config file.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ForgeError, Result};
use crate::model::{Domain, SizeClass};
use crate::rng::seeded_rng;
use crate::templates::Subset;
use crate::vocab;

/// Parameters of one graph. Every field is fixed; ranges live in [`GraphProfile`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub domain: Domain,
    pub size_class: SizeClass,
    pub n_lines: usize,
    pub stations_per_line: usize,
    pub map_radius: f64,
    pub merge_threshold: f64,
    pub coord_noise_sigma: f64,
    pub avg_degree: f64,
    pub n_nodes: usize,
    pub integer_names: bool,
    pub seed: u64,
}

impl GenConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(ForgeError::Config(msg.to_string()));
        match self.domain {
            Domain::Transit if self.n_lines < 1 => return bad("n_lines must be at least 1"),
            Domain::Transit if self.stations_per_line < 2 => return bad("stations_per_line must be at least 2"),
            Domain::Network if self.n_nodes < 1 => return bad("n_nodes must be at least 1"),
            Domain::Network if self.avg_degree < 1.0 => return bad("avg_degree must be at least 1"),
            _ => {}
        }
        if !(self.map_radius > 0.0) {
            return bad("map_radius must be positive");
        }
        if !(self.merge_threshold >= 0.0) {
            return bad("merge_threshold must be non-negative");
        }
        if !(self.coord_noise_sigma >= 0.0) {
            return bad("coord_noise_sigma must be non-negative");
        }
        Ok(())
    }
}

/// Inclusive integer range a per-graph count is drawn from uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: usize,
}

impl CountRange {
    pub const fn new(min: usize, max: usize) -> Self {
        CountRange { min, max }
    }

    fn draw(self, rng: &mut impl Rng) -> usize {
        rng.random_range(self.min..=self.max)
    }
}

/// Distribution of [`GenConfig`]s for one (domain, size class).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphProfile {
    pub domain: Domain,
    pub size_class: SizeClass,
    pub n_lines: CountRange,
    pub stations_per_line: CountRange,
    pub n_nodes: CountRange,
    pub map_radius: f64,
    pub merge_threshold: f64,
    pub coord_noise_sigma: f64,
    pub avg_degree: f64,
    pub integer_names: bool,
}

// Tuned against 500-graph sweeps of mean node and edge counts.
const TRANSIT_RADIUS: f64 = 10.0;
const TRANSIT_MERGE_STANDARD: f64 = 0.95;
const TRANSIT_RADIUS_LARGE: f64 = 20.0;
const TRANSIT_MERGE_LARGE: f64 = 0.8;
const NETWORK_RADIUS: f64 = 10.0;
const NETWORK_MERGE: f64 = 1.1;
const NETWORK_AVG_DEGREE: f64 = 4.0;

impl GraphProfile {
    pub fn default_for(domain: Domain, size_class: SizeClass) -> Self {
        let (n_lines, stations, radius, merge) = match size_class {
            SizeClass::Standard => (CountRange::new(4, 8), CountRange::new(5, 8), TRANSIT_RADIUS, TRANSIT_MERGE_STANDARD),
            SizeClass::Large => (CountRange::new(8, 12), CountRange::new(7, 10), TRANSIT_RADIUS_LARGE, TRANSIT_MERGE_LARGE),
        };
        let n_nodes = match size_class {
            SizeClass::Standard => CountRange::new(20, 28),
            SizeClass::Large => CountRange::new(60, 84),
        };
        let (map_radius, merge_threshold) = match domain {
            Domain::Transit => (radius, merge),
            Domain::Network => match size_class {
                SizeClass::Standard => (NETWORK_RADIUS, NETWORK_MERGE),
                SizeClass::Large => (NETWORK_RADIUS * 1.7, NETWORK_MERGE),
            },
        };
        GraphProfile {
            domain,
            size_class,
            n_lines,
            stations_per_line: stations,
            n_nodes,
            map_radius,
            merge_threshold,
            coord_noise_sigma: map_radius / 50.0,
            avg_degree: NETWORK_AVG_DEGREE,
            integer_names: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("n_lines", self.n_lines), ("stations_per_line", self.stations_per_line), ("n_nodes", self.n_nodes)] {
            if r.min > r.max {
                return Err(ForgeError::Config(format!("{name}: min exceeds max")));
            }
        }
        let capacity = vocab::COLORS.len() * vocab::STROKES.len();
        if self.domain == Domain::Transit && self.n_lines.max > capacity {
            return Err(ForgeError::LineCapacity { requested: self.n_lines.max, capacity });
        }
        self.sample(0).validate()
    }

    /// Draws the concrete config of the graph with the given seed.
    pub fn sample(&self, graph_seed: u64) -> GenConfig {
        let mut rng = seeded_rng(graph_seed, "config");
        let n_lines = self.n_lines.draw(&mut rng);
        let stations_per_line = self.stations_per_line.draw(&mut rng);
        let n_nodes = self.n_nodes.draw(&mut rng);
        GenConfig {
            domain: self.domain,
            size_class: self.size_class,
            n_lines,
            stations_per_line,
            map_radius: self.map_radius,
            merge_threshold: self.merge_threshold,
            coord_noise_sigma: self.coord_noise_sigma,
            avg_degree: self.avg_degree,
            n_nodes,
            integer_names: self.integer_names,
            seed: graph_seed,
        }
    }
}

/// Flat key-value dataset configuration (TOML syntax). Unset generator keys
/// fall back to the [`GraphProfile`] defaults for the domain and size class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    #[serde(default = "default_domain")]
    pub domain: Domain,
    #[serde(default)]
    pub size_class: SizeClass,
    #[serde(default = "default_subset")]
    pub subset: Subset,
    #[serde(default = "default_n_graphs")]
    pub n_graphs: usize,
    #[serde(default = "default_per_template")]
    pub per_template: usize,
    #[serde(default)]
    pub seed: u64,
    /// Seed of the train/validation/test shuffle; defaults to `seed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_seed: Option<u64>,
    #[serde(default)]
    pub integer_names: bool,
    /// Ids of optional templates to add to the built-in registry.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_templates: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_lines_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_lines_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stations_per_line_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stations_per_line_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_nodes_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_nodes_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merge_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord_noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub avg_degree: Option<f64>,
}

fn default_domain() -> Domain {
    Domain::Transit
}
fn default_subset() -> Subset {
    Subset::Facts
}
fn default_n_graphs() -> usize {
    500
}
fn default_per_template() -> usize {
    2
}

impl Default for DatasetConfig {
    fn default() -> Self {
        toml::from_str("").expect("all keys have defaults")
    }
}

impl DatasetConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: DatasetConfig = toml::from_str(text).map_err(|e| ForgeError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_graphs == 0 {
            return Err(ForgeError::Config("n_graphs must be at least 1".into()));
        }
        if self.per_template == 0 {
            return Err(ForgeError::Config("per_template must be at least 1".into()));
        }
        self.profile().validate()
    }

    pub fn split_seed(&self) -> u64 {
        self.split_seed.unwrap_or(self.seed)
    }

    pub fn profile(&self) -> GraphProfile {
        let mut p = GraphProfile::default_for(self.domain, self.size_class);
        let pick = |v: Option<usize>, d: usize| v.unwrap_or(d);
        p.n_lines = CountRange::new(pick(self.n_lines_min, p.n_lines.min), pick(self.n_lines_max, p.n_lines.max));
        p.stations_per_line = CountRange::new(
            pick(self.stations_per_line_min, p.stations_per_line.min),
            pick(self.stations_per_line_max, p.stations_per_line.max),
        );
        p.n_nodes = CountRange::new(pick(self.n_nodes_min, p.n_nodes.min), pick(self.n_nodes_max, p.n_nodes.max));
        if let Some(r) = self.map_radius {
            p.map_radius = r;
            p.coord_noise_sigma = r / 50.0;
        }
        if let Some(t) = self.merge_threshold {
            p.merge_threshold = t;
        }
        if let Some(s) = self.coord_noise_sigma {
            p.coord_noise_sigma = s;
        }
        if let Some(d) = self.avg_degree {
            p.avg_degree = d;
        }
        p.integer_names = self.integer_names;
        p
    }

    /// Documented defaults, one `key = value` per line.
    pub fn describe_defaults() -> String {
        let p = GraphProfile::default_for(Domain::Transit, SizeClass::Standard);
        let n = GraphProfile::default_for(Domain::Network, SizeClass::Standard);
        format!(
            "domain = \"transit\"            # transit | network\n\
             size_class = \"standard\"       # standard | large\n\
             subset = \"facts\"              # facts | reasoning\n\
             n_graphs = 500\n\
             per_template = 2\n\
             seed = 0\n\
             split_seed = <seed>\n\
             integer_names = false\n\
             extra_templates = []           # e.g. [\"StationSameLine\"]\n\
             n_lines_min = {} / n_lines_max = {}   (large: 8 / 12)\n\
             stations_per_line_min = {} / stations_per_line_max = {}   (large: 7 / 10)\n\
             n_nodes_min = {} / n_nodes_max = {}   (network)\n\
             map_radius = {}   (large transit: {})\n\
             merge_threshold = {}   (large transit: {}; network: {})\n\
             coord_noise_sigma = map_radius / 50\n\
             avg_degree = {}   (network; k = round(avg_degree / 2))\n",
            p.n_lines.min,
            p.n_lines.max,
            p.stations_per_line.min,
            p.stations_per_line.max,
            n.n_nodes.min,
            n.n_nodes.max,
            p.map_radius,
            TRANSIT_RADIUS_LARGE,
            p.merge_threshold,
            TRANSIT_MERGE_LARGE,
            n.merge_threshold,
            n.avg_degree,
        )
    }
}
