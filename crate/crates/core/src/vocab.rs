//! Closed attribute vocabularies and per-domain attribute schemas.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::model::{AttrValue, Attrs, Domain};

pub const MUSIC: &[&str] = &["classical", "rock", "jazz", "pop", "electronic", "none"];
pub const ARCHITECTURE: &[&str] = &["victorian", "modernist", "art_deco", "brutalist", "futuristic"];
pub const SIZE: &[&str] = &["small", "medium", "large"];
pub const CLEANLINESS: &[&str] = &["clean", "dirty"];

pub const COLORS: &[&str] = &[
    "red", "blue", "green", "yellow", "orange", "purple", "pink", "brown", "grey", "black", "cyan",
    "white",
];
pub const STROKES: &[&str] = &["solid", "dashed", "dotted"];
pub const BUILT_MIN: i64 = 1850;
pub const BUILT_MAX: i64 = 2020;

pub const STATUS: &[&str] = &["Operational", "Offline", "Overloaded"];
pub const SECURITY_LEVEL: &[&str] = &["Public", "Internal", "Restricted"];
pub const LOCATION_SECTOR: &[&str] = &["Sector_Red", "Sector_Blue", "Sector_Green", "Sector_Yellow"];
pub const FIRMWARE: &[&str] = &["v1.0", "v1.1", "v2.0", "v2.1"];
pub const ENCRYPTION: &[&str] = &["Encrypted", "Unencrypted"];
pub const BANDWIDTH: (i64, i64) = (1, 100);
pub const LATENCY_MS: (i64, i64) = (1, 500);
pub const POWER: (i64, i64) = (1, 50);

pub const STATION_ADJECTIVES: &[&str] = &[
    "Amber", "Bright", "Cedar", "Copper", "Crystal", "Eagle", "Elm", "Fern", "Golden", "Granite",
    "Harbor", "Hazel", "Iron", "Ivy", "Juniper", "Lantern", "Maple", "Meadow", "North", "Oak",
    "Pine", "Quarry", "Raven", "Silver",
];
pub const STATION_NOUNS: &[&str] = &[
    "Bridge", "Court", "Cross", "Dale", "Fields", "Gate", "Green", "Grove", "Heath", "Hill",
    "Lane", "Market", "Mill", "Park", "Place", "Point", "Quay", "Rise", "Row", "Square", "Street",
    "Vale", "Wharf", "Yard",
];
pub const LINE_WORDS: &[&str] = &[
    "Aurora", "Beacon", "Canal", "Circle", "Comet", "Coastal", "Delta", "Ember", "Falcon",
    "Forest", "Glacier", "Horizon", "Jubilee", "Kestrel", "Lagoon", "Meridian", "Metro", "Orbit",
    "Pioneer", "Prairie", "Quartz", "Ridge", "River", "Sapphire", "Sierra", "Summit", "Thistle",
    "Tundra", "Valley", "Willow",
];
pub const LINE_SUFFIXES: &[&str] = &["Line", "Express"];
pub const HOST_PREFIXES: &[&str] = &["core", "edge", "gw", "db", "app", "cache", "auth", "fw"];
pub const HOST_WORDS: &[&str] = &[
    "alpha", "bravo", "cobalt", "delta", "ember", "falcon", "granite", "helix", "indigo", "jade",
    "krypton", "lumen", "magma", "nova", "onyx", "pulsar", "quasar", "rook", "sable", "titan",
    "umbra", "vega", "wraith", "xenon", "zephyr",
];

/// Value domain of one attribute key.
#[derive(Clone, Copy, Debug)]
pub enum AttrKind {
    Bool,
    Choice(&'static [&'static str]),
    IntRange(i64, i64),
    /// Decimal year string within the inclusive range.
    Year(i64, i64),
    /// Free text (e.g. a line name copied onto an edge).
    Text,
}

impl AttrKind {
    pub fn admits(&self, value: &AttrValue) -> bool {
        match (self, value) {
            (AttrKind::Bool, AttrValue::Bool(_)) => true,
            (AttrKind::Choice(options), AttrValue::Str(s)) => options.contains(&s.as_str()),
            (AttrKind::IntRange(lo, hi), AttrValue::Int(v)) => (lo..=hi).contains(&v),
            (AttrKind::Year(lo, hi), AttrValue::Str(s)) => {
                s.parse::<i64>().is_ok_and(|y| (*lo..=*hi).contains(&y))
            }
            (AttrKind::Text, AttrValue::Str(_)) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AttrField {
    pub key: &'static str,
    pub kind: AttrKind,
}

const fn field(key: &'static str, kind: AttrKind) -> AttrField {
    AttrField { key, kind }
}

pub const STATION_SCHEMA: &[AttrField] = &[
    field("disabled_access", AttrKind::Bool),
    field("has_rail", AttrKind::Bool),
    field("music", AttrKind::Choice(MUSIC)),
    field("architecture", AttrKind::Choice(ARCHITECTURE)),
    field("size", AttrKind::Choice(SIZE)),
    field("cleanliness", AttrKind::Choice(CLEANLINESS)),
];

pub const SYSTEM_NODE_SCHEMA: &[AttrField] = &[
    field("status", AttrKind::Choice(STATUS)),
    field("security_level", AttrKind::Choice(SECURITY_LEVEL)),
    field("location_sector", AttrKind::Choice(LOCATION_SECTOR)),
    field("firmware_version", AttrKind::Choice(FIRMWARE)),
    field("power_consumption_units", AttrKind::IntRange(POWER.0, POWER.1)),
];

pub const TRACK_SCHEMA: &[AttrField] = &[
    field("line_name", AttrKind::Text),
    field("line_color", AttrKind::Choice(COLORS)),
    field("line_stroke", AttrKind::Choice(STROKES)),
    field("line_has_aircon", AttrKind::Bool),
    field("line_built", AttrKind::Year(BUILT_MIN, BUILT_MAX)),
];

pub const LINK_SCHEMA: &[AttrField] = &[
    field("bandwidth_units", AttrKind::IntRange(BANDWIDTH.0, BANDWIDTH.1)),
    field("latency_ms", AttrKind::IntRange(LATENCY_MS.0, LATENCY_MS.1)),
    field("encryption_status", AttrKind::Choice(ENCRYPTION)),
];

pub fn node_schema(domain: Domain) -> &'static [AttrField] {
    match domain {
        Domain::Transit => STATION_SCHEMA,
        Domain::Network => SYSTEM_NODE_SCHEMA,
    }
}

pub fn edge_schema(domain: Domain) -> &'static [AttrField] {
    match domain {
        Domain::Transit => TRACK_SCHEMA,
        Domain::Network => LINK_SCHEMA,
    }
}

/// Draws every sampled key of `schema` uniformly from its vocabulary.
/// `Text` keys are copied from elsewhere and are skipped.
pub fn sample_attrs(schema: &[AttrField], rng: &mut impl Rng) -> Attrs {
    let mut attrs = Attrs::new();
    for field in schema {
        let value = match field.kind {
            AttrKind::Bool => AttrValue::Bool(rng.random_bool(0.5)),
            AttrKind::Choice(options) => AttrValue::Str(options.choose(rng).expect("non-empty").to_string()),
            AttrKind::IntRange(lo, hi) => AttrValue::Int(rng.random_range(lo..=hi)),
            AttrKind::Year(lo, hi) => AttrValue::Str(rng.random_range(lo..=hi).to_string()),
            AttrKind::Text => continue,
        };
        attrs.insert(field.key.to_string(), value);
    }
    attrs
}

/// Shuffled, draw-without-replacement supply of unique names.
#[derive(Clone, Debug)]
pub struct NamePool {
    names: Vec<String>,
}

impl NamePool {
    pub fn new(mut names: Vec<String>, rng: &mut impl Rng) -> Self {
        names.shuffle(rng);
        names.reverse();
        NamePool { names }
    }

    /// Adjective + noun station names ("Maple Cross").
    pub fn stations(rng: &mut impl Rng) -> Self {
        Self::new(combine(STATION_ADJECTIVES, STATION_NOUNS, " "), rng)
    }

    /// Word + suffix line names ("Harbor Express").
    pub fn lines(rng: &mut impl Rng) -> Self {
        Self::new(combine(LINE_WORDS, LINE_SUFFIXES, " "), rng)
    }

    /// Prefix + word host names ("core-falcon").
    pub fn hosts(rng: &mut impl Rng) -> Self {
        Self::new(combine(HOST_PREFIXES, HOST_WORDS, "-"), rng)
    }

    pub fn remaining(&self) -> usize {
        self.names.len()
    }

    pub fn take(&mut self) -> Option<String> {
        self.names.pop()
    }
}

pub fn combine(first: &[&str], second: &[&str], sep: &str) -> Vec<String> {
    first
        .iter()
        .flat_map(|a| second.iter().map(move |b| format!("{a}{sep}{b}")))
        .collect()
}
