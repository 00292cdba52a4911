//! Synthetic graph question-answering benchmarks.
//!
//! Generates transit maps and computer networks, instantiates question
//! templates whose answers come from graph-algorithm oracles, renders graphs
//! and questions as text prompts, and scores model predictions.
//!
//! ```
//! use clegr_core::config::DatasetConfig;
//! use clegr_core::forge::build_dataset;
//!
//! let cfg = DatasetConfig { n_graphs: 2, ..DatasetConfig::default() };
//! let ds = build_dataset(&cfg, 1).unwrap();
//! assert_eq!(ds.records.len(), 2 * 44);
//! ```

pub mod cli;
pub mod coalesce;
pub mod config;
pub mod error;
pub mod eval;
pub mod forge;
pub mod io;
pub mod model;
pub mod network;
pub mod oracles;
pub mod rng;
pub mod templates;
pub mod textualize;
pub mod transit;
pub mod vocab;

pub use error::{ForgeError, Result};
pub use model::{Domain, EdgeSpec, GraphSpec, LineSpec, NodeSpec, SizeClass};
