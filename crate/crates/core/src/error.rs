use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("unknown node id `{0}`")]
    UnknownNode(String),

    #[error("unknown line id `{0}`")]
    UnknownLine(String),

    #[error("cannot draw {requested} lines: only {capacity} distinct color/stroke pairs exist")]
    LineCapacity { requested: usize, capacity: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0} is not defined for the {1} domain")]
    WrongDomain(&'static str, crate::model::Domain),

    #[error("attribute `{key}` missing on {entity}")]
    MissingAttribute { key: String, entity: String },

    #[error("edge {index} references a node that does not exist")]
    DanglingEdge { index: usize },

    #[error("question does not belong to this graph: {0}")]
    Mismatch(String),

    #[error("cannot aggregate an empty set of records")]
    EmptyInput,

    #[error("duplicate template id `{0}`")]
    DuplicateTemplate(String),

    #[error("unknown template id `{0}`")]
    UnknownTemplate(String),

    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = ForgeError> = std::result::Result<T, E>;
