use thiserror::Error;

/// Errors surfaced by the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a numerical routine.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A requested allocation or traversal exceeds what can be served.
    #[error("resource error: {0}")]
    Resource(String),

    /// Invalid configuration or mismatched inputs.
    #[error("usage error: {0}")]
    Usage(String),

    /// A replication failed; carries the replication index.
    #[error("replication {rep}: {source}")]
    Replication {
        rep: u64,
        #[source]
        source: Box<Error>,
    },

    /// The visitor passed to a streaming generator asked to stop.
    #[error("stream aborted by visitor at node {0}")]
    Aborted(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported record format version {found} (this build reads up to {supported})")]
    Version { found: u32, supported: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
