use std::path::PathBuf;

/// Errors from simulation, IO and configuration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Error from the numerical core.
    #[error(transparent)]
    Core(#[from] fibercap_core::Error),

    /// Noiseless power changed by more than the guard allows in one step.
    #[error("split-step unstable at step {step}: relative power change {rel_change:e}")]
    Unstable {
        /// Zero-based step index.
        step: usize,
        /// `|P_after − P_before| / P_before`.
        rel_change: f64,
    },

    /// Config file could not be parsed or holds invalid values.
    #[error("bad config: {0}")]
    Config(String),

    /// Malformed snapshot file.
    #[error("bad snapshot: {0}")]
    Snapshot(&'static str),

    /// Filesystem error.
    #[error("{}: {source}", path.display())]
    Io {
        /// File involved.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, Error>;
