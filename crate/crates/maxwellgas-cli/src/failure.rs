//! Failures of a run, their exit codes and their machine-readable form.

use std::fmt;

use serde_json::{json, Value};

use crate::config::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_POSITIVITY: i32 = 2;
pub const EXIT_QUADRATURE: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// The configuration, command line or environment is invalid.
    Config(Vec<String>),
    /// The library rejected an input or aborted a computation.
    Model(maxwellgas::Error),
    /// At least one check of the verification suite failed.
    Verification(Vec<String>),
    /// A run artifact that should exist is missing or unreadable.
    MissingArtifact(String),
    /// Writing an artifact failed.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use maxwellgas::Error as E;
        match self {
            CliError::Config(_) | CliError::MissingArtifact(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Model(E::Positivity { .. } | E::DegenerateMoments(_)) => EXIT_POSITIVITY,
            CliError::Model(E::Quadrature { .. } | E::Normalization { .. }) => EXIT_QUADRATURE,
            CliError::Model(E::Domain(_) | E::Cfl { .. } | E::WindowTooShort { .. }) => EXIT_CONFIG,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }

    pub fn kind(&self) -> &'static str {
        use maxwellgas::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Model(E::Positivity { .. }) => "positivity",
            CliError::Model(E::DegenerateMoments(_)) => "degenerate_moments",
            CliError::Model(E::Quadrature { .. }) => "quadrature",
            CliError::Model(E::Normalization { .. }) => "normalization",
            CliError::Model(E::Domain(_)) => "domain",
            CliError::Model(E::Cfl { .. }) => "cfl",
            CliError::Model(E::WindowTooShort { .. }) => "window_too_short",
            CliError::Verification(_) => "verification",
            CliError::MissingArtifact(_) => "missing_artifact",
            CliError::Io(_) => "io",
        }
    }

    /// Individual messages: one per configuration problem or failed check.
    pub fn details(&self) -> Vec<String> {
        match self {
            CliError::Config(e) | CliError::Verification(e) => e.clone(),
            other => vec![other.to_string()],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exit_code": self.exit_code(),
            "kind": self.kind(),
            "message": self.to_string(),
            "errors": self.details(),
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "invalid configuration: {}", e.join("; ")),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Verification(e) => write!(f, "verification failed: {}", e.join("; ")),
            CliError::MissingArtifact(m) => write!(f, "missing artifact: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.errors)
    }
}

impl From<maxwellgas::Error> for CliError {
    fn from(e: maxwellgas::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
