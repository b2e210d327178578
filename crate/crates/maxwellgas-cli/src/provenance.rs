//! Provenance stamped on every artifact.  Nothing time- or host-dependent
//! goes in, so identical inputs give identical bytes.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Mode, TransportSettings};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub mode: String,
    pub seed: u64,
    pub library: String,
    pub library_version: String,
    pub cli_version: String,
    pub quad_tol: f64,
    pub kappa_max: f64,
}

impl Provenance {
    pub fn new(config_text: &str, mode: Mode, seed: u64, transport: &TransportSettings) -> Self {
        Self {
            config_sha256: hex::encode(Sha256::digest(config_text.as_bytes())),
            mode: mode.name().to_string(),
            seed,
            library: "maxwellgas".into(),
            library_version: maxwellgas::VERSION.into(),
            cli_version: env!("CARGO_PKG_VERSION").into(),
            quad_tol: transport.quad_tol,
            kappa_max: transport.kappa_max,
        }
    }

    /// Lines for text artifacts; writers prefix each with `# `.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("{} {} (cli {})", self.library, self.library_version, self.cli_version),
            format!("config sha256 {}", self.config_sha256),
            format!("mode {} seed {}", self.mode, self.seed),
            format!("quadrature quad_tol {:e} kappa_max {}", self.quad_tol, self.kappa_max),
        ]
    }
}
