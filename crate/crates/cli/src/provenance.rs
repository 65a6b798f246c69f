use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Embedded in every artifact. The timestamp is only filled from
/// `SOURCE_DATE_EPOCH`, so repeated runs stay byte-identical by default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn for_config(cfg: &RunConfig) -> Self {
        Self {
            tool: "dgbo".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config_hash: cfg.hash(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH")
                .ok()
                .and_then(|s| s.trim().parse().ok()),
        }
    }
}
