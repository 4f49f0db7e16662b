use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::agents::{AgentClient, Mode};
use crate::error::{Error, Result};
use crate::pool::PoolConfig;
use crate::supervision::ScoreConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticKind {
    #[default]
    Rule,
    Llm,
}

/// Where asset meshes come from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssetSource {
    /// The cache under `cache_dir`; misses are filled with offline meshes
    /// and stored.
    Cache,
    /// Offline meshes chosen from the asset name.
    #[default]
    Primitives,
    /// Read-only directory of `<name>.glb`; a missing file is an error.
    Directory(PathBuf),
}

impl AssetSource {
    pub fn label(&self) -> String {
        match self {
            AssetSource::Cache => "cache".into(),
            AssetSource::Primitives => "primitives".into(),
            AssetSource::Directory(p) => format!("dir:{}", p.display()),
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "cache" => Some(AssetSource::Cache),
            "primitives" => Some(AssetSource::Primitives),
            _ => s.strip_prefix("dir:").map(|p| AssetSource::Directory(PathBuf::from(p))),
        }
    }
}

/// Language-agent endpoint settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key_env: String,
    /// "live", "replay" or "record".
    pub mode: String,
    pub transcript: Option<PathBuf>,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4o".into(),
            api_key_env: "OPENAI_API_KEY".into(),
            mode: "replay".into(),
            transcript: None,
        }
    }
}

impl AgentConfig {
    pub fn client(&self) -> Result<AgentClient> {
        let mode = Mode::parse(&self.mode).ok_or_else(|| Error::Config(format!("unknown agent mode '{}'", self.mode)))?;
        if mode != Mode::Live && self.transcript.is_none() {
            return Err(Error::Config(format!("agent mode '{}' needs a transcript path", self.mode)));
        }
        Ok(AgentClient::new(&self.endpoint, &self.model, &self.api_key_env, mode, self.transcript.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub pool: PoolConfig,
    pub score: ScoreConfig,
    pub critic: CriticKind,
    pub asset_source: AssetSource,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
    /// Reserved for randomized tessellation; the built-in meshes ignore it.
    pub seed: u64,
    /// Used by the language critic, relation classification fallback and
    /// extraction from free text.
    pub agent: Option<AgentConfig>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            pool: PoolConfig::default(),
            score: ScoreConfig::default(),
            critic: CriticKind::Rule,
            asset_source: AssetSource::Primitives,
            cache_dir: PathBuf::from("asset_cache"),
            output_dir: PathBuf::from("out"),
            seed: 0,
            agent: None,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let cfg: PipelineConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.pool.validate()?;
        self.score.validate()?;
        if let AssetSource::Directory(dir) = &self.asset_source {
            if !dir.is_dir() {
                return Err(Error::Config(format!("asset directory {} does not exist", dir.display())));
            }
        }
        if self.critic == CriticKind::Llm && self.agent.is_none() {
            return Err(Error::Config("the llm critic needs an 'agent' section".into()));
        }
        Ok(())
    }

    pub fn agent_client(&self) -> Result<Option<AgentClient>> {
        self.agent.as_ref().map(AgentConfig::client).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn source_serde_shapes() {
        let c: PipelineConfig = serde_json::from_str(r#"{"asset_source": {"directory": "/tmp"}, "critic": "llm"}"#).unwrap();
        assert_eq!(c.asset_source, AssetSource::Directory("/tmp".into()));
        assert_eq!(c.critic, CriticKind::Llm);
        let c: PipelineConfig = serde_json::from_str(r#"{"asset_source": "cache"}"#).unwrap();
        assert_eq!(c.asset_source, AssetSource::Cache);
        assert_eq!(c.score.delta_max, 0.5);
    }

    #[test]
    fn source_labels_round_trip() {
        for s in [AssetSource::Cache, AssetSource::Primitives, AssetSource::Directory("/a b".into())] {
            assert_eq!(AssetSource::from_label(&s.label()), Some(s));
        }
    }
}
