//! Server configuration read from TOML.
//!
//! ```toml
//! port = 8080
//! data_dir = "survey-data"
//! high_rd_sampling = false
//! seed = 7
//! static_dir = "www"
//!
//! [datasets]
//! lomas = "data/lomas.csv"
//! ```
//!
//! Relative paths resolve against the directory holding the config file.

use std::collections::BTreeMap;
use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::ServiceError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    #[serde(default = "default_host")]
    pub host: IpAddr,
    #[serde(default = "default_port")]
    pub port: u16,
    /// Directory for the append-only session, issue and event logs.
    #[serde(default = "default_data_dir")]
    pub data_dir: PathBuf,
    /// Dataset name to manifest path.
    pub datasets: BTreeMap<String, PathBuf>,
    /// Prefer images with high rating deviation when drawing pairs.
    #[serde(default)]
    pub high_rd_sampling: bool,
    /// Fixed RNG seed for pair draws; random when absent.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Optional directory served at `/` (the survey front end).
    #[serde(default)]
    pub static_dir: Option<PathBuf>,
}

fn default_host() -> IpAddr {
    IpAddr::V4(Ipv4Addr::LOCALHOST)
}

fn default_port() -> u16 {
    8080
}

fn default_data_dir() -> PathBuf {
    PathBuf::from("survey-data")
}

impl ServiceConfig {
    /// Config with default settings for the given datasets.
    pub fn new(datasets: BTreeMap<String, PathBuf>, data_dir: impl Into<PathBuf>) -> Self {
        Self {
            host: default_host(),
            port: default_port(),
            data_dir: data_dir.into(),
            datasets,
            high_rd_sampling: false,
            seed: None,
            static_dir: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ServiceError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn from_toml(text: &str, base: &Path) -> Result<Self, ServiceError> {
        let mut cfg: ServiceConfig = toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut cfg.data_dir);
        cfg.datasets.values_mut().for_each(resolve);
        if let Some(dir) = cfg.static_dir.as_mut() {
            resolve(dir);
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves_paths() {
        let cfg = ServiceConfig::from_toml(
            "port = 9000\nseed = 3\n[datasets]\nlomas = \"m/lomas.csv\"\nabs = \"/x/y.csv\"\n",
            Path::new("/srv"),
        )
        .unwrap();
        assert_eq!(cfg.port, 9000);
        assert_eq!(cfg.seed, Some(3));
        assert!(!cfg.high_rd_sampling);
        assert_eq!(cfg.data_dir, PathBuf::from("/srv/survey-data"));
        assert_eq!(cfg.datasets["lomas"], PathBuf::from("/srv/m/lomas.csv"));
        assert_eq!(cfg.datasets["abs"], PathBuf::from("/x/y.csv"));
    }

    #[test]
    fn rejects_unknown_keys_and_missing_datasets() {
        assert!(ServiceConfig::from_toml("prot = 1\n[datasets]\n", Path::new(".")).is_err());
        assert!(ServiceConfig::from_toml("port = 1\n", Path::new(".")).is_err());
    }
}
