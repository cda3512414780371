//! Scenario files: which triple, which checks, which tolerances.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::report::registry;
use crate::tolerance::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;
/// Largest seed a scenario file can carry.
pub const MAX_SEED: u64 = i64::MAX as u64;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub name: String,
    /// Default triple for checks that do not name one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub check: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, toml::Value>,
}

impl CheckSpec {
    pub fn new(check: &str) -> Self {
        Self { check: check.to_string(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<toml::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

impl Scenario {
    pub fn new(name: &str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            name: name.to_string(),
            triple: None,
            seed: 0,
            tolerances: Tolerances::default(),
            output: None,
            checks: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("schema {} is not supported (expected {SCHEMA_VERSION})", self.schema)));
        }
        // TOML integers are signed 64-bit
        if self.seed > MAX_SEED {
            return Err(Error::Parse(format!("seed {} exceeds {MAX_SEED}", self.seed)));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("kernel", t.kernel),
            ("quad", t.quad),
            ("cert", t.cert),
            ("cert_third", t.cert_third),
            ("psd_slack", t.psd_slack),
            ("constancy", t.constancy),
            ("ode", t.ode),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parse(format!("tolerance {name} must be positive (got {v})")));
            }
        }
        for c in &self.checks {
            let info = registry::lookup(&c.check)?;
            for key in c.params.keys() {
                if !info.params.iter().any(|p| p.name == key) {
                    return Err(Error::Parse(format!("check '{}' has no parameter '{key}'", c.check)));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical TOML form, hex encoded.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_toml()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}
