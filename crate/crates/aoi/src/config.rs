//! JSON system configuration.
//!
//! ```json
//! {"n_type1": 2, "mu": [1.0, 2.0], "m_type2": 1, "lambda": [0.5]}
//! {"n_type1": 10, "mu_each": 1.0, "m_type2": 3, "lambda_each": 0.2}
//! ```
//!
//! Devices are numbered from 1 in the order of the rate vectors; the single
//! aggregated type-2 device of the models is number `n_type1 + 1`.

use std::fs;
use std::path::Path;

use aoi_core::SystemConfig;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n_type1: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_each: Option<f64>,
    #[serde(default)]
    pub m_type2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_each: Option<f64>,
}

fn expand(
    what: &str,
    count: usize,
    list: &Option<Vec<f64>>,
    each: Option<f64>,
) -> Result<Vec<f64>> {
    match (list, each) {
        (Some(_), Some(_)) => Err(AppError::Config(format!(
            "give either `{what}` or `{what}_each`, not both"
        ))),
        (Some(v), None) if v.len() == count => Ok(v.clone()),
        (Some(v), None) => Err(AppError::Config(format!(
            "`{what}` has {} entries for {count} devices",
            v.len()
        ))),
        (None, Some(x)) => Ok(vec![x; count]),
        (None, None) if count == 0 => Ok(Vec::new()),
        (None, None) => Err(AppError::Config(format!(
            "missing `{what}` or `{what}_each` for {count} devices"
        ))),
    }
}

impl ConfigFile {
    /// Explicit rate vectors for `system`.
    pub fn from_system(system: &SystemConfig) -> Self {
        Self {
            n_type1: system.n_type1(),
            mu: Some(system.mu().to_vec()),
            mu_each: None,
            m_type2: system.m_type2(),
            lambda: Some(system.lambda_each().to_vec()),
            lambda_each: None,
        }
    }

    pub fn to_system(&self) -> Result<SystemConfig> {
        let mu = expand("mu", self.n_type1, &self.mu, self.mu_each)?;
        let lambda = expand("lambda", self.m_type2, &self.lambda, self.lambda_each)?;
        Ok(SystemConfig::new(mu, lambda)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n").map_err(|e| AppError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_and_shorthand() {
        let c =
            ConfigFile::from_json(r#"{"n_type1": 2, "mu": [1, 2], "m_type2": 1, "lambda": [0.5]}"#)
                .unwrap()
                .to_system()
                .unwrap();
        assert_eq!(c.mu(), &[1.0, 2.0]);
        assert_eq!(c.lambda_total(), 0.5);
        let c = ConfigFile::from_json(
            r#"{"n_type1": 3, "mu_each": 2, "m_type2": 2, "lambda_each": 0.25}"#,
        )
        .unwrap()
        .to_system()
        .unwrap();
        assert_eq!(c.mu(), &[2.0; 3]);
        assert_eq!(c.lambda_each(), &[0.25, 0.25]);
        let c = ConfigFile::from_json(r#"{"n_type1": 1, "mu": [3]}"#)
            .unwrap()
            .to_system()
            .unwrap();
        assert_eq!(c.m_type2(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            r#"{"n_type1": 2, "mu": [1]}"#,
            r#"{"n_type1": 1, "mu": [-1]}"#,
            r#"{"n_type1": 1, "mu": [1], "mu_each": 1}"#,
            r#"{"n_type1": 1}"#,
            r#"{"n_type1": 1, "mu": [1], "m_type2": 1}"#,
        ] {
            let parsed = ConfigFile::from_json(bad).and_then(|c| c.to_system());
            assert!(parsed.is_err(), "{bad}");
        }
        assert!(ConfigFile::from_json(r#"{"n_type1": 1, "mu": [NaN]}"#).is_err());
        assert!(ConfigFile::from_json(r#"{"n_type1": 1, "mu": [1], "rho": 1}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let s = SystemConfig::new(vec![0.5, 1.25], vec![0.1, 0.2]).unwrap();
        let text = ConfigFile::from_system(&s).to_json().unwrap();
        let back = ConfigFile::from_json(&text).unwrap().to_system().unwrap();
        assert_eq!(back, s);
    }
}
