//! Config-driven experiment runner: eight named, reproducible experiments
//! with CSV/JSON artifacts and a manifest written before any heavy compute.
//! Exit status 0 means every in-experiment assertion passed; schema
//! violations exit with 2, numerical failures with 3.

mod runners;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXPERIMENT_NAMES: [&str; 8] = [
    "energy_conservation",
    "morawetz_bound",
    "defocusing_scatter",
    "focusing_blowup",
    "quintic_decay",
    "cone_correspondence",
    "admissible_regions",
    "lemma_verification",
];

/// A named experiment request, usually parsed from a TOML file.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub parameters: toml::Table,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("experiment spec: {e}")))
    }
}

/// Typed parameter value.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: &'static str,
    pub default: ParamValue,
    pub description: &'static str,
}

/// Resolved parameters: defaults overlaid with the user's table.
#[derive(Debug, Clone)]
pub struct Params {
    values: BTreeMap<String, ParamValue>,
}

impl Params {
    fn resolve(schema: &[ParamSpec], table: &toml::Table) -> Result<Self> {
        let mut values = BTreeMap::new();
        for spec in schema {
            values.insert(spec.name.to_string(), spec.default.clone());
        }
        for (key, raw) in table {
            let spec = schema
                .iter()
                .find(|s| s.name == key)
                .ok_or_else(|| Error::Config(format!("unknown parameter `{key}`")))?;
            let value = match (spec.kind, raw) {
                ("int", toml::Value::Integer(i)) => ParamValue::Int(*i),
                ("float", toml::Value::Float(f)) => ParamValue::Float(*f),
                ("float", toml::Value::Integer(i)) => ParamValue::Float(*i as f64),
                ("bool", toml::Value::Boolean(b)) => ParamValue::Bool(*b),
                ("string", toml::Value::String(s)) => ParamValue::Str(s.clone()),
                _ => {
                    return Err(Error::Config(format!(
                        "parameter `{key}` expects a {} value",
                        spec.kind
                    )))
                }
            };
            values.insert(key.clone(), value);
        }
        Ok(Self { values })
    }

    pub fn f64(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(ParamValue::Float(f)) => *f,
            Some(ParamValue::Int(i)) => *i as f64,
            _ => panic!("parameter `{key}` missing from resolved schema"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        match self.values.get(key) {
            Some(ParamValue::Int(i)) if *i >= 0 => *i as usize,
            _ => panic!("parameter `{key}` missing or negative"),
        }
    }

    pub fn i64(&self, key: &str) -> i64 {
        match self.values.get(key) {
            Some(ParamValue::Int(i)) => *i,
            _ => panic!("parameter `{key}` missing"),
        }
    }

    pub fn bool(&self, key: &str) -> bool {
        match self.values.get(key) {
            Some(ParamValue::Bool(b)) => *b,
            _ => panic!("parameter `{key}` missing"),
        }
    }

    pub fn str(&self, key: &str) -> &str {
        match self.values.get(key) {
            Some(ParamValue::Str(s)) => s,
            _ => panic!("parameter `{key}` missing"),
        }
    }

    pub fn as_map(&self) -> &BTreeMap<String, ParamValue> {
        &self.values
    }
}

/// One verified statement inside an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn check(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExitReport {
    pub experiment: String,
    pub exit_code: i32,
    pub assertions: Vec<Assertion>,
    pub wall_time_secs: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    version: &'a str,
    seed: u64,
    parameters: &'a BTreeMap<String, ParamValue>,
    status: &'a str,
    wall_time_secs: Option<f64>,
}

/// Catalog entry: what the experiment demonstrates and its schema.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// quantitative statements the experiment reproduces or audits
    pub verifies: Vec<&'static str>,
    pub parameters: Vec<ParamSpec>,
}

pub fn list_experiments() -> Vec<ExperimentInfo> {
    EXPERIMENT_NAMES
        .iter()
        .map(|name| runners::info(name).expect("catalog covers every registered name"))
        .collect()
}

/// Stable JSON rendering of the catalog (byte-identical across runs).
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&list_experiments()).expect("catalog serializes")
}

fn write_manifest(
    dir: &Path,
    name: &str,
    seed: u64,
    params: &Params,
    status: &str,
    wall: Option<f64>,
) -> Result<()> {
    crate::csvio::write_json(
        dir.join("manifest.json"),
        &Manifest {
            experiment: name,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            parameters: params.as_map(),
            status,
            wall_time_secs: wall,
        },
    )
}

/// Validates the spec, writes the manifest, and executes the experiment.
pub fn run(spec: &ExperimentSpec, jobs: usize) -> ExitReport {
    let started = Instant::now();
    let name = spec.name.clone();
    match run_inner(spec, jobs) {
        Ok(assertions) => {
            let all_pass = assertions.iter().all(|a| a.passed);
            ExitReport {
                experiment: name,
                exit_code: if all_pass { 0 } else { 3 },
                assertions,
                wall_time_secs: started.elapsed().as_secs_f64(),
            }
        }
        Err(err) => {
            let code = match err {
                Error::Config(_) | Error::InvalidParameter(_) | Error::DimensionOutOfRange(_) => 2,
                _ => 3,
            };
            ExitReport {
                experiment: name,
                exit_code: code,
                assertions: vec![Assertion::check("setup", false, err.to_string())],
                wall_time_secs: started.elapsed().as_secs_f64(),
            }
        }
    }
}

fn run_inner(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<Assertion>> {
    let info = runners::info(&spec.name)
        .ok_or_else(|| Error::Config(format!("unknown experiment name `{}`", spec.name)))?;
    let params = Params::resolve(&info.parameters, &spec.parameters)?;
    let out_dir = spec
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;
    // manifest lands before any heavy compute (crash forensics)
    write_manifest(&out_dir, &spec.name, spec.seed, &params, "running", None)?;
    let started = Instant::now();
    let result = runners::dispatch(&spec.name, &params, spec.seed, &out_dir, jobs);
    let wall = started.elapsed().as_secs_f64();
    match &result {
        Ok(assertions) => {
            let status = if assertions.iter().all(|a| a.passed) {
                "completed"
            } else {
                "failed-assertions"
            };
            write_manifest(&out_dir, &spec.name, spec.seed, &params, status, Some(wall))?;
            crate::csvio::write_json(out_dir.join("assertions.json"), assertions)?;
        }
        Err(_) => {
            write_manifest(&out_dir, &spec.name, spec.seed, &params, "error", Some(wall))?;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete_and_stable() {
        let infos = list_experiments();
        assert_eq!(infos.len(), 8);
        for info in &infos {
            assert!(
                !info.verifies.is_empty(),
                "experiment {} lacks a verified statement",
                info.name
            );
        }
        let a = catalog_json();
        let b = catalog_json();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_experiment_exits_2() {
        let spec = ExperimentSpec {
            name: "does_not_exist".into(),
            seed: 0,
            output_dir: Some(std::env::temp_dir().join("hypwave_unknown")),
            parameters: toml::Table::new(),
        };
        let report = run(&spec, 1);
        assert_eq!(report.exit_code, 2);
    }

    #[test]
    fn unknown_parameter_exits_2() {
        let mut table = toml::Table::new();
        table.insert("bogus".into(), toml::Value::Integer(1));
        let spec = ExperimentSpec {
            name: "lemma_verification".into(),
            seed: 0,
            output_dir: Some(std::env::temp_dir().join("hypwave_badparam")),
            parameters: table,
        };
        let report = run(&spec, 1);
        assert_eq!(report.exit_code, 2);
    }

    #[test]
    fn spec_parses_from_toml() {
        let spec = ExperimentSpec::from_toml_str(
            r#"
            name = "lemma_verification"
            seed = 7
            [parameters]
            samples = 50
            "#,
        )
        .unwrap();
        assert_eq!(spec.name, "lemma_verification");
        assert_eq!(spec.seed, 7);
    }
}
