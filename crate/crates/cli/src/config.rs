//! Instance configuration files.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use qtorus_core::cyclotomic::Conductor;
use qtorus_core::fmodule::{CheckContext, Flavor, ModuleSpec, TwistCharacter};
use qtorus_core::glmod::GlModule;
use qtorus_core::suites::SuiteConfig;
use qtorus_core::{CycNumber, TorusSpec};

use crate::error::CliError;

pub const DEFAULT_MAX_CONDUCTOR: u32 = 240;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_RADIUS: i64 = 3;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigWire {
    #[serde(default = "default_instance")]
    instance: String,
    torus: TorusSpec,
    #[serde(default)]
    module: ModuleWire,
    #[serde(rename = "box", default)]
    radius: Option<Vec<i64>>,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    corrupt_sigma: bool,
    #[serde(default)]
    beta_candidates: Option<Vec<Vec<CycNumber>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleWire {
    #[serde(rename = "V", default = "default_selector")]
    v: String,
    #[serde(default)]
    alpha: Option<Vec<CycNumber>>,
    #[serde(default)]
    twist: Option<TwistWire>,
    #[serde(default = "default_flavor")]
    flavor: Flavor,
}

impl Default for ModuleWire {
    fn default() -> Self {
        ModuleWire { v: default_selector(), alpha: None, twist: None, flavor: Flavor::F }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistWire {
    #[serde(rename = "M")]
    m: u32,
    k: Vec<i64>,
}

fn default_instance() -> String {
    "default".into()
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_selector() -> String {
    "natural".into()
}

fn default_flavor() -> Flavor {
    Flavor::F
}

/// A validated instance: torus, module, box and sampling parameters.
#[derive(Clone, Debug)]
pub struct InstanceConfig {
    pub instance: String,
    pub module: ModuleSpec,
    pub radius: Vec<i64>,
    pub seed: u64,
    pub samples: usize,
    pub beta_candidates: Option<Vec<Vec<CycNumber>>>,
}

/// Reads `QTORUS_MAX_CONDUCTOR`, falling back to the default.
pub fn max_conductor() -> Result<u32, CliError> {
    match std::env::var("QTORUS_MAX_CONDUCTOR") {
        Err(_) => Ok(DEFAULT_MAX_CONDUCTOR),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(CliError::Config(format!("QTORUS_MAX_CONDUCTOR must be a positive integer, got {s:?}"))),
        },
    }
}

impl InstanceConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let wire: ConfigWire = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_wire(wire, max_conductor()?)
    }

    fn from_wire(w: ConfigWire, cap: u32) -> Result<Self, CliError> {
        let mut spec = w.torus;
        if w.corrupt_sigma {
            spec = spec.with_corrupted_sigma();
        }
        let d = spec.rank();
        let v = GlModule::from_selector(d, &w.module.v)?;
        let alpha = w.module.alpha.unwrap_or_else(|| vec![CycNumber::zero(); d]);
        if alpha.len() != d {
            return Err(CliError::Config(format!("alpha has {} entries, expected {d}", alpha.len())));
        }
        let twist = match w.module.twist {
            None => TwistCharacter::trivial(d),
            Some(t) => {
                let m = Conductor::new(t.m).ok_or_else(|| CliError::Config("twist conductor must be positive".into()))?;
                TwistCharacter::new(&spec, m, t.k)?
            }
        };

        // φ needs square roots of σ values, which live at conductor 2N
        let mut needed = Conductor::new(2 * spec.order().get()).expect("positive").lcm(twist.conductor());
        for a in &alpha {
            needed = needed.lcm(a.conductor());
        }
        if needed.get() > cap {
            return Err(CliError::Config(format!("conductor {needed} exceeds the cap {cap} (QTORUS_MAX_CONDUCTOR)")));
        }

        let radius = w.radius.unwrap_or_else(|| vec![DEFAULT_RADIUS; d]);
        if radius.len() != d {
            return Err(CliError::Config(format!("box has {} entries, expected {d}", radius.len())));
        }
        if radius.iter().any(|&r| r < 2) {
            return Err(CliError::Config("box radius must be at least 2 in every direction".into()));
        }
        if w.samples == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        if let Some(c) = &w.beta_candidates {
            if let Some(b) = c.iter().find(|b| b.len() != d) {
                return Err(CliError::Config(format!("beta candidate has {} entries, expected {d}", b.len())));
            }
        }
        let module = ModuleSpec::new(Arc::new(spec), Arc::new(v), alpha, twist, w.module.flavor)?;
        Ok(InstanceConfig {
            instance: w.instance,
            module,
            radius,
            seed: w.seed,
            samples: w.samples,
            beta_candidates: w.beta_candidates,
        })
    }

    pub fn context(&self) -> CheckContext {
        CheckContext::new(self.instance.clone(), self.seed, self.samples)
    }

    pub fn suite_config(&self) -> Result<SuiteConfig, CliError> {
        Ok(SuiteConfig::new(self.module.clone(), self.radius.clone(), self.context())?)
    }

    pub fn spec(&self) -> &Arc<TorusSpec> {
        self.module.spec()
    }
}
