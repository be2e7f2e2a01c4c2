//! Experiment configuration files: a TOML document selecting the channel,
//! the analyses to run, and per-analysis parameters. Config values
//! override command-line flags so a checked-in experiment file fully
//! pins a run.

use serde::{Deserialize, Serialize};
use swchan_core::{ChannelKind, ChannelSpec};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChannelConfig {
    pub kind: String,
    pub n: usize,
    pub d: usize,
    pub q: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct CapacityConfig {
    pub iters: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EntropyConfig {
    pub tol: Option<f64>,
    /// Horizon for the exact output counts (0 disables the count table).
    pub count_steps: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OracleConfig {
    pub t_min: Option<usize>,
    pub t_max: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassifyConfig {
    /// Plant string, e.g. "a=1.2,l=1,vmax=0.01".
    pub plant: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulateConfig {
    pub plant: String,
    /// Path to codes.json.
    pub code: String,
    pub adversary: Option<String>,
    pub noise: Option<String>,
    pub steps: usize,
    pub x0: Option<String>,
    /// Optional path for the trace CSV.
    pub trace: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct CapsConfig {
    pub confusability_vertices: Option<u64>,
    pub finite_memory_work: Option<u64>,
    pub verify_work: Option<u64>,
    pub maximin_words: Option<u64>,
    pub mis_time_budget_ms: Option<u64>,
}

/// One experiment: channel, requested analyses, per-analysis parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentConfig {
    pub channel: Option<ChannelConfig>,
    /// Which analyses to run, in this order; defaults to
    /// states/capacity/entropy/bounds/oracle (+classify/simulate when
    /// configured).
    pub analyses: Option<Vec<String>>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub capacity: CapacityConfig,
    pub entropy: Option<EntropyConfig>,
    pub oracle: Option<OracleConfig>,
    pub classify: Option<ClassifyConfig>,
    pub simulate: Option<SimulateConfig>,
    #[serde(default)]
    pub caps: CapsConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    pub fn channel_spec(&self) -> Result<Option<ChannelSpec>, String> {
        let Some(ch) = &self.channel else { return Ok(None) };
        let kind = match ch.kind.as_str() {
            "nse" => ChannelKind::Nse,
            "nss" => ChannelKind::Nss,
            other => return Err(format!("unknown channel kind {other:?}")),
        };
        ChannelSpec::new(kind, ch.n, ch.d, ch.q).map(Some).map_err(|e| e.to_string())
    }

    pub fn default_analyses(&self) -> Vec<String> {
        if let Some(a) = &self.analyses {
            return a.clone();
        }
        let mut out: Vec<String> = ["states", "capacity", "entropy", "bounds", "oracle"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        if self.classify.is_some() {
            out.push("classify".into());
        }
        if self.simulate.is_some() {
            out.push("simulate".into());
        }
        out
    }

    pub fn resource_caps(&self, base: swchan_core::ResourceCaps) -> swchan_core::ResourceCaps {
        let mut caps = base;
        if let Some(v) = self.caps.confusability_vertices {
            caps.confusability_vertices = v.into();
        }
        if let Some(v) = self.caps.finite_memory_work {
            caps.finite_memory_work = v.into();
        }
        if let Some(v) = self.caps.verify_work {
            caps.verify_work = v.into();
        }
        if let Some(v) = self.caps.maximin_words {
            caps.maximin_words = v.into();
        }
        if let Some(v) = self.caps.mis_time_budget_ms {
            caps.mis_time_budget_ms = v;
        }
        caps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
analyses = ["states", "capacity", "entropy", "bounds", "oracle", "classify"]
seed = 42

[channel]
kind = "nse"
n = 3
d = 1
q = 2

[capacity]
iters = 300

[entropy]
tol = 1e-10
count_steps = 12

[oracle]
t_min = 1
t_max = 6

[classify]
plant = "a=1.2,l=1,vmax=0.01"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::parse(SAMPLE).unwrap();
        let spec = cfg.channel_spec().unwrap().unwrap();
        assert_eq!((spec.n, spec.d, spec.q), (3, 1, 2));
        assert_eq!(cfg.seed, Some(42));
        assert_eq!(
            cfg.analyses.as_deref().map(<[String]>::len),
            Some(6),
            "analyses parsed from the file, not defaulted"
        );
        assert_eq!(cfg.capacity.iters, Some(300));
        // Serialize and re-parse: same config.
        let text = toml::to_string(&cfg).unwrap();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_invalid_spec() {
        let bad = SAMPLE.replace("d = 1", "d = 5");
        let cfg = ExperimentConfig::parse(&bad).unwrap();
        let err = cfg.channel_spec().unwrap_err();
        assert!(err.contains("exceeds window"), "{err}");
    }

    #[test]
    fn caps_override() {
        let cfg = ExperimentConfig::parse("[caps]\nmaximin_words = 8\n").unwrap();
        let caps = cfg.resource_caps(swchan_core::ResourceCaps::default());
        assert_eq!(caps.maximin_words, 8);
        assert_eq!(
            caps.verify_work,
            swchan_core::ResourceCaps::default().verify_work
        );
    }
}
