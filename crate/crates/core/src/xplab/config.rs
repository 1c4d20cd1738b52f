//! Experiment configuration: a single TOML file fully specifies a matrix.

use serde::{Deserialize, Serialize};

use crate::controller::ControllerPreset;
use crate::dynamics::{DisturbanceDirection, DisturbanceKind, DisturbanceSpec, SimParams};
use crate::error::{Error, Result};
use crate::hash::fnv1a64_hex;
use crate::netgen::{
    gen_erdos_renyi, gen_ring_regular, gen_scale_free, gen_spider_web, gen_watts_strogatz,
    Network, NetworkKind,
};

/// One network entry of the matrix. Omitted parameters take the reference
/// values (n=100, d=4, p=0.1, p_rewire=0.05, m=2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpecConfig {
    pub kind: NetworkKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_rewire: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

fn default_n() -> usize {
    100
}

impl NetworkSpecConfig {
    pub fn of_kind(kind: NetworkKind) -> Self {
        NetworkSpecConfig {
            kind,
            n: default_n(),
            d: None,
            p: None,
            p_rewire: None,
            m: None,
        }
    }

    pub fn build(&self, seed: u64) -> Result<Network> {
        match self.kind {
            NetworkKind::RingRegular => gen_ring_regular(self.n, self.d.unwrap_or(4), seed),
            NetworkKind::ErdosRenyi => gen_erdos_renyi(self.n, self.p.unwrap_or(0.1), seed),
            NetworkKind::WattsStrogatz => gen_watts_strogatz(
                self.n,
                self.d.unwrap_or(4),
                self.p_rewire.unwrap_or(0.05),
                seed,
            ),
            NetworkKind::ScaleFree => gen_scale_free(self.n, self.m.unwrap_or(2), seed),
            NetworkKind::SpiderWeb => gen_spider_web(self.n).map(|net| net.with_seed(seed)),
        }
    }
}

/// Disturbance direction in config form.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionConfig {
    #[default]
    Principal,
    Uniform,
    Node(usize),
}

impl DirectionConfig {
    pub fn resolve(&self) -> DisturbanceDirection {
        match self {
            DirectionConfig::Principal => DisturbanceDirection::PrincipalEigenvector,
            DirectionConfig::Uniform => DisturbanceDirection::Uniform,
            DirectionConfig::Node(i) => DisturbanceDirection::SingleNode(*i),
        }
    }
}

/// One disturbance entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceConfig {
    pub kind: DisturbanceKind,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub direction: DirectionConfig,
}

fn default_amplitude() -> f64 {
    1.0
}

impl DisturbanceConfig {
    pub fn of_kind(kind: DisturbanceKind) -> Self {
        DisturbanceConfig {
            kind,
            amplitude: default_amplitude(),
            direction: DirectionConfig::default(),
        }
    }

    pub fn resolve(&self) -> Result<DisturbanceSpec> {
        DisturbanceSpec::new(self.kind, self.amplitude, self.direction.resolve())
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    Constant,
    Adaptive,
}

/// One controller arm of the matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControllerChoice {
    /// Unique label used in file names and table rows.
    pub name: String,
    pub kind: ControllerKind,
    /// Constant arm only: explicit inertia. Defaults to the per-network M₀.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Adaptive arm only: explicit preset. Defaults to the per-topology
    /// reported preset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<ControllerPreset>,
}

impl ControllerChoice {
    pub fn constant() -> Self {
        ControllerChoice {
            name: "constant".into(),
            kind: ControllerKind::Constant,
            value: None,
            preset: None,
        }
    }

    pub fn adaptive() -> Self {
        ControllerChoice {
            name: "adaptive".into(),
            kind: ControllerKind::Adaptive,
            value: None,
            preset: None,
        }
    }
}

/// A whole experiment: networks × disturbances × controllers × seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    /// Metric horizon T for H(T).
    #[serde(rename = "horizon_T", default = "default_horizon")]
    pub horizon_t: f64,
    /// Use the reported per-topology M₀ values instead of D²/(4λ_max); for
    /// discrepancy studies.
    #[serde(default)]
    pub use_reported_m0: bool,
    /// Threshold for the characteristic-root scan (s⁻¹).
    #[serde(default = "default_stability_threshold")]
    pub stability_threshold: f64,
    pub sim: SimParams,
    pub networks: Vec<NetworkSpecConfig>,
    pub disturbances: Vec<DisturbanceConfig>,
    pub controllers: Vec<ControllerChoice>,
}

fn default_threads() -> usize {
    1
}

fn default_output_dir() -> String {
    "out".into()
}

fn default_horizon() -> f64 {
    5.0
}

fn default_stability_threshold() -> f64 {
    crate::metrics::DEFAULT_STABILITY_THRESHOLD
}

impl ExperimentConfig {
    /// The reference experiment: all five topologies (n=100), all three
    /// disturbances (unit amplitude along the principal eigenvector),
    /// constant vs adaptive arms with the per-topology presets, D=0.8,
    /// K=1, T=5 s over a 10 s / 1 ms grid sampled every 10 ms.
    pub fn reference() -> Self {
        ExperimentConfig {
            seeds: vec![1],
            threads: default_threads(),
            output_dir: default_output_dir(),
            horizon_t: default_horizon(),
            use_reported_m0: false,
            stability_threshold: default_stability_threshold(),
            sim: SimParams::default_reference(),
            networks: vec![
                {
                    let mut s = NetworkSpecConfig::of_kind(NetworkKind::RingRegular);
                    s.d = Some(4);
                    s
                },
                {
                    let mut s = NetworkSpecConfig::of_kind(NetworkKind::ErdosRenyi);
                    s.p = Some(0.1);
                    s
                },
                {
                    let mut s = NetworkSpecConfig::of_kind(NetworkKind::WattsStrogatz);
                    s.d = Some(4);
                    s.p_rewire = Some(0.05);
                    s
                },
                {
                    let mut s = NetworkSpecConfig::of_kind(NetworkKind::ScaleFree);
                    s.m = Some(2);
                    s
                },
                NetworkSpecConfig::of_kind(NetworkKind::SpiderWeb),
            ],
            disturbances: vec![
                DisturbanceConfig::of_kind(DisturbanceKind::Impulse),
                DisturbanceConfig::of_kind(DisturbanceKind::MonotonicDecay),
                DisturbanceConfig::of_kind(DisturbanceKind::OscillatoryDecay),
            ],
            controllers: vec![ControllerChoice::constant(), ControllerChoice::adaptive()],
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(&self).expect("config serialization cannot fail")
    }

    /// Provenance hash over the canonical TOML form of the scientific
    /// configuration. Execution details (thread count, output directory)
    /// are masked out: they must not change any result.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.threads = default_threads();
        canonical.output_dir = default_output_dir();
        fnv1a64_hex(canonical.to_toml().as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "at least one seed required"));
        }
        if self.networks.is_empty() {
            return Err(Error::config("networks", "at least one network required"));
        }
        if self.disturbances.is_empty() {
            return Err(Error::config("disturbances", "at least one disturbance required"));
        }
        if self.controllers.is_empty() {
            return Err(Error::config("controllers", "at least one controller required"));
        }
        if self.threads == 0 {
            return Err(Error::config("threads", "must be >= 1"));
        }
        if !(self.horizon_t > 0.0 && self.horizon_t <= self.sim.t_end) {
            return Err(Error::config(
                "horizon_T",
                format!(
                    "must satisfy 0 < horizon_T <= sim.t_end, got {} vs {}",
                    self.horizon_t, self.sim.t_end
                ),
            ));
        }
        self.sim
            .validate()
            .map_err(|e| Error::config("sim", e.to_string()))?;
        let mut names = std::collections::HashSet::new();
        for c in &self.controllers {
            if !names.insert(&c.name) {
                return Err(Error::config(
                    "controllers.name",
                    format!("duplicate controller name `{}`", c.name),
                ));
            }
            match c.kind {
                ControllerKind::Constant => {
                    if c.preset.is_some() {
                        return Err(Error::config(
                            "controllers.preset",
                            format!("constant controller `{}` cannot carry a preset", c.name),
                        ));
                    }
                    if let Some(v) = c.value {
                        let value_ok = v.is_finite() && v > 0.0;
                        if !value_ok {
                            return Err(Error::config(
                                "controllers.value",
                                "constant inertia must be positive",
                            ));
                        }
                    }
                }
                ControllerKind::Adaptive => {
                    if c.value.is_some() {
                        return Err(Error::config(
                            "controllers.value",
                            format!("adaptive controller `{}` cannot carry a constant value", c.name),
                        ));
                    }
                }
            }
        }
        let has_adaptive = self
            .controllers
            .iter()
            .any(|c| c.kind == ControllerKind::Adaptive);
        let has_constant = self
            .controllers
            .iter()
            .any(|c| c.kind == ControllerKind::Constant);
        if has_adaptive && !has_constant {
            return Err(Error::config(
                "controllers",
                "adaptive arms need a constant baseline for comparisons",
            ));
        }
        for (i, net) in self.networks.iter().enumerate() {
            if net.n < 2 {
                return Err(Error::config(
                    format!("networks[{i}].n"),
                    "need at least two nodes",
                ));
            }
        }
        Ok(())
    }

    /// Matrix size: networks × disturbances × controllers × seeds.
    pub fn cell_count(&self) -> usize {
        self.networks.len() * self.disturbances.len() * self.controllers.len() * self.seeds.len()
    }
}
