//! Experiment configuration: model selection, shared parameters, suite
//! list, tolerances. Validation happens before any suite runs and names
//! the violated hypothesis.

use serde::{Deserialize, Serialize};

use emtlab::model::EnergyWeight;

pub const SCHEMA_VERSION: u32 = 1;

/// All suites the runner knows, in canonical order.
pub const ALL_SUITES: &[&str] = &[
    "envelope",
    "thm-bk",
    "thm-gb",
    "stability",
    "sobolev",
    "weighted",
    "corollary-point",
    "corollary-plane",
    "dyadic",
    "buchholz",
    "appendix-a",
    "appendix-b",
    "appendix-c",
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    RandomCone { dim: usize, max_energy: f64, include_origin: bool },
    Lattice { dim: usize, spacing: f64 },
    MassShell { mass: f64, half_extent: i32, spacing: f64, ground_state: bool },
    File { path: String },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "family", rename_all = "kebab-case")]
pub enum WeightSpec {
    Bounded { lambda: f64, s: f64 },
    SingularAtZero { lambda: f64, a: f64, b: f64 },
}

impl WeightSpec {
    pub fn build(&self) -> anyhow::Result<EnergyWeight> {
        Ok(match *self {
            WeightSpec::Bounded { lambda, s } => EnergyWeight::bounded(lambda, s)?,
            WeightSpec::SingularAtZero { lambda, a, b } => {
                EnergyWeight::singular_at_zero(lambda, a, b)?
            }
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    /// Random operator fields per suite.
    pub fields: usize,
    /// Random measures per field.
    pub measures: usize,
    pub atoms_per_measure: usize,
    pub spatial_extent: f64,
    pub time_extent: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DyadicConfig {
    pub k_values: Vec<f64>,
    pub max_levels: u32,
    pub log2_len: u32,
    pub samples_per_scale: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub suites: Vec<String>,
    pub model: ModelSpec,
    pub lambda: f64,
    pub kappa: f64,
    /// Filter order for the frequency-split and momentum parts.
    pub k: f64,
    pub energy_grid: Vec<f64>,
    pub gamma_steps: u32,
    pub probe_width: f64,
    pub squeeze_delta: f64,
    pub weight: WeightSpec,
    pub family: FamilyConfig,
    pub dyadic: DyadicConfig,
    /// Randomized trials for the lemma suites.
    pub trials: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            seed: 7,
            suites: ALL_SUITES.iter().map(|s| s.to_string()).collect(),
            model: ModelSpec::MassShell {
                mass: 1.0,
                half_extent: 1,
                spacing: 0.6,
                ground_state: true,
            },
            lambda: 1.0,
            kappa: 1.5,
            k: 1.6,
            energy_grid: vec![0.0, 0.8, 1.6, 2.4, 4.0],
            gamma_steps: 7,
            probe_width: 0.5,
            squeeze_delta: 0.5,
            weight: WeightSpec::Bounded { lambda: 1.0, s: 1.0 },
            family: FamilyConfig {
                fields: 4,
                measures: 8,
                atoms_per_measure: 8,
                spatial_extent: 2.5,
                time_extent: 1.0,
            },
            dyadic: DyadicConfig {
                k_values: vec![1.0, 1.5, 2.0],
                max_levels: 6,
                log2_len: 20,
                samples_per_scale: 32.0,
                tolerance: 1e-4,
            },
            trials: 1000,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> anyhow::Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Canonical bytes hashed into the run record.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("config serialization cannot fail");
        hex::encode(Sha256::digest(bytes))
    }

    /// Check every parameter-domain constraint the selected suites need.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            anyhow::bail!("unsupported schema version {}", self.schema_version);
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                anyhow::bail!("unknown suite '{s}'; known: {}", ALL_SUITES.join(", "));
            }
        }
        if !(self.lambda > 0.0) || !(self.kappa > 0.0) {
            anyhow::bail!("requires lambda > 0 and kappa > 0");
        }
        let needs_order = ["thm-bk", "thm-gb"];
        if self.suites.iter().any(|s| needs_order.contains(&s.as_str()))
            && self.k <= (self.kappa + 1.0) / 2.0
        {
            anyhow::bail!(
                "suites {:?} require k > (kappa + 1)/2; got k = {}, kappa = {}",
                needs_order,
                self.k,
                self.kappa
            );
        }
        if self.suites.iter().any(|s| s == "sobolev") && self.kappa == 3.0 {
            anyhow::bail!("the sharp-time suite requires kappa != 3 (critical value)");
        }
        if self.suites.iter().any(|s| s == "corollary-point")
            && !(0.0 < self.squeeze_delta && self.squeeze_delta < 1.0)
        {
            anyhow::bail!(
                "the point-squeeze suite requires delta in (0, 1); got {}",
                self.squeeze_delta
            );
        }
        self.weight.build()?;
        if self.dyadic.k_values.iter().any(|&k| k <= 0.0) {
            anyhow::bail!("dyadic k values must be > 0");
        }
        if self.family.fields == 0 || self.family.measures == 0 {
            anyhow::bail!("instance family must be nonempty");
        }
        Ok(())
    }

    pub fn build_model(&self) -> anyhow::Result<emtlab::model::QuantumModel> {
        use emtlab::model::QuantumModel;
        use emtlab::util::child_rng;
        Ok(match &self.model {
            ModelSpec::RandomCone { dim, max_energy, include_origin } => {
                let mut rng = child_rng(self.seed, 0xC0DE);
                QuantumModel::random_cone(*dim, *max_energy, *include_origin, &mut rng)?
            }
            ModelSpec::Lattice { dim, spacing } => QuantumModel::lattice(*dim, *spacing)?,
            ModelSpec::MassShell { mass, half_extent, spacing, ground_state } => {
                let shell = QuantumModel::mass_shell(*mass, *half_extent, *spacing)?;
                if *ground_state {
                    shell.with_ground_state()?
                } else {
                    shell
                }
            }
            ModelSpec::File { path } => {
                let text = std::fs::read_to_string(path)?;
                QuantumModel::from_json(&text)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_round_trips() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.hash(), back.hash());
    }

    #[test]
    fn validation_names_the_hypothesis() {
        let mut cfg = ExperimentConfig::default();
        cfg.k = 1.0;
        cfg.kappa = 2.0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("k > (kappa + 1)/2"), "{err}");

        let mut cfg = ExperimentConfig::default();
        cfg.kappa = 3.0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("critical"), "{err}");

        let mut cfg = ExperimentConfig::default();
        cfg.suites = vec!["nonsense".into()];
        assert!(cfg.validate().is_err());

        let mut cfg = ExperimentConfig::default();
        cfg.squeeze_delta = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: serde_json::Value =
            serde_json::from_str(&ExperimentConfig::default().to_json()).unwrap();
        v["surprise"] = serde_json::json!(1);
        assert!(ExperimentConfig::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn model_specs_build() {
        for spec in [
            ModelSpec::RandomCone { dim: 6, max_energy: 3.0, include_origin: true },
            ModelSpec::Lattice { dim: 5, spacing: 0.4 },
            ModelSpec::MassShell { mass: 1.0, half_extent: 1, spacing: 0.5, ground_state: false },
        ] {
            let cfg = ExperimentConfig { model: spec, ..Default::default() };
            assert!(cfg.build_model().unwrap().dim() >= 5);
        }
    }
}
