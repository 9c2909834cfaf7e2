//! Scenario configuration, parsed from TOML or JSON (by file extension).
//! Annotated examples for every kind live in `configs/` at the repo root.

use crate::HarnessError;
use serde::{Deserialize, Serialize};
use statedist::classical::{MeasureSpec, SpaceSpec};
use statedist::numlin::HermitianElement;
use statedist::SolverConfig;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Classical,
    Quantum,
    Topology,
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioKind::Classical => write!(f, "classical"),
            ScenarioKind::Quantum => write!(f, "quantum"),
            ScenarioKind::Topology => write!(f, "topology"),
        }
    }
}

/// Top-level scenario file: an id, a kind tag, a seed for any randomized
/// state families, and the kind-specific parameter block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    pub kind: ScenarioKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyParams>,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let config: ScenarioConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| HarnessError::Config(e.to_string()))?,
            _ => toml::from_str(&text).map_err(|e| HarnessError::Config(e.to_string()))?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.id.is_empty() {
            return Err(HarnessError::Config("id must be nonempty".into()));
        }
        let section = match self.kind {
            ScenarioKind::Classical => self.classical.is_some(),
            ScenarioKind::Quantum => self.quantum.is_some(),
            ScenarioKind::Topology => self.topology.is_some(),
        };
        if !section {
            return Err(HarnessError::Config(format!(
                "kind is '{}' but the [{}] section is missing",
                self.kind, self.kind
            )));
        }
        Ok(())
    }
}

/// Classical scenario: a space, a list of measures on it, and the distance
/// parameters. Distances run over all measure pairs i < j.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalParams {
    /// Name the measures must reference in their `space_id` field.
    #[serde(default = "default_space_id")]
    pub space_id: String,
    pub space: SpaceSpec,
    pub measures: Vec<MeasureSpec>,
    pub alpha: f64,
    pub beta: f64,
    /// Also compute the Kantorovich distance per pair.
    #[serde(default)]
    pub kantorovich: bool,
}

fn default_space_id() -> String {
    "space".into()
}

/// Dense complex matrix in the JSON wire shape {dim, re, im}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixSpec {
    pub fn build_hermitian(&self) -> Result<HermitianElement, HarnessError> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(HarnessError::Config(format!(
                "matrix spec declares dim {} but has {} re rows and {} im rows",
                self.dim,
                self.re.len(),
                self.im.len()
            )));
        }
        Ok(HermitianElement::from_re_im(&self.re, &self.im)?)
    }

    pub fn from_hermitian(h: &HermitianElement) -> Self {
        let dim = h.dim();
        let mut re = vec![vec![0.0; dim]; dim];
        let mut im = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let z = h.matrix().get(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
            }
        }
        MatrixSpec { dim, re, im }
    }
}

/// Seminorm wire shape: a tagged union on `kind`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeminormSpec {
    Commutator { d: MatrixSpec },
    Grid { space: SpaceSpec, fiber_dim: usize },
}

/// States for a quantum scenario: explicit density matrices or a seeded
/// random family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateFamilySpec {
    Explicit { list: Vec<MatrixSpec> },
    Random { count: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumParams {
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seminorm: SeminormSpec,
    pub states: StateFamilySpec,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
}

/// Strictly positive element for topology scenarios.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HSpec {
    /// diag(1/(k+1)).
    #[default]
    Harmonic,
    /// diag(ratio^k).
    Geometric { ratio: f64 },
    Explicit { matrix: MatrixSpec },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnitSpecConfig {
    TruncationProjections,
    SpectralUnit { thresholds: Vec<f64> },
    PsUnit { tables: Vec<Vec<(f64, f64)>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TopologyStateFamily {
    /// Pure states |k><k| for the listed indices.
    Eigenstates { indices: Vec<usize> },
    /// The maximally mixed state.
    UniformMixture,
    /// Pure states on (|i> + |j>)/sqrt(2).
    Superpositions { pairs: Vec<(usize, usize)> },
    /// Seeded random density matrices.
    Random { count: usize },
}

/// Topology scenario: approximate-unit decay, the shift family, covering
/// numbers over `eps_grid`, and the seminorm agreement table, all at one
/// truncation dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopologyParams {
    pub truncation_dim: usize,
    pub unit_spec: UnitSpecConfig,
    pub state_family: TopologyStateFamily,
    pub eps_grid: Vec<f64>,
    pub alphas: Vec<u32>,
    #[serde(default)]
    pub h: HSpec,
}
