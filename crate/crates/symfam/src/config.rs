//! Experiment recipes: TOML by default, JSON when the file ends in `.json`.
//!
//! ```toml
//! primes = 100000
//! nu_max = 10
//!
//! [test_function]
//! kind = "fejer"
//! sigma = 0.5
//!
//! [[family]]
//! id = "quad"
//! kind = "quadratic"
//! lo = 10000
//! hi = 20000
//!
//! [[family]]
//! id = "E1"
//! kind = "elliptic"
//! a = "T"
//! b = "1"
//! start = 2000
//! end = 4000
//! primes = 2000
//!
//! [[family]]
//! id = "E1xE1"
//! kind = "convolve"
//! left = "E1"
//! right = "E1"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use symfam_core::rmt::{Shape, TestFunction};

use crate::error::{RunError, RunResult};

pub const DEFAULT_PRIMES: u64 = 100_000;
pub const DEFAULT_NU_MAX: usize = 10;
pub const DEFAULT_SIGMA: f64 = 0.5;
pub const DEFAULT_DENSITY_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_primes")]
    pub primes: u64,
    #[serde(default = "default_nu_max")]
    pub nu_max: usize,
    #[serde(default)]
    pub test_function: TestFunctionDecl,
    /// Fixed `log R` instead of each family's mean log-conductor.
    #[serde(default)]
    pub log_r: Option<f64>,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default, rename = "family")]
    pub families: Vec<FamilyDecl>,
}

fn default_primes() -> u64 {
    DEFAULT_PRIMES
}

fn default_nu_max() -> usize {
    DEFAULT_NU_MAX
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            primes: DEFAULT_PRIMES,
            nu_max: DEFAULT_NU_MAX,
            test_function: TestFunctionDecl::default(),
            log_r: None,
            tolerance: Tolerances::default(),
            threads: None,
            out: None,
            families: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    #[default]
    Fejer,
    FejerSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionDecl {
    #[serde(default)]
    pub kind: TestKind,
    /// Support radius of `φ̂`.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    DEFAULT_SIGMA
}

impl Default for TestFunctionDecl {
    fn default() -> Self {
        TestFunctionDecl { kind: TestKind::Fejer, sigma: DEFAULT_SIGMA }
    }
}

impl TestFunctionDecl {
    pub fn build(&self) -> RunResult<TestFunction> {
        let shape = match self.kind {
            TestKind::Fejer => Shape::Fejer,
            TestKind::FejerSquared => Shape::FejerSquared,
        };
        TestFunction::from_shape(shape, self.sigma).map_err(|e| RunError::Config(e.to_string()))
    }
}

/// Classification tolerances; unset values fall back to the family's class
/// default (0.05 for characters, 0.2 for elliptic-curve families).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default)]
    pub character: Option<f64>,
    #[serde(default)]
    pub elliptic: Option<f64>,
    /// Allowed `|D₁ emp − D₁ pred|` under `--check`.
    #[serde(default = "default_density_tolerance")]
    pub density: f64,
}

fn default_density_tolerance() -> f64 {
    DEFAULT_DENSITY_TOLERANCE
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { character: None, elliptic: None, density: DEFAULT_DENSITY_TOLERANCE }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDecl {
    pub id: String,
    /// Prime cutoff for this family, overriding the global one.
    #[serde(default)]
    pub primes: Option<u64>,
    /// Classification tolerance for this family.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(flatten)]
    pub kind: FamilyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    Dirichlet {
        modulus: u64,
    },
    Quadratic {
        lo: i64,
        hi: i64,
    },
    Elliptic {
        a: String,
        b: String,
        start: i64,
        end: i64,
    },
    Delta {
        #[serde(default)]
        bound: Option<usize>,
    },
    SymLift {
        of: String,
        m: u32,
    },
    Convolve {
        left: String,
        right: String,
        /// `keep_all`, `identical`, `equal_j` or `isomorphic`.
        #[serde(default)]
        collisions: Option<String>,
        /// `lower`, `upper` or `midpoint`.
        #[serde(default)]
        conductor: Option<String>,
    },
    Twist {
        fixed: String,
        /// Member of `fixed` to twist by.
        #[serde(default)]
        index: Option<usize>,
        /// For a Dirichlet `fixed`, pick the first character of this order.
        #[serde(default)]
        order: Option<u64>,
        family: String,
    },
    Constant {
        size: usize,
        value: f64,
        log_conductor: f64,
    },
}

impl FamilyKind {
    /// Ids this declaration refers to.
    pub fn references(&self) -> Vec<&str> {
        match self {
            FamilyKind::SymLift { of, .. } => vec![of],
            FamilyKind::Convolve { left, right, .. } => vec![left, right],
            FamilyKind::Twist { fixed, family, .. } => vec![fixed, family],
            _ => Vec::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> RunResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> RunResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> RunResult<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Ids unique, references resolvable, `σ ∈ (0, 1)`, cutoffs sane.
    pub fn validate(&self) -> RunResult<()> {
        let sigma = self.test_function.sigma;
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(RunError::Config(format!("test_function.sigma must lie in (0, 1), got {sigma}")));
        }
        if self.primes < 2 {
            return Err(RunError::Config(format!("primes must be at least 2, got {}", self.primes)));
        }
        if self.nu_max < 2 {
            return Err(RunError::Config(format!("nu_max must be at least 2, got {}", self.nu_max)));
        }
        if let Some(l) = self.log_r {
            if !(l > 0.0) {
                return Err(RunError::Config(format!("log_r must be positive, got {l}")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for d in &self.families {
            if !seen.insert(d.id.as_str()) {
                return Err(RunError::Config(format!("duplicate family id {:?}", d.id)));
            }
        }
        for d in &self.families {
            for r in d.kind.references() {
                if !seen.contains(r) {
                    return Err(RunError::Config(format!("family {:?} refers to unknown id {r:?}", d.id)));
                }
            }
            if d.primes.is_some_and(|p| p < 2) {
                return Err(RunError::Config(format!("family {:?}: primes must be at least 2", d.id)));
            }
        }
        Ok(())
    }

    pub fn family(&self, id: &str) -> Option<&FamilyDecl> {
        self.families.iter().find(|d| d.id == id)
    }

    /// Largest prime cutoff any family needs.
    pub fn max_primes(&self) -> u64 {
        self.families.iter().filter_map(|d| d.primes).fold(self.primes, u64::max)
    }
}
