//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//!
//! [class]
//! preset = "thresholds"
//! params = [7]
//!
//! [process]
//! kind = "iid"
//!
//! [learner]
//! name = "soa"
//!
//! [trial]
//! rounds = 100
//! seeds = 10
//! ```
//!
//! Every section and key is optional. `check` runs read `[condition1]` and
//! `[c2]`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{DEFAULT_HISTORY_CAP, DEFAULT_ROLLOUTS};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub class: ClassSpec,
    pub process: ProcessSpec,
    pub learner: LearnerSpec,
    pub trial: TrialSpec,
    pub condition1: Condition1Spec,
    pub c2: C2Spec,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Config::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.learner.rollouts == 0 {
            return Err(Error::Config("learner.rollouts must be positive".into()));
        }
        if self.learner.experts_max == 0 {
            return Err(Error::Config("learner.experts_max must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.trial.noise) {
            return Err(Error::Config("trial.noise must lie in [0, 1]".into()));
        }
        if self.trial.seeds == 0 || self.condition1.seeds == 0 || self.c2.seeds == 0 {
            return Err(Error::Config("seed counts must be positive".into()));
        }
        if self.condition1.n_grid.is_empty() || self.c2.t_grid.is_empty() {
            return Err(Error::Config("check grids must be nonempty".into()));
        }
        Ok(())
    }
}

/// A preset by name, or a class file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassSpec {
    /// `thresholds`, `singletons`, `full`, `union-split` or `all-functions`.
    pub preset: String,
    pub params: Vec<usize>,
    pub file: Option<PathBuf>,
}

impl Default for ClassSpec {
    fn default() -> Self {
        ClassSpec {
            preset: "thresholds".into(),
            params: vec![7],
            file: None,
        }
    }
}

impl ClassSpec {
    pub fn preset(name: &str, params: &[usize]) -> Self {
        ClassSpec {
            preset: name.into(),
            params: params.to_vec(),
            file: None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.file {
            Some(f) => f.display().to_string(),
            None => {
                let params: Vec<String> = self.params.iter().map(usize::to_string).collect();
                format!("{}({})", self.preset, params.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProcessSpec {
    /// `iid`, `markov`, `deterministic`, `novel-point`, `littlestone-walk`
    /// or `vcl-walk`.
    pub kind: String,
    /// Iid weights; uniform over the domain when absent.
    pub weights: Option<Vec<f64>>,
    pub initial: Option<Vec<f64>>,
    pub transitions: Option<Vec<Vec<f64>>>,
    /// Point indices for `deterministic`; repeated cyclically up to the round count.
    pub sequence: Option<Vec<usize>>,
    /// Witness depth for `littlestone-walk` (defaults to the round count) or
    /// node count for `vcl-walk` (defaults to 5).
    pub depth: Option<usize>,
}

impl Default for ProcessSpec {
    fn default() -> Self {
        ProcessSpec::kind("iid")
    }
}

impl ProcessSpec {
    pub fn kind(kind: &str) -> Self {
        ProcessSpec {
            kind: kind.into(),
            weights: None,
            initial: None,
            transitions: None,
            sequence: None,
            depth: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearnerSpec {
    /// `soa`, `alg2`, `alg1`, `wm`, `squint` or `constant`.
    pub name: String,
    pub rollouts: usize,
    pub experts_max: usize,
    pub history_cap: usize,
    pub window_cap: usize,
    /// Sampled instead of majority predictions for `squint`.
    pub randomized: bool,
    /// `expected` or `realized` regret for `squint`.
    pub regret: String,
    /// Label of the `constant` learner.
    pub label: u8,
}

impl Default for LearnerSpec {
    fn default() -> Self {
        LearnerSpec {
            name: "soa".into(),
            rollouts: DEFAULT_ROLLOUTS,
            experts_max: 64,
            history_cap: DEFAULT_HISTORY_CAP,
            window_cap: crate::concepts::DEFAULT_WINDOW_CAP,
            randomized: false,
            regret: "expected".into(),
            label: 0,
        }
    }
}

impl LearnerSpec {
    pub fn named(name: &str) -> Self {
        LearnerSpec {
            name: name.into(),
            ..LearnerSpec::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrialSpec {
    pub rounds: usize,
    /// Trials use seeds `seed, seed + 1, ...`.
    pub seeds: usize,
    /// Index of the target hypothesis; drawn per seed when absent.
    pub target: Option<usize>,
    /// Probability of flipping each label. Nonzero noise turns off the
    /// realizability checks.
    pub noise: f64,
    /// `truth` or `best` (best fixed hypothesis in hindsight).
    pub comparator: String,
}

impl Default for TrialSpec {
    fn default() -> Self {
        TrialSpec {
            rounds: 100,
            seeds: 1,
            target: None,
            noise: 0.0,
            comparator: "truth".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Condition1Spec {
    pub n_grid: Vec<usize>,
    pub seeds: usize,
    /// Pass when the mean of `ln(i_n)/n` at the largest `n` is at most
    /// `envelope / sqrt(n)`.
    pub envelope: f64,
    /// Pool cap: experts with indices up to `2^max_index_bits`.
    pub max_index_bits: u64,
    /// Indices up to this value are confirmed by scanning the pool.
    pub scan_limit: u64,
}

impl Default for Condition1Spec {
    fn default() -> Self {
        Condition1Spec {
            n_grid: vec![25, 50, 100, 200],
            seeds: 20,
            envelope: 2.0,
            max_index_bits: 4096,
            scan_limit: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct C2Spec {
    pub t_grid: Vec<usize>,
    pub seeds: usize,
    /// Pass when `count/T` at the largest `T` is below this value.
    pub threshold: f64,
    /// `singletons`, `blocks` (of `block` points each), `one` or `explicit`.
    pub partition: String,
    pub block: usize,
    pub sets: Vec<Vec<usize>>,
}

impl Default for C2Spec {
    fn default() -> Self {
        C2Spec {
            t_grid: vec![100, 1000, 10_000],
            seeds: 10,
            threshold: 0.05,
            partition: "singletons".into(),
            block: 1,
            sets: Vec::new(),
        }
    }
}
