use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::rng::{rng_for, stream};
use crate::concepts::Point;
use crate::error::{Error, Result};

/// Conditional rollouts of a data process, consumed by the weight learners.
pub trait ProcessOracle: Send + Sync {
    /// A sampled continuation `X_{t+1..t+horizon}` given `history = X_{1..t}`.
    /// Finite processes may return fewer points when they end.
    fn rollout(&self, history: &[Point], horizon: usize, seed: u64) -> Result<Vec<Point>>;

    /// The continuation does not depend on `seed`.
    fn is_deterministic(&self) -> bool;
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProcessKind {
    /// Independent draws with the given weights over points `0..weights.len()`.
    Iid { weights: Vec<f64> },
    Markov {
        initial: Vec<f64>,
        transitions: Vec<Vec<f64>>,
    },
    Deterministic { sequence: Vec<Point> },
    /// `X_t` is point `t - 1`: every round brings a new point.
    NovelPoint,
}

/// A seeded data process over a finite domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessModel {
    kind: ProcessKind,
    domain_len: usize,
    seed: u64,
}

fn check_distribution(weights: &[f64], what: &str) -> Result<()> {
    if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) || weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::Config(format!("{what} must be finite, nonnegative and not all zero")));
    }
    Ok(())
}

impl ProcessModel {
    pub fn iid(weights: Vec<f64>, seed: u64) -> Result<Self> {
        check_distribution(&weights, "iid weights")?;
        Ok(ProcessModel {
            domain_len: weights.len(),
            kind: ProcessKind::Iid { weights },
            seed,
        })
    }

    pub fn iid_uniform(n: usize, seed: u64) -> Result<Self> {
        ProcessModel::iid(vec![1.0; n], seed)
    }

    pub fn markov(initial: Vec<f64>, transitions: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        check_distribution(&initial, "initial distribution")?;
        if transitions.len() != initial.len() {
            return Err(Error::Config("transition table must have one row per state".into()));
        }
        for row in &transitions {
            if row.len() != initial.len() {
                return Err(Error::Config("transition rows must cover every state".into()));
            }
            check_distribution(row, "transition row")?;
        }
        Ok(ProcessModel {
            domain_len: initial.len(),
            kind: ProcessKind::Markov { initial, transitions },
            seed,
        })
    }

    pub fn deterministic(sequence: Vec<Point>, domain_len: usize) -> Result<Self> {
        if let Some(x) = sequence.iter().find(|x| x.0 >= domain_len) {
            return Err(Error::Domain(format!("point index {} outside a domain of {domain_len}", x.0)));
        }
        Ok(ProcessModel {
            kind: ProcessKind::Deterministic { sequence },
            domain_len,
            seed: 0,
        })
    }

    pub fn novel_point(domain_len: usize) -> Self {
        ProcessModel {
            kind: ProcessKind::NovelPoint,
            domain_len,
            seed: 0,
        }
    }

    /// The same process under another master seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kind(&self) -> &ProcessKind {
        &self.kind
    }

    pub fn domain_len(&self) -> usize {
        self.domain_len
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ProcessKind::Iid { .. } => "iid",
            ProcessKind::Markov { .. } => "markov",
            ProcessKind::Deterministic { .. } => "deterministic",
            ProcessKind::NovelPoint => "novel-point",
        }
    }

    /// `X_t` for `t = history.len() + 1`, reproducible from `(seed, t)`.
    pub fn sample_next(&self, history: &[Point]) -> Result<Point> {
        let t = history.len() + 1;
        match &self.kind {
            ProcessKind::Iid { weights } => draw(weights, &mut rng_for(self.seed, &[stream::POINTS, t as u64])),
            ProcessKind::Markov { initial, transitions } => {
                let mut rng = rng_for(self.seed, &[stream::POINTS, t as u64]);
                match history.last() {
                    None => draw(initial, &mut rng),
                    Some(prev) => draw(&transitions[prev.0], &mut rng),
                }
            }
            ProcessKind::Deterministic { sequence } => {
                sequence.get(t - 1).copied().ok_or(Error::EndOfStream(sequence.len()))
            }
            ProcessKind::NovelPoint => {
                if t <= self.domain_len {
                    Ok(Point(t - 1))
                } else {
                    Err(Error::Infeasible(format!(
                        "a novel point at round {t} needs a domain of at least {t} points, got {}",
                        self.domain_len
                    )))
                }
            }
        }
    }

    /// `X_1..X_len`.
    pub fn generate(&self, len: usize) -> Result<Vec<Point>> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let x = self.sample_next(&out)?;
            out.push(x);
        }
        Ok(out)
    }

    pub fn conditional_rollout(&self, history: &[Point], horizon: usize, trial_seed: u64) -> Result<Vec<Point>> {
        let t = history.len();
        match &self.kind {
            ProcessKind::Iid { weights } => {
                let mut rng = rng_for(trial_seed, &[stream::ROLLOUT]);
                (0..horizon).map(|_| draw(weights, &mut rng)).collect()
            }
            ProcessKind::Markov { initial, transitions } => {
                let mut rng = rng_for(trial_seed, &[stream::ROLLOUT]);
                let mut prev = history.last().copied();
                let mut out = Vec::with_capacity(horizon);
                for _ in 0..horizon {
                    let x = match prev {
                        None => draw(initial, &mut rng)?,
                        Some(p) => draw(&transitions[p.0], &mut rng)?,
                    };
                    out.push(x);
                    prev = Some(x);
                }
                Ok(out)
            }
            ProcessKind::Deterministic { sequence } => {
                let start = t.min(sequence.len());
                Ok(sequence[start..(t + horizon).min(sequence.len())].to_vec())
            }
            ProcessKind::NovelPoint => Ok((t..(t + horizon).min(self.domain_len)).map(Point).collect()),
        }
    }
}

fn draw(weights: &[f64], rng: &mut impl Rng) -> Result<Point> {
    let dist = WeightedIndex::new(weights).map_err(|e| Error::Config(format!("bad distribution: {e}")))?;
    Ok(Point(dist.sample(rng)))
}

impl ProcessOracle for ProcessModel {
    fn rollout(&self, history: &[Point], horizon: usize, seed: u64) -> Result<Vec<Point>> {
        self.conditional_rollout(history, horizon, seed)
    }

    fn is_deterministic(&self) -> bool {
        matches!(self.kind, ProcessKind::Deterministic { .. } | ProcessKind::NovelPoint)
    }
}

/// Number of distinct sets, as assigned by `set_of`, that `points` visit.
pub fn visited_sets(points: &[Point], set_of: &dyn Fn(Point) -> Option<usize>) -> usize {
    let mut seen = std::collections::HashSet::new();
    for &x in points {
        if let Some(k) = set_of(x) {
            seen.insert(k);
        }
    }
    seen.len()
}
