//! The partial-concept weight learner and its per-batch halving ledger.
//!
//! Rounds are grouped in batches: batch `m` ends at round `t(m) + t'` where
//! `t(m) = m(m+1)/2`. At round `t` the learner looks at the window from `t`
//! to the end of the batch, whose future part comes from process rollouts,
//! and predicts the label `y` maximizing the probability that a mistake on
//! `y` would at least halve the shattering weight of the version space.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::OnlineLearner;
use crate::concepts::{weight_of, ConceptClass, Label, Point, DEFAULT_WINDOW_CAP};
use crate::error::{Error, Result};
use crate::processes::rng::{split_seed, stream};
use crate::processes::ProcessOracle;
use crate::trees::vc_dimension;

/// Default number of rollouts per prediction.
pub const DEFAULT_ROLLOUTS: usize = 64;

pub fn batch_end(m: usize) -> usize {
    m * (m + 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightConfig {
    pub rollouts: usize,
    pub seed: u64,
    pub window_cap: usize,
}

impl Default for WeightConfig {
    fn default() -> Self {
        WeightConfig {
            rollouts: DEFAULT_ROLLOUTS,
            seed: 0,
            window_cap: DEFAULT_WINDOW_CAP,
        }
    }
}

/// Mistake accounting for one closed batch.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    /// Batch number `m`, which is also the batch length.
    pub batch: usize,
    pub first_round: usize,
    pub mistakes: usize,
    /// Mistakes after which the weight of the remaining window at least halved.
    pub halvings: usize,
    /// `d log2(m) + 1`.
    pub bound: f64,
    /// The version space was still nonempty when the batch closed, which
    /// the bound assumes.
    pub realizable: bool,
}

impl BatchReport {
    pub fn holds(&self) -> bool {
        !self.realizable || self.halvings as f64 <= self.bound + 1e-9
    }
}

#[derive(Clone, Debug)]
struct Ledger {
    vc: usize,
    start_live: FixedBitSet,
    first_round: usize,
    rounds: Vec<(Point, Label, bool)>,
    reports: Vec<BatchReport>,
}

pub struct WeightLearner {
    class: Arc<ConceptClass>,
    live: FixedBitSet,
    mistakes: Vec<(Point, Label)>,
    batch: usize,
    offset: usize,
    history: Vec<Point>,
    oracle: Arc<dyn ProcessOracle>,
    config: WeightConfig,
    pending: Option<(Point, Label)>,
    ledger: Ledger,
}

impl std::fmt::Debug for WeightLearner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightLearner")
            .field("batch", &self.batch)
            .field("offset", &self.offset)
            .field("mistakes", &self.mistakes)
            .finish()
    }
}

impl WeightLearner {
    pub fn new(class: Arc<ConceptClass>, oracle: Arc<dyn ProcessOracle>, config: WeightConfig) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::State("the weight learner needs a nonempty class".into()));
        }
        WeightLearner::resumed(class, oracle, config, Vec::new(), 0)
    }

    /// A fresh learner starting its first batch after `history`, with batch
    /// offset `offset`. The class may be empty; every prediction is then 0.
    pub fn resumed(
        class: Arc<ConceptClass>,
        oracle: Arc<dyn ProcessOracle>,
        config: WeightConfig,
        history: Vec<Point>,
        offset: usize,
    ) -> Result<Self> {
        if config.rollouts == 0 {
            return Err(Error::Config("the rollout count must be positive".into()));
        }
        let live = class.everything();
        let first_round = history.len() + 1;
        Ok(WeightLearner {
            ledger: Ledger {
                vc: vc_dimension(&class).unwrap_or(0),
                start_live: live.clone(),
                first_round,
                rounds: Vec::new(),
                reports: Vec::new(),
            },
            class,
            live,
            mistakes: Vec::new(),
            batch: 1,
            offset,
            history,
            oracle,
            config,
            pending: None,
        })
    }

    pub fn batch(&self) -> usize {
        self.batch
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn mistakes(&self) -> &[(Point, Label)] {
        &self.mistakes
    }

    pub fn class(&self) -> &Arc<ConceptClass> {
        &self.class
    }

    pub fn reports(&self) -> &[BatchReport] {
        &self.ledger.reports
    }

    /// Vote counts `(for 0, for 1)` over the rollouts at the current round.
    pub fn votes(&self, x: Point) -> Result<(usize, usize)> {
        self.class.domain().check(x)?;
        let t = self.history.len() + 1;
        let end = batch_end(self.batch) + self.offset;
        if end < t {
            return Err(Error::Invariant(format!("round {t} lies past the batch end {end}")));
        }
        let horizon = end - t;
        let runs = if self.oracle.is_deterministic() { 1 } else { self.config.rollouts };
        let mut observed = self.history.clone();
        observed.push(x);
        let mut zero_side = self.live.clone();
        self.class.restrict_set(&mut zero_side, x, Label::Zero);
        let mut one_side = self.live.clone();
        self.class.restrict_set(&mut one_side, x, Label::One);
        let (mut votes0, mut votes1) = (0, 0);
        for j in 0..runs {
            let seed = split_seed(self.config.seed, &[stream::ROLLOUT, t as u64, j as u64]);
            let mut window = vec![x];
            window.extend(self.oracle.rollout(&observed, horizon, seed)?);
            let cap = self.config.window_cap;
            let total = weight_of(&self.class, &self.live, &window, cap)?;
            let w0 = weight_of(&self.class, &zero_side, &window, cap)?;
            let w1 = weight_of(&self.class, &one_side, &window, cap)?;
            // predicting y is right when a mistake on y would halve the weight
            if 2 * w1 <= total {
                votes0 += 1;
            }
            if 2 * w0 <= total {
                votes1 += 1;
            }
        }
        Ok((votes0, votes1))
    }

    fn close_batch(&mut self) -> Result<()> {
        let ledger = &mut self.ledger;
        let window: Vec<Point> = ledger.rounds.iter().map(|r| r.0).collect();
        let mut live = ledger.start_live.clone();
        let mut halvings = 0;
        let mut mistakes = 0;
        for (i, &(x, y, mistake)) in ledger.rounds.iter().enumerate() {
            if !mistake {
                continue;
            }
            mistakes += 1;
            let before = weight_of(&self.class, &live, &window[i..], usize::MAX)?;
            self.class.restrict_set(&mut live, x, y);
            let after = weight_of(&self.class, &live, &window[i + 1..], usize::MAX)?;
            if 2 * after <= before {
                halvings += 1;
            }
        }
        let m = self.batch;
        ledger.reports.push(BatchReport {
            batch: m,
            first_round: ledger.first_round,
            mistakes,
            halvings,
            bound: ledger.vc as f64 * (m as f64).log2() + 1.0,
            realizable: live.count_ones(..) > 0,
        });
        ledger.start_live = self.live.clone();
        ledger.first_round += ledger.rounds.len();
        ledger.rounds.clear();
        Ok(())
    }
}

impl OnlineLearner for WeightLearner {
    fn name(&self) -> &str {
        "alg2"
    }

    fn predict(&mut self, x: Point) -> Result<Label> {
        let (votes0, votes1) = self.votes(x)?;
        let y = if votes1 > votes0 { Label::One } else { Label::Zero };
        self.pending = Some((x, y));
        Ok(y)
    }

    fn observe(&mut self, x: Point, y: Label) -> Result<()> {
        let (px, prediction) = self
            .pending
            .take()
            .ok_or_else(|| Error::State("observe called before predict".into()))?;
        if px != x {
            return Err(Error::State("observed a different point than the one predicted".into()));
        }
        let mistake = prediction != y;
        if mistake {
            self.mistakes.push((x, y));
            self.class.restrict_set(&mut self.live, x, y);
        }
        self.history.push(x);
        self.ledger.rounds.push((x, y, mistake));
        let t = self.history.len();
        if t >= batch_end(self.batch) + self.offset {
            self.close_batch()?;
            self.batch += 1;
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        check_reports(self.reports())
    }
}

/// Fails on the first batch whose halving count exceeds its bound.
pub fn check_reports(reports: &[BatchReport]) -> Result<()> {
    match reports.iter().find(|r| !r.holds()) {
        Some(r) => Err(Error::Invariant(format!(
            "batch {} starting at round {} had {} halving mistakes, above {:.3}",
            r.batch, r.first_round, r.halvings, r.bound
        ))),
        None => Ok(()),
    }
}
