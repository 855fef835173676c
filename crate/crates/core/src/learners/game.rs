//! The VCL-game learner: plays the greedy strategy against tuples of past
//! observations and runs the weight learner on the induced partial class.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::weight::{check_reports, BatchReport, WeightConfig, WeightLearner};
use super::OnlineLearner;
use crate::concepts::{ConceptClass, Label, Point};
use crate::error::{Error, Result};
use crate::processes::ProcessOracle;
use crate::trees::{greedy_pattern, induced_partial_class, GameRecord, Pattern};

/// Default cap on the number of rounds the tuple search looks back over.
pub const DEFAULT_HISTORY_CAP: usize = 2000;

pub struct GameLearner {
    class: Arc<ConceptClass>,
    record: GameRecord,
    live: FixedBitSet,
    /// Distinct observed `(point, label)` pairs in order of first appearance.
    entries: Vec<(Point, Label)>,
    /// Entries already searched against the current record.
    checked: usize,
    points: Vec<Point>,
    engine: WeightLearner,
    oracle: Arc<dyn ProcessOracle>,
    config: WeightConfig,
    history_cap: usize,
    advancements: Vec<usize>,
    /// Ledgers of engines replaced at advancements.
    retired: Vec<BatchReport>,
}

impl std::fmt::Debug for GameLearner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GameLearner")
            .field("record", &self.record)
            .field("advancements", &self.advancements)
            .finish()
    }
}

impl GameLearner {
    pub fn new(class: Arc<ConceptClass>, oracle: Arc<dyn ProcessOracle>, config: WeightConfig) -> Result<Self> {
        if class.is_empty() {
            return Err(Error::State("the game learner needs a nonempty class".into()));
        }
        let record = GameRecord::new();
        let induced = Arc::new(induced_partial_class(&record, &class)?);
        let engine = WeightLearner::resumed(induced, oracle.clone(), config, Vec::new(), 0)?;
        Ok(GameLearner {
            live: class.everything(),
            class,
            record,
            entries: Vec::new(),
            checked: 0,
            points: Vec::new(),
            engine,
            oracle,
            config,
            history_cap: DEFAULT_HISTORY_CAP,
            advancements: Vec::new(),
            retired: Vec::new(),
        })
    }

    pub fn with_history_cap(mut self, cap: usize) -> Self {
        self.history_cap = cap;
        self
    }

    pub fn record(&self) -> &GameRecord {
        &self.record
    }

    /// Rounds at which the game advanced.
    pub fn advancements(&self) -> &[usize] {
        &self.advancements
    }

    /// Batch ledgers of every engine so far, oldest first.
    pub fn reports(&self) -> Vec<BatchReport> {
        let mut all = self.retired.clone();
        all.extend_from_slice(self.engine.reports());
        all
    }

    pub fn engine(&self) -> &WeightLearner {
        &self.engine
    }

    /// First ordered tuple of distinct-point entries, containing at least one
    /// entry not searched yet, on which the strategy answers with the
    /// observed labels.
    fn find_agreement(&self) -> Result<Option<Vec<(Point, Label)>>> {
        let k = self.record.current_k();
        if self.entries.len() < k || self.checked == self.entries.len() {
            return Ok(None);
        }
        let mut chosen = Vec::with_capacity(k);
        self.search(k, &mut chosen)
    }

    fn search(&self, k: usize, chosen: &mut Vec<usize>) -> Result<Option<Vec<(Point, Label)>>> {
        if chosen.len() == k {
            if chosen.iter().all(|&i| i < self.checked) {
                return Ok(None);
            }
            let tuple: Vec<Point> = chosen.iter().map(|&i| self.entries[i].0).collect();
            let labels: Vec<Label> = chosen.iter().map(|&i| self.entries[i].1).collect();
            if greedy_pattern(&self.class, &self.live, &tuple)? == Pattern::from_labels(&labels) {
                return Ok(Some(chosen.iter().map(|&i| self.entries[i]).collect()));
            }
            return Ok(None);
        }
        for i in 0..self.entries.len() {
            let x = self.entries[i].0;
            if chosen.iter().any(|&j| self.entries[j].0 == x) {
                continue;
            }
            chosen.push(i);
            let found = self.search(k, chosen)?;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn advance(&mut self, tuple: Vec<(Point, Label)>, t: usize) -> Result<()> {
        let points: Vec<Point> = tuple.iter().map(|p| p.0).collect();
        let labels: Vec<Label> = tuple.iter().map(|p| p.1).collect();
        self.record.record(points, Pattern::from_labels(&labels))?;
        for &(x, y) in &tuple {
            self.class.restrict_set(&mut self.live, x, y);
        }
        let induced = Arc::new(induced_partial_class(&self.record, &self.class)?);
        self.retired.extend_from_slice(self.engine.reports());
        self.engine = WeightLearner::resumed(induced, self.oracle.clone(), self.config, self.points.clone(), t - 1)?;
        self.advancements.push(t);
        self.checked = 0;
        Ok(())
    }
}

impl OnlineLearner for GameLearner {
    fn name(&self) -> &str {
        "alg1"
    }

    fn predict(&mut self, x: Point) -> Result<Label> {
        let t = self.points.len() + 1;
        if self.points.len() > self.history_cap {
            return Err(Error::size("tuple search history", self.points.len(), self.history_cap));
        }
        // once the version space is empty the game is won and the guard is off
        if self.live.count_ones(..) > 0 {
            match self.find_agreement()? {
                Some(tuple) => self.advance(tuple, t)?,
                None => self.checked = self.entries.len(),
            }
        }
        self.engine.predict(x)
    }

    fn observe(&mut self, x: Point, y: Label) -> Result<()> {
        self.engine.observe(x, y)?;
        self.points.push(x);
        if !self.entries.contains(&(x, y)) {
            self.entries.push((x, y));
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        check_reports(&self.retired)?;
        self.engine.check()
    }
}
