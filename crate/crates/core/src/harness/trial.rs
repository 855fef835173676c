//! Trials: build a learner, run it on a stream, record a trace, and re-assert
//! the run-level invariants.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::{Config, LearnerSpec};
use super::map_seeds;
use super::stream::{build_space, comparator_flags, Source, Stream};
use crate::concepts::{HypothesisSpace, Label, Point, RealizabilityTracker};
use crate::error::{Error, Result};
use crate::learners::experts::{expert_pool, mistake_rounds};
use crate::learners::{
    shared_solver, Constant, Expert, ExpertSet, GameLearner, LearnerFactory, OnlineLearner, RegretSignal, Soa,
    Squint, SquintConfig, WeightConfig, WeightLearner, WeightedMajority,
};
use crate::processes::rng::{split_seed, stream};
use crate::processes::ProcessOracle;

/// One round of a trial. Flags are 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub point: String,
    pub y: u8,
    pub yhat: u8,
    pub mistake: u8,
    pub cum_mistakes: u64,
    pub cum_regret: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub learner: String,
    pub process: String,
    pub class: String,
    pub seed: u64,
    pub comparator: String,
    pub caps: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn mistakes(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.cum_mistakes)
    }

    pub fn regret(&self) -> i64 {
        self.rows.last().map_or(0, |r| r.cum_regret)
    }

    /// Mistake fraction over the first `n` rounds.
    pub fn mistake_rate(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        self.rows[n.min(self.len()) - 1].cum_mistakes as f64 / n as f64
    }
}

/// SOA in lenient mode, sharing one Littlestone memo across copies.
pub fn base_factory(space: &HypothesisSpace) -> LearnerFactory {
    match space {
        HypothesisSpace::Table(class) => {
            let class = class.clone();
            let solver = shared_solver(class.clone());
            Arc::new(move || Ok(Box::new(Soa::with_solver(class.clone(), solver.clone()).lenient()) as Box<dyn OnlineLearner>))
        }
        HypothesisSpace::AllFunctions(_) => {
            let space = space.clone();
            Arc::new(move || Ok(Box::new(Soa::new(&space).lenient()) as Box<dyn OnlineLearner>))
        }
    }
}

fn parse_label(bit: u8) -> Result<Label> {
    match bit {
        0 => Ok(Label::Zero),
        1 => Ok(Label::One),
        other => Err(Error::Config(format!("labels are 0 or 1, got {other}"))),
    }
}

pub fn build_learner(
    spec: &LearnerSpec,
    space: &HypothesisSpace,
    oracle: Arc<dyn ProcessOracle>,
    seed: u64,
) -> Result<Box<dyn OnlineLearner>> {
    let learner_seed = split_seed(seed, &[stream::LEARNER]);
    let weight_config = WeightConfig {
        rollouts: spec.rollouts,
        seed: learner_seed,
        window_cap: spec.window_cap,
    };
    let table = || {
        space
            .table()
            .cloned()
            .ok_or_else(|| Error::Config(format!("{} needs an extensional class", spec.name)))
    };
    Ok(match spec.name.as_str() {
        "soa" => Box::new(Soa::new(space)),
        "alg2" => Box::new(WeightLearner::new(table()?, oracle, weight_config)?),
        "alg1" => Box::new(GameLearner::new(table()?, oracle, weight_config)?.with_history_cap(spec.history_cap)),
        "wm" => Box::new(WeightedMajority::new(expert_pool(&base_factory(space), spec.experts_max)?)?),
        "squint" => {
            let signal = match spec.regret.as_str() {
                "expected" => RegretSignal::Expected,
                "realized" => RegretSignal::Realized,
                other => return Err(Error::Config(format!("unknown regret signal {other}"))),
            };
            let config = SquintConfig {
                randomized: spec.randomized,
                seed: learner_seed,
                signal,
            };
            Box::new(Squint::new(expert_pool(&base_factory(space), spec.experts_max)?, config)?)
        }
        "constant" => Box::new(Constant(parse_label(spec.label)?)),
        other => return Err(Error::Config(format!("unknown learner {other}"))),
    })
}

/// Predictions of `learner` on the stream, one round at a time. Realizable
/// streams are checked prefix by prefix.
pub fn run_learner(
    learner: &mut dyn OnlineLearner,
    space: &HypothesisSpace,
    points: &[Point],
    labels: &[Label],
    realizable: bool,
) -> Result<Vec<Label>> {
    let mut tracker = realizable.then(|| RealizabilityTracker::new(space));
    let mut out = Vec::with_capacity(points.len());
    for (&x, &y) in points.iter().zip(labels) {
        if let Some(tracker) = tracker.as_mut() {
            tracker.push(x, y)?;
        }
        out.push(learner.predict(x)?);
        learner.observe(x, y)?;
    }
    learner.check()?;
    Ok(out)
}

/// The expert flipping the base learner exactly at its mistake rounds must
/// reproduce every label. Returns that expert's set.
pub fn check_expert_reproduction(factory: &LearnerFactory, pairs: &[(Point, Label)]) -> Result<ExpertSet> {
    let set = ExpertSet::new(mistake_rounds(factory, pairs)?)?;
    let mut expert = Expert::new(set.clone(), factory)?;
    for (t, &(x, y)) in pairs.iter().enumerate() {
        if expert.advise(x)? != y {
            return Err(Error::Invariant(format!(
                "expert {set:?} disagrees with the label at round {}",
                t + 1
            )));
        }
    }
    Ok(set)
}

/// Runs one learner on one stream and builds its trace.
pub fn run_stream(
    spec: &LearnerSpec,
    space: &HypothesisSpace,
    stream: &Stream,
    comparator: &str,
    seed: u64,
    class_name: &str,
) -> Result<Trace> {
    let mut learner = build_learner(spec, space, stream.oracle.clone(), seed)?;
    let predictions = run_learner(learner.as_mut(), space, &stream.points, &stream.labels, stream.realizable)?;
    if stream.realizable && matches!(spec.name.as_str(), "wm" | "squint") {
        check_expert_reproduction(&base_factory(space), &stream.pairs())?;
    }
    let reference = comparator_flags(space, &stream.points, &stream.labels, comparator)?;
    let mut rows = Vec::with_capacity(stream.len());
    let (mut cum, mut regret) = (0u64, 0i64);
    for (i, ((&x, &y), &yhat)) in stream.points.iter().zip(&stream.labels).zip(&predictions).enumerate() {
        let mistake = y != yhat;
        cum += u64::from(mistake);
        regret += i64::from(mistake) - i64::from(reference[i]);
        rows.push(TraceRow {
            t: i + 1,
            point: space.domain().id(x).to_string(),
            y: y.as_u8(),
            yhat: yhat.as_u8(),
            mistake: u8::from(mistake),
            cum_mistakes: cum,
            cum_regret: regret,
        });
    }
    Ok(Trace {
        meta: TraceMeta {
            learner: spec.name.clone(),
            process: stream.process.clone(),
            class: class_name.to_string(),
            seed,
            comparator: comparator.to_string(),
            caps: format!(
                "rollouts={} experts_max={} history_cap={} window_cap={}",
                spec.rollouts, spec.experts_max, spec.history_cap, spec.window_cap
            ),
        },
        rows,
    })
}

/// Seeds `config.seed, config.seed + 1, ...` of a configuration.
pub fn trial_seeds(config: &Config) -> Vec<u64> {
    (0..config.trial.seeds as u64).map(|i| config.seed.wrapping_add(i)).collect()
}

pub fn run_trial(config: &Config, seed: u64) -> Result<Trace> {
    let space = build_space(&config.class)?;
    let source = Source::new(space, &config.process, &config.trial, config.trial.rounds)?;
    trial_from(config, &source, seed)
}

fn trial_from(config: &Config, source: &Source, seed: u64) -> Result<Trace> {
    let stream = source.stream(seed)?;
    run_stream(
        &config.learner,
        source.space(),
        &stream,
        &config.trial.comparator,
        seed,
        &config.class.describe(),
    )
}

/// All trials of a configuration, sorted by seed.
pub fn run_trials(config: &Config) -> Result<Vec<Trace>> {
    config.validate()?;
    let space = build_space(&config.class)?;
    let source = Source::new(space, &config.process, &config.trial, config.trial.rounds)?;
    map_seeds(&trial_seeds(config), |seed| trial_from(config, &source, seed))
}
