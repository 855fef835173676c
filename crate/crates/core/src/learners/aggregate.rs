//! Aggregation over countable expert pools: weighted majority with the prior
//! `1/(i(i+1))`, and Squint over a finite grid of learning rates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::experts::Expert;
use super::OnlineLearner;
use crate::concepts::{Label, Point};
use crate::error::{Error, Result};
use crate::processes::rng::{rng_for, stream};

/// `ln(1/(i(i+1)))` for the 1-based expert index `i`.
pub fn ln_prior(i: usize) -> f64 {
    let i = i as f64;
    -(i.ln() + (i + 1.0).ln())
}

/// Weighted-majority weights stored as `log2` prior plus a halving count.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    log2_prior: Vec<f64>,
    halvings: Vec<u64>,
}

impl WeightVector {
    /// `w_i = 1/(i(i+1))` for `i = 1..=n`.
    pub fn harmonic(n: usize) -> Self {
        WeightVector {
            log2_prior: (1..=n).map(|i| ln_prior(i) / std::f64::consts::LN_2).collect(),
            halvings: vec![0; n],
        }
    }

    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Numeric("weights must be finite and positive".into()));
        }
        Ok(WeightVector {
            log2_prior: weights.iter().map(|w| w.log2()).collect(),
            halvings: vec![0; weights.len()],
        })
    }

    pub fn len(&self) -> usize {
        self.log2_prior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log2_prior.is_empty()
    }

    fn log2_weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.log2_prior.iter().zip(&self.halvings).map(|(p, &h)| p - h as f64)
    }

    pub fn normalized(&self) -> Vec<f64> {
        let max = self.log2_weights().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = self.log2_weights().map(|l| (l - max).exp2()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    /// Prior weight of expert `i` (0-based), as `log2(1/w_i^0)`.
    pub fn log2_inverse_prior(&self, i: usize) -> f64 {
        -self.log2_prior[i]
    }

    pub fn halvings(&self) -> &[u64] {
        &self.halvings
    }
}

/// Weighted vote: 1 iff the normalized mass on 1 is at least one half.
pub fn wm_predict(weights: &WeightVector, advice: &[Label]) -> Result<Label> {
    if weights.is_empty() {
        return Err(Error::State("weighted majority needs at least one expert".into()));
    }
    if advice.len() != weights.len() {
        return Err(Error::State("one prediction per expert is required".into()));
    }
    let mass: f64 = weights
        .normalized()
        .iter()
        .zip(advice)
        .filter(|(_, &a)| a == Label::One)
        .map(|(w, _)| w)
        .sum();
    Ok(Label::from_bit(mass >= 0.5))
}

/// Predicts, then halves every expert that disagrees with `y`.
pub fn wm_step(weights: &mut WeightVector, advice: &[Label], y: Label) -> Result<Label> {
    let prediction = wm_predict(weights, advice)?;
    for (h, &a) in weights.halvings.iter_mut().zip(advice) {
        if a != y {
            *h += 1;
        }
    }
    Ok(prediction)
}

/// The smallest `3 m_i + 3 log2(1/w_i^0)` over the pool, with its index.
pub fn wm_bound(weights: &WeightVector) -> (f64, usize) {
    (0..weights.len())
        .map(|i| (3.0 * weights.halvings[i] as f64 + 3.0 * weights.log2_inverse_prior(i), i))
        .fold((f64::INFINITY, 0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Weighted majority over an expert pool.
pub struct WeightedMajority {
    experts: Vec<Expert>,
    weights: WeightVector,
    advice: Vec<Label>,
    pending: Option<Label>,
    mistakes: u64,
}

impl WeightedMajority {
    pub fn new(experts: Vec<Expert>) -> Result<Self> {
        if experts.is_empty() {
            return Err(Error::State("weighted majority needs at least one expert".into()));
        }
        Ok(WeightedMajority {
            weights: WeightVector::harmonic(experts.len()),
            experts,
            advice: Vec::new(),
            pending: None,
            mistakes: 0,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn mistakes(&self) -> u64 {
        self.mistakes
    }

    /// Fails with an invariant error if the mistake bound is violated.
    pub fn check_bound(&self) -> Result<()> {
        let (bound, i) = wm_bound(&self.weights);
        if self.mistakes as f64 > bound + 1e-9 {
            return Err(Error::Invariant(format!(
                "weighted majority made {} mistakes, above the bound {bound:.3} from expert {}",
                self.mistakes,
                i + 1
            )));
        }
        Ok(())
    }
}

impl OnlineLearner for WeightedMajority {
    fn name(&self) -> &str {
        "wm"
    }

    fn predict(&mut self, x: Point) -> Result<Label> {
        self.advice = self.experts.iter_mut().map(|e| e.advise(x)).collect::<Result<_>>()?;
        let y = wm_predict(&self.weights, &self.advice)?;
        self.pending = Some(y);
        Ok(y)
    }

    fn observe(&mut self, _x: Point, y: Label) -> Result<()> {
        let prediction = self
            .pending
            .take()
            .ok_or_else(|| Error::State("observe called before predict".into()))?;
        wm_step(&mut self.weights, &self.advice, y)?;
        if prediction != y {
            self.mistakes += 1;
        }
        self.check_bound()
    }

    fn check(&self) -> Result<()> {
        self.check_bound()
    }
}

/// Size of the learning-rate grid `2^-1, ..., 2^-30`.
pub const ETA_GRID: usize = 30;

/// Which per-round regret feeds the Squint statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RegretSignal {
    /// Loss of the mixture minus the expert's loss, in `[-1, 1]`.
    #[default]
    Expected,
    /// Loss of the actual prediction minus the expert's loss, in `{-1, 0, 1}`.
    Realized,
}

/// Squint statistics: cumulative regret `R_i` and variation `V_i` per expert.
#[derive(Clone, Debug, PartialEq)]
pub struct SquintState {
    ln_prior: Vec<f64>,
    regret: Vec<f64>,
    variation: Vec<f64>,
}

impl SquintState {
    pub fn new(n: usize) -> Self {
        SquintState {
            ln_prior: (1..=n).map(ln_prior).collect(),
            regret: vec![0.0; n],
            variation: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.ln_prior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_prior.is_empty()
    }

    pub fn regret(&self) -> &[f64] {
        &self.regret
    }

    pub fn variation(&self) -> &[f64] {
        &self.variation
    }

    /// Normalized mixture weights.
    pub fn weights(&self) -> Result<Vec<f64>> {
        let logs: Vec<f64> = (0..self.len())
            .map(|i| {
                let terms = (1..=ETA_GRID).map(|j| {
                    let eta = (-(j as f64)).exp2();
                    eta.ln() + eta * self.regret[i] - eta * eta * self.variation[i]
                });
                self.ln_prior[i] - (ETA_GRID as f64).ln() + log_sum_exp(terms)
            })
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !max.is_finite() {
            return Err(Error::Numeric(format!("log weight maximum is {max}")));
        }
        let raw: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Numeric(format!("weight total is {total}")));
        }
        Ok(raw.into_iter().map(|w| w / total).collect())
    }

    /// Mixture probability of label 1.
    pub fn prob_one(&self, advice: &[Label]) -> Result<f64> {
        if advice.len() != self.len() || self.is_empty() {
            return Err(Error::State("one prediction per expert is required".into()));
        }
        Ok(self
            .weights()?
            .iter()
            .zip(advice)
            .filter(|(_, &a)| a == Label::One)
            .map(|(w, _)| w)
            .sum())
    }

    /// Updates `R` and `V` after label `y`. `learner_loss` is the loss fed in
    /// as the learner's side of the regret.
    pub fn update(&mut self, advice: &[Label], y: Label, learner_loss: f64) {
        for (i, &a) in advice.iter().enumerate() {
            let r = learner_loss - f64::from(u8::from(a != y));
            self.regret[i] += r;
            self.variation[i] += r * r;
        }
    }
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + v.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SquintConfig {
    /// Sample the prediction from the mixture instead of taking the majority.
    pub randomized: bool,
    pub seed: u64,
    pub signal: RegretSignal,
}

/// Squint over an expert pool with the prior `1/(i(i+1))`.
pub struct Squint {
    experts: Vec<Expert>,
    state: SquintState,
    config: SquintConfig,
    rng: ChaCha8Rng,
    advice: Vec<Label>,
    pending: Option<(Label, f64)>,
    expected_loss: f64,
}

impl Squint {
    pub fn new(experts: Vec<Expert>, config: SquintConfig) -> Result<Self> {
        if experts.is_empty() {
            return Err(Error::State("Squint needs at least one expert".into()));
        }
        Ok(Squint {
            state: SquintState::new(experts.len()),
            experts,
            rng: rng_for(config.seed, &[stream::LEARNER]),
            config,
            advice: Vec::new(),
            pending: None,
            expected_loss: 0.0,
        })
    }

    pub fn state(&self) -> &SquintState {
        &self.state
    }

    /// Cumulative loss of the mixture.
    pub fn expected_loss(&self) -> f64 {
        self.expected_loss
    }
}

/// Decision rule shared by the pool learner and bare benchmarks.
pub fn squint_decide(p_one: f64, randomized: bool, rng: &mut impl Rng) -> Label {
    if randomized {
        Label::from_bit(rng.gen::<f64>() < p_one)
    } else {
        Label::from_bit(p_one >= 0.5)
    }
}

impl OnlineLearner for Squint {
    fn name(&self) -> &str {
        "squint"
    }

    fn predict(&mut self, x: Point) -> Result<Label> {
        self.advice = self.experts.iter_mut().map(|e| e.advise(x)).collect::<Result<_>>()?;
        let p = self.state.prob_one(&self.advice)?;
        let y = squint_decide(p, self.config.randomized, &mut self.rng);
        self.pending = Some((y, p));
        Ok(y)
    }

    fn observe(&mut self, _x: Point, y: Label) -> Result<()> {
        let (prediction, p) = self
            .pending
            .take()
            .ok_or_else(|| Error::State("observe called before predict".into()))?;
        let mixture = if y == Label::One { 1.0 - p } else { p };
        self.expected_loss += mixture;
        let loss = match self.config.signal {
            RegretSignal::Expected => mixture,
            RegretSignal::Realized => f64::from(u8::from(prediction != y)),
        };
        self.state.update(&self.advice, y, loss);
        Ok(())
    }
}
