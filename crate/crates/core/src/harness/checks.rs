//! Empirical checkers for the expert-pool condition and the set-visit
//! condition.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::config::{C2Spec, Condition1Spec, ProcessSpec, TrialSpec};
use super::map_seeds;
use super::stream::Source;
use super::trial::base_factory;
use crate::concepts::{HypothesisSpace, Label, Point};
use crate::error::{Error, Result};
use crate::learners::experts::{index_of_set, ln_index, mistake_rounds};
use crate::learners::{Expert, ExpertSet};
use crate::processes::{visited_sets, ProcessModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// Definition of the statistic in `series`.
    pub statistic: String,
    pub threshold: String,
    /// `(n, mean statistic over seeds)`, ascending in `n`.
    pub series: Vec<(usize, f64)>,
    pub verdict: Verdict,
    pub note: String,
}

impl CheckReport {
    pub fn last(&self) -> Option<f64> {
        self.series.last().map(|p| p.1)
    }
}

/// Smallest index of an expert that is perfect on the first `n` rounds.
///
/// An expert whose set meets `1..=n` in exactly the base learner's mistake
/// rounds `M` is perfect on those rounds, and any other expert errs at the
/// first round of the symmetric difference. Among the perfect ones `M`
/// itself has the smallest key, hence the smallest index.
pub fn least_perfect_index(mistakes: &BTreeSet<u64>, n: u64) -> Result<BigUint> {
    let prefix: BTreeSet<u64> = mistakes.range(..=n).copied().collect();
    index_of_set(&prefix)
}

/// Confirms by simulation that no expert below `index` is perfect on
/// `pairs` and that expert `index` is.
pub fn scan_pool(space: &HypothesisSpace, pairs: &[(Point, Label)], index: u64) -> Result<bool> {
    let factory = base_factory(space);
    for i in 1..=index {
        let mut expert = Expert::new(ExpertSet::from_index(BigUint::from(i))?, &factory)?;
        let mut perfect = true;
        for &(x, y) in pairs {
            if expert.advise(x)? != y {
                perfect = false;
                break;
            }
        }
        if perfect != (i == index) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Condition 1 for one process: the mean over seeds of `ln(i_n)/n`, where
/// `i_n` is the least index of an expert perfect on the first `n` rounds.
/// The base learner is lenient SOA over the class.
pub fn check_condition1(
    space: &HypothesisSpace,
    process: &ProcessSpec,
    spec: &Condition1Spec,
    seed: u64,
) -> Result<CheckReport> {
    let mut grid = spec.n_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let max_n = *grid.last().ok_or_else(|| Error::Config("condition1.n_grid is empty".into()))?;
    let source = Source::new(space.clone(), process, &TrialSpec::default(), max_n)?;
    let factory = base_factory(space);
    let seeds: Vec<u64> = (0..spec.seeds as u64).map(|i| seed.wrapping_add(i)).collect();
    // per seed: per n, Some(ln i_n) or None past the pool cap
    let rows: Vec<Vec<Option<f64>>> = map_seeds(&seeds, |s| {
        let stream = source.stream(s)?;
        if !stream.realizable {
            return Err(Error::Config("condition 1 is checked on realizable streams".into()));
        }
        let pairs = stream.pairs();
        let mistakes = mistake_rounds(&factory, &pairs)?;
        grid.iter()
            .map(|&n| {
                let index = least_perfect_index(&mistakes, n as u64)?;
                if index.bits() > spec.max_index_bits {
                    return Ok(None);
                }
                if let Some(i) = index.to_u64().filter(|&i| i <= spec.scan_limit) {
                    if !scan_pool(space, &pairs[..n], i)? {
                        return Err(Error::Invariant(format!(
                            "expert {i} is not the first perfect expert on {n} rounds"
                        )));
                    }
                }
                Ok(Some(ln_index(&index)))
            })
            .collect()
    })?;
    let mut series = Vec::with_capacity(grid.len());
    let mut capped = false;
    for (j, &n) in grid.iter().enumerate() {
        let values: Vec<f64> = rows.iter().filter_map(|r| r[j]).collect();
        capped |= values.len() < rows.len();
        let mean = values.iter().map(|v| v / n as f64).sum::<f64>() / values.len().max(1) as f64;
        series.push((n, mean));
    }
    let envelope = spec.envelope / (max_n as f64).sqrt();
    let last_capped = rows.iter().any(|r| r.last().copied().flatten().is_none());
    let last = series.last().map_or(0.0, |p| p.1);
    let verdict = if last_capped {
        Verdict::Inconclusive
    } else if last <= envelope {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        check: "condition 1 per process".into(),
        statistic: "mean over seeds of ln(i_n)/n".into(),
        threshold: format!("{} / sqrt(n) = {envelope:.4} at n = {max_n}", spec.envelope),
        series,
        verdict,
        note: format!(
            "process {}, {} seeds, pool cap 2^{}{}",
            process.kind,
            spec.seeds,
            spec.max_index_bits,
            if capped { ", some indices beyond the pool cap" } else { "" }
        ),
    })
}

/// Assigns each point of a domain of `n` points to at most one set.
pub fn partition(spec: &C2Spec, n: usize) -> Result<Vec<Option<usize>>> {
    match spec.partition.as_str() {
        "singletons" => Ok((0..n).map(Some).collect()),
        "one" => Ok(vec![Some(0); n]),
        "blocks" => {
            if spec.block == 0 {
                return Err(Error::Config("c2.block must be positive".into()));
            }
            Ok((0..n).map(|x| Some(x / spec.block)).collect())
        }
        "explicit" => {
            let mut owner = vec![None; n];
            for (k, set) in spec.sets.iter().enumerate() {
                for &x in set {
                    let slot = owner
                        .get_mut(x)
                        .ok_or_else(|| Error::Config(format!("point {x} outside a domain of {n}")))?;
                    if let Some(other) = *slot {
                        if other != k {
                            return Err(Error::Config(format!("sets {other} and {k} overlap at point {x}")));
                        }
                    }
                    *slot = Some(k);
                }
            }
            Ok(owner)
        }
        other => Err(Error::Config(format!("unknown partition {other}"))),
    }
}

/// Visited-set counts `|{k : X_{1:T} meets A_k}|` averaged over seeds.
///
/// `process` describes the point process on a domain of `domain_len`
/// points; walk processes are not supported here.
pub fn check_c2(process: &ProcessSpec, domain_len: usize, spec: &C2Spec, seed: u64) -> Result<CheckReport> {
    let mut grid = spec.t_grid.clone();
    grid.sort_unstable();
    grid.dedup();
    let max_t = *grid.last().ok_or_else(|| Error::Config("c2.t_grid is empty".into()))?;
    let owner = partition(spec, domain_len)?;
    let model = match process.kind.as_str() {
        "iid" => ProcessModel::iid(process.weights.clone().unwrap_or_else(|| vec![1.0; domain_len]), 0)?,
        "markov" => match (&process.initial, &process.transitions) {
            (Some(i), Some(t)) => ProcessModel::markov(i.clone(), t.clone(), 0)?,
            _ => return Err(Error::Config("markov processes need initial and transitions".into())),
        },
        "deterministic" => {
            let seq = process.sequence.clone().unwrap_or_default();
            let points: Vec<Point> = seq.iter().cycle().take(max_t).map(|&i| Point(i)).collect();
            ProcessModel::deterministic(points, domain_len)?
        }
        "novel-point" => ProcessModel::novel_point(domain_len),
        other => return Err(Error::Config(format!("process {other} is not supported by the C2 check"))),
    };
    if model.domain_len() != domain_len {
        return Err(Error::Config(format!(
            "process covers {} points, the domain has {domain_len}",
            model.domain_len()
        )));
    }
    let seeds: Vec<u64> = (0..spec.seeds as u64).map(|i| seed.wrapping_add(i)).collect();
    let counts: Vec<Vec<usize>> = map_seeds(&seeds, |s| {
        let points = model.clone().with_seed(s).generate(max_t)?;
        let set_of = |x: Point| owner.get(x.0).copied().flatten();
        Ok(grid.iter().map(|&t| visited_sets(&points[..t], &set_of)).collect())
    })?;
    let series: Vec<(usize, f64)> = grid
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let mean = counts.iter().map(|c| c[j] as f64).sum::<f64>() / counts.len() as f64;
            (t, mean / t as f64)
        })
        .collect();
    let first = series[0].1;
    let last = series[series.len() - 1].1;
    let verdict = if last < spec.threshold && last <= first {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        check: "C2".into(),
        statistic: "mean over seeds of visited-set count / T".into(),
        threshold: format!("below {} at T = {max_t} and non-increasing", spec.threshold),
        series,
        verdict,
        note: format!("process {}, partition {}, {} seeds", process.kind, spec.partition, spec.seeds),
    })
}
