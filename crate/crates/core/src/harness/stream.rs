//! Labeled streams: classes and processes from their specs, target labels,
//! label noise and hindsight comparators.

use std::sync::Arc;

use rand::Rng;

use super::config::{ClassSpec, ProcessSpec, TrialSpec};
use crate::concepts::{read_class_file, ConceptClass, HypothesisSpace, Label, Point, Value};
use crate::error::{Error, Result};
use crate::processes::rng::{rng_for, stream};
use crate::processes::{
    littlestone_adversary, vcl_adversary, AdversaryTrace, LittlestoneWalkOracle, ProcessModel, ProcessOracle,
};
use crate::trees::{build_vcl_tree_nodes, littlestone_witness, LittlestoneTree, VclTree};

pub fn build_space(spec: &ClassSpec) -> Result<HypothesisSpace> {
    if let Some(path) = &spec.file {
        return Ok(HypothesisSpace::from(read_class_file(path)?));
    }
    match (spec.preset.as_str(), spec.params.as_slice()) {
        ("all-functions", [n]) => HypothesisSpace::all_functions(*n),
        (name, params) => Ok(HypothesisSpace::from(ConceptClass::preset(name, params)?)),
    }
}

/// One labeled trial stream.
#[derive(Clone)]
pub struct Stream {
    pub points: Vec<Point>,
    pub labels: Vec<Label>,
    /// Conditional rollouts of the point process, for the weight learners.
    pub oracle: Arc<dyn ProcessOracle>,
    /// Labels come from a member of the class, so every prefix must be realizable.
    pub realizable: bool,
    pub process: String,
    pub adversary: Option<AdversaryTrace>,
}

impl Stream {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pairs(&self) -> Vec<(Point, Label)> {
        self.points.iter().copied().zip(self.labels.iter().copied()).collect()
    }
}

enum Kind {
    Model(ProcessModel),
    /// Cycled to the round count.
    Sequence(Vec<Point>),
    Littlestone(LittlestoneTree),
    Vcl(VclTree),
}

/// Everything shared by the trials of one configuration; streams differ
/// only by seed.
pub struct Source {
    space: HypothesisSpace,
    kind: Kind,
    rounds: usize,
    target: Option<usize>,
    noise: f64,
    name: String,
}

impl Source {
    pub fn new(space: HypothesisSpace, process: &ProcessSpec, trial: &TrialSpec, rounds: usize) -> Result<Self> {
        let n = space.domain().len();
        let kind = match process.kind.as_str() {
            "iid" => {
                let weights = process.weights.clone().unwrap_or_else(|| vec![1.0; n]);
                check_len(weights.len(), n, "process.weights")?;
                Kind::Model(ProcessModel::iid(weights, 0)?)
            }
            "markov" => {
                let (Some(initial), Some(transitions)) = (&process.initial, &process.transitions) else {
                    return Err(Error::Config("markov processes need initial and transitions".into()));
                };
                check_len(initial.len(), n, "process.initial")?;
                Kind::Model(ProcessModel::markov(initial.clone(), transitions.clone(), 0)?)
            }
            "deterministic" => {
                let seq = process
                    .sequence
                    .as_ref()
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| Error::Config("deterministic processes need a nonempty sequence".into()))?;
                let points: Vec<Point> = seq.iter().cycle().take(rounds).map(|&i| Point(i)).collect();
                ProcessModel::deterministic(points.clone(), n)?;
                Kind::Sequence(points)
            }
            "novel-point" => Kind::Model(ProcessModel::novel_point(n)),
            "littlestone-walk" => Kind::Littlestone(littlestone_witness(&space, process.depth.unwrap_or(rounds))?),
            "vcl-walk" => Kind::Vcl(build_vcl_tree_nodes(&space, process.depth.unwrap_or(5))?),
            other => return Err(Error::Config(format!("unknown process kind {other}"))),
        };
        if let Some(t) = trial.target {
            let len = space.table().map_or(usize::MAX, |c| c.len());
            if t >= len {
                return Err(Error::Config(format!("target index {t} outside a class of {len}")));
            }
        }
        Ok(Source {
            space,
            kind,
            rounds,
            target: trial.target,
            noise: trial.noise,
            name: process.kind.clone(),
        })
    }

    pub fn space(&self) -> &HypothesisSpace {
        &self.space
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn vcl_tree(&self) -> Option<&VclTree> {
        match &self.kind {
            Kind::Vcl(t) => Some(t),
            _ => None,
        }
    }

    pub fn stream(&self, seed: u64) -> Result<Stream> {
        let n = self.space.domain().len();
        let (points, labels, oracle, adversary): (Vec<Point>, Option<Vec<Label>>, Arc<dyn ProcessOracle>, _) =
            match &self.kind {
                Kind::Model(m) => {
                    let m = m.clone().with_seed(seed);
                    (m.generate(self.rounds)?, None, Arc::new(m), None)
                }
                Kind::Sequence(seq) => (seq.clone(), None, Arc::new(ProcessModel::deterministic(seq.clone(), n)?), None),
                Kind::Littlestone(tree) => {
                    let trace = littlestone_adversary(tree, &self.space, self.rounds, seed)?;
                    let oracle = Arc::new(LittlestoneWalkOracle::new(tree.clone()));
                    (trace.points(), Some(trace.rows.iter().map(|r| r.y).collect()), oracle, Some(trace))
                }
                Kind::Vcl(tree) => {
                    let mut trace = vcl_adversary(tree, seed)?;
                    if self.rounds > trace.len() {
                        return Err(Error::Infeasible(format!(
                            "{} rounds requested from a VCL walk of {} points",
                            self.rounds,
                            trace.len()
                        )));
                    }
                    trace.rows.truncate(self.rounds);
                    let oracle = Arc::new(ProcessModel::deterministic(trace.points(), n)?);
                    (trace.points(), Some(trace.rows.iter().map(|r| r.y).collect()), oracle, Some(trace))
                }
            };
        let mut labels = match labels {
            Some(l) => l,
            None => self.target_labels(&points, seed)?,
        };
        if self.noise > 0.0 {
            let mut rng = rng_for(seed, &[stream::NOISE]);
            for y in &mut labels {
                if rng.gen::<f64>() < self.noise {
                    *y = y.flip();
                }
            }
        }
        Ok(Stream {
            points,
            labels,
            oracle,
            realizable: self.noise == 0.0,
            process: self.name.clone(),
            adversary,
        })
    }

    fn target_labels(&self, points: &[Point], seed: u64) -> Result<Vec<Label>> {
        match &self.space {
            HypothesisSpace::Table(class) => {
                if class.is_empty() {
                    return Err(Error::Config("cannot draw a target from an empty class".into()));
                }
                let i = self
                    .target
                    .unwrap_or_else(|| rng_for(seed, &[stream::TARGET]).gen_range(0..class.len()));
                let h = &class.hypotheses()[i];
                points
                    .iter()
                    .map(|&x| match h.value(x) {
                        Value::Undefined => Err(Error::Config(format!(
                            "target hypothesis {i} is undefined at point {}",
                            class.domain().id(x)
                        ))),
                        v => Ok(v.label().expect("defined")),
                    })
                    .collect()
            }
            HypothesisSpace::AllFunctions(_) => Ok(points
                .iter()
                .map(|&x| Label::from_bit(rng_for(seed, &[stream::TARGET, x.0 as u64]).gen()))
                .collect()),
        }
    }
}

fn check_len(got: usize, want: usize, what: &str) -> Result<()> {
    if got != want {
        return Err(Error::Config(format!("{what} has {got} entries for a domain of {want}")));
    }
    Ok(())
}

/// Per-round mistakes of the comparator: `truth` never errs, `best` is the
/// member of the class with the fewest mistakes on the whole stream (ties to
/// the lowest index). Undefined values count as mistakes.
pub fn comparator_flags(space: &HypothesisSpace, points: &[Point], labels: &[Label], which: &str) -> Result<Vec<bool>> {
    match which {
        "truth" => Ok(vec![false; points.len()]),
        "best" => match space {
            HypothesisSpace::Table(class) => {
                if class.is_empty() {
                    return Err(Error::Config("the best comparator needs a nonempty class".into()));
                }
                let flags = |h: &crate::concepts::Hypothesis| -> Vec<bool> {
                    points.iter().zip(labels).map(|(&x, &y)| !h.agrees(x, y)).collect()
                };
                let best = class
                    .hypotheses()
                    .iter()
                    .min_by_key(|h| flags(h).iter().filter(|&&f| f).count())
                    .expect("nonempty");
                Ok(flags(best))
            }
            // per-point majority in hindsight, ties to 0
            HypothesisSpace::AllFunctions(d) => {
                let mut ones = vec![0i64; d.len()];
                for (&x, &y) in points.iter().zip(labels) {
                    ones[x.0] += if y == Label::One { 1 } else { -1 };
                }
                Ok(points
                    .iter()
                    .zip(labels)
                    .map(|(&x, &y)| Label::from_bit(ones[x.0] > 0) != y)
                    .collect())
            }
        },
        other => Err(Error::Config(format!("unknown comparator {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial() -> TrialSpec {
        TrialSpec::default()
    }

    #[test]
    fn streams_are_reproducible_and_realizable() {
        let space = build_space(&ClassSpec::default()).unwrap();
        let source = Source::new(space.clone(), &ProcessSpec::default(), &trial(), 50).unwrap();
        let a = source.stream(4).unwrap();
        assert_eq!(a.pairs(), source.stream(4).unwrap().pairs());
        assert!(space.is_realizable(&a.pairs()).unwrap());
        assert_ne!(a.pairs(), source.stream(5).unwrap().pairs());
    }

    #[test]
    fn deterministic_sequences_cycle() {
        let space = build_space(&ClassSpec::preset("full", &[3])).unwrap();
        let mut p = ProcessSpec::kind("deterministic");
        p.sequence = Some(vec![2, 0]);
        let s = Source::new(space, &p, &trial(), 5).unwrap().stream(0).unwrap();
        assert_eq!(s.points, vec![Point(2), Point(0), Point(2), Point(0), Point(2)]);
        assert!(s.oracle.is_deterministic());
    }

    #[test]
    fn bad_specs() {
        let space = build_space(&ClassSpec::default()).unwrap();
        for kind in ["markov", "deterministic", "bogus"] {
            assert!(matches!(
                Source::new(space.clone(), &ProcessSpec::kind(kind), &trial(), 5),
                Err(Error::Config(_))
            ));
        }
        let mut t = trial();
        t.target = Some(99);
        assert!(Source::new(space.clone(), &ProcessSpec::default(), &t, 5).is_err());
        let short = Source::new(space, &ProcessSpec::kind("novel-point"), &trial(), 9).unwrap();
        assert!(matches!(short.stream(0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn noise_breaks_realizability_flag() {
        let space = build_space(&ClassSpec::default()).unwrap();
        let mut t = trial();
        t.noise = 0.5;
        let s = Source::new(space, &ProcessSpec::default(), &t, 40).unwrap().stream(1).unwrap();
        assert!(!s.realizable);
    }

    #[test]
    fn comparators() {
        let space = build_space(&ClassSpec::preset("thresholds", &[3])).unwrap();
        let points = [Point(0), Point(2), Point(0)];
        let labels = [Label::One, Label::Zero, Label::Zero];
        assert_eq!(comparator_flags(&space, &points, &labels, "truth").unwrap(), vec![false; 3]);
        // best threshold is all-zero with one mistake
        let best = comparator_flags(&space, &points, &labels, "best").unwrap();
        assert_eq!(best.iter().filter(|&&f| f).count(), 1);
        let all = HypothesisSpace::all_functions(3).unwrap();
        assert_eq!(comparator_flags(&all, &points, &labels, "best").unwrap(), vec![true, false, false]);
        assert!(comparator_flags(&space, &points, &labels, "nope").is_err());
    }
}
