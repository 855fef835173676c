//! Hypotheses, partial hypotheses and finite concept classes.
//!
//! Classes are stored extensionally: every hypothesis is a pair of bit masks
//! over the domain (`defined`, `ones`), so domains are capped at
//! [`MAX_TABLE_DOMAIN`] points. Version spaces are bitsets over the
//! hypothesis list of a class.

mod classfile;
mod shatter;
mod space;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classfile::{parse_class_file, read_class_file, write_class_file};
pub use shatter::{count_shattered, for_each_shattered};
pub use space::{HypothesisSpace, RealizabilityTracker};

/// Largest domain an extensional class can range over.
pub const MAX_TABLE_DOMAIN: usize = 64;

/// Largest domain for which the `full` preset is materialized as a table.
pub const MAX_FULL_TABLE: usize = 16;

/// Default cap on the number of distinct window points handed to [`weight`].
pub const DEFAULT_WINDOW_CAP: usize = 20;

/// Index of a point inside its [`Domain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point(pub usize);

impl Point {
    pub fn index(self) -> usize {
        self.0
    }

    fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// A binary label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Label::One
        } else {
            Label::Zero
        }
    }

    pub fn bit(self) -> bool {
        self == Label::One
    }

    pub fn as_u8(self) -> u8 {
        self.bit() as u8
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Zero => Label::One,
            Label::One => Label::Zero,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Value of a partial hypothesis at a point: a label or `*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Zero,
    One,
    Undefined,
}

impl Value {
    pub fn label(self) -> Option<Label> {
        match self {
            Value::Zero => Some(Label::Zero),
            Value::One => Some(Label::One),
            Value::Undefined => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Value::Zero => '0',
            Value::One => '1',
            Value::Undefined => '*',
        }
    }
}

impl From<Label> for Value {
    fn from(label: Label) -> Self {
        match label {
            Label::Zero => Value::Zero,
            Label::One => Value::One,
        }
    }
}

/// An ordered finite instance space with printable point ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Domain {
    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::Domain("domain must contain at least one point".into()));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if id.is_empty() || id.chars().any(char::is_whitespace) {
                return Err(Error::Domain(format!("invalid point id {id:?}")));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate point id {id:?}")));
            }
        }
        Ok(Domain { ids, index })
    }

    /// Points named `1..=n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Domain::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.ids.len()).map(Point)
    }

    pub fn id(&self, x: Point) -> &str {
        &self.ids[x.0]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn lookup(&self, id: &str) -> Result<Point> {
        self.index
            .get(id)
            .copied()
            .map(Point)
            .ok_or_else(|| Error::Domain(format!("unknown point id {id:?}")))
    }

    pub fn check(&self, x: Point) -> Result<()> {
        if x.0 < self.ids.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "point index {} outside a domain of {} points",
                x.0,
                self.ids.len()
            )))
        }
    }
}

/// A (partial) hypothesis over a domain of at most 64 points.
///
/// A point outside `defined` evaluates to `*`. Total hypotheses are the
/// special case where `defined` covers the whole domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hypothesis {
    defined: u64,
    ones: u64,
}

impl Hypothesis {
    pub fn total(ones: u64, domain_len: usize) -> Self {
        let defined = full_mask(domain_len);
        Hypothesis {
            defined,
            ones: ones & defined,
        }
    }

    pub fn partial(defined: u64, ones: u64) -> Self {
        Hypothesis {
            defined,
            ones: ones & defined,
        }
    }

    pub fn from_values(values: &[Value]) -> Result<Self> {
        if values.len() > MAX_TABLE_DOMAIN {
            return Err(Error::size("hypothesis length", values.len(), MAX_TABLE_DOMAIN));
        }
        let mut defined = 0u64;
        let mut ones = 0u64;
        for (i, v) in values.iter().enumerate() {
            match v {
                Value::Zero => defined |= 1 << i,
                Value::One => {
                    defined |= 1 << i;
                    ones |= 1 << i;
                }
                Value::Undefined => {}
            }
        }
        Ok(Hypothesis { defined, ones })
    }

    pub fn defined_mask(&self) -> u64 {
        self.defined
    }

    pub fn ones_mask(&self) -> u64 {
        self.ones
    }

    pub fn value(&self, x: Point) -> Value {
        let bit = x.bit();
        if self.defined & bit == 0 {
            Value::Undefined
        } else if self.ones & bit != 0 {
            Value::One
        } else {
            Value::Zero
        }
    }

    pub fn agrees(&self, x: Point, y: Label) -> bool {
        let bit = x.bit();
        self.defined & bit != 0 && ((self.ones & bit != 0) == y.bit())
    }

    pub fn is_total(&self, domain_len: usize) -> bool {
        self.defined == full_mask(domain_len)
    }

    pub fn render(&self, domain_len: usize) -> String {
        (0..domain_len).map(|i| self.value(Point(i)).as_char()).collect()
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Which built-in family a class was generated from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// `h_a(x) = 1[x >= a]` for `a = 1..=n+1` over points `1..=n`.
    Thresholds,
    /// Indicators of single points.
    Singletons,
    /// Every total labeling of the domain.
    Full,
    /// Thresholds on the left block (zero on the right) together with every
    /// function on the right block that is constant on the left block.
    UnionSplit { left: usize },
    Custom,
}

/// A finite set of (partial) hypotheses over an explicit domain.
#[derive(Clone, Debug)]
pub struct ConceptClass {
    domain: Arc<Domain>,
    hypotheses: Vec<Hypothesis>,
    preset: Preset,
}

impl ConceptClass {
    pub fn new(domain: Arc<Domain>, hypotheses: Vec<Hypothesis>, preset: Preset) -> Result<Self> {
        if domain.len() > MAX_TABLE_DOMAIN {
            return Err(Error::size("domain size", domain.len(), MAX_TABLE_DOMAIN));
        }
        let mask = full_mask(domain.len());
        let mut seen = std::collections::HashSet::with_capacity(hypotheses.len());
        for h in &hypotheses {
            if h.defined & !mask != 0 {
                return Err(Error::Domain("hypothesis defined outside the domain".into()));
            }
            if !seen.insert(*h) {
                return Err(Error::Domain(format!(
                    "duplicate hypothesis {}",
                    h.render(domain.len())
                )));
            }
        }
        Ok(ConceptClass {
            domain,
            hypotheses,
            preset,
        })
    }

    pub fn thresholds(n: usize) -> Result<Self> {
        let domain = Arc::new(Domain::numbered(n)?);
        let hyps = (1..=n + 1)
            .map(|a| Hypothesis::total(full_mask(n) & !full_mask(a - 1), n))
            .collect();
        ConceptClass::new(domain, hyps, Preset::Thresholds)
    }

    pub fn singletons(n: usize) -> Result<Self> {
        let domain = Arc::new(Domain::numbered(n)?);
        let hyps = (0..n).map(|i| Hypothesis::total(1 << i, n)).collect();
        ConceptClass::new(domain, hyps, Preset::Singletons)
    }

    pub fn full(n: usize) -> Result<Self> {
        if n > MAX_FULL_TABLE {
            return Err(Error::size("full-class domain", n, MAX_FULL_TABLE));
        }
        let domain = Arc::new(Domain::numbered(n)?);
        let hyps = (0..1u64 << n).map(|bits| Hypothesis::total(bits, n)).collect();
        ConceptClass::new(domain, hyps, Preset::Full)
    }

    /// Split-domain union over `left` points `a1..` and `right` points `b1..`.
    pub fn union_split(left: usize, right: usize) -> Result<Self> {
        if right > MAX_FULL_TABLE {
            return Err(Error::size("union-split right block", right, MAX_FULL_TABLE));
        }
        let ids = (1..=left)
            .map(|i| format!("a{i}"))
            .chain((1..=right).map(|i| format!("b{i}")));
        let domain = Arc::new(Domain::new(ids)?);
        let n = left + right;
        let left_mask = full_mask(left);
        let mut hyps = Vec::new();
        let mut push = |h: Hypothesis| {
            if !hyps.contains(&h) {
                hyps.push(h);
            }
        };
        for a in 1..=left + 1 {
            push(Hypothesis::total(left_mask & !full_mask(a - 1), n));
        }
        for constant in [0, left_mask] {
            for bits in 0..1u64 << right {
                push(Hypothesis::total(constant | (bits << left), n));
            }
        }
        ConceptClass::new(domain, hyps, Preset::UnionSplit { left })
    }

    /// Builds a class by preset name (`thresholds`, `singletons`, `full`,
    /// `union-split`) and size parameters.
    pub fn preset(name: &str, params: &[usize]) -> Result<Self> {
        match (name, params) {
            ("thresholds", [n]) => ConceptClass::thresholds(*n),
            ("singletons", [n]) => ConceptClass::singletons(*n),
            ("full", [n]) => ConceptClass::full(*n),
            ("union-split", [l, r]) => ConceptClass::union_split(*l, *r),
            _ => Err(Error::Config(format!(
                "unknown preset {name} with parameters {params:?}"
            ))),
        }
    }

    /// Regenerates the preset the class claims to come from and compares tables.
    pub fn preset_consistent(&self) -> bool {
        let n = self.domain.len();
        let regenerated = match self.preset {
            Preset::Custom => return true,
            Preset::Thresholds => ConceptClass::thresholds(n),
            Preset::Singletons => ConceptClass::singletons(n),
            Preset::Full => ConceptClass::full(n),
            Preset::UnionSplit { left } if left <= n => ConceptClass::union_split(left, n - left),
            Preset::UnionSplit { .. } => return false,
        };
        match regenerated {
            Ok(other) => {
                let mut a = self.hypotheses.clone();
                let mut b = other.hypotheses;
                a.sort();
                b.sort();
                a == b
            }
            Err(_) => false,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn domain_arc(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn hypotheses(&self) -> &[Hypothesis] {
        &self.hypotheses
    }

    pub fn preset_tag(&self) -> Preset {
        self.preset
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    pub fn is_total(&self) -> bool {
        let n = self.domain.len();
        self.hypotheses.iter().all(|h| h.is_total(n))
    }

    /// Version space containing every hypothesis.
    pub fn everything(&self) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.hypotheses.len());
        set.insert_range(..);
        set
    }

    /// Removes from `set` every hypothesis that does not give `x` the label `y`.
    pub fn restrict_set(&self, set: &mut FixedBitSet, x: Point, y: Label) {
        for i in set.clone().ones() {
            if !self.hypotheses[i].agrees(x, y) {
                set.set(i, false);
            }
        }
    }

    /// Version space after `pairs`, as a bitset over [`Self::hypotheses`].
    pub fn version_space(&self, pairs: &[(Point, Label)]) -> Result<FixedBitSet> {
        let mut set = self.everything();
        for &(x, y) in pairs {
            self.domain.check(x)?;
            self.restrict_set(&mut set, x, y);
        }
        Ok(set)
    }

    /// The subclass selected by `set`, tagged as custom.
    pub fn subclass(&self, set: &FixedBitSet) -> ConceptClass {
        ConceptClass {
            domain: self.domain.clone(),
            hypotheses: set.ones().map(|i| self.hypotheses[i]).collect(),
            preset: Preset::Custom,
        }
    }

    /// `(defined, ones)` masks of the hypotheses in `set`.
    pub(crate) fn masks(&self, set: &FixedBitSet) -> Vec<(u64, u64)> {
        set.ones()
            .map(|i| (self.hypotheses[i].defined, self.hypotheses[i].ones))
            .collect()
    }
}

/// An ordered list of labeled points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledPrefix {
    pub pairs: Vec<(Point, Label)>,
}

impl LabeledPrefix {
    pub fn new(pairs: Vec<(Point, Label)>) -> Self {
        LabeledPrefix { pairs }
    }

    pub fn push(&mut self, x: Point, y: Label) {
        self.pairs.push((x, y));
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl From<Vec<(Point, Label)>> for LabeledPrefix {
    fn from(pairs: Vec<(Point, Label)>) -> Self {
        LabeledPrefix { pairs }
    }
}

pub fn evaluate(h: &Hypothesis, domain: &Domain, x: Point) -> Result<Value> {
    domain.check(x)?;
    Ok(h.value(x))
}

/// Some hypothesis of `class` labels every pair correctly (prefix semantics).
pub fn is_realizable(class: &ConceptClass, prefix: &LabeledPrefix) -> Result<bool> {
    Ok(class.version_space(&prefix.pairs)?.count_ones(..) > 0)
}

/// Version space of `class` after `prefix`. May be empty.
pub fn restrict(class: &ConceptClass, prefix: &LabeledPrefix) -> Result<ConceptClass> {
    let set = class.version_space(&prefix.pairs)?;
    let mut sub = class.subclass(&set);
    if prefix.is_empty() {
        sub.preset = class.preset;
    }
    Ok(sub)
}

/// Every binary pattern on `set` is realized by a hypothesis defined on all of
/// it. The empty set is shattered exactly when the class is nonempty.
pub fn shatters(class: &ConceptClass, set: &[Point]) -> Result<bool> {
    let mut mask = 0u64;
    for &x in set {
        class.domain.check(x)?;
        mask |= x.bit();
    }
    let size = mask.count_ones();
    let mut patterns = std::collections::HashSet::new();
    for h in &class.hypotheses {
        if h.defined & mask == mask {
            patterns.insert(h.ones & mask);
        }
    }
    if size == 0 {
        return Ok(!class.hypotheses.is_empty());
    }
    Ok(patterns.len() as u128 == 1u128 << size)
}

/// Number of subsets of the window's point set shattered by `class`.
pub fn weight(class: &ConceptClass, window: &[Point], cap: usize) -> Result<u64> {
    weight_of(class, &class.everything(), window, cap)
}

/// [`weight`] for the subclass `set` of `class`.
pub fn weight_of(class: &ConceptClass, set: &FixedBitSet, window: &[Point], cap: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &x in window {
        class.domain.check(x)?;
        mask |= x.bit();
    }
    let distinct = mask.count_ones() as usize;
    if distinct > cap {
        return Err(Error::size("window point count", distinct, cap));
    }
    Ok(count_shattered(&class.masks(set), mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize) -> Point {
        Point(i - 1)
    }

    fn lp(pairs: &[(usize, u8)]) -> LabeledPrefix {
        pairs
            .iter()
            .map(|&(x, y)| (p(x), Label::from_bit(y == 1)))
            .collect::<Vec<_>>()
            .into()
    }

    #[test]
    fn threshold_evaluation() {
        let c = ConceptClass::thresholds(3).unwrap();
        assert_eq!(c.len(), 4);
        let h2 = &c.hypotheses()[1];
        assert_eq!(evaluate(h2, c.domain(), p(1)).unwrap(), Value::Zero);
        assert_eq!(evaluate(h2, c.domain(), p(3)).unwrap(), Value::One);
        assert!(matches!(evaluate(h2, c.domain(), Point(7)), Err(Error::Domain(_))));
    }

    #[test]
    fn partial_hypothesis_evaluates_to_star() {
        let h = Hypothesis::from_values(&[Value::One, Value::Undefined]).unwrap();
        let d = Domain::numbered(2).unwrap();
        assert_eq!(evaluate(&h, &d, Point(1)).unwrap(), Value::Undefined);
        assert_eq!(h.render(2), "1*");
    }

    #[test]
    fn realizability_examples() {
        let c = ConceptClass::thresholds(3).unwrap();
        assert!(is_realizable(&c, &lp(&[(1, 0), (3, 1)])).unwrap());
        assert!(!is_realizable(&c, &lp(&[(1, 1), (3, 0)])).unwrap());
        assert!(is_realizable(&c, &LabeledPrefix::default()).unwrap());

        // the all-zero labeling of n-1 points is realizable by singletons
        let s = ConceptClass::singletons(5).unwrap();
        assert!(is_realizable(&s, &lp(&[(1, 0), (2, 0), (3, 0), (4, 0)])).unwrap());
    }

    #[test]
    fn restrict_examples() {
        let c = ConceptClass::thresholds(3).unwrap();
        let r = restrict(&c, &lp(&[(2, 1)])).unwrap();
        assert_eq!(r.hypotheses(), &c.hypotheses()[..2]);
        let same = restrict(&c, &LabeledPrefix::default()).unwrap();
        assert_eq!(same.hypotheses(), c.hypotheses());
        assert_eq!(same.preset_tag(), Preset::Thresholds);
        assert!(restrict(&c, &lp(&[(1, 1), (3, 0)])).unwrap().is_empty());
    }

    #[test]
    fn shattering_examples() {
        let full = ConceptClass::full(2).unwrap();
        assert!(shatters(&full, &[Point(0), Point(1)]).unwrap());
        let c = ConceptClass::thresholds(3).unwrap();
        assert!(!shatters(&c, &[p(1), p(3)]).unwrap());
        let empty = full.subclass(&FixedBitSet::with_capacity(4));
        assert!(!shatters(&empty, &[]).unwrap());
        assert!(shatters(&full, &[]).unwrap());
    }

    #[test]
    fn weight_examples() {
        let full = ConceptClass::full(2).unwrap();
        assert_eq!(weight(&full, &[Point(0), Point(1)], 20).unwrap(), 4);
        let mut one = FixedBitSet::with_capacity(4);
        one.insert(2);
        assert_eq!(weight(&full.subclass(&one), &[Point(0), Point(1)], 20).unwrap(), 1);
        let empty = full.subclass(&FixedBitSet::with_capacity(4));
        assert_eq!(weight(&empty, &[Point(0), Point(1)], 20).unwrap(), 0);
        // duplicates collapse
        assert_eq!(weight(&full, &[Point(0), Point(0), Point(1)], 20).unwrap(), 4);
    }

    #[test]
    fn weight_cap_is_enforced() {
        let c = ConceptClass::thresholds(30).unwrap();
        let window: Vec<Point> = c.domain().points().collect();
        match weight(&c, &window, 20) {
            Err(Error::Size { cap, got, .. }) => assert_eq!((cap, got), (20, 30)),
            other => panic!("expected size error, got {other:?}"),
        }
    }

    #[test]
    fn presets_regenerate() {
        for c in [
            ConceptClass::thresholds(5).unwrap(),
            ConceptClass::singletons(4).unwrap(),
            ConceptClass::full(3).unwrap(),
            ConceptClass::union_split(3, 2).unwrap(),
        ] {
            assert!(c.preset_consistent());
        }
        let mut c = ConceptClass::thresholds(3).unwrap();
        c.preset = Preset::Singletons;
        assert!(!c.preset_consistent());
    }

    #[test]
    fn union_split_counts() {
        // thresholds on 2 points (3) + functions on 1 point constant on the left (4),
        // sharing the all-zero and the left-all-one hypotheses
        assert_eq!(ConceptClass::union_split(2, 1).unwrap().len(), 5);
        assert_eq!(ConceptClass::union_split(4, 1).unwrap().len(), 7);
    }

    #[test]
    fn rejects_bad_classes() {
        assert!(Domain::new(Vec::<String>::new()).is_err());
        assert!(Domain::new(["a", "a"]).is_err());
        let d = Arc::new(Domain::numbered(2).unwrap());
        let h = Hypothesis::total(1, 2);
        assert!(ConceptClass::new(d, vec![h, h], Preset::Custom).is_err());
    }
}
